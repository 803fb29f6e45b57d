#include "tmrpca/synth_gen.hpp"

#include <doctest.h>

#include <Eigen/SVD>

using namespace tmrpca;

namespace {

int exact_rank(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s[i] > 1e-9 * s[0];
  return r;
}

double sample_sd(const Matrix& m) {
  const double mean = m.mean();
  return std::sqrt((m.array() - mean).square().sum() / static_cast<double>(m.size() - 1));
}

}  // namespace

TEST_CASE("generated matrices have the requested structure") {
  SynthSpec spec;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    spec.seed = seed;
    const auto gt = generate(spec);
    CHECK(gt.X.rows() == spec.rows);
    CHECK(gt.X.cols() == spec.cols);
    CHECK(exact_rank(gt.A_true) == spec.rank);
    const double density = static_cast<double>((gt.E_true.array() != 0.0).count()) / gt.E_true.size();
    CHECK(density >= 0.04);
    CHECK(density <= 0.06);
    CHECK((gt.E_true.array() >= 0.0).all());
    CHECK((gt.X.values() - (gt.A_true + gt.E_true + gt.N_true)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((gt.X.values().array() >= 0.0).all());
    CHECK(sample_sd(gt.N_true) == doctest::Approx(1.0).epsilon(0.10));
  }
}

TEST_CASE("generation is reproducible from the seed") {
  SynthSpec spec;
  spec.rows = 100;
  spec.cols = 9;
  spec.seed = 77;
  const auto a = generate(spec);
  const auto b = generate(spec);
  CHECK(a.X.values() == b.X.values());
  CHECK(a.E_true == b.E_true);
  spec.seed = 78;
  CHECK_FALSE(generate(spec).X.values() == a.X.values());
}

TEST_CASE("degenerate and invalid specs") {
  SynthSpec spec;
  spec.rows = 48;
  spec.cols = 1;
  spec.rank = 1;
  spec.density = 0.0;
  spec.noise_sigmas = {0.0};
  const auto gt = generate(spec);
  CHECK(exact_rank(gt.A_true) == 1);
  CHECK(gt.E_true.isZero(0.0));
  CHECK(gt.N_true.isZero(0.0));
  CHECK(gt.X.values() == gt.A_true);

  SynthSpec bad;
  bad.rank = 0;
  CHECK_THROWS_AS(generate(bad), Error);
  bad = {};
  bad.density = 1.0;
  CHECK_THROWS_AS(generate(bad), Error);
  bad = {};
  bad.noise_sigmas = {1.0, 2.0};
  CHECK_THROWS_AS(generate(bad), Error);
  bad = {};
  bad.baseline = 1.0;  // below 6 sigma
  CHECK_THROWS_AS(generate(bad), Error);
}

TEST_CASE("per-column noise levels") {
  SynthSpec spec;
  spec.rows = 2000;
  spec.cols = 3;
  spec.rank = 1;
  spec.density = 0.0;
  spec.noise_sigmas = {1.0, 3.0, 10.0};
  const auto gt = generate(spec);
  for (int j = 0; j < 3; ++j)
    CHECK(sample_sd(gt.N_true.col(j)) == doctest::Approx(spec.noise_sigmas[j]).epsilon(0.10));
}

TEST_CASE("synthetic OD labels") {
  const auto labels = synthetic_od_labels(5);
  REQUIRE(labels.size() == 5);
  CHECK(labels[0] == "P1→P1");
  CHECK(labels[1] == "P1→P2");
  CHECK(labels[2] == "P1→P3");
  CHECK(labels[3] == "P2→P1");
}

#include "tmrpca/rpca_apg.hpp"
#include "tmrpca/synth_gen.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <random>

using namespace tmrpca;

namespace {

Matrix random_matrix(int rows, int cols, std::uint64_t seed, double sd = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, sd);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

// argmin_z eps|z| + (z - x)^2 / 2 over a fine grid, refined once.
double grid_prox(double x, double eps) {
  auto f = [&](double z) { return eps * std::abs(z) + 0.5 * (z - x) * (z - x); };
  double best = 0.0;
  double step = 1e-3;
  double lo = -std::abs(x) - 1.0, hi = std::abs(x) + 1.0;
  for (int pass = 0; pass < 4; ++pass) {
    double best_f = f(best);
    for (double z = lo; z <= hi; z += step) {
      if (f(z) < best_f) {
        best_f = f(z);
        best = z;
      }
    }
    lo = best - step;
    hi = best + step;
    step /= 1000.0;
  }
  return best;
}

Matrix svt_oracle(const Matrix& m, double eps) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.transpose() * m);
  const Vector s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Vector scale(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) scale[i] = s[i] > eps ? (s[i] - eps) / s[i] : 0.0;
  return m * es.eigenvectors() * scale.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

TEST_CASE("soft_threshold") {
  Matrix m(1, 5);
  m << 3, -3, 0.5, -0.5, 0;
  const Matrix s = soft_threshold(m, 1.0);
  CHECK(s(0, 0) == 2.0);
  CHECK(s(0, 1) == -2.0);
  CHECK(s(0, 2) == 0.0);
  CHECK(s(0, 3) == 0.0);
  CHECK(s(0, 4) == 0.0);
  CHECK_THROWS_AS(soft_threshold(m, 0.0), Error);
  CHECK_THROWS_AS(soft_threshold(m, -1.0), Error);

  for (double eps : {0.1, 1.0, 10.0}) {
    const Matrix r = random_matrix(4, 4, 5, 5.0);
    const Matrix out = soft_threshold(r, eps);
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      CHECK(std::abs(out.data()[i] - grid_prox(r.data()[i], eps)) <= 1e-6);
      CHECK(std::abs(out.data()[i]) <= std::abs(r.data()[i]));
    }
  }
}

TEST_CASE("singular_value_threshold") {
  SUBCASE("diagonal input") {
    Matrix m = Matrix::Zero(3, 3);
    m.diagonal() << 5, 2, 0.5;
    const auto r = singular_value_threshold(m, 1.0);
    CHECK(r.rank == 2);
    CHECK(r.value(0, 0) == doctest::Approx(4.0));
    CHECK(r.value(1, 1) == doctest::Approx(1.0));
    CHECK(std::abs(r.value(2, 2)) < 1e-12);
    CHECK(r.nuclear_norm == doctest::Approx(5.0));
  }
  SUBCASE("zero matrix") {
    const auto r = singular_value_threshold(Matrix::Zero(4, 3), 0.5);
    CHECK(r.rank == 0);
    CHECK(r.value.isZero(0.0));
  }
  SUBCASE("agrees with an eigen-decomposition oracle") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const Matrix m = random_matrix(7, 5, seed, 3.0);
      for (double eps : {0.1, 1.0, 10.0}) {
        const auto r = singular_value_threshold(m, eps);
        CHECK((r.value - svt_oracle(m, eps)).cwiseAbs().maxCoeff() <= 1e-8);
        Eigen::JacobiSVD<Matrix> check(m);
        int survivors = 0;
        for (Eigen::Index i = 0; i < check.singularValues().size(); ++i) survivors += check.singularValues()[i] > eps;
        CHECK(r.rank == survivors);
      }
    }
  }
}

TEST_CASE("default weights") {
  CHECK(compute_lambda(2016, 121) == doctest::Approx(0.0222717701593687).epsilon(1e-12));
  CHECK(compute_lambda(672, 483) == doctest::Approx(0.03857583749052298).epsilon(1e-12));
  CHECK(compute_lambda(121, 2016) == compute_lambda(2016, 121));
  CHECK(compute_mu(2016, 121, 1.0) == doctest::Approx(223.64166395541153).epsilon(1e-12));
  CHECK(compute_mu(672, 483, 1.0) == doctest::Approx(130.5975864714665).epsilon(1e-12));
  CHECK(compute_mu(672, 483, 2.5) == doctest::Approx(2.5 * 130.5975864714665).epsilon(1e-12));
}

TEST_CASE("ApgParams validation") {
  ApgParams p;
  CHECK_NOTHROW(p.validate());
  p.tolerance = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.max_iterations = 0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.lambda = -1.0;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("apg_decompose invariants") {
  SynthSpec spec;
  spec.rows = 200;
  spec.cols = 12;
  spec.rank = 2;
  spec.seed = 3;
  const auto gt = generate(spec);
  const auto d = apg_decompose(gt.X);

  CHECK(d.converged);
  const Matrix sum = d.A + d.E + d.N;
  CHECK((sum - gt.X.values()).cwiseAbs().maxCoeff() <= 1e-9 * gt.X.values().cwiseAbs().maxCoeff());
  CHECK(d.lambda == compute_lambda(200, 12));
  CHECK(d.mu == compute_mu(200, 12, 1.0));
  CHECK(d.sigmas.size() == 12);
  CHECK(d.rank_A >= 1);
  CHECK(d.iterations == static_cast<int>(d.stopping_trace.size()));
  CHECK(d.stopping_trace.back() < 1e-6);

  // objective of the whitened problem never exceeds the A = E = 0 value
  const Matrix xw = scale_columns(gt.X.values(), d.sigmas, ScaleDirection::divide);
  const Matrix aw = scale_columns(d.A, d.sigmas, ScaleDirection::divide);
  const Matrix ew = scale_columns(d.E, d.sigmas, ScaleDirection::divide);
  CHECK(apg_objective(xw, aw, ew, d.lambda, d.mu) <= 0.5 * xw.squaredNorm());

  // solver rank equals the number of singular values of A above round-off
  Eigen::JacobiSVD<Matrix> svd(aw);
  int nonzero = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    nonzero += svd.singularValues()[i] > 1e-8 * svd.singularValues()[0];
  CHECK(nonzero == d.rank_A);

  const auto again = apg_decompose(gt.X);
  CHECK(again.A == d.A);
  CHECK(again.E == d.E);
  CHECK(again.iterations == d.iterations);
}

TEST_CASE("apg_decompose failure modes") {
  SUBCASE("constant column has no noise estimate") {
    Matrix x = random_matrix(64, 3, 1).cwiseAbs();
    x.col(1).setConstant(5.0);
    CHECK_THROWS_AS(apg_decompose(TrafficMatrix(x, 5.0, {"a", "b", "c"})), Error);
  }
  SUBCASE("iteration cap reports non-convergence") {
    SynthSpec spec;
    spec.rows = 128;
    spec.cols = 8;
    spec.rank = 2;
    const auto gt = generate(spec);
    ApgParams p;
    p.max_iterations = 3;
    const auto d = apg_decompose(gt.X, p);
    CHECK_FALSE(d.converged);
    CHECK(d.iterations == 3);
    CHECK((d.A + d.E + d.N - gt.X.values()).cwiseAbs().maxCoeff() <= 1e-9 * gt.X.values().cwiseAbs().maxCoeff());
  }
}

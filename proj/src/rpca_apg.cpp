#include "tmrpca/rpca_apg.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace tmrpca {

void ApgParams::validate() const {
  if (lambda && !(*lambda > 0.0)) throw Error(ErrorCode::invalid_argument, "lambda must be positive");
  if (mu && !(*mu > 0.0)) throw Error(ErrorCode::invalid_argument, "mu must be positive");
  if (!(tolerance > 0.0)) throw Error(ErrorCode::invalid_argument, "tolerance must be positive");
  if (max_iterations < 1) throw Error(ErrorCode::invalid_argument, "max_iterations must be at least 1");
}

Matrix soft_threshold(const Matrix& m, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::invalid_argument, "threshold must be positive");
  return m.unaryExpr([eps](double v) {
    if (v > eps) return v - eps;
    if (v < -eps) return v + eps;
    return 0.0;
  });
}

SvtResult singular_value_threshold(const Matrix& m, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::invalid_argument, "threshold must be positive");
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  SvtResult out;
  // singular values arrive sorted descending
  while (out.rank < s.size() && s[out.rank] > eps) ++out.rank;
  const Vector shrunk = s.head(out.rank).array() - eps;
  out.nuclear_norm = shrunk.sum();
  out.value = svd.matrixU().leftCols(out.rank) * shrunk.asDiagonal() *
              svd.matrixV().leftCols(out.rank).transpose();
  return out;
}

double compute_lambda(long long t, long long p) {
  if (t < 1 || p < 1) throw Error(ErrorCode::invalid_argument, "matrix dimensions must be positive");
  return 1.0 / std::sqrt(static_cast<double>(std::max(t, p)));
}

double compute_mu(long long t, long long p, double sigma) {
  if (t < 1 || p < 1 || t * p < 2) throw Error(ErrorCode::invalid_argument, "t * p must be at least 2");
  if (!(sigma > 0.0)) throw Error(ErrorCode::invalid_argument, "noise scale must be positive");
  const double cells = static_cast<double>(t) * static_cast<double>(p);
  return sigma * std::sqrt(2.0 * std::log(cells) * static_cast<double>(std::max(t, p)));
}

double apg_objective(const Matrix& x, const Matrix& a, const Matrix& e, double lambda, double mu) {
  const double nuclear = Eigen::BDCSVD<Matrix>(a).singularValues().sum();
  return mu * nuclear + mu * lambda * e.cwiseAbs().sum() + 0.5 * (x - a - e).squaredNorm();
}

ApgSolution apg_solve(const Matrix& x, double lambda, double mu, double tolerance,
                      int max_iterations) {
  if (!(lambda > 0.0) || !(mu > 0.0) || !(tolerance > 0.0) || max_iterations < 1)
    throw Error(ErrorCode::invalid_argument, "APG parameters must be positive");

  const Eigen::Index rows = x.rows();
  const Eigen::Index cols = x.cols();
  Matrix a = Matrix::Zero(rows, cols);
  Matrix a_prev = a;
  Matrix e = a;
  Matrix e_prev = a;
  double t_k = 1.0;
  double t_prev = 1.0;

  ApgSolution sol;
  const double svt_eps = mu / 2.0;
  const double l1_eps = lambda * mu / 2.0;

  while (sol.iterations < max_iterations) {
    const double momentum = (t_prev - 1.0) / t_k;
    const Matrix y_a = a + momentum * (a - a_prev);
    const Matrix y_e = e + momentum * (e - e_prev);
    const Matrix half_residual = 0.5 * (y_a + y_e - x);
    const Matrix g_a = y_a - half_residual;
    const Matrix g_e = y_e - half_residual;

    auto svt = singular_value_threshold(g_a, svt_eps);
    Matrix e_next = soft_threshold(g_e, l1_eps);

    const double t_next = 0.5 * (1.0 + std::sqrt(4.0 * t_k * t_k + 1.0));

    const Matrix joint = svt.value + e_next - y_a - y_e;
    const double stop = (2.0 * (y_a - a) + joint).squaredNorm() + (2.0 * (y_e - e) + joint).squaredNorm();

    a_prev = std::move(a);
    a = std::move(svt.value);
    e_prev = std::move(e);
    e = std::move(e_next);
    t_prev = t_k;
    t_k = t_next;
    ++sol.iterations;
    sol.rank_A = svt.rank;

    sol.objective_trace.push_back(mu * svt.nuclear_norm + mu * lambda * e.cwiseAbs().sum() +
                                  0.5 * (x - a - e).squaredNorm());
    sol.stopping_trace.push_back(stop);
    sol.final_stopping_quantity = stop;
    if (stop < tolerance) {
      sol.converged = true;
      break;
    }
  }
  sol.A = std::move(a);
  sol.E = std::move(e);
  return sol;
}

Decomposition apg_decompose(const TrafficMatrix& x, const ApgParams& params, const WaveletConfig& cfg) {
  params.validate();
  const auto start = std::chrono::steady_clock::now();
  const Matrix& values = x.values();
  const Eigen::Index t = values.rows();
  const Eigen::Index p = values.cols();

  Decomposition d;
  d.lambda = params.lambda.value_or(compute_lambda(t, p));
  d.mu = params.mu.value_or(compute_mu(t, p, 1.0));
  d.sigmas = estimate_column_sigmas(values, cfg);
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!(d.sigmas[j] > 0.0)) {
      std::ostringstream msg;
      msg << "column " << j << " ('" << x.od_labels()[j]
          << "') has zero estimated noise scale; remove constant or mostly-zero columns first";
      throw Error(ErrorCode::numeric, msg.str());
    }
  }

  const Matrix whitened = scale_columns(values, d.sigmas, ScaleDirection::divide);
  auto sol = apg_solve(whitened, d.lambda, d.mu, params.tolerance, params.max_iterations);

  d.A = scale_columns(sol.A, d.sigmas, ScaleDirection::multiply);
  d.E = scale_columns(sol.E, d.sigmas, ScaleDirection::multiply);
  d.N = values - d.A - d.E;
  d.iterations = sol.iterations;
  d.rank_A = sol.rank_A;
  d.converged = sol.converged;
  d.objective_trace = std::move(sol.objective_trace);
  d.stopping_trace = std::move(sol.stopping_trace);
  d.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return d;
}

}  // namespace tmrpca

#include "carlab/operators.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace carlab {

Vec AffineOperator::apply(const Vec& u, double t) const {
  Vec out = matrix * u;
  if (offset) out += offset(t);
  return out;
}

namespace {

void check_first_derivative_args(int N, double dx, const char* who) {
  // N = 3 is accepted (degenerate but well-defined) so desk-scale spectra can
  // be written out by hand; grids proper insist on N >= 4.
  if (N < 3) throw std::invalid_argument(std::string(who) + ": need at least 3 points");
  if (!(dx > 0.0)) throw std::invalid_argument(std::string(who) + ": spacing must be positive");
}

SpMat tridiag_antisymmetric(int N, double dx, bool wrap) {
  const double c = 1.0 / (2.0 * dx);
  std::vector<Triplet> trip;
  trip.reserve(2 * N);
  for (int i = 0; i < N; ++i) {
    if (i + 1 < N) trip.emplace_back(i, i + 1, c);
    if (i - 1 >= 0) trip.emplace_back(i, i - 1, -c);
  }
  if (wrap) {
    trip.emplace_back(0, N - 1, -c);
    trip.emplace_back(N - 1, 0, c);
  }
  SpMat m(N, N);
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  return m;
}

std::vector<std::complex<double>> sorted_eigenvalues(const Mat& dense) {
  Eigen::EigenSolver<Mat> es(dense, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("analytic_spectrum: dense eigensolver failed");
  std::vector<std::complex<double>> vals(dense.rows());
  for (int i = 0; i < dense.rows(); ++i) vals[i] = es.eigenvalues()(i);
  std::sort(vals.begin(), vals.end(), [](const auto& a, const auto& b) {
    if (a.imag() != b.imag()) return a.imag() < b.imag();
    return a.real() < b.real();
  });
  return vals;
}

} // namespace

AffineOperator derivative_pbc(int N, double dx) {
  check_first_derivative_args(N, dx, "derivative_pbc");
  return {tridiag_antisymmetric(N, dx, /*wrap=*/true), nullptr};
}

AffineOperator derivative_obc(int N, double dx) {
  check_first_derivative_args(N, dx, "derivative_obc");
  return {tridiag_antisymmetric(N, dx, /*wrap=*/false), nullptr};
}

AffineOperator derivative_dirichlet(int N, double dx, int order, TraceFn left, TraceFn right) {
  check_first_derivative_args(N, dx, "derivative_dirichlet");
  if (!left || !right)
    throw std::invalid_argument("derivative_dirichlet: both trace functions required");
  if (order == 1) {
    SpMat m = tridiag_antisymmetric(N, dx, /*wrap=*/false);
    const double c = 1.0 / (2.0 * dx);
    auto offset = [N, c, left, right](double t) {
      Vec b = Vec::Zero(N);
      b(0) = -c * left(t);
      b(N - 1) = c * right(t);
      return b;
    };
    return {std::move(m), std::move(offset)};
  }
  if (order == 2) {
    const double c = 1.0 / (dx * dx);
    std::vector<Triplet> trip;
    trip.reserve(3 * N);
    for (int i = 0; i < N; ++i) {
      if (i - 1 >= 0) trip.emplace_back(i, i - 1, c);
      trip.emplace_back(i, i, -2.0 * c);
      if (i + 1 < N) trip.emplace_back(i, i + 1, c);
    }
    SpMat m(N, N);
    m.setFromTriplets(trip.begin(), trip.end());
    m.makeCompressed();
    auto offset = [N, c, left, right](double t) {
      Vec b = Vec::Zero(N);
      b(0) = c * left(t);
      b(N - 1) = c * right(t);
      return b;
    };
    return {std::move(m), std::move(offset)};
  }
  throw std::invalid_argument("derivative_dirichlet: order must be 1 or 2");
}

SpMat second_derivative_matrix(BoundaryCondition kind, int N, double dx) {
  switch (kind) {
    case BoundaryCondition::Periodic: {
      SpMat d1 = derivative_pbc(N, dx).matrix;
      return (d1 * d1).pruned();
    }
    case BoundaryCondition::Open: {
      SpMat d1 = derivative_obc(N, dx).matrix;
      return (d1 * d1).pruned();
    }
    case BoundaryCondition::Dirichlet:
      return derivative_dirichlet(N, dx, 2, [](double) { return 0.0; }, [](double) { return 0.0; })
          .matrix;
  }
  throw std::invalid_argument("second_derivative_matrix: unknown boundary kind");
}

SpectrumReport analytic_spectrum(BoundaryCondition kind, int N, double dx, int order) {
  if (kind == BoundaryCondition::Dirichlet)
    throw std::invalid_argument(
        "analytic_spectrum: spectrum of an affine Dirichlet operator is not defined here");
  if (order != 1 && order != 2)
    throw std::invalid_argument("analytic_spectrum: order must be 1 or 2");

  SpMat first = (kind == BoundaryCondition::Periodic) ? derivative_pbc(N, dx).matrix
                                                      : derivative_obc(N, dx).matrix;
  SpMat m = (order == 1) ? first : second_derivative_matrix(kind, N, dx);

  SpectrumReport rep;
  rep.numerical = sorted_eigenvalues(Mat(m));

  const double pi = std::acos(-1.0);
  std::vector<std::complex<double>> doc(N);
  // Documented closed forms carry a 1/(2dx) prefactor; direct decomposition of
  // the printed matrices gives 1/dx. Both are reported, never silently merged.
  for (int k = 0; k < N; ++k) {
    std::complex<double> lambda1;
    if (kind == BoundaryCondition::Periodic)
      lambda1 = std::complex<double>(0.0, std::sin(2.0 * pi * k / N) / (2.0 * dx));
    else
      lambda1 = std::complex<double>(0.0, std::cos(pi * (k + 1) / (N + 1)) / (2.0 * dx));
    doc[k] = (order == 1) ? lambda1 : lambda1 * lambda1;
  }
  std::sort(doc.begin(), doc.end(), [](const auto& a, const auto& b) {
    if (a.imag() != b.imag()) return a.imag() < b.imag();
    return a.real() < b.real();
  });
  rep.documented_formula = doc;

  double scale = 0.0;
  for (const auto& v : rep.numerical) scale = std::max(scale, std::abs(v));
  for (int k = 0; k < N; ++k)
    rep.max_abs_gap = std::max(rep.max_abs_gap, std::abs(rep.numerical[k] - doc[k]));
  rep.formula_mismatch = rep.max_abs_gap > 1e-9 * std::max(scale, 1.0);
  return rep;
}

double spectral_norm(const SpMat& m) {
  if (m.rows() == 0 || m.cols() == 0)
    throw std::invalid_argument("spectral_norm: empty matrix");
  if (m.nonZeros() == 0) return 0.0;

  const bool rows_smaller = m.rows() <= m.cols();
  const Eigen::Index side = rows_smaller ? m.rows() : m.cols();

  if (side <= 1024) {
    // Dense solve on the smaller Gram matrix; symmetric, so the self-adjoint
    // solver is both stable and deterministic.
    Mat gram;
    if (rows_smaller)
      gram = Mat(SpMat(m * SpMat(m.transpose())));
    else
      gram = Mat(SpMat(SpMat(m.transpose()) * m));
    Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("spectral_norm: eigensolver failed");
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  }

  // Fixed-start power iteration on the Gram operator, matrix-free, so the
  // result is independent of scheduling and identical run to run.
  SpMat mt = m.transpose();
  Vec v = Vec::Constant(side, 1.0 / std::sqrt(static_cast<double>(side)));
  double lambda = 0.0;
  for (int it = 0; it < 20000; ++it) {
    Vec w = rows_smaller ? Vec(m * (mt * v)) : Vec(mt * (m * v));
    double nw = w.norm();
    if (nw == 0.0) return 0.0;
    w /= nw;
    double lambda_new = rows_smaller ? (m * (mt * w)).dot(w) : (mt * (m * w)).dot(w);
    if (std::abs(lambda_new - lambda) <= 1e-12 * std::max(1.0, std::abs(lambda_new)) && it > 4)
      return std::sqrt(std::max(0.0, lambda_new));
    lambda = lambda_new;
    v = w;
  }
  return std::sqrt(std::max(0.0, lambda));
}

double spectral_norm(const AffineOperator& op) { return spectral_norm(op.matrix); }

nlohmann::json operator_to_json(const AffineOperator& op, const std::vector<double>& sample_times) {
  nlohmann::json j;
  j["rows"] = op.matrix.rows();
  j["cols"] = op.matrix.cols();
  nlohmann::json trips = nlohmann::json::array();
  for (int r = 0; r < op.matrix.outerSize(); ++r)
    for (SpMat::InnerIterator it(op.matrix, r); it; ++it)
      trips.push_back({it.row(), it.col(), it.value()});
  j["triplets"] = std::move(trips);
  j["offset_kind"] = op.has_offset() ? "sampled" : "zero";
  nlohmann::json samples = nlohmann::json::array();
  if (op.has_offset()) {
    for (double t : sample_times) {
      Vec b = op.offset(t);
      nlohmann::json row;
      row["t"] = t;
      row["values"] = std::vector<double>(b.data(), b.data() + b.size());
      samples.push_back(std::move(row));
    }
  }
  j["offset_samples"] = std::move(samples);
  return j;
}

} // namespace carlab

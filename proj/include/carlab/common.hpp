#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <stdexcept>
#include <string>

namespace carlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
/// Row-major sparse storage: assembly goes through triplets, application
/// iterates compressed rows (operators here have few nonzeros per row).
using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

/// Raised when an assembled system would exceed the configured memory budget.
class BudgetExceeded : public std::runtime_error {
public:
  BudgetExceeded(std::string what, long long state_size, long long nnz_estimate)
      : std::runtime_error(std::move(what)), state_size(state_size), nnz_estimate(nnz_estimate) {}
  long long state_size;
  long long nnz_estimate;
};

/// Raised when the adaptive integrator underflows its step size (stiff
/// blow-up); carries the time actually reached.
class StepUnderflow : public std::runtime_error {
public:
  StepUnderflow(std::string what, double t_reached)
      : std::runtime_error(std::move(what)), t_reached(t_reached) {}
  double t_reached;
};

} // namespace carlab

#include "pff/linsolve.hpp"

#include "pff/errors.hpp"

namespace pff {

void SubproblemSolver::analyze_pattern(const SpMat& A) {
  if (A.rows() != A.cols()) throw Error("subproblem matrix must be square");
  ldlt_->analyzePattern(A);
  analyzed_ = true;
}

const Factorization& SubproblemSolver::factorize(const SpMat& A, long increment_index) {
  if (!analyzed_) analyze_pattern(A);
  ldlt_->factorize(A);
  if (ldlt_->info() != Eigen::Success)
    throw FactorizationError(subproblem_name(tag_),
                             "matrix is singular or not positive definite");
  if (counter_) counter_->record(tag_);
  ++generation_;
  handle_.owner_ = this;
  handle_.tag_ = tag_;
  handle_.created_at_ = increment_index;
  handle_.generation_ = generation_;
  return handle_;
}

Vec Factorization::solve(const Vec& rhs) const {
  if (!valid()) throw Error("solve called on an empty factorization");
  if (rhs.size() != owner_->ldlt_->rows())
    throw Error(std::string("rhs dimension mismatch for ") + subproblem_name(tag_) +
                " subproblem");
  return owner_->ldlt_->solve(rhs);
}

}  // namespace pff

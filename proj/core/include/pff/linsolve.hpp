#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <memory>
#include <string>

namespace pff {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

enum class Subproblem { Displacement, PhaseField };

inline const char* subproblem_name(Subproblem s) {
  return s == Subproblem::Displacement ? "displacement" : "phasefield";
}

// Refactorization accounting. The paired count follows the convention that one
// "factorization" covers both subproblem matrices; when the two are refreshed
// independently, the paired count is defined as the displacement-side events.
struct FactorCounter {
  long displacement = 0;
  long phasefield = 0;
  void record(Subproblem s) { (s == Subproblem::Displacement ? displacement : phasefield)++; }
  long paired() const { return displacement; }
};

class SubproblemSolver;

// View of the current numeric factorization of one subproblem. Valid until the
// owning solver refactorizes; solving never mutates it.
class Factorization {
 public:
  Factorization() = default;
  Vec solve(const Vec& rhs) const;
  Subproblem tag() const { return tag_; }
  long created_at_increment() const { return created_at_; }
  bool valid() const { return owner_ != nullptr; }

 private:
  friend class SubproblemSolver;
  const SubproblemSolver* owner_ = nullptr;
  Subproblem tag_ = Subproblem::Displacement;
  long created_at_ = -1;
  long generation_ = -1;
};

// Direct Cholesky-type solver for one SPD subproblem matrix. The fill-reducing
// ordering is computed once from the sparsity pattern and reused by every
// refactorization (the pattern is fixed for the life of the problem).
class SubproblemSolver {
 public:
  SubproblemSolver(Subproblem tag, FactorCounter* counter)
      : tag_(tag), counter_(counter), ldlt_(std::make_unique<Eigen::SimplicialLDLT<SpMat>>()) {}

  void analyze_pattern(const SpMat& A);

  // Numeric factorization; increments the counter; throws FactorizationError.
  const Factorization& factorize(const SpMat& A, long increment_index);

  const Factorization& current() const { return handle_; }
  bool has_factorization() const { return handle_.valid(); }

 private:
  friend class Factorization;
  Subproblem tag_;
  FactorCounter* counter_;
  std::unique_ptr<Eigen::SimplicialLDLT<SpMat>> ldlt_;
  bool analyzed_ = false;
  long generation_ = 0;
  Factorization handle_;
};

// Decision rule for reusing a factorization: refresh at the first use, when an
// inner solve failed to converge within n_i iterations, or when n_c increments
// have passed since the last refresh.
inline bool mn_should_refactorize(bool at_start, long iter_count, long increments_since_update,
                                  long n_i, long n_c) {
  return at_start || iter_count >= n_i || increments_since_update >= n_c;
}

}  // namespace pff

#pragma once

#include <memory>
#include <span>

#include "cliff/multivector.hpp"

namespace cliff {

// LU factorisation of a 2^n x 2^n matrix whose columns are coefficient vectors
// of multivectors. Solutions come back in a Multivector-shaped container: the
// coefficient at index j is the weight of column j.
class CoefficientSolver {
 public:
  CoefficientSolver(const Signature& sig, std::span<const Multivector> columns);
  ~CoefficientSolver();
  CoefficientSolver(CoefficientSolver&&) noexcept;
  CoefficientSolver& operator=(CoefficientSolver&&) noexcept;

  // Matrix of x -> a x.
  static CoefficientSolver left_multiplication(const Multivector& a);

  // Reciprocal 1-norm condition estimate; 0 for an exactly singular matrix.
  double rcond() const noexcept { return rcond_; }
  double condition() const noexcept;

  Multivector solve(const Multivector& rhs) const;

 private:
  struct Impl;
  Signature sig_;
  double rcond_ = 0.0;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cliff

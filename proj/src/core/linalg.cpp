#include "cliff/linalg.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <variant>

#include "cliff/error.hpp"

namespace cliff {

struct CoefficientSolver::Impl {
  std::variant<Eigen::PartialPivLU<Eigen::MatrixXd>, Eigen::PartialPivLU<Eigen::MatrixXcd>> lu;
};

namespace {

template <typename Lu>
double safe_rcond(const Lu& lu) {
  const auto& packed = lu.matrixLU();
  for (Eigen::Index i = 0; i < packed.rows(); ++i) {
    if (std::abs(packed(i, i)) == 0.0) return 0.0;
  }
  const double r = lu.rcond();
  return std::isfinite(r) && r > 0.0 ? r : 0.0;
}

}  // namespace

CoefficientSolver::CoefficientSolver(const Signature& sig, std::span<const Multivector> columns)
    : sig_(sig), impl_(std::make_unique<Impl>()) {
  const auto dim = static_cast<Eigen::Index>(sig.dimension());
  if (static_cast<Eigen::Index>(columns.size()) != dim) {
    throw Error(ErrorKind::InvalidArgument, "coefficient solver needs 2^n columns");
  }
  if (sig.is_complex()) {
    Eigen::MatrixXcd m(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      for (Eigen::Index i = 0; i < dim; ++i) m(i, j) = columns[j].coefficient(i);
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    rcond_ = safe_rcond(lu);
    impl_->lu = std::move(lu);
  } else {
    Eigen::MatrixXd m(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      auto re = columns[j].real();
      for (Eigen::Index i = 0; i < dim; ++i) m(i, j) = re[i];
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    rcond_ = safe_rcond(lu);
    impl_->lu = std::move(lu);
  }
}

CoefficientSolver::~CoefficientSolver() = default;
CoefficientSolver::CoefficientSolver(CoefficientSolver&&) noexcept = default;
CoefficientSolver& CoefficientSolver::operator=(CoefficientSolver&&) noexcept = default;

CoefficientSolver CoefficientSolver::left_multiplication(const Multivector& a) {
  const Signature& sig = a.signature();
  std::vector<Multivector> cols;
  cols.reserve(sig.dimension());
  for (std::uint32_t j = 0; j < sig.dimension(); ++j) {
    cols.push_back(multiply_blade_right(a, Blade{j}));
  }
  return CoefficientSolver(sig, cols);
}

double CoefficientSolver::condition() const noexcept {
  return rcond_ > 0.0 ? 1.0 / rcond_ : std::numeric_limits<double>::infinity();
}

Multivector CoefficientSolver::solve(const Multivector& rhs) const {
  const auto dim = static_cast<Eigen::Index>(sig_.dimension());
  Multivector out(sig_);
  if (auto* lu = std::get_if<Eigen::PartialPivLU<Eigen::MatrixXd>>(&impl_->lu)) {
    Eigen::VectorXd b(dim);
    auto re = rhs.real();
    for (Eigen::Index i = 0; i < dim; ++i) b(i) = re[i];
    Eigen::VectorXd x = lu->solve(b);
    auto out_re = out.real();
    for (Eigen::Index i = 0; i < dim; ++i) out_re[i] = x(i);
  } else {
    auto& clu = std::get<Eigen::PartialPivLU<Eigen::MatrixXcd>>(impl_->lu);
    Eigen::VectorXcd b(dim);
    for (Eigen::Index i = 0; i < dim; ++i) b(i) = rhs.coefficient(i);
    Eigen::VectorXcd x = clu.solve(b);
    for (Eigen::Index i = 0; i < dim; ++i) out.set(Blade{static_cast<std::uint32_t>(i)}, x(i));
  }
  return out;
}

}  // namespace cliff

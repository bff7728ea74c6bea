#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace xxzent {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Matrix4 = Eigen::Matrix4cd;
using Vector4 = Eigen::Vector4cd;

inline constexpr Complex kI{0.0, 1.0};

/// Raised when an argument violates a documented precondition.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when the environment ground state is degenerate and the
/// second-order projection is undefined. Carries the field value.
class DegenerateGroundState : public DomainError {
 public:
  DegenerateGroundState(double field, double gap)
      : DomainError("degenerate chain ground state at B=" + std::to_string(field) +
                    " (gap " + std::to_string(gap) +
                    "): second-order effective Hamiltonian is not valid"),
        field_(field),
        gap_(gap) {}

  double field() const noexcept { return field_; }
  double gap() const noexcept { return gap_; }

 private:
  double field_;
  double gap_;
};

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Largest entry of |H - H^dagger|.
inline double hermiticity_defect(const Matrix& h) { return max_abs(h - h.adjoint()); }

inline bool is_hermitian(const Matrix& h, double tol = 1e-12) {
  return h.rows() == h.cols() && hermiticity_defect(h) <= tol;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

/// Spectral norm of a Hermitian matrix (largest |eigenvalue|).
inline double hermitian_norm(const Matrix& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace xxzent

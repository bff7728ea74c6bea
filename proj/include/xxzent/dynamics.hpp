#pragma once

#include "xxzent/effective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace xxzent {

/// exp(-iHt)|psi> = V diag(exp(-i lambda t)) V^dagger |psi> from a cached
/// eigendecomposition of a Hermitian H.
class Propagator {
 public:
  explicit Propagator(const Matrix& h) : spectrum_(eig_hermitian(h)) {}

  Vector evolve(const Vector& psi0, double t) const {
    check_state(psi0);
    const Vector coeffs = spectrum_.eigenvectors.adjoint() * psi0;
    Vector phased(coeffs.size());
    for (Eigen::Index k = 0; k < coeffs.size(); ++k)
      phased(k) = std::exp(-kI * (spectrum_.eigenvalues(k) * t)) * coeffs(k);
    return spectrum_.eigenvectors * phased;
  }

  const Spectrum& spectrum() const { return spectrum_; }

 private:
  void check_state(const Vector& psi) const {
    if (psi.size() != spectrum_.size())
      throw DomainError("evolve_state: state dimension " + std::to_string(psi.size()) +
                        " does not match Hamiltonian dimension " + std::to_string(spectrum_.size()));
    if (std::abs(psi.norm() - 1.0) > 1e-10) throw DomainError("evolve_state: state is not normalised");
  }

  Spectrum spectrum_;
};

inline Vector evolve_state(const Matrix& h, const Vector& psi0, double t) {
  return Propagator(h).evolve(psi0, t);
}

inline Matrix density_from_state(const Vector& psi) { return psi * psi.adjoint(); }

/// Traces the N chain sites out of a density matrix on chain (x) qubits.
inline Matrix4 partial_trace_chain(const Matrix& rho_full, int chain_sites) {
  const Eigen::Index dc = Eigen::Index{1} << chain_sites;
  if (chain_sites < 0 || rho_full.rows() != 4 * dc || rho_full.cols() != 4 * dc)
    throw DomainError("partial_trace_chain: expected dimension " + std::to_string(4 * dc) + ", got " +
                      std::to_string(rho_full.rows()) + "x" + std::to_string(rho_full.cols()));
  Matrix4 out = Matrix4::Zero();
  for (Eigen::Index c = 0; c < dc; ++c) out += rho_full.block<4, 4>(c * 4, c * 4);
  return out;
}

/// Reduced probe density of a pure state on chain (x) qubits, without forming
/// the full density matrix.
inline Matrix4 reduced_probe_density(const Vector& psi_full, int chain_sites) {
  const Eigen::Index dc = Eigen::Index{1} << chain_sites;
  if (psi_full.size() != 4 * dc) throw DomainError("reduced_probe_density: dimension mismatch");
  Matrix4 out = Matrix4::Zero();
  for (Eigen::Index c = 0; c < dc; ++c) {
    const Vector4 seg = psi_full.segment<4>(c * 4);
    out += seg * seg.adjoint();
  }
  return out;
}

/// Throws unless rho is Hermitian, unit trace and positive semidefinite.
inline void validate_two_qubit_density(const Matrix4& rho, double herm_tol = 1e-12,
                                       double trace_tol = 1e-10, double psd_tol = 1e-10) {
  if (hermiticity_defect(rho) > herm_tol) throw DomainError("density matrix is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > trace_tol) throw DomainError("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<Matrix4> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -psd_tol) throw DomainError("density matrix is not positive semidefinite");
}

/// sigma^y (x) sigma^y.
inline Matrix4 spin_flip_operator() {
  Matrix4 m = Matrix4::Zero();
  m(0, 3) = -1.0;
  m(1, 2) = 1.0;
  m(2, 1) = 1.0;
  m(3, 0) = -1.0;
  return m;
}

/// Wootters concurrence. With rho = W W^dagger, the square roots of the
/// eigenvalues of rho * rho_tilde are the singular values of W^T (y x y) W.
/// Eigenvalues of rho below null_tol are treated as exact zeros, so pure
/// states reduce to |psi^T (y x y) psi|.
inline double concurrence_general(const Matrix4& rho, double null_tol = 1e-13) {
  validate_two_qubit_density(rho);
  Eigen::SelfAdjointEigenSolver<Matrix4> es(0.5 * (rho + rho.adjoint()));
  const Eigen::Vector4d p = es.eigenvalues();
  int kept = 0;
  Matrix w(4, 4);
  for (int k = 0; k < 4; ++k)
    if (p(k) > null_tol) w.col(kept++) = es.eigenvectors().col(k) * std::sqrt(p(k));
  if (kept == 0) return 0.0;
  w.conservativeResize(4, kept);
  const Matrix tau = w.transpose() * Matrix(spin_flip_operator()) * w;
  Eigen::JacobiSVD<Matrix> svd(tau);
  Eigen::Vector4d lambda = Eigen::Vector4d::Zero();
  lambda.head(kept) = svd.singularValues();
  std::sort(lambda.data(), lambda.data() + 4, std::greater<>());
  return std::max(0.0, lambda(0) - lambda(1) - lambda(2) - lambda(3));
}

struct XStateElements {
  double u = 0.0;   // <00|rho|00>
  double w1 = 0.0;  // <01|rho|01>
  double w2 = 0.0;  // <10|rho|10>
  double v = 0.0;   // <11|rho|11>
  Complex y{};      // <01|rho|10>

  void validate(double tol = 1e-10) const {
    if (std::abs(u + w1 + w2 + v - 1.0) > tol) throw DomainError("X-state populations do not sum to 1");
    if (std::min({u, w1, w2, v}) < -tol) throw DomainError("X-state population is negative");
    if (std::norm(y) > w1 * w2 + tol) throw DomainError("X-state coherence violates positivity");
  }
};

/// True when rho has no entries outside the diagonal and the |01>,|10> coherence.
inline bool is_x_form(const Matrix4& rho, double tol = 1e-12) {
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      const bool allowed = r == c || (r == 1 && c == 2) || (r == 2 && c == 1);
      if (!allowed && std::abs(rho(r, c)) > tol) return false;
    }
  return true;
}

inline XStateElements x_state_elements(const Matrix4& rho) {
  return {rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real(), rho(3, 3).real(), rho(1, 2)};
}

/// C = 2 max(|y| - sqrt(u v), 0).
inline double concurrence_xstate(const XStateElements& x) {
  x.validate();
  return 2.0 * std::max(std::abs(x.y) - std::sqrt(std::max(0.0, x.u * x.v)), 0.0);
}

struct ConcurrenceTrace {
  std::vector<double> times;
  std::vector<double> values;
};

inline void check_times(const std::vector<double>& times) {
  if (!std::is_sorted(times.begin(), times.end()))
    throw DomainError("times must be ascending");
}

/// Concurrence of the probe pair evolved by a two-qubit Hamiltonian. X-form
/// densities are cross-checked against the closed form.
inline ConcurrenceTrace concurrence_trace(const Matrix4& h, const Vector4& psi0,
                                          const std::vector<double>& times) {
  check_times(times);
  const Propagator prop{Matrix(h)};
  ConcurrenceTrace trace;
  trace.times = times;
  trace.values.reserve(times.size());
  for (double t : times) {
    const Vector4 psi = prop.evolve(Vector(psi0), t);
    const Matrix4 rho = psi * psi.adjoint();
    const double c = concurrence_general(rho);
    if (is_x_form(rho)) {
      const double cx = concurrence_xstate(x_state_elements(rho));
      if (std::abs(c - cx) > 1e-10)
        throw std::logic_error("concurrence_trace: general and X-state concurrence disagree at t=" +
                               std::to_string(t));
    }
    trace.values.push_back(c);
  }
  return trace;
}

struct FullVsEffective {
  ConcurrenceTrace full;
  ConcurrenceTrace effective;
  double max_deviation = 0.0;
};

/// Exact evolution of |chain ground> (x) psi0_ab under H = H0 + H_I, reduced to
/// the probes, against evolution under the second-order effective Hamiltonian.
inline FullVsEffective full_vs_effective(const ChainSpec& chain, const CouplingSpec& coupling,
                                         const Vector4& psi0_ab, const std::vector<double>& times,
                                         int max_total_spins = kDefaultMaxTotalSpins) {
  check_times(times);
  detail::check_total_spins(chain.sites + 2, max_total_spins);
  const Spectrum chain_spectrum = eig_hermitian(build_chain_hamiltonian(chain, max_total_spins));
  const Matrix h_i = build_interaction(chain, coupling, max_total_spins);
  const auto heff = effective_hamiltonian(chain_spectrum, h_i, {false, chain.field});
  const GroundState g = ground_state(chain_spectrum);

  const Matrix h_full =
      kron(build_chain_hamiltonian(chain, max_total_spins), Matrix::Identity(4, 4)) + h_i;
  const Propagator prop(h_full);
  const Vector psi_full = kron(g.state, Vector(psi0_ab));

  FullVsEffective out;
  out.effective = concurrence_trace(heff.matrix, psi0_ab, times);
  out.full.times = times;
  out.full.values.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Matrix4 rho = reduced_probe_density(prop.evolve(psi_full, times[k]), chain.sites);
    const double c = concurrence_general(rho);
    out.full.values.push_back(c);
    out.max_deviation = std::max(out.max_deviation, std::abs(c - out.effective.values[k]));
  }
  return out;
}

}  // namespace xxzent

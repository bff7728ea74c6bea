#pragma once

// Second-order effective Hamiltonian of the probe pair, obtained by projecting
// the chain-probe interaction onto the chain ground state:
//
//   A_j   = (<psi_j| (x) I_4) H_I (|psi_0> (x) I_4)
//   H_eff = - sum_{j : E_j > E_0} A_j^dagger A_j / (E_j - E_0)

#include "xxzent/spectra.hpp"

#include <vector>

namespace xxzent {

struct EffectiveHamiltonian {
  Matrix4 matrix = Matrix4::Zero();
  std::vector<Eigen::Index> excluded_levels;  // chain levels within degeneracy_tol of E_0
};

struct EffectiveOptions {
  // When false, a degenerate chain ground state is an error. When true the
  // degenerate partners are dropped from the sum and listed in
  // excluded_levels (diagnostic use only).
  bool exclude_degenerate = false;
  // Field value quoted in the degeneracy error; NaN when unknown.
  double field = std::numeric_limits<double>::quiet_NaN();
};

inline EffectiveHamiltonian effective_hamiltonian(const Spectrum& chain, const Matrix& interaction,
                                                  const EffectiveOptions& opt = {}) {
  const Eigen::Index dc = chain.size();
  if (interaction.rows() != 4 * dc || interaction.cols() != 4 * dc)
    throw DomainError("effective_hamiltonian: interaction dimension " +
                      std::to_string(interaction.rows()) + " does not match 4 x chain dimension " +
                      std::to_string(4 * dc));
  const GroundState g = ground_state(chain);
  if (g.degenerate && !opt.exclude_degenerate) throw DegenerateGroundState(opt.field, g.gap);

  // W = H_I (|psi_0> (x) I_4), a (4 dc) x 4 matrix.
  Matrix lift = Matrix::Zero(4 * dc, 4);
  for (Eigen::Index c = 0; c < dc; ++c)
    for (int q = 0; q < 4; ++q) lift(c * 4 + q, q) = g.state(c);
  const Matrix w = interaction * lift;

  // amplitudes[q](j, q') = A_j(q', q)
  std::vector<Matrix> amplitudes;
  amplitudes.reserve(4);
  for (int q = 0; q < 4; ++q) {
    Matrix wq(dc, 4);
    for (Eigen::Index c = 0; c < dc; ++c)
      for (int qp = 0; qp < 4; ++qp) wq(c, qp) = w(c * 4 + qp, q);
    amplitudes.push_back(chain.eigenvectors.adjoint() * wq);
  }

  EffectiveHamiltonian out;
  for (Eigen::Index j = 1; j < dc; ++j) {
    const double denom = chain.eigenvalues(j) - g.energy;
    if (denom < chain.degeneracy_tol) {
      out.excluded_levels.push_back(j);
      continue;
    }
    Matrix4 a;
    for (int q = 0; q < 4; ++q)
      for (int qp = 0; qp < 4; ++qp) a(qp, q) = amplitudes[q](j, qp);
    out.matrix -= a.adjoint() * a / denom;
  }
  // Symmetrise away rounding so downstream Hermitian checks are exact.
  out.matrix = 0.5 * (out.matrix + out.matrix.adjoint()).eval();
  return out;
}

/// Builds chain spectrum and interaction from the specs and projects.
inline EffectiveHamiltonian effective_hamiltonian(const ChainSpec& chain, const CouplingSpec& coupling,
                                                  bool exclude_degenerate = false,
                                                  int max_total_spins = kDefaultMaxTotalSpins) {
  const Spectrum spectrum = eig_hermitian(build_chain_hamiltonian(chain, max_total_spins));
  const Matrix h_i = build_interaction(chain, coupling, max_total_spins);
  return effective_hamiltonian(spectrum, h_i, {exclude_degenerate, chain.field});
}

/// sigma^x_a sigma^x_b + sigma^y_a sigma^y_b on the probe pair.
inline Matrix4 flip_flop_operator() {
  Matrix4 m = Matrix4::Zero();
  m(1, 2) = 2.0;
  m(2, 1) = 2.0;
  return m;
}

/// sigma^z_a + sigma^z_b on the probe pair.
inline Matrix4 probe_sz_sum() {
  Matrix4 m = Matrix4::Zero();
  m(0, 0) = 2.0;
  m(3, 3) = -2.0;
  return m;
}

struct GExtraction {
  double g_diag = 0.0;         // coefficient of I
  double g_offdiag = 0.0;      // coefficient of (xx + yy)
  double z_component = 0.0;    // coefficient of (z_a + z_b)
  double residual = 0.0;       // ||H - g_diag I - g_offdiag (xx+yy)||_2
  double residual_without_z = 0.0;  // same, with the z component also removed
};

/// Frobenius-orthogonal projection onto span{I, xx+yy}; the (z_a + z_b)
/// component is reported separately.
inline GExtraction extract_g(const Matrix4& h) {
  const Matrix4 id = Matrix4::Identity();
  const Matrix4 ff = flip_flop_operator();
  const Matrix4 zz = probe_sz_sum();
  GExtraction r;
  r.g_diag = (id.adjoint() * h).trace().real() / 4.0;
  r.g_offdiag = (ff.adjoint() * h).trace().real() / 8.0;
  r.z_component = (zz.adjoint() * h).trace().real() / 8.0;
  const Matrix4 rest = h - r.g_diag * id - r.g_offdiag * ff;
  r.residual = hermitian_norm(rest);
  r.residual_without_z = hermitian_norm(rest - r.z_component * zz);
  return r;
}

/// Closed-form two-site coupling g = Jp^2 (Delta - B) / ((B - Delta + 1)(B - Delta - 1)).
inline double reference_g(double jp, double anisotropy, double field) {
  const double d = field - anisotropy;
  return jp * jp * (anisotropy - field) / ((d + 1.0) * (d - 1.0));
}

/// g (I + xx + yy).
inline Matrix4 reference_effective_hamiltonian(double g) {
  return g * (Matrix4::Identity() + flip_flop_operator());
}

}  // namespace xxzent

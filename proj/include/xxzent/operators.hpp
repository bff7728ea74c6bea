#pragma once

// Dense operator builders for the XXZ environment chain and its coupling to two
// probe qubits.
//
// Basis convention: site 1 is the most significant bit of the basis index and
// bit value 0 is spin up (sigma^z = +1). Probe qubits a and b occupy positions
// N+1 and N+2 of the combined register (chain sites first).

#include "xxzent/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace xxzent {

enum class Axis { X, Y, Z };
enum class Boundary { Open, Periodic };
enum class Topology { AllSites, EndSites, Explicit };
enum class Convention { PauliDot, SpinHalfDot };

inline constexpr int kDefaultMaxTotalSpins = 12;

struct ChainSpec {
  int sites = 2;
  double coupling = 1.0;    // J
  double anisotropy = 0.25; // Delta
  double field = 0.0;       // B
  Boundary boundary = Boundary::Open;

  void validate() const {
    if (sites < 2) throw DomainError("chain.N: must be >= 2, got " + std::to_string(sites));
    if (coupling == 0.0) throw DomainError("chain.J: must be nonzero");
  }

  ChainSpec with_field(double b) const {
    ChainSpec c = *this;
    c.field = b;
    return c;
  }
};

struct CouplingSpec {
  double strength = 0.2;  // Jp
  Topology topology = Topology::AllSites;
  Convention convention = Convention::PauliDot;
  std::vector<int> sites_a;  // used only for Topology::Explicit
  std::vector<int> sites_b;

  CouplingSpec with_strength(double jp) const {
    CouplingSpec c = *this;
    c.strength = jp;
    return c;
  }
};

inline std::string to_string(Boundary b) { return b == Boundary::Open ? "open" : "periodic"; }

inline std::string to_string(Topology t) {
  switch (t) {
    case Topology::AllSites: return "all_sites";
    case Topology::EndSites: return "end_sites";
    case Topology::Explicit: return "explicit";
  }
  return "?";
}

inline std::string to_string(Convention c) {
  return c == Convention::PauliDot ? "pauli" : "spin_half";
}

namespace detail {

inline std::uint64_t site_mask(int site, int total_sites) {
  return std::uint64_t{1} << (total_sites - site);
}

inline void check_total_spins(int n, int max_total) {
  if (n > max_total)
    throw DomainError("operator on " + std::to_string(n) + " spins exceeds configured maximum of " +
                      std::to_string(max_total));
  if (n > 20) throw DomainError("dense operators beyond 20 spins are not supported");
}

// Adds c_xy (s^x s^x + s^y s^y) + c_z s^z s^z acting on sites (i, j) of an
// n-spin register, with s the Pauli matrices.
inline void add_dot_coupling(Matrix& h, int n, int i, int j, double c_xy, double c_z) {
  const std::uint64_t mi = site_mask(i, n);
  const std::uint64_t mj = site_mask(j, n);
  const std::uint64_t dim = std::uint64_t{1} << n;
  if (i == j) {
    // sigma^a sigma^a = 1 for each axis.
    for (std::uint64_t k = 0; k < dim; ++k) h(k, k) += 2.0 * c_xy + c_z;
    return;
  }
  for (std::uint64_t k = 0; k < dim; ++k) {
    const bool up_i = (k & mi) == 0;
    const bool up_j = (k & mj) == 0;
    h(k, k) += (up_i == up_j) ? c_z : -c_z;
    if (up_i != up_j) h(k ^ mi ^ mj, k) += 2.0 * c_xy;
  }
}

}  // namespace detail

/// sigma^axis acting on `site` (1-based) of a register of `total_sites` spins.
inline Matrix pauli_on_site(Axis axis, int site, int total_sites) {
  if (total_sites < 1) throw DomainError("total_sites must be >= 1");
  if (site < 1 || site > total_sites)
    throw DomainError("site " + std::to_string(site) + " outside [1, " +
                      std::to_string(total_sites) + "]");
  detail::check_total_spins(total_sites, 20);
  const std::uint64_t dim = std::uint64_t{1} << total_sites;
  const std::uint64_t mask = detail::site_mask(site, total_sites);
  Matrix out = Matrix::Zero(dim, dim);
  for (std::uint64_t k = 0; k < dim; ++k) {
    const bool up = (k & mask) == 0;
    switch (axis) {
      case Axis::X: out(k ^ mask, k) = 1.0; break;
      // sigma^y|0> = i|1>, sigma^y|1> = -i|0>
      case Axis::Y: out(k ^ mask, k) = up ? kI : -kI; break;
      case Axis::Z: out(k, k) = up ? 1.0 : -1.0; break;
    }
  }
  return out;
}

/// Eigenvalue of sum_i sigma^z_i on computational basis state `index`.
inline int basis_magnetization(std::uint64_t index, int total_sites) {
  const int down = std::popcount(index & ((std::uint64_t{1} << total_sites) - 1));
  return total_sites - 2 * down;
}

/// Diagonal operator sum_i sigma^z_i.
inline Matrix total_sz(int total_sites) {
  detail::check_total_spins(total_sites, 20);
  const std::uint64_t dim = std::uint64_t{1} << total_sites;
  Matrix out = Matrix::Zero(dim, dim);
  for (std::uint64_t k = 0; k < dim; ++k) out(k, k) = basis_magnetization(k, total_sites);
  return out;
}

/// Bonds (i, j) of the chain, 1-based. Periodic adds (N, 1), so N=2 periodic
/// carries the single bond twice.
inline std::vector<std::pair<int, int>> chain_bonds(const ChainSpec& spec) {
  std::vector<std::pair<int, int>> bonds;
  for (int i = 1; i < spec.sites; ++i) bonds.emplace_back(i, i + 1);
  if (spec.boundary == Boundary::Periodic) bonds.emplace_back(spec.sites, 1);
  return bonds;
}

/// H0 = J sum_bonds (sx sx + sy sy + Delta sz sz) + B sum_i sz.
inline Matrix build_chain_hamiltonian(const ChainSpec& spec,
                                      int max_total_spins = kDefaultMaxTotalSpins) {
  spec.validate();
  detail::check_total_spins(spec.sites, max_total_spins);
  const std::uint64_t dim = std::uint64_t{1} << spec.sites;
  Matrix h = Matrix::Zero(dim, dim);
  for (auto [i, j] : chain_bonds(spec))
    detail::add_dot_coupling(h, spec.sites, i, j, spec.coupling,
                             spec.coupling * spec.anisotropy);
  for (std::uint64_t k = 0; k < dim; ++k)
    h(k, k) += spec.field * basis_magnetization(k, spec.sites);
  return h;
}

/// Chain sites each probe qubit couples to, resolved from the topology.
inline std::pair<std::vector<int>, std::vector<int>> coupled_sites(const ChainSpec& chain,
                                                                   const CouplingSpec& coupling) {
  std::vector<int> a;
  std::vector<int> b;
  switch (coupling.topology) {
    case Topology::AllSites:
      for (int i = 1; i <= chain.sites; ++i) a.push_back(i);
      b = a;
      break;
    case Topology::EndSites:
      a = {1};
      b = {chain.sites};
      break;
    case Topology::Explicit:
      a = coupling.sites_a;
      b = coupling.sites_b;
      break;
  }
  if (a.empty() || b.empty()) throw DomainError("coupling: empty site list for a probe qubit");
  for (const auto* list : {&a, &b})
    for (int s : *list)
      if (s < 1 || s > chain.sites)
        throw DomainError("coupling: site " + std::to_string(s) + " outside [1, " +
                          std::to_string(chain.sites) + "]");
  return {a, b};
}

/// H_I = Jp sum_{i in sites(a)} v_a . v_i + Jp sum_{i in sites(b)} v_b . v_i on
/// the (N+2)-spin register, with v = sigma (PauliDot) or sigma/2 (SpinHalfDot).
inline Matrix build_interaction(const ChainSpec& chain, const CouplingSpec& coupling,
                                int max_total_spins = kDefaultMaxTotalSpins) {
  chain.validate();
  const int n = chain.sites + 2;
  detail::check_total_spins(n, max_total_spins);
  const auto [sites_a, sites_b] = coupled_sites(chain, coupling);
  const double scale = coupling.convention == Convention::PauliDot ? 1.0 : 0.25;
  const double c = coupling.strength * scale;
  const std::uint64_t dim = std::uint64_t{1} << n;
  Matrix h = Matrix::Zero(dim, dim);
  if (coupling.strength == 0.0) return h;
  for (int i : sites_a) detail::add_dot_coupling(h, n, chain.sites + 1, i, c, c);
  for (int i : sites_b) detail::add_dot_coupling(h, n, chain.sites + 2, i, c, c);
  return h;
}

/// H = H0 (x) I_4 + H_I.
inline Matrix build_full_hamiltonian(const ChainSpec& chain, const CouplingSpec& coupling,
                                     int max_total_spins = kDefaultMaxTotalSpins) {
  detail::check_total_spins(chain.sites + 2, max_total_spins);
  return kron(build_chain_hamiltonian(chain, max_total_spins), Matrix::Identity(4, 4)) +
         build_interaction(chain, coupling, max_total_spins);
}

}  // namespace xxzent

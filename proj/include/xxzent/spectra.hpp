#pragma once

#include "xxzent/operators.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace xxzent {

inline constexpr double kDefaultDegeneracyTol = 1e-9;

struct Spectrum {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // columns aligned with eigenvalues
  double degeneracy_tol = kDefaultDegeneracyTol;

  Eigen::Index size() const { return eigenvalues.size(); }
};

namespace detail {

// First component with magnitude above `eps` is made real and positive.
inline void fix_phases(Matrix& vecs, double eps = 1e-10) {
  for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
    for (Eigen::Index r = 0; r < vecs.rows(); ++r) {
      const double mag = std::abs(vecs(r, c));
      if (mag > eps) {
        vecs.col(c) *= std::conj(vecs(r, c)) / mag;
        vecs(r, c) = mag;
        break;
      }
    }
  }
}

}  // namespace detail

/// Full eigendecomposition of a Hermitian matrix, ascending eigenvalues,
/// eigenvector phases fixed so the first nonzero component is real positive.
inline Spectrum eig_hermitian(const Matrix& h, double hermiticity_tol = 1e-10,
                              double degeneracy_tol = kDefaultDegeneracyTol) {
  if (h.rows() != h.cols() || h.rows() == 0) throw DomainError("eig_hermitian: matrix must be square and nonempty");
  const double defect = hermiticity_defect(h);
  if (defect > hermiticity_tol)
    throw DomainError("eig_hermitian: matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("eig_hermitian: eigensolver did not converge");
  Spectrum s;
  s.eigenvalues = es.eigenvalues();
  s.eigenvectors = es.eigenvectors();
  s.degeneracy_tol = degeneracy_tol;
  detail::fix_phases(s.eigenvectors);
  return s;
}

struct GroundState {
  double energy = 0.0;
  Vector state;
  bool degenerate = false;
  double gap = std::numeric_limits<double>::infinity();
};

inline GroundState ground_state(const Spectrum& s) {
  GroundState g;
  g.energy = s.eigenvalues(0);
  g.state = s.eigenvectors.col(0);
  if (s.size() > 1) {
    g.gap = s.eigenvalues(1) - s.eigenvalues(0);
    g.degenerate = g.gap < s.degeneracy_tol;
  }
  return g;
}

/// <v| sum_i sigma^z_i |v> for a state on `total_sites` spins.
inline double magnetization_expectation(const Vector& v, int total_sites) {
  double m = 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k)
    m += std::norm(v(k)) * basis_magnetization(static_cast<std::uint64_t>(k), total_sites);
  return m;
}

/// Lowest H0 eigenvalue at B=0 in each magnetization sector. Because H0
/// conserves total sigma^z, the sector minimum at field B is e_M + B*M.
class SectorEnergies {
 public:
  explicit SectorEnergies(ChainSpec chain, int max_total_spins = kDefaultMaxTotalSpins)
      : chain_(chain) {
    const Matrix h = build_chain_hamiltonian(chain_.with_field(0.0), max_total_spins);
    const int n = chain_.sites;
    std::map<int, std::vector<Eigen::Index>> members;
    for (Eigen::Index k = 0; k < h.rows(); ++k)
      members[basis_magnetization(static_cast<std::uint64_t>(k), n)].push_back(k);
    for (const auto& [m, idx] : members) {
      const auto d = static_cast<Eigen::Index>(idx.size());
      Matrix block(d, d);
      for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c) block(r, c) = h(idx[r], idx[c]);
      Eigen::SelfAdjointEigenSolver<Matrix> es(block, Eigen::EigenvaluesOnly);
      sectors_.push_back(m);
      energies_.push_back(es.eigenvalues()(0));
    }
  }

  const std::vector<int>& sectors() const { return sectors_; }
  const std::vector<double>& zero_field_energies() const { return energies_; }
  const ChainSpec& chain() const { return chain_; }

  double energy(std::size_t i, double field) const { return energies_[i] + field * sectors_[i]; }

  /// Magnetization of the lowest sector at `field`; ties go to the larger M.
  int ground_sector(double field) const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < sectors_.size(); ++i)
      if (energy(i, field) <= energy(best, field)) best = i;
    return sectors_[best];
  }

  /// Field at which the minima of sectors m1 and m2 are equal.
  double crossing_field(int m1, int m2) const {
    if (m1 == m2) throw DomainError("crossing_field: sectors must differ");
    return (energy_of(m1) - energy_of(m2)) / static_cast<double>(m2 - m1);
  }

  /// Energy difference between the two lowest sector minima at `field`.
  double sector_gap(double field) const {
    double lo = std::numeric_limits<double>::infinity();
    double next = lo;
    for (std::size_t i = 0; i < sectors_.size(); ++i) {
      const double e = energy(i, field);
      if (e < lo) {
        next = lo;
        lo = e;
      } else if (e < next) {
        next = e;
      }
    }
    return next - lo;
  }

 private:
  double energy_of(int m) const {
    for (std::size_t i = 0; i < sectors_.size(); ++i)
      if (sectors_[i] == m) return energies_[i];
    throw DomainError("no magnetization sector " + std::to_string(m));
  }

  ChainSpec chain_;
  std::vector<int> sectors_;
  std::vector<double> energies_;
};

struct Crossing {
  double field = 0.0;
  int sector_below = 0;
  int sector_above = 0;
};

struct CriticalFieldScan {
  ChainSpec chain_template;
  std::vector<Crossing> crossings;  // ascending in field
  double bracket_tol = 1e-6;
};

struct CrossingSearchOptions {
  double grid_step = 0.01;
  double bracket_tol = 1e-6;
  int max_refinements = 4;  // grid is refined 4x per level until the crossing count is stable
  int max_bisections = 200;
};

namespace detail {

inline void bisect_crossings(const std::function<int(double)>& label, double lo, int s_lo, double hi,
                             int s_hi, const CrossingSearchOptions& opt, int depth,
                             std::vector<Crossing>& out) {
  if (hi - lo <= opt.bracket_tol) {
    out.push_back({0.5 * (lo + hi), s_lo, s_hi});
    return;
  }
  if (depth > opt.max_bisections) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "find_level_crossings: unresolvable interval [" << lo << ", " << hi << "]";
    throw DomainError(msg.str());
  }
  const double mid = 0.5 * (lo + hi);
  const int s_mid = label(mid);
  if (s_mid != s_lo) bisect_crossings(label, lo, s_lo, mid, s_mid, opt, depth + 1, out);
  if (s_mid != s_hi) bisect_crossings(label, mid, s_mid, hi, s_hi, opt, depth + 1, out);
}

inline std::vector<Crossing> scan_crossings(const std::function<int(double)>& label, double lo,
                                            double hi, double step,
                                            const CrossingSearchOptions& opt) {
  std::vector<Crossing> out;
  const auto n = static_cast<long>(std::ceil((hi - lo) / step - 1e-9));
  double prev_b = lo;
  int prev_s = label(lo);
  for (long k = 1; k <= n; ++k) {
    const double b = k == n ? hi : lo + static_cast<double>(k) * step;
    const int s = label(b);
    if (s != prev_s) bisect_crossings(label, prev_b, prev_s, b, s, opt, 0, out);
    prev_b = b;
    prev_s = s;
  }
  return out;
}

}  // namespace detail

/// Locates every field in [b_min, b_max] where the label returned by `label`
/// changes, via a grid scan and bisection. The grid is refined until two
/// consecutive refinement levels agree on the crossing count.
inline std::vector<Crossing> find_label_changes(const std::function<int(double)>& label, double b_min,
                                                double b_max, const CrossingSearchOptions& opt = {}) {
  if (!(b_min < b_max)) throw DomainError("find_level_crossings: field range must be ordered");
  if (opt.grid_step <= 0.0 || opt.bracket_tol <= 0.0)
    throw DomainError("find_level_crossings: grid_step and bracket_tol must be positive");
  double step = opt.grid_step;
  auto current = detail::scan_crossings(label, b_min, b_max, step, opt);
  for (int level = 0; level < opt.max_refinements; ++level) {
    step /= 4.0;
    auto finer = detail::scan_crossings(label, b_min, b_max, step, opt);
    if (finer.size() == current.size()) return finer;
    current = std::move(finer);
  }
  std::ostringstream msg;
  msg.precision(17);
  msg << "find_level_crossings: crossing count did not stabilise after " << opt.max_refinements
      << " refinements; ambiguous intervals:";
  for (const auto& c : current) msg << " [" << c.field - step << ", " << c.field + step << "]";
  throw DomainError(msg.str());
}

/// Fields in [b_min, b_max] at which the chain ground state changes
/// magnetization sector.
inline CriticalFieldScan find_level_crossings(const ChainSpec& chain_template, double b_min,
                                              double b_max, const CrossingSearchOptions& opt = {},
                                              int max_total_spins = kDefaultMaxTotalSpins) {
  chain_template.validate();
  const SectorEnergies sectors(chain_template, max_total_spins);
  CriticalFieldScan scan;
  scan.chain_template = chain_template;
  scan.bracket_tol = opt.bracket_tol;
  scan.crossings = find_label_changes([&](double b) { return sectors.ground_sector(b); }, b_min,
                                      b_max, opt);
  // Replace each bracket by the intersection of the two sector lines.
  for (auto& c : scan.crossings) {
    const double exact = sectors.crossing_field(c.sector_below, c.sector_above);
    if (std::abs(exact - c.field) <= opt.bracket_tol) c.field = exact;
  }
  return scan;
}

}  // namespace xxzent

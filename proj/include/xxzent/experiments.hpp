#pragma once

#include "xxzent/dynamics.hpp"
#include "xxzent/parallel.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace xxzent {

enum class InitialState { Basis01, BellPlus0110, BellPlus0011 };

inline std::string to_string(InitialState s) {
  switch (s) {
    case InitialState::Basis01: return "basis_01";
    case InitialState::BellPlus0110: return "bell_01_10";
    case InitialState::BellPlus0011: return "bell_00_11";
  }
  return "?";
}

inline Vector4 initial_state_vector(InitialState s) {
  Vector4 v = Vector4::Zero();
  const double h = 1.0 / std::numbers::sqrt2;
  switch (s) {
    case InitialState::Basis01: v(1) = 1.0; break;
    case InitialState::BellPlus0110: v(1) = h; v(2) = h; break;
    case InitialState::BellPlus0011: v(0) = h; v(3) = h; break;
  }
  return v;
}

/// start, start + step, ... up to and including stop (within 1e-9 steps).
inline std::vector<double> uniform_grid(double start, double stop, double step) {
  if (!(step > 0.0)) throw DomainError("grid step must be positive");
  if (stop < start) throw DomainError("grid stop must not precede start");
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(n) + 1);
  for (long k = 0; k <= n; ++k) g.push_back(start + static_cast<double>(k) * step);
  return g;
}

// ---------------------------------------------------------------------------
// Concurrence sweeps over the field.

struct SweepResult {
  std::vector<double> fields;            // kept grid points
  std::vector<double> times;
  Eigen::MatrixXd concurrence;           // fields x times
  std::vector<double> skipped_fields;    // dropped: chain ground state (near-)degenerate
  ChainSpec chain_template;
  CouplingSpec coupling;
  InitialState initial = InitialState::Basis01;
};

struct SweepOptions {
  unsigned workers = 1;
  double skip_gap = 10.0 * kDefaultDegeneracyTol;
  int max_total_spins = kDefaultMaxTotalSpins;
};

inline SweepResult sweep_concurrence(const ChainSpec& chain_template, const CouplingSpec& coupling,
                                     InitialState initial, const std::vector<double>& fields,
                                     const std::vector<double>& times, const SweepOptions& opt = {}) {
  if (fields.empty() || times.empty()) throw DomainError("sweep_concurrence: grids must be nonempty");
  check_times(times);
  chain_template.validate();
  // H_I does not depend on B.
  const Matrix h_i = build_interaction(chain_template, coupling, opt.max_total_spins);
  const Vector4 psi0 = initial_state_vector(initial);

  std::vector<std::optional<std::vector<double>>> rows(fields.size());
  parallel_for(fields.size(), opt.workers, [&](std::size_t k) {
    const ChainSpec chain = chain_template.with_field(fields[k]);
    const Spectrum s = eig_hermitian(build_chain_hamiltonian(chain, opt.max_total_spins));
    if (s.size() > 1 && s.eigenvalues(1) - s.eigenvalues(0) < opt.skip_gap) return;
    const auto heff = effective_hamiltonian(s, h_i, {false, chain.field});
    rows[k] = concurrence_trace(heff.matrix, psi0, times).values;
  });

  SweepResult out;
  out.times = times;
  out.chain_template = chain_template;
  out.coupling = coupling;
  out.initial = initial;
  std::size_t kept = 0;
  for (const auto& r : rows) kept += r.has_value();
  if (kept == 0) throw DomainError("sweep_concurrence: every field grid point is degenerate");
  out.concurrence.resize(static_cast<Eigen::Index>(kept), static_cast<Eigen::Index>(times.size()));
  Eigen::Index row = 0;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (!rows[k]) {
      out.skipped_fields.push_back(fields[k]);
      continue;
    }
    out.fields.push_back(fields[k]);
    for (std::size_t t = 0; t < times.size(); ++t) out.concurrence(row, static_cast<Eigen::Index>(t)) = (*rows[k])[t];
    ++row;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Oscillation period of a concurrence trace.

enum class PeriodMethod { ZeroCrossing, SpectralPeak };

inline std::string to_string(PeriodMethod m) {
  return m == PeriodMethod::ZeroCrossing ? "zero_crossing" : "spectral_peak";
}

struct PeriodEstimate {
  double period = 0.0;
  PeriodMethod method = PeriodMethod::ZeroCrossing;
  // Relative disagreement between the two methods; NaN when only the
  // spectral estimate exists.
  double confidence = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> zero_crossing_period;
  std::optional<double> spectral_period;
};

struct PeriodOptions {
  double zero_threshold = 1e-3;
  int fine_bins = 400;
};

namespace detail {

// Times at which the trace touches zero. A sampled minimum counts when it lies
// within threshold plus one grid step of local slope from zero; its position
// is refined by fitting a symmetric V through the neighbours.
inline std::vector<double> zero_touches(const ConcurrenceTrace& tr, double threshold) {
  const auto& t = tr.times;
  const auto& c = tr.values;
  const std::size_t n = c.size();
  std::vector<double> zeros;
  auto push = [&](double z, double min_sep) {
    if (zeros.empty() || z - zeros.back() > min_sep) zeros.push_back(z);
  };
  if (c[0] <= threshold && c[1] > c[0]) push(t[0], 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(c[i] <= c[i - 1] && c[i] <= c[i + 1])) continue;
    if (c[i] == c[i - 1] && c[i] == c[i + 1]) continue;
    const double dl = t[i] - t[i - 1];
    const double dr = t[i + 1] - t[i];
    const double slope = std::max((c[i - 1] - c[i]) / dl, (c[i + 1] - c[i]) / dr);
    if (c[i] > threshold + slope * std::max(dl, dr)) continue;
    const double span = t[i + 1] - t[i - 1];
    const double s = (c[i - 1] + c[i + 1]) / span;
    double z = s > 0.0 ? t[i - 1] + c[i - 1] / s : t[i];
    z = std::clamp(z, t[i - 1], t[i + 1]);
    push(z, 2.0 * std::max(dl, dr));
  }
  if (c[n - 1] <= threshold && c[n - 2] > c[n - 1]) push(t[n - 1], 0.0);
  return zeros;
}

inline double spectral_power(const ConcurrenceTrace& tr, double mean, double f) {
  Complex acc{};
  for (std::size_t i = 0; i < tr.values.size(); ++i)
    acc += (tr.values[i] - mean) * std::polar(1.0, -2.0 * std::numbers::pi * f * tr.times[i]);
  return std::norm(acc);
}

// Dominant frequency of the mean-subtracted trace: coarse scan on the
// 1/span lattice, then a fine scan around the best bin.
inline double spectral_peak_frequency(const ConcurrenceTrace& tr, int fine_bins) {
  const std::size_t n = tr.values.size();
  const double span = tr.times.back() - tr.times.front();
  double mean = 0.0;
  for (double v : tr.values) mean += v;
  mean /= static_cast<double>(n);
  const double df = 1.0 / span;
  std::size_t best_k = 1;
  double best_p = -1.0;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const double p = spectral_power(tr, mean, static_cast<double>(k) * df);
    if (p > best_p) {
      best_p = p;
      best_k = k;
    }
  }
  double f_best = static_cast<double>(best_k) * df;
  const double lo = std::max(0.5 * df, f_best - df);
  const double hi = f_best + df;
  for (int k = 0; k <= fine_bins; ++k) {
    const double f = lo + (hi - lo) * k / fine_bins;
    const double p = spectral_power(tr, mean, f);
    if (p > best_p) {
      best_p = p;
      f_best = f;
    }
  }
  return f_best;
}

}  // namespace detail

inline PeriodEstimate estimate_period(const ConcurrenceTrace& trace, const PeriodOptions& opt = {}) {
  if (trace.times.size() != trace.values.size() || trace.times.size() < 5)
    throw DomainError("estimate_period: trace needs at least 5 samples");
  check_times(trace.times);
  const auto [lo, hi] = std::minmax_element(trace.values.begin(), trace.values.end());
  if (*hi - *lo < 1e-9) throw DomainError("estimate_period: trace does not oscillate; extend t_grid");

  PeriodEstimate est;
  const auto zeros = detail::zero_touches(trace, opt.zero_threshold);
  if (zeros.size() >= 3)
    est.zero_crossing_period = (zeros.back() - zeros.front()) / static_cast<double>(zeros.size() - 1);

  const double span = trace.times.back() - trace.times.front();
  const double f = detail::spectral_peak_frequency(trace, opt.fine_bins);
  if (f * span >= 2.0) est.spectral_period = 1.0 / f;

  if (est.zero_crossing_period) {
    est.period = *est.zero_crossing_period;
    est.method = PeriodMethod::ZeroCrossing;
    if (est.spectral_period) est.confidence = std::abs(*est.spectral_period - est.period) / est.period;
  } else if (est.spectral_period) {
    est.period = *est.spectral_period;
    est.method = PeriodMethod::SpectralPeak;
  } else {
    throw DomainError("estimate_period: fewer than 2 oscillations; extend t_grid");
  }
  return est;
}

// ---------------------------------------------------------------------------
// Critical-field structure.

struct BcPoint {
  int sites = 0;
  double inverse_sites = 0.0;
  double critical_field = 0.0;
};

struct BcFit {
  std::vector<BcPoint> points;
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

struct ScanRange {
  double b_min = 0.0;
  double b_max = 4.0;
  CrossingSearchOptions search{};
};

/// Least-squares line through (1/N, first critical field).
inline BcFit critical_field_scaling(const std::vector<int>& sizes, const ChainSpec& chain_template,
                                    const ScanRange& range = {}) {
  if (sizes.size() < 3) throw DomainError("critical_field_scaling: need at least 3 chain sizes");
  BcFit fit;
  for (int n : sizes) {
    if (n % 2 != 0) throw DomainError("critical_field_scaling: N must be even, got " + std::to_string(n));
    ChainSpec c = chain_template;
    c.sites = n;
    const auto scan = find_level_crossings(c, range.b_min, range.b_max, range.search);
    if (scan.crossings.empty())
      throw DomainError("critical_field_scaling: no crossing for N=" + std::to_string(n));
    fit.points.push_back({n, 1.0 / n, scan.crossings.front().field});
  }
  const auto m = static_cast<Eigen::Index>(fit.points.size());
  Eigen::MatrixXd a(m, 2);
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    a(i, 0) = fit.points[i].inverse_sites;
    a(i, 1) = 1.0;
    b(i) = fit.points[i].critical_field;
  }
  const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(b);
  fit.slope = coef(0);
  fit.intercept = coef(1);
  fit.max_residual = (a * coef - b).cwiseAbs().maxCoeff();
  return fit;
}

struct RegionReport {
  int sites = 0;
  std::vector<Crossing> crossings;
  std::vector<int> sectors;  // ground-state magnetization per region, low field first
  int region_count = 0;
  int expected_regions = 0;  // N/2 + 1
  bool matches = false;
};

inline RegionReport region_structure(const ChainSpec& chain_template, const ScanRange& range = {}) {
  const auto scan = find_level_crossings(chain_template, range.b_min, range.b_max, range.search);
  RegionReport r;
  r.sites = chain_template.sites;
  r.crossings = scan.crossings;
  const SectorEnergies sectors(chain_template);
  r.sectors.push_back(sectors.ground_sector(range.b_min));
  for (const auto& c : scan.crossings) r.sectors.push_back(c.sector_above);
  r.region_count = static_cast<int>(r.sectors.size());
  r.expected_regions = chain_template.sites / 2 + 1;
  r.matches = r.region_count == r.expected_regions;
  return r;
}

// ---------------------------------------------------------------------------
// Below/above critical-field period ratio.

struct PeriodRatio {
  int sites = 0;
  double first_critical = 0.0;
  double second_critical = 0.0;  // upper edge of the first region above B_C
  double field_below = 0.0;
  double field_above = 0.0;
  PeriodEstimate below;
  PeriodEstimate above;
  double ratio = 0.0;
  double predicted = 0.0;  // sqrt(N (N + 1))
  double relative_error = 0.0;
  bool agrees = false;
};

struct PeriodScalingOptions {
  ScanRange range{};
  double tolerance = 0.2;
  double t_max = 200.0;
  double t_step = 0.1;
  double t_max_limit = 2.0e5;
  unsigned workers = 1;
};

/// Period of the |01> concurrence trace at one field. The time window is
/// doubled (with the step) until two oscillations are resolved.
inline PeriodEstimate measure_period(const ChainSpec& chain, const CouplingSpec& coupling,
                                     const PeriodScalingOptions& opt = {}) {
  const auto heff = effective_hamiltonian(chain, coupling);
  const Vector4 psi0 = initial_state_vector(InitialState::Basis01);
  double t_max = opt.t_max;
  double step = opt.t_step;
  for (;;) {
    try {
      return estimate_period(concurrence_trace(heff.matrix, psi0, uniform_grid(0.0, t_max, step)));
    } catch (const DomainError&) {
      if (t_max * 2.0 > opt.t_max_limit) throw;
      t_max *= 2.0;
      step *= 2.0;
    }
  }
}

/// For each N, the period ratio T(B below the first B_C) / T(B above it).
/// Fields are taken at the midpoints of the first two ground-state regions.
inline std::vector<PeriodRatio> check_period_scaling(const std::vector<int>& sizes,
                                                     const ChainSpec& chain_template,
                                                     const CouplingSpec& coupling,
                                                     const PeriodScalingOptions& opt = {}) {
  std::vector<PeriodRatio> out(sizes.size());
  for (int n : sizes)
    if (n % 2 != 0 || n < 2) throw DomainError("check_period_scaling: N must be even, got " + std::to_string(n));
  parallel_for(sizes.size(), opt.workers, [&](std::size_t i) {
    ChainSpec chain = chain_template;
    chain.sites = sizes[i];
    detail::check_total_spins(chain.sites + 2, kDefaultMaxTotalSpins);
    const auto scan = find_level_crossings(chain, opt.range.b_min, opt.range.b_max, opt.range.search);
    if (scan.crossings.empty())
      throw DomainError("check_period_scaling: no critical field for N=" + std::to_string(chain.sites));
    PeriodRatio r;
    r.sites = chain.sites;
    r.first_critical = scan.crossings[0].field;
    r.second_critical = scan.crossings.size() > 1 ? scan.crossings[1].field : opt.range.b_max;
    r.field_below = 0.5 * (opt.range.b_min + r.first_critical);
    r.field_above = 0.5 * (r.first_critical + r.second_critical);
    r.below = measure_period(chain.with_field(r.field_below), coupling, opt);
    r.above = measure_period(chain.with_field(r.field_above), coupling, opt);
    r.ratio = r.below.period / r.above.period;
    r.predicted = std::sqrt(static_cast<double>(r.sites) * (r.sites + 1));
    r.relative_error = std::abs(r.ratio - r.predicted) / r.predicted;
    r.agrees = r.relative_error <= opt.tolerance;
    out[i] = r;
  });
  return out;
}

struct TraceStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

inline TraceStats trace_stats(const std::vector<double>& v) {
  if (v.empty()) throw DomainError("trace_stats: empty trace");
  TraceStats s{v[0], v[0], 0.0};
  for (double x : v) {
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
    s.mean += x;
  }
  s.mean /= static_cast<double>(v.size());
  return s;
}

}  // namespace xxzent

#pragma once

// Subcommand dispatch for the command-line front end: every run writes its
// CSV outputs plus manifest.json into the output directory.

#include "xxzent/config.hpp"
#include "xxzent/csv.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace xxzent {

inline constexpr const char* kToolName = "xxzent";
inline constexpr const char* kToolVersion = "1.0.0";

struct RunOutcome {
  std::vector<std::string> files;  // relative to the output directory
  nlohmann::json summary = nlohmann::json::object();
};

namespace detail {

class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path root) : root_(std::move(root)) {
    std::error_code ec;
    std::filesystem::create_directories(root_, ec);
    if (ec || !std::filesystem::is_directory(root_))
      throw std::runtime_error("cannot create output directory " + root_.string());
  }

  csv::Writer open(const std::string& name, std::vector<std::string> header, RunOutcome& outcome) const {
    outcome.files.push_back(name);
    return csv::Writer((root_ / name).string(), std::move(header));
  }

  const std::filesystem::path& path() const { return root_; }

 private:
  std::filesystem::path root_;
};

inline void write_g_row(csv::Writer& w, const std::string& topology, const std::string& convention,
                        const Matrix4& h, double reference) {
  const GExtraction g = extract_g(h);
  // Structural checks: only the |01>,|10> coherence off the diagonal, and
  // commuting with z_a + z_b.
  double stray = 0.0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if (r != c && !((r == 1 && c == 2) || (r == 2 && c == 1))) stray = std::max(stray, std::abs(h(r, c)));
  const Matrix4 z = probe_sz_sum();
  const double comm = (h * z - z * h).cwiseAbs().maxCoeff();
  w.row({topology, convention, g.g_diag, g.g_offdiag, g.z_component, g.residual, g.residual_without_z,
         reference, stray, comm});
}

inline std::vector<std::string> g_header() {
  return {"topology", "convention", "g_diag", "g_offdiag", "z_component", "residual",
          "residual_without_z", "reference_g", "max_stray_offdiag", "max_commutator_sz"};
}

inline void run_spectrum(const RunConfig& cfg, const OutputDir& dir, RunOutcome& out) {
  const Spectrum s = eig_hermitian(build_chain_hamiltonian(cfg.chain, cfg.max_total_spins));
  auto w = dir.open("spectrum.csv", {"index", "energy", "magnetization"}, out);
  for (Eigen::Index k = 0; k < s.size(); ++k)
    w.row({static_cast<long long>(k), s.eigenvalues(k),
           magnetization_expectation(s.eigenvectors.col(k), cfg.chain.sites)});
  const GroundState g = ground_state(s);
  out.summary["ground_energy"] = g.energy;
  out.summary["ground_degenerate"] = g.degenerate;
}

inline void run_effective(const RunConfig& cfg, const OutputDir& dir, RunOutcome& out) {
  const auto heff = effective_hamiltonian(cfg.chain, cfg.coupling, false, cfg.max_total_spins);
  {
    auto w = dir.open("heff.csv", {"row", "col", "re", "im"}, out);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        w.row({static_cast<long long>(r), static_cast<long long>(c), heff.matrix(r, c).real(),
               heff.matrix(r, c).imag()});
  }
  const double ref = reference_g(cfg.coupling.strength, cfg.chain.anisotropy, cfg.chain.field);
  {
    auto w = dir.open("g_extraction.csv", g_header(), out);
    write_g_row(w, to_string(cfg.coupling.topology), to_string(cfg.coupling.convention), heff.matrix, ref);
  }
  auto w = dir.open("g_comparison.csv", g_header(), out);
  for (Topology t : {Topology::AllSites, Topology::EndSites})
    for (Convention c : {Convention::PauliDot, Convention::SpinHalfDot}) {
      CouplingSpec cs = cfg.coupling;
      cs.topology = t;
      cs.convention = c;
      cs.sites_a.clear();
      cs.sites_b.clear();
      write_g_row(w, to_string(t), to_string(c),
                  effective_hamiltonian(cfg.chain, cs, false, cfg.max_total_spins).matrix, ref);
    }
  out.summary["reference_g"] = ref;
}

inline void run_evolve(const RunConfig& cfg, const OutputDir& dir, RunOutcome& out) {
  const auto heff = effective_hamiltonian(cfg.chain, cfg.coupling, false, cfg.max_total_spins);
  const auto trace = concurrence_trace(heff.matrix, initial_state_vector(cfg.initial_state), cfg.time_grid.values());
  auto w = dir.open("trace.csv", {"t", "concurrence"}, out);
  for (std::size_t k = 0; k < trace.times.size(); ++k) w.row({trace.times[k], trace.values[k]});
  const auto st = trace_stats(trace.values);
  out.summary["min"] = st.min;
  out.summary["max"] = st.max;
  out.summary["mean"] = st.mean;
}

inline void run_sweep(const RunConfig& cfg, const OutputDir& dir, RunOutcome& out) {
  SweepOptions opt;
  opt.workers = cfg.workers;
  opt.max_total_spins = cfg.max_total_spins;
  const auto res = sweep_concurrence(cfg.chain, cfg.coupling, cfg.initial_state, cfg.field_grid.values(),
                                     cfg.time_grid.values(), opt);
  {
    auto w = dir.open("sweep.csv", {"B", "t", "concurrence"}, out);
    for (std::size_t b = 0; b < res.fields.size(); ++b)
      for (std::size_t t = 0; t < res.times.size(); ++t)
        w.row({res.fields[b], res.times[t],
               res.concurrence(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(t))});
  }
  auto w = dir.open("skipped.csv", {"B", "reason"}, out);
  for (double b : res.skipped_fields) w.row({b, std::string("degenerate_ground_state")});
  out.summary["skipped_fields"] = res.skipped_fields;
}

inline void run_critical(const RunConfig& cfg, const OutputDir& dir, RunOutcome& out) {
  const auto scan = find_level_crossings(cfg.chain, cfg.scan.b_min, cfg.scan.b_max, cfg.scan.search,
                                         cfg.max_total_spins);
  auto w = dir.open("crossings.csv", {"index", "B_C", "sector_below", "sector_above"}, out);
  long long k = 0;
  for (const auto& c : scan.crossings)
    w.row({k++, c.field, static_cast<long long>(c.sector_below), static_cast<long long>(c.sector_above)});
  out.summary["crossing_count"] = scan.crossings.size();
}

inline void run_scaling(const RunConfig& cfg, const OutputDir& dir, RunOutcome& out) {
  const BcFit fit = critical_field_scaling(cfg.scaling_sizes, cfg.chain, cfg.scan);
  {
    auto w = dir.open("bc_fit.csv", {"N", "inv_N", "B_C", "fitted", "residual"}, out);
    for (const auto& p : fit.points) {
      const double fitted = fit.slope * p.inverse_sites + fit.intercept;
      w.row({static_cast<long long>(p.sites), p.inverse_sites, p.critical_field, fitted, p.critical_field - fitted});
    }
  }
  {
    auto w = dir.open("bc_fit_summary.csv", {"boundary", "slope", "intercept", "max_residual"}, out);
    w.row({to_string(cfg.chain.boundary), fit.slope, fit.intercept, fit.max_residual});
  }
  {
    auto w = dir.open("regions.csv", {"N", "region_count", "expected", "matches", "sectors"}, out);
    for (int n : cfg.scaling_sizes) {
      ChainSpec c = cfg.chain;
      c.sites = n;
      const auto r = region_structure(c, cfg.scan);
      std::string sectors;
      for (int s : r.sectors) sectors += (sectors.empty() ? "" : ";") + std::to_string(s);
      w.row({static_cast<long long>(n), static_cast<long long>(r.region_count),
             static_cast<long long>(r.expected_regions), static_cast<long long>(r.matches), sectors});
    }
  }
  PeriodScalingOptions popt;
  popt.range = cfg.scan;
  popt.tolerance = cfg.period_tolerance;
  popt.workers = cfg.workers;
  const auto ratios = check_period_scaling(cfg.period_sizes, cfg.chain, cfg.coupling, popt);
  auto w = dir.open("period_ratios.csv",
                    {"N", "B_C1", "B_C2", "B_below", "B_above", "T_below", "T_above", "method_below",
                     "method_above", "ratio", "predicted", "relative_error", "agrees"},
                    out);
  for (const auto& r : ratios)
    w.row({static_cast<long long>(r.sites), r.first_critical, r.second_critical, r.field_below, r.field_above,
           r.below.period, r.above.period, to_string(r.below.method), to_string(r.above.method), r.ratio,
           r.predicted, r.relative_error, static_cast<long long>(r.agrees)});
  out.summary["slope"] = fit.slope;
  out.summary["intercept"] = fit.intercept;
  out.summary["max_residual"] = fit.max_residual;
}

inline void run_fullcheck(const RunConfig& cfg, const OutputDir& dir, RunOutcome& out) {
  const auto res = full_vs_effective(cfg.chain, cfg.coupling, initial_state_vector(cfg.initial_state),
                                     cfg.time_grid.values(), cfg.max_total_spins);
  auto w = dir.open("fullcheck.csv", {"t", "C_full", "C_eff", "abs_dev"}, out);
  for (std::size_t k = 0; k < res.full.times.size(); ++k)
    w.row({res.full.times[k], res.full.values[k], res.effective.values[k],
           std::abs(res.full.values[k] - res.effective.values[k])});
  out.summary["max_deviation"] = res.max_deviation;
}

}  // namespace detail

/// Executes one configured run and writes manifest.json last.
inline RunOutcome run(const RunConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  const detail::OutputDir dir(cfg.output_dir);
  RunOutcome out;
  switch (cfg.subcommand) {
    case Subcommand::Spectrum: detail::run_spectrum(cfg, dir, out); break;
    case Subcommand::Effective: detail::run_effective(cfg, dir, out); break;
    case Subcommand::Evolve: detail::run_evolve(cfg, dir, out); break;
    case Subcommand::Sweep: detail::run_sweep(cfg, dir, out); break;
    case Subcommand::Critical: detail::run_critical(cfg, dir, out); break;
    case Subcommand::Scaling: detail::run_scaling(cfg, dir, out); break;
    case Subcommand::Fullcheck: detail::run_fullcheck(cfg, dir, out); break;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  nlohmann::json manifest;
  manifest["tool"] = kToolName;
  manifest["version"] = kToolVersion;
  manifest["config"] = to_json(cfg);
  manifest["outputs"] = out.files;
  manifest["summary"] = out.summary;
  manifest["wall_time_seconds"] = wall;
  std::ofstream mf(dir.path() / "manifest.json", std::ios::binary);
  if (!mf) throw std::runtime_error("cannot write manifest.json");
  mf << manifest.dump(2) << '\n';
  return out;
}

}  // namespace xxzent

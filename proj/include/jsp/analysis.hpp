#pragma once

// Ground-state confirmation, scatter/histogram data series, the step-count
// sweep around a classical guess, and violation statistics for sample sets.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "jsp/classical.hpp"
#include "jsp/model.hpp"
#include "jsp/parallel.hpp"
#include "jsp/qubo.hpp"
#include "jsp/rng.hpp"
#include "jsp/sampler.hpp"

namespace jsp {

struct ScoredRoute {
  Route route;
  double h0 = 0.0;
};

/// Every xi-route with its H0, in enumeration order.
inline std::vector<ScoredRoute> score_all_routes(const JspInstance& inst, std::size_t xi,
                                                 const CoefficientSet& c, std::size_t workers = 1) {
  const std::size_t n = inst.size();
  if (xi < 1 || xi > n) throw std::invalid_argument("invalid step count");
  std::vector<std::vector<ScoredRoute>> parts(n);
  parallel_for(n, workers, [&](std::size_t first) {
    for_each_route_from(inst, xi, first, [&](const Route& r) {
      parts[first].push_back({r, natural_energy(inst, r.places, c)});
    });
  });
  std::vector<ScoredRoute> all;
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

/// True when, among routes of equal priority, ordering by H0 and ordering by
/// total time agree (ties within 1e-9 relative count as equal).
inline bool equal_priority_order_consistent(std::vector<ScoredRoute> routes) {
  std::sort(routes.begin(), routes.end(), [](const ScoredRoute& a, const ScoredRoute& b) {
    if (a.route.p_tot != b.route.p_tot) return a.route.p_tot < b.route.p_tot;
    return a.route.t_tot < b.route.t_tot;
  });
  for (std::size_t k = 1; k < routes.size(); ++k) {
    const auto& a = routes[k - 1];
    const auto& b = routes[k];
    if (a.route.p_tot != b.route.p_tot) continue;
    const bool same_t = close_rel(a.route.t_tot, b.route.t_tot);
    const bool same_h = close_rel(a.h0, b.h0);
    if (same_t != same_h) return false;
    if (!same_t && !(b.h0 > a.h0)) return false;
  }
  return true;
}

struct ConfirmationReport {
  std::size_t xi = 0;
  std::size_t routes_total = 0;
  std::size_t feasible_count = 0;
  std::optional<double> best_priority;      // max p_tot among feasible routes
  std::optional<double> min_feasible_h0;
  std::vector<ScoredRoute> min_energy_routes;   // feasible routes at min H0
  std::vector<ScoredRoute> max_priority_routes; // feasible routes at max p_tot, by t_tot
  bool agrees = false;
  /// Lowest H0 among all other routes minus lowest H0 among the optima.
  /// Positive when the optima are strictly the lowest-energy routes.
  std::optional<double> energy_gap;
  bool optima_time_ordered = false;
};

inline ConfirmationReport confirm_ground_state(const JspInstance& inst, std::size_t xi,
                                               const CoefficientSet& c, std::size_t workers = 1) {
  const auto all = score_all_routes(inst, xi, c, workers);
  ConfirmationReport rep;
  rep.xi = xi;
  rep.routes_total = all.size();
  for (const auto& s : all) {
    if (!feasible(inst, s.route)) continue;
    ++rep.feasible_count;
    if (!rep.best_priority || s.route.p_tot > *rep.best_priority) rep.best_priority = s.route.p_tot;
    if (!rep.min_feasible_h0 || s.h0 < *rep.min_feasible_h0) rep.min_feasible_h0 = s.h0;
  }
  if (rep.feasible_count == 0) return rep;

  double min_other = std::numeric_limits<double>::infinity();
  double min_optimum = std::numeric_limits<double>::infinity();
  for (const auto& s : all) {
    const bool feas = feasible(inst, s.route);
    if (feas && close_rel(s.h0, *rep.min_feasible_h0)) rep.min_energy_routes.push_back(s);
    if (feas && s.route.p_tot == *rep.best_priority) {
      rep.max_priority_routes.push_back(s);
      min_optimum = std::min(min_optimum, s.h0);
    } else {
      min_other = std::min(min_other, s.h0);
    }
  }
  std::stable_sort(rep.max_priority_routes.begin(), rep.max_priority_routes.end(),
                   [](const ScoredRoute& a, const ScoredRoute& b) {
                     return a.route.t_tot < b.route.t_tot;
                   });
  rep.agrees = std::all_of(rep.min_energy_routes.begin(), rep.min_energy_routes.end(),
                           [&](const ScoredRoute& s) { return s.route.p_tot == *rep.best_priority; });
  if (std::isfinite(min_other)) rep.energy_gap = min_other - min_optimum;
  rep.optima_time_ordered = equal_priority_order_consistent(rep.max_priority_routes);
  return rep;
}

inline void write_confirmation(std::ostream& os, const JspInstance& inst,
                               const ConfirmationReport& rep) {
  using detail::format_number;
  os << "xi=" << rep.xi << '\n'
     << "routes=" << rep.routes_total << '\n'
     << "feasible=" << rep.feasible_count << '\n';
  if (!rep.best_priority) {
    os << "no feasible route\n"
       << "agrees=false\n";
    return;
  }
  os << "best_priority=" << format_number(*rep.best_priority) << '\n'
     << "min_feasible_h0=" << format_number(*rep.min_feasible_h0) << '\n';
  os << "minimum-energy feasible routes:\n";
  for (const auto& s : rep.min_energy_routes)
    os << "  p=" << format_number(s.route.p_tot) << " t=" << format_number(s.route.t_tot)
       << " h0=" << format_number(s.h0) << ' ' << route_label(inst, s.route.places) << '\n';
  os << "maximum-priority feasible routes (by total time):\n";
  for (const auto& s : rep.max_priority_routes)
    os << "  p=" << format_number(s.route.p_tot) << " t=" << format_number(s.route.t_tot)
       << " h0=" << format_number(s.h0) << ' ' << route_label(inst, s.route.places) << '\n';
  os << "energy_gap=" << (rep.energy_gap ? format_number(*rep.energy_gap) : "none") << '\n'
     << "optima_time_ordered=" << (rep.optima_time_ordered ? "true" : "false") << '\n'
     << "agrees=" << (rep.agrees ? "true" : "false") << '\n';
}

// ---------------------------------------------------------------------------
// Scatter

struct ScatterPoint {
  double p_tot = 0.0;
  double t_tot = 0.0;
  double h0 = 0.0;
};

struct ScatterData {
  std::vector<ScatterPoint> points;
  double t_max = 0.0;
  /// H0 = 0 reads p_tot = slope * t_tot; only defined when c_tt == c_vt.
  std::optional<double> diagonal_slope;
};

inline ScatterData scatter_data(const JspInstance& inst, std::size_t xi, const CoefficientSet& c,
                                std::size_t workers = 1) {
  ScatterData out;
  out.t_max = inst.t_max;
  if (c.c_tt == c.c_vt) out.diagonal_slope = c.c_tt / c.c_p;
  for (const auto& s : score_all_routes(inst, xi, c, workers))
    out.points.push_back({s.route.p_tot, s.route.t_tot, s.h0});
  return out;
}

inline void write_scatter_csv(std::ostream& os, const ScatterData& data) {
  using detail::format_number;
  os << "# t_max=" << format_number(data.t_max) << '\n';
  if (data.diagonal_slope) os << "# diagonal_slope=" << format_number(*data.diagonal_slope) << '\n';
  os << "p_tot,t_tot,h0\n";
  for (const auto& p : data.points)
    os << format_number(p.p_tot) << ',' << format_number(p.t_tot) << ',' << format_number(p.h0)
       << '\n';
}

// ---------------------------------------------------------------------------
// Histogram

struct WeightedValue {
  double value = 0.0;
  std::uint64_t count = 1;
};

struct Histogram {
  std::vector<double> edges;  // bins + 1, strictly increasing
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
};

/// Equal-width bins over [min, max]; bins are right-open except the last.
inline Histogram histogram(std::span<const WeightedValue> values, std::size_t bins) {
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  if (values.empty()) throw std::invalid_argument("histogram of empty input");
  double lo = values[0].value, hi = values[0].value;
  for (const auto& v : values) {
    lo = std::min(lo, v.value);
    hi = std::max(hi, v.value);
  }
  if (hi == lo) hi = lo + 1.0;
  const double width = (hi - lo) / static_cast<double>(bins);
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t k = 0; k < bins; ++k) h.edges[k] = lo + width * static_cast<double>(k);
  h.edges[bins] = hi;
  h.counts.assign(bins, 0);
  for (const auto& v : values) {
    auto k = static_cast<std::size_t>(std::floor((v.value - lo) / width));
    k = std::min(k, bins - 1);
    // keep the bin consistent with the stored edges under rounding
    while (k > 0 && v.value < h.edges[k]) --k;
    while (k + 1 < bins && v.value >= h.edges[k + 1]) ++k;
    h.counts[k] += v.count;
    h.total += v.count;
  }
  return h;
}

inline Histogram histogram(std::span<const double> values, std::size_t bins) {
  std::vector<WeightedValue> w;
  w.reserve(values.size());
  for (double v : values) w.push_back({v, 1});
  return histogram(w, bins);
}

inline Histogram histogram(const SampleSet& set, std::size_t bins) {
  std::vector<WeightedValue> w;
  w.reserve(set.records.size());
  for (const auto& r : set.records) w.push_back({r.energy, r.occurrences});
  return histogram(w, bins);
}

inline void write_histogram_csv(std::ostream& os, const Histogram& h) {
  using detail::format_number;
  os << "bin_lo,bin_hi,count\n";
  for (std::size_t k = 0; k < h.counts.size(); ++k)
    os << format_number(h.edges[k]) << ',' << format_number(h.edges[k + 1]) << ',' << h.counts[k]
       << '\n';
}

// ---------------------------------------------------------------------------
// Violations

struct ViolationBreakdown {
  std::uint64_t valid = 0;
  std::uint64_t ops_only = 0;  // some step without exactly one place
  std::uint64_t oam_only = 0;  // some place at more than one step
  std::uint64_t both = 0;

  std::uint64_t total() const { return valid + ops_only + oam_only + both; }
  friend bool operator==(const ViolationBreakdown&, const ViolationBreakdown&) = default;
};

inline ViolationBreakdown violation_breakdown(const SampleSet& set, std::size_t n, std::size_t xi) {
  ViolationBreakdown out;
  for (const auto& r : set.records) {
    const auto d = decode(r.bits, n, xi);
    const bool ops = d.step_violations > 0;
    const bool oam = d.place_violations > 0;
    (ops && oam ? out.both : ops ? out.ops_only : oam ? out.oam_only : out.valid) += r.occurrences;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sweep

struct SolverConfig {
  enum class Kind { uniform, anneal };
  Kind kind = Kind::anneal;
  AnnealParams params;  // uniform uses reads, seed and workers only
};

inline SampleSet run_solver(const QuboModel& model, const SolverConfig& solver) {
  if (solver.kind == SolverConfig::Kind::uniform)
    return sample_uniform(model, solver.params.reads, solver.params.seed, solver.params.workers);
  return simulated_anneal(model, solver.params);
}

struct SweepLeg {
  std::size_t xi = 0;
  std::uint64_t reads = 0;
  std::uint64_t feasible = 0;  // valid encodings with t_tot <= t_max
  ViolationBreakdown breakdown;
  std::optional<Route> best;   // best feasible decoded route
  std::optional<Route> lowest_energy_valid;  // valid decoded route of minimum energy, feasible or not
};

struct SweepResult {
  std::size_t s_cl = 0;
  std::size_t delta = 0;
  std::vector<SweepLeg> legs;
  std::optional<Route> winner;  // empty: no solution found
};

/// Samples the QUBO for every xi in [lo, hi], keeps decoded routes within
/// t_max, and picks the overall winner (max p_tot, then min t_tot, then
/// lexicographic). Leg xi samples with seed derive_seed(seed, xi).
inline SweepResult sweep_range(const JspInstance& inst, std::size_t lo, std::size_t hi,
                               const SolverConfig& solver, const CoefficientSet& c) {
  if (lo < 1 || hi > inst.size() || lo > hi) throw std::invalid_argument("invalid step range");
  SweepResult res;
  for (std::size_t xi = lo; xi <= hi; ++xi) {
    const auto model = build_qubo(inst, xi, c);
    auto leg_solver = solver;
    leg_solver.params.seed = derive_seed(solver.params.seed, xi);
    const auto set = run_solver(model, leg_solver);

    SweepLeg leg;
    leg.xi = xi;
    leg.reads = set.total_reads;
    leg.breakdown = violation_breakdown(set, inst.size(), xi);
    for (const auto& r : set.records) {
      const auto d = decode(r.bits, inst.size(), xi);
      if (!d.route) continue;
      const auto route = route_stats(inst, *d.route);
      if (!leg.lowest_energy_valid) leg.lowest_energy_valid = route;  // records ascend by energy
      if (!feasible(inst, route)) continue;
      leg.feasible += r.occurrences;
      if (!leg.best || better_route(route, *leg.best)) leg.best = route;
    }
    if (leg.best && (!res.winner || better_route(*leg.best, *res.winner))) res.winner = leg.best;
    res.legs.push_back(std::move(leg));
  }
  return res;
}

/// Sweeps xi over [s_cl - delta, s_cl + delta] clipped to [1, N], with s_cl
/// the length of the greedy route.
inline SweepResult sweep(const JspInstance& inst, std::size_t delta, const SolverConfig& solver,
                         const CoefficientSet& c) {
  const std::size_t s_cl = greedy_guess(inst).size();
  const std::size_t lo = std::max<std::size_t>(1, s_cl > delta ? s_cl - delta : 1);
  const std::size_t hi = std::min(inst.size(), s_cl + delta);
  SweepResult res;
  if (lo <= hi) res = sweep_range(inst, lo, hi, solver, c);
  res.s_cl = s_cl;
  res.delta = delta;
  return res;
}

/// `kind,xi,reads,valid,feasible,p_tot,t_tot,route`: one `xi` row per leg,
/// then a `winner` row (`winner,none,...` when nothing feasible was found).
inline void write_sweep_csv(std::ostream& os, const JspInstance& inst, const SweepResult& res) {
  using detail::format_number;
  os << "kind,xi,reads,valid,feasible,p_tot,t_tot,route\n";
  for (const auto& leg : res.legs) {
    os << "xi," << leg.xi << ',' << leg.reads << ',' << leg.breakdown.valid << ',' << leg.feasible
       << ',';
    if (leg.best)
      os << format_number(leg.best->p_tot) << ',' << format_number(leg.best->t_tot) << ','
         << route_label(inst, leg.best->places);
    else
      os << "none,none,none";
    os << '\n';
  }
  if (res.winner) {
    os << "winner," << res.winner->size() << ",,,," << format_number(res.winner->p_tot) << ','
       << format_number(res.winner->t_tot) << ',' << route_label(inst, res.winner->places) << '\n';
  } else {
    os << "winner,none,,,,none,none,none\n";
  }
}

}  // namespace jsp

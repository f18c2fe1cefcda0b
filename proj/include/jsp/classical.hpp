#pragma once

// Classical baselines: route statistics, exhaustive enumeration, uniformly
// random route sampling, and a greedy guess for the characteristic step count.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "jsp/model.hpp"
#include "jsp/parallel.hpp"
#include "jsp/qubo.hpp"
#include "jsp/rng.hpp"

namespace jsp {

struct Route {
  std::vector<std::size_t> places;
  double p_tot = 0.0;
  double t_tot = 0.0;

  std::size_t size() const { return places.size(); }
  friend bool operator==(const Route&, const Route&) = default;
};

namespace detail {

// Sums over sorted indices so every ordering of one place set gives the same bits.
inline double canonical_sum(const JspInstance& inst, std::span<const std::size_t> route,
                            double Place::*field) {
  std::vector<std::size_t> sorted(route.begin(), route.end());
  std::sort(sorted.begin(), sorted.end());
  double s = 0.0;
  for (auto i : sorted) s += inst.places[i].*field;
  return s;
}

inline Route make_route(const JspInstance& inst, std::span<const std::size_t> places) {
  Route r;
  r.places.assign(places.begin(), places.end());
  r.p_tot = canonical_sum(inst, places, &Place::priority);
  r.t_tot = route_leagues(inst, places) / inst.speed +
            canonical_sum(inst, places, &Place::visit_days);
  return r;
}

}  // namespace detail

/// Priority and total days (travel + visits) of a home-anchored route.
inline Route route_stats(const JspInstance& inst, std::span<const std::size_t> places) {
  if (places.empty()) throw std::invalid_argument("route must visit at least one place");
  check_distinct(places, inst.size());
  return detail::make_route(inst, places);
}

/// True when `a` is the better route: higher priority, then shorter, then
/// lexicographically smaller.
inline bool better_route(const Route& a, const Route& b) {
  if (a.p_tot != b.p_tot) return a.p_tot > b.p_tot;
  if (a.t_tot != b.t_tot) return a.t_tot < b.t_tot;
  return a.places < b.places;
}

inline bool feasible(const JspInstance& inst, const Route& r) { return r.t_tot <= inst.t_max; }

/// N! / (N - xi)!, the number of ordered xi-tuples of distinct places.
inline std::uint64_t count_routes(std::size_t n, std::size_t xi) {
  if (xi > n) throw std::invalid_argument("xi exceeds the number of places");
  std::uint64_t f = 1;
  for (std::size_t k = 0; k < xi; ++k) {
    const std::uint64_t m = n - k;
    if (f > std::numeric_limits<std::uint64_t>::max() / m)
      throw std::overflow_error("route count overflows 64 bits");
    f *= m;
  }
  return f;
}

/// r * n_o * (N - xi)! / N!
inline double expected_hits(double reads, double optima, std::size_t n, std::size_t xi) {
  if (xi > n) throw std::invalid_argument("xi exceeds the number of places");
  long double f = 1;
  for (std::size_t k = 0; k < xi; ++k) f *= static_cast<long double>(n - k);
  return static_cast<double>(static_cast<long double>(reads) * optima / f);
}

/// Calls fn(const Route&) for every ordered xi-tuple of distinct places whose
/// first place is `first`, in lexicographic order.
template <typename Fn>
void for_each_route_from(const JspInstance& inst, std::size_t xi, std::size_t first, Fn&& fn) {
  const std::size_t n = inst.size();
  std::vector<std::size_t> route;
  route.reserve(xi);
  std::vector<bool> used(n, false);
  route.push_back(first);
  used[first] = true;
  auto dfs = [&](auto& self) -> void {
    if (route.size() == xi) {
      fn(detail::make_route(inst, route));
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      used[i] = true;
      route.push_back(i);
      self(self);
      route.pop_back();
      used[i] = false;
    }
  };
  dfs(dfs);
}

template <typename Fn>
void for_each_route(const JspInstance& inst, std::size_t xi, Fn&& fn) {
  if (xi == 0 || xi > inst.size()) throw std::invalid_argument("invalid step count");
  for (std::size_t first = 0; first < inst.size(); ++first) for_each_route_from(inst, xi, first, fn);
}

struct ExhaustiveReport {
  std::size_t xi = 0;
  std::optional<double> best_priority;  // empty when no route is feasible
  std::vector<Route> optima;            // enumeration order
  std::uint64_t routes_checked = 0;
  double runtime_s = 0.0;

  std::size_t optima_count() const { return optima.size(); }
};

/// Checks every xi-route, keeps those with t_tot <= t_max, and reports all
/// routes of maximum priority. Work is split by first place.
inline ExhaustiveReport exhaustive_search(const JspInstance& inst, std::size_t xi,
                                          std::size_t workers = 1) {
  const std::size_t n = inst.size();
  if (xi < 1 || xi > n) throw std::invalid_argument("invalid step count");
  const auto t0 = std::chrono::steady_clock::now();

  struct Partial {
    std::optional<double> best;
    std::vector<Route> optima;
    std::uint64_t checked = 0;
  };
  std::vector<Partial> parts(n);
  parallel_for(n, workers, [&](std::size_t first) {
    auto& part = parts[first];
    for_each_route_from(inst, xi, first, [&](const Route& r) {
      ++part.checked;
      if (!feasible(inst, r)) return;
      if (!part.best || r.p_tot > *part.best) {
        part.best = r.p_tot;
        part.optima.clear();
      }
      if (r.p_tot == *part.best) part.optima.push_back(r);
    });
  });

  ExhaustiveReport rep;
  rep.xi = xi;
  for (const auto& part : parts) {
    rep.routes_checked += part.checked;
    if (part.best && (!rep.best_priority || *part.best > *rep.best_priority))
      rep.best_priority = part.best;
  }
  for (auto& part : parts)
    if (part.best && rep.best_priority && *part.best == *rep.best_priority)
      for (auto& r : part.optima) rep.optima.push_back(std::move(r));
  rep.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

struct RandomReport {
  std::size_t xi = 0;
  std::uint64_t reads = 0;
  std::uint64_t found_optimal = 0;
  double expected = 0.0;
  std::optional<Route> best_found;
  std::uint64_t seed = 0;
  friend bool operator==(const RandomReport&, const RandomReport&) = default;
};

/// Draws `reads` xi-routes uniformly (partial Fisher-Yates per read) and counts
/// feasible draws that reach the known optimal priority in `known`.
inline RandomReport random_sample_search(const JspInstance& inst, std::size_t xi,
                                         std::uint64_t reads, std::uint64_t seed,
                                         const ExhaustiveReport& known, std::size_t workers = 1) {
  const std::size_t n = inst.size();
  if (xi < 1 || xi > n) throw std::invalid_argument("invalid step count");
  if (reads < 1) throw std::invalid_argument("reads must be at least 1");
  if (known.xi != xi) throw std::invalid_argument("known optimum is for a different xi");

  std::vector<Route> draws(reads);
  parallel_for(reads, workers, [&](std::size_t j) {
    auto eng = make_engine(seed, j);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t k = 0; k < xi; ++k) {
      const auto pick = k + uniform_below(eng, n - k);
      std::swap(idx[k], idx[pick]);
    }
    draws[j] = detail::make_route(inst, std::span(idx).first(xi));
  });

  RandomReport rep;
  rep.xi = xi;
  rep.reads = reads;
  rep.seed = seed;
  rep.expected = expected_hits(static_cast<double>(reads),
                               static_cast<double>(known.optima_count()), n, xi);
  for (const auto& r : draws) {
    if (!feasible(inst, r)) continue;
    if (known.best_priority && r.p_tot == *known.best_priority) ++rep.found_optimal;
    if (!rep.best_found || better_route(r, *rep.best_found)) rep.best_found = r;
  }
  return rep;
}

inline RandomReport random_sample_search(const JspInstance& inst, std::size_t xi,
                                         std::uint64_t reads, std::uint64_t seed,
                                         std::size_t workers = 1) {
  return random_sample_search(inst, xi, reads, seed, exhaustive_search(inst, xi, workers), workers);
}

/// Best-insertion heuristic: repeatedly inserts the place and position with the
/// highest priority per added day that keeps the route within t_max.
inline Route greedy_guess(const JspInstance& inst) {
  const std::size_t n = inst.size();
  std::vector<std::size_t> route;
  std::vector<bool> used(n, false);
  double current_t = 0.0;
  for (;;) {
    struct Move {
      std::size_t place, pos;
      double score, t_new;
    };
    std::optional<Move> best;
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      for (std::size_t pos = 0; pos <= route.size(); ++pos) {
        auto trial = route;
        trial.insert(trial.begin() + static_cast<std::ptrdiff_t>(pos), i);
        const double t_new = detail::make_route(inst, trial).t_tot;
        if (!(t_new <= inst.t_max)) continue;
        const double added = t_new - current_t;
        const double score = added > 0 ? inst.places[i].priority / added
                                       : std::numeric_limits<double>::infinity();
        if (!best || score > best->score) best = Move{i, pos, score, t_new};
      }
    }
    if (!best) break;
    route.insert(route.begin() + static_cast<std::ptrdiff_t>(best->pos), best->place);
    used[best->place] = true;
    current_t = best->t_new;
  }
  if (route.empty()) return {};
  return detail::make_route(inst, route);
}

// ---------------------------------------------------------------------------
// CSV

inline std::string route_label(const JspInstance& inst, std::span<const std::size_t> places) {
  std::string s;
  for (std::size_t k = 0; k < places.size(); ++k) {
    if (k) s += '>';
    s += inst.places[places[k]].id;
  }
  return s;
}

/// Summary rows `xi,best_priority,optima_count,routes_checked,runtime_s`, a
/// blank line, then one optimum per row `xi,p_tot,t_tot,route`.
inline void write_exhaustive_csv(std::ostream& os, const JspInstance& inst,
                                 std::span<const ExhaustiveReport> reports) {
  using detail::format_number;
  os << "xi,best_priority,optima_count,routes_checked,runtime_s\n";
  for (const auto& r : reports)
    os << r.xi << ',' << (r.best_priority ? format_number(*r.best_priority) : "none") << ','
       << r.optima_count() << ',' << r.routes_checked << ',' << format_number(r.runtime_s) << '\n';
  os << "\nxi,p_tot,t_tot,route\n";
  for (const auto& r : reports)
    for (const auto& o : r.optima)
      os << r.xi << ',' << format_number(o.p_tot) << ',' << format_number(o.t_tot) << ','
         << route_label(inst, o.places) << '\n';
}

inline void write_random_csv(std::ostream& os, const JspInstance& inst,
                             std::span<const RandomReport> reports) {
  using detail::format_number;
  os << "xi,reads,found_optimal,expected,seed,best_p_tot,best_t_tot,best_route\n";
  for (const auto& r : reports) {
    os << r.xi << ',' << r.reads << ',' << r.found_optimal << ',' << format_number(r.expected)
       << ',' << r.seed << ',';
    if (r.best_found)
      os << format_number(r.best_found->p_tot) << ',' << format_number(r.best_found->t_tot) << ','
         << route_label(inst, r.best_found->places);
    else
      os << "none,none,none";
    os << '\n';
  }
}

}  // namespace jsp

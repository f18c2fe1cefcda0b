#pragma once

// QUBO encoding of a JSP instance over N*xi binary variables x(place, step),
// plus energy evaluation, incremental single-flip bookkeeping and decoding.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jsp/model.hpp"

namespace jsp {

using Bits = std::vector<std::uint8_t>;

/// Step-major flat index: v = step * N + place.
struct VarIndex {
  std::size_t place = 0;
  std::size_t step = 0;

  std::size_t flat(std::size_t n) const { return step * n + place; }
  static VarIndex from_flat(std::size_t v, std::size_t n) { return {v % n, v / n}; }
  friend bool operator==(const VarIndex&, const VarIndex&) = default;
};

struct QuboTerm {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 0.0;
  friend bool operator==(const QuboTerm&, const QuboTerm&) = default;
};

/// Layout information for models that encode a JSP instance.
struct Encoding {
  std::size_t n = 0;
  std::size_t xi = 0;
  CoefficientSet coeffs;
};

/// Upper-triangular sparse QUBO: E(x) = offset + sum over (a <= b) of w_ab x_a x_b.
/// Terms are kept sorted by (a, b) with no stored zeros.
class QuboModel {
 public:
  QuboModel() = default;

  /// Folds (b, a) onto (a, b), sums repeated keys and drops zero weights.
  QuboModel(std::size_t num_vars, std::span<const QuboTerm> terms, double offset,
            std::optional<Encoding> encoding = std::nullopt)
      : num_vars_(num_vars), offset_(offset), encoding_(std::move(encoding)) {
    std::map<std::pair<std::size_t, std::size_t>, double> table;
    for (const auto& t : terms) {
      auto a = t.a, b = t.b;
      if (a > b) std::swap(a, b);
      if (b >= num_vars) throw std::out_of_range("QUBO term index out of range");
      table[{a, b}] += t.weight;
    }
    terms_.reserve(table.size());
    for (const auto& [key, w] : table)
      if (w != 0.0) terms_.push_back({key.first, key.second, w});
  }

  std::size_t num_vars() const { return num_vars_; }
  double offset() const { return offset_; }
  const std::vector<QuboTerm>& terms() const { return terms_; }
  const std::optional<Encoding>& encoding() const { return encoding_; }

  /// Stored weight for (a, b) in either orientation; 0 when absent.
  double coefficient(std::size_t a, std::size_t b) const {
    if (a > b) std::swap(a, b);
    auto it = std::lower_bound(terms_.begin(), terms_.end(), std::pair{a, b},
                               [](const QuboTerm& t, const std::pair<std::size_t, std::size_t>& k) {
                                 return std::pair{t.a, t.b} < k;
                               });
    return it != terms_.end() && it->a == a && it->b == b ? it->weight : 0.0;
  }

 private:
  std::size_t num_vars_ = 0;
  double offset_ = 0.0;
  std::vector<QuboTerm> terms_;
  std::optional<Encoding> encoding_;
};

inline QuboModel build_qubo(const JspInstance& inst, std::size_t xi, const CoefficientSet& c) {
  const std::size_t n = inst.size();
  if (xi < 1 || xi > n)
    throw std::invalid_argument("invalid step count " + std::to_string(xi) + " for " +
                                std::to_string(n) + " places");
  const double v = inst.speed;
  std::vector<QuboTerm> terms;
  auto flat = [n](std::size_t i, std::size_t s) { return s * n + i; };

  for (std::size_t s = 0; s < xi; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = inst.places[i];
      double w = -c.c_p * p.priority + c.c_vt * p.visit_days - c.lambda_ops;
      if (s == 0) w += c.c_tt * inst.home_leg(i) / v;
      if (s == xi - 1) w += c.c_tt * inst.home_leg(i) / v;
      terms.push_back({flat(i, s), flat(i, s), w});
    }
  }
  // one place per step
  for (std::size_t s = 0; s < xi; ++s)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        terms.push_back({flat(i, s), flat(j, s), 2.0 * c.lambda_ops});
  // each place at most once
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t s = 0; s < xi; ++s)
      for (std::size_t t = s + 1; t < xi; ++t)
        terms.push_back({flat(i, s), flat(i, t), 2.0 * c.lambda_oam});
  // travel between consecutive steps
  for (std::size_t s = 0; s + 1 < xi; ++s)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) terms.push_back({flat(i, s), flat(j, s + 1), c.c_tt * inst.leg(i, j) / v});

  const double offset = static_cast<double>(xi) * c.lambda_ops +
                        0.25 * static_cast<double>(n) * c.lambda_oam;
  return QuboModel(n * xi, terms, offset, Encoding{n, xi, c});
}

inline double energy(const QuboModel& model, std::span<const std::uint8_t> x) {
  if (x.size() != model.num_vars())
    throw std::invalid_argument("bitstring length " + std::to_string(x.size()) +
                                " does not match " + std::to_string(model.num_vars()) +
                                " variables");
  double e = model.offset();
  for (const auto& t : model.terms())
    if (x[t.a] && x[t.b]) e += t.weight;
  return e;
}

/// Symmetric neighbour lists of a model, built once and shared read-only by
/// every FlipState over that model.
struct Adjacency {
  std::vector<double> diag;
  std::vector<std::size_t> start;  // CSR row offsets, size num_vars + 1
  std::vector<std::size_t> neighbor;
  std::vector<double> weight;

  explicit Adjacency(const QuboModel& model) : diag(model.num_vars(), 0.0) {
    const std::size_t nv = model.num_vars();
    std::vector<std::size_t> degree(nv, 0);
    for (const auto& t : model.terms()) {
      if (t.a == t.b) {
        diag[t.a] = t.weight;
      } else {
        ++degree[t.a];
        ++degree[t.b];
      }
    }
    start.assign(nv + 1, 0);
    for (std::size_t a = 0; a < nv; ++a) start[a + 1] = start[a] + degree[a];
    neighbor.resize(start[nv]);
    weight.resize(start[nv]);
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (const auto& t : model.terms()) {
      if (t.a == t.b) continue;
      neighbor[fill[t.a]] = t.b;
      weight[fill[t.a]++] = t.weight;
      neighbor[fill[t.b]] = t.a;
      weight[fill[t.b]++] = t.weight;
    }
  }
};

/// A bitstring with cached local fields so a single-flip energy change is O(1)
/// and applying a flip is O(degree).
class FlipState {
 public:
  FlipState(const QuboModel& model, const Adjacency& adj, Bits x)
      : adj_(&adj), x_(std::move(x)), field_(x_.size(), 0.0), energy_(jsp::energy(model, x_)) {
    for (std::size_t a = 0; a < x_.size(); ++a) {
      if (!x_[a]) continue;
      for (std::size_t k = adj.start[a]; k < adj.start[a + 1]; ++k)
        field_[adj.neighbor[k]] += adj.weight[k];
    }
  }

  double delta(std::size_t a) const {
    const double local = adj_->diag[a] + field_[a];
    return x_[a] ? -local : local;
  }

  void flip(std::size_t a) {
    energy_ += delta(a);
    const double sign = x_[a] ? -1.0 : 1.0;
    x_[a] ^= 1u;
    for (std::size_t k = adj_->start[a]; k < adj_->start[a + 1]; ++k)
      field_[adj_->neighbor[k]] += sign * adj_->weight[k];
  }

  double energy() const { return energy_; }
  const Bits& bits() const { return x_; }

 private:
  const Adjacency* adj_;
  Bits x_;
  std::vector<double> field_;
  double energy_;
};

// ---------------------------------------------------------------------------
// Decoding

struct DecodedAssignment {
  std::optional<std::vector<std::size_t>> route;  // present iff both counts are zero
  std::size_t step_violations = 0;   // steps with a place count other than one
  std::size_t place_violations = 0;  // places set at more than one step
  Bits raw;
};

inline DecodedAssignment decode(std::span<const std::uint8_t> x, std::size_t n, std::size_t xi) {
  if (x.size() != n * xi) throw std::invalid_argument("bitstring length does not match n*xi");
  DecodedAssignment out;
  out.raw.assign(x.begin(), x.end());
  std::vector<std::size_t> visits(n, 0);
  std::vector<std::size_t> route;
  route.reserve(xi);
  for (std::size_t s = 0; s < xi; ++s) {
    std::size_t count = 0, which = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (x[s * n + i]) {
        ++count;
        which = i;
        ++visits[i];
      }
    }
    if (count == 1)
      route.push_back(which);
    else
      ++out.step_violations;
  }
  for (auto v : visits)
    if (v > 1) ++out.place_violations;
  if (out.step_violations == 0 && out.place_violations == 0) out.route = std::move(route);
  return out;
}

/// One-hot-per-step encoding of a route of exactly xi distinct places.
inline Bits encode(std::span<const std::size_t> route, std::size_t n, std::size_t xi) {
  if (route.size() != xi) throw std::invalid_argument("route length must equal xi");
  Bits x(n * xi, 0);
  for (std::size_t s = 0; s < xi; ++s) {
    if (route[s] >= n) throw std::out_of_range("place index out of range");
    x[s * n + route[s]] = 1;
  }
  return x;
}

inline void check_distinct(std::span<const std::size_t> route, std::size_t n) {
  std::vector<bool> seen(n, false);
  for (auto i : route) {
    if (i >= n) throw std::out_of_range("place index " + std::to_string(i) + " out of range");
    if (seen[i]) throw std::invalid_argument("repeated place " + std::to_string(i) + " in route");
    seen[i] = true;
  }
}

/// Total leagues of home -> route... -> home; zero for the empty route.
inline double route_leagues(const JspInstance& inst, std::span<const std::size_t> route) {
  if (route.empty()) return 0.0;
  double d = inst.home_leg(route.front()) + inst.home_leg(route.back());
  for (std::size_t k = 0; k + 1 < route.size(); ++k) d += inst.leg(route[k], route[k + 1]);
  return d;
}

/// H0 = -c_p * sum(p) + c_tt * leagues / v + c_vt * sum(t).
inline double natural_energy(const JspInstance& inst, std::span<const std::size_t> route,
                             const CoefficientSet& c) {
  check_distinct(route, inst.size());
  if (route.empty()) return 0.0;
  double p = 0.0, t = 0.0;
  for (auto i : route) {
    p += inst.places[i].priority;
    t += inst.places[i].visit_days;
  }
  return -c.c_p * p + c.c_tt * route_leagues(inst, route) / inst.speed + c.c_vt * t;
}

/// The two penalty terms evaluated straight from their defining sums.
struct RestrictionEnergy {
  double ops = 0.0;  // lambda_ops * sum_s (sum_i x - 1)^2
  double oam = 0.0;  // lambda_oam * sum_i (sum_s x - 0.5)^2
};

inline RestrictionEnergy restriction_energy(std::span<const std::uint8_t> x, std::size_t n,
                                            std::size_t xi, const CoefficientSet& c) {
  if (x.size() != n * xi) throw std::invalid_argument("bitstring length does not match n*xi");
  RestrictionEnergy r;
  for (std::size_t s = 0; s < xi; ++s) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += x[s * n + i];
    r.ops += (sum - 1.0) * (sum - 1.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t s = 0; s < xi; ++s) sum += x[s * n + i];
    r.oam += (sum - 0.5) * (sum - 0.5);
  }
  r.ops *= c.lambda_ops;
  r.oam *= c.lambda_oam;
  return r;
}

inline bool close_rel(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace jsp

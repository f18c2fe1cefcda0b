#pragma once

// Test-only reference implementations. Nothing here calls into the QUBO table,
// the DFS enumerator or the route helpers of the library.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "jsp/model.hpp"

namespace oracle {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline jsp::JspInstance fixture() { return jsp::parse_instance(read_file(JSP_FIXTURE)); }

/// Full Hamiltonian H = H_p + H_tt + H_vt + H_ops + H_oam summed term by term
/// from its defining formulas over x(i, s) = x[s * N + i].
inline double hamiltonian(const jsp::JspInstance& inst, const jsp::CoefficientSet& c,
                          std::size_t xi, const std::vector<std::uint8_t>& x) {
  const std::size_t n = inst.places.size();
  auto X = [&](std::size_t i, std::size_t s) -> double { return x[s * n + i]; };
  const auto& D = inst.distances;  // home is row/column 0
  const double v = inst.speed;
  double hp = 0, htt = 0, hvt = 0, hops = 0, hoam = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t s = 0; s < xi; ++s) {
      hp += inst.places[i].priority * X(i, s);
      hvt += inst.places[i].visit_days * X(i, s);
    }
  for (std::size_t s = 0; s + 1 < xi; ++s)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) htt += D[i + 1][j + 1] / v * X(i, s) * X(j, s + 1);
  for (std::size_t i = 0; i < n; ++i) {
    htt += D[0][i + 1] / v * X(i, 0);
    htt += D[i + 1][0] / v * X(i, xi - 1);
  }
  for (std::size_t s = 0; s < xi; ++s) {
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += X(i, s);
    hops += (sum - 1) * (sum - 1);
  }
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0;
    for (std::size_t s = 0; s < xi; ++s) sum += X(i, s);
    hoam += (sum - 0.5) * (sum - 0.5);
  }
  return -c.c_p * hp + c.c_tt * htt + c.c_vt * hvt + c.lambda_ops * hops + c.lambda_oam * hoam;
}

struct RouteRow {
  std::vector<std::size_t> places;
  double p = 0, t = 0, h0 = 0;
};

inline RouteRow evaluate(const jsp::JspInstance& inst, const jsp::CoefficientSet& c,
                         const std::vector<std::size_t>& r) {
  RouteRow row{r};
  double leagues = 0, visit = 0;
  std::size_t prev = 0;
  for (auto i : r) {
    leagues += inst.distances[prev][i + 1];
    prev = i + 1;
    row.p += inst.places[i].priority;
    visit += inst.places[i].visit_days;
  }
  leagues += inst.distances[prev][0];
  row.t = leagues / inst.speed + visit;
  row.h0 = -c.c_p * row.p + c.c_tt * leagues / inst.speed + c.c_vt * visit;
  return row;
}

/// All ordered xi-routes via subset masks and std::next_permutation.
inline std::vector<RouteRow> all_routes(const jsp::JspInstance& inst, const jsp::CoefficientSet& c,
                                        std::size_t xi) {
  const std::size_t n = inst.places.size();
  std::vector<RouteRow> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != xi) continue;
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) r.push_back(i);
    do out.push_back(evaluate(inst, c, r));
    while (std::next_permutation(r.begin(), r.end()));
  }
  return out;
}

/// Symmetric random instance with integer distances and priorities.
inline jsp::JspInstance random_instance(std::size_t n, std::uint64_t seed, double t_max = 100) {
  std::mt19937_64 eng(seed);
  std::uniform_int_distribution<int> pr(0, 100), vd(0, 6), dd(10, 300);
  jsp::JspInstance inst;
  inst.name = "random";
  inst.home_id = "home";
  inst.t_max = t_max;
  inst.speed = 9.6;
  for (std::size_t i = 0; i < n; ++i)
    inst.places.push_back({"p" + std::to_string(i), double(pr(eng)), double(vd(eng))});
  inst.distances.assign(n + 1, std::vector<double>(n + 1, 0.0));
  for (std::size_t a = 0; a <= n; ++a)
    for (std::size_t b = a + 1; b <= n; ++b) inst.distances[a][b] = inst.distances[b][a] = dd(eng);
  return inst;
}

inline std::vector<std::uint8_t> random_bits(std::mt19937_64& eng, std::size_t n) {
  std::vector<std::uint8_t> x(n);
  for (auto& b : x) b = static_cast<std::uint8_t>(eng() & 1u);
  return x;
}

}  // namespace oracle

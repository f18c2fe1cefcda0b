#pragma once

// Job Selection Problem instances: places, distances, time budget, and the
// Hamiltonian weights derived from them.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace jsp {

struct Place {
  std::string id;
  double priority = 0.0;
  double visit_days = 0.0;
};

/// A JSP instance. Distances are stored over {home} ∪ places with home at
/// matrix index 0 and place i at index i + 1. Home carries no priority or
/// visit time; it only anchors the start and end of every route.
struct JspInstance {
  std::string name;
  std::vector<Place> places;
  std::string home_id;
  std::vector<std::vector<double>> distances;
  double t_max = 0.0;
  double speed = 0.0;

  std::size_t size() const { return places.size(); }

  double home_leg(std::size_t place) const { return distances[0][place + 1]; }
  double leg(std::size_t from, std::size_t to) const {
    return distances[from + 1][to + 1];
  }

  std::optional<std::size_t> find(std::string_view id) const {
    for (std::size_t i = 0; i < places.size(); ++i)
      if (places[i].id == id) return i;
    return std::nullopt;
  }

  double max_priority() const {
    double best = 0.0;
    for (const auto& p : places) best = std::max(best, p.priority);
    return best;
  }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  /// 1-based; 0 when the error concerns the file as a whole.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Lists every violated instance invariant. Empty means the instance is valid.
inline std::vector<std::string> validate(const JspInstance& inst) {
  std::vector<std::string> out;
  const std::size_t n = inst.places.size();
  if (n < 1) out.push_back("places: at least one place is required");
  if (!(inst.t_max > 0)) out.push_back("t_max: nonpositive t_max");
  if (!(inst.speed > 0)) out.push_back("speed: nonpositive speed");

  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = inst.places[i];
    if (p.priority < 0) out.push_back("places[" + p.id + "]: negative priority");
    if (p.visit_days < 0) out.push_back("places[" + p.id + "]: negative visit_days");
    if (p.id == inst.home_id) out.push_back("home_id: collides with place " + p.id);
    for (std::size_t j = i + 1; j < n; ++j)
      if (inst.places[j].id == p.id) out.push_back("places[" + p.id + "]: duplicate id");
  }

  const std::size_t m = n + 1;
  if (inst.distances.size() != m) {
    out.push_back("distances: expected " + std::to_string(m) + " rows");
    return out;
  }
  for (std::size_t a = 0; a < m; ++a) {
    if (inst.distances[a].size() != m) {
      out.push_back("distances[" + std::to_string(a) + "]: wrong row length");
      return out;
    }
  }
  for (std::size_t a = 0; a < m; ++a) {
    if (inst.distances[a][a] != 0)
      out.push_back("distances[" + std::to_string(a) + "][" + std::to_string(a) +
                    "]: nonzero diagonal");
    for (std::size_t b = a + 1; b < m; ++b) {
      const double ab = inst.distances[a][b];
      const double ba = inst.distances[b][a];
      const std::string at = "distances[" + std::to_string(a) + "][" + std::to_string(b) + "]";
      if (ab != ba) out.push_back(at + ": asymmetry");
      if (!(ab > 0) || !(ba > 0)) out.push_back(at + ": nonpositive distance");
    }
  }
  return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

inline std::optional<double> to_number(std::string_view s) {
  double v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

// shortest text that parses back to the same double
inline std::string format_number(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace detail

/// Parses the line-oriented instance format (`name =`, `t_max_days =`,
/// `speed_leagues_per_day =`, `home =`, `place ...`, `dist ...`).
inline JspInstance parse_instance(std::string_view text) {
  using detail::to_number;
  using detail::trim;

  std::optional<std::string> name, home;
  std::optional<double> t_max, speed;
  std::vector<Place> places;
  struct DistLine {
    std::string a, b;
    double leagues;
    std::size_t line;
  };
  std::vector<DistLine> dists;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto line = trim(raw);
    if (line.empty()) continue;

    if (const auto eq = line.find('='); eq != std::string_view::npos &&
                                        line.substr(0, 6) != "place " &&
                                        line.substr(0, 6) != "place\t") {
      const auto key = trim(line.substr(0, eq));
      const auto value = trim(line.substr(eq + 1));
      if (value.empty()) throw ParseError(line_no, "empty value for '" + std::string(key) + "'");
      if (key == "name") {
        name = std::string(value);
      } else if (key == "home") {
        if (value.find_first_of(" \t") != std::string_view::npos)
          throw ParseError(line_no, "home id must not contain whitespace");
        home = std::string(value);
      } else if (key == "t_max_days" || key == "speed_leagues_per_day") {
        const auto v = to_number(value);
        if (!v) throw ParseError(line_no, "expected a number for '" + std::string(key) + "'");
        if (!(*v > 0))
          throw ParseError(line_no, key == "t_max_days" ? "nonpositive t_max" : "nonpositive speed");
        (key == "t_max_days" ? t_max : speed) = *v;
      } else {
        throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
      }
      continue;
    }

    const auto tok = detail::split_ws(line);
    if (tok[0] == "place") {
      if (tok.size() != 4) throw ParseError(line_no, "expected 'place <id> priority=<n> visit_days=<n>'");
      Place p{std::string(tok[1]), 0.0, 0.0};
      bool have_p = false, have_t = false;
      for (std::size_t k = 2; k < 4; ++k) {
        const auto eq = tok[k].find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected key=value, got '" + std::string(tok[k]) + "'");
        const auto key = tok[k].substr(0, eq);
        const auto v = to_number(tok[k].substr(eq + 1));
        if (!v) throw ParseError(line_no, "expected a number in '" + std::string(tok[k]) + "'");
        if (key == "priority" && !have_p) {
          p.priority = *v;
          have_p = true;
        } else if (key == "visit_days" && !have_t) {
          p.visit_days = *v;
          have_t = true;
        } else {
          throw ParseError(line_no, "unexpected attribute '" + std::string(key) + "'");
        }
      }
      if (p.priority < 0) throw ParseError(line_no, "negative priority");
      if (p.visit_days < 0) throw ParseError(line_no, "negative visit_days");
      for (const auto& q : places)
        if (q.id == p.id) throw ParseError(line_no, "duplicate place id '" + p.id + "'");
      places.push_back(std::move(p));
    } else if (tok[0] == "dist") {
      if (tok.size() != 4) throw ParseError(line_no, "expected 'dist <id> <id> <leagues>'");
      const auto v = to_number(tok[3]);
      if (!v) throw ParseError(line_no, "expected a number of leagues");
      if (!(*v > 0)) throw ParseError(line_no, "nonpositive distance");
      if (tok[1] == tok[2]) throw ParseError(line_no, "distance from a place to itself");
      dists.push_back({std::string(tok[1]), std::string(tok[2]), *v, line_no});
    } else {
      throw ParseError(line_no, "unknown statement '" + std::string(tok[0]) + "'");
    }
  }

  if (!name) throw ParseError(0, "missing 'name'");
  if (!home) throw ParseError(0, "missing 'home'");
  if (!t_max) throw ParseError(0, "missing 't_max_days'");
  if (!speed) throw ParseError(0, "missing 'speed_leagues_per_day'");
  if (places.empty()) throw ParseError(0, "no places declared");
  for (const auto& p : places)
    if (p.id == *home) throw ParseError(0, "home id '" + *home + "' is also declared as a place");

  JspInstance inst;
  inst.name = *name;
  inst.home_id = *home;
  inst.t_max = *t_max;
  inst.speed = *speed;
  inst.places = std::move(places);

  const std::size_t m = inst.places.size() + 1;
  auto index_of = [&](const std::string& id, std::size_t line) -> std::size_t {
    if (id == inst.home_id) return 0;
    if (auto i = inst.find(id)) return *i + 1;
    throw ParseError(line, "unknown place id '" + id + "'");
  };
  std::vector<std::vector<double>> d(m, std::vector<double>(m, 0.0));
  std::vector<std::vector<bool>> seen(m, std::vector<bool>(m, false));
  for (const auto& dl : dists) {
    const auto a = index_of(dl.a, dl.line);
    const auto b = index_of(dl.b, dl.line);
    if (seen[a][b] && d[a][b] != dl.leagues)
      throw ParseError(dl.line, "conflicting duplicate distance for " + dl.a + " " + dl.b);
    d[a][b] = d[b][a] = dl.leagues;
    seen[a][b] = seen[b][a] = true;
  }
  auto label = [&](std::size_t a) { return a == 0 ? inst.home_id : inst.places[a - 1].id; };
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      if (!seen[a][b]) throw ParseError(0, "missing distance between " + label(a) + " and " + label(b));
  inst.distances = std::move(d);
  return inst;
}

/// Writes an instance in the same format parse_instance reads.
inline std::string serialize_instance(const JspInstance& inst) {
  using detail::format_number;
  std::ostringstream os;
  os << "name = " << inst.name << '\n'
     << "t_max_days = " << format_number(inst.t_max) << '\n'
     << "speed_leagues_per_day = " << format_number(inst.speed) << '\n'
     << "home = " << inst.home_id << '\n';
  for (const auto& p : inst.places)
    os << "place " << p.id << " priority=" << format_number(p.priority)
       << " visit_days=" << format_number(p.visit_days) << '\n';
  const std::size_t m = inst.places.size() + 1;
  auto label = [&](std::size_t a) { return a == 0 ? inst.home_id : inst.places[a - 1].id; };
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      os << "dist " << label(a) << ' ' << label(b) << ' ' << format_number(inst.distances[a][b])
         << '\n';
  return os.str();
}

inline bool operator==(const Place& a, const Place& b) {
  return a.id == b.id && a.priority == b.priority && a.visit_days == b.visit_days;
}
inline bool operator==(const JspInstance& a, const JspInstance& b) {
  return a.name == b.name && a.places == b.places && a.home_id == b.home_id &&
         a.distances == b.distances && a.t_max == b.t_max && a.speed == b.speed;
}

// ---------------------------------------------------------------------------
// Hamiltonian weights

struct CoefficientSet {
  double c_p = 0.0;
  double c_tt = 0.0;
  double c_vt = 0.0;
  double lambda_ops = 0.0;
  double lambda_oam = 0.0;
  // derivation inputs, kept for reporting
  double p_guess = 0.0;
  double t_max = 0.0;
  double ops_multiplier = 0.0;
  double oam_multiplier = 0.0;
};

inline constexpr double kDefaultCp = 0.1;
inline constexpr double kDefaultPGuess = 500.0;
inline constexpr double kDefaultOpsMultiplier = 300.0;
inline constexpr double kDefaultOamMultiplier = 200.0;

/// Time weights are scaled so that p_guess priority balances t_max days;
/// the penalties are fixed multiples of c_p.
inline CoefficientSet derive_coefficients(double c_p, double p_guess, double t_max,
                                          double ops_multiplier, double oam_multiplier) {
  if (!(c_p > 0) || !(p_guess > 0) || !(t_max > 0) || !(ops_multiplier > 0) ||
      !(oam_multiplier > 0))
    throw std::invalid_argument("coefficient inputs must all be positive");
  CoefficientSet c;
  c.c_p = c_p;
  c.c_tt = c.c_vt = c_p * (p_guess / t_max);
  c.lambda_ops = ops_multiplier * c_p;
  c.lambda_oam = oam_multiplier * c_p;
  c.p_guess = p_guess;
  c.t_max = t_max;
  c.ops_multiplier = ops_multiplier;
  c.oam_multiplier = oam_multiplier;
  return c;
}

/// Throws unless both penalties strictly exceed the largest single priority
/// reward c_p * max(p_i).
inline void check_penalty_dominance(const CoefficientSet& c, const JspInstance& inst) {
  const double reward = c.c_p * inst.max_priority();
  if (!(c.lambda_ops > reward) || !(c.lambda_oam > reward))
    throw std::invalid_argument("penalty dominance violated: lambda_ops=" +
                                detail::format_number(c.lambda_ops) +
                                " lambda_oam=" + detail::format_number(c.lambda_oam) +
                                " must exceed c_p*max(p)=" + detail::format_number(reward));
}

inline CoefficientSet derive_coefficients(const JspInstance& inst, double c_p = kDefaultCp,
                                          double p_guess = kDefaultPGuess,
                                          double ops_multiplier = kDefaultOpsMultiplier,
                                          double oam_multiplier = kDefaultOamMultiplier) {
  auto c = derive_coefficients(c_p, p_guess, inst.t_max, ops_multiplier, oam_multiplier);
  check_penalty_dominance(c, inst);
  return c;
}

}  // namespace jsp

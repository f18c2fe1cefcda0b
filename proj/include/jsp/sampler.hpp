#pragma once

// Probabilistic QUBO samplers (uniform baseline and simulated annealing), the
// (sum x - k)^2 demonstration problem, and the plain-text QUBO exchange format.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jsp/model.hpp"
#include "jsp/parallel.hpp"
#include "jsp/qubo.hpp"
#include "jsp/rng.hpp"

namespace jsp {

inline constexpr std::uint64_t kDefaultSeed = 20220501;

struct SampleRecord {
  Bits bits;
  double energy = 0.0;
  std::uint64_t occurrences = 0;
  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

/// Distinct bitstrings with their energies and counts, ascending by energy
/// (ties by bitstring).
struct SampleSet {
  std::vector<SampleRecord> records;
  std::size_t num_vars = 0;
  std::uint64_t total_reads = 0;
  std::string sampler_label;
  std::uint64_t seed = 0;
  friend bool operator==(const SampleSet&, const SampleSet&) = default;
};

inline SampleSet aggregate_samples(const QuboModel& model, std::vector<Bits> reads,
                                   std::string label, std::uint64_t seed) {
  std::map<Bits, std::uint64_t> counts;
  for (auto& b : reads) ++counts[std::move(b)];
  SampleSet set;
  set.num_vars = model.num_vars();
  set.total_reads = reads.size();
  set.sampler_label = std::move(label);
  set.seed = seed;
  set.records.reserve(counts.size());
  for (auto& [bits, n] : counts) set.records.push_back({bits, energy(model, bits), n});
  std::stable_sort(set.records.begin(), set.records.end(),
                   [](const SampleRecord& a, const SampleRecord& b) { return a.energy < b.energy; });
  return set;
}

inline Bits random_bits(Engine& eng, std::size_t n) {
  Bits x(n);
  std::uint64_t word = 0;
  for (std::size_t a = 0; a < n; ++a) {
    if (a % 64 == 0) word = eng();
    x[a] = static_cast<std::uint8_t>((word >> (a % 64)) & 1u);
  }
  return x;
}

/// Every bit independently 0 or 1 with probability 1/2; read j uses stream j.
inline SampleSet sample_uniform(const QuboModel& model, std::uint64_t reads, std::uint64_t seed,
                                std::size_t workers = 1) {
  if (reads < 1) throw std::invalid_argument("reads must be at least 1");
  std::vector<Bits> out(reads);
  parallel_for(reads, workers, [&](std::size_t j) {
    auto eng = make_engine(seed, j);
    out[j] = random_bits(eng, model.num_vars());
  });
  return aggregate_samples(model, std::move(out), "uniform", seed);
}

struct AnnealParams {
  std::uint64_t reads = 10000;
  std::uint64_t sweeps = 1000;  // 0 records the random start states unchanged
  double hot_acceptance = 0.8;
  double cold_factor = 0.1;
  std::uint64_t seed = kDefaultSeed;
  std::size_t workers = 1;
  bool debug_check = false;  // recompute the energy after every accepted flip

  void validate() const {
    if (reads < 1) throw std::invalid_argument("reads must be at least 1");
    if (!(hot_acceptance > 0 && hot_acceptance < 1))
      throw std::invalid_argument("hot acceptance target must lie in (0, 1)");
    if (!(cold_factor > 0 && cold_factor < 1))
      throw std::invalid_argument("cold factor must lie in (0, 1)");
  }
};

struct TemperatureRange {
  double hot = 1.0;
  double cold = 1.0;
};

/// Probes single-flip |dE| for every variable at 100 random states. T_hot
/// accepts a move of mean size with the target probability; T_cold is
/// cold_factor times the smallest nonzero size seen.
inline TemperatureRange calibrate_temperatures(const QuboModel& model, const Adjacency& adj,
                                               const AnnealParams& params) {
  constexpr int kProbes = 100;
  const std::size_t nv = model.num_vars();
  TemperatureRange range;
  if (nv == 0) return range;
  auto eng = make_engine(params.seed, kCalibrationStream);
  double sum = 0.0, smallest = 0.0;
  std::size_t nonzero = 0;
  for (int k = 0; k < kProbes; ++k) {
    FlipState st(model, adj, random_bits(eng, nv));
    for (std::size_t a = 0; a < nv; ++a) {
      const double d = std::abs(st.delta(a));
      if (d == 0.0) continue;
      sum += d;
      smallest = nonzero == 0 ? d : std::min(smallest, d);
      ++nonzero;
    }
  }
  if (nonzero == 0) return range;
  range.hot = (sum / static_cast<double>(nonzero)) / -std::log(params.hot_acceptance);
  range.cold = params.cold_factor * smallest;
  if (range.cold > range.hot) range.hot = range.cold;
  return range;
}

/// Metropolis single-flip sweeps under a geometric schedule from T_hot to
/// T_cold, one independent random start per read.
inline SampleSet simulated_anneal(const QuboModel& model, const AnnealParams& params) {
  params.validate();
  const std::size_t nv = model.num_vars();
  const Adjacency adj(model);
  const auto temps = calibrate_temperatures(model, adj, params);

  std::vector<double> schedule(params.sweeps);
  for (std::uint64_t k = 0; k < params.sweeps; ++k) {
    const double frac =
        params.sweeps == 1 ? 1.0 : static_cast<double>(k) / static_cast<double>(params.sweeps - 1);
    schedule[k] = temps.hot * std::pow(temps.cold / temps.hot, frac);
  }

  std::vector<Bits> out(params.reads);
  parallel_for(params.reads, params.workers, [&](std::size_t j) {
    auto eng = make_engine(params.seed, j);
    FlipState st(model, adj, random_bits(eng, nv));
    for (const double temp : schedule) {
      const double inv_t = 1.0 / temp;
      for (std::size_t a = 0; a < nv; ++a) {
        const double d = st.delta(a);
        if (d > 0) {
          const double x = d * inv_t;
          if (x > 60.0) continue;
          // 1 - x <= exp(-x) <= 1 / (1 + x) settles most draws without exp
          const double u = uniform01(eng);
          if (u >= 1.0 / (1.0 + x)) continue;
          if (u >= 1.0 - x && u >= std::exp(-x)) continue;
        }
        st.flip(a);
        if (params.debug_check && !close_rel(st.energy(), energy(model, st.bits())))
          throw std::logic_error("tracked energy drifted from recomputed energy");
      }
    }
    out[j] = st.bits();
  });
  return aggregate_samples(model, std::move(out), "anneal", params.seed);
}

/// QUBO of (sum x - k)^2 over n variables; ground energy 0 on weight-k strings.
inline QuboModel dummy_problem(std::size_t n, std::size_t k) {
  if (k > n) throw std::invalid_argument("target ones exceeds variable count");
  std::vector<QuboTerm> terms;
  const double kk = static_cast<double>(k);
  for (std::size_t a = 0; a < n; ++a) {
    terms.push_back({a, a, 1.0 - 2.0 * kk});
    for (std::size_t b = a + 1; b < n; ++b) terms.push_back({a, b, 2.0});
  }
  return QuboModel(n, terms, kk * kk);
}

/// Total occurrences of records whose energy is within 1e-9 (relative) of `target`.
inline std::uint64_t reads_at_energy(const SampleSet& set, double target) {
  std::uint64_t n = 0;
  for (const auto& r : set.records)
    if (close_rel(r.energy, target)) n += r.occurrences;
  return n;
}

// ---------------------------------------------------------------------------
// Text formats

/// `# vars <n>`, `# offset <value>`, then `a b coeff` per stored term in
/// (a, b) order, shortest round-trip decimals.
inline std::string export_qubo(const QuboModel& model) {
  using detail::format_number;
  std::ostringstream os;
  os << "# vars " << model.num_vars() << '\n' << "# offset " << format_number(model.offset()) << '\n';
  for (const auto& t : model.terms()) os << t.a << ' ' << t.b << ' ' << format_number(t.weight) << '\n';
  return os.str();
}

inline QuboModel import_qubo(std::string_view text) {
  std::optional<std::size_t> vars;
  std::optional<double> offset;
  std::vector<QuboTerm> terms;
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto tok = detail::split_ws(detail::trim(line));
    if (tok.empty()) continue;
    if (tok[0] == "#") {
      if (tok.size() == 3 && tok[1] == "vars") {
        const auto v = detail::to_number(tok[2]);
        if (!v || *v < 0 || *v != std::floor(*v)) throw ParseError(line_no, "bad variable count");
        vars = static_cast<std::size_t>(*v);
      } else if (tok.size() == 3 && tok[1] == "offset") {
        offset = detail::to_number(tok[2]);
        if (!offset) throw ParseError(line_no, "bad offset");
      }
      continue;
    }
    if (tok.size() != 3) throw ParseError(line_no, "expected 'a b coeff'");
    const auto a = detail::to_number(tok[0]);
    const auto b = detail::to_number(tok[1]);
    const auto w = detail::to_number(tok[2]);
    if (!a || !b || !w || *a < 0 || *b < 0 || *a != std::floor(*a) || *b != std::floor(*b))
      throw ParseError(line_no, "expected 'a b coeff'");
    terms.push_back({static_cast<std::size_t>(*a), static_cast<std::size_t>(*b), *w});
  }
  if (!vars) throw ParseError(0, "missing '# vars' header");
  try {
    return QuboModel(*vars, terms, offset.value_or(0.0));
  } catch (const std::out_of_range& e) {
    throw ParseError(0, e.what());
  }
}

inline std::string bits_to_string(std::span<const std::uint8_t> x) {
  std::string s(x.size(), '0');
  for (std::size_t a = 0; a < x.size(); ++a)
    if (x[a]) s[a] = '1';
  return s;
}

/// `bitstring,energy,occurrences`, index 0 leftmost.
inline void write_sampleset_csv(std::ostream& os, const SampleSet& set) {
  os << "bitstring,energy,occurrences\n";
  for (const auto& r : set.records)
    os << bits_to_string(r.bits) << ',' << detail::format_number(r.energy) << ',' << r.occurrences
       << '\n';
}

}  // namespace jsp

#pragma once

// `jsp` command-line front end. run() is separate from main() so tests can
// drive it with their own streams.

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "jsp/jsp.hpp"

namespace jsp::cli {

enum ExitCode : int { kOk = 0, kNoSolution = 1, kUsage = 2 };

struct StepRange {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

/// `lo:hi` inclusive, or a single value.
inline std::optional<StepRange> parse_range(const std::string& s) {
  auto num = [](std::string_view t) -> std::optional<std::size_t> {
    std::size_t v = 0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || r.ec != std::errc{} || r.ptr != t.data() + t.size()) return std::nullopt;
    return v;
  };
  const auto colon = s.find(':');
  const auto lo = num(std::string_view(s).substr(0, colon));
  const auto hi = colon == std::string::npos ? lo : num(std::string_view(s).substr(colon + 1));
  if (!lo || !hi || *lo > *hi) return std::nullopt;
  return StepRange{*lo, *hi};
}

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string instance;
  std::string steps;
  std::uint64_t reads = 10000;
  std::uint64_t seed = kDefaultSeed;
  std::size_t delta = 1;
  double c_p = kDefaultCp;
  double p_guess = kDefaultPGuess;
  double ops_mult = kDefaultOpsMultiplier;
  double oam_mult = kDefaultOamMultiplier;
  std::string out;
  std::size_t bins = 40;
  std::size_t workers = 1;
  std::uint64_t sweeps = 1000;
  double hot_accept = 0.8;
  double cold_factor = 0.1;
  std::size_t vars = 20;
  std::size_t ones = 5;
  std::string source = "anneal";
  std::string sampler = "anneal";
  std::string scatter;
};

namespace detail {

inline JspInstance load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open instance file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_instance(ss.str());
  } catch (const ParseError& e) {
    throw UsageError(path + ":" + std::to_string(e.line()) + ": " + e.what());
  }
}

inline StepRange steps_for(const Options& o, const JspInstance& inst, bool single) {
  if (o.steps.empty()) {
    if (single) throw UsageError("--steps is required");
    return {1, inst.size()};
  }
  const auto r = parse_range(o.steps);
  if (!r) throw UsageError("invalid step range '" + o.steps + "'");
  if (r->lo < 1 || r->hi > inst.size())
    throw UsageError("step range must lie within 1:" + std::to_string(inst.size()));
  if (single && r->lo != r->hi) throw UsageError("expected a single step count, got a range");
  return *r;
}

inline CoefficientSet coeffs(const Options& o, const JspInstance& inst) {
  return derive_coefficients(inst, o.c_p, o.p_guess, o.ops_mult, o.oam_mult);
}

inline AnnealParams anneal_params(const Options& o) {
  AnnealParams p;
  p.reads = o.reads;
  p.sweeps = o.sweeps;
  p.hot_acceptance = o.hot_accept;
  p.cold_factor = o.cold_factor;
  p.seed = o.seed;
  p.workers = o.workers;
  p.validate();
  return p;
}

inline SolverConfig solver(const Options& o) {
  SolverConfig s;
  if (o.sampler == "uniform")
    s.kind = SolverConfig::Kind::uniform;
  else if (o.sampler != "anneal")
    throw UsageError("unknown sampler '" + o.sampler + "'");
  s.params = anneal_params(o);
  return s;
}

/// Writes to --out when given, otherwise to `out`.
inline void emit(const Options& o, std::ostream& out, const std::function<void(std::ostream&)>& fn,
                 const std::string& path_override = {}) {
  const auto& path = path_override.empty() ? o.out : path_override;
  if (path.empty()) {
    fn(out);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  fn(f);
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using namespace detail;
  Options o;
  CLI::App app{"Job Selection Problem solver toolkit: classical search, QUBO export and samplers", "jsp"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  auto add_instance = [&](CLI::App* sub) { sub->add_option("instance", o.instance, "Instance file")->required(); };
  auto add_steps = [&](CLI::App* sub, const char* what) { sub->add_option("--steps", o.steps, what); };
  auto add_coeffs = [&](CLI::App* sub) {
    sub->add_option("--cp", o.c_p, "Priority weight c_p")->capture_default_str();
    sub->add_option("--p-guess", o.p_guess, "Priority estimate used to scale time weights")->capture_default_str();
    sub->add_option("--ops-mult", o.ops_mult, "One-place-per-step penalty, in units of c_p")->capture_default_str();
    sub->add_option("--oam-mult", o.oam_mult, "Once-at-most penalty, in units of c_p")->capture_default_str();
  };
  auto add_sampling = [&](CLI::App* sub) {
    sub->add_option("--reads", o.reads, "Reads per step count")->capture_default_str();
    sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    sub->add_option("--sweeps", o.sweeps, "Annealing sweeps per read")->capture_default_str();
    sub->add_option("--hot-accept", o.hot_accept, "Initial acceptance target")->capture_default_str();
    sub->add_option("--cold-factor", o.cold_factor, "T_cold as a fraction of the smallest |dE|")->capture_default_str();
    sub->add_option("--sampler", o.sampler, "anneal or uniform")->capture_default_str();
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output file (default: standard output)");
    sub->add_option("--workers", o.workers, "Worker threads; output does not depend on it")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  };

  auto* validate_cmd = app.add_subcommand("validate", "Parse and check an instance file");
  add_instance(validate_cmd);

  auto* exhaustive_cmd = app.add_subcommand("exhaustive", "Enumerate every route and report the optima");
  add_instance(exhaustive_cmd);
  add_steps(exhaustive_cmd, "Step counts lo:hi (default 1:N)");
  add_common(exhaustive_cmd);

  auto* random_cmd = app.add_subcommand("random", "Uniform random route sampling against the exhaustive optima");
  add_instance(random_cmd);
  add_steps(random_cmd, "Step counts lo:hi (default 1:N)");
  random_cmd->add_option("--reads", o.reads, "Routes drawn per step count")->capture_default_str();
  random_cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  add_common(random_cmd);

  auto* qubo_cmd = app.add_subcommand("qubo", "Build the QUBO for one step count and export it");
  add_instance(qubo_cmd);
  add_steps(qubo_cmd, "Step count");
  add_coeffs(qubo_cmd);
  qubo_cmd->add_option("--out", o.out, "Output file (default: standard output)");

  auto* anneal_cmd = app.add_subcommand("anneal", "Sample the QUBO over a range of step counts");
  add_instance(anneal_cmd);
  add_steps(anneal_cmd, "Step counts lo:hi (default 1:N)");
  add_coeffs(anneal_cmd);
  add_sampling(anneal_cmd);
  add_common(anneal_cmd);

  auto* confirm_cmd = app.add_subcommand("confirm", "Check that the lowest-H0 feasible routes have the best priority");
  add_instance(confirm_cmd);
  add_steps(confirm_cmd, "Step count");
  add_coeffs(confirm_cmd);
  add_common(confirm_cmd);
  confirm_cmd->add_option("--scatter", o.scatter, "Also write p_tot,t_tot,h0 for every route here");

  auto* hist_cmd = app.add_subcommand("hist", "Energy histogram for one step count");
  add_instance(hist_cmd);
  add_steps(hist_cmd, "Step count");
  add_coeffs(hist_cmd);
  add_sampling(hist_cmd);
  add_common(hist_cmd);
  hist_cmd->add_option("--bins", o.bins, "Histogram bins")->capture_default_str()->check(CLI::PositiveNumber);
  hist_cmd->add_option("--source", o.source, "routes (H0 of every route), uniform or anneal")
      ->capture_default_str()
      ->check(CLI::IsMember({"routes", "uniform", "anneal"}));

  auto* sweep_cmd = app.add_subcommand("sweep", "Greedy step guess, then sample a window around it");
  add_instance(sweep_cmd);
  sweep_cmd->add_option("--delta", o.delta, "Half-width of the step window")->capture_default_str();
  add_coeffs(sweep_cmd);
  add_sampling(sweep_cmd);
  add_common(sweep_cmd);

  auto* dummy_cmd = app.add_subcommand("dummy", "(sum x - k)^2 demo: uniform vs annealing histograms");
  dummy_cmd->add_option("--vars", o.vars, "Variables")->capture_default_str()->check(CLI::PositiveNumber);
  dummy_cmd->add_option("--ones", o.ones, "Target number of ones")->capture_default_str();
  dummy_cmd->add_option("--reads", o.reads, "Reads per sampler")->capture_default_str();
  dummy_cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  dummy_cmd->add_option("--sweeps", o.sweeps, "Annealing sweeps per read")->capture_default_str();
  dummy_cmd->add_option("--bins", o.bins, "Histogram bins")->capture_default_str()->check(CLI::PositiveNumber);
  dummy_cmd->add_option("--out", o.out, "Output prefix: writes <out>_uniform.csv and <out>_anneal.csv");
  dummy_cmd->add_option("--workers", o.workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    out << sub->help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "jsp: " << e.what() << '\n';
    if (app.get_subcommands().empty()) err << "run 'jsp --help' for usage\n";
    return kUsage;
  }

  try {
    if (*validate_cmd) {
      const auto inst = load(o.instance);
      const auto issues = validate(inst);
      for (const auto& s : issues) err << o.instance << ": " << s << '\n';
      if (!issues.empty()) return kUsage;
      out << "ok " << inst.name << ": " << inst.size() << " places, t_max=" << jsp::detail::format_number(inst.t_max)
          << ", speed=" << jsp::detail::format_number(inst.speed) << '\n';
      return kOk;
    }

    if (*exhaustive_cmd) {
      const auto inst = load(o.instance);
      const auto r = steps_for(o, inst, false);
      std::vector<ExhaustiveReport> reports;
      for (std::size_t xi = r.lo; xi <= r.hi; ++xi) reports.push_back(exhaustive_search(inst, xi, o.workers));
      emit(o, out, [&](std::ostream& os) { write_exhaustive_csv(os, inst, reports); });
      const bool any = std::any_of(reports.begin(), reports.end(), [](const auto& x) { return x.best_priority.has_value(); });
      return any ? kOk : kNoSolution;
    }

    if (*random_cmd) {
      const auto inst = load(o.instance);
      const auto r = steps_for(o, inst, false);
      if (o.reads < 1) throw UsageError("--reads must be at least 1");
      std::vector<RandomReport> reports;
      for (std::size_t xi = r.lo; xi <= r.hi; ++xi)
        reports.push_back(random_sample_search(inst, xi, o.reads, o.seed, exhaustive_search(inst, xi, o.workers), o.workers));
      emit(o, out, [&](std::ostream& os) { write_random_csv(os, inst, reports); });
      const bool any = std::any_of(reports.begin(), reports.end(), [](const auto& x) { return x.best_found.has_value(); });
      return any ? kOk : kNoSolution;
    }

    if (*qubo_cmd) {
      const auto inst = load(o.instance);
      const auto xi = steps_for(o, inst, true).lo;
      const auto model = build_qubo(inst, xi, coeffs(o, inst));
      emit(o, out, [&](std::ostream& os) { os << export_qubo(model); });
      return kOk;
    }

    if (*anneal_cmd) {
      const auto inst = load(o.instance);
      const auto r = steps_for(o, inst, false);
      const auto res = sweep_range(inst, r.lo, r.hi, solver(o), coeffs(o, inst));
      emit(o, out, [&](std::ostream& os) { write_sweep_csv(os, inst, res); });
      return res.winner ? kOk : kNoSolution;
    }

    if (*sweep_cmd) {
      const auto inst = load(o.instance);
      const auto res = sweep(inst, o.delta, solver(o), coeffs(o, inst));
      if (!res.legs.empty())
        err << "s_cl=" << res.s_cl << " window=" << res.legs.front().xi << ':' << res.legs.back().xi << '\n';
      emit(o, out, [&](std::ostream& os) { write_sweep_csv(os, inst, res); });
      return res.winner ? kOk : kNoSolution;
    }

    if (*confirm_cmd) {
      const auto inst = load(o.instance);
      const auto xi = steps_for(o, inst, true).lo;
      const auto c = coeffs(o, inst);
      const auto rep = confirm_ground_state(inst, xi, c, o.workers);
      emit(o, out, [&](std::ostream& os) { write_confirmation(os, inst, rep); });
      if (!o.scatter.empty())
        emit(o, out, [&](std::ostream& os) { write_scatter_csv(os, scatter_data(inst, xi, c, o.workers)); }, o.scatter);
      return rep.best_priority ? kOk : kNoSolution;
    }

    if (*hist_cmd) {
      const auto inst = load(o.instance);
      const auto xi = steps_for(o, inst, true).lo;
      const auto c = coeffs(o, inst);
      Histogram h;
      if (o.source == "routes") {
        std::vector<double> h0;
        for (const auto& s : score_all_routes(inst, xi, c, o.workers)) h0.push_back(s.h0);
        h = histogram(h0, o.bins);
      } else {
        auto cfg = solver(o);
        cfg.kind = o.source == "uniform" ? SolverConfig::Kind::uniform : SolverConfig::Kind::anneal;
        h = histogram(run_solver(build_qubo(inst, xi, c), cfg), o.bins);
      }
      emit(o, out, [&](std::ostream& os) { write_histogram_csv(os, h); });
      return kOk;
    }

    if (*dummy_cmd) {
      const auto model = dummy_problem(o.vars, o.ones);
      auto params = anneal_params(o);
      const auto uni = sample_uniform(model, o.reads, o.seed, o.workers);
      const auto sa = simulated_anneal(model, params);
      auto report = [&](const char* label, const SampleSet& s) {
        const auto hits = reads_at_energy(s, 0.0);
        err << label << ": ground hits " << hits << '/' << s.total_reads << " ("
            << jsp::detail::format_number(static_cast<double>(hits) / static_cast<double>(s.total_reads)) << ")\n";
        const std::string path = o.out.empty() ? std::string{} : o.out + "_" + label + ".csv";
        if (path.empty()) out << "# " << label << '\n';
        emit(o, out, [&](std::ostream& os) { write_histogram_csv(os, histogram(s, o.bins)); }, path);
      };
      report("uniform", uni);
      report("anneal", sa);
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "jsp: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "jsp: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "jsp: line " << e.line() << ": " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace jsp::cli

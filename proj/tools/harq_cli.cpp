// Command-line front end: eval, simulate, optimize, sweep, validate.
//
// Exit codes: 0 success, 1 usage or validation error, 2 numerical failure,
// 3 validation-suite failure. Diagnostics go to standard error.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "harq/closed_form.hpp"
#include "harq/model.hpp"
#include "harq/monte_carlo.hpp"
#include "harq/optimizer.hpp"
#include "harq/parallel.hpp"
#include "harq/sweeps.hpp"
#include "harq/validation.hpp"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitValidation = 3;

struct Options {
  std::string protocol = "mlh";
  double rate = 1.0;
  double snr_db = 3.0;
  double sigma2 = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 42;
  int workers = 0;
  double grid_step = 0.01;
  double refine_tol = 1e-4;
  bool opt_rate = false;
  harq::QuadratureSettings quadrature;

  std::string kind = "t-vs-rate";
  double axis_min = NAN;
  double axis_max = NAN;
  double axis_step = NAN;
  std::string protocols = "ts,mlh,sc";
  std::string out;
  std::uint64_t mc_trials = 0;
  int configs = 20;
};

harq::SystemConfig system_config(const Options& o) {
  harq::SystemConfig cfg = harq::SystemConfig::from_snr_db(o.rate, o.snr_db, o.sigma2);
  cfg.validate();
  return cfg;
}

harq::SearchSettings search_settings(const Options& o) {
  harq::SearchSettings s;
  s.grid_step = o.grid_step;
  s.refine_tol = o.refine_tol;
  s.workers = o.workers;
  s.quadrature = o.quadrature;
  s.validate();
  return s;
}

harq::PowerSplit effective_split(harq::Protocol protocol, const Options& o) {
  harq::PowerSplit split{o.alpha, o.beta};
  split.validate();
  if (protocol == harq::Protocol::TimeSharing) return {1.0, 1.0};
  if (protocol == harq::Protocol::Superposition) split.beta = split.alpha;
  return split;
}

Json event_json(const harq::EventProbs& p, double none) {
  return Json{{"p0", p.p0},   {"p1", p.p1},   {"p1p", p.p1p}, {"p2", p.p2},  {"p2p", p.p2p},
              {"p3", p.p3},   {"p4", p.p4},   {"p4p", p.p4p}, {"none", none}};
}

Json sc_json(const harq::ScProbs& p, double none) {
  return Json{{"tp3", p.tp3}, {"tp4", p.tp4}, {"tp4p", p.tp4p}, {"none", none}};
}

Json estimate_json(const harq::McEstimate& e) {
  return Json{{"mean", e.mean}, {"std_err", e.std_err}, {"trials", e.trials}};
}

Json scenario_json(harq::Protocol protocol, const harq::SystemConfig& cfg, const Options& o) {
  return Json{{"protocol", std::string(harq::to_string(protocol))},
              {"rate", cfg.rate},
              {"snr_db", o.snr_db},
              {"sigma2", cfg.sigma2},
              {"power", cfg.power}};
}

int run_eval(const Options& o) {
  const harq::Protocol protocol = harq::parse_protocol(o.protocol);
  const harq::SystemConfig cfg = system_config(o);
  o.quadrature.validate();
  const harq::PowerSplit split = effective_split(protocol, o);

  const harq::EventProbs probs = harq::event_probs(split, cfg, o.quadrature);
  const harq::ScProbs sc = harq::prob_sc(split.alpha, cfg, o.quadrature);
  double throughput = 0.0;
  switch (protocol) {
    case harq::Protocol::TimeSharing: throughput = harq::throughput_ts(cfg, o.quadrature); break;
    case harq::Protocol::MultiLayer: throughput = harq::throughput_mlh(probs, cfg.rate); break;
    case harq::Protocol::Superposition: throughput = harq::throughput_sc(sc, cfg.rate); break;
  }

  Json doc = scenario_json(protocol, cfg, o);
  doc["alpha"] = split.alpha;
  doc["beta"] = split.beta;
  doc["event_probs"] = event_json(probs, 1.0 - probs.sum());
  doc["sc_probs"] = sc_json(sc, 1.0 - sc.sum());
  doc["throughput"] = throughput;
  std::cout << doc.dump(2) << '\n';
  return kExitOk;
}

int run_simulate(const Options& o) {
  const harq::Protocol protocol = harq::parse_protocol(o.protocol);
  const harq::SystemConfig cfg = system_config(o);
  const harq::PowerSplit split = effective_split(protocol, o);
  const harq::McReport r = harq::estimate(protocol, split, cfg, o.trials, o.seed, o.workers);

  Json doc = scenario_json(protocol, cfg, o);
  doc["alpha"] = r.split.alpha;
  doc["beta"] = r.split.beta;
  doc["trials"] = r.trials;
  doc["master_seed"] = r.master_seed;
  doc["blocks"] = r.blocks;
  doc["event_probs"] = event_json(r.event_probs, r.event_none);
  doc["sc_probs"] = sc_json(r.sc_probs, r.sc_none);
  doc["throughput"] = Json{{"ts", estimate_json(r.throughput_ts)},
                           {"mlh", estimate_json(r.throughput_mlh)},
                           {"sc", estimate_json(r.throughput_sc)}};
  std::cout << doc.dump(2) << '\n';
  return kExitOk;
}

int run_optimize(const Options& o) {
  const harq::Protocol protocol = harq::parse_protocol(o.protocol);
  const harq::SystemConfig cfg = system_config(o);
  const harq::SearchSettings search = search_settings(o);
  const std::vector<double> rates = harq::default_rate_grid();
  const harq::Optimum opt = o.opt_rate ? harq::optimize_rate_and_split(protocol, cfg, rates, search)
                                       : harq::optimize_split(protocol, cfg, search);

  Json doc = scenario_json(protocol, cfg, o);
  if (opt.rate_star) doc["rate"] = *opt.rate_star;
  doc["alpha_star"] = opt.alpha_star;
  doc["beta_star"] = opt.beta_star;
  if (opt.rate_star) doc["rate_star"] = *opt.rate_star;
  doc["throughput_star"] = opt.throughput_star;
  doc["evaluations"] = opt.evaluations;
  std::cout << doc.dump(2) << '\n';
  return kExitOk;
}

std::vector<harq::Protocol> parse_protocol_list(const std::string& text) {
  std::vector<harq::Protocol> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(harq::parse_protocol(item));
  }
  return out;
}

int run_sweep(const Options& o) {
  harq::SweepSpec spec = harq::SweepSpec::defaults(harq::parse_sweep_kind(o.kind));
  spec.snr_db = o.snr_db;
  spec.rate = o.rate;
  spec.sigma2 = o.sigma2;
  if (!std::isnan(o.axis_min)) spec.axis.min = o.axis_min;
  if (!std::isnan(o.axis_max)) spec.axis.max = o.axis_max;
  if (!std::isnan(o.axis_step)) spec.axis.step = o.axis_step;
  spec.protocols = parse_protocol_list(o.protocols);
  spec.search = search_settings(o);
  spec.mc_trials = o.mc_trials;
  spec.seed = o.seed;
  spec.workers = o.workers;
  spec.output = o.out;

  const std::vector<harq::SweepRow> rows = harq::run_sweep(spec);
  harq::write_csv(rows, spec.output);
  std::cout << rows.size() << " rows written to " << spec.output.string() << '\n';
  return kExitOk;
}

int run_validate(const Options& o) {
  harq::ValidationSettings settings;
  settings.configs = o.configs;
  settings.trials = o.trials;
  settings.seed = o.seed;
  settings.workers = o.workers;
  settings.quadrature = o.quadrature;
  settings.quadrature.validate();
  const std::vector<harq::ValidationCase> cases = harq::run_validation(settings);

  std::printf("%-4s %8s %8s %7s %7s %8s %-5s %s\n", "case", "rate", "snr_db", "alpha", "beta",
              "max|z|", "worst", "result");
  int passed = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const harq::ValidationCase& c = cases[i];
    std::size_t worst = 0;
    for (std::size_t k = 1; k < c.z_score.size(); ++k) {
      if (std::abs(c.z_score[k]) > std::abs(c.z_score[worst])) worst = k;
    }
    std::printf("%-4zu %8.4f %8.3f %7.4f %7.4f %8.3f %-5s %s\n", i, c.cfg.rate, c.snr_db,
                c.split.alpha, c.split.beta, std::abs(c.z_score[worst]),
                std::string(harq::kProbabilityNames[worst]).c_str(), c.pass ? "PASS" : "FAIL");
    passed += c.pass ? 1 : 0;
  }
  std::printf("%d/%zu pass\n", passed, cases.size());
  return passed == static_cast<int>(cases.size()) ? kExitOk : kExitValidation;
}

void add_scenario(CLI::App* cmd, Options& o, bool with_split) {
  cmd->add_option("--protocol", o.protocol, "ts, mlh or sc")
      ->check(CLI::IsMember({"ts", "mlh", "sc"}));
  cmd->add_option("--rate", o.rate, "rate R in bits per channel use")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--snr-db", o.snr_db, "SNR P/sigma2 in dB");
  cmd->add_option("--sigma2", o.sigma2, "mean channel gain")->check(CLI::PositiveNumber);
  if (with_split) {
    cmd->add_option("--alpha", o.alpha, "slot-1 power share of m1")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--beta", o.beta, "slot-2 power share of m1")->check(CLI::Range(0.0, 1.0));
  }
}

void add_quadrature(CLI::App* cmd, Options& o) {
  cmd->add_option("--abs-tol", o.quadrature.abs_tol, "quadrature absolute tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--rel-tol", o.quadrature.rel_tol, "quadrature relative tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-subdivisions", o.quadrature.max_subdivisions,
                  "quadrature subdivision budget")
      ->check(CLI::Range(10, 1'000'000));
}

void add_search(CLI::App* cmd, Options& o) {
  cmd->add_option("--grid-step", o.grid_step, "coarse split grid step")
      ->check(CLI::Range(1e-6, 0.5));
  cmd->add_option("--refine-tol", o.refine_tol, "final split box size")
      ->check(CLI::PositiveNumber);
}

void add_workers(CLI::App* cmd, Options& o) {
  cmd->add_option("--workers", o.workers, "worker threads (default: HARQ_WORKERS or OpenMP)")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Throughput analysis of two-message retransmission schemes"};
  app.require_subcommand(1);
  Options o;

  auto* eval = app.add_subcommand("eval", "closed-form event probabilities and throughput");
  add_scenario(eval, o, true);
  add_quadrature(eval, o);

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo estimate of the slice");
  add_scenario(simulate, o, true);
  simulate->add_option("--trials", o.trials, "number of slices")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", o.seed, "master seed");
  add_workers(simulate, o);

  auto* optimize = app.add_subcommand("optimize", "maximise throughput over the power split");
  add_scenario(optimize, o, false);
  optimize->add_flag("--opt-rate", o.opt_rate, "also optimise the rate");
  add_search(optimize, o);
  add_quadrature(optimize, o);
  add_workers(optimize, o);

  auto* sweep = app.add_subcommand("sweep", "regenerate a figure's data as CSV");
  sweep->add_option("--kind", o.kind, "sweep kind")
      ->check(CLI::IsMember({"t-vs-rate", "splits-vs-rate", "t-vs-snr", "splits-vs-snr",
                             "t-vs-snr-opt-rate", "splits-vs-snr-opt-rate", "rate-star-vs-snr"}));
  sweep->add_option("--snr-db", o.snr_db, "fixed SNR for rate axes");
  sweep->add_option("--rate", o.rate, "fixed rate for SNR axes")->check(CLI::PositiveNumber);
  sweep->add_option("--sigma2", o.sigma2, "mean channel gain")->check(CLI::PositiveNumber);
  sweep->add_option("--min", o.axis_min, "axis start");
  sweep->add_option("--max", o.axis_max, "axis end");
  sweep->add_option("--step", o.axis_step, "axis step")->check(CLI::PositiveNumber);
  sweep->add_option("--protocols", o.protocols, "comma-separated subset of ts,mlh,sc");
  sweep->add_option("--out", o.out, "output CSV path")->required();
  sweep->add_option("--mc-trials", o.mc_trials, "also simulate each optimum with this many trials");
  sweep->add_option("--seed", o.seed, "master seed for Monte-Carlo rows");
  add_search(sweep, o);
  add_workers(sweep, o);

  auto* validate = app.add_subcommand("validate", "closed form vs Monte Carlo on random configs");
  validate->add_option("--configs", o.configs, "number of random configurations")
      ->check(CLI::PositiveNumber);
  validate->add_option("--trials", o.trials, "slices per configuration")
      ->check(CLI::PositiveNumber);
  validate->add_option("--seed", o.seed, "master seed");
  add_quadrature(validate, o);
  add_workers(validate, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (o.workers <= 0) o.workers = harq::default_workers();
    if (eval->parsed()) return run_eval(o);
    if (simulate->parsed()) return run_simulate(o);
    if (optimize->parsed()) return run_optimize(o);
    if (sweep->parsed()) return run_sweep(o);
    if (validate->parsed()) return run_validate(o);
  } catch (const harq::NonConvergence& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

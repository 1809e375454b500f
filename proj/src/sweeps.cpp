#include "harq/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>

#include "harq/monte_carlo.hpp"
#include "harq/parallel.hpp"

namespace harq {

namespace {

struct KindName {
  SweepKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {SweepKind::ThroughputVsRate, "t-vs-rate"},
    {SweepKind::SplitsVsRate, "splits-vs-rate"},
    {SweepKind::ThroughputVsSnrFixedRate, "t-vs-snr"},
    {SweepKind::SplitsVsSnrFixedRate, "splits-vs-snr"},
    {SweepKind::ThroughputVsSnrOptRate, "t-vs-snr-opt-rate"},
    {SweepKind::SplitsVsSnrOptRate, "splits-vs-snr-opt-rate"},
    {SweepKind::RateStarVsSnr, "rate-star-vs-snr"},
};

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

struct PointResult {
  std::vector<SweepRow> rows;
  std::string error;  // empty on success
  bool numerical = false;
  double axis_value;
};

}  // namespace

std::string_view to_string(SweepKind kind) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "?";
}

SweepKind parse_sweep_kind(std::string_view name) {
  for (const auto& kn : kKindNames) {
    if (kn.name == name) return kn.kind;
  }
  throw std::invalid_argument("unknown sweep kind '" + std::string(name) + "'");
}

bool rate_axis(SweepKind kind) {
  return kind == SweepKind::ThroughputVsRate || kind == SweepKind::SplitsVsRate;
}

bool optimizes_rate(SweepKind kind) {
  return kind == SweepKind::ThroughputVsSnrOptRate || kind == SweepKind::SplitsVsSnrOptRate ||
         kind == SweepKind::RateStarVsSnr;
}

std::vector<double> AxisGrid::points() const {
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double x = min + i * step;
    if (x > max + 1e-9 * step) break;
    // Snap to 12 significant digits so the axis prints exactly as typed.
    out.push_back(std::stod(format_number(x)));
  }
  return out;
}

SweepSpec SweepSpec::defaults(SweepKind kind) {
  SweepSpec spec;
  spec.kind = kind;
  spec.axis = rate_axis(kind) ? AxisGrid{0.1, 6.0, 0.1} : AxisGrid{-5.0, 40.0, 1.0};
  return spec;
}

void SweepSpec::validate() const {
  if (!(axis.step > 0.0)) throw std::invalid_argument("sweep axis step must be positive");
  if (!(axis.max >= axis.min)) throw std::invalid_argument("sweep axis max must be >= min");
  if (protocols.empty()) throw std::invalid_argument("sweep needs at least one protocol");
  if (rate_axis(kind) && !(axis.min > 0.0)) {
    throw std::invalid_argument("rate axis must be strictly positive");
  }
  if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
  if (optimizes_rate(kind) && rate_grid.empty()) {
    throw std::invalid_argument("rate grid must be nonempty");
  }
  search.validate();
}

std::string_view to_string(RowSource source) {
  return source == RowSource::ClosedForm ? "closed_form" : "monte_carlo";
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::vector<double> axis = spec.axis.points();

  struct Task {
    Protocol protocol;
    double axis_value;
  };
  std::vector<Task> tasks;
  for (Protocol p : spec.protocols) {
    for (double x : axis) tasks.push_back({p, x});
  }

  // Points run in parallel; the optimizer inside stays serial.
  SearchSettings inner = spec.search;
  inner.workers = 1;
  const int threads = spec.workers > 0 ? spec.workers : default_workers();
  (void)threads;

  std::vector<PointResult> results(tasks.size());
  const auto n = static_cast<std::int64_t>(tasks.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t t = 0; t < n; ++t) {
    const Task& task = tasks[static_cast<std::size_t>(t)];
    PointResult& out = results[static_cast<std::size_t>(t)];
    out.axis_value = task.axis_value;
    try {
      const double snr = rate_axis(spec.kind) ? spec.snr_db : task.axis_value;
      const double rate = rate_axis(spec.kind) ? task.axis_value : spec.rate;
      SystemConfig cfg = SystemConfig::from_snr_db(rate, snr, spec.sigma2);
      const Optimum opt = optimizes_rate(spec.kind)
                              ? optimize_rate_and_split(task.protocol, cfg, spec.rate_grid, inner)
                              : optimize_split(task.protocol, cfg, inner);
      cfg.rate = opt.rate_star.value_or(rate);

      SweepRow row;
      row.protocol = task.protocol;
      row.snr_db = snr;
      row.rate = cfg.rate;
      row.alpha = opt.alpha_star;
      row.beta = opt.beta_star;
      row.throughput = opt.throughput_star;
      out.rows.push_back(row);

      if (spec.mc_trials > 0) {
        const McReport mc = estimate(task.protocol, {opt.alpha_star, opt.beta_star}, cfg,
                                     spec.mc_trials, spec.seed, 1);
        SweepRow sim = row;
        sim.source = RowSource::MonteCarlo;
        sim.trials = spec.mc_trials;
        sim.seed = spec.seed;
        sim.throughput = task.protocol == Protocol::TimeSharing     ? mc.throughput_ts.mean
                         : task.protocol == Protocol::MultiLayer    ? mc.throughput_mlh.mean
                                                                    : mc.throughput_sc.mean;
        out.rows.push_back(sim);
      }
    } catch (const std::exception& e) {
      out.numerical = dynamic_cast<const NonConvergence*>(&e) != nullptr;
      out.error = std::string(to_string(spec.kind)) + " failed at protocol=" +
                  std::string(to_string(task.protocol)) +
                  (rate_axis(spec.kind) ? " rate=" : " snr_db=") + format_number(task.axis_value) +
                  ": " + e.what();
    }
  }

  std::vector<SweepRow> rows;
  for (const PointResult& r : results) {
    if (r.error.empty()) {
      rows.insert(rows.end(), r.rows.begin(), r.rows.end());
      continue;
    }
    if (r.numerical) throw NonConvergence(r.error);
    throw SweepError(r.error);
  }
  const bool by_rate = rate_axis(spec.kind);
  std::stable_sort(rows.begin(), rows.end(), [by_rate](const SweepRow& a, const SweepRow& b) {
    if (a.protocol != b.protocol) return a.protocol < b.protocol;
    const double xa = by_rate ? a.rate : a.snr_db;
    const double xb = by_rate ? b.rate : b.snr_db;
    if (xa != xb) return xa < xb;
    return a.source < b.source;
  });
  return rows;
}

std::string format_csv_row(const SweepRow& row) {
  std::string line;
  line += to_string(row.protocol);
  for (double x : {row.snr_db, row.rate, row.alpha, row.beta, row.throughput}) {
    line += ',';
    line += format_number(x);
  }
  line += ',';
  line += to_string(row.source);
  line += ',' + std::to_string(row.trials);
  line += ',' + std::to_string(row.seed);
  return line;
}

void write_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << kCsvHeader << '\n';
  for (const SweepRow& row : rows) out << format_csv_row(row) << '\n';
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace harq

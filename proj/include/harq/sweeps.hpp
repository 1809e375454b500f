#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "harq/model.hpp"
#include "harq/optimizer.hpp"

namespace harq {

enum class SweepKind {
  ThroughputVsRate,
  SplitsVsRate,
  ThroughputVsSnrFixedRate,
  SplitsVsSnrFixedRate,
  ThroughputVsSnrOptRate,
  SplitsVsSnrOptRate,
  RateStarVsSnr,
};

/// CLI names: t-vs-rate, splits-vs-rate, t-vs-snr, splits-vs-snr,
/// t-vs-snr-opt-rate, splits-vs-snr-opt-rate, rate-star-vs-snr.
std::string_view to_string(SweepKind kind);
SweepKind parse_sweep_kind(std::string_view name);

/// True when the sweep axis is the rate (SNR fixed); false for SNR axes.
bool rate_axis(SweepKind kind);
/// True when the rate is optimized at every axis point.
bool optimizes_rate(SweepKind kind);

struct AxisGrid {
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;

  /// min, min + step, ... up to max (inclusive within 1e-9 step).
  std::vector<double> points() const;
};

struct SweepSpec {
  SweepKind kind = SweepKind::ThroughputVsRate;
  double snr_db = 3.0;  // fixed on rate axes
  double rate = 1.0;    // fixed on SNR axes without rate optimization
  double sigma2 = 1.0;
  AxisGrid axis;
  std::vector<Protocol> protocols{Protocol::TimeSharing, Protocol::MultiLayer,
                                  Protocol::Superposition};
  SearchSettings search;
  std::vector<double> rate_grid = default_rate_grid();
  /// When positive, each optimum is also simulated and emitted as a
  /// monte_carlo row.
  std::uint64_t mc_trials = 0;
  std::uint64_t seed = 0;
  int workers = 0;
  std::filesystem::path output;

  /// Default axes: rate 0.1..6.0 step 0.1 at 3 dB; SNR -5..40 dB step 1.
  static SweepSpec defaults(SweepKind kind);
  void validate() const;
};

enum class RowSource { ClosedForm, MonteCarlo };
std::string_view to_string(RowSource source);

struct SweepRow {
  Protocol protocol = Protocol::TimeSharing;
  double snr_db = 0.0;
  double rate = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  double throughput = 0.0;
  RowSource source = RowSource::ClosedForm;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

class SweepError : public std::runtime_error {
 public:
  explicit SweepError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Rows sorted by (protocol, axis value, source). A failing point aborts the
/// sweep with a diagnostic naming the point: NonConvergence for quadrature
/// failures, SweepError otherwise.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

inline constexpr std::string_view kCsvHeader =
    "protocol,snr_db,rate,alpha,beta,throughput,source,trials,seed";

/// One CSV line (no newline), numbers at 12 significant digits.
std::string format_csv_row(const SweepRow& row);
void write_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

}  // namespace harq

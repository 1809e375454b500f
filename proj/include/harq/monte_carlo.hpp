#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "harq/closed_form.hpp"
#include "harq/model.hpp"

namespace harq {

/// Counter-based stream: output i is a SplitMix64 finalisation of key + i * phi.
/// A stream is fully determined by (master_seed, stream index), so any
/// partition of the work reproduces the same numbers.
class CounterStream {
 public:
  CounterStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t next_u64();
  /// Uniform on (0, 1].
  double uniform();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Exponential gain with mean sigma2 by inversion: -sigma2 ln U.
double sample_gain(CounterStream& stream, double sigma2);

SliceOutcome simulate_slice_mlh(const ChannelDraw& draw, const PowerSplit& split,
                                const SystemConfig& cfg);
SliceOutcome simulate_slice_ts(const ChannelDraw& draw, const SystemConfig& cfg);
SliceOutcome simulate_slice_sc(const ChannelDraw& draw, double alpha, const SystemConfig& cfg);

class InvalidTrials : public std::invalid_argument {
 public:
  explicit InvalidTrials(const std::string& what) : std::invalid_argument(what) {}
};

struct McEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::uint64_t trials = 0;
};

/// sqrt(p (1 - p) / trials)
double binomial_std_err(double p, std::uint64_t trials);

/// Integer tallies of one block of trials; merging is exact and order free.
struct BlockTally {
  std::array<std::uint64_t, kEventCount> mlh_events{};  // indexed by Event
  std::array<std::uint64_t, kEventCount> ts_events{};
  std::array<std::uint64_t, kEventCount> sc_events{};
  std::uint64_t mlh_reward = 0, mlh_slots = 0;
  std::uint64_t ts_reward = 0, ts_slots = 0;
  std::uint64_t sc_reward = 0, sc_slots = 0;
  std::uint64_t trials = 0;

  void merge(const BlockTally& other);
};

struct McReport {
  Protocol protocol = Protocol::MultiLayer;
  PowerSplit split;             // effective split (TS forces 1,1; SC forces beta = alpha)
  EventProbs event_probs;       // multi-layer slice at `split`
  double event_none = 0.0;      // all-fail frequency of the multi-layer slice
  ScProbs sc_probs;             // superposition slice at split.alpha
  double sc_none = 0.0;
  McEstimate throughput_ts;
  McEstimate throughput_mlh;
  McEstimate throughput_sc;
  std::uint64_t master_seed = 0;
  std::uint64_t trials = 0;
  int blocks = 0;
};

inline constexpr int kMcBlocks = 128;
inline constexpr int kBootstrapResamples = 200;

/// Trials [begin, end) of block `index` when `trials` are cut into `blocks`.
struct BlockRange {
  std::uint64_t begin;
  std::uint64_t end;
};
BlockRange block_range(std::uint64_t trials, int blocks, int index);
int block_count(std::uint64_t trials);

/// Simulates every trial of one block from its own stream.
BlockTally simulate_block(const PowerSplit& split, const SystemConfig& cfg, std::uint64_t trials,
                          std::uint64_t master_seed, int block_index, int blocks);

/// OpenMP-parallel estimate over `workers` threads (<= 0: default_workers()).
/// Bit-identical to estimate_serial for every worker count.
McReport estimate(Protocol protocol, const PowerSplit& split, const SystemConfig& cfg,
                  std::uint64_t trials, std::uint64_t master_seed, int workers = 0);

/// Single-threaded reference implementation.
McReport estimate_serial(Protocol protocol, const PowerSplit& split, const SystemConfig& cfg,
                         std::uint64_t trials, std::uint64_t master_seed);

/// Report assembly from per-block tallies (shared by both drivers).
McReport summarize(Protocol protocol, const PowerSplit& split, const SystemConfig& cfg,
                   const std::vector<BlockTally>& tallies, std::uint64_t master_seed);

}  // namespace harq

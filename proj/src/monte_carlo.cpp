#include "harq/monte_carlo.hpp"

#include <cmath>

#include "harq/parallel.hpp"

namespace harq {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
// Streams at or above this index are reserved for the bootstrap.
constexpr std::uint64_t kBootstrapStreamBase = 1ULL << 62;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

PowerSplit effective_split(Protocol protocol, const PowerSplit& split) {
  switch (protocol) {
    case Protocol::TimeSharing: return {1.0, 1.0};
    case Protocol::Superposition: return {split.alpha, split.alpha};
    case Protocol::MultiLayer: break;
  }
  return split;
}

void check_trials(std::uint64_t trials) {
  if (trials == 0) throw InvalidTrials("trials must be at least 1");
}

// Ratio-of-sums throughput with a block-bootstrap standard error.
McEstimate throughput_estimate(const std::vector<BlockTally>& tallies, double rate,
                               std::uint64_t BlockTally::*reward, std::uint64_t BlockTally::*slots,
                               std::uint64_t master_seed, std::uint64_t stream) {
  std::uint64_t total_reward = 0, total_slots = 0, trials = 0;
  for (const auto& t : tallies) {
    total_reward += t.*reward;
    total_slots += t.*slots;
    trials += t.trials;
  }
  McEstimate est;
  est.trials = trials;
  est.mean = rate * static_cast<double>(total_reward) / static_cast<double>(total_slots);

  const auto n = static_cast<std::uint64_t>(tallies.size());
  if (n < 2) return est;
  CounterStream rng(master_seed, kBootstrapStreamBase + stream);
  double sum = 0.0, sum_sq = 0.0;
  for (int r = 0; r < kBootstrapResamples; ++r) {
    std::uint64_t rw = 0, sl = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto& t = tallies[rng.next_u64() % n];
      rw += t.*reward;
      sl += t.*slots;
    }
    const double value = rate * static_cast<double>(rw) / static_cast<double>(sl);
    sum += value;
    sum_sq += value * value;
  }
  const double m = sum / kBootstrapResamples;
  const double var = (sum_sq - kBootstrapResamples * m * m) / (kBootstrapResamples - 1);
  est.std_err = std::sqrt(std::max(var, 0.0));
  return est;
}

EventProbs frequencies(const std::array<std::uint64_t, kEventCount>& counts, double trials,
                       double& none) {
  auto f = [&](Event e) { return static_cast<double>(counts[static_cast<int>(e)]) / trials; };
  none = f(Event::NoneDecoded);
  return {f(Event::Omega0), f(Event::Omega1), f(Event::Omega1p), f(Event::Omega2),
          f(Event::Omega2p), f(Event::Omega3), f(Event::Omega4), f(Event::Omega4p)};
}

}  // namespace

CounterStream::CounterStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : key_(mix64(master_seed ^ mix64(stream_index + kGolden))) {}

std::uint64_t CounterStream::next_u64() { return mix64(key_ + (++counter_) * kGolden); }

double CounterStream::uniform() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double sample_gain(CounterStream& stream, double sigma2) { return -sigma2 * std::log(stream.uniform()); }

SliceOutcome simulate_slice_mlh(const ChannelDraw& draw, const PowerSplit& split,
                                const SystemConfig& cfg) {
  const double P = cfg.power;
  switch (classify_slot1(draw.g1, split.alpha, cfg)) {
    case DecodeLabel::Both: return SliceOutcome::make(Event::Omega0, 1);
    case DecodeLabel::OnlyM1:
      return SliceOutcome::make(
          classify_slot2_single(draw.g1, (1.0 - split.alpha) * P, draw.g2, cfg) ? Event::Omega1
                                                                                : Event::Omega2,
          2);
    case DecodeLabel::OnlyM2:
      return SliceOutcome::make(
          classify_slot2_single(draw.g1, split.alpha * P, draw.g2, cfg) ? Event::Omega1p
                                                                        : Event::Omega2p,
          2);
    case DecodeLabel::None: break;
  }
  switch (classify_slot2_joint(draw, split, cfg)) {
    case DecodeLabel::Both: return SliceOutcome::make(Event::Omega3, 2);
    case DecodeLabel::OnlyM1: return SliceOutcome::make(Event::Omega4, 2);
    case DecodeLabel::OnlyM2: return SliceOutcome::make(Event::Omega4p, 2);
    case DecodeLabel::None: break;
  }
  return SliceOutcome::make(Event::NoneDecoded, 2);
}

SliceOutcome simulate_slice_ts(const ChannelDraw& draw, const SystemConfig& cfg) {
  SliceOutcome out = simulate_slice_mlh(draw, {1.0, 1.0}, cfg);
  out.duration_slots = 2;
  return out;
}

SliceOutcome simulate_slice_sc(const ChannelDraw& draw, double alpha, const SystemConfig& cfg) {
  switch (classify_slot2_joint(draw, {alpha, alpha}, cfg)) {
    case DecodeLabel::Both: return SliceOutcome::make(Event::Omega3, 2);
    case DecodeLabel::OnlyM1: return SliceOutcome::make(Event::Omega4, 2);
    case DecodeLabel::OnlyM2: return SliceOutcome::make(Event::Omega4p, 2);
    case DecodeLabel::None: break;
  }
  return SliceOutcome::make(Event::NoneDecoded, 2);
}

double binomial_std_err(double p, std::uint64_t trials) {
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(trials));
}

void BlockTally::merge(const BlockTally& other) {
  for (int i = 0; i < kEventCount; ++i) {
    mlh_events[i] += other.mlh_events[i];
    ts_events[i] += other.ts_events[i];
    sc_events[i] += other.sc_events[i];
  }
  mlh_reward += other.mlh_reward;
  mlh_slots += other.mlh_slots;
  ts_reward += other.ts_reward;
  ts_slots += other.ts_slots;
  sc_reward += other.sc_reward;
  sc_slots += other.sc_slots;
  trials += other.trials;
}

int block_count(std::uint64_t trials) {
  return trials < static_cast<std::uint64_t>(kMcBlocks) ? static_cast<int>(trials) : kMcBlocks;
}

BlockRange block_range(std::uint64_t trials, int blocks, int index) {
  const auto b = static_cast<std::uint64_t>(blocks);
  const auto i = static_cast<std::uint64_t>(index);
  // trials * i / b without overflow for any realistic trial count.
  auto edge = [&](std::uint64_t k) { return (trials / b) * k + (trials % b) * k / b; };
  return {edge(i), edge(i + 1)};
}

BlockTally simulate_block(const PowerSplit& split, const SystemConfig& cfg, std::uint64_t trials,
                          std::uint64_t master_seed, int block_index, int blocks) {
  const BlockRange range = block_range(trials, blocks, block_index);
  CounterStream stream(master_seed, static_cast<std::uint64_t>(block_index));
  BlockTally tally;
  for (std::uint64_t i = range.begin; i < range.end; ++i) {
    ChannelDraw draw;
    draw.g1 = sample_gain(stream, cfg.sigma2);
    draw.g2 = sample_gain(stream, cfg.sigma2);

    const SliceOutcome mlh = simulate_slice_mlh(draw, split, cfg);
    ++tally.mlh_events[static_cast<int>(mlh.event)];
    tally.mlh_reward += static_cast<std::uint64_t>(mlh.reward_messages);
    tally.mlh_slots += static_cast<std::uint64_t>(mlh.duration_slots);

    const SliceOutcome ts = simulate_slice_ts(draw, cfg);
    ++tally.ts_events[static_cast<int>(ts.event)];
    tally.ts_reward += static_cast<std::uint64_t>(ts.reward_messages);
    tally.ts_slots += static_cast<std::uint64_t>(ts.duration_slots);

    const SliceOutcome sc = simulate_slice_sc(draw, split.alpha, cfg);
    ++tally.sc_events[static_cast<int>(sc.event)];
    tally.sc_reward += static_cast<std::uint64_t>(sc.reward_messages);
    tally.sc_slots += static_cast<std::uint64_t>(sc.duration_slots);
    ++tally.trials;
  }
  return tally;
}

McReport summarize(Protocol protocol, const PowerSplit& split, const SystemConfig& cfg,
                   const std::vector<BlockTally>& tallies, std::uint64_t master_seed) {
  BlockTally total;
  for (const auto& t : tallies) total.merge(t);

  McReport report;
  report.protocol = protocol;
  report.split = split;
  report.master_seed = master_seed;
  report.trials = total.trials;
  report.blocks = static_cast<int>(tallies.size());

  const double n = static_cast<double>(total.trials);
  report.event_probs = frequencies(total.mlh_events, n, report.event_none);
  double sc_none = 0.0;
  const EventProbs sc = frequencies(total.sc_events, n, sc_none);
  report.sc_probs = {sc.p3, sc.p4, sc.p4p};
  report.sc_none = sc_none;

  report.throughput_ts = throughput_estimate(tallies, cfg.rate, &BlockTally::ts_reward,
                                             &BlockTally::ts_slots, master_seed, 0);
  report.throughput_mlh = throughput_estimate(tallies, cfg.rate, &BlockTally::mlh_reward,
                                              &BlockTally::mlh_slots, master_seed, 1);
  report.throughput_sc = throughput_estimate(tallies, cfg.rate, &BlockTally::sc_reward,
                                             &BlockTally::sc_slots, master_seed, 2);
  return report;
}

McReport estimate_serial(Protocol protocol, const PowerSplit& split, const SystemConfig& cfg,
                         std::uint64_t trials, std::uint64_t master_seed) {
  check_trials(trials);
  const PowerSplit eff = effective_split(protocol, split);
  const int blocks = block_count(trials);
  std::vector<BlockTally> tallies;
  tallies.reserve(static_cast<std::size_t>(blocks));
  for (int b = 0; b < blocks; ++b) {
    tallies.push_back(simulate_block(eff, cfg, trials, master_seed, b, blocks));
  }
  return summarize(protocol, eff, cfg, tallies, master_seed);
}

McReport estimate(Protocol protocol, const PowerSplit& split, const SystemConfig& cfg,
                  std::uint64_t trials, std::uint64_t master_seed, int workers) {
  check_trials(trials);
  const PowerSplit eff = effective_split(protocol, split);
  const int blocks = block_count(trials);
  std::vector<BlockTally> tallies(static_cast<std::size_t>(blocks));
  const int threads = workers > 0 ? workers : default_workers();
  (void)threads;

#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int b = 0; b < blocks; ++b) {
    tallies[static_cast<std::size_t>(b)] = simulate_block(eff, cfg, trials, master_seed, b, blocks);
  }
  return summarize(protocol, eff, cfg, tallies, master_seed);
}

}  // namespace harq

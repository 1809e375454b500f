#include <doctest.h>

#include <cmath>
#include <cstring>

#include "harq/closed_form.hpp"
#include "harq/monte_carlo.hpp"

using namespace harq;

namespace {

SystemConfig cfg_rp(double rate, double power) {
  SystemConfig c;
  c.rate = rate;
  c.power = power;
  return c;
}

bool same(const McEstimate& a, const McEstimate& b) {
  return a.mean == b.mean && a.std_err == b.std_err && a.trials == b.trials;
}

bool same(const McReport& a, const McReport& b) {
  const EventProbs& x = a.event_probs;
  const EventProbs& y = b.event_probs;
  return a.protocol == b.protocol && a.split.alpha == b.split.alpha &&
         a.split.beta == b.split.beta && x.p0 == y.p0 && x.p1 == y.p1 && x.p1p == y.p1p &&
         x.p2 == y.p2 && x.p2p == y.p2p && x.p3 == y.p3 && x.p4 == y.p4 && x.p4p == y.p4p &&
         a.event_none == b.event_none && a.sc_probs.tp3 == b.sc_probs.tp3 &&
         a.sc_probs.tp4 == b.sc_probs.tp4 && a.sc_probs.tp4p == b.sc_probs.tp4p &&
         a.sc_none == b.sc_none && same(a.throughput_ts, b.throughput_ts) &&
         same(a.throughput_mlh, b.throughput_mlh) && same(a.throughput_sc, b.throughput_sc) &&
         a.master_seed == b.master_seed && a.trials == b.trials && a.blocks == b.blocks;
}

}  // namespace

TEST_CASE("counter stream is reproducible and keyed") {
  CounterStream a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());
  }
  CHECK(a.counter() == 100);
  CounterStream u(1, 1);
  for (int i = 0; i < 100000; ++i) {
    const double v = u.uniform();
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("sample_gain moments") {
  for (double s2 : {1.0, 2.5}) {
    CounterStream s(7, 0);
    constexpr int n = 1'000'000;
    double sum = 0.0;
    int above_median = 0;
    for (int i = 0; i < n; ++i) {
      const double g = sample_gain(s, s2);
      CHECK(g >= 0.0);
      sum += g;
      above_median += g >= s2 * std::log(2.0);
    }
    CHECK(std::abs(sum / n - s2) <= 4.0 * s2 / std::sqrt(n));
    CHECK(std::abs(static_cast<double>(above_median) / n - 0.5) <= 4.0 * 0.0005);
  }
}

TEST_CASE("multi-layer slice examples") {
  const SystemConfig c = cfg_rp(1.0, 2.0);
  SliceOutcome o = simulate_slice_mlh({1e6, 0.0}, {0.5, 0.5}, c);
  CHECK(o.event == Event::Omega0);
  CHECK(o.duration_slots == 1);
  CHECK(o.reward_messages == 2);
  CHECK(simulate_slice_mlh({0.0, 0.0}, {0.5, 0.5}, c).event == Event::NoneDecoded);
  // Slot 1: joint log2(1.54) < 1 and m1 SINR log2(1 + 0.54/1.06) < 1, so both
  // fail. Slot 2: m2 accumulates log2(1.06) + log2(1.6) < 1 while m1 reaches
  // log2(1 + 0.54/1.06) + log2(1 + 0.6/1.6) = 1.053, so only m1 is decoded.
  o = simulate_slice_mlh({0.3, 0.6}, {0.9, 0.5}, c);
  CHECK(o.event == Event::Omega4);
  CHECK(o.duration_slots == 2);
  CHECK(o.reward_messages == 1);
}

TEST_CASE("time-sharing slice examples") {
  const SystemConfig c = cfg_rp(1.0, 2.0);  // single-slot threshold 0.5
  CHECK(simulate_slice_ts({1.0, 1.0}, c).event == Event::Omega1);
  CHECK(simulate_slice_ts({1.0, 0.1}, c).event == Event::Omega2);
  CHECK(simulate_slice_ts({0.3, 0.3}, c).event == Event::Omega4);
  CHECK(simulate_slice_ts({1e9, 1e9}, c).duration_slots == 2);
}

TEST_CASE("superposition slice examples") {
  const SystemConfig c = cfg_rp(1.0, 2.0);
  CHECK(simulate_slice_sc({1e6, 1e6}, 0.5, c).event == Event::Omega3);
  CHECK(simulate_slice_sc({0.0, 0.0}, 0.5, c).event == Event::NoneDecoded);
  CounterStream s(3, 0);
  for (int i = 0; i < 10000; ++i) {
    const ChannelDraw d{sample_gain(s, 10.0), sample_gain(s, 10.0)};
    CHECK(simulate_slice_sc(d, 1.0, c).event != Event::Omega3);
    CHECK(simulate_slice_sc(d, 0.4, c).duration_slots == 2);
  }
}

TEST_CASE("time-sharing equals multi-layer at (1, 1) slice by slice") {
  const SystemConfig c = cfg_rp(1.3, 3.0);
  CounterStream s(11, 0);
  for (int i = 0; i < 100000; ++i) {
    const ChannelDraw d{sample_gain(s, 1.0), sample_gain(s, 1.0)};
    const SliceOutcome ts = simulate_slice_ts(d, c);
    const SliceOutcome mlh = simulate_slice_mlh(d, {1.0, 1.0}, c);
    CHECK(ts.event == mlh.event);
    CHECK(ts.reward_messages == mlh.reward_messages);
  }
}

TEST_CASE("block partition covers every trial once") {
  for (std::uint64_t trials : {1ULL, 5ULL, 127ULL, 128ULL, 1000ULL, 1000003ULL}) {
    const int blocks = block_count(trials);
    CHECK(blocks >= 1);
    CHECK(blocks <= kMcBlocks);
    std::uint64_t next = 0;
    for (int b = 0; b < blocks; ++b) {
      const BlockRange r = block_range(trials, blocks, b);
      CHECK(r.begin == next);
      CHECK(r.end > r.begin);
      next = r.end;
    }
    CHECK(next == trials);
  }
}

TEST_CASE("estimate rejects zero trials") {
  CHECK_THROWS_AS(estimate(Protocol::MultiLayer, {0.5, 0.5}, cfg_rp(1, 2), 0, 1), InvalidTrials);
  CHECK_THROWS_AS(estimate_serial(Protocol::MultiLayer, {0.5, 0.5}, cfg_rp(1, 2), 0, 1),
                  InvalidTrials);
}

TEST_CASE("frequencies sum to one") {
  const McReport r = estimate(Protocol::MultiLayer, {0.6, 0.3}, cfg_rp(1.2, 3.0), 200000, 9);
  CHECK(r.trials == 200000);
  CHECK(r.event_probs.sum() + r.event_none == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.sc_probs.sum() + r.sc_none == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("effective split per protocol") {
  const SystemConfig c = cfg_rp(1.0, 2.0);
  const McReport ts = estimate(Protocol::TimeSharing, {0.3, 0.2}, c, 1000, 1);
  CHECK(ts.split.alpha == 1.0);
  CHECK(ts.split.beta == 1.0);
  const McReport sc = estimate(Protocol::Superposition, {0.3, 0.2}, c, 1000, 1);
  CHECK(sc.split.alpha == 0.3);
  CHECK(sc.split.beta == 0.3);
}

TEST_CASE("determinism across worker counts and drivers") {
  const SystemConfig c = SystemConfig::from_snr_db(1.0, 3.0);
  const McReport serial = estimate_serial(Protocol::MultiLayer, {0.7, 0.4}, c, 300001, 42);
  for (int w : {1, 2, 8}) {
    CAPTURE(w);
    CHECK(same(estimate(Protocol::MultiLayer, {0.7, 0.4}, c, 300001, 42, w), serial));
  }
  CHECK(same(estimate(Protocol::MultiLayer, {0.7, 0.4}, c, 300001, 42, 8),
             estimate(Protocol::MultiLayer, {0.7, 0.4}, c, 300001, 42, 8)));
  CHECK_FALSE(same(estimate(Protocol::MultiLayer, {0.7, 0.4}, c, 300001, 43, 1), serial));
}

TEST_CASE("simulated throughput agrees with the closed form") {
  const SystemConfig c = SystemConfig::from_snr_db(1.0, 3.0);
  const McReport r = estimate(Protocol::TimeSharing, {1.0, 1.0}, c, 1'000'000, 5);
  CHECK(std::abs(r.throughput_ts.mean - throughput_ts(c)) <= 4.0 * r.throughput_ts.std_err);
  CHECK(std::abs(r.throughput_mlh.mean - throughput_ts(c)) <= 4.0 * r.throughput_mlh.std_err);
  CHECK(r.throughput_ts.std_err > 0.0);

  const McReport m = estimate(Protocol::MultiLayer, {0.5, 0.5}, c, 1'000'000, 6);
  const double p0 = prob_p0(0.5, c);
  CHECK(std::abs(m.event_probs.p0 - p0) <= 4.0 * binomial_std_err(p0, m.trials));
  CHECK(std::abs(m.throughput_mlh.mean - throughput_mlh({0.5, 0.5}, c)) <=
        4.0 * m.throughput_mlh.std_err);
  CHECK(std::abs(m.throughput_sc.mean - throughput_sc(0.5, c)) <= 4.0 * m.throughput_sc.std_err);
}

TEST_CASE("bootstrap standard error tracks the spread across seeds") {
  const SystemConfig c = SystemConfig::from_snr_db(1.5, 5.0);
  constexpr int kSeeds = 40;
  double sum = 0.0, sum_sq = 0.0, se = 0.0;
  for (int s = 0; s < kSeeds; ++s) {
    const McReport r = estimate(Protocol::MultiLayer, {0.6, 0.5}, c, 20000, 100 + s);
    sum += r.throughput_mlh.mean;
    sum_sq += r.throughput_mlh.mean * r.throughput_mlh.mean;
    se += r.throughput_mlh.std_err / kSeeds;
  }
  const double mean = sum / kSeeds;
  const double spread = std::sqrt((sum_sq - kSeeds * mean * mean) / (kSeeds - 1));
  CHECK(se > 0.6 * spread);
  CHECK(se < 1.6 * spread);
}

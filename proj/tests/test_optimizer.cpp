#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "harq/optimizer.hpp"

using namespace harq;

namespace {

SearchSettings serial() {
  SearchSettings s;
  s.workers = 1;
  return s;
}

}  // namespace

TEST_CASE("grids") {
  const std::vector<double> g = detail::unit_grid(0.01);
  CHECK(g.size() == 101);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  const std::vector<double> odd = detail::unit_grid(0.3);
  CHECK(odd.back() == 1.0);
  CHECK(odd.size() == 5);

  const std::vector<double> local = detail::local_grid(0.5, 0.001);
  CHECK(local.size() == 21);
  CHECK(local.front() == doctest::Approx(0.49));
  const std::vector<double> edge = detail::local_grid(1.0, 0.001);
  CHECK(edge.size() == 11);
  CHECK(edge.back() == 1.0);

  const std::vector<double> rates = default_rate_grid();
  CHECK(rates.size() == 60);
  CHECK(rates.front() == doctest::Approx(0.05));
  CHECK(rates.back() == doctest::Approx(12.0));
  CHECK(std::is_sorted(rates.begin(), rates.end()));
}

TEST_CASE("settings validation") {
  SearchSettings s;
  CHECK_NOTHROW(s.validate());
  s.grid_step = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = {};
  s.refine_tol = -1.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  const SystemConfig c = SystemConfig::from_snr_db(1.0, 3.0);
  const std::vector<double> empty;
  CHECK_THROWS_AS(optimize_rate_and_split(Protocol::TimeSharing, c, empty), std::invalid_argument);
  const std::vector<double> unsorted{2.0, 1.0};
  CHECK_THROWS_AS(optimize_rate_and_split(Protocol::TimeSharing, c, unsorted),
                  std::invalid_argument);
}

TEST_CASE("tie-breaking prefers larger splits") {
  CHECK(preferred({{0.6, 0.2}, 1.0}, {{0.4, 0.9}, 1.0}));
  CHECK(preferred({{0.6, 0.3}, 1.0}, {{0.6, 0.2}, 1.0}));
  CHECK(preferred({{0.1, 0.1}, 1.1}, {{0.9, 0.9}, 1.0}));
  CHECK(preferred({{0.9, 0.9}, 1.0}, {{0.1, 0.1}, 1.0 + 1e-14}));
  CHECK_FALSE(preferred({{0.6, 0.2}, 1.0}, {{0.6, 0.2}, 1.0}));
}

TEST_CASE("time-sharing needs no search") {
  for (double snr : {-5.0, 3.0, 30.0}) {
    const SystemConfig c = SystemConfig::from_snr_db(1.5, snr);
    const Optimum o = optimize_split(Protocol::TimeSharing, c);
    CHECK(o.alpha_star == 1.0);
    CHECK(o.beta_star == 1.0);
    CHECK(o.throughput_star == throughput_ts(c));
    CHECK_FALSE(o.rate_star.has_value());
  }
}

TEST_CASE("large rate keeps the full-power split") {
  for (double R : {4.0, 5.0}) {
    const Optimum o = optimize_split(Protocol::MultiLayer, SystemConfig::from_snr_db(R, 3.0));
    CHECK(o.alpha_star >= 1.0 - 1e-4);
    CHECK(o.beta_star >= 1.0 - 1e-4);
  }
}

TEST_CASE("agreement with an exhaustive 0.001-step grid") {
  const SystemConfig c = SystemConfig::from_snr_db(1.0, 3.0);
  constexpr int n = 1000;
  Candidate best{{1.0, 1.0}, -1.0};
  for (int i = 0; i <= n; ++i) {
    const double a = static_cast<double>(i) / n;
    const SlotOneTerms one = slot_one_terms(a, c);
    for (int j = 0; j <= n; ++j) {
      const PowerSplit s{a, static_cast<double>(j) / n};
      const Candidate cand{s, throughput_mlh(combine(one, retransmission_terms(s, c)), c.rate)};
      if (preferred(cand, best)) best = cand;
    }
  }
  const Optimum o = optimize_split(Protocol::MultiLayer, c);
  CHECK(o.throughput_star >= best.value - 1e-12);
  CHECK(std::abs(o.alpha_star - best.split.alpha) <= 1e-3);
  CHECK(std::abs(o.beta_star - best.split.beta) <= 1e-3);
}

TEST_CASE("random probing finds nothing better") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double R : {0.3, 1.0, 2.5}) {
    for (double snr : {0.0, 10.0}) {
      const SystemConfig c = SystemConfig::from_snr_db(R, snr);
      for (Protocol p : {Protocol::TimeSharing, Protocol::MultiLayer, Protocol::Superposition}) {
        const Optimum o = optimize_split(p, c);
        CHECK(std::abs(objective(p, {o.alpha_star, o.beta_star}, c) - o.throughput_star) <= 1e-10);
        for (int k = 0; k < 100; ++k) {
          CHECK(objective(p, {u(rng), u(rng)}, c) <= o.throughput_star + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("multi-layer dominates time-sharing") {
  for (double R : {0.25, 1.0, 3.0}) {
    for (double snr : {-5.0, 3.0, 20.0, 40.0}) {
      const SystemConfig c = SystemConfig::from_snr_db(R, snr);
      CHECK(optimize_split(Protocol::MultiLayer, c).throughput_star >=
            optimize_split(Protocol::TimeSharing, c).throughput_star - 1e-12);
    }
  }
}

TEST_CASE("superposition searches alpha only and is mirror symmetric") {
  const SystemConfig c = SystemConfig::from_snr_db(0.3, 3.0);
  const Optimum o = optimize_split(Protocol::Superposition, c);
  CHECK(o.beta_star == o.alpha_star);
  CHECK(o.alpha_star >= 0.5);
  CHECK(std::abs(throughput_sc(1.0 - o.alpha_star, c) - o.throughput_star) <= 1e-9);
}

TEST_CASE("argmax depends on power and sigma2 only through their product") {
  SystemConfig a = SystemConfig::from_snr_db(1.2, 5.0);
  SystemConfig b = a;
  b.power = a.power * 4.0;
  b.sigma2 = a.sigma2 / 4.0;
  const Optimum oa = optimize_split(Protocol::MultiLayer, a);
  const Optimum ob = optimize_split(Protocol::MultiLayer, b);
  CHECK(std::abs(oa.throughput_star - ob.throughput_star) <= 1e-12);
  CHECK(oa.alpha_star == ob.alpha_star);
  CHECK(oa.beta_star == ob.beta_star);
}

TEST_CASE("serial and parallel kernels agree") {
  const SystemConfig c = SystemConfig::from_snr_db(1.0, 6.0);
  const std::vector<double> axis = detail::unit_grid(0.02);
  const std::vector<double> one{1.0};
  for (Protocol p : {Protocol::MultiLayer, Protocol::Superposition}) {
    const std::vector<double>& betas = p == Protocol::MultiLayer ? axis : one;
    const Candidate ref = grid_argmax_serial(p, c, axis, betas, {});
    for (int w : {1, 2, 8}) {
      const Candidate par = grid_argmax(p, c, axis, betas, {}, w);
      CHECK(par.value == ref.value);
      CHECK(par.split.alpha == ref.split.alpha);
      CHECK(par.split.beta == ref.split.beta);
    }
  }
  SearchSettings par;
  par.workers = 8;
  const Optimum x = optimize_split(Protocol::MultiLayer, c, serial());
  const Optimum y = optimize_split(Protocol::MultiLayer, c, par);
  CHECK(x.alpha_star == y.alpha_star);
  CHECK(x.beta_star == y.beta_star);
  CHECK(x.throughput_star == y.throughput_star);
  CHECK(x.evaluations == y.evaluations);
}

TEST_CASE("rate optimization for time-sharing matches a brute-force rate scan") {
  const SystemConfig c = SystemConfig::from_snr_db(1.0, 20.0);
  double best_rate = 0.0, best = -1.0;
  for (int i = 1; i <= 1200; ++i) {
    SystemConfig r = c;
    r.rate = 0.01 * i;
    const double eta = throughput_ts(r);
    if (eta > best) {
      best = eta;
      best_rate = r.rate;
    }
  }
  const Optimum o = optimize_rate_and_split(Protocol::TimeSharing, c, default_rate_grid());
  REQUIRE(o.rate_star.has_value());
  CHECK(o.throughput_star >= best - 1e-9);
  CHECK(std::abs(*o.rate_star - best_rate) <= 0.02);
}

TEST_CASE("rate-optimized multi-layer beats rate-optimized time-sharing at 40 dB") {
  const SystemConfig c = SystemConfig::from_snr_db(1.0, 40.0);
  const std::vector<double> grid = default_rate_grid();
  const Optimum mlh = optimize_rate_and_split(Protocol::MultiLayer, c, grid);
  const Optimum ts = optimize_rate_and_split(Protocol::TimeSharing, c, grid);
  CHECK(mlh.throughput_star >= ts.throughput_star - 1e-12);
  CHECK(mlh.evaluations > 0);
}

TEST_CASE("identical inputs give identical optima") {
  const SystemConfig c = SystemConfig::from_snr_db(0.8, 2.0);
  const Optimum a = optimize_split(Protocol::MultiLayer, c);
  const Optimum b = optimize_split(Protocol::MultiLayer, c);
  CHECK(a.alpha_star == b.alpha_star);
  CHECK(a.beta_star == b.beta_star);
  CHECK(a.throughput_star == b.throughput_star);
}

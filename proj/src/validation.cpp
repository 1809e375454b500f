#include "harq/validation.hpp"

#include <cmath>

#include "harq/closed_form.hpp"
#include "harq/monte_carlo.hpp"

namespace harq {

namespace {
// Keeps the configuration streams apart from the simulation block streams.
constexpr std::uint64_t kCaseStreamBase = 1ULL << 61;
}  // namespace

double null_std_err(double p, std::uint64_t trials) {
  const double n = static_cast<double>(trials);
  return std::max(std::sqrt(std::max(p * (1.0 - p), 0.0) / n), 1.0 / n);
}

ValidationCase draw_case(std::uint64_t seed, int index) {
  CounterStream stream(seed, kCaseStreamBase + static_cast<std::uint64_t>(index));
  ValidationCase c;
  const double rate = 0.25 + 3.75 * stream.uniform();
  c.snr_db = -5.0 + 25.0 * stream.uniform();
  c.split.alpha = 0.05 + 0.9 * stream.uniform();
  c.split.beta = 0.05 + 0.9 * stream.uniform();
  c.cfg = SystemConfig::from_snr_db(rate, c.snr_db);
  return c;
}

std::vector<ValidationCase> run_validation(const ValidationSettings& settings) {
  std::vector<ValidationCase> cases;
  cases.reserve(static_cast<std::size_t>(settings.configs));
  for (int i = 0; i < settings.configs; ++i) {
    ValidationCase c = draw_case(settings.seed, i);
    const EventProbs cf = event_probs(c.split, c.cfg, settings.quadrature);
    const ScProbs sc = prob_sc(c.split.alpha, c.cfg, settings.quadrature);
    const McReport mc = estimate(Protocol::MultiLayer, c.split, c.cfg, settings.trials,
                                 settings.seed + static_cast<std::uint64_t>(i), settings.workers);
    const EventProbs& em = mc.event_probs;
    c.closed_form = {cf.p0, cf.p1, cf.p1p, cf.p2, cf.p2p, cf.p3, cf.p4, cf.p4p,
                     sc.tp3, sc.tp4, sc.tp4p};
    c.monte_carlo = {em.p0,  em.p1,  em.p1p, em.p2,
                     em.p2p, em.p3,  em.p4,  em.p4p,
                     mc.sc_probs.tp3, mc.sc_probs.tp4, mc.sc_probs.tp4p};
    c.pass = true;
    for (int k = 0; k < kCheckedProbabilities; ++k) {
      c.z_score[k] =
          (c.closed_form[k] - c.monte_carlo[k]) / null_std_err(c.closed_form[k], settings.trials);
      if (!(std::abs(c.z_score[k]) <= settings.max_abs_z)) c.pass = false;
    }
    cases.push_back(c);
  }
  return cases;
}

}  // namespace harq

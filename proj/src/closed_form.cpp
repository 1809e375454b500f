#include "harq/closed_form.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace harq {

namespace {

// One branch of h3: (c / (1 + a g) - 1) / k.  A zero power coefficient k
// turns the branch into +inf while its numerator is positive (the layer can
// never be boosted) and into -inf (inactive) otherwise.
struct Branch {
  double c;
  double a;
  double k;

  double operator()(double g) const {
    const double numerator = c / (1.0 + a * g) - 1.0;
    if (k > 0.0) return numerator / k;
    return numerator > 0.0 ? kInf : -kInf;
  }
};

std::array<Branch, 3> h3_branches(const PowerSplit& split, const SystemConfig& cfg) {
  const double P = cfg.power;
  const double c = std::exp2(cfg.rate);
  return {{{c, (1.0 - split.alpha) * P, (1.0 - split.beta) * P},
           {c, split.alpha * P, split.beta * P},
           {c * c, P, P}}};
}

void keep_in_range(std::vector<double>& out, double x, double lo, double hi) {
  if (std::isfinite(x) && x > lo && x < hi) out.push_back(x);
}

std::vector<double> finish(std::vector<double> cuts, double lo, double hi) {
  cuts.push_back(lo);
  if (std::isfinite(hi)) cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

double exp_density(double g, double sigma2) { return std::exp(-g / sigma2) / sigma2; }

// (e^{-h4/s2} - e^{-h4bar/s2})^+ e^{-g/s2}/s2
double single_retx_integrand(double g, const PowerSplit& split, const SystemConfig& cfg) {
  const double s2 = cfg.sigma2;
  const double diff = std::exp(-h4(g, split, cfg) / s2) - std::exp(-h4_bar(g, split, cfg) / s2);
  return pos_part(diff) * exp_density(g, s2);
}

double joint_retx_integrand(double g, const PowerSplit& split, const SystemConfig& cfg) {
  return std::exp(-h3(g, split, cfg) / cfg.sigma2) * exp_density(g, cfg.sigma2);
}

double integrate_single_retx(const PowerSplit& split, const SystemConfig& cfg, double hi,
                             const QuadratureSettings& q) {
  const auto f = [&](double g) { return single_retx_integrand(g, split, cfg); };
  if (std::isfinite(hi)) {
    if (!(hi > 0.0)) return 0.0;
    const auto cuts = detail::h4_breakpoints(split, cfg, 0.0, hi);
    return integrate_finite(f, 0.0, hi, cuts, q);
  }
  const double end = cfg.sigma2 * std::log(1.0 / q.tail_epsilon);
  const auto cuts = detail::h4_breakpoints(split, cfg, 0.0, end);
  return integrate_semi_infinite(f, 0.0, cfg.sigma2, cuts, q);
}

double integrate_joint_retx(const PowerSplit& split, const SystemConfig& cfg, double hi,
                            const QuadratureSettings& q) {
  const auto f = [&](double g) { return joint_retx_integrand(g, split, cfg); };
  if (std::isfinite(hi)) {
    if (!(hi > 0.0)) return 0.0;
    const auto cuts = detail::h3_breakpoints(split, cfg, 0.0, hi);
    return integrate_finite(f, 0.0, hi, cuts, q);
  }
  const double end = cfg.sigma2 * std::log(1.0 / q.tail_epsilon);
  const auto cuts = detail::h3_breakpoints(split, cfg, 0.0, end);
  return integrate_semi_infinite(f, 0.0, cfg.sigma2, cuts, q);
}

// Slot-1 gain window [lo, hi] where only m1 is decoded. Empty unless alpha
// exceeds single_success_threshold.
struct Window {
  double lo;
  double hi;
};

Window only_m1_window(double alpha, const SystemConfig& cfg) {
  const double c = std::exp2(cfg.rate);
  const double P = cfg.power;
  return {(c - 1.0) / ((1.0 + c * (alpha - 1.0)) * P), safe_div_threshold(c - 1.0, (1.0 - alpha) * P)};
}

}  // namespace

namespace detail {

std::vector<double> real_roots(double a, double b, double c) {
  if (a == 0.0) {
    if (b == 0.0) return {};
    return {-c / b};
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return {};
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  std::vector<double> roots;
  roots.push_back(q / a);
  if (q != 0.0) roots.push_back(c / q);
  return roots;
}

std::vector<double> h3_breakpoints(const PowerSplit& split, const SystemConfig& cfg, double lo,
                                   double hi) {
  const auto branches = h3_branches(split, cfg);
  std::vector<double> cuts;
  for (const Branch& br : branches) {
    if (br.a > 0.0) keep_in_range(cuts, (br.c - 1.0) / br.a, lo, hi);
  }
  for (std::size_t i = 0; i < branches.size(); ++i) {
    for (std::size_t j = i + 1; j < branches.size(); ++j) {
      const Branch& bi = branches[i];
      const Branch& bj = branches[j];
      if (!(bi.k > 0.0 && bj.k > 0.0)) continue;
      // k_j (u_i - a_i g)(1 + a_j g) = k_i (u_j - a_j g)(1 + a_i g)
      const double ui = bi.c - 1.0, uj = bj.c - 1.0;
      const double A = -bi.a * bj.a * (bj.k - bi.k);
      const double B = bj.k * (ui * bj.a - bi.a) - bi.k * (uj * bi.a - bj.a);
      const double C = bj.k * ui - bi.k * uj;
      for (double r : real_roots(A, B, C)) keep_in_range(cuts, r, lo, hi);
    }
  }
  return finish(std::move(cuts), lo, hi);
}

std::vector<double> h4_breakpoints(const PowerSplit& split, const SystemConfig& cfg, double lo,
                                   double hi) {
  const double c = std::exp2(cfg.rate);
  const double P = cfg.power;
  const double alpha = split.alpha, beta = split.beta;
  const double a2 = (1.0 - alpha) * P;
  std::vector<double> cuts;

  // h4 numerator vanishes: m1 alone over slot 1 meets the rate.
  const double d_num = (1.0 + c * (alpha - 1.0)) * P;
  if (d_num > 0.0) keep_in_range(cuts, (c - 1.0) / d_num, lo, hi);
  // h4 denominator vanishes: slot-2 SINR cap equals the residual.
  const double d_den = P * (1.0 - c * (1.0 - beta) * (1.0 - alpha));
  if (d_den != 0.0) keep_in_range(cuts, (c * (1.0 - beta) - 1.0) / d_den, lo, hi);
  // h4_bar vanishes.
  if (a2 > 0.0) keep_in_range(cuts, (c - 1.0) / a2, lo, hi);
  // h4 == h4_bar:
  // (1-b) c (c (1 + g a2) - 1 - g P) = b (c - 1 - g a2)(1 + g P)
  const double A = beta * a2 * P;
  const double B = (1.0 - beta) * c * (c * a2 - P) - beta * ((c - 1.0) * P - a2);
  const double C = (1.0 - beta) * c * (c - 1.0) - beta * (c - 1.0);
  for (double r : real_roots(A, B, C)) keep_in_range(cuts, r, lo, hi);

  return finish(std::move(cuts), lo, hi);
}

}  // namespace detail

double single_success_threshold(const SystemConfig& cfg) {
  const double c = std::exp2(cfg.rate);
  return c / (c + 1.0);
}

double g_min(double alpha, const SystemConfig& cfg) {
  const double c = std::exp2(cfg.rate);
  const double P = cfg.power;
  return std::max({safe_div_threshold(c - 1.0, alpha * P),
                   safe_div_threshold(c - 1.0, (1.0 - alpha) * P), (c * c - 1.0) / P});
}

double g_max(double alpha, const SystemConfig& cfg) {
  const double c = std::exp2(cfg.rate);
  const double P = cfg.power;
  return std::min({safe_div_threshold(c - 1.0, pos_part(1.0 + c * (alpha - 1.0)) * P),
                   safe_div_threshold(c - 1.0, pos_part(1.0 - c * alpha) * P), (c * c - 1.0) / P});
}

double h3(double g, const PowerSplit& split, const SystemConfig& cfg) {
  const auto br = h3_branches(split, cfg);
  return pos_part(std::max({br[0](g), br[1](g), br[2](g)}));
}

double h4(double g, const PowerSplit& split, const SystemConfig& cfg) {
  const double c = std::exp2(cfg.rate);
  const double P = cfg.power;
  const double sinr = g * split.alpha * P / (1.0 + g * (1.0 - split.alpha) * P);
  const double residual = c / (1.0 + sinr) - 1.0;
  const double numerator = pos_part(residual);
  if (numerator == 0.0) return 0.0;
  const double denominator = P * pos_part(split.beta - (1.0 - split.beta) * residual);
  return safe_div_threshold(numerator, denominator);
}

double h4_bar(double g, const PowerSplit& split, const SystemConfig& cfg) {
  const double c = std::exp2(cfg.rate);
  const double numerator = pos_part(c / (1.0 + g * (1.0 - split.alpha) * cfg.power) - 1.0);
  if (numerator == 0.0) return 0.0;
  return safe_div_threshold(numerator, (1.0 - split.beta) * cfg.power);
}

double prob_p0(double alpha, const SystemConfig& cfg) {
  return std::exp(-g_min(alpha, cfg) / cfg.sigma2);
}

double prob_only_m1_window(double alpha, const SystemConfig& cfg) {
  if (alpha <= single_success_threshold(cfg)) return 0.0;
  const Window w = only_m1_window(alpha, cfg);
  return std::exp(-w.lo / cfg.sigma2) - std::exp(-w.hi / cfg.sigma2);
}

double prob_p1(double alpha, const SystemConfig& cfg, const QuadratureSettings& q) {
  if (alpha <= single_success_threshold(cfg)) return 0.0;
  const Window w = only_m1_window(alpha, cfg);
  const double c = std::exp2(cfg.rate);
  const double residual_power = (1.0 - alpha) * cfg.power;
  const double s2 = cfg.sigma2;
  // m2 keeps log2(1 + g (1-alpha) P) from slot 1 and gets full power in slot 2.
  const auto f = [&](double g) {
    const double need = pos_part(c / (1.0 + g * residual_power) - 1.0) / cfg.power;
    return std::exp(-need / s2) * exp_density(g, s2);
  };
  const std::array<double, 1> cuts{w.lo};
  if (!std::isfinite(w.hi)) return integrate_semi_infinite(f, w.lo, s2, cuts, q);
  return integrate_finite(f, w.lo, w.hi, cuts, q);
}

double prob_p1_prime(double alpha, const SystemConfig& cfg, const QuadratureSettings& q) {
  return prob_p1(1.0 - alpha, cfg, q);
}

double prob_p2(double alpha, const SystemConfig& cfg, const QuadratureSettings& q) {
  if (alpha <= single_success_threshold(cfg)) return 0.0;
  // Quadrature noise can push the difference a hair below zero.
  return pos_part(prob_only_m1_window(alpha, cfg) - prob_p1(alpha, cfg, q));
}

double prob_p2_prime(double alpha, const SystemConfig& cfg, const QuadratureSettings& q) {
  return prob_p2(1.0 - alpha, cfg, q);
}

double prob_p3(const PowerSplit& split, const SystemConfig& cfg, const QuadratureSettings& q) {
  return integrate_joint_retx(split, cfg, g_max(split.alpha, cfg), q);
}

double prob_p4(const PowerSplit& split, const SystemConfig& cfg, const QuadratureSettings& q) {
  return integrate_single_retx(split, cfg, g_max(split.alpha, cfg), q);
}

// Only m2 after a double slot-1 failure is the m1 event with both roles
// swapped in both slots; the slot-1 failure region is invariant under the swap.
double prob_p4_prime(const PowerSplit& split, const SystemConfig& cfg,
                     const QuadratureSettings& q) {
  return prob_p4(split.mirrored(), cfg, q);
}

SlotOneTerms slot_one_terms(double alpha, const SystemConfig& cfg, const QuadratureSettings& q) {
  SlotOneTerms t;
  t.p0 = prob_p0(alpha, cfg);
  const double thr = single_success_threshold(cfg);
  if (alpha > thr) {
    t.p1 = prob_p1(alpha, cfg, q);
    t.p2 = pos_part(prob_only_m1_window(alpha, cfg) - t.p1);
  }
  if (1.0 - alpha > thr) {
    t.p1p = prob_p1(1.0 - alpha, cfg, q);
    t.p2p = pos_part(prob_only_m1_window(1.0 - alpha, cfg) - t.p1p);
  }
  return t;
}

RetransmissionTerms retransmission_terms(const PowerSplit& split, const SystemConfig& cfg,
                                         const QuadratureSettings& q) {
  return {prob_p3(split, cfg, q), prob_p4(split, cfg, q), prob_p4_prime(split, cfg, q)};
}

EventProbs combine(const SlotOneTerms& one, const RetransmissionTerms& two) {
  return {one.p0, one.p1, one.p1p, one.p2, one.p2p, two.p3, two.p4, two.p4p};
}

EventProbs event_probs(const PowerSplit& split, const SystemConfig& cfg,
                       const QuadratureSettings& q) {
  return combine(slot_one_terms(split.alpha, cfg, q), retransmission_terms(split, cfg, q));
}

ScProbs prob_sc(double alpha, const SystemConfig& cfg, const QuadratureSettings& q) {
  const PowerSplit same{alpha, alpha};
  ScProbs sc;
  sc.tp3 = integrate_joint_retx(same, cfg, kInf, q);
  sc.tp4 = integrate_single_retx(same, cfg, kInf, q);
  sc.tp4p = integrate_single_retx(same.mirrored(), cfg, kInf, q);
  return sc;
}

double throughput_mlh(const EventProbs& p, double rate) {
  const double q = 2.0 * p.p0 + 2.0 * (p.p1 + p.p1p) + 2.0 * p.p3 + p.p2 + p.p2p + p.p4 + p.p4p;
  return rate * q / (p.p0 + 2.0 * (1.0 - p.p0));
}

double throughput_sc(const ScProbs& p, double rate) {
  return rate * p.tp3 + 0.5 * rate * (p.tp4 + p.tp4p);
}

double throughput_ts(const SystemConfig& cfg, const QuadratureSettings& q) {
  const double p1 = prob_p1(1.0, cfg, q);
  const double p2 = pos_part(prob_only_m1_window(1.0, cfg) - p1);
  const double p4 = prob_p4({1.0, 1.0}, cfg, q);
  return cfg.rate * p1 + 0.5 * cfg.rate * (p2 + p4);
}

double throughput_mlh(const PowerSplit& split, const SystemConfig& cfg,
                      const QuadratureSettings& q) {
  return throughput_mlh(event_probs(split, cfg, q), cfg.rate);
}

double throughput_sc(double alpha, const SystemConfig& cfg, const QuadratureSettings& q) {
  return throughput_sc(prob_sc(alpha, cfg, q), cfg.rate);
}

}  // namespace harq

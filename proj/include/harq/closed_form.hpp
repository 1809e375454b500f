#pragma once

#include <vector>

#include "harq/model.hpp"
#include "harq/quadrature.hpp"

namespace harq {

/// Probabilities of the eight delivery events of one multi-layer evaluation.
/// The remainder 1 - sum() is the all-fail event.
struct EventProbs {
  double p0 = 0.0;
  double p1 = 0.0;
  double p1p = 0.0;
  double p2 = 0.0;
  double p2p = 0.0;
  double p3 = 0.0;
  double p4 = 0.0;
  double p4p = 0.0;

  double sum() const { return p0 + p1 + p1p + p2 + p2p + p3 + p4 + p4p; }
};

/// Superposition coding: decoding only after slot 2.
struct ScProbs {
  double tp3 = 0.0;   // both messages
  double tp4 = 0.0;   // only m1
  double tp4p = 0.0;  // only m2

  double sum() const { return tp3 + tp4 + tp4p; }
};

// Gain thresholds. Every value may be +inf (never satisfiable / unbounded).

/// Slot-1 gain above which both messages are jointly decodable.
double g_min(double alpha, const SystemConfig& cfg);
/// Slot-1 gain below which both messages fail in slot 1.
double g_max(double alpha, const SystemConfig& cfg);
/// Slot-2 gain needed for joint success after a double slot-1 failure at gain g.
double h3(double g, const PowerSplit& split, const SystemConfig& cfg);
/// Lower slot-2 gain bound for decoding m1 (treating m2 as noise) over both slots.
double h4(double g, const PowerSplit& split, const SystemConfig& cfg);
/// Upper slot-2 gain bound keeping m2 undecodable over both slots.
double h4_bar(double g, const PowerSplit& split, const SystemConfig& cfg);

/// Probability threshold below which a single-message slot-1 success is impossible.
double single_success_threshold(const SystemConfig& cfg);

double prob_p0(double alpha, const SystemConfig& cfg);
double prob_p1(double alpha, const SystemConfig& cfg, const QuadratureSettings& q = {});
double prob_p1_prime(double alpha, const SystemConfig& cfg, const QuadratureSettings& q = {});
double prob_p2(double alpha, const SystemConfig& cfg, const QuadratureSettings& q = {});
double prob_p2_prime(double alpha, const SystemConfig& cfg, const QuadratureSettings& q = {});
double prob_p3(const PowerSplit& split, const SystemConfig& cfg, const QuadratureSettings& q = {});
double prob_p4(const PowerSplit& split, const SystemConfig& cfg, const QuadratureSettings& q = {});
double prob_p4_prime(const PowerSplit& split, const SystemConfig& cfg,
                     const QuadratureSettings& q = {});

/// Probability that slot-1 gain falls in the "only m1 decoded" window; equals
/// prob_p1 + prob_p2.
double prob_only_m1_window(double alpha, const SystemConfig& cfg);

/// Terms depending on alpha only (slot-1 success paths).
struct SlotOneTerms {
  double p0 = 0.0, p1 = 0.0, p1p = 0.0, p2 = 0.0, p2p = 0.0;
};
/// Terms that follow a double slot-1 failure; depend on (alpha, beta).
struct RetransmissionTerms {
  double p3 = 0.0, p4 = 0.0, p4p = 0.0;
};

SlotOneTerms slot_one_terms(double alpha, const SystemConfig& cfg, const QuadratureSettings& q = {});
RetransmissionTerms retransmission_terms(const PowerSplit& split, const SystemConfig& cfg,
                                         const QuadratureSettings& q = {});
EventProbs combine(const SlotOneTerms& one, const RetransmissionTerms& two);

EventProbs event_probs(const PowerSplit& split, const SystemConfig& cfg,
                       const QuadratureSettings& q = {});
ScProbs prob_sc(double alpha, const SystemConfig& cfg, const QuadratureSettings& q = {});

/// R * Q / (2 - p0): reward per slot of the multi-layer slice.
double throughput_mlh(const EventProbs& probs, double rate);
double throughput_sc(const ScProbs& probs, double rate);

double throughput_ts(const SystemConfig& cfg, const QuadratureSettings& q = {});
double throughput_mlh(const PowerSplit& split, const SystemConfig& cfg,
                      const QuadratureSettings& q = {});
double throughput_sc(double alpha, const SystemConfig& cfg, const QuadratureSettings& q = {});

namespace detail {
/// Sorted, deduplicated kink locations of h3 on [lo, hi].
std::vector<double> h3_breakpoints(const PowerSplit& split, const SystemConfig& cfg, double lo,
                                   double hi);
/// Sorted kink locations of the h4 / h4_bar integrand on [lo, hi].
std::vector<double> h4_breakpoints(const PowerSplit& split, const SystemConfig& cfg, double lo,
                                   double hi);
/// Real roots of a x^2 + b x + c = 0 (degenerates gracefully to the linear case).
std::vector<double> real_roots(double a, double b, double c);
}  // namespace detail

}  // namespace harq

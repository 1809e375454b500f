#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string_view>

namespace harq {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Physical scenario of one two-slot slice. Noise is unit variance; the
/// channel gains g1, g2 are exponential with mean sigma2.
struct SystemConfig {
  double rate = 1.0;              // bits per channel use, per message
  double power = 1.0;             // linear transmit power P
  double sigma2 = 1.0;            // E[g1] = E[g2]
  double symbols_per_slot = 1.0;  // N; cancels in every throughput

  /// P = sigma2 * 10^(snr_db / 10).
  static SystemConfig from_snr_db(double rate, double snr_db, double sigma2 = 1.0);

  double snr_db() const;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct PowerSplit {
  double alpha = 1.0;  // share of P given to m1 in slot 1
  double beta = 1.0;   // share of P given to m1 in slot 2 (after a double failure)

  void validate() const;
  PowerSplit mirrored() const { return {1.0 - alpha, 1.0 - beta}; }
};

struct ChannelDraw {
  double g1 = 0.0;
  double g2 = 0.0;
};

enum class Protocol { TimeSharing, MultiLayer, Superposition };

std::string_view to_string(Protocol protocol);
/// Accepts "ts", "mlh", "sc"; throws std::invalid_argument otherwise.
Protocol parse_protocol(std::string_view name);

/// Result of a decoding attempt on the two superposed messages.
enum class DecodeLabel { Both, OnlyM1, OnlyM2, None };

DecodeLabel swap_roles(DecodeLabel label);
std::string_view to_string(DecodeLabel label);

enum class Event {
  Omega0,   // both decoded in slot 1
  Omega1,   // m1 in slot 1, m2 in slot 2
  Omega1p,  // m2 in slot 1, m1 in slot 2
  Omega2,   // m1 in slot 1, m2 lost
  Omega2p,  // m2 in slot 1, m1 lost
  Omega3,   // nothing in slot 1, both in slot 2
  Omega4,   // nothing in slot 1, only m1 in slot 2
  Omega4p,  // nothing in slot 1, only m2 in slot 2
  NoneDecoded,
};

inline constexpr int kEventCount = 9;

std::string_view to_string(Event event);

/// Messages delivered: 2 for Omega0/1/1p/3, 1 for Omega2/2p/4/4p, 0 otherwise.
int reward_messages(Event event);

struct SliceOutcome {
  Event event = Event::NoneDecoded;
  int reward_messages = 0;  // in units of R*N information bits
  int duration_slots = 2;

  static SliceOutcome make(Event event, int duration_slots);
};

constexpr double pos_part(double x) { return x > 0.0 ? x : 0.0; }

/// numerator / denominator, or +inf when the denominator is not positive.
constexpr double safe_div_threshold(double numerator, double denominator) {
  return denominator > 0.0 ? numerator / denominator : kInf;
}

/// log2(1 + g p)
double mi_single(double g, double p);

/// log2(1 + g p_sig / (1 + g p_int))
double mi_sinr(double g, double p_sig, double p_int);

DecodeLabel classify_slot1(double g1, double alpha, const SystemConfig& cfg);

/// Joint decoding over both slots after a double failure in slot 1.
DecodeLabel classify_slot2_joint(const ChannelDraw& draw, const PowerSplit& split,
                                 const SystemConfig& cfg);

/// Surviving message after SIC: slot-1 residual power p_prev, full power in slot 2.
bool classify_slot2_single(double g_prev, double p_prev, double g2, const SystemConfig& cfg);

}  // namespace harq

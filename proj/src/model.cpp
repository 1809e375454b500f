#include "harq/model.hpp"

#include <cmath>
#include <string>

namespace harq {

SystemConfig SystemConfig::from_snr_db(double rate, double snr_db, double sigma2) {
  SystemConfig cfg;
  cfg.rate = rate;
  cfg.sigma2 = sigma2;
  cfg.power = sigma2 * std::pow(10.0, snr_db / 10.0);
  return cfg;
}

double SystemConfig::snr_db() const { return 10.0 * std::log10(power / sigma2); }

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(name) + " must be a positive finite number, got " +
                                std::to_string(value));
  }
}

void require_unit(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " +
                                std::to_string(value));
  }
}

}  // namespace

void SystemConfig::validate() const {
  require_positive(rate, "rate");
  require_positive(power, "power");
  require_positive(sigma2, "sigma2");
  require_positive(symbols_per_slot, "symbols_per_slot");
}

void PowerSplit::validate() const {
  require_unit(alpha, "alpha");
  require_unit(beta, "beta");
}

std::string_view to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::TimeSharing: return "ts";
    case Protocol::MultiLayer: return "mlh";
    case Protocol::Superposition: return "sc";
  }
  return "?";
}

Protocol parse_protocol(std::string_view name) {
  if (name == "ts") return Protocol::TimeSharing;
  if (name == "mlh") return Protocol::MultiLayer;
  if (name == "sc") return Protocol::Superposition;
  throw std::invalid_argument("unknown protocol '" + std::string(name) + "' (expected ts, mlh or sc)");
}

DecodeLabel swap_roles(DecodeLabel label) {
  switch (label) {
    case DecodeLabel::OnlyM1: return DecodeLabel::OnlyM2;
    case DecodeLabel::OnlyM2: return DecodeLabel::OnlyM1;
    default: return label;
  }
}

std::string_view to_string(DecodeLabel label) {
  switch (label) {
    case DecodeLabel::Both: return "both";
    case DecodeLabel::OnlyM1: return "only_m1";
    case DecodeLabel::OnlyM2: return "only_m2";
    case DecodeLabel::None: return "none";
  }
  return "?";
}

std::string_view to_string(Event event) {
  switch (event) {
    case Event::Omega0: return "omega0";
    case Event::Omega1: return "omega1";
    case Event::Omega1p: return "omega1p";
    case Event::Omega2: return "omega2";
    case Event::Omega2p: return "omega2p";
    case Event::Omega3: return "omega3";
    case Event::Omega4: return "omega4";
    case Event::Omega4p: return "omega4p";
    case Event::NoneDecoded: return "none";
  }
  return "?";
}

int reward_messages(Event event) {
  switch (event) {
    case Event::Omega0:
    case Event::Omega1:
    case Event::Omega1p:
    case Event::Omega3: return 2;
    case Event::Omega2:
    case Event::Omega2p:
    case Event::Omega4:
    case Event::Omega4p: return 1;
    case Event::NoneDecoded: return 0;
  }
  return 0;
}

SliceOutcome SliceOutcome::make(Event event, int duration_slots) {
  return {event, harq::reward_messages(event), duration_slots};
}

double mi_single(double g, double p) { return std::log2(1.0 + g * p); }

double mi_sinr(double g, double p_sig, double p_int) {
  return std::log2(1.0 + g * p_sig / (1.0 + g * p_int));
}

// The ladder order matters: whenever both single-user SINR tests pass, the
// MAC-region test of step 1 passes too, so OnlyM1 and OnlyM2 never compete.
DecodeLabel classify_slot1(double g1, double alpha, const SystemConfig& cfg) {
  const double R = cfg.rate;
  const double p1 = alpha * cfg.power;
  const double p2 = (1.0 - alpha) * cfg.power;
  if (R <= mi_single(g1, p1) && R <= mi_single(g1, p2) && 2.0 * R <= mi_single(g1, cfg.power)) {
    return DecodeLabel::Both;
  }
  if (R <= mi_sinr(g1, p1, p2)) return DecodeLabel::OnlyM1;
  if (R <= mi_sinr(g1, p2, p1)) return DecodeLabel::OnlyM2;
  return DecodeLabel::None;
}

DecodeLabel classify_slot2_joint(const ChannelDraw& draw, const PowerSplit& split,
                                 const SystemConfig& cfg) {
  const double R = cfg.rate;
  const double P = cfg.power;
  const double a1 = split.alpha * P, a2 = (1.0 - split.alpha) * P;
  const double b1 = split.beta * P, b2 = (1.0 - split.beta) * P;
  const double g1 = draw.g1, g2 = draw.g2;

  if (R <= mi_single(g1, a1) + mi_single(g2, b1) && R <= mi_single(g1, a2) + mi_single(g2, b2) &&
      2.0 * R <= mi_single(g1, P) + mi_single(g2, P)) {
    return DecodeLabel::Both;
  }
  if (R <= mi_sinr(g1, a1, a2) + mi_sinr(g2, b1, b2)) return DecodeLabel::OnlyM1;
  if (R <= mi_sinr(g1, a2, a1) + mi_sinr(g2, b2, b1)) return DecodeLabel::OnlyM2;
  return DecodeLabel::None;
}

bool classify_slot2_single(double g_prev, double p_prev, double g2, const SystemConfig& cfg) {
  return cfg.rate <= mi_single(g_prev, p_prev) + mi_single(g2, cfg.power);
}

}  // namespace harq

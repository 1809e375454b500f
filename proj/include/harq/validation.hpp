#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "harq/model.hpp"
#include "harq/quadrature.hpp"

namespace harq {

/// Closed form against Monte Carlo for the eight multi-layer event
/// probabilities plus the three superposition-coding probabilities.
inline constexpr int kCheckedProbabilities = 11;
inline constexpr std::array<std::string_view, kCheckedProbabilities> kProbabilityNames = {
    "p0", "p1", "p1p", "p2", "p2p", "p3", "p4", "p4p", "tp3", "tp4", "tp4p"};

struct ValidationCase {
  SystemConfig cfg;
  PowerSplit split;
  double snr_db = 0.0;
  std::array<double, kCheckedProbabilities> closed_form{};
  std::array<double, kCheckedProbabilities> monte_carlo{};
  std::array<double, kCheckedProbabilities> z_score{};
  bool pass = false;
};

struct ValidationSettings {
  int configs = 20;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 7;
  double max_abs_z = 4.0;
  int workers = 0;
  QuadratureSettings quadrature;
};

/// Standard error of an empirical frequency under the closed-form value p:
/// sqrt(p (1 - p) / n), floored at one count (1 / n).
double null_std_err(double p, std::uint64_t trials);

/// Random configuration i: R in [0.25, 4], SNR in [-5, 20] dB, alpha and
/// beta in [0.05, 0.95], drawn from the counter stream of (seed, i).
ValidationCase draw_case(std::uint64_t seed, int index);

/// Draws settings.configs cases and scores each of them.
std::vector<ValidationCase> run_validation(const ValidationSettings& settings);

}  // namespace harq

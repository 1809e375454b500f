#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "harq/closed_form.hpp"
#include "harq/model.hpp"

namespace harq {

struct Optimum {
  double alpha_star = 1.0;
  double beta_star = 1.0;
  std::optional<double> rate_star;  // set only when the rate was optimized
  double throughput_star = 0.0;
  std::int64_t evaluations = 0;
};

struct SearchSettings {
  double grid_step = 0.01;
  double refine_tol = 1e-4;
  int workers = 0;  // <= 0: default_workers(); 1 runs the serial kernels
  QuadratureSettings quadrature;

  void validate() const;
};

/// Closed-form throughput of `protocol` at a split. TS ignores the split; SC
/// uses alpha only.
double objective(Protocol protocol, const PowerSplit& split, const SystemConfig& cfg,
                 const QuadratureSettings& q = {});

/// Relative gap below which two objective values count as a tie.
inline constexpr double kTieTolerance = 1e-12;

/// Candidate split with its objective value. The preferred candidate has the
/// larger value, then the larger alpha, then the larger beta.
struct Candidate {
  PowerSplit split;
  double value = 0.0;
};
bool preferred(const Candidate& lhs, const Candidate& rhs);

/// Evaluates every (alpha_i, beta_j) pair and returns the preferred one.
/// For SC the beta axis is ignored (pass a single value).
Candidate grid_argmax_serial(Protocol protocol, const SystemConfig& cfg,
                             std::span<const double> alphas, std::span<const double> betas,
                             const QuadratureSettings& q);
/// OpenMP version of grid_argmax_serial; identical result for any worker count.
Candidate grid_argmax(Protocol protocol, const SystemConfig& cfg, std::span<const double> alphas,
                      std::span<const double> betas, const QuadratureSettings& q, int workers);

/// Coarse grid over [0,1] per free coordinate, then repeated 10x grid shrinks
/// around the incumbent until the box is below refine_tol.
Optimum optimize_split(Protocol protocol, const SystemConfig& cfg, const SearchSettings& s = {});

/// 60 log-spaced rates in [0.05, 12] bits.
std::vector<double> default_rate_grid();

/// Grid over the rates, then golden-section refinement between the
/// neighbours of the best grid rate.
Optimum optimize_rate_and_split(Protocol protocol, const SystemConfig& cfg,
                                std::span<const double> rate_grid, const SearchSettings& s = {});

namespace detail {
/// {0, step, 2 step, ..., 1}; 1 is always included.
std::vector<double> unit_grid(double step);
/// center + k * spacing for k in [-10, 10], clipped to [0, 1].
std::vector<double> local_grid(double center, double spacing);
}  // namespace detail

}  // namespace harq

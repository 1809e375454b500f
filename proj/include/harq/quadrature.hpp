#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace harq {

struct QuadratureSettings {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 2000;
  double tail_epsilon = 1e-14;  // semi-infinite truncation: tail mass e^{-(b-a)/scale}

  void validate() const;
};

/// Raised when the adaptive integrator cannot meet its tolerance.
class NonConvergence : public std::runtime_error {
 public:
  explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

using Integrand = std::function<double(double)>;

/// Integral of f over [a, b]. The interval is split at every breakpoint inside
/// (a, b) before adaptive refinement; when the caller supplies no breakpoints
/// at all the interval is pre-split into 64 uniform panels.
double integrate_finite(const Integrand& f, double a, double b, std::span<const double> breakpoints,
                        const QuadratureSettings& settings = {});

/// Integral of f over [a, inf) for |f(g)| <= C exp(-g / decay_scale); truncated
/// at a + decay_scale * ln(1 / tail_epsilon).
double integrate_semi_infinite(const Integrand& f, double a, double decay_scale,
                               std::span<const double> breakpoints,
                               const QuadratureSettings& settings = {});

inline double integrate_semi_infinite(const Integrand& f, double a, double decay_scale,
                                      const QuadratureSettings& settings = {}) {
  return integrate_semi_infinite(f, a, decay_scale, {}, settings);
}

}  // namespace harq

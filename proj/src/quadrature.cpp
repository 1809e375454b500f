#include "harq/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace harq {

void QuadratureSettings::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || !(tail_epsilon > 0.0) || tail_epsilon >= 1.0) {
    throw std::invalid_argument("quadrature tolerances must be strictly positive");
  }
  if (max_subdivisions < 10) {
    throw std::invalid_argument("max_subdivisions must be at least 10");
  }
}

namespace {

// 15-point Kronrod abscissae/weights with the embedded 7-point Gauss rule.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

Panel gauss_kronrod15(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_sum = std::abs(kronrod);

  std::array<double, 7> fv1{}, fv2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv1[j] = f(center - dx);
    fv2[j] = f(center + dx);
    const double pair = fv1[j] + fv2[j];
    kronrod += kWgk[j] * pair;
    abs_sum += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }

  const double mean = 0.5 * kronrod;
  double asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) asc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));

  const double width = std::abs(half);
  const double value = kronrod * half;
  const double res_abs = abs_sum * width;
  const double res_asc = asc * width;
  double error = std::abs((kronrod - gauss) * half);
  if (res_asc != 0.0 && error != 0.0) {
    error = res_asc * std::min(1.0, std::pow(200.0 * error / res_asc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    error = std::max(50.0 * eps * res_abs, error);
  }
  return {a, b, value, error};
}

bool by_error(const Panel& lhs, const Panel& rhs) { return lhs.error < rhs.error; }

}  // namespace

double integrate_finite(const Integrand& f, double a, double b, std::span<const double> breakpoints,
                        const QuadratureSettings& settings) {
  if (!(a <= b)) throw std::invalid_argument("integrate_finite: require a <= b");
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("integrate_finite: bounds must be finite");
  }
  if (a == b) return 0.0;

  std::vector<double> cuts{a};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  if (breakpoints.empty()) {
    constexpr int kUniformPanels = 64;
    for (int i = 1; i < kUniformPanels; ++i) cuts.push_back(a + (b - a) * i / kUniformPanels);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Panel> heap;
  heap.reserve(cuts.size() + static_cast<std::size_t>(settings.max_subdivisions) + 1);
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    heap.push_back(gauss_kronrod15(f, cuts[i], cuts[i + 1]));
    total += heap.back().value;
    total_error += heap.back().error;
  }
  std::make_heap(heap.begin(), heap.end(), by_error);

  double frozen = 0.0;  // panels too narrow to bisect further
  auto tolerance = [&] { return std::max(settings.abs_tol, settings.rel_tol * std::abs(total)); };

  for (int split = 0; total_error > tolerance(); ++split) {
    if (split >= settings.max_subdivisions) {
      throw NonConvergence("integrate_finite: error " + std::to_string(total_error) +
                           " exceeds tolerance after " + std::to_string(split) +
                           " subdivisions on [" + std::to_string(a) + ", " + std::to_string(b) +
                           "]");
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel no longer splittable in double precision; accept it as is.
      frozen += worst.value;
      total_error -= worst.error;
      total_error = std::max(total_error, 0.0);
      continue;
    }
    const Panel left = gauss_kronrod15(f, worst.a, mid);
    const Panel right = gauss_kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    if (split % 64 == 63) {
      total_error = 0.0;
      for (const Panel& p : heap) total_error += p.error;
      total_error += left.error + right.error;
    }
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), by_error);
  }

  // Sum from scratch to shed the cancellation drift of the running total.
  double sum = frozen;
  for (const Panel& p : heap) sum += p.value;
  return sum;
}

double integrate_semi_infinite(const Integrand& f, double a, double decay_scale,
                               std::span<const double> breakpoints,
                               const QuadratureSettings& settings) {
  if (!(decay_scale > 0.0)) throw std::invalid_argument("decay_scale must be positive");
  const double b = a + decay_scale * std::log(1.0 / settings.tail_epsilon);
  return integrate_finite(f, a, b, breakpoints, settings);
}

}  // namespace harq

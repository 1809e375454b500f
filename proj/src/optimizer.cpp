#include "harq/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "harq/parallel.hpp"

namespace harq {

void SearchSettings::validate() const {
  if (!(grid_step > 0.0 && grid_step <= 0.5)) {
    throw std::invalid_argument("grid_step must lie in (0, 0.5]");
  }
  if (!(refine_tol > 0.0)) throw std::invalid_argument("refine_tol must be positive");
  quadrature.validate();
}

double objective(Protocol protocol, const PowerSplit& split, const SystemConfig& cfg,
                 const QuadratureSettings& q) {
  switch (protocol) {
    case Protocol::TimeSharing: return throughput_ts(cfg, q);
    case Protocol::MultiLayer: return throughput_mlh(split, cfg, q);
    case Protocol::Superposition: return throughput_sc(split.alpha, cfg, q);
  }
  return 0.0;
}

bool preferred(const Candidate& lhs, const Candidate& rhs) {
  // Mirror-image splits evaluate equal up to rounding; treat them as ties.
  const double scale = std::max(std::abs(lhs.value), std::abs(rhs.value));
  if (std::abs(lhs.value - rhs.value) > kTieTolerance * scale) return lhs.value > rhs.value;
  if (lhs.split.alpha != rhs.split.alpha) return lhs.split.alpha > rhs.split.alpha;
  return lhs.split.beta > rhs.split.beta;
}

namespace {

Candidate reduce(const std::vector<Candidate>& candidates) {
  Candidate best = candidates.front();
  for (const Candidate& c : candidates) {
    if (preferred(c, best)) best = c;
  }
  return best;
}

// Shared layout of both kernels: slot-one terms per alpha, then one
// retransmission evaluation per (alpha, beta) cell.
struct GridPlan {
  Protocol protocol;
  const SystemConfig& cfg;
  std::span<const double> alphas;
  std::span<const double> betas;
  const QuadratureSettings& q;

  std::size_t cells() const {
    return protocol == Protocol::MultiLayer ? alphas.size() * betas.size() : alphas.size();
  }

  PowerSplit split_of(std::size_t cell) const {
    if (protocol != Protocol::MultiLayer) {
      const double a = alphas[cell];
      return {a, protocol == Protocol::Superposition ? a : 1.0};
    }
    return {alphas[cell / betas.size()], betas[cell % betas.size()]};
  }

  double evaluate(std::size_t cell, const std::vector<SlotOneTerms>& slot_one) const {
    const PowerSplit split = split_of(cell);
    switch (protocol) {
      case Protocol::MultiLayer:
        return throughput_mlh(
            combine(slot_one[cell / betas.size()], retransmission_terms(split, cfg, q)), cfg.rate);
      case Protocol::Superposition: return throughput_sc(split.alpha, cfg, q);
      case Protocol::TimeSharing: return throughput_ts(cfg, q);
    }
    return 0.0;
  }
};

void check_axes(std::span<const double> alphas, std::span<const double> betas) {
  if (alphas.empty() || betas.empty()) throw std::invalid_argument("grid axes must be nonempty");
}

}  // namespace

Candidate grid_argmax_serial(Protocol protocol, const SystemConfig& cfg,
                             std::span<const double> alphas, std::span<const double> betas,
                             const QuadratureSettings& q) {
  check_axes(alphas, betas);
  const GridPlan plan{protocol, cfg, alphas, betas, q};
  std::vector<SlotOneTerms> slot_one;
  if (protocol == Protocol::MultiLayer) {
    for (double a : alphas) slot_one.push_back(slot_one_terms(a, cfg, q));
  }
  std::vector<Candidate> candidates;
  candidates.reserve(plan.cells());
  for (std::size_t cell = 0; cell < plan.cells(); ++cell) {
    candidates.push_back({plan.split_of(cell), plan.evaluate(cell, slot_one)});
  }
  return reduce(candidates);
}

Candidate grid_argmax(Protocol protocol, const SystemConfig& cfg, std::span<const double> alphas,
                      std::span<const double> betas, const QuadratureSettings& q, int workers) {
  check_axes(alphas, betas);
  const int threads = workers > 0 ? workers : default_workers();
  const GridPlan plan{protocol, cfg, alphas, betas, q};

  std::vector<SlotOneTerms> slot_one;
  if (protocol == Protocol::MultiLayer) {
    slot_one.resize(alphas.size());
    const auto n = static_cast<std::int64_t>(alphas.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::int64_t i = 0; i < n; ++i) {
      slot_one[static_cast<std::size_t>(i)] = slot_one_terms(alphas[static_cast<std::size_t>(i)], cfg, q);
    }
  }

  std::vector<Candidate> candidates(plan.cells());
  const auto cells = static_cast<std::int64_t>(plan.cells());
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (std::int64_t c = 0; c < cells; ++c) {
    const auto cell = static_cast<std::size_t>(c);
    candidates[cell] = {plan.split_of(cell), plan.evaluate(cell, slot_one)};
  }
  (void)threads;
  return reduce(candidates);
}

namespace detail {

std::vector<double> unit_grid(double step) {
  const auto n = static_cast<int>(std::floor(1.0 / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n) + 2);
  for (int i = 0; i <= n; ++i) grid.push_back(std::min(1.0, i * step));
  if (grid.back() < 1.0) grid.push_back(1.0);
  return grid;
}

std::vector<double> local_grid(double center, double spacing) {
  std::vector<double> grid;
  for (int k = -10; k <= 10; ++k) {
    const double x = center + k * spacing;
    if (x < 0.0 || x > 1.0) continue;
    grid.push_back(x);
  }
  if (grid.empty()) grid.push_back(std::clamp(center, 0.0, 1.0));
  return grid;
}

}  // namespace detail

Optimum optimize_split(Protocol protocol, const SystemConfig& cfg, const SearchSettings& s) {
  cfg.validate();
  s.validate();
  Optimum opt;
  if (protocol == Protocol::TimeSharing) {
    opt.throughput_star = throughput_ts(cfg, s.quadrature);
    opt.evaluations = 1;
    return opt;
  }

  auto search = [&](std::span<const double> alphas, std::span<const double> betas) {
    opt.evaluations += static_cast<std::int64_t>(alphas.size() * betas.size());
    return s.workers == 1 ? grid_argmax_serial(protocol, cfg, alphas, betas, s.quadrature)
                          : grid_argmax(protocol, cfg, alphas, betas, s.quadrature, s.workers);
  };

  const bool two_dim = protocol == Protocol::MultiLayer;
  const std::vector<double> coarse = detail::unit_grid(s.grid_step);
  const std::vector<double> fixed_beta{1.0};
  Candidate best = search(coarse, two_dim ? std::span<const double>(coarse) : fixed_beta);

  // The grid spacing doubles as the half-width of the box that holds the
  // maximiser; shrink it 10x per round until the full width meets refine_tol.
  for (double spacing = s.grid_step; 2.0 * spacing > s.refine_tol;) {
    const double finer = spacing / 10.0;
    const std::vector<double> alphas = detail::local_grid(best.split.alpha, finer);
    const std::vector<double> betas =
        two_dim ? detail::local_grid(best.split.beta, finer) : fixed_beta;
    const Candidate local = search(alphas, betas);
    if (preferred(local, best)) best = local;
    spacing = finer;
  }

  opt.alpha_star = best.split.alpha;
  opt.beta_star = two_dim ? best.split.beta : best.split.alpha;
  opt.throughput_star = best.value;
  return opt;
}

std::vector<double> default_rate_grid() {
  constexpr int kPoints = 60;
  constexpr double kLo = 0.05, kHi = 12.0;
  std::vector<double> grid;
  grid.reserve(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    grid.push_back(kLo * std::pow(kHi / kLo, static_cast<double>(i) / (kPoints - 1)));
  }
  return grid;
}

Optimum optimize_rate_and_split(Protocol protocol, const SystemConfig& cfg,
                                std::span<const double> rate_grid, const SearchSettings& s) {
  if (rate_grid.empty()) throw std::invalid_argument("rate grid must be nonempty");
  if (!std::is_sorted(rate_grid.begin(), rate_grid.end())) {
    throw std::invalid_argument("rate grid must be sorted ascending");
  }

  std::int64_t evaluations = 0;
  auto at_rate = [&](double rate) {
    SystemConfig c = cfg;
    c.rate = rate;
    Optimum o = optimize_split(protocol, c, s);
    evaluations += o.evaluations;
    o.rate_star = rate;
    return o;
  };

  std::size_t best_index = 0;
  Optimum best;
  for (std::size_t i = 0; i < rate_grid.size(); ++i) {
    Optimum o = at_rate(rate_grid[i]);
    if (i == 0 || o.throughput_star > best.throughput_star) {
      best = o;
      best_index = i;
    }
  }

  if (rate_grid.size() >= 2) {
    double lo = rate_grid[best_index == 0 ? 0 : best_index - 1];
    double hi = rate_grid[std::min(best_index + 1, rate_grid.size() - 1)];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    Optimum f1 = at_rate(x1);
    Optimum f2 = at_rate(x2);
    while (hi - lo > s.refine_tol * std::max(1.0, *best.rate_star)) {
      if (f1.throughput_star >= f2.throughput_star) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = at_rate(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = at_rate(x2);
      }
    }
    // Golden section assumes local unimodality; the grid incumbent guards it.
    for (const Optimum* o : {&f1, &f2}) {
      if (o->throughput_star > best.throughput_star) best = *o;
    }
  }
  best.evaluations = evaluations;
  return best;
}

}  // namespace harq

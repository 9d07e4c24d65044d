#include "auvplan/foa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "auvplan/rng.hpp"

namespace auvplan::foa {

namespace {

void check_dimensions(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw FoaError(os.str());
  }
}

std::string describe(std::span<const double> v) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << "]";
  return os.str();
}

}  // namespace

void FoaParams::validate() const {
  if (population_size < 2) throw FoaError("FoaParams: population_size must be at least 2");
  if (iterations < 1) throw FoaError("FoaParams: iterations must be at least 1");
  if (!(attraction_base >= 0.0) || !std::isfinite(attraction_base))
    throw FoaError("FoaParams: attraction_base must be finite and nonnegative");
  if (!(light_absorption >= 0.0) || !std::isfinite(light_absorption))
    throw FoaError("FoaParams: light_absorption must be finite and nonnegative");
  if (!(randomness_init >= 0.0) || !std::isfinite(randomness_init))
    throw FoaError("FoaParams: randomness_init must be finite and nonnegative");
  if (!(damping > 0.0 && damping < 1.0)) throw FoaError("FoaParams: damping must lie in (0, 1)");
}

double firefly_distance(std::span<const double> a, std::span<const double> b) {
  check_dimensions(a.size(), b.size(), "firefly_distance");
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = b[k] - a[k];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double attractiveness(const FoaParams& params, double distance) noexcept {
  return params.attraction_base * std::exp(-params.light_absorption * distance * distance);
}

double anneal_alpha(const FoaParams& params, std::size_t t) noexcept {
  return params.randomness_init * std::pow(params.damping, static_cast<double>(t));
}

std::vector<double> attraction_step(const Firefly& mover, const Firefly& target, const FoaParams& params,
                                    std::size_t t, std::span<const double> noise) {
  check_dimensions(mover.position.size(), target.position.size(), "attraction_step");
  check_dimensions(mover.position.size(), noise.size(), "attraction_step noise");
  const double beta = attractiveness(params, firefly_distance(mover.position, target.position));
  const double alpha = anneal_alpha(params, t);
  std::vector<double> next(mover.position.size());
  for (std::size_t k = 0; k < next.size(); ++k) {
    next[k] = mover.position[k] + beta * (target.position[k] - mover.position[k]) + alpha * noise[k];
  }
  return next;
}

OptimizeResult optimize(const CostFunction& cost_fn, std::vector<std::vector<double>> init_population,
                        const FoaParams& params, const std::optional<SearchBox>& box) {
  if (init_population.empty()) throw FoaError("optimize: empty initial population");
  if (params.iterations < 1) throw FoaError("FoaParams: iterations must be at least 1");
  if (!(params.damping > 0.0 && params.damping < 1.0)) throw FoaError("FoaParams: damping must lie in (0, 1)");

  const std::size_t dim = init_population.front().size();
  for (const auto& p : init_population) check_dimensions(p.size(), dim, "optimize population");
  if (box) {
    check_dimensions(box->lower.size(), dim, "optimize box lower");
    check_dimensions(box->upper.size(), dim, "optimize box upper");
  }

  Rng rng(params.rng_seed);
  OptimizeResult result;
  result.best_cost_history.reserve(params.iterations);

  auto clamp_into_box = [&](std::vector<double>& x) {
    if (!box) return;
    for (std::size_t k = 0; k < dim; ++k) x[k] = std::clamp(x[k], box->lower[k], box->upper[k]);
  };
  auto evaluate = [&](const std::vector<double>& x) {
    const double c = cost_fn(x);
    ++result.evaluations;
    if (!std::isfinite(c)) throw FoaError("optimize: non-finite cost for position " + describe(x));
    return c;
  };

  std::vector<Firefly> swarm;
  swarm.reserve(init_population.size());
  for (auto& p : init_population) {
    clamp_into_box(p);
    Firefly f{std::move(p), 0.0};
    f.cost = evaluate(f.position);
    swarm.push_back(std::move(f));
  }

  auto track_best = [&](const Firefly& f) {
    if (result.best.position.empty() || f.cost < result.best.cost) result.best = f;
  };
  for (const auto& f : swarm) track_best(f);

  std::vector<double> noise(dim);
  auto move = [&](Firefly& mover, const Firefly& target, std::size_t t) {
    for (auto& z : noise) z = rng.uniform() - 0.5;
    mover.position = attraction_step(mover, target, params, t, noise);
    clamp_into_box(mover.position);
    mover.cost = evaluate(mover.position);
    track_best(mover);
  };

  std::vector<std::size_t> order(swarm.size());
  for (std::size_t t = 0; t < params.iterations; ++t) {
    // Rank by cost; equal costs keep index order.
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return swarm[a].cost < swarm[b].cost; });

    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        Firefly& fi = swarm[order[i]];
        Firefly& fj = swarm[order[j]];
        if (fj.cost <= fi.cost) {
          move(fi, fj, t);
        } else {
          move(fj, fi, t);
        }
      }
    }
    result.best_cost_history.push_back(result.best.cost);
  }
  return result;
}

}  // namespace auvplan::foa

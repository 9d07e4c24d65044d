#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace auvplan::foa {

/// Firefly optimizer settings. Both planners own one of these.
struct FoaParams {
  std::size_t population_size = 20;  // i_max
  std::size_t iterations = 100;      // t_max
  double attraction_base = 1.0;      // beta_0
  double light_absorption = 1.0;     // gamma
  double randomness_init = 0.2;      // alpha_0
  double damping = 0.97;             // kappa, open interval (0,1)
  std::uint64_t rng_seed = 1;

  void validate() const;
};

struct Firefly {
  std::vector<double> position;
  double cost = 0.0;
};

struct OptimizeResult {
  Firefly best;
  std::vector<double> best_cost_history;  // best-so-far after each iteration
  std::size_t evaluations = 0;
};

/// Per-coordinate box; positions are clamped into it after every move.
struct SearchBox {
  std::vector<double> lower;
  std::vector<double> upper;
};

class FoaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using CostFunction = std::function<double(std::span<const double>)>;

double firefly_distance(std::span<const double> a, std::span<const double> b);

/// beta_0 * exp(-gamma * r^2).
double attractiveness(const FoaParams& params, double distance) noexcept;

/// alpha_0 * kappa^t.
double anneal_alpha(const FoaParams& params, std::size_t t) noexcept;

/// Position of `mover` after one attraction step toward `target`:
/// x + beta(r) (x_target - x) + alpha_t * noise.
std::vector<double> attraction_step(const Firefly& mover, const Firefly& target, const FoaParams& params,
                                    std::size_t t, std::span<const double> noise);

/// Runs the ranked pairwise firefly sweep for params.iterations iterations.
/// The population size is taken from init_population. Moves are applied in
/// place; the best firefly ever evaluated is retained.
OptimizeResult optimize(const CostFunction& cost_fn, std::vector<std::vector<double>> init_population,
                        const FoaParams& params, const std::optional<SearchBox>& box = std::nullopt);

}  // namespace auvplan::foa

#include <random>
#include <stdexcept>

#include "coalition/stochastic.hpp"

namespace coalition {

MonteCarloResult monte_carlo(const GameParams& params, std::uint64_t steps, std::uint64_t seed,
                             const MonteCarloOptions& options) {
  params.validate();
  if (steps < 1) throw std::invalid_argument("monte_carlo: steps must be >= 1");
  const int Z = params.Z;
  const FitnessTable table(params);
  const StateIndex& index = table.index();

  int n[3] = {Z / 3, Z / 3, 0};
  if (options.start) {
    n[0] = (*options.start)[0];
    n[1] = (*options.start)[1];
    if (n[0] < 0 || n[1] < 0 || n[0] + n[1] > Z)
      throw std::invalid_argument("monte_carlo: start composition outside the simplex");
  }
  n[2] = Z - n[0] - n[1];

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> focal_draw(0, Z - 1);
  std::uniform_int_distribution<int> model_draw(0, Z - 2);
  std::uniform_int_distribution<int> coin(0, 1);

  auto strategy_of = [&](int slot) { return slot < n[0] ? 0 : slot < n[0] + n[1] ? 1 : 2; };

  std::vector<std::uint64_t> counts(index.size(), 0);
  MonteCarloResult r;
  r.steps = steps;
  for (std::uint64_t t = 0; t < steps; ++t) {
    const int X = strategy_of(focal_draw(rng));
    int Y = X;
    if (unit(rng) < params.mu) {
      // One of the two other strategies, uniformly.
      Y = (X + 1 + coin(rng)) % 3;
    } else {
      // Role model among the other Z - 1: skip the focal's own slot.
      int slot = model_draw(rng);
      int before = 0;
      for (int s = 0; s < X; ++s) before += n[s];
      if (slot >= before) ++slot;
      const int candidate = strategy_of(slot);
      if (candidate != X) {
        const auto& f = table.at(n[0], n[1]);
        const double fit[3] = {f.f_C, f.f_D, f.f_O};
        if (unit(rng) < imitation_probability(params.beta, fit[X], fit[candidate])) Y = candidate;
      }
    }
    if (Y != X) {
      --n[X];
      ++n[Y];
    }
    ++counts[index(n[0], n[1])];
    if (options.trajectory_stride > 0 && t % options.trajectory_stride == 0)
      r.trajectory.push_back({n[0], n[1]});
  }
  r.occupancy.resize(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k)
    r.occupancy[k] = static_cast<double>(counts[k]) / static_cast<double>(steps);
  return r;
}

}  // namespace coalition

#pragma once

// Hypergeometric sampling of coalition compositions and the average payoff
// of each strategy at a population composition.
//
// A focal member sits in a coalition of N drawn from the i_M members; its
// N-1 partners are a uniform draw without replacement from the other i_M-1
// members. The number k of cooperating partners is hypergeometric, and
//
//   f_C = sum_k P(k; i_M-1, N-1, i_C-1) Pi_C(k c)
//   f_D = sum_k P(k; i_M-1, N-1, i_C)   Pi_D(k c)
//   f_O = (i_C/i_M) sum_k P(k; i_M-1, N-1, i_C-1) Pi_O((k+1) c)
//       + (i_D/i_M) sum_k P(k; i_M-1, N-1, i_C)   Pi_O(k c)
//
// The outsider weights use i_M, which makes f_O the spillover averaged over
// a uniformly drawn N-subset of members.
//
// Boundary convention: with fewer than two members there is no coalition and
// all three fitnesses are 0; f_C (f_D) is 0 when no cooperator (defector)
// exists.

#include <optional>
#include <vector>

#include "coalition/game.hpp"

namespace coalition {

struct HypergeomSpec {
  int z = 0;  // pool size
  int n = 0;  // draws
  int i = 0;  // successes in the pool

  // Throws std::invalid_argument unless 0 <= n <= z and 0 <= i <= z.
  void validate() const;
  int k_min() const { return n - (z - i) > 0 ? n - (z - i) : 0; }
  int k_max() const { return n < i ? n : i; }
};

// log(n!) from a table for small n, lgamma beyond.
double log_factorial(int n);

// P(k; z, n, i) evaluated in log space; 0 outside the support.
double hypergeom_pmf(const HypergeomSpec& spec, int k);

// P(k) for k = 0 .. length-1.
std::vector<double> hypergeom_row(const HypergeomSpec& spec, int length);

struct FitnessTriple {
  double f_C = 0.0;
  double f_D = 0.0;
  double f_O = 0.0;
};

FitnessTriple fitness(const GameParams& params, const PopulationState& state);

// Fitness at an arbitrary composition (used at shifted configurations such
// as (i_C+1, i_D-1)). The coalition size is recomputed from i_C + i_D unless
// an override is given; an override must lie in [2, i_C + i_D].
FitnessTriple fitness_at(const GameParams& params, int i_C, int i_D,
                         std::optional<int> group_size_override = std::nullopt);

// Fitness of every composition for one parameter set, built row by row in
// parallel and read-only afterwards.
class FitnessTable {
 public:
  explicit FitnessTable(const GameParams& params);

  const FitnessTriple& at(int i_C, int i_D) const { return values_[index_(i_C, i_D)]; }
  const FitnessTriple& operator[](std::size_t idx) const { return values_[idx]; }
  const StateIndex& index() const { return index_; }
  int Z() const { return index_.Z(); }

 private:
  StateIndex index_;
  std::vector<FitnessTriple> values_;
};

}  // namespace coalition

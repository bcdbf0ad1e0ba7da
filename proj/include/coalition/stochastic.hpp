#pragma once

// Finite-population dynamics: a Markov chain over compositions (i_C, i_D)
// in which one individual per step either mutates (probability mu, to one of
// the two other strategies) or imitates a randomly drawn role model with the
// Fermi probability
//
//   p(X, Y) = 1 / (1 + exp(beta (f_X - f_Y))).
//
// Transition X -> Y (default, "scaled" mutation):
//   T_XY = (i_X / Z) [ (1 - mu) (i_Y / (Z - 1)) p(X, Y) + mu / 2 ]
// "literal" mutation:
//   T_XY = (i_X / Z) (i_Y / (Z - 1)) p(X, Y) (1 - mu) + mu / 2   (i_X >= 1)
// The self-loop absorbs the remainder.

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "coalition/game.hpp"
#include "coalition/sampling.hpp"

namespace coalition {

double imitation_probability(double beta, double f_X, double f_Y);
double imitation_probability(const GameParams& params, double f_X, double f_Y);

enum class MutationForm { scaled, literal };

const char* to_string(MutationForm m);

struct ChainOptions {
  MutationForm mutation_form = MutationForm::scaled;
  // Larger chains throw CapacityError before anything is allocated.
  std::size_t max_states = 1'000'000;
};

// The six strategy switches, in this order, with their effect on (i_C, i_D).
enum class Move { CD, CO, DC, DO, OC, OD };
inline constexpr std::array<std::array<int, 2>, 6> kMoveDelta{
    {{-1, +1}, {-1, 0}, {+1, -1}, {0, -1}, {+1, 0}, {0, +1}}};

const char* to_string(Move m);

class MarkovModel {
 public:
  const StateIndex& index() const { return index_; }
  const GameParams& params() const { return params_; }
  const ChainOptions& options() const { return options_; }
  std::size_t size() const { return index_.size(); }

  // Probability of move m out of state idx (0 when it would leave the simplex).
  double move_probability(std::size_t idx, Move m) const { return moves_[idx * 6 + static_cast<int>(m)]; }
  double self_loop(std::size_t idx) const;
  // Entry T[from][to]; 0 for non-neighbours.
  double transition(std::size_t from, std::size_t to) const;

  // Rows padded to kernels::kEllWidth; row r holds T[r][.] (forward) or
  // T[.][r] (transposed, used for pi T).
  std::span<const std::int32_t> ell_columns() const { return cols_; }
  std::span<const double> ell_values() const { return vals_; }
  std::span<const std::int32_t> ell_columns_transposed() const { return t_cols_; }
  std::span<const double> ell_values_transposed() const { return t_vals_; }

 private:
  friend MarkovModel build_chain(const GameParams&, const ChainOptions&);
  MarkovModel(const GameParams& params, const ChainOptions& options)
      : index_(params.Z), params_(params), options_(options) {}

  StateIndex index_;
  GameParams params_;
  ChainOptions options_;
  std::vector<double> moves_;
  std::vector<std::int32_t> cols_, t_cols_;
  std::vector<double> vals_, t_vals_;
};

// Throws CapacityError above options.max_states, and std::domain_error when
// the literal mutation form would give a row more than unit outflow.
MarkovModel build_chain(const GameParams& params, const ChainOptions& options = {});

// Strong connectivity of the transition graph.
bool is_irreducible(const MarkovModel& model);

struct StationarySummary {
  double mean_x = 0.0;  // over states with members, renormalized
  double sd_x = 0.0;
  double mean_y = 0.0;
  double sd_y = 0.0;
  double member_mass = 0.0;  // pi mass on states with i_M >= 1
};

struct StationaryResult {
  std::vector<double> pi;
  double residual = 0.0;  // max_j |(pi T)_j - pi_j|
  std::size_t iterations = 0;
  StationarySummary summary;
};

struct SolverOptions {
  double tolerance = 1e-10;
  std::size_t max_iterations = 20'000'000;
  std::size_t check_every = 64;
};

// Power iteration on pi <- pi T. Throws ConvergenceError for a reducible
// chain or when the iteration cap is reached.
StationaryResult stationary(const MarkovModel& model, const SolverOptions& options = {});

// The same iteration for any chain, given in transposed ELL form (row j
// lists the transitions into state j). Irreducibility is the caller's
// business; summary is left empty.
StationaryResult power_iteration(std::span<const std::int32_t> t_cols, std::span<const double> t_vals,
                                 const SolverOptions& options = {});

// Dense LU solve of pi (T - I) = 0, sum pi = 1. Only for at most 2000
// states (CapacityError otherwise).
StationaryResult stationary_dense(const MarkovModel& model);

StationarySummary summarize(const StateIndex& index, std::span<const double> pi);

double residual(const MarkovModel& model, std::span<const double> pi);

struct GradientPoint {
  int i_C = 0;
  int i_D = 0;
  double x = 0.0;  // 0 when there are no members
  double y = 0.0;
  double d_iC = 0.0;  // expected one-step change of i_C
  double d_iD = 0.0;
  // The same displacement in (x, y): grad_x = (i_D d_iC - i_C d_iD) / i_M^2
  // (0 without members), grad_y = (d_iC + d_iD) / Z.
  double grad_x = 0.0;
  double grad_y = 0.0;
  double speed = 0.0;  // |(d_iC, d_iD)|
  std::optional<Move> likely_move;
};

// One entry per state, in StateIndex order.
std::vector<GradientPoint> selection_gradient(const MarkovModel& model);

struct MonteCarloOptions {
  // Starting composition; the centre of the simplex when unset.
  std::optional<std::array<int, 2>> start;
  // Every stride-th state is appended to the trajectory (0: none kept).
  std::uint64_t trajectory_stride = 0;
};

struct MonteCarloResult {
  std::vector<double> occupancy;  // fraction of steps spent in each state
  std::vector<std::array<int, 2>> trajectory;
  std::uint64_t steps = 0;
};

// Individual-based simulation of the scaled-mutation chain, deterministic
// for a given seed.
MonteCarloResult monte_carlo(const GameParams& params, std::uint64_t steps, std::uint64_t seed,
                             const MonteCarloOptions& options = {});

double total_variation(std::span<const double> p, std::span<const double> q);

// Columns: i_C,i_D,x,y,pi (x is 0 without members).
void write_stationary_csv(std::ostream& out, const StateIndex& index, std::span<const double> pi);
// Columns: i_C,i_D,x,y,grad_x,grad_y,speed
void write_gradient_csv(std::ostream& out, std::span<const GradientPoint> gradient);

}  // namespace coalition

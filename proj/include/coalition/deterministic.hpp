#pragma once

// Replicator dynamics of uninformed players in the (x, y) plane, where y is
// the member fraction and x the cooperator fraction among members:
//
//   x' = x (1 - x) (f_C - f_D)
//   y' = y (1 - y) (x f_C + (1 - x) f_D - f_O)
//
// and their decomposition
//
//   x' = x (1 - x) c (<R> (eps1 + eps2) - 1 - K_exact)
//   y' = y (1 - y) c (<b> eps1 - x - kappa)
//
// K_exact = A / (2c) is the cost of not knowing the returns to contribution;
// A compares fitnesses after swapping one defector for a cooperator. The
// second-order remainder K_dropped = (1 - y)(B - C - D) / (2c) involves
// compositions with one member more or less; K_exact + K_dropped is the full
// gap between informed and uninformed players (see informed.hpp).

#include <array>
#include <complex>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "coalition/game.hpp"
#include "coalition/sampling.hpp"

namespace coalition {

struct FieldVector {
  double x_dot = 0.0;
  double y_dot = 0.0;
};

// Exact zeros on the boundary lines x in {0, 1}, y in {0, 1}; x' = 0 when
// there are no members.
FieldVector replicator_field(const GameParams& params, const PopulationState& state);
FieldVector replicator_field(const FitnessTriple& f, const PopulationState& state);

// <R> = sum_k (P(k; i_M-1, N-1, i_C) + P(k; i_M-1, N-1, i_C-1)) / 2 R(k c).
// When one of the two pools does not exist (i_C = 0 or i_D = 0) the other
// carries the full weight. Requires i_M >= 2 (std::domain_error otherwise).
double mean_return(const GameParams& params, const PopulationState& state);

// <b> = x sum_k P(k; i_M-1, N-1, i_C-1) b(k c + c)
//     + (1 - x) sum_k P(k; i_M-1, N-1, i_C) b(k c). Requires i_M >= 2.
double mean_benefit(const GameParams& params, const PopulationState& state);

struct InformationCost {
  double K_exact = 0.0;  // A / (2c)
  double A = 0.0;        // f_C(i_C+1, i_D-1) - f_C + f_D - f_D(i_C-1, i_D+1)
  // Defined only when an outsider exists (the terms reach i_M + 1).
  std::optional<double> K_dropped;  // (1 - y)(B - C - D) / (2c)
  std::optional<double> B;          // f_O(i_C, i_D-1) - f_O(i_C-1, i_D)
  std::optional<double> C;          // f_C(i_C+1, i_D-1) - f_C(i_C+1, i_D)
  std::optional<double> D;          // f_D(i_C, i_D+1) - f_D(i_C-1, i_D+1)

  // K_exact + K_dropped, the supplement's complete information cost.
  std::optional<double> K_full() const {
    if (!K_dropped) return std::nullopt;
    return K_exact + *K_dropped;
  }
};

// Undefined (nullopt) unless i_C >= 1 and i_D >= 1.
std::optional<InformationCost> k_exact(const GameParams& params, const PopulationState& state);
std::optional<InformationCost> k_exact(const GameParams& params, const FitnessTable& table,
                                       const PopulationState& state);

struct FlowPoint {
  int i_C = 0;
  int i_D = 0;
  double x = 0.0;
  double y = 0.0;
  double x_dot = 0.0;
  double y_dot = 0.0;
  double mean_R = 0.0;
  double mean_b = 0.0;
  double K_exact = 0.0;
  double K_dropped = 0.0;
};

// Every interior composition (i_C, i_D, i_O >= 1), in StateIndex order.
std::vector<FlowPoint> flow_field(const GameParams& params);
std::vector<FlowPoint> flow_field(const GameParams& params, const FitnessTable& table);

// Columns: i_C,i_D,x,y,x_dot,y_dot,mean_R,mean_b,K_exact,K_dropped
void write_flow_csv(std::ostream& out, std::span<const FlowPoint> field);

// The replicator field on the continuum: (f_C, f_D, f_O) are interpolated
// bilinearly over the integer compositions (linearly in x within a
// membership level, then linearly between levels), and the logistic
// prefactors are applied at the continuous (x, y). Each fitness is
// interpolated only over the compositions where its strategy exists, held
// constant beyond. The x' bracket f_C - f_D is interpolated as one lattice
// quantity over compositions holding both C and D, so x' keeps the lattice
// sign everywhere (at alpha = 1 it is -x(1-x)c on the whole plane).
// Defined for y >= 2/Z.
class ContinuousField {
 public:
  explicit ContinuousField(const GameParams& params);

  FitnessTriple fitness(double x, double y) const;
  FieldVector operator()(double x, double y) const;
  double y_min() const { return 2.0 / table_.Z(); }
  int Z() const { return table_.Z(); }

 private:
  double level_value(int i_M, double x, int which) const;
  double blend(double x, double y, int which) const;
  FitnessTable table_;
};

enum class FixedPointKind { stable_node, stable_spiral, unstable_node, unstable_spiral, saddle, center };

const char* to_string(FixedPointKind k);

struct FixedPoint {
  double x = 0.0;
  double y = 0.0;
  double residual = 0.0;                // |(x', y')| at (x, y)
  std::array<double, 4> jacobian{};     // row-major d(x', y') / d(x, y)
  std::array<std::complex<double>, 2> eigenvalues{};
  FixedPointKind kind = FixedPointKind::center;
};

// Classification of a 2x2 Jacobian (row-major).
FixedPointKind classify_jacobian(const std::array<double, 4>& J,
                                 std::array<std::complex<double>, 2>* eigenvalues = nullptr);

// Interior zeros of the continuous field. The rectangle x in [0, 1],
// y in [2/Z, 1] is cut into grid_resolution^2 cells, each split further
// until there are at least 2Z cells per side; cells over which both
// components change sign seed a damped Newton iteration, kept when the
// residual drops below 1e-8 strictly inside the rectangle. Jacobians use
// central differences with a step of one composition (1/Z). Results are
// sorted by (y, x). grid_resolution must be >= 20.
std::vector<FixedPoint> find_fixed_points(const GameParams& params, int grid_resolution);
std::vector<FixedPoint> find_fixed_points(const ContinuousField& field, int grid_resolution);

}  // namespace coalition

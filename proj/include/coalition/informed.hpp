#pragma once

// Players who know the marginal return to their own contribution.
//
// For one coalition of size N in which the other members contribute C':
//
//   d_CD = Pi_C - Pi_D = c (R(C') (eps1 + eps2) - 1)
//   d_DO = Pi_D - Pi_O = c (b(C') eps1 - kappa)
//   d_CO = d_CD + d_DO
//
// Cooperating inside the coalition is preferred (label A) when
//   (i)  R (eps1 + eps2) > 1, and
//   (ii) b(C' + c) eps1 > 1 - R eps2 + kappa,
// which are d_CD > 0 and d_CO > 0. Label B (defect inside) is d_CD < 0 with
// d_DO > 0. Other sign patterns carry no label.
//
// At the population level informed players compare fitness at the
// configuration they would actually move to:
//
//   x' = x(1-x)/2 [ y (df_DC - df_CD) + (1-y)(df_OC - df_CO + df_DO - df_OD) ]
//   y' = y(1-y)/2 [ x (df_OC - df_CO) + (1-x)(df_OD - df_DO) ]
//
// with df_XY = f_Y(after one X switches to Y) - f_X(now).

#include <array>
#include <optional>

#include "coalition/game.hpp"

namespace coalition {

struct MarginalGains {
  double d_CD = 0.0;
  double d_DO = 0.0;
  double d_CO = 0.0;
};

// others_contribution must lie on the grid {0, c, ..., (N-1)c}.
MarginalGains marginal_gains(const GameParams& params, double others_contribution, int N);

enum class Sign { negative, zero, positive };

char to_char(Sign s);

struct StateClass {
  std::array<Sign, 3> signs{};  // of d_CD, d_DO, d_CO
  bool condition_i = false;
  bool condition_ii = false;
  std::optional<char> label;  // 'A' or 'B'
};

StateClass classify_state(const GameParams& params, double others_contribution, int N);

struct InformedField {
  double x_dot = 0.0;
  double y_dot = 0.0;
  // x(1-x) c (<R>(eps1 + eps2) - 1): the informed cooperation dynamics with
  // the second-order terms dropped.
  double x_dot_leading = 0.0;
  double df_DC = 0.0;
  double df_CD = 0.0;
  double df_OC = 0.0;
  double df_CO = 0.0;
  double df_DO = 0.0;
  double df_OD = 0.0;
};

// Defined on interior compositions only (every strategy present).
std::optional<InformedField> informed_field(const GameParams& params, const PopulationState& state);

}  // namespace coalition

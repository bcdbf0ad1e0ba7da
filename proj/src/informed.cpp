#include "coalition/informed.hpp"

#include <algorithm>
#include <cmath>

#include "coalition/deterministic.hpp"
#include "coalition/sampling.hpp"

namespace coalition {

MarginalGains marginal_gains(const GameParams& params, double others_contribution, int N) {
  // Rejects contributions off the grid.
  (void)payoff(params, Strategy::C, others_contribution, N);
  const auto sh = effective_shares(params, N);
  const double R = marginal_return(params, others_contribution, N);
  const double b = relative_benefit(params, others_contribution, N);
  MarginalGains g;
  g.d_CD = params.c * (R * sh.total() - 1.0);
  g.d_DO = params.c * (b * sh.eps1 - sh.kappa);
  g.d_CO = g.d_CD + g.d_DO;
  return g;
}

char to_char(Sign s) {
  switch (s) {
    case Sign::negative: return '-';
    case Sign::zero: return '0';
    case Sign::positive: return '+';
  }
  return '?';
}

StateClass classify_state(const GameParams& params, double others_contribution, int N) {
  const auto g = marginal_gains(params, others_contribution, N);
  const double tol = 1e-12 * std::max(1.0, params.c);
  auto sign = [&](double v) {
    return v > tol ? Sign::positive : v < -tol ? Sign::negative : Sign::zero;
  };
  StateClass s;
  s.signs = {sign(g.d_CD), sign(g.d_DO), sign(g.d_CO)};
  s.condition_i = s.signs[0] == Sign::positive;
  s.condition_ii = s.signs[2] == Sign::positive;
  if (s.condition_i && s.condition_ii)
    s.label = 'A';
  else if (s.signs[0] == Sign::negative && s.signs[1] == Sign::positive)
    s.label = 'B';
  return s;
}

std::optional<InformedField> informed_field(const GameParams& params, const PopulationState& state) {
  if (!state.interior()) return std::nullopt;
  const int iC = state.i_C();
  const int iD = state.i_D();
  auto f = [&](int c, int d) { return fitness_at(params, c, d); };
  const auto here = f(iC, iD);

  InformedField r;
  r.df_DC = f(iC + 1, iD - 1).f_C - here.f_D;
  r.df_CD = f(iC - 1, iD + 1).f_D - here.f_C;
  r.df_OC = f(iC + 1, iD).f_C - here.f_O;
  r.df_CO = f(iC - 1, iD).f_O - here.f_C;
  r.df_DO = f(iC, iD - 1).f_O - here.f_D;
  r.df_OD = f(iC, iD + 1).f_D - here.f_O;

  const double x = state.x();
  const double y = state.y();
  r.x_dot = 0.5 * x * (1 - x) *
            (y * (r.df_DC - r.df_CD) + (1 - y) * (r.df_OC - r.df_CO + r.df_DO - r.df_OD));
  r.y_dot = 0.5 * y * (1 - y) * (x * (r.df_OC - r.df_CO) + (1 - x) * (r.df_OD - r.df_DO));

  const auto sh = effective_shares(params, group_size(params, state.i_M()));
  r.x_dot_leading = x * (1 - x) * params.c * (mean_return(params, state) * sh.total() - 1.0);
  return r;
}

}  // namespace coalition

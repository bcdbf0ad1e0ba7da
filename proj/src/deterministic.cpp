#include "coalition/deterministic.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "coalition/csv.hpp"
#include "coalition/kernels.hpp"

namespace coalition {

namespace {

using FitnessLookup = std::function<FitnessTriple(int, int)>;

void require_members(const PopulationState& state, const char* who) {
  if (state.i_M() < 2) throw std::domain_error(std::string(who) + ": needs at least two members");
}

double mean_return_with(const PayoffTable& table, const GameParams& params, int i_C, int i_D) {
  const int i_M = i_C + i_D;
  const int N = table.N;
  std::vector<double> R(N);
  for (int k = 0; k < N; ++k) R[k] = (table.benefit[k + 1] - table.benefit[k]) / params.c;
  // A defector's partners hold i_C cooperators, a cooperator's i_C - 1.
  double total = 0.0;
  double weight = 0.0;
  if (i_D >= 1) {
    total += kernels::dot(hypergeom_row({i_M - 1, N - 1, i_C}, N), R);
    weight += 1.0;
  }
  if (i_C >= 1) {
    total += kernels::dot(hypergeom_row({i_M - 1, N - 1, i_C - 1}, N), R);
    weight += 1.0;
  }
  return total / weight;
}

double mean_benefit_with(const PayoffTable& table, const GameParams& params, int i_C, int i_D) {
  const int i_M = i_C + i_D;
  const int N = table.N;
  const double x = static_cast<double>(i_C) / i_M;
  double total = 0.0;
  if (i_C >= 1) {
    const std::span<const double> shifted(table.benefit.data() + 1, N);
    total += x * kernels::dot(hypergeom_row({i_M - 1, N - 1, i_C - 1}, N), shifted);
  }
  if (i_D >= 1) {
    const std::span<const double> unshifted(table.benefit.data(), N);
    total += (1.0 - x) * kernels::dot(hypergeom_row({i_M - 1, N - 1, i_C}, N), unshifted);
  }
  return total / params.c;
}

std::optional<InformationCost> information_cost(const GameParams& params,
                                                const PopulationState& s,
                                                const FitnessLookup& f) {
  const int iC = s.i_C();
  const int iD = s.i_D();
  if (iC < 1 || iD < 1) return std::nullopt;
  const FitnessTriple here = f(iC, iD);
  InformationCost k;
  k.A = f(iC + 1, iD - 1).f_C - here.f_C + here.f_D - f(iC - 1, iD + 1).f_D;
  k.K_exact = k.A / (2.0 * params.c);
  if (s.i_O() >= 1) {
    k.B = f(iC, iD - 1).f_O - f(iC - 1, iD).f_O;
    k.C = f(iC + 1, iD - 1).f_C - f(iC + 1, iD).f_C;
    k.D = f(iC, iD + 1).f_D - f(iC - 1, iD + 1).f_D;
    k.K_dropped = (1.0 - s.y()) * (*k.B - *k.C - *k.D) / (2.0 * params.c);
  }
  return k;
}

}  // namespace

FieldVector replicator_field(const FitnessTriple& f, const PopulationState& state) {
  FieldVector v;
  if (state.i_M() == 0) return v;
  const double x = state.x();
  const double y = state.y();
  if (state.i_C() > 0 && state.i_D() > 0) v.x_dot = x * (1.0 - x) * (f.f_C - f.f_D);
  if (state.i_O() > 0) v.y_dot = y * (1.0 - y) * (x * f.f_C + (1.0 - x) * f.f_D - f.f_O);
  return v;
}

FieldVector replicator_field(const GameParams& params, const PopulationState& state) {
  return replicator_field(fitness(params, state), state);
}

double mean_return(const GameParams& params, const PopulationState& state) {
  require_members(state, "mean_return");
  const PayoffTable table(params, group_size(params, state.i_M()));
  return mean_return_with(table, params, state.i_C(), state.i_D());
}

double mean_benefit(const GameParams& params, const PopulationState& state) {
  require_members(state, "mean_benefit");
  const PayoffTable table(params, group_size(params, state.i_M()));
  return mean_benefit_with(table, params, state.i_C(), state.i_D());
}

std::optional<InformationCost> k_exact(const GameParams& params, const PopulationState& state) {
  return information_cost(params, state,
                          [&](int c, int d) { return fitness_at(params, c, d); });
}

std::optional<InformationCost> k_exact(const GameParams& params, const FitnessTable& table,
                                       const PopulationState& state) {
  return information_cost(params, state, [&](int c, int d) { return table.at(c, d); });
}

std::vector<FlowPoint> flow_field(const GameParams& params) {
  return flow_field(params, FitnessTable(params));
}

std::vector<FlowPoint> flow_field(const GameParams& params, const FitnessTable& table) {
  const int Z = params.Z;
  const auto lookup = [&](int c, int d) { return table.at(c, d); };
  std::vector<FlowPoint> out;
  for (int iC = 1; iC < Z; ++iC) {
    for (int iD = 1; iC + iD < Z; ++iD) {
      const PopulationState s(iC, iD, Z);
      // Cheap enough per state; the fitness table carries the heavy part.
      const PayoffTable payoffs(params, group_size(params, s.i_M()));
      const auto v = replicator_field(table.at(iC, iD), s);
      const auto k = information_cost(params, s, lookup);
      out.push_back({iC, iD, s.x(), s.y(), v.x_dot, v.y_dot,
                     mean_return_with(payoffs, params, iC, iD),
                     mean_benefit_with(payoffs, params, iC, iD), k->K_exact, *k->K_dropped});
    }
  }
  return out;
}

void write_flow_csv(std::ostream& out, std::span<const FlowPoint> field) {
  csv::Writer w(out, {"i_C", "i_D", "x", "y", "x_dot", "y_dot", "mean_R", "mean_b", "K_exact",
                      "K_dropped"});
  for (const auto& p : field) {
    w << p.i_C << p.i_D << p.x << p.y << p.x_dot << p.y_dot << p.mean_R << p.mean_b << p.K_exact
      << p.K_dropped;
    w.end_row();
  }
}

}  // namespace coalition

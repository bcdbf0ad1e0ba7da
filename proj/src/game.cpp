#include "coalition/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace coalition {

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::C: return "C";
    case Strategy::D: return "D";
    case Strategy::O: return "O";
  }
  return "?";
}

void GameParams::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (Z < 4) fail("Z must be >= 4");
  if (!in_unit(e)) fail("e must lie in [0, 1]");
  if (!in_unit(theta)) fail("theta must lie in [0, 1]");
  if (!in_unit(theta_prime)) fail("theta_prime must lie in [0, 1]");
  if (!(c > 0.0) || !std::isfinite(c)) fail("c must be finite and > 0");
  if (!(c_c >= 0.0) || !std::isfinite(c_c)) fail("c_c must be finite and >= 0");
  if (!(g_m > 0.0 && g_m <= 1.0)) fail("g_m must lie in (0, 1]");
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) fail("alpha must be finite and >= 1");
  if (!(beta >= 0.0) || !std::isfinite(beta)) fail("beta must be finite and >= 0");
  if (!in_unit(mu)) fail("mu must lie in [0, 1]");
  // A coalition needs at least two seats; allow for the rounding of 5/Z-style inputs.
  if (Z * g_m < 2.0 - 1e-9) fail("Z * g_m must be >= 2");
}

GameParams GameParams::figure2(int Z, double alpha) {
  GameParams p;
  p.Z = Z;
  p.e = 0.5;
  p.theta = 1.0;
  p.theta_prime = 1.0;
  p.c = 1.0;
  p.c_c = 1.0;
  p.g_m = 5.0 / Z;
  p.alpha = alpha;
  p.beta = 0.1;
  p.mu = 1.0 / Z;
  p.benefit = BenefitFunction::sigmoid(100.0, 100.0, 0.75);
  return p;
}

PopulationState::PopulationState(int i_C, int i_D, int Z) : i_C_(i_C), i_D_(i_D), Z_(Z) {
  if (Z < 1 || i_C < 0 || i_D < 0 || i_C + i_D > Z) {
    std::ostringstream msg;
    msg << "invalid composition (i_C=" << i_C << ", i_D=" << i_D << ", Z=" << Z << ")";
    throw std::invalid_argument(msg.str());
  }
}

double PopulationState::x() const {
  if (i_M() == 0) throw std::domain_error("x is undefined without coalition members");
  return static_cast<double>(i_C_) / i_M();
}

StateIndex::StateIndex(int Z) : Z_(Z) {
  if (Z < 1) throw std::invalid_argument("StateIndex: Z must be >= 1");
  const std::size_t n = static_cast<std::size_t>(Z + 1) * (Z + 2) / 2;
  i_C_.reserve(n);
  i_D_.reserve(n);
  for (int c = 0; c <= Z; ++c)
    for (int d = 0; d <= Z - c; ++d) {
      i_C_.push_back(c);
      i_D_.push_back(d);
    }
}

int group_size(const GameParams& params, int i_M) {
  const double y = static_cast<double>(i_M) / params.Z;
  const double constrained = params.g_m + (1.0 - params.g_m) * std::pow(y, params.alpha);
  const double real_size = params.Z * std::min(y, constrained);
  const int rounded = static_cast<int>(std::floor(real_size + 0.5));
  return std::clamp(rounded, 2, std::max(i_M, 2));
}

EffectiveShares effective_shares(const GameParams& params, int N) {
  return {params.e / std::pow(static_cast<double>(N), params.theta_prime),
          (1.0 - params.e) / std::pow(static_cast<double>(params.Z), params.theta),
          params.kappa()};
}

namespace {

// Index k of C' = k c on the contribution grid [0, max_k]; throws otherwise.
int grid_index(const GameParams& params, double contribution, int max_k) {
  const double k = contribution / params.c;
  const double nearest = std::round(k);
  if (!(std::abs(k - nearest) <= 1e-9 * std::max(1.0, std::abs(k))) || nearest < 0 ||
      nearest > max_k) {
    std::ostringstream msg;
    msg << "contribution " << contribution << " is not on the grid {0, c, ..., " << max_k
        << "c}";
    throw std::invalid_argument(msg.str());
  }
  return static_cast<int>(nearest);
}

}  // namespace

double payoff(const GameParams& params, Strategy s, double others_contribution, int N) {
  if (N < 2) throw std::invalid_argument("payoff: coalition size must be >= 2");
  const int k = grid_index(params, others_contribution, N - 1);
  const auto sh = effective_shares(params, N);
  const double scale = N * params.c;
  const double others = k * params.c;
  switch (s) {
    case Strategy::C:
      return params.benefit(others + params.c, scale) * sh.total() - params.c - params.c_c;
    case Strategy::D:
      return params.benefit(others, scale) * sh.total() - params.c_c;
    case Strategy::O:
      return params.benefit(others, scale) * sh.eps2;
  }
  return 0.0;
}

double relative_benefit(const GameParams& params, double contribution, int N) {
  return params.benefit(contribution, N * params.c) / params.c;
}

double marginal_return(const GameParams& params, double others_contribution, int N) {
  const double scale = N * params.c;
  const double tol = 1e-9 * scale;
  if (others_contribution < -tol || others_contribution + params.c > scale + tol)
    throw std::invalid_argument("marginal_return: C' and C' + c must lie in [0, N c]");
  return (params.benefit(others_contribution + params.c, scale) -
          params.benefit(others_contribution, scale)) /
         params.c;
}

PayoffTable::PayoffTable(const GameParams& params, int n)
    : N(n),
      shares(effective_shares(params, n)),
      benefit(n + 1),
      cooperator(n),
      defector(n),
      outsider(n + 1) {
  const double scale = n * params.c;
  for (int k = 0; k <= n; ++k) benefit[k] = params.benefit(k * params.c, scale);
  const double member_share = shares.total();
  for (int k = 0; k < n; ++k) {
    cooperator[k] = benefit[k + 1] * member_share - params.c - params.c_c;
    defector[k] = benefit[k] * member_share - params.c_c;
  }
  for (int k = 0; k <= n; ++k) outsider[k] = benefit[k] * shares.eps2;
}

}  // namespace coalition

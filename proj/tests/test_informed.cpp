#include <cmath>
#include <random>
#include <vector>

#include "coalition/deterministic.hpp"
#include "coalition/informed.hpp"
#include "doctest.h"

using namespace coalition;

namespace {

GameParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  GameParams p;
  p.Z = 20 + static_cast<int>(u(rng) * 80);
  p.e = u(rng);
  p.theta = u(rng);
  p.theta_prime = u(rng);
  p.c = 0.2 + u(rng);
  p.c_c = 2 * u(rng);
  p.g_m = 0.5;
  p.benefit = BenefitFunction::sigmoid(100, 10 + 90 * u(rng), 0.2 + 0.7 * u(rng));
  return p;
}

}  // namespace

TEST_CASE("marginal gains examples") {
  GameParams p;
  p.Z = 100;
  p.e = 0.5;
  p.c = 1;
  p.c_c = 1;
  p.benefit = BenefitFunction::linear(0.0);
  auto g = marginal_gains(p, 3, 10);
  CHECK(g.d_CD == -1.0);
  CHECK(g.d_DO == -1.0);
  CHECK(g.d_CO == -2.0);

  p.benefit = BenefitFunction::linear(40.0);
  g = marginal_gains(p, 4, 10);
  CHECK(g.d_CD == doctest::Approx(1.2).epsilon(1e-13));
  CHECK(g.d_CD == doctest::Approx(payoff(p, Strategy::C, 4, 10) - payoff(p, Strategy::D, 4, 10)));

  // R (eps1 + eps2) = 1 exactly puts d_CD on zero.
  p.benefit = BenefitFunction::linear(1.0 / 0.055);
  CHECK(classify_state(p, 2, 10).signs[0] == Sign::zero);
  CHECK_THROWS_AS(marginal_gains(p, 10, 10), std::invalid_argument);
}

TEST_CASE("telescoping and agreement with payoff differences") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_params(rng);
    const int N = std::uniform_int_distribution<int>(2, p.Z)(rng);
    const int k = std::uniform_int_distribution<int>(0, N - 1)(rng);
    const auto g = marginal_gains(p, k * p.c, N);
    const double C = payoff(p, Strategy::C, k * p.c, N);
    const double D = payoff(p, Strategy::D, k * p.c, N);
    const double O = payoff(p, Strategy::O, k * p.c, N);
    CHECK(std::abs(g.d_CO - (g.d_CD + g.d_DO)) < 1e-12);
    CHECK(std::abs(g.d_CD - (C - D)) < 1e-12);
    CHECK(std::abs(g.d_DO - (D - O)) < 1e-12);
    CHECK(std::abs(g.d_CO - (C - O)) < 1e-12);
  }
}

TEST_CASE("label A is exactly conditions i and ii") {
  std::mt19937_64 rng(6);
  int labelled_A = 0, labelled_B = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    auto p = random_params(rng);
    const int N = std::uniform_int_distribution<int>(2, 12)(rng);
    const int k = std::uniform_int_distribution<int>(0, N - 1)(rng);
    const double Cp = k * p.c;
    const auto sh = effective_shares(p, N);
    const double R = marginal_return(p, Cp, N);
    const double b_next = relative_benefit(p, Cp + p.c, N);
    const bool cond_i = R > 1.0 / sh.total();
    const bool cond_ii = b_next * sh.eps1 > 1.0 - R * sh.eps2 + sh.kappa;
    const auto s = classify_state(p, Cp, N);
    const auto g = marginal_gains(p, Cp, N);
    const bool sign_A = g.d_CD > 0 && g.d_CO > 0;
    CHECK((s.label == 'A') == sign_A);
    if (std::abs(g.d_CD) > 1e-9 && std::abs(g.d_CO) > 1e-9) CHECK((s.label == 'A') == (cond_i && cond_ii));
    if (s.label == 'B') CHECK((g.d_CD < 0 && g.d_DO > 0));
    labelled_A += s.label == 'A';
    labelled_B += s.label == 'B';
  }
  CHECK(labelled_A > 0);
  CHECK(labelled_B > 0);
}

TEST_CASE("all-negative triple has no label") {
  GameParams p;
  p.Z = 50;
  p.benefit = BenefitFunction::linear(0.0);
  const auto s = classify_state(p, 0, 5);
  CHECK(s.signs == std::array{Sign::negative, Sign::negative, Sign::negative});
  CHECK_FALSE(s.label.has_value());
}

TEST_CASE("informed minus uninformed is the full information cost") {
  for (double alpha : {1.0, 2.0, 4.0, 8.0}) {
    const auto p = GameParams::figure2(30, alpha);
    for (int c = 1; c < 30; ++c)
      for (int d = 1; c + d < 30; ++d) {
        const PopulationState s(c, d, 30);
        const auto inf = informed_field(p, s);
        const auto un = replicator_field(p, s);
        const auto K = k_exact(p, s);
        REQUIRE(inf.has_value());
        REQUIRE(K.has_value());
        const double x = s.x();
        REQUIRE(std::abs(inf->x_dot - un.x_dot - x * (1 - x) * p.c * *K->K_full()) < 1e-10);
      }
  }
}

TEST_CASE("leading informed term at alpha = 1 has the sign of <R> eps - 1") {
  const int Z = 40;
  const auto p = GameParams::figure2(Z, 1.0);
  // Golden: states where the (1-y)-weighted terms flip the sign of the full
  // informed field, from an independent evaluation.
  const std::vector<std::pair<int, int>> flipped{{1, 1},  {2, 2},  {3, 2},  {5, 3},  {6, 3},
                                                 {7, 1},  {8, 4},  {9, 4},  {10, 2}, {11, 5},
                                                 {12, 5}, {13, 3}, {15, 6}, {18, 7}, {21, 8}};
  std::vector<std::pair<int, int>> found;
  int total = 0;
  for (int c = 1; c < Z; ++c)
    for (int d = 1; c + d < Z; ++d) {
      const PopulationState s(c, d, Z);
      const auto f = informed_field(p, s);
      const auto sh = effective_shares(p, group_size(p, s.i_M()));
      const double gap = mean_return(p, s) * sh.total() - 1.0;
      ++total;
      CHECK((f->x_dot_leading > 0) == (gap > 0));
      if ((f->x_dot > 0) != (gap > 0)) found.emplace_back(c, d);
    }
  CHECK(total == 741);
  CHECK(found == flipped);
}

TEST_CASE("informed field is beta-free and undefined off the interior") {
  auto p = GameParams::figure2(25, 3.0);
  const PopulationState s(6, 7, 25);
  const auto a = informed_field(p, s);
  p.beta = 3.7;
  const auto b = informed_field(p, s);
  CHECK(a->x_dot == b->x_dot);
  CHECK(a->y_dot == b->y_dot);
  CHECK_FALSE(informed_field(p, PopulationState(0, 5, 25)).has_value());
  CHECK_FALSE(informed_field(p, PopulationState(10, 15, 25)).has_value());
}

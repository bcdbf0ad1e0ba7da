#include <cmath>
#include <sstream>

#include "coalition/csv.hpp"
#include "coalition/deterministic.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace coalition;

namespace {

double mean_gap(const GameParams& p, const PopulationState& s) {
  const auto sh = effective_shares(p, group_size(p, s.i_M()));
  return mean_return(p, s) * sh.total();
}

}  // namespace

TEST_CASE("boundary zeros") {
  const auto p = GameParams::figure2(30, 2.0);
  CHECK(replicator_field(p, PopulationState(0, 10, 30)).x_dot == 0.0);
  CHECK(replicator_field(p, PopulationState(10, 0, 30)).x_dot == 0.0);
  CHECK(replicator_field(p, PopulationState(10, 20, 30)).y_dot == 0.0);
  const auto empty = replicator_field(p, PopulationState(0, 0, 30));
  CHECK(empty.x_dot == 0.0);
  CHECK(empty.y_dot == 0.0);
}

TEST_CASE("alpha = 1: cooperation declines at exactly x(1-x)c") {
  for (int Z : {20, 60}) {
    const auto p = GameParams::figure2(Z, 1.0);
    for (int c = 1; c < Z; ++c)
      for (int d = 1; c + d < Z; ++d) {
        const PopulationState s(c, d, Z);
        const double x = s.x();
        const auto v = replicator_field(p, s);
        REQUIRE(std::abs(v.x_dot + x * (1 - x) * p.c) < 1e-12);
        const auto K = k_exact(p, s);
        REQUIRE(std::abs(K->K_exact - mean_gap(p, s)) < 1e-10);
      }
  }
}

TEST_CASE("x_dot from the subset oracle at Z = 12") {
  GameParams p;
  p.Z = 12;
  p.g_m = 2.0 / 12;
  p.alpha = 2;
  const PopulationState s(4, 4, 12);
  const auto g = oracle::subset_fitness(p, 4, 4);
  CHECK(std::abs(replicator_field(p, s).x_dot - 0.25 * (g.f_C - g.f_D)) < 1e-10);
}

TEST_CASE("means of R and b") {
  auto p = GameParams::figure2(40, 2.0);
  p.benefit = BenefitFunction::linear(1.0);
  for (int c = 0; c <= 20; c += 5) CHECK(mean_return(p, PopulationState(c, 20 - c, 40)) == doctest::Approx(1.0));
  p.benefit = BenefitFunction::linear(0.0);
  CHECK(mean_return(p, PopulationState(5, 5, 40)) == 0.0);
  CHECK(mean_benefit(p, PopulationState(5, 5, 40)) == 0.0);

  p = GameParams::figure2(40, 1.0);
  const int m = 16;
  CHECK(mean_benefit(p, PopulationState(m, 0, 40)) ==
        doctest::Approx(p.benefit(m * p.c, m * p.c) / p.c).epsilon(1e-13));
  CHECK_THROWS_AS(mean_return(p, PopulationState(1, 0, 40)), std::domain_error);

  // Near the 3/4 threshold with a small coalition the return is much larger
  // than with no cooperators.
  p = GameParams::figure2(60, 4.0);
  const PopulationState none(0, 20, 60), near(15, 5, 60);
  CHECK(mean_return(p, near) > 2 * mean_return(p, none));
}

TEST_CASE("y_dot decomposition") {
  // Without spillover (e = 1) the membership equation is exact.
  for (double alpha : {1.0, 2.0, 5.0}) {
    auto p = GameParams::figure2(40, alpha);
    p.e = 1.0;
    for (int c = 1; c < 40; c += 2)
      for (int d = 1; c + d < 40; d += 3) {
        const PopulationState s(c, d, 40);
        const auto sh = effective_shares(p, group_size(p, s.i_M()));
        const double y = s.y();
        const double rebuilt = y * (1 - y) * p.c * (mean_benefit(p, s) * sh.eps1 - s.x() - sh.kappa);
        REQUIRE(std::abs(replicator_field(p, s).y_dot - rebuilt) < 1e-10);
      }
  }
}

TEST_CASE("closure identity and K bookkeeping") {
  for (double alpha : {1.0, 3.0, 8.0}) {
    const auto p = GameParams::figure2(40, alpha);
    const FitnessTable table(p);
    for (int c = 1; c < 40; ++c)
      for (int d = 1; c + d < 40; ++d) {
        const PopulationState s(c, d, 40);
        const auto K = k_exact(p, s);
        const auto Kt = k_exact(p, table, s);
        const double x = s.x();
        REQUIRE(K->K_exact == Kt->K_exact);
        REQUIRE(*K->K_dropped == *Kt->K_dropped);
        REQUIRE(std::abs(replicator_field(p, s).x_dot -
                         x * (1 - x) * p.c * (mean_gap(p, s) - 1 - K->K_exact)) < 1e-10);
      }
  }
  const auto p = GameParams::figure2(40, 2.0);
  CHECK_FALSE(k_exact(p, PopulationState(0, 5, 40)).has_value());
  CHECK_FALSE(k_exact(p, PopulationState(5, 0, 40)).has_value());
  const auto edge = k_exact(p, PopulationState(20, 20, 40));
  REQUIRE(edge.has_value());
  CHECK_FALSE(edge->K_dropped.has_value());
}

TEST_CASE("K for growing alpha") {
  // Golden values, Z = 60. At (0.5, 0.5) K itself grows with alpha because
  // <R> eps does; the fraction of it lost to the single-coalition view shrinks.
  const PopulationState s(15, 15, 60);
  const double K_golden[] = {4.8601e-10, 2.7086e-3, 0.17036, 0.37162};
  const double alphas[] = {1.0, 2.0, 4.0, 8.0};
  double prev_ratio = INFINITY;
  for (int i = 0; i < 4; ++i) {
    const auto p = GameParams::figure2(60, alphas[i]);
    const double K = k_exact(p, s)->K_exact;
    const double ratio = K / mean_gap(p, s);
    CHECK(K == doctest::Approx(K_golden[i]).epsilon(1e-4));
    CHECK(ratio <= prev_ratio + 1e-12);
    prev_ratio = ratio;
  }

  const auto p = GameParams::figure2(60, 8.0);
  const std::pair<int, int> moderate[] = {{18, 6}, {12, 12}, {15, 15}, {24, 6}, {30, 10}};
  const double ratio_golden[] = {0.1665, 0.1750, 0.1385, 0.1460, 0.1354};
  for (int i = 0; i < 5; ++i) {
    const PopulationState t(moderate[i].first, moderate[i].second, 60);
    const double ratio = k_exact(p, t)->K_exact / mean_gap(p, t);
    CHECK(ratio < 0.2);
    CHECK(ratio == doctest::Approx(ratio_golden[i]).epsilon(1e-3));
  }
}

TEST_CASE("flow field csv") {
  const auto p = GameParams::figure2(12, 2.0);
  const auto field = flow_field(p);
  CHECK(field.size() == 55);
  std::ostringstream out;
  write_flow_csv(out, field);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "i_C,i_D,x,y,x_dot,y_dot,mean_R,mean_b,K_exact,K_dropped");
  int rows = 0;
  while (std::getline(in, line)) {
    CHECK(csv::split(line).size() == 10);
    ++rows;
  }
  CHECK(rows == 55);
}

TEST_CASE("continuous field reproduces the lattice") {
  const auto p = GameParams::figure2(40, 4.0);
  const ContinuousField F(p);
  for (int c = 1; c < 40; c += 3)
    for (int d = 1; c + d <= 40; d += 2) {
      const PopulationState s(c, d, 40);
      const auto a = F(s.x(), s.y());
      const auto b = replicator_field(p, s);
      CHECK(a.x_dot == doctest::Approx(b.x_dot).epsilon(1e-12).scale(1));
      CHECK(a.y_dot == doctest::Approx(b.y_dot).epsilon(1e-12).scale(1));
    }
}

TEST_CASE("jacobian classification") {
  std::array<std::complex<double>, 2> ev;
  CHECK(classify_jacobian({-1, 0, 0, -2}, &ev) == FixedPointKind::stable_node);
  CHECK(ev[0].real() == -1.0);
  CHECK(ev[1].real() == -2.0);
  CHECK(classify_jacobian({1, 0, 0, 2}) == FixedPointKind::unstable_node);
  CHECK(classify_jacobian({1, 0, 0, -2}) == FixedPointKind::saddle);
  CHECK(classify_jacobian({-0.1, -1, 1, -0.1}, &ev) == FixedPointKind::stable_spiral);
  CHECK(ev[0].imag() == doctest::Approx(1.0));
  CHECK(classify_jacobian({0.1, -1, 1, 0.1}) == FixedPointKind::unstable_spiral);
  CHECK(classify_jacobian({0, -1, 1, 0}) == FixedPointKind::center);
}

TEST_CASE("no interior fixed point at alpha = 1") {
  for (int Z : {20, 24, 30, 60, 100}) {
    const auto p = GameParams::figure2(Z, 1.0);
    const ContinuousField F(p);
    // Off the lattice too, including the small membership levels.
    for (double y = F.y_min(); y <= 1.0; y += 0.013)
      for (double x = 0.0; x <= 1.0; x += 0.037)
        REQUIRE(std::abs(F(x, y).x_dot + x * (1 - x) * p.c) < 1e-12);
    CHECK(find_fixed_points(F, 40).empty());
  }
  CHECK_THROWS_AS(find_fixed_points(GameParams::figure2(60, 1.0), 10), std::invalid_argument);
}

TEST_CASE("fixed points are stable under grid refinement") {
  for (double alpha : {4.0, 8.0}) {
    const ContinuousField F(GameParams::figure2(60, alpha));
    const auto a = find_fixed_points(F, 40);
    const auto b = find_fixed_points(F, 80);
    REQUIRE(!a.empty());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(std::abs(a[i].x - b[i].x) < 1e-4);
      CHECK(std::abs(a[i].y - b[i].y) < 1e-4);
      CHECK(a[i].kind == b[i].kind);
      CHECK(a[i].residual < 1e-8);
    }
  }
}

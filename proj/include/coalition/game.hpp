#pragma once

// Model constants, population compositions, benefit functions and the
// per-encounter payoffs of cooperators (C), defectors (D) and outsiders (O).

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace coalition {

enum class Strategy { C, D, O };

const char* to_string(Strategy s);

// Total-contribution -> benefit map B(C). Every evaluation receives the
// full-cooperation contribution scale N*c of the coalition at hand, so a
// normalized shape can follow the group size as it changes with membership.
class BenefitFunction {
 public:
  enum class Kind { linear, step, sigmoid, tabulated };

  // B(C) = slope * C.
  static BenefitFunction linear(double slope = 1.0);
  // B(C) = amplitude once C reaches threshold * scale, 0 below.
  static BenefitFunction step(double amplitude, double threshold);
  // B(C) = amplitude (F(C) - F(0)) / (F(Nc) - F(0)),
  // F(C) = 1 / (1 + exp(steepness (C / Nc - threshold))).
  static BenefitFunction sigmoid(double amplitude = 100.0, double steepness = 100.0,
                                 double threshold = 0.75);
  // Piecewise-linear through (C, B) knots; C strictly increasing, B >= 0.
  // Evaluating outside [C_first, C_last] throws std::domain_error.
  static BenefitFunction tabulated(std::vector<std::pair<double, double>> knots);
  // Two-column CSV (C, B) with a header row.
  static BenefitFunction from_csv(const std::filesystem::path& path);

  BenefitFunction() : BenefitFunction(sigmoid()) {}

  double operator()(double contribution, double scale) const;

  Kind kind() const { return kind_; }
  double amplitude() const { return a_; }
  double steepness() const { return b_; }
  double threshold() const { return t_; }
  double slope() const { return a_; }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

  // Stable one-line description, used in manifests.
  std::string describe() const;

 private:
  BenefitFunction(Kind kind, double a, double b, double t)
      : kind_(kind), a_(a), b_(b), t_(t) {}

  Kind kind_;
  double a_ = 0.0;
  double b_ = 0.0;
  double t_ = 0.0;
  std::vector<std::pair<double, double>> knots_;
};

const char* to_string(BenefitFunction::Kind k);

struct GameParams {
  int Z = 100;               // population size
  double e = 0.5;            // excludable (club) fraction of the benefit
  double theta = 1.0;        // congestibility of the public spillover
  double theta_prime = 1.0;  // congestibility of the club share
  double c = 1.0;            // cost of cooperation
  double c_c = 1.0;          // cost of coalition membership
  double g_m = 0.05;         // minimum group fraction
  double alpha = 1.0;        // coalition-constraint exponent
  double beta = 0.1;         // selection intensity
  double mu = 0.01;          // mutation probability
  BenefitFunction benefit = BenefitFunction::sigmoid();

  // Throws std::invalid_argument naming the first violated constraint.
  void validate() const;

  // c_c / c
  double kappa() const { return c_c / c; }

  // Parameter set of the coalition-structure figure: g_m = 5/Z, e = 0.5,
  // c = c_c = 1, beta = 0.1, mu = 1/Z, normalized sigmoid benefit.
  // theta = theta' = 1 is a modelling choice, not part of that set.
  static GameParams figure2(int Z = 100, double alpha = 1.0);
};

class PopulationState {
 public:
  // Throws std::invalid_argument unless 0 <= i_C, 0 <= i_D, i_C + i_D <= Z.
  PopulationState(int i_C, int i_D, int Z);

  int i_C() const { return i_C_; }
  int i_D() const { return i_D_; }
  int Z() const { return Z_; }
  int i_M() const { return i_C_ + i_D_; }
  int i_O() const { return Z_ - i_C_ - i_D_; }
  double y() const { return static_cast<double>(i_M()) / Z_; }
  bool has_members() const { return i_M() > 0; }
  // Fraction of cooperators among members; throws std::domain_error when
  // there are no members.
  double x() const;
  // Every strategy present.
  bool interior() const { return i_C_ >= 1 && i_D_ >= 1 && i_O() >= 1; }

  friend bool operator==(const PopulationState&, const PopulationState&) = default;

 private:
  int i_C_;
  int i_D_;
  int Z_;
};

// Bijection between compositions (i_C, i_D), i_C + i_D <= Z, and
// 0 .. (Z+1)(Z+2)/2 - 1, ordered by i_C then i_D.
class StateIndex {
 public:
  explicit StateIndex(int Z);

  int Z() const { return Z_; }
  std::size_t size() const { return i_C_.size(); }
  std::size_t operator()(int i_C, int i_D) const {
    return static_cast<std::size_t>(i_C) * (Z_ + 1) - static_cast<std::size_t>(i_C) * (i_C - 1) / 2 +
           static_cast<std::size_t>(i_D);
  }
  int i_C(std::size_t idx) const { return i_C_[idx]; }
  int i_D(std::size_t idx) const { return i_D_[idx]; }
  PopulationState state(std::size_t idx) const { return {i_C_[idx], i_D_[idx], Z_}; }

 private:
  int Z_;
  std::vector<int> i_C_;
  std::vector<int> i_D_;
};

struct EffectiveShares {
  double eps1;   // club share per member, e / N^theta'
  double eps2;   // public spillover share, (1 - e) / Z^theta
  double kappa;  // c_c / c
  double total() const { return eps1 + eps2; }
};

// Coalition size for i_M members: Z min{y, g_m + (1 - g_m) y^alpha}, rounded
// half up and clamped to [2, max(i_M, 2)].
int group_size(const GameParams& params, int i_M);

EffectiveShares effective_shares(const GameParams& params, int N);

// Payoff of one encounter in a coalition of N when the other N-1 members
// contribute others_contribution in total. others_contribution must lie on
// the grid {0, c, ..., (N-1)c}; anything else throws std::invalid_argument.
double payoff(const GameParams& params, Strategy s, double others_contribution, int N);

// b(C') = B(C') / c
double relative_benefit(const GameParams& params, double contribution, int N);

// R(C') = (B(C' + c) - B(C')) / c. Both points must lie in [0, N c].
double marginal_return(const GameParams& params, double others_contribution, int N);

// Payoffs tabulated on the contribution grid for a fixed coalition size:
// benefit[k] = B(k c) for k = 0..N, and the three payoffs for k = 0..N-1
// (outsider also at k = N). Shared by every averaging routine.
struct PayoffTable {
  int N = 0;
  EffectiveShares shares{};
  std::vector<double> benefit;     // N + 1 entries
  std::vector<double> cooperator;  // Pi_C(k c), N entries
  std::vector<double> defector;    // Pi_D(k c), N entries
  std::vector<double> outsider;    // Pi_O(k c), N + 1 entries

  PayoffTable(const GameParams& params, int N);
};

}  // namespace coalition

#include "coalition/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <stdexcept>

#include "coalition/kernels.hpp"
#include "coalition/parallel.hpp"

namespace coalition {

namespace {

constexpr int kLogFactorialTable = 1 << 14;

const std::vector<double>& log_factorial_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kLogFactorialTable);
    for (int n = 0; n < kLogFactorialTable; ++n) t[n] = std::lgamma(n + 1.0);
    return t;
  }();
  return table;
}

double log_choose(int n, int k) { return log_factorial(n) - log_factorial(k) - log_factorial(n - k); }

}  // namespace

double log_factorial(int n) {
  if (n < 0) throw std::invalid_argument("log_factorial: negative argument");
  if (n < kLogFactorialTable) return log_factorial_table()[n];
  int sign = 0;
  return ::lgamma_r(n + 1.0, &sign);
}

void HypergeomSpec::validate() const {
  if (z < 0 || n < 0 || i < 0 || n > z || i > z) {
    std::ostringstream msg;
    msg << "invalid hypergeometric spec (z=" << z << ", n=" << n << ", i=" << i << ")";
    throw std::invalid_argument(msg.str());
  }
}

double hypergeom_pmf(const HypergeomSpec& spec, int k) {
  spec.validate();
  if (k < spec.k_min() || k > spec.k_max()) return 0.0;
  return std::exp(log_choose(spec.i, k) + log_choose(spec.z - spec.i, spec.n - k) -
                  log_choose(spec.z, spec.n));
}

std::vector<double> hypergeom_row(const HypergeomSpec& spec, int length) {
  spec.validate();
  std::vector<double> row(static_cast<std::size_t>(std::max(length, 0)), 0.0);
  const int lo = spec.k_min(), hi = spec.k_max();
  // Start at the mode in log space and walk outwards with the exact term
  // ratio; normalizing afterwards cancels the rounding of the start value.
  const int mode = std::clamp(static_cast<int>((spec.n + 1.0) * (spec.i + 1.0) / (spec.z + 2.0)), lo, hi);
  std::vector<double> p(static_cast<std::size_t>(hi - lo + 1));
  p[mode - lo] = std::exp(log_choose(spec.i, mode) + log_choose(spec.z - spec.i, spec.n - mode) -
                          log_choose(spec.z, spec.n));
  const double rest = spec.z - spec.i - spec.n;
  for (int k = mode; k < hi; ++k)
    p[k + 1 - lo] = p[k - lo] * ((spec.i - k) * static_cast<double>(spec.n - k)) /
                    ((k + 1.0) * (rest + k + 1.0));
  for (int k = mode; k > lo; --k)
    p[k - 1 - lo] = p[k - lo] * (k * (rest + k)) / ((spec.i - k + 1.0) * (spec.n - k + 1.0));
  double total = 0.0;
  for (double v : p) total += v;
  for (int k = lo; k <= std::min(hi, length - 1); ++k) row[k] = p[k - lo] / total;
  return row;
}

namespace {

FitnessTriple fitness_with_table(int i_C, int i_D, const PayoffTable& table) {
  const int i_M = i_C + i_D;
  const int N = table.N;
  FitnessTriple f;
  if (i_C >= 1) {
    const auto row = hypergeom_row({i_M - 1, N - 1, i_C - 1}, N);
    f.f_C = kernels::dot(row, table.cooperator);
    const std::span<const double> shifted(table.outsider.data() + 1, N);
    f.f_O += static_cast<double>(i_C) / i_M * kernels::dot(row, shifted);
  }
  if (i_D >= 1) {
    const auto row = hypergeom_row({i_M - 1, N - 1, i_C}, N);
    f.f_D = kernels::dot(row, table.defector);
    const std::span<const double> unshifted(table.outsider.data(), N);
    f.f_O += static_cast<double>(i_D) / i_M * kernels::dot(row, unshifted);
  }
  return f;
}

}  // namespace

FitnessTriple fitness(const GameParams& params, const PopulationState& state) {
  return fitness_at(params, state.i_C(), state.i_D());
}

FitnessTriple fitness_at(const GameParams& params, int i_C, int i_D,
                         std::optional<int> group_size_override) {
  if (i_C < 0 || i_D < 0 || i_C + i_D > params.Z) {
    std::ostringstream msg;
    msg << "fitness_at: composition (" << i_C << ", " << i_D << ") outside Z=" << params.Z;
    throw std::invalid_argument(msg.str());
  }
  const int i_M = i_C + i_D;
  if (i_M < 2) return {};
  int N = group_size(params, i_M);
  if (group_size_override) {
    if (*group_size_override < 2 || *group_size_override > i_M)
      throw std::invalid_argument("fitness_at: group size override must lie in [2, i_M]");
    N = *group_size_override;
  }
  return fitness_with_table(i_C, i_D, PayoffTable(params, N));
}

FitnessTable::FitnessTable(const GameParams& params)
    : index_(params.Z), values_(index_.size()) {
  const int Z = params.Z;
  // One payoff table per membership level; rows are independent.
  parallel_for(static_cast<std::size_t>(Z + 1), [&](std::size_t m) {
    const int i_M = static_cast<int>(m);
    if (i_M < 2) return;
    const PayoffTable table(params, group_size(params, i_M));
    for (int i_C = 0; i_C <= i_M; ++i_C)
      values_[index_(i_C, i_M - i_C)] = fitness_with_table(i_C, i_M - i_C, table);
  });
}

}  // namespace coalition

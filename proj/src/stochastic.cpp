#include "coalition/stochastic.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "coalition/csv.hpp"
#include "coalition/errors.hpp"
#include "coalition/kernels.hpp"
#include "coalition/parallel.hpp"

namespace coalition {

double imitation_probability(double beta, double f_X, double f_Y) {
  const double a = beta * (f_X - f_Y);
  if (a > 700.0) return 0.0;
  if (a < -700.0) return 1.0;
  return 1.0 / (1.0 + std::exp(a));
}

double imitation_probability(const GameParams& params, double f_X, double f_Y) {
  return imitation_probability(params.beta, f_X, f_Y);
}

const char* to_string(MutationForm m) {
  return m == MutationForm::scaled ? "scaled" : "literal";
}

const char* to_string(Move m) {
  static constexpr const char* names[] = {"CD", "CO", "DC", "DO", "OC", "OD"};
  return names[static_cast<int>(m)];
}

namespace {

constexpr int kSource[6] = {0, 0, 1, 1, 2, 2};
constexpr int kTarget[6] = {1, 2, 0, 2, 0, 1};

}  // namespace

double MarkovModel::self_loop(std::size_t idx) const {
  double out = 0.0;
  for (int m = 0; m < 6; ++m) out += moves_[idx * 6 + m];
  return 1.0 - out;
}

double MarkovModel::transition(std::size_t from, std::size_t to) const {
  const std::size_t W = kernels::kEllWidth;
  double total = 0.0;
  for (std::size_t s = 0; s < W; ++s)
    if (static_cast<std::size_t>(cols_[from * W + s]) == to) total += vals_[from * W + s];
  return total;
}

MarkovModel build_chain(const GameParams& params, const ChainOptions& options) {
  params.validate();
  const std::size_t S = static_cast<std::size_t>(params.Z + 1) * (params.Z + 2) / 2;
  if (S > options.max_states) {
    std::ostringstream msg;
    msg << "chain with Z=" << params.Z << " has " << S << " states, above the limit of "
        << options.max_states;
    throw CapacityError(msg.str());
  }
  MarkovModel model(params, options);
  const FitnessTable table(params);
  const StateIndex& index = model.index_;
  const int Z = params.Z;
  const double mu = params.mu;

  model.moves_.assign(S * 6, 0.0);
  parallel_for(S, [&](std::size_t idx) {
    const int n[3] = {index.i_C(idx), index.i_D(idx), Z - index.i_C(idx) - index.i_D(idx)};
    const auto& ft = table[idx];
    const double f[3] = {ft.f_C, ft.f_D, ft.f_O};
    double outflow = 0.0;
    for (int m = 0; m < 6; ++m) {
      const int X = kSource[m], Y = kTarget[m];
      if (n[X] == 0) continue;
      const double p = imitation_probability(params.beta, f[X], f[Y]);
      const double meet = static_cast<double>(n[Y]) / (Z - 1);
      double t;
      if (options.mutation_form == MutationForm::scaled)
        t = static_cast<double>(n[X]) / Z * ((1.0 - mu) * meet * p + mu / 2.0);
      else
        t = static_cast<double>(n[X]) / Z * meet * p * (1.0 - mu) + mu / 2.0;
      model.moves_[idx * 6 + m] = t;
      outflow += t;
    }
    if (outflow > 1.0 + 1e-12) {
      std::ostringstream msg;
      msg << "transition probabilities out of (" << n[0] << ", " << n[1] << ") sum to " << outflow
          << " > 1";
      throw std::domain_error(msg.str());
    }
  });

  const std::size_t W = kernels::kEllWidth;
  model.cols_.assign(S * W, 0);
  model.vals_.assign(S * W, 0.0);
  model.t_cols_.assign(S * W, 0);
  model.t_vals_.assign(S * W, 0.0);
  std::vector<std::size_t> fill(S, 0);
  auto add_incoming = [&](std::size_t to, std::size_t from, double v) {
    model.t_cols_[to * W + fill[to]] = static_cast<std::int32_t>(from);
    model.t_vals_[to * W + fill[to]] = v;
    ++fill[to];
  };
  for (std::size_t r = 0; r < S; ++r) {
    std::size_t slot = 0;
    const double self = model.self_loop(r);
    model.cols_[r * W] = static_cast<std::int32_t>(r);
    model.vals_[r * W] = self;
    add_incoming(r, r, self);
    ++slot;
    for (int m = 0; m < 6; ++m) {
      const double t = model.moves_[r * 6 + m];
      if (t == 0.0) continue;
      const std::size_t to = index(index.i_C(r) + kMoveDelta[m][0], index.i_D(r) + kMoveDelta[m][1]);
      model.cols_[r * W + slot] = static_cast<std::int32_t>(to);
      model.vals_[r * W + slot] = t;
      ++slot;
      add_incoming(to, r, t);
    }
    // Padding keeps a valid column (r itself) with weight 0.
    for (; slot < W; ++slot) model.cols_[r * W + slot] = static_cast<std::int32_t>(r);
  }
  for (std::size_t r = 0; r < S; ++r)
    for (std::size_t s = fill[r]; s < W; ++s) model.t_cols_[r * W + s] = static_cast<std::int32_t>(r);
  return model;
}

namespace {

bool reaches_all(std::size_t S, std::span<const std::int32_t> cols, std::span<const double> vals) {
  const std::size_t W = kernels::kEllWidth;
  std::vector<char> seen(S, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t r = stack.back();
    stack.pop_back();
    for (std::size_t s = 0; s < W; ++s) {
      if (vals[r * W + s] <= 0.0) continue;
      const auto to = static_cast<std::size_t>(cols[r * W + s]);
      if (!seen[to]) {
        seen[to] = 1;
        ++count;
        stack.push_back(to);
      }
    }
  }
  return count == S;
}

std::vector<double> step(const MarkovModel& model, std::span<const double> pi) {
  std::vector<double> next(pi.size());
  kernels::ell_product(model.ell_columns_transposed(), model.ell_values_transposed(), pi, next);
  return next;
}

}  // namespace

bool is_irreducible(const MarkovModel& model) {
  return reaches_all(model.size(), model.ell_columns(), model.ell_values()) &&
         reaches_all(model.size(), model.ell_columns_transposed(), model.ell_values_transposed());
}

double residual(const MarkovModel& model, std::span<const double> pi) {
  return kernels::max_abs_diff(step(model, pi), pi);
}

StationarySummary summarize(const StateIndex& index, std::span<const double> pi) {
  StationarySummary s;
  const int Z = index.Z();
  double mx = 0, mx2 = 0, my = 0, my2 = 0, members = 0;
  for (std::size_t k = 0; k < pi.size(); ++k) {
    const int iM = index.i_C(k) + index.i_D(k);
    const double y = static_cast<double>(iM) / Z;
    my += pi[k] * y;
    my2 += pi[k] * y * y;
    if (iM == 0) continue;
    const double x = static_cast<double>(index.i_C(k)) / iM;
    members += pi[k];
    mx += pi[k] * x;
    mx2 += pi[k] * x * x;
  }
  s.member_mass = members;
  s.mean_y = my;
  s.sd_y = std::sqrt(std::max(0.0, my2 - my * my));
  if (members > 0) {
    s.mean_x = mx / members;
    s.sd_x = std::sqrt(std::max(0.0, mx2 / members - s.mean_x * s.mean_x));
  }
  return s;
}

StationaryResult power_iteration(std::span<const std::int32_t> t_cols, std::span<const double> t_vals,
                                 const SolverOptions& options) {
  const std::size_t S = t_cols.size() / kernels::kEllWidth;
  std::vector<double> pi(S, 1.0 / S), next(S);
  const std::size_t every = std::max<std::size_t>(options.check_every, 1);

  double res = std::numeric_limits<double>::infinity();
  std::size_t it = 0;
  while (it < options.max_iterations) {
    kernels::ell_product(t_cols, t_vals, pi, next);
    ++it;
    if (it % every == 0) {
      kernels::scale(next, 1.0 / kernels::sum(next));
      res = kernels::max_abs_diff(next, pi);
      pi.swap(next);
      if (res < options.tolerance) break;
    } else {
      pi.swap(next);
    }
  }
  kernels::scale(pi, 1.0 / kernels::sum(pi));
  kernels::ell_product(t_cols, t_vals, pi, next);
  res = kernels::max_abs_diff(next, pi);
  if (!(res < options.tolerance)) {
    std::ostringstream msg;
    msg << "stationary: no convergence after " << it << " iterations (residual " << res << ")";
    throw ConvergenceError(msg.str(), res);
  }
  StationaryResult r;
  r.pi = std::move(pi);
  r.residual = res;
  r.iterations = it;
  return r;
}

StationaryResult stationary(const MarkovModel& model, const SolverOptions& options) {
  if (!is_irreducible(model))
    throw ConvergenceError("stationary: the chain is reducible", std::numeric_limits<double>::infinity());
  auto r = power_iteration(model.ell_columns_transposed(), model.ell_values_transposed(), options);
  r.summary = summarize(model.index(), r.pi);
  return r;
}

StationaryResult stationary_dense(const MarkovModel& model) {
  const std::size_t S = model.size();
  if (S > 2000) throw CapacityError("stationary_dense: more than 2000 states");
  const std::size_t W = kernels::kEllWidth;
  const auto cols = model.ell_columns();
  const auto vals = model.ell_values();
  // Rows of A are the balance equations sum_i pi_i T[i][j] - pi_j = 0.
  Eigen::MatrixXd A = -Eigen::MatrixXd::Identity(S, S);
  for (std::size_t r = 0; r < S; ++r)
    for (std::size_t s = 0; s < W; ++s) A(cols[r * W + s], r) += vals[r * W + s];
  A.row(S - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(S);
  b(S - 1) = 1.0;
  const Eigen::VectorXd x = A.partialPivLu().solve(b);
  StationaryResult r;
  r.pi.assign(x.data(), x.data() + S);
  r.residual = residual(model, r.pi);
  r.summary = summarize(model.index(), r.pi);
  return r;
}

std::vector<GradientPoint> selection_gradient(const MarkovModel& model) {
  const StateIndex& index = model.index();
  const int Z = index.Z();
  std::vector<GradientPoint> out(model.size());
  for (std::size_t k = 0; k < model.size(); ++k) {
    GradientPoint& g = out[k];
    g.i_C = index.i_C(k);
    g.i_D = index.i_D(k);
    const int iM = g.i_C + g.i_D;
    g.y = static_cast<double>(iM) / Z;
    if (iM > 0) g.x = static_cast<double>(g.i_C) / iM;
    double best = 0.0;
    for (int m = 0; m < 6; ++m) {
      const double p = model.move_probability(k, static_cast<Move>(m));
      g.d_iC += kMoveDelta[m][0] * p;
      g.d_iD += kMoveDelta[m][1] * p;
      if (p > best) {
        best = p;
        g.likely_move = static_cast<Move>(m);
      }
    }
    if (iM > 0) g.grad_x = (g.i_D * g.d_iC - g.i_C * g.d_iD) / (static_cast<double>(iM) * iM);
    g.grad_y = (g.d_iC + g.d_iD) / Z;
    g.speed = std::hypot(g.d_iC, g.d_iD);
  }
  return out;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) total += std::abs(p[k] - q[k]);
  return total / 2.0;
}

void write_stationary_csv(std::ostream& out, const StateIndex& index, std::span<const double> pi) {
  csv::Writer w(out, {"i_C", "i_D", "x", "y", "pi"});
  const int Z = index.Z();
  for (std::size_t k = 0; k < pi.size(); ++k) {
    const int iC = index.i_C(k), iD = index.i_D(k);
    const int iM = iC + iD;
    w << iC << iD << (iM > 0 ? static_cast<double>(iC) / iM : 0.0) << static_cast<double>(iM) / Z
      << pi[k];
    w.end_row();
  }
}

void write_gradient_csv(std::ostream& out, std::span<const GradientPoint> gradient) {
  csv::Writer w(out, {"i_C", "i_D", "x", "y", "grad_x", "grad_y", "speed"});
  for (const auto& g : gradient) {
    w << g.i_C << g.i_D << g.x << g.y << g.grad_x << g.grad_y << g.speed;
    w.end_row();
  }
}

}  // namespace coalition

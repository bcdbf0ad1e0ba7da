#include "coalition/game.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "coalition/csv.hpp"

namespace coalition {

namespace {

// 1 / (1 + exp(z)) without overflow for large |z|.
double logistic_complement(double z) {
  if (z >= 0.0) {
    const double t = std::exp(-z);
    return t / (1.0 + t);
  }
  return 1.0 / (1.0 + std::exp(z));
}

}  // namespace

const char* to_string(BenefitFunction::Kind k) {
  switch (k) {
    case BenefitFunction::Kind::linear: return "linear";
    case BenefitFunction::Kind::step: return "step";
    case BenefitFunction::Kind::sigmoid: return "sigmoid";
    case BenefitFunction::Kind::tabulated: return "tabulated";
  }
  return "?";
}

BenefitFunction BenefitFunction::linear(double slope) {
  if (!(slope >= 0.0) || !std::isfinite(slope))
    throw std::invalid_argument("linear benefit: slope must be finite and >= 0");
  return BenefitFunction(Kind::linear, slope, 0.0, 0.0);
}

BenefitFunction BenefitFunction::step(double amplitude, double threshold) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    throw std::invalid_argument("step benefit: amplitude must be finite and >= 0");
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw std::invalid_argument("step benefit: threshold must lie in [0, 1]");
  return BenefitFunction(Kind::step, amplitude, 0.0, threshold);
}

BenefitFunction BenefitFunction::sigmoid(double amplitude, double steepness, double threshold) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    throw std::invalid_argument("sigmoid benefit: amplitude must be finite and >= 0");
  if (!(steepness > 0.0) || !std::isfinite(steepness))
    throw std::invalid_argument("sigmoid benefit: steepness must be finite and > 0");
  if (!std::isfinite(threshold))
    throw std::invalid_argument("sigmoid benefit: threshold must be finite");
  return BenefitFunction(Kind::sigmoid, amplitude, steepness, threshold);
}

BenefitFunction BenefitFunction::tabulated(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw std::invalid_argument("tabulated benefit: need at least two knots");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const auto [c, b] = knots[i];
    if (!std::isfinite(c) || !std::isfinite(b))
      throw std::invalid_argument("tabulated benefit: non-finite knot");
    if (b < 0.0) throw std::invalid_argument("tabulated benefit: B must be >= 0");
    if (i > 0 && !(c > knots[i - 1].first))
      throw std::invalid_argument("tabulated benefit: C must be strictly increasing");
  }
  BenefitFunction f(Kind::tabulated, 0.0, 0.0, 0.0);
  f.knots_ = std::move(knots);
  return f;
}

BenefitFunction BenefitFunction::from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("tabulated benefit: cannot open " + path.string());
  std::vector<std::pair<double, double>> knots;
  std::string line;
  bool header = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto fields = csv::split(line);
    if (fields.size() != 2)
      throw std::invalid_argument("tabulated benefit: " + path.string() + ":" +
                                  std::to_string(line_no) + ": expected two columns");
    knots.emplace_back(csv::parse_double(fields[0]), csv::parse_double(fields[1]));
  }
  return tabulated(std::move(knots));
}

double BenefitFunction::operator()(double contribution, double scale) const {
  switch (kind_) {
    case Kind::linear:
      return a_ * contribution;
    case Kind::step:
      return contribution + 1e-12 * scale >= t_ * scale ? a_ : 0.0;
    case Kind::sigmoid: {
      const double f0 = logistic_complement(b_ * (0.0 - t_));
      const double f1 = logistic_complement(b_ * (1.0 - t_));
      const double f = logistic_complement(b_ * (contribution / scale - t_));
      return a_ * (f - f0) / (f1 - f0);
    }
    case Kind::tabulated: {
      const double lo = knots_.front().first;
      const double hi = knots_.back().first;
      const double tol = 1e-12 * std::max(1.0, std::abs(hi));
      if (contribution < lo - tol || contribution > hi + tol) {
        std::ostringstream msg;
        msg << "tabulated benefit: C = " << contribution << " outside knot range [" << lo << ", "
            << hi << "]";
        throw std::domain_error(msg.str());
      }
      const double x = std::clamp(contribution, lo, hi);
      auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                                 [](double v, const auto& k) { return v < k.first; });
      if (it == knots_.end()) return knots_.back().second;
      if (it == knots_.begin()) return knots_.front().second;
      const auto& [c1, b1] = *it;
      const auto& [c0, b0] = *(it - 1);
      return b0 + (b1 - b0) * (x - c0) / (c1 - c0);
    }
  }
  return 0.0;
}

std::string BenefitFunction::describe() const {
  std::ostringstream s;
  s.precision(17);
  s << to_string(kind_);
  switch (kind_) {
    case Kind::linear: s << "(slope=" << a_ << ")"; break;
    case Kind::step: s << "(amplitude=" << a_ << ",threshold=" << t_ << ")"; break;
    case Kind::sigmoid:
      s << "(amplitude=" << a_ << ",steepness=" << b_ << ",threshold=" << t_ << ")";
      break;
    case Kind::tabulated: s << "(knots=" << knots_.size() << ")"; break;
  }
  return s.str();
}

}  // namespace coalition

#include "diqkd/bell.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace diqkd {

Behavior::Behavior(BellScenario scenario, std::vector<double> table)
    : scenario_(scenario), table_(std::move(table)) {
  if (scenario_.a_outputs < 1 || scenario_.b_outputs < 1 || scenario_.x_inputs < 1 ||
      scenario_.y_inputs < 1)
    throw std::invalid_argument("Behavior: alphabet sizes must be >= 1");
  if (table_.size() != static_cast<size_t>(scenario_.joint_cells()))
    throw std::invalid_argument("Behavior: table size does not match scenario");
  for (double p : table_)
    if (!std::isfinite(p)) throw std::invalid_argument("Behavior: non-finite entry");
}

double Behavior::marginal_a(int a, int x, int y) const {
  double s = 0;
  for (int b = 0; b < scenario_.b_outputs; ++b) s += at(a, b, x, y);
  return s;
}

double Behavior::marginal_b(int b, int y, int x) const {
  double s = 0;
  for (int a = 0; a < scenario_.a_outputs; ++a) s += at(a, b, x, y);
  return s;
}

Behavior Behavior::mixed_with(const Behavior& other, double alpha) const {
  if (!(other.scenario_ == scenario_))
    throw std::invalid_argument("Behavior::mixed_with: scenario mismatch");
  std::vector<double> t(table_.size());
  for (size_t i = 0; i < t.size(); ++i)
    t[i] = alpha * table_[i] + (1.0 - alpha) * other.table_[i];
  return Behavior(scenario_, std::move(t));
}

Behavior Behavior::white_noise(const BellScenario& scenario) {
  double p = 1.0 / (scenario.a_outputs * scenario.b_outputs);
  return Behavior(scenario, std::vector<double>(scenario.joint_cells(), p));
}

Behavior Behavior::chsh_visibility(double nu) {
  const double c = nu / std::sqrt(2.0);
  Behavior beh = white_noise(BellScenario::chsh());
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          int sign = ((a ^ b ^ (x & y)) & 1) ? -1 : 1;
          beh.at(a, b, x, y) = 0.25 * (1.0 + sign * c);
        }
  return beh;
}

Behavior Behavior::local_deterministic(int alpha, int beta, int gamma, int delta) {
  Behavior beh(BellScenario::chsh(), std::vector<double>(16, 0.0));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      int a = alpha ^ (gamma & x);
      int b = beta ^ (delta & y);
      beh.at(a, b, x, y) = 1.0;
    }
  return beh;
}

Behavior Behavior::pr_box_variant(int eps, int zeta, int eta) {
  Behavior beh(BellScenario::chsh(), std::vector<double>(16, 0.0));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a) {
        int b = a ^ (x & y) ^ (eps & x) ^ (zeta & y) ^ eta;
        beh.at(a, b & 1, x, y) = 0.5;
      }
  return beh;
}

Behavior Behavior::from_strategy(const BellScenario& scenario,
                                 const std::function<std::pair<int, int>(int, int)>& strategy) {
  Behavior beh(scenario, std::vector<double>(scenario.joint_cells(), 0.0));
  for (int x = 0; x < scenario.x_inputs; ++x)
    for (int y = 0; y < scenario.y_inputs; ++y) {
      auto [a, b] = strategy(x, y);
      beh.at(a, b, x, y) = 1.0;
    }
  return beh;
}

BehaviorReport check_behavior(const Behavior& behavior) {
  const BellScenario& sc = behavior.scenario();
  double worst_norm = 0.0;
  for (int x = 0; x < sc.x_inputs; ++x)
    for (int y = 0; y < sc.y_inputs; ++y) {
      double s = 0.0;
      for (int a = 0; a < sc.a_outputs; ++a)
        for (int b = 0; b < sc.b_outputs; ++b) {
          double p = behavior.at(a, b, x, y);
          if (p < 0) worst_norm = std::max(worst_norm, -p);
          s += p;
        }
      worst_norm = std::max(worst_norm, std::abs(s - 1.0));
    }

  double worst_ns = 0.0;
  for (int x = 0; x < sc.x_inputs; ++x)
    for (int a = 0; a < sc.a_outputs; ++a)
      for (int y = 1; y < sc.y_inputs; ++y)
        worst_ns = std::max(worst_ns,
                            std::abs(behavior.marginal_a(a, x, y) - behavior.marginal_a(a, x, 0)));
  for (int y = 0; y < sc.y_inputs; ++y)
    for (int b = 0; b < sc.b_outputs; ++b)
      for (int x = 1; x < sc.x_inputs; ++x)
        worst_ns = std::max(worst_ns,
                            std::abs(behavior.marginal_b(b, y, x) - behavior.marginal_b(b, y, 0)));

  BehaviorReport rep;
  rep.normalized = worst_norm <= kBehaviorTolerance;
  rep.no_signalling = worst_ns <= kBehaviorTolerance;
  rep.max_violation = std::max(worst_norm, worst_ns);
  return rep;
}

BellFunctional::BellFunctional(BellScenario scenario, std::vector<double> beta, double i_cl,
                               double i_max)
    : scenario_(scenario), beta_(std::move(beta)), i_cl_(i_cl), i_max_(i_max) {
  if (beta_.size() != static_cast<size_t>(scenario_.joint_cells()))
    throw std::invalid_argument("BellFunctional: coefficient size mismatch");
  if (!(i_cl_ <= i_max_)) throw std::invalid_argument("BellFunctional: i_cl > i_max");
}

double BellFunctional::max_abs_coefficient() const {
  double m = 0;
  for (double c : beta_) m = std::max(m, std::abs(c));
  return m;
}

BellFunctional BellFunctional::scaled(double c) const {
  std::vector<double> b = beta_;
  for (double& v : b) v *= c;
  double lo = c >= 0 ? i_cl_ * c : i_max_ * c;
  double hi = c >= 0 ? i_max_ * c : i_cl_ * c;
  return BellFunctional(scenario_, std::move(b), lo, hi);
}

BellFunctional BellFunctional::chsh() {
  std::vector<double> beta(16);
  BellFunctional f(BellScenario::chsh(), std::vector<double>(16, 0.0), 2.0, 4.0);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          beta[static_cast<size_t>(((x * 2 + y) * 2 + a) * 2 + b)] =
              ((a ^ b ^ (x & y)) & 1) ? -1.0 : 1.0;
  return BellFunctional(BellScenario::chsh(), std::move(beta), 2.0, 4.0);
}

double evaluate_functional(const Behavior& behavior, const BellFunctional& functional) {
  if (!(behavior.scenario() == functional.scenario()))
    throw std::invalid_argument("evaluate_functional: scenario mismatch");
  const BellScenario& sc = behavior.scenario();
  double s = 0.0;
  for (int x = 0; x < sc.x_inputs; ++x)
    for (int y = 0; y < sc.y_inputs; ++y)
      for (int a = 0; a < sc.a_outputs; ++a)
        for (int b = 0; b < sc.b_outputs; ++b)
          s += functional.beta(a, b, x, y) * behavior.at(a, b, x, y);
  return s;
}

namespace {
const double kTsirelson = 2.0 * std::sqrt(2.0);
} // namespace

double tau_qm(double i_value) {
  if (i_value <= 2.0) return 1.0;
  if (i_value >= kTsirelson) return 0.5; // formula undefined beyond Tsirelson; clamp
  return 0.5 * (1.0 + std::sqrt(2.0 - i_value * i_value / 4.0));
}

double tau_ns(double i_value) {
  if (i_value <= 2.0) return 1.0;
  if (i_value >= 4.0) return 0.5;
  return 1.5 - i_value / 4.0;
}

double tau_ns_paper_literal(double i_value) { return 0.25 - i_value / 4.0; }

RandomnessBound RandomnessBound::quantum_chsh() {
  return RandomnessBound(Kind::quantum_chsh, {});
}

RandomnessBound RandomnessBound::no_signalling_chsh() {
  return RandomnessBound(Kind::no_signalling_chsh, {});
}

RandomnessBound RandomnessBound::tabulated(std::vector<std::pair<double, double>> breakpoints) {
  if (breakpoints.empty()) throw std::invalid_argument("RandomnessBound: empty table");
  if (breakpoints.size() < 2)
    throw std::invalid_argument("RandomnessBound: tabulated bound needs >= 2 breakpoints");
  for (size_t i = 0; i < breakpoints.size(); ++i) {
    auto [I, tau] = breakpoints[i];
    if (!(tau > 0.0 && tau <= 1.0))
      throw std::invalid_argument("RandomnessBound: tau outside (0,1]");
    if (i > 0) {
      if (!(I > breakpoints[i - 1].first))
        throw std::invalid_argument("RandomnessBound: breakpoints not strictly increasing in I");
      if (tau > breakpoints[i - 1].second)
        throw std::invalid_argument("RandomnessBound: tau must be non-increasing");
    }
  }
  return RandomnessBound(Kind::tabulated, std::move(breakpoints));
}

std::string RandomnessBound::name() const {
  switch (kind_) {
  case Kind::quantum_chsh: return "quantum-chsh";
  case Kind::no_signalling_chsh: return "no-signalling-chsh";
  case Kind::tabulated: return "tabulated";
  }
  return "?";
}

RandomnessBound RandomnessBound::from_name(const std::string& name) {
  if (name == "quantum-chsh" || name == "qm" || name == "quantum") return quantum_chsh();
  if (name == "no-signalling-chsh" || name == "ns" || name == "no-signalling")
    return no_signalling_chsh();
  throw std::invalid_argument("RandomnessBound: unknown bound name '" + name + "'");
}

double RandomnessBound::evaluate(double i_value) const {
  switch (kind_) {
  case Kind::quantum_chsh: return tau_qm(i_value);
  case Kind::no_signalling_chsh: return tau_ns(i_value);
  case Kind::tabulated: break;
  }
  // Piecewise-linear in (I, -log2 tau); clamps to the endpoint values.
  const auto& pts = breakpoints_;
  if (i_value <= pts.front().first) return pts.front().second;
  if (i_value >= pts.back().first) return pts.back().second;
  size_t hi = 1;
  while (pts[hi].first < i_value) ++hi;
  const auto& [i0, t0] = pts[hi - 1];
  const auto& [i1, t1] = pts[hi];
  double l0 = -std::log2(t0), l1 = -std::log2(t1);
  double w = (i_value - i0) / (i1 - i0);
  return std::exp2(-(l0 + w * (l1 - l0)));
}

double RandomnessBound::log_convexity_defect(int grid_points) const {
  double lo, hi;
  switch (kind_) {
  case Kind::quantum_chsh:
    lo = 2.0;
    hi = kTsirelson;
    break;
  case Kind::no_signalling_chsh:
    lo = 2.0;
    hi = 4.0;
    break;
  case Kind::tabulated:
    lo = breakpoints_.front().first;
    hi = breakpoints_.back().first;
    break;
  default: return 0.0;
  }
  double worst = 0.0;
  std::vector<double> f(static_cast<size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i)
    f[static_cast<size_t>(i)] = -std::log2(evaluate(lo + (hi - lo) * i / (grid_points - 1)));
  for (int i = 1; i + 1 < grid_points; ++i)
    worst = std::min(worst, f[static_cast<size_t>(i + 1)] - 2 * f[static_cast<size_t>(i)] +
                                f[static_cast<size_t>(i - 1)]);
  return worst;
}

} // namespace diqkd

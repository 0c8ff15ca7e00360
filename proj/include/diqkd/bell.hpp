#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace diqkd {

// Alphabet sizes of the two outputs (A, B) and two inputs (X, Y) of a
// bipartite Bell scenario. CHSH is (2,2,2,2).
struct BellScenario {
  int a_outputs = 2;
  int b_outputs = 2;
  int x_inputs = 2;
  int y_inputs = 2;

  bool operator==(const BellScenario&) const = default;
  int joint_cells() const { return a_outputs * b_outputs * x_inputs * y_inputs; }
  bool is_chsh() const { return *this == BellScenario{2, 2, 2, 2}; }
  static BellScenario chsh() { return {2, 2, 2, 2}; }
};

// Conditional probability table P(a,b|x,y). Construction only fixes the
// shape; statistical validity is reported by check_behavior so that defective
// tables can be built and diagnosed.
class Behavior {
public:
  Behavior(BellScenario scenario, std::vector<double> table);

  const BellScenario& scenario() const { return scenario_; }
  double at(int a, int b, int x, int y) const { return table_[index(a, b, x, y)]; }
  double& at(int a, int b, int x, int y) { return table_[index(a, b, x, y)]; }
  const std::vector<double>& table() const { return table_; }

  // Marginal P(a|x) computed from the y-th column (y = 0 by default; equal
  // for all y exactly when the behavior is no-signalling).
  double marginal_a(int a, int x, int y = 0) const;
  double marginal_b(int b, int y, int x = 0) const;

  // Convex mixture alpha*this + (1-alpha)*other.
  Behavior mixed_with(const Behavior& other, double alpha) const;

  static Behavior white_noise(const BellScenario& scenario);
  // P(a,b|x,y) = 1/4 * (1 + nu * (-1)^(a^b^xy) / sqrt(2)); the test-round
  // statistics of a visibility-nu singlet measured with CHSH-optimal settings.
  static Behavior chsh_visibility(double nu);
  // a = alpha ^ (gamma & x), b = beta ^ (delta & y).
  static Behavior local_deterministic(int alpha, int beta, int gamma, int delta);
  // a ^ b = x*y ^ eps*x ^ zeta*y ^ eta, uniform marginals.
  static Behavior pr_box_variant(int eps, int zeta, int eta);
  static Behavior pr_box() { return pr_box_variant(0, 0, 0); }
  static Behavior from_strategy(const BellScenario& scenario,
                                const std::function<std::pair<int, int>(int, int)>& strategy);

private:
  size_t index(int a, int b, int x, int y) const {
    return static_cast<size_t>(((x * scenario_.y_inputs + y) * scenario_.a_outputs + a) *
                                   scenario_.b_outputs +
                               b);
  }

  BellScenario scenario_;
  std::vector<double> table_;
};

struct BehaviorReport {
  bool normalized = false;
  bool no_signalling = false;
  double max_violation = 0.0; // largest defect across both checks
};

// Diagnostic: largest violation of per-(x,y) normalization and of the
// no-signalling marginal equalities, at tolerance 1e-12.
BehaviorReport check_behavior(const Behavior& behavior);

inline constexpr double kBehaviorTolerance = 1e-12;

// Linear form I[P] = sum beta(a,b,x,y) P(a,b|x,y) with classical bound i_cl
// and no-signalling maximum i_max.
class BellFunctional {
public:
  BellFunctional(BellScenario scenario, std::vector<double> beta, double i_cl, double i_max);

  const BellScenario& scenario() const { return scenario_; }
  double beta(int a, int b, int x, int y) const { return beta_[index(a, b, x, y)]; }
  double i_cl() const { return i_cl_; }
  double i_max() const { return i_max_; }
  double max_abs_coefficient() const;

  BellFunctional scaled(double c) const;

  // beta = (-1)^(a^b^xy), i_cl = 2, i_max = 4.
  static BellFunctional chsh();

private:
  size_t index(int a, int b, int x, int y) const {
    return static_cast<size_t>(((x * scenario_.y_inputs + y) * scenario_.a_outputs + a) *
                                   scenario_.b_outputs +
                               b);
  }

  BellScenario scenario_;
  std::vector<double> beta_;
  double i_cl_;
  double i_max_;
};

double evaluate_functional(const Behavior& behavior, const BellFunctional& functional);

// Guessing-probability bound tau(I) against quantum adversaries, CHSH.
// 1 for I <= 2, 1/2 for I >= 2*sqrt(2), else (1 + sqrt(2 - I^2/4)) / 2.
double tau_qm(double i_value);

// Guessing-probability bound against no-signalling adversaries, CHSH.
// 1 for I <= 2, 1/2 for I >= 4, else 3/2 - I/4. This is the form certified
// by the vertex-envelope oracle.
double tau_ns(double i_value);

// Non-normative: the literal printed expression 1/4 - I/4, kept only so the
// verify command can demonstrate that it fails the envelope cross-check.
double tau_ns_paper_literal(double i_value);

// A randomness bound: closed-form CHSH kinds, or a tabulated bound given as
// (I, tau) breakpoints interpolated linearly in -log2(tau).
class RandomnessBound {
public:
  enum class Kind { quantum_chsh, no_signalling_chsh, tabulated };

  static RandomnessBound quantum_chsh();
  static RandomnessBound no_signalling_chsh();
  // Requires >= 2 breakpoints, strictly increasing I, tau in (0,1],
  // non-increasing tau.
  static RandomnessBound tabulated(std::vector<std::pair<double, double>> breakpoints);

  Kind kind() const { return kind_; }
  const std::vector<std::pair<double, double>>& breakpoints() const { return breakpoints_; }
  std::string name() const;
  static RandomnessBound from_name(const std::string& name);

  double evaluate(double i_value) const;

  // Smallest second difference of -log2(tau) over a uniform grid on the
  // bound's domain; >= -1e-9 for a convex bound.
  double log_convexity_defect(int grid_points = 100) const;

private:
  RandomnessBound(Kind kind, std::vector<std::pair<double, double>> breakpoints)
      : kind_(kind), breakpoints_(std::move(breakpoints)) {}

  Kind kind_;
  std::vector<std::pair<double, double>> breakpoints_;
};

inline double tau_eval(const RandomnessBound& bound, double i_value) {
  return bound.evaluate(i_value);
}

} // namespace diqkd

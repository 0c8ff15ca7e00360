#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "diqkd/bell.hpp"
#include "diqkd/devices.hpp"
#include "diqkd/protocol.hpp"
#include "diqkd/security_report.hpp"

namespace diqkd {

// beta_0 = sqrt(8) lambda_X lambda_Y max |beta(a,b,x,y)|.
double beta0(const BellFunctional& functional, const BellScenario& scenario);

// exp(-m n^(-3/4) beta0^(-2)); equals 1 at m = 0, throws when beta0 <= 0.
double azuma_tail(int64_t m, int64_t n, double beta0_value);

// max(0, 1 - 3 exp(-m n^(-3/4) beta0^(-2)) - (lambda_A lambda_B)^(-e_size)).
double good_event_bound(int64_t m, int64_t n, int64_t e_size, const BellScenario& scenario,
                        double beta0_value);

struct TheoremDistance {
  double term1 = 0.0, term2 = 0.0, term3 = 0.0;
  double raw = 0.0;    // exact sum of the three terms
  double capped = 0.0; // min(raw, 2)
  bool vacuous = false;
};

TheoremDistance theorem_distance(int64_t n, int64_t m, int64_t e_size,
                                 const BellScenario& scenario, double beta0_value);

// min(1, 1/2 + distance/4).
double psucc_bound(double distance);

// Smallest n (to ~0.1% resolution) at which the theorem's middle term
// 6 exp(-m n^(-3/4) beta0^(-2)) drops to 2^(-threshold_bits), evaluated with
// the fixed ratio m = m_fraction * n.
double term2_crossover_n(double threshold_bits, double m_fraction, double beta0_value);

SecurityReport build_security_report(const ProtocolParams& params, int64_t m, int64_t e_size,
                                     double i_est, int64_t n_c, int64_t n_k);

// --- desk-scale checkers -------------------------------------------------

// A round-wise adversary strategy for the product bound: the conditional
// single-round behavior given the realized history.
struct RoundStep {
  bool test = false; // z_i: key round (u=0) or test round with inputs (x,y)
  int x = 0, y = 0;
  int a = 0, b = 0; // t_i: a for key rounds, (a,b) for test rounds
};

struct ChainStrategy {
  int rounds = 1; // <= 4
  std::function<Behavior(std::span<const RoundStep>)> behavior_for;
};

struct Lemma1Result {
  bool holds = false;
  double lhs = 0.0;          // P(t^m | z^m) of the worst instance
  double rhs = 0.0;          // tau(I-bar)^m of the worst instance
  double worst_margin = 0.0; // min over instances of rhs - lhs
  std::vector<RoundStep> worst;
};

// Enumerates every (t^m, z^m), computes P(t^m|z^m) by the chain rule and
// I-bar as the mean round-wise Bell value, and checks
// P(t^m|z^m) <= tau(I-bar)^m. Throws for more than 4 rounds.
Lemma1Result lemma1_check(const ChainStrategy& strategy, const BellFunctional& functional,
                          const RandomnessBound& bound);

struct MartingaleStats {
  double violation_frequency = 0.0;
  double azuma_tail_bound = 1.0; // at the mean observed m
  int trials = 0;
  double mean_m = 0.0;
  double mean_i_est = 0.0;
};

// Runs the measurement and sifting phases `trials` times against devices
// from `make_devices` (seeded per trial), computes I-bar exactly from the
// devices' declared round-wise behavior, and measures how often the Lemma-2
// bad event {I-bar <= |E| I_est / (m Pr{U=1|U=V}) - n^(-1/8)} occurs.
// Throws if the devices do not declare their conditionals.
MartingaleStats martingale_empirical(
    const std::function<std::unique_ptr<DevicePair>(uint64_t trial_seed)>& make_devices,
    const ProtocolParams& params, int trials);

} // namespace diqkd

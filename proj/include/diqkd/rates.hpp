#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "diqkd/bell.hpp"

namespace diqkd {

enum class BoundKind { quantum, no_signalling };

struct RatePoint {
  double noise = 0.0;      // 1 - nu
  double visibility = 1.0; // nu
  double chsh_value = 0.0; // 2 sqrt(2) nu
  double rate_qm = 0.0;    // unclamped
  double rate_ns = 0.0;
  double rate_qm_clamped = 0.0; // max(0, .)
  double rate_ns_clamped = 0.0;
};

// Asymptotic key rate -log2 tau(2 sqrt(2) nu) - h((1-nu)/2), unclamped.
double asymptotic_rate(double nu, BoundKind kind);
double asymptotic_rate(double nu, const RandomnessBound& bound);

// Root of asymptotic_rate in (0,1) by bisection to 1e-9. Throws when the
// rate never becomes positive ("no sign change").
double critical_visibility(BoundKind kind);
double critical_visibility(const RandomnessBound& bound);

std::vector<RatePoint> rate_curve(std::span<const double> noise_grid);

struct FiniteSizeRate {
  double mean = 0.0;   // of n_K / n
  double stddev = 0.0; // sample standard deviation
  int trials = 0;
  std::vector<int64_t> n_ks;
};

// Runs the full protocol `trials` times with honest devices at visibility nu
// (aligned key setting, EC sized from the model QBER (1-nu)/2) and reports
// the finite-size rate n_K / n.
FiniteSizeRate finite_size_rate(int64_t n, double nu, int trials, uint64_t seed);

} // namespace diqkd

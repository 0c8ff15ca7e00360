#pragma once

#include <cstdint>

namespace diqkd {

// Finite-size security quantities for one protocol run (or one hypothetical
// parameter set). theorem_* terms always satisfy
// theorem_distance_raw == term1 + term2 + term3 exactly.
struct SecurityReport {
  int64_t n = 0;
  int64_t m = 0;
  int64_t e_size = 0;
  double i_est = 0.0;
  int64_t n_c = 0;
  int64_t n_k = 0;

  double beta0 = 0.0;
  double azuma_tail = 1.0;
  double good_event_lower_bound = 0.0;

  double theorem_term1 = 0.0; // 2^((1 - sqrt(n)) / 2)
  double theorem_term2 = 0.0; // 6 exp(-m n^(-3/4) beta0^(-2))
  double theorem_term3 = 0.0; // 2 (lambda_A lambda_B)^(-|E|)
  double theorem_distance_raw = 0.0;
  double theorem_distance = 0.0; // capped at 2
  bool theorem_vacuous = false;  // raw value >= 2 carries no information
  double p_succ_bound = 1.0;

  // Eq.-(4) coefficient vs the exact Lemma-3 coefficient 1/Pr{U=1|U=V},
  // reported side by side (the former is strictly smaller).
  double eq4_factor = 0.0;    // (n^(1/8) - 1)^2
  double lemma3_factor = 0.0; // ((1-q)/q)^2 + 1 at the actual q
  double factor_gap = 0.0;    // lemma3_factor - eq4_factor
  double tau_argument_eq4 = 0.0;
  double tau_eq4 = 1.0;
  double tau_argument_lemma3 = 0.0;
  double tau_lemma3 = 1.0;
};

} // namespace diqkd

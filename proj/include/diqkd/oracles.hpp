#pragma once

#include <cstdint>
#include <vector>

#include "diqkd/bell.hpp"

namespace diqkd {

// Brute-force references used to certify the closed forms in `bell` and the
// hashing bound in `privacy` before anything downstream relies on them.

struct NsVertexSet {
  std::vector<Behavior> vertices; // 24 for CHSH: 16 deterministic + 8 PR variants
};

// All extreme points of the no-signalling polytope for the (2,2,2,2)
// scenario. Other scenarios are rejected.
NsVertexSet enumerate_ns_vertices(const BellScenario& scenario);

// max P(a|x) over convex mixtures of no-signalling vertices whose Bell value
// equals i_value: the upper concave envelope of {(I_v, p_v(a|x))} evaluated
// at i_value. Throws if i_value is outside the achievable range.
double ns_guessing_envelope(const BellFunctional& functional, int a, int x, double i_value);

// max of evaluate_functional over all local deterministic behaviors.
// Requires lambda_A^lambda_X * lambda_B^lambda_Y <= 1e6.
double classical_bound_by_enumeration(const BellFunctional& functional);

// Explicit joint distribution of a raw string R (r_bits wide) and side
// information E (e_values outcomes); p[r * e_values + e] sums to 1.
struct JointRE {
  int r_bits = 0;
  int e_values = 1;
  std::vector<double> p;

  double probability(uint32_t r, int e) const {
    return p[static_cast<size_t>(r) * static_cast<size_t>(e_values) + static_cast<size_t>(e)];
  }
  // P_guess(R|E) = sum_e max_r P(r,e).
  double p_guess() const;
  void validate() const;
};

struct HashDistanceResult {
  double distance = 0.0;   // E_f sum_{k,e} |P(k,f,e) - 2^-n P(f,e)| (times |F| in exact mode)
  double std_error = 0.0;  // 0 in exact mode
  bool exact = true;
  uint64_t family_size = 0; // enumerated or sampled seeds
};

// Distance of K = F(R) from an ideal n_out-bit key, with F ranging over the
// Toeplitz family on seeds of r_bits + n_out - 1 bits (convention
// T[i][j] = seed[i+j], independent of the privacy module's implementation).
// Exact mode enumerates the whole family; limits: r_bits <= 10,
// e_values <= 64, seed length <= 20.
HashDistanceResult exhaustive_hash_distance(const JointRE& joint, int n_out);

// Monte Carlo variant for families too large to enumerate: averages the
// per-seed distance over `samples` seeds (>= 1e4) and reports the standard
// error of the mean.
HashDistanceResult sampled_hash_distance(const JointRE& joint, int n_out, uint64_t samples,
                                         uint64_t seed);

} // namespace diqkd

#pragma once

#include <cstdint>

#include "diqkd/bell.hpp"
#include "diqkd/bitstring.hpp"

namespace diqkd {

// Seed of a Toeplitz matrix over GF(2): input_len + output_len - 1 bits,
// T[i][j] = bit[i + j]. The seed is public once published.
struct HashSeed {
  uint64_t input_len = 0;
  uint64_t output_len = 0;
  BitString bits;

  void validate() const;
};

// Uniformly random Toeplitz seed from the (seed, hash_seed, index) stream.
HashSeed sample_hash(uint64_t input_len, uint64_t output_len, uint64_t seed, uint64_t index = 0);

// K = T * r over GF(2). Throws on input length mismatch.
BitString apply_hash(const HashSeed& hash, const BitString& input);

// Lemma 4 right-hand side: sqrt(2^n_out * p_guess). p_guess must be in (0,1].
double lemma4_bound(double p_guess, int n_out);

// Intermediates of the key-length formula, exposed for reporting and for the
// worked-example checks.
struct KeyLengthBreakdown {
  double tau_argument = 0.0;
  double tau = 1.0;
  double entropy_bits = 0.0;  // -m log2 tau
  double unfloored = 0.0;     // entropy_bits - n_c - 2 e log2(lAlB) - sqrt(n)
  int64_t n_k = 0;
};

// n_K = max{0, floor(-m log2 tau((e/m)(n^{1/8}-1)^2 max(I_est,0) - n^{-1/8})
//                    - n_C - 2 e log2(lambda_A lambda_B) - sqrt(n))}.
// e = 0 or m = 0 gives 0. Preconditions: 0 <= e <= m <= n, n_C >= 0.
KeyLengthBreakdown key_length_detail(int64_t m, int64_t e_size, double i_est, int64_t n_c,
                                     int64_t n, const RandomnessBound& bound,
                                     const BellScenario& scenario);

int64_t key_length(int64_t m, int64_t e_size, double i_est, int64_t n_c, int64_t n,
                   const RandomnessBound& bound, const BellScenario& scenario);

} // namespace diqkd

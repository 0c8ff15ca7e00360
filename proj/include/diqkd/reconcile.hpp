#pragma once

#include <cstdint>
#include <vector>

#include "diqkd/bitstring.hpp"

namespace diqkd {

// h(p) = -p log2 p - (1-p) log2 (1-p), h(0) = h(1) = 0. Throws outside [0,1].
double binary_entropy(double p);

struct EcResult {
  BitString corrected;  // Bob's corrected string S'
  BitString messages;   // published syndrome bits (the payload of C)
  uint64_t tag = 0;     // 64-bit verification tag t(R), also published
  int64_t n_c = 0;      // every published bit: |messages| + 64
  bool success = false; // tag(S') == tag(R)
  int iterations = 0;   // worst decoder iteration count across blocks
};

// One-way error correction S -> S'. Alice publishes the syndrome of R under a
// seed-derived sparse parity-check matrix with ceil(|R| * efficiency *
// h(qber_estimate)) rows, plus a 64-bit Toeplitz verification tag of R; both
// are functions of R and the public seed only. Bob decodes from S by
// belief propagation. Requires |R| == |S|; efficiency >= 1.
EcResult error_correct(const BitString& alice_key, const BitString& bob_key,
                       double qber_estimate, double efficiency, uint64_t seed);

struct QberSample {
  double estimate = 0.0;
  std::vector<uint64_t> positions; // ascending
  BitString disclosed;             // Alice's bits at the positions (published)
};

// Discloses floor(|R| * sample_fraction) seed-chosen positions of R and
// returns the empirical mismatch rate against S. The caller removes the
// positions from both keys before error correction and adds their count to
// n_C. Throws when the sample would be empty.
QberSample qber_from_sample(const BitString& alice_key, const BitString& bob_key,
                            double sample_fraction, uint64_t seed);

// Removes the given ascending positions from a key.
BitString remove_positions(const BitString& key, const std::vector<uint64_t>& positions);

namespace ec_detail {

// Seed-derived sparse parity-check matrix, column weight 3. Variables are
// split into L contiguous groups; the three edges of a variable in group z go
// to check groups z, z+1, z+2 of a chain of L+2 groups, so decoding starts at
// the lightly loaded chain ends and propagates inward. Rows within a group
// are dealt by seeded shuffle; row counts follow edge mass, with the two
// groups at each chain end boosted.
struct ParityCheck {
  uint32_t n_vars = 0;
  uint32_t n_rows = 0;
  std::vector<uint32_t> row_ptr; // size n_rows + 1
  std::vector<uint32_t> cols;    // edge -> variable
};

ParityCheck build_parity_check(uint32_t n_vars, uint32_t n_rows, uint64_t seed);

BitString syndrome(const ParityCheck& h, const BitString& bits, uint64_t first_bit = 0);

// Syndrome decoder (layered normalized min-sum). Returns the estimated error
// pattern and whether its syndrome matches `target`.
struct DecodeResult {
  BitString error;
  bool converged = false;
  int iterations = 0;
};
DecodeResult decode_syndrome(const ParityCheck& h, const BitString& target, double channel_p,
                             int max_iterations);

uint64_t verification_tag(const BitString& key, uint64_t seed);

} // namespace ec_detail

} // namespace diqkd

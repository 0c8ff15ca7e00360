#include "diqkd/privacy.hpp"

#include <cmath>
#include <stdexcept>

#include "diqkd/rng.hpp"

namespace diqkd {

void HashSeed::validate() const {
  uint64_t want = input_len + output_len == 0 ? 0 : input_len + output_len - 1;
  if (bits.size() != want)
    throw std::invalid_argument("HashSeed: seed length must be input_len + output_len - 1");
}

HashSeed sample_hash(uint64_t input_len, uint64_t output_len, uint64_t seed, uint64_t index) {
  HashSeed h;
  h.input_len = input_len;
  h.output_len = output_len;
  uint64_t nbits = input_len + output_len == 0 ? 0 : input_len + output_len - 1;
  h.bits = BitString(nbits);
  Prng rng = Prng::stream(seed, stream_tag::hash_seed, index);
  auto words = h.bits.words();
  for (auto& w : words) w = rng.next_u64();
  if (nbits & 63) words[words.size() - 1] &= (uint64_t(1) << (nbits & 63)) - 1;
  return h;
}

namespace {

// Read 64 bits of `bits` starting at bit offset `off` (zero-padded past the end).
inline uint64_t window64(std::span<const uint64_t> words, size_t nbits, uint64_t off) {
  if (off >= nbits) return 0;
  size_t wi = off >> 6;
  unsigned sh = static_cast<unsigned>(off & 63);
  uint64_t lo = words[wi] >> sh;
  uint64_t hi = (sh && wi + 1 < words.size()) ? words[wi + 1] << (64 - sh) : 0;
  uint64_t w = lo | hi;
  if (nbits - off < 64) w &= (uint64_t(1) << (nbits - off)) - 1;
  return w;
}

} // namespace

BitString apply_hash(const HashSeed& hash, const BitString& input) {
  hash.validate();
  if (input.size() != hash.input_len)
    throw std::invalid_argument("apply_hash: input length mismatch");
  BitString out(hash.output_len);
  if (hash.output_len == 0) return out;

  // out_i = XOR_j seed[i+j] r_j. Walk the set input bits and fold the
  // corresponding seed window into the output word by word; this costs
  // popcount(r) * output_words word operations.
  auto seed_words = hash.bits.words();
  auto out_words = out.words();
  const size_t out_bits = hash.output_len;
  const size_t seed_bits = hash.bits.size();
  auto in_words = input.words();
  for (size_t wi = 0; wi < in_words.size(); ++wi) {
    uint64_t w = in_words[wi];
    while (w) {
      unsigned bit = static_cast<unsigned>(std::countr_zero(w));
      w &= w - 1;
      uint64_t j = (static_cast<uint64_t>(wi) << 6) | bit;
      // seed slice [j, j + out_bits) XORed into out
      for (size_t ow = 0; ow < out_words.size(); ++ow)
        out_words[ow] ^= window64(seed_words, seed_bits, j + (static_cast<uint64_t>(ow) << 6));
    }
  }
  if (out_bits & 63) out_words[out_words.size() - 1] &= (uint64_t(1) << (out_bits & 63)) - 1;
  return out;
}

double lemma4_bound(double p_guess, int n_out) {
  if (!(p_guess > 0.0 && p_guess <= 1.0))
    throw std::invalid_argument("lemma4_bound: p_guess must be in (0,1]");
  if (n_out < 0) throw std::invalid_argument("lemma4_bound: negative output length");
  return std::sqrt(std::ldexp(p_guess, n_out));
}

KeyLengthBreakdown key_length_detail(int64_t m, int64_t e_size, double i_est, int64_t n_c,
                                     int64_t n, const RandomnessBound& bound,
                                     const BellScenario& scenario) {
  if (e_size < 0 || m < e_size || n < m) throw std::invalid_argument("key_length: need 0 <= e <= m <= n");
  if (n_c < 0) throw std::invalid_argument("key_length: negative n_C");

  KeyLengthBreakdown out;
  if (e_size == 0 || m == 0) return out;

  const double nd = static_cast<double>(n);
  const double n8 = std::pow(nd, 0.125);
  // Negative estimates carry no certifiable randomness; clamp before Eq. use.
  const double i_pos = std::max(i_est, 0.0);
  out.tau_argument = (static_cast<double>(e_size) / static_cast<double>(m)) * (n8 - 1.0) * (n8 - 1.0) * i_pos -
                     1.0 / n8;
  out.tau = bound.evaluate(out.tau_argument);
  out.entropy_bits = -static_cast<double>(m) * std::log2(out.tau);
  double lambda_bits = std::log2(static_cast<double>(scenario.a_outputs) *
                                 static_cast<double>(scenario.b_outputs));
  out.unfloored = out.entropy_bits - static_cast<double>(n_c) -
                  2.0 * static_cast<double>(e_size) * lambda_bits - std::sqrt(nd);
  out.n_k = std::max<int64_t>(0, static_cast<int64_t>(std::floor(out.unfloored)));
  return out;
}

int64_t key_length(int64_t m, int64_t e_size, double i_est, int64_t n_c, int64_t n,
                   const RandomnessBound& bound, const BellScenario& scenario) {
  return key_length_detail(m, e_size, i_est, n_c, n, bound, scenario).n_k;
}

} // namespace diqkd

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace diqkd {

// Packed bit vector. Bit i lives in word i/64 at position i%64 (LSB first).
class BitString {
public:
  BitString() = default;
  explicit BitString(size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  size_t size() const { return nbits_; }
  bool empty() const { return nbits_ == 0; }

  bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

  void set(size_t i, bool v) {
    uint64_t mask = uint64_t(1) << (i & 63);
    if (v)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }

  void push_back(bool v) {
    if ((nbits_ & 63) == 0) words_.push_back(0);
    if (v) words_.back() |= uint64_t(1) << (nbits_ & 63);
    ++nbits_;
  }

  std::span<const uint64_t> words() const { return words_; }
  std::span<uint64_t> words() { return words_; }

  size_t count_ones() const {
    size_t c = 0;
    for (uint64_t w : words_) c += static_cast<size_t>(std::popcount(w));
    return c;
  }

  void xor_with(const BitString& other) {
    if (other.nbits_ != nbits_) throw std::invalid_argument("BitString: length mismatch");
    for (size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  }

  size_t hamming_distance(const BitString& other) const {
    if (other.nbits_ != nbits_) throw std::invalid_argument("BitString: length mismatch");
    size_t c = 0;
    for (size_t i = 0; i < words_.size(); ++i)
      c += static_cast<size_t>(std::popcount(words_[i] ^ other.words_[i]));
    return c;
  }

  bool operator==(const BitString& other) const {
    return nbits_ == other.nbits_ && words_ == other.words_;
  }

  static BitString from_bits(std::span<const int> bits) {
    BitString s;
    for (int b : bits) s.push_back(b != 0);
    return s;
  }

  std::vector<int> to_bits() const {
    std::vector<int> out(nbits_);
    for (size_t i = 0; i < nbits_; ++i) out[i] = get(i) ? 1 : 0;
    return out;
  }

private:
  size_t nbits_ = 0;
  std::vector<uint64_t> words_;
};

} // namespace diqkd

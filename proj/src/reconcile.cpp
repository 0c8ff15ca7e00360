#include "diqkd/reconcile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "diqkd/privacy.hpp"
#include "diqkd/rng.hpp"

namespace diqkd {

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binary_entropy: p outside [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

namespace ec_detail {

namespace {
constexpr uint32_t kVarsPerGroup = 4096;  // target coupling-group size
constexpr uint32_t kMaxGroups = 32;       // chain length cap

constexpr float kMinSumScale = 0.9375f;   // normalized min-sum factor
} // namespace

ParityCheck build_parity_check(uint32_t n_vars, uint32_t n_rows, uint64_t seed) {
  ParityCheck h;
  h.n_vars = n_vars;
  h.n_rows = n_rows;
  h.row_ptr.assign(n_rows + 1, 0);
  if (n_rows == 0 || n_vars == 0) return h;

  const uint32_t chain = std::clamp<uint32_t>(n_vars / kVarsPerGroup, 1, kMaxGroups);
  const uint32_t groups = std::min(chain + 2, n_rows);

  auto var_group_begin = [&](uint32_t z) {
    return static_cast<uint32_t>(static_cast<uint64_t>(z) * n_vars / chain);
  };
  auto check_group_of = [&](uint32_t z, uint32_t side) {
    return std::min(z + side, groups - 1);
  };

  // Row apportionment: equal shares per check group (each group gets at
  // least one row; remainder by largest fractional share). The end groups
  // receive edges from fewer variable groups, so their rows are lighter;
  // those underloaded checks are what starts the decoding wave.
  std::vector<double> weight(groups, 1.0);

  std::vector<uint32_t> rows_of(groups, 1);
  uint32_t assigned = groups;
  double total_weight = std::accumulate(weight.begin(), weight.end(), 0.0);
  std::vector<std::pair<double, uint32_t>> remainders(groups);
  for (uint32_t g = 0; g < groups; ++g) {
    double share = weight[g] / total_weight * static_cast<double>(n_rows - groups);
    auto whole = static_cast<uint32_t>(share);
    rows_of[g] += whole;
    assigned += whole;
    remainders[g] = {-(share - whole), g}; // sort ascending = largest remainder first
  }
  std::sort(remainders.begin(), remainders.end());
  for (uint32_t i = 0; assigned < n_rows; ++i, ++assigned) rows_of[remainders[i % groups].second]++;

  std::vector<uint32_t> row_base(groups + 1, 0);
  for (uint32_t g = 0; g < groups; ++g) row_base[g + 1] = row_base[g] + rows_of[g];

  // Deal each check group's incoming variables to its rows after a seeded
  // shuffle; one edge per (variable, side).
  std::vector<uint32_t> edge_row(static_cast<size_t>(n_vars) * 3);
  std::vector<uint32_t> pool;
  for (uint32_t g = 0; g < groups; ++g) {
    pool.clear();
    for (uint32_t s = 0; s < 3; ++s)
      for (uint32_t z = 0; z < chain; ++z)
        if (check_group_of(z, s) == g)
          for (uint32_t v = var_group_begin(z); v < var_group_begin(z + 1); ++v)
            pool.push_back(v * 3 + s);
    Prng rng = Prng::stream(seed, stream_tag::ec_matrix, g);
    for (size_t i = pool.size(); i > 1; --i)
      std::swap(pool[i - 1], pool[rng.below(i)]);
    for (size_t k = 0; k < pool.size(); ++k)
      edge_row[pool[k]] = row_base[g] + static_cast<uint32_t>(k % rows_of[g]);
  }

  // A variable's sides normally land in distinct groups; when the chain tail
  // collapses they can collide on one row, which would cancel over GF(2).
  for (uint32_t v = 0; v < n_vars; ++v)
    for (uint32_t s = 1; s < 3; ++s)
      for (uint32_t t = 0; t < s; ++t)
        if (edge_row[v * 3 + s] == edge_row[v * 3 + t]) {
          uint32_t r = edge_row[v * 3 + s];
          auto g = static_cast<uint32_t>(
              std::upper_bound(row_base.begin(), row_base.end(), r) - row_base.begin() - 1);
          if (rows_of[g] > 1)
            edge_row[v * 3 + s] = row_base[g] + (r - row_base[g] + 1) % rows_of[g];
        }

  for (auto r : edge_row) h.row_ptr[r + 1]++;
  for (uint32_t r = 0; r < n_rows; ++r) h.row_ptr[r + 1] += h.row_ptr[r];
  h.cols.resize(edge_row.size());
  std::vector<uint32_t> cursor(h.row_ptr.begin(), h.row_ptr.end() - 1);
  for (uint32_t v = 0; v < n_vars; ++v)
    for (uint32_t s = 0; s < 3; ++s) h.cols[cursor[edge_row[v * 3 + s]]++] = v;
  return h;
}

BitString syndrome(const ParityCheck& h, const BitString& bits, uint64_t first_bit) {
  BitString syn(h.n_rows);
  for (uint32_t r = 0; r < h.n_rows; ++r) {
    unsigned parity = 0;
    for (uint32_t e = h.row_ptr[r]; e < h.row_ptr[r + 1]; ++e)
      parity ^= bits.get(first_bit + h.cols[e]) ? 1u : 0u;
    syn.set(r, parity != 0);
  }
  return syn;
}

DecodeResult decode_syndrome(const ParityCheck& h, const BitString& target, double channel_p,
                             int max_iterations) {
  DecodeResult out;
  out.error = BitString(h.n_vars);
  if (h.n_rows == 0) {
    out.converged = true;
    return out;
  }

  const double p = std::clamp(channel_p, 1e-9, 0.499999);
  const auto prior = static_cast<float>(std::log((1.0 - p) / p));
  std::vector<float> llr(h.n_vars, prior);
  std::vector<float> msg(h.cols.size(), 0.0f);

  auto syndrome_matches = [&] {
    for (uint32_t r = 0; r < h.n_rows; ++r) {
      unsigned parity = 0;
      for (uint32_t e = h.row_ptr[r]; e < h.row_ptr[r + 1]; ++e)
        parity ^= llr[h.cols[e]] < 0.0f ? 1u : 0u;
      if ((parity != 0) != target.get(r)) return false;
    }
    return true;
  };

  for (int iter = 1; iter <= max_iterations; ++iter) {
    for (uint32_t r = 0; r < h.n_rows; ++r) {
      const uint32_t begin = h.row_ptr[r], end = h.row_ptr[r + 1];
      float min1 = 1e30f, min2 = 1e30f;
      uint32_t argmin = begin;
      unsigned sign = target.get(r) ? 1u : 0u;
      for (uint32_t e = begin; e < end; ++e) {
        float t = llr[h.cols[e]] - msg[e];
        if (t < 0.0f) sign ^= 1u;
        float a = std::fabs(t);
        if (a < min1) {
          min2 = min1;
          min1 = a;
          argmin = e;
        } else if (a < min2) {
          min2 = a;
        }
      }
      for (uint32_t e = begin; e < end; ++e) {
        float t = llr[h.cols[e]] - msg[e];
        float mag = (e == argmin ? min2 : min1) * kMinSumScale;
        unsigned neg = sign ^ (t < 0.0f ? 1u : 0u);
        float nm = neg ? -mag : mag;
        llr[h.cols[e]] = t + nm;
        msg[e] = nm;
      }
    }
    if (syndrome_matches()) {
      out.converged = true;
      out.iterations = iter;
      break;
    }
    out.iterations = iter;
  }
  for (uint32_t v = 0; v < h.n_vars; ++v) out.error.set(v, llr[v] < 0.0f);
  return out;
}

uint64_t verification_tag(const BitString& key, uint64_t seed) {
  HashSeed h = sample_hash(key.size(), 64, mix64(seed ^ stream_tag::ec_tag));
  BitString t = apply_hash(h, key);
  return t.words().empty() ? 0 : t.words()[0];
}

} // namespace ec_detail

namespace {

constexpr uint64_t kMaxBlockBits = uint64_t(1) << 20;
constexpr int kMaxDecoderIterations = 300;

// Channel estimate Bob infers from the syndrome mismatch density delta:
// a row of weight w differs with probability (1 - (1-2p)^w) / 2.
double infer_p_from_syndrome(double delta, double mean_row_weight) {
  delta = std::clamp(delta, 0.0, 0.499999);
  double inner = 1.0 - 2.0 * delta;
  return 0.5 * (1.0 - std::pow(inner, 1.0 / mean_row_weight));
}

} // namespace

EcResult error_correct(const BitString& alice_key, const BitString& bob_key,
                       double qber_estimate, double efficiency, uint64_t seed) {
  if (alice_key.size() != bob_key.size())
    throw std::invalid_argument("error_correct: length mismatch");
  if (!(efficiency >= 1.0)) throw std::invalid_argument("error_correct: efficiency must be >= 1");
  if (!(qber_estimate >= 0.0 && qber_estimate <= 1.0))
    throw std::invalid_argument("error_correct: qber_estimate outside [0,1]");

  const uint64_t n = alice_key.size();
  EcResult res;
  res.tag = ec_detail::verification_tag(alice_key, seed);

  const double p_size = std::min(qber_estimate, 0.5);
  auto rows_total = static_cast<uint64_t>(
      std::ceil(static_cast<double>(n) * efficiency * binary_entropy(p_size)));

  if (rows_total >= n) {
    // Syndrome would be at least as long as the key: publish the key itself.
    res.corrected = alice_key;
    res.messages = alice_key;
    res.n_c = static_cast<int64_t>(n) + 64;
    res.success = true;
    return res;
  }

  const uint64_t blocks = n == 0 ? 0 : (n + kMaxBlockBits - 1) / kMaxBlockBits;
  res.corrected = bob_key;
  res.messages = BitString(0);

  int worst_iters = 0;
  for (uint64_t b = 0; b < blocks; ++b) {
    const uint64_t begin = b * n / blocks;
    const uint64_t end = (b + 1) * n / blocks;
    const auto nb = static_cast<uint32_t>(end - begin);
    const auto mb = static_cast<uint32_t>(rows_total * (b + 1) / blocks - rows_total * b / blocks);
    ec_detail::ParityCheck h =
        ec_detail::build_parity_check(nb, mb, mix64(seed ^ stream_tag::ec_matrix) + b);

    BitString syn_alice = ec_detail::syndrome(h, alice_key, begin);
    BitString delta = ec_detail::syndrome(h, bob_key, begin);
    delta.xor_with(syn_alice);
    for (uint64_t i = 0; i < syn_alice.size(); ++i) res.messages.push_back(syn_alice.get(i));

    double p_dec = std::max(p_size, 1.0 / static_cast<double>(n));
    if (mb >= 64) {
      double mismatch = static_cast<double>(delta.count_ones()) / mb;
      double w = 3.0 * nb / mb;
      p_dec = std::max(p_dec, infer_p_from_syndrome(mismatch, w));
    }
    ec_detail::DecodeResult dec =
        ec_detail::decode_syndrome(h, delta, p_dec, kMaxDecoderIterations);
    worst_iters = std::max(worst_iters, dec.iterations);
    for (uint32_t v = 0; v < nb; ++v)
      if (dec.error.get(v)) res.corrected.set(begin + v, !res.corrected.get(begin + v));
  }

  res.iterations = worst_iters;
  res.n_c = static_cast<int64_t>(res.messages.size()) + 64;
  res.success = ec_detail::verification_tag(res.corrected, seed) == res.tag;
  return res;
}

QberSample qber_from_sample(const BitString& alice_key, const BitString& bob_key,
                            double sample_fraction, uint64_t seed) {
  if (alice_key.size() != bob_key.size())
    throw std::invalid_argument("qber_from_sample: length mismatch");
  if (!(sample_fraction > 0.0 && sample_fraction < 1.0))
    throw std::invalid_argument("qber_from_sample: fraction outside (0,1)");
  const uint64_t n = alice_key.size();
  const auto k = static_cast<uint64_t>(std::floor(static_cast<double>(n) * sample_fraction));
  if (k == 0) throw std::invalid_argument("qber_from_sample: empty sample");

  QberSample out;
  Prng rng = Prng::stream(seed, stream_tag::ec_sample, 0);
  if (k * 64 <= n) {
    // sparse draw by rejection
    std::unordered_set<uint64_t> seen;
    seen.reserve(static_cast<size_t>(k) * 2);
    std::vector<uint64_t> pos;
    pos.reserve(k);
    while (pos.size() < k) {
      uint64_t c = rng.below(n);
      if (seen.insert(c).second) pos.push_back(c);
    }
    out.positions = std::move(pos);
  } else {
    std::vector<uint64_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (uint64_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
    out.positions.assign(idx.begin(), idx.begin() + static_cast<int64_t>(k));
  }
  std::sort(out.positions.begin(), out.positions.end());

  uint64_t mismatches = 0;
  for (uint64_t p : out.positions) {
    bool ra = alice_key.get(p);
    out.disclosed.push_back(ra);
    if (ra != bob_key.get(p)) ++mismatches;
  }
  out.estimate = static_cast<double>(mismatches) / static_cast<double>(k);
  return out;
}

BitString remove_positions(const BitString& key, const std::vector<uint64_t>& positions) {
  BitString out;
  size_t next = 0;
  for (uint64_t i = 0; i < key.size(); ++i) {
    if (next < positions.size() && positions[next] == i) {
      ++next;
      continue;
    }
    out.push_back(key.get(i));
  }
  return out;
}

} // namespace diqkd

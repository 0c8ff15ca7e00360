#include "diqkd/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "diqkd/rng.hpp"

namespace diqkd {

NsVertexSet enumerate_ns_vertices(const BellScenario& scenario) {
  if (!scenario.is_chsh())
    throw std::invalid_argument("enumerate_ns_vertices: only the (2,2,2,2) scenario is supported");
  NsVertexSet set;
  set.vertices.reserve(24);
  for (int alpha = 0; alpha < 2; ++alpha)
    for (int beta = 0; beta < 2; ++beta)
      for (int gamma = 0; gamma < 2; ++gamma)
        for (int delta = 0; delta < 2; ++delta)
          set.vertices.push_back(Behavior::local_deterministic(alpha, beta, gamma, delta));
  for (int eps = 0; eps < 2; ++eps)
    for (int zeta = 0; zeta < 2; ++zeta)
      for (int eta = 0; eta < 2; ++eta)
        set.vertices.push_back(Behavior::pr_box_variant(eps, zeta, eta));
  return set;
}

double ns_guessing_envelope(const BellFunctional& functional, int a, int x, double i_value) {
  if (!functional.scenario().is_chsh())
    throw std::invalid_argument("ns_guessing_envelope: only the (2,2,2,2) scenario is supported");
  NsVertexSet set = enumerate_ns_vertices(functional.scenario());

  std::vector<std::pair<double, double>> pts; // (I_v, p_v(a|x))
  pts.reserve(set.vertices.size());
  double lo = 1e300, hi = -1e300;
  for (const Behavior& v : set.vertices) {
    double iv = evaluate_functional(v, functional);
    pts.emplace_back(iv, v.marginal_a(a, x));
    lo = std::min(lo, iv);
    hi = std::max(hi, iv);
  }
  if (i_value < lo - 1e-12 || i_value > hi + 1e-12)
    throw std::invalid_argument("ns_guessing_envelope: Bell value outside achievable range");
  i_value = std::clamp(i_value, lo, hi);

  // Upper convex hull (Andrew's monotone chain on the point set).
  std::sort(pts.begin(), pts.end());
  std::vector<std::pair<double, double>> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      auto& o = hull[hull.size() - 2];
      auto& q = hull[hull.size() - 1];
      double cross = (q.first - o.first) * (p.second - o.second) -
                     (q.second - o.second) * (p.first - o.first);
      if (cross >= 0) // q below or on segment o-p: drop it
        hull.pop_back();
      else
        break;
    }
    // keep only the topmost point at equal I
    if (!hull.empty() && hull.back().first == p.first) {
      if (p.second > hull.back().second) hull.back() = p;
      continue;
    }
    hull.push_back(p);
  }

  if (hull.size() == 1) return hull.front().second;
  for (size_t i = 1; i < hull.size(); ++i) {
    if (i_value <= hull[i].first + 1e-15) {
      const auto& [i0, p0] = hull[i - 1];
      const auto& [i1, p1] = hull[i];
      double w = (i_value - i0) / (i1 - i0);
      return p0 + w * (p1 - p0);
    }
  }
  return hull.back().second;
}

double classical_bound_by_enumeration(const BellFunctional& functional) {
  const BellScenario& sc = functional.scenario();
  double strategies_a = std::pow(static_cast<double>(sc.a_outputs), sc.x_inputs);
  double strategies_b = std::pow(static_cast<double>(sc.b_outputs), sc.y_inputs);
  if (strategies_a * strategies_b > 1e6)
    throw std::invalid_argument("classical_bound_by_enumeration: scenario too large");

  const auto na = static_cast<uint64_t>(strategies_a);
  const auto nb = static_cast<uint64_t>(strategies_b);
  double best = -1e300;
  std::vector<int> fa(static_cast<size_t>(sc.x_inputs)), fb(static_cast<size_t>(sc.y_inputs));
  for (uint64_t ia = 0; ia < na; ++ia) {
    uint64_t t = ia;
    for (int x = 0; x < sc.x_inputs; ++x) {
      fa[static_cast<size_t>(x)] = static_cast<int>(t % sc.a_outputs);
      t /= sc.a_outputs;
    }
    for (uint64_t ib = 0; ib < nb; ++ib) {
      uint64_t u = ib;
      for (int y = 0; y < sc.y_inputs; ++y) {
        fb[static_cast<size_t>(y)] = static_cast<int>(u % sc.b_outputs);
        u /= sc.b_outputs;
      }
      double s = 0.0;
      for (int x = 0; x < sc.x_inputs; ++x)
        for (int y = 0; y < sc.y_inputs; ++y)
          s += functional.beta(fa[static_cast<size_t>(x)], fb[static_cast<size_t>(y)], x, y);
      best = std::max(best, s);
    }
  }
  return best;
}

double JointRE::p_guess() const {
  double s = 0.0;
  const auto n_r = size_t(1) << r_bits;
  for (int e = 0; e < e_values; ++e) {
    double m = 0.0;
    for (size_t r = 0; r < n_r; ++r) m = std::max(m, probability(static_cast<uint32_t>(r), e));
    s += m;
  }
  return s;
}

void JointRE::validate() const {
  if (r_bits < 0 || e_values < 1) throw std::invalid_argument("JointRE: bad shape");
  if (p.size() != (size_t(1) << r_bits) * static_cast<size_t>(e_values))
    throw std::invalid_argument("JointRE: table size mismatch");
  double s = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw std::invalid_argument("JointRE: negative probability");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("JointRE: not normalized");
}

namespace {

// Toeplitz hash of an r_bits-wide input under seed bits s: output bit i is
// parity((s >> i) & r) for i = 0..n_out-1, i.e. T[i][j] = s[i+j].
inline uint32_t toeplitz_small(uint32_t seed_bits, uint32_t r, int n_out) {
  uint32_t k = 0;
  for (int i = 0; i < n_out; ++i)
    k |= static_cast<uint32_t>(std::popcount((seed_bits >> i) & r) & 1) << i;
  return k;
}

// Per-seed distance sum_{k,e} |P(k,e | f) - 2^-n_out P(e)|.
double per_seed_distance(const JointRE& joint, int n_out, uint32_t seed_bits,
                         const std::vector<double>& p_e, std::vector<double>& acc) {
  const auto n_r = size_t(1) << joint.r_bits;
  const auto n_k = size_t(1) << n_out;
  std::fill(acc.begin(), acc.end(), 0.0);
  for (size_t r = 0; r < n_r; ++r) {
    uint32_t k = toeplitz_small(seed_bits, static_cast<uint32_t>(r), n_out);
    const double* row = &joint.p[r * static_cast<size_t>(joint.e_values)];
    double* dst = &acc[static_cast<size_t>(k) * static_cast<size_t>(joint.e_values)];
    for (int e = 0; e < joint.e_values; ++e) dst[static_cast<size_t>(e)] += row[e];
  }
  const double ideal = std::ldexp(1.0, -n_out);
  double d = 0.0;
  for (size_t k = 0; k < n_k; ++k)
    for (int e = 0; e < joint.e_values; ++e)
      d += std::abs(acc[k * static_cast<size_t>(joint.e_values) + static_cast<size_t>(e)] -
                    ideal * p_e[static_cast<size_t>(e)]);
  return d;
}

std::vector<double> marginal_e(const JointRE& joint) {
  std::vector<double> p_e(static_cast<size_t>(joint.e_values), 0.0);
  const auto n_r = size_t(1) << joint.r_bits;
  for (size_t r = 0; r < n_r; ++r)
    for (int e = 0; e < joint.e_values; ++e)
      p_e[static_cast<size_t>(e)] += joint.probability(static_cast<uint32_t>(r), e);
  return p_e;
}

} // namespace

HashDistanceResult exhaustive_hash_distance(const JointRE& joint, int n_out) {
  joint.validate();
  if (n_out < 0) throw std::invalid_argument("exhaustive_hash_distance: negative output length");
  const int seed_len = std::max(0, joint.r_bits + n_out - 1);
  if (joint.r_bits > 10 || joint.e_values > 64 || seed_len > 20)
    throw std::invalid_argument("exhaustive_hash_distance: alphabet too large for exact mode");

  if (n_out == 0) // empty key: K is the unique 0-bit string, distance 0 by convention
    return {0.0, 0.0, true, 1};

  const auto n_seeds = uint64_t(1) << seed_len;
  const auto n_k = size_t(1) << n_out;
  std::vector<double> p_e = marginal_e(joint);
  std::vector<double> acc(n_k * static_cast<size_t>(joint.e_values));
  double total = 0.0;
  for (uint64_t s = 0; s < n_seeds; ++s)
    total += per_seed_distance(joint, n_out, static_cast<uint32_t>(s), p_e, acc);
  return {total / static_cast<double>(n_seeds), 0.0, true, n_seeds};
}

HashDistanceResult sampled_hash_distance(const JointRE& joint, int n_out, uint64_t samples,
                                         uint64_t seed) {
  joint.validate();
  if (n_out < 0) throw std::invalid_argument("sampled_hash_distance: negative output length");
  if (samples < 10000)
    throw std::invalid_argument("sampled_hash_distance: need >= 1e4 sampled seeds");
  const int seed_len = std::max(0, joint.r_bits + n_out - 1);
  if (joint.r_bits > 20 || seed_len > 32)
    throw std::invalid_argument("sampled_hash_distance: input too wide");
  if (n_out == 0) return {0.0, 0.0, false, samples};

  const auto n_k = size_t(1) << n_out;
  std::vector<double> p_e = marginal_e(joint);
  std::vector<double> acc(n_k * static_cast<size_t>(joint.e_values));
  Prng rng = Prng::stream(seed, stream_tag::generic, 0);
  double sum = 0.0, sum_sq = 0.0;
  const uint64_t mask = seed_len >= 32 ? 0xFFFFFFFFull : ((uint64_t(1) << seed_len) - 1);
  for (uint64_t i = 0; i < samples; ++i) {
    auto s = static_cast<uint32_t>(rng.next_u64() & mask);
    double d = per_seed_distance(joint, n_out, s, p_e, acc);
    sum += d;
    sum_sq += d * d;
  }
  double mean = sum / static_cast<double>(samples);
  double var = std::max(0.0, sum_sq / static_cast<double>(samples) - mean * mean);
  double se = std::sqrt(var / static_cast<double>(samples));
  return {mean, se, false, samples};
}

} // namespace diqkd

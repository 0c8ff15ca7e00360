#include "diqkd/rates.hpp"

#include <cmath>
#include <stdexcept>

#include "diqkd/protocol.hpp"
#include "diqkd/reconcile.hpp"
#include "diqkd/rng.hpp"

namespace diqkd {

namespace {
const double kTsirelson = 2.0 * std::sqrt(2.0);

RandomnessBound bound_of(BoundKind kind) {
  return kind == BoundKind::quantum ? RandomnessBound::quantum_chsh()
                                    : RandomnessBound::no_signalling_chsh();
}
} // namespace

double asymptotic_rate(double nu, const RandomnessBound& bound) {
  if (!(nu >= 0.0 && nu <= 1.0))
    throw std::invalid_argument("asymptotic_rate: visibility outside [0,1]");
  return -std::log2(bound.evaluate(kTsirelson * nu)) - binary_entropy((1.0 - nu) / 2.0);
}

double asymptotic_rate(double nu, BoundKind kind) { return asymptotic_rate(nu, bound_of(kind)); }

double critical_visibility(const RandomnessBound& bound) {
  double lo = 0.0, hi = 1.0;
  double f_lo = asymptotic_rate(lo, bound);
  double f_hi = asymptotic_rate(hi, bound);
  if (!(f_lo < 0.0 && f_hi > 0.0))
    throw std::runtime_error("critical_visibility: no sign change on (0,1)");
  while (hi - lo > 1e-9) {
    double mid = 0.5 * (lo + hi);
    if (asymptotic_rate(mid, bound) > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double critical_visibility(BoundKind kind) { return critical_visibility(bound_of(kind)); }

std::vector<RatePoint> rate_curve(std::span<const double> noise_grid) {
  std::vector<RatePoint> points;
  points.reserve(noise_grid.size());
  for (double noise : noise_grid) {
    if (!(noise >= 0.0 && noise <= 1.0))
      throw std::invalid_argument("rate_curve: noise outside [0,1]");
    RatePoint p;
    p.noise = noise;
    p.visibility = 1.0 - noise;
    p.chsh_value = kTsirelson * p.visibility;
    p.rate_qm = asymptotic_rate(p.visibility, BoundKind::quantum);
    p.rate_ns = asymptotic_rate(p.visibility, BoundKind::no_signalling);
    p.rate_qm_clamped = std::max(0.0, p.rate_qm);
    p.rate_ns_clamped = std::max(0.0, p.rate_ns);
    points.push_back(p);
  }
  return points;
}

FiniteSizeRate finite_size_rate(int64_t n, double nu, int trials, uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("finite_size_rate: trials must be >= 1");
  FiniteSizeRate out;
  out.trials = trials;
  out.n_ks.reserve(static_cast<size_t>(trials));
  double sum = 0.0, sum_sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    uint64_t trial_seed = mix64(mix64(seed ^ stream_tag::trial) ^ static_cast<uint64_t>(t));
    ProtocolParams params = ProtocolParams::chsh_defaults(n, trial_seed);
    params.qber_hint = (1.0 - nu) / 2.0;
    params.retain_round_records = false; // aggregate statistics only
    auto devices = honest_pair({nu, KeySettingMode::aligned_extra_setting}, trial_seed);
    RunOutcome outcome = run_full_protocol(params, *devices);
    out.n_ks.push_back(outcome.transcript.n_k);
    double rate = static_cast<double>(outcome.transcript.n_k) / static_cast<double>(n);
    sum += rate;
    sum_sq += rate * rate;
  }
  out.mean = sum / trials;
  if (trials > 1) {
    double var = (sum_sq - sum * sum / trials) / (trials - 1);
    out.stddev = std::sqrt(std::max(0.0, var));
  }
  return out;
}

} // namespace diqkd

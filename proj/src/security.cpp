#include "diqkd/security.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "diqkd/rng.hpp"

namespace diqkd {

double beta0(const BellFunctional& functional, const BellScenario& scenario) {
  return std::sqrt(8.0) * static_cast<double>(scenario.x_inputs) *
         static_cast<double>(scenario.y_inputs) * functional.max_abs_coefficient();
}

double azuma_tail(int64_t m, int64_t n, double beta0_value) {
  if (m < 0 || n < 1) throw std::invalid_argument("azuma_tail: need m >= 0, n >= 1");
  if (!(beta0_value > 0.0)) throw std::invalid_argument("azuma_tail: beta0 must be positive");
  double exponent = static_cast<double>(m) * std::pow(static_cast<double>(n), -0.75) /
                    (beta0_value * beta0_value);
  return std::exp(-exponent);
}

double good_event_bound(int64_t m, int64_t n, int64_t e_size, const BellScenario& scenario,
                        double beta0_value) {
  double lambda = static_cast<double>(scenario.a_outputs) * static_cast<double>(scenario.b_outputs);
  double value = 1.0 - 3.0 * azuma_tail(m, n, beta0_value) -
                 std::pow(lambda, -static_cast<double>(e_size));
  return std::max(0.0, value);
}

TheoremDistance theorem_distance(int64_t n, int64_t m, int64_t e_size,
                                 const BellScenario& scenario, double beta0_value) {
  TheoremDistance d;
  double lambda = static_cast<double>(scenario.a_outputs) * static_cast<double>(scenario.b_outputs);
  d.term1 = std::exp2(0.5 * (1.0 - std::sqrt(static_cast<double>(n))));
  d.term2 = 6.0 * azuma_tail(m, n, beta0_value);
  d.term3 = 2.0 * std::pow(lambda, -static_cast<double>(e_size));
  d.raw = d.term1 + d.term2 + d.term3;
  d.capped = std::min(d.raw, 2.0);
  d.vacuous = d.raw >= 2.0;
  return d;
}

double psucc_bound(double distance) {
  if (!(distance >= 0.0)) throw std::invalid_argument("psucc_bound: distance must be >= 0");
  return std::min(1.0, 0.5 + distance / 4.0);
}

double term2_crossover_n(double threshold_bits, double m_fraction, double beta0_value) {
  // term2 = 6 exp(-m_fraction n^(1/4) / beta0^2) <= 2^-threshold_bits solves in
  // closed form; returned for completeness rather than searched.
  double target = threshold_bits * std::log(2.0) + std::log(6.0);
  double quarter_root = target * beta0_value * beta0_value / m_fraction;
  return std::pow(quarter_root, 4.0);
}

SecurityReport build_security_report(const ProtocolParams& params, int64_t m, int64_t e_size,
                                     double i_est, int64_t n_c, int64_t n_k) {
  SecurityReport r;
  r.n = params.n;
  r.m = m;
  r.e_size = e_size;
  r.i_est = i_est;
  r.n_c = n_c;
  r.n_k = n_k;
  r.beta0 = beta0(params.functional, params.scenario);
  r.azuma_tail = azuma_tail(m, params.n, r.beta0);
  r.good_event_lower_bound = good_event_bound(m, params.n, e_size, params.scenario, r.beta0);
  TheoremDistance d = theorem_distance(params.n, m, e_size, params.scenario, r.beta0);
  r.theorem_term1 = d.term1;
  r.theorem_term2 = d.term2;
  r.theorem_term3 = d.term3;
  r.theorem_distance_raw = d.raw;
  r.theorem_distance = d.capped;
  r.theorem_vacuous = d.vacuous;
  r.p_succ_bound = psucc_bound(d.capped);

  const double nd = static_cast<double>(params.n);
  const double n8 = std::pow(nd, 0.125);
  const double q = params.q;
  r.eq4_factor = (n8 - 1.0) * (n8 - 1.0);
  double ratio = (1.0 - q) / q;
  r.lemma3_factor = ratio * ratio + 1.0; // = 1 / Pr{U=1|U=V}
  r.factor_gap = r.lemma3_factor - r.eq4_factor;
  if (m > 0) {
    double i_pos = std::max(i_est, 0.0);
    double scale = static_cast<double>(e_size) / static_cast<double>(m);
    r.tau_argument_eq4 = scale * r.eq4_factor * i_pos - 1.0 / n8;
    r.tau_argument_lemma3 = scale * r.lemma3_factor * i_pos - 1.0 / n8;
    r.tau_eq4 = params.bound.evaluate(r.tau_argument_eq4);
    r.tau_lemma3 = params.bound.evaluate(r.tau_argument_lemma3);
  }
  return r;
}

namespace {

// Enumerate z_i values: key round, or test round with inputs (x,y).
struct ZChoice {
  bool test;
  int x, y;
};

std::vector<ZChoice> z_choices(const BellScenario& sc) {
  std::vector<ZChoice> zs;
  zs.push_back({false, 0, 0});
  for (int x = 0; x < sc.x_inputs; ++x)
    for (int y = 0; y < sc.y_inputs; ++y) zs.push_back({true, x, y});
  return zs;
}

void lemma1_recurse(const ChainStrategy& strategy, const BellFunctional& functional,
                    const RandomnessBound& bound, const std::vector<ZChoice>& zs,
                    std::vector<RoundStep>& prefix, double chain_p, double i_sum,
                    Lemma1Result& result) {
  const BellScenario& sc = functional.scenario();
  int depth = static_cast<int>(prefix.size());
  if (depth == strategy.rounds) {
    double i_bar = i_sum / strategy.rounds;
    double rhs = std::pow(bound.evaluate(i_bar), strategy.rounds);
    double margin = rhs - chain_p;
    if (margin < result.worst_margin) {
      result.worst_margin = margin;
      result.lhs = chain_p;
      result.rhs = rhs;
      result.worst = prefix;
    }
    return;
  }

  Behavior behavior = strategy.behavior_for(prefix);
  double i_round = evaluate_functional(behavior, functional);
  for (const ZChoice& z : zs) {
    if (!z.test) {
      for (int a = 0; a < sc.a_outputs; ++a) {
        double p = behavior.marginal_a(a, 0); // key rounds measure input 0
        if (p <= 0.0) continue;
        prefix.push_back({false, 0, 0, a, 0});
        lemma1_recurse(strategy, functional, bound, zs, prefix, chain_p * p, i_sum + i_round,
                       result);
        prefix.pop_back();
      }
    } else {
      for (int a = 0; a < sc.a_outputs; ++a)
        for (int b = 0; b < sc.b_outputs; ++b) {
          double p = behavior.at(a, b, z.x, z.y);
          if (p <= 0.0) continue;
          prefix.push_back({true, z.x, z.y, a, b});
          lemma1_recurse(strategy, functional, bound, zs, prefix, chain_p * p, i_sum + i_round,
                         result);
          prefix.pop_back();
        }
    }
  }
}

} // namespace

Lemma1Result lemma1_check(const ChainStrategy& strategy, const BellFunctional& functional,
                          const RandomnessBound& bound) {
  if (strategy.rounds < 1 || strategy.rounds > 4)
    throw std::invalid_argument("lemma1_check: rounds must be in [1,4]");
  Lemma1Result result;
  result.worst_margin = 1e300;
  std::vector<RoundStep> prefix;
  std::vector<ZChoice> zs = z_choices(functional.scenario());
  lemma1_recurse(strategy, functional, bound, zs, prefix, 1.0, 0.0, result);
  result.holds = result.worst_margin >= -1e-12;
  return result;
}

MartingaleStats martingale_empirical(
    const std::function<std::unique_ptr<DevicePair>(uint64_t trial_seed)>& make_devices,
    const ProtocolParams& params, int trials) {
  if (trials < 1) throw std::invalid_argument("martingale_empirical: trials must be >= 1");
  MartingaleStats stats;
  stats.trials = trials;

  const double q = params.q;
  const double pr_test_given_sifted = q * q / (q * q + (1.0 - q) * (1.0 - q));
  const double n_eighth = std::pow(static_cast<double>(params.n), -0.125);
  const double b0 = beta0(params.functional, params.scenario);

  int64_t violations = 0;
  double sum_m = 0.0, sum_i_est = 0.0;
  int estimated_trials = 0;
  for (int t = 0; t < trials; ++t) {
    uint64_t trial_seed = mix64(mix64(params.seed ^ stream_tag::trial) ^ static_cast<uint64_t>(t));
    std::unique_ptr<DevicePair> devices = make_devices(trial_seed);
    ProtocolParams p = params;
    p.seed = trial_seed;

    int64_t m = 0, e_size = 0;
    double beta_sum = 0.0, i_bar_sum = 0.0;
    for (int64_t j = 0; j < p.n; ++j) {
      Prng rng = Prng::stream(p.seed, stream_tag::protocol, static_cast<uint64_t>(j));
      bool u = rng.bernoulli(p.q);
      bool v = rng.bernoulli(p.q);
      int x = u ? static_cast<int>(rng.below(static_cast<uint64_t>(p.scenario.x_inputs)))
                : kKeyInput;
      int y = v ? static_cast<int>(rng.below(static_cast<uint64_t>(p.scenario.y_inputs)))
                : kKeyInput;
      if (u == v) {
        auto behavior = devices->declared_behavior();
        if (!behavior)
          throw std::invalid_argument(
              "martingale_empirical: devices do not expose round-wise conditionals");
        i_bar_sum += evaluate_functional(*behavior, p.functional);
      }
      auto [a, b] = devices->respond(static_cast<uint64_t>(j), x, y);
      if (u == v) {
        ++m;
        if (u) {
          ++e_size;
          beta_sum += p.functional.beta(a, b, x, y);
        }
      }
    }
    if (m == 0 || e_size == 0) continue; // no estimate; the bad event is undefined
    ++estimated_trials;
    double i_est = static_cast<double>(p.scenario.x_inputs) *
                   static_cast<double>(p.scenario.y_inputs) * beta_sum /
                   static_cast<double>(e_size);
    double i_bar = i_bar_sum / static_cast<double>(m);
    double bound = static_cast<double>(e_size) * i_est /
                       (static_cast<double>(m) * pr_test_given_sifted) -
                   n_eighth;
    if (i_bar <= bound) ++violations;
    sum_m += static_cast<double>(m);
    sum_i_est += i_est;
  }

  if (estimated_trials > 0) {
    stats.mean_m = sum_m / estimated_trials;
    stats.mean_i_est = sum_i_est / estimated_trials;
    stats.violation_frequency = static_cast<double>(violations) / estimated_trials;
    stats.azuma_tail_bound =
        azuma_tail(static_cast<int64_t>(std::llround(stats.mean_m)), params.n, b0);
  }
  return stats;
}

} // namespace diqkd

#include "diqkd/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "diqkd/rng.hpp"
#include "diqkd/security.hpp"

namespace diqkd {

double ProtocolParams::default_q(int64_t n) { return std::pow(static_cast<double>(n), -0.125); }

ProtocolParams ProtocolParams::chsh_defaults(int64_t n, uint64_t seed) {
  ProtocolParams p;
  p.n = n;
  p.q = default_q(n);
  p.seed = seed;
  return p;
}

void ProtocolParams::validate() const {
  if (n < 16) throw std::invalid_argument("ProtocolParams: n must be >= 16");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("ProtocolParams: q must be in (0,1)");
  if (!(ec_efficiency >= 1.0))
    throw std::invalid_argument("ProtocolParams: ec_efficiency must be >= 1");
  if (ec_sample_fraction < 0.0 || ec_sample_fraction >= 1.0)
    throw std::invalid_argument("ProtocolParams: ec_sample_fraction must be in [0,1)");
}

const char* to_string(AbortStatus status) {
  switch (status) {
  case AbortStatus::none: return "none";
  case AbortStatus::no_estimate: return "no-estimate";
  case AbortStatus::ec_failure: return "ec-failure";
  case AbortStatus::key_length_zero: return "key-length-zero";
  }
  return "?";
}

namespace {

// One pass over all rounds with a fixed per-round draw order: u, v, then x
// when u = 1, then y when v = 1, each from the round's protocol substream.
template <typename Visitor>
void for_each_round(const ProtocolParams& params, DevicePair& devices, Visitor&& visit) {
  const int lx = params.scenario.x_inputs;
  const int ly = params.scenario.y_inputs;
  for (int64_t j = 0; j < params.n; ++j) {
    Prng rng = Prng::stream(params.seed, stream_tag::protocol, static_cast<uint64_t>(j));
    bool u = rng.bernoulli(params.q);
    bool v = rng.bernoulli(params.q);
    int x = u ? static_cast<int>(rng.below(static_cast<uint64_t>(lx))) : kKeyInput;
    int y = v ? static_cast<int>(rng.below(static_cast<uint64_t>(ly))) : kKeyInput;
    auto [a, b] = devices.respond(static_cast<uint64_t>(j), x, y);
    visit(j, u, v, u ? x : 0, v ? y : 0, a, b);
  }
}

struct SiftAccumulator {
  Sifted sifted;
  bool keep_index = true;

  void add(int64_t j, bool u, bool v, int x, int y, int a, int b) {
    if (u != v) return;
    if (keep_index) sifted.round_index.push_back(static_cast<uint64_t>(j));
    sifted.u_bits.push_back(u);
    if (u) {
      sifted.est_positions.push_back(sifted.u_bits.size() - 1);
      sifted.est_records.push_back({static_cast<uint8_t>(a), static_cast<uint8_t>(b),
                                    static_cast<uint8_t>(x), static_cast<uint8_t>(y)});
    } else {
      sifted.key_alice.push_back(a != 0);
      sifted.key_bob.push_back(b != 0);
    }
  }
};

} // namespace

std::vector<RoundRecord> run_measurement_phase(const ProtocolParams& params, DevicePair& devices) {
  std::vector<RoundRecord> records;
  records.reserve(static_cast<size_t>(params.n));
  for_each_round(params, devices, [&](int64_t, bool u, bool v, int x, int y, int a, int b) {
    records.push_back({static_cast<uint8_t>(u), static_cast<uint8_t>(v), static_cast<uint8_t>(x),
                       static_cast<uint8_t>(y), static_cast<uint8_t>(a),
                       static_cast<uint8_t>(b)});
  });
  return records;
}

Sifted sift(const ProtocolParams& params, std::span<const RoundRecord> records) {
  SiftAccumulator acc;
  acc.sifted.n = params.n;
  for (size_t j = 0; j < records.size(); ++j) {
    const RoundRecord& r = records[j];
    acc.add(static_cast<int64_t>(j), r.u != 0, r.v != 0, r.x, r.y, r.a, r.b);
  }
  return std::move(acc.sifted);
}

double estimate_bell(const Sifted& sifted, const BellFunctional& functional) {
  if (sifted.est_records.empty()) throw NoEstimateError();
  const BellScenario& sc = functional.scenario();
  double s = 0.0;
  for (const EstRecord& r : sifted.est_records) s += functional.beta(r.a, r.b, r.x, r.y);
  return static_cast<double>(sc.x_inputs) * static_cast<double>(sc.y_inputs) * s /
         static_cast<double>(sifted.est_records.size());
}

RunOutcome run_full_protocol(const ProtocolParams& params, DevicePair& devices) {
  params.validate();
  if (!(devices.scenario() == params.scenario))
    throw std::invalid_argument("run_full_protocol: devices do not match the scenario");
  if (params.scenario.a_outputs != 2 || params.scenario.b_outputs != 2)
    throw std::invalid_argument("run_full_protocol: only binary outputs are supported");

  RunOutcome out;
  Transcript& tr = out.transcript;
  tr.n = params.n;
  tr.q = params.q;
  tr.seed = params.seed;
  tr.ec_efficiency = params.ec_efficiency;
  tr.bound_name = params.bound.name();
  tr.phase_boundary_round = static_cast<uint64_t>(params.n);

  SiftAccumulator acc;
  acc.sifted.n = params.n;
  acc.keep_index = params.retain_round_records;
  if (params.retain_round_records) tr.rounds.reserve(static_cast<size_t>(params.n));
  for_each_round(params, devices, [&](int64_t j, bool u, bool v, int x, int y, int a, int b) {
    if (params.retain_round_records)
      tr.rounds.push_back({static_cast<uint8_t>(u), static_cast<uint8_t>(v),
                           static_cast<uint8_t>(x), static_cast<uint8_t>(y),
                           static_cast<uint8_t>(a), static_cast<uint8_t>(b)});
    acc.add(j, u, v, x, y, a, b);
  });
  tr.sifted = std::move(acc.sifted);

  auto finish = [&](AbortStatus status) {
    tr.abort = status;
    tr.n_k = 0;
    out.report = build_security_report(params, tr.sifted.m(), tr.sifted.e_size(),
                                       tr.has_estimate ? tr.i_est : 0.0, tr.n_c, tr.n_k);
    return std::move(out);
  };

  // Step 2: estimation
  try {
    tr.i_est = estimate_bell(tr.sifted, params.functional);
    tr.has_estimate = true;
  } catch (const NoEstimateError&) {
    return finish(AbortStatus::no_estimate);
  }

  // Step 3: error correction
  BitString alice = tr.sifted.key_alice;
  BitString bob = tr.sifted.key_bob;
  double qber_estimate;
  if (params.ec_sample_fraction > 0.0 && alice.size() > 0) {
    QberSample sample = qber_from_sample(alice, bob, params.ec_sample_fraction, params.seed);
    tr.ec_sample_positions = sample.positions;
    tr.ec_sample_values = sample.disclosed;
    tr.n_c += static_cast<int64_t>(sample.positions.size());
    alice = remove_positions(alice, sample.positions);
    bob = remove_positions(bob, sample.positions);
    qber_estimate = sample.estimate;
  } else if (params.qber_hint) {
    qber_estimate = *params.qber_hint;
  } else {
    // Public fallback: infer the channel from the published Bell estimate.
    double nu_hat = std::clamp(tr.i_est / (2.0 * std::sqrt(2.0)), 0.0, 1.0);
    qber_estimate = 0.5 * (1.0 - nu_hat);
  }

  EcResult ec = error_correct(alice, bob, qber_estimate, params.ec_efficiency, params.seed);
  tr.ec_syndrome = ec.messages;
  tr.ec_tag = ec.tag;
  tr.ec_success = ec.success;
  tr.n_c += ec.n_c;
  if (!ec.success) return finish(AbortStatus::ec_failure);

  // Step 4: privacy amplification
  tr.n_k = key_length(tr.sifted.m(), tr.sifted.e_size(), tr.i_est, tr.n_c, tr.n, params.bound,
                      params.scenario);
  tr.hash_seed = sample_hash(alice.size(), static_cast<uint64_t>(tr.n_k), params.seed);
  tr.key_alice = apply_hash(tr.hash_seed, alice);
  tr.key_bob = apply_hash(tr.hash_seed, ec.corrected);
  if (tr.n_k == 0) {
    tr.abort = AbortStatus::key_length_zero;
  }
  out.report = build_security_report(params, tr.sifted.m(), tr.sifted.e_size(), tr.i_est, tr.n_c,
                                     tr.n_k);
  return out;
}

} // namespace diqkd

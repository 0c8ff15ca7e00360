#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "diqkd/bell.hpp"
#include "diqkd/bitstring.hpp"
#include "diqkd/devices.hpp"
#include "diqkd/privacy.hpp"
#include "diqkd/reconcile.hpp"
#include "diqkd/security_report.hpp"

namespace diqkd {

struct ProtocolParams {
  int64_t n = 0;
  double q = 0.0; // test probability; default_q(n) = n^(-1/8)
  BellScenario scenario = BellScenario::chsh();
  BellFunctional functional = BellFunctional::chsh();
  RandomnessBound bound = RandomnessBound::quantum_chsh();
  double ec_efficiency = 1.2;
  uint64_t seed = 0;

  // Channel estimate used to size the error-correction syndrome. Honest
  // callers derive it from the device model ((1 - nu) / 2 in aligned mode).
  std::optional<double> qber_hint;
  // When positive, a seed-chosen fraction of the raw key is disclosed and its
  // mismatch rate is used for sizing instead of the hint; the disclosed bits
  // are removed from both keys and charged to n_C.
  double ec_sample_fraction = 0.0;

  bool retain_round_records = true;

  static double default_q(int64_t n);
  static ProtocolParams chsh_defaults(int64_t n, uint64_t seed);
  void validate() const; // n >= 16, q in (0,1), f >= 1
};

struct RoundRecord {
  uint8_t u = 0, v = 0;
  uint8_t x = 0, y = 0; // published values; key rounds carry 0 by construction
  uint8_t a = 0, b = 0;
};

struct EstRecord {
  uint8_t a = 0, b = 0, x = 0, y = 0;
};

// Sifted view of a run: rounds with u = v, relabeled i = 1..m in time order.
struct Sifted {
  int64_t n = 0;
  std::vector<uint64_t> round_index; // original j per sifted i (empty if not retained)
  BitString u_bits;                  // u_i (= v_i) per sifted round
  std::vector<uint64_t> est_positions; // sifted indices with u = 1 (the set E)
  std::vector<EstRecord> est_records;  // published (a,b,x,y) per member of E
  BitString key_alice;               // R = (A_i), i not in E
  BitString key_bob;                 // S = (B_i), i not in E

  int64_t m() const { return static_cast<int64_t>(u_bits.size()); }
  int64_t e_size() const { return static_cast<int64_t>(est_positions.size()); }
};

class NoEstimateError : public std::runtime_error {
public:
  NoEstimateError() : std::runtime_error("estimation set is empty") {}
};

enum class AbortStatus { none, no_estimate, ec_failure, key_length_zero };
const char* to_string(AbortStatus status);

struct Transcript {
  int64_t n = 0;
  double q = 0.0;
  uint64_t seed = 0;
  double ec_efficiency = 1.2;
  std::string bound_name;
  uint64_t phase_boundary_round = 0; // all communication happens after this round

  std::vector<RoundRecord> rounds; // empty when round records are not retained
  Sifted sifted;

  bool has_estimate = false;
  double i_est = 0.0;

  // public error-correction section
  std::vector<uint64_t> ec_sample_positions;
  BitString ec_sample_values;
  BitString ec_syndrome;
  uint64_t ec_tag = 0;
  bool ec_success = false;
  int64_t n_c = 0;

  HashSeed hash_seed; // F (published); input_len 0 when PA never ran
  BitString key_alice, key_bob;
  int64_t n_k = 0;

  AbortStatus abort = AbortStatus::none;
};

struct RunOutcome {
  Transcript transcript;
  SecurityReport report;
};

// Step 1: per-round u, v ~ Bernoulli(q); test inputs uniform; device queried
// once per round in order. Key rounds pass the device kKeyInput and publish
// input 0.
std::vector<RoundRecord> run_measurement_phase(const ProtocolParams& params, DevicePair& devices);

// Step 2 bookkeeping: keep rounds with u = v, partition into E and key rounds.
Sifted sift(const ProtocolParams& params, std::span<const RoundRecord> records);

// I_est = (lambda_X lambda_Y / |E|) sum_E beta(a,b,x,y). Throws
// NoEstimateError when E is empty.
double estimate_bell(const Sifted& sifted, const BellFunctional& functional);

// Steps 1-4 end to end; aborts are recorded in the transcript (n_K = 0), not
// thrown.
RunOutcome run_full_protocol(const ProtocolParams& params, DevicePair& devices);

} // namespace diqkd

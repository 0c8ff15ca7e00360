#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "diqkd/bell.hpp"
#include "diqkd/rng.hpp"

namespace diqkd {

// Input value the protocol passes for key rounds. The honest device maps it
// to its key setting; the value never appears in published data (key rounds
// publish input 0 by construction).
inline constexpr int kKeyInput = -1;

struct PastRound {
  int x = 0, y = 0; // as seen by the device, kKeyInput included
  int a = 0, b = 0;
};

// A pair of measurement devices behind one interface. respond() must be
// called with strictly increasing round indices; outputs of memory devices
// may depend on the full history. No-signalling is a property of the honest
// implementations, not of the interface.
class DevicePair {
public:
  virtual ~DevicePair() = default;

  const BellScenario& scenario() const { return scenario_; }

  std::pair<int, int> respond(uint64_t round_index, int x, int y) {
    if (started_ && round_index < next_round_)
      throw std::logic_error("DevicePair: rounds must be queried in increasing order");
    started_ = true;
    next_round_ = round_index + 1;
    return respond_impl(round_index, x, y);
  }

  // Single-round conditional behavior over the test inputs, given the history
  // so far (i.e. for the round respond() would serve next). Devices that
  // cannot declare one return nullopt; the martingale checker requires it.
  virtual std::optional<Behavior> declared_behavior() const { return std::nullopt; }

protected:
  explicit DevicePair(BellScenario scenario) : scenario_(scenario) {}
  virtual std::pair<int, int> respond_impl(uint64_t round_index, int x, int y) = 0;

private:
  BellScenario scenario_;
  uint64_t next_round_ = 0;
  bool started_ = false;
};

enum class KeySettingMode {
  aligned_extra_setting, // dedicated aligned key setting, QBER = (1-nu)/2
  reuse_test_setting_0,  // key rounds measured with test setting 0
};

struct HonestParams {
  double visibility = 1.0;
  KeySettingMode key_setting_mode = KeySettingMode::aligned_extra_setting;
};

// Honest noisy-singlet pair: test rounds follow Behavior::chsh_visibility(nu),
// key rounds give P(a=b) = (1+nu)/2 with uniform marginals (aligned mode).
// Rounds are i.i.d.; outcome of round j is drawn from the
// (seed, device, j) substream, so transcripts are schedule-independent.
std::unique_ptr<DevicePair> honest_pair(const HonestParams& params, uint64_t seed);

// Stateless deterministic responses from strategy(x, y); the strategy must
// accept kKeyInput for key rounds.
std::unique_ptr<DevicePair> deterministic_pair(std::function<std::pair<int, int>(int, int)> strategy);

struct MemoryProgram {
  // May inspect all past inputs/outputs.
  std::function<std::pair<int, int>(uint64_t round, std::span<const PastRound>, int x, int y,
                                    Prng&)>
      respond;
  // Optional declared round-wise conditional behavior over the test inputs.
  std::function<Behavior(uint64_t round, std::span<const PastRound>)> behavior;
};

std::unique_ptr<DevicePair> memory_pair(MemoryProgram program, uint64_t seed);

// Builtin memory program: PR box (a uniform, b = a ^ x*y), history-free.
MemoryProgram pr_box_program();

} // namespace diqkd

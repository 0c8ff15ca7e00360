#include "diqkd/devices.hpp"

#include <cmath>
#include <stdexcept>

namespace diqkd {

namespace {

// Honest model: measurement directions in one plane, correlator
// E(theta_A, theta_B) = nu * cos(theta_A - theta_B), uniform marginals.
// Alice angles {key: 0, x0: 0, x1: pi/2}, Bob {key: 0, y0: pi/4, y1: -pi/4}.
// Test correlators are nu*(-1)^(xy)/sqrt(2) (CHSH value 2*sqrt(2)*nu); the
// aligned key setting gives E = nu, i.e. QBER (1-nu)/2. In reuse mode the key
// input is measured with test setting 0 instead.
class HonestPair final : public DevicePair {
public:
  HonestPair(const HonestParams& params, uint64_t seed)
      : DevicePair(BellScenario::chsh()), params_(params), seed_(seed) {
    if (!(params.visibility >= 0.0 && params.visibility <= 1.0))
      throw std::invalid_argument("honest_pair: visibility must be in [0,1]");
  }

  std::optional<Behavior> declared_behavior() const override {
    return Behavior::chsh_visibility(params_.visibility);
  }

protected:
  std::pair<int, int> respond_impl(uint64_t round, int x, int y) override {
    Prng rng = Prng::stream(seed_, stream_tag::device, round);
    double e = correlator(x, y);
    int a = rng.next_unit() < 0.5 ? 0 : 1;
    bool equal = rng.next_unit() < 0.5 * (1.0 + e);
    int b = equal ? a : 1 - a;
    return {a, b};
  }

private:
  double angle_a(int x) const {
    if (x == kKeyInput) return 0.0; // Alice's key angle coincides with her setting 0
    return x == 0 ? 0.0 : M_PI / 2;
  }
  double angle_b(int y) const {
    if (y == kKeyInput)
      return params_.key_setting_mode == KeySettingMode::reuse_test_setting_0 ? M_PI / 4 : 0.0;
    return y == 0 ? M_PI / 4 : -M_PI / 4;
  }
  double correlator(int x, int y) const {
    return params_.visibility * std::cos(angle_a(x) - angle_b(y));
  }

  HonestParams params_;
  uint64_t seed_;
};

class DeterministicPair final : public DevicePair {
public:
  explicit DeterministicPair(std::function<std::pair<int, int>(int, int)> strategy)
      : DevicePair(BellScenario::chsh()), strategy_(std::move(strategy)) {}

  std::optional<Behavior> declared_behavior() const override {
    return Behavior::from_strategy(scenario(), strategy_);
  }

protected:
  std::pair<int, int> respond_impl(uint64_t, int x, int y) override { return strategy_(x, y); }

private:
  std::function<std::pair<int, int>(int, int)> strategy_;
};

class MemoryPair final : public DevicePair {
public:
  MemoryPair(MemoryProgram program, uint64_t seed)
      : DevicePair(BellScenario::chsh()), program_(std::move(program)), seed_(seed) {
    if (!program_.respond) throw std::invalid_argument("memory_pair: missing respond function");
  }

  std::optional<Behavior> declared_behavior() const override {
    if (!program_.behavior) return std::nullopt;
    return program_.behavior(static_cast<uint64_t>(history_.size()), history_);
  }

protected:
  std::pair<int, int> respond_impl(uint64_t round, int x, int y) override {
    Prng rng = Prng::stream(seed_, stream_tag::device, round);
    auto [a, b] = program_.respond(round, history_, x, y, rng);
    history_.push_back({x, y, a, b});
    return {a, b};
  }

private:
  MemoryProgram program_;
  uint64_t seed_;
  std::vector<PastRound> history_;
};

} // namespace

std::unique_ptr<DevicePair> honest_pair(const HonestParams& params, uint64_t seed) {
  return std::make_unique<HonestPair>(params, seed);
}

std::unique_ptr<DevicePair> deterministic_pair(
    std::function<std::pair<int, int>(int, int)> strategy) {
  return std::make_unique<DeterministicPair>(std::move(strategy));
}

std::unique_ptr<DevicePair> memory_pair(MemoryProgram program, uint64_t seed) {
  return std::make_unique<MemoryPair>(std::move(program), seed);
}

MemoryProgram pr_box_program() {
  MemoryProgram prog;
  prog.respond = [](uint64_t, std::span<const PastRound>, int x, int y, Prng& rng) {
    int xx = x == kKeyInput ? 0 : x;
    int yy = y == kKeyInput ? 0 : y;
    int a = rng.next_unit() < 0.5 ? 0 : 1;
    int b = a ^ (xx & yy);
    return std::pair<int, int>{a, b};
  };
  prog.behavior = [](uint64_t, std::span<const PastRound>) { return Behavior::pr_box(); };
  return prog;
}

} // namespace diqkd

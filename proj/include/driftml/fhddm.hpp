#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace driftml {

struct DetectorConfig {
  std::size_t window = 25;
  double delta = 1e-7;

  bool operator==(const DetectorConfig&) const = default;
};

struct DriftSignal {
  bool drift = false;
  std::size_t at_instance = 0;  // observations since the last reset, counting this one from 0
};

/// Fast Hoeffding Drift Detection over a stream of prediction outcomes.
/// Signals drift when the windowed correct-rate falls at least
/// epsilon = sqrt(ln(1/delta) / (2n)) below the best windowed rate since reset.
class FhddmState {
 public:
  explicit FhddmState(DetectorConfig config = {});

  DriftSignal step(bool correct);
  void reset();

  const DetectorConfig& config() const { return config_; }
  double epsilon() const { return epsilon_; }
  double mu_max() const { return mu_max_; }
  std::size_t window_size() const { return filled_; }
  std::size_t observations() const { return seen_; }
  /// Correct-rate of the current window; 0 when empty.
  double window_mean() const;

  bool operator==(const FhddmState&) const = default;

 private:
  DetectorConfig config_;
  double epsilon_;
  std::vector<std::uint8_t> ring_;
  std::size_t head_ = 0;
  std::size_t filled_ = 0;
  std::size_t correct_ = 0;
  std::size_t seen_ = 0;
  double mu_max_ = 0.0;
};

double hoeffding_epsilon(std::size_t window, double delta);

/// Value-semantics form of FhddmState::step.
std::pair<FhddmState, DriftSignal> fhddm_step(FhddmState state, bool correct);
FhddmState fhddm_reset(FhddmState state);

}  // namespace driftml

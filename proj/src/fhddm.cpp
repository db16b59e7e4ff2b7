#include "driftml/fhddm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace driftml {

double hoeffding_epsilon(std::size_t window, double delta) {
  return std::sqrt(std::log(1.0 / delta) / (2.0 * static_cast<double>(window)));
}

FhddmState::FhddmState(DetectorConfig config) : config_(config), epsilon_(0.0) {
  if (config_.window < 1) throw std::invalid_argument("detector window must be at least 1");
  if (!(config_.delta > 0.0 && config_.delta < 1.0)) throw std::invalid_argument("detector delta must be in (0, 1)");
  epsilon_ = hoeffding_epsilon(config_.window, config_.delta);
  ring_.assign(config_.window, 0);
}

DriftSignal FhddmState::step(bool correct) {
  const std::size_t n = config_.window;
  DriftSignal signal{false, seen_};
  ++seen_;
  if (filled_ == n) correct_ -= ring_[head_];
  else ++filled_;
  ring_[head_] = correct ? 1 : 0;
  correct_ += ring_[head_];
  head_ = (head_ + 1) % n;
  if (filled_ < n) return signal;

  const double mu = static_cast<double>(correct_) / static_cast<double>(n);
  mu_max_ = std::max(mu_max_, mu);
  signal.drift = mu_max_ - mu >= epsilon_;
  return signal;
}

void FhddmState::reset() {
  std::fill(ring_.begin(), ring_.end(), 0);
  head_ = 0;
  filled_ = 0;
  correct_ = 0;
  seen_ = 0;
  mu_max_ = 0.0;
}

double FhddmState::window_mean() const {
  return filled_ ? static_cast<double>(correct_) / static_cast<double>(filled_) : 0.0;
}

std::pair<FhddmState, DriftSignal> fhddm_step(FhddmState state, bool correct) {
  auto signal = state.step(correct);
  return {std::move(state), signal};
}

FhddmState fhddm_reset(FhddmState state) {
  state.reset();
  return state;
}

}  // namespace driftml

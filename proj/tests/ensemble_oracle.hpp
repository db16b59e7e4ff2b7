#pragma once

// Brute-force reference for greedy ensemble selection, written independently
// of src/ensemble.cpp: every trace is enumerated and compared step by step.

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "driftml/search.hpp"

namespace oracle {

using namespace driftml;

struct Expected {
  std::vector<std::size_t> trace;  // full greedy trace
  std::size_t best_prefix = 0;     // length of the kept prefix
};

inline ModelLibrary random_library(std::mt19937_64& rng, std::size_t members, std::size_t instances, Metric metric) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> coarse(0, 4);
  std::bernoulli_distribution pick_coarse(0.5), label(0.5);
  const bool use_coarse = pick_coarse(rng);
  ModelLibrary lib;
  lib.metric = metric;
  for (std::size_t i = 0; i < instances; ++i) lib.validation_labels.push_back(label(rng) ? 1 : 0);
  for (std::size_t m = 0; m < members; ++m) {
    Matrix p(instances, 2);
    for (std::size_t r = 0; r < instances; ++r) {
      const double v = use_coarse ? coarse(rng) / 4.0 : u(rng);
      p(r, 0) = 1.0 - v;
      p(r, 1) = v;
    }
    const double s = score(metric, lib.validation_labels, p);
    lib.members.push_back({nullptr, std::move(p), s});
  }
  return lib;
}

inline Matrix uniform_average(const ModelLibrary& lib, const std::vector<std::size_t>& picks) {
  const auto& first = lib.members[picks[0]].validation_proba;
  Matrix sum(first.rows(), first.cols(), 0.0);
  for (auto i : picks)
    for (std::size_t k = 0; k < sum.data().size(); ++k) sum.data()[k] += lib.members[i].validation_proba.data()[k];
  for (auto& v : sum.data()) v /= static_cast<double>(picks.size());
  return sum;
}

inline Matrix weighted_average(const ModelLibrary& lib, const std::vector<std::size_t>& picks) {
  std::map<std::size_t, std::size_t> count;
  for (auto i : picks) ++count[i];
  const auto& first = lib.members[picks[0]].validation_proba;
  Matrix out(first.rows(), first.cols(), 0.0);
  for (auto [i, n] : count) {
    const double w = static_cast<double>(n) / static_cast<double>(picks.size());
    for (std::size_t k = 0; k < out.data().size(); ++k) out.data()[k] += w * lib.members[i].validation_proba.data()[k];
  }
  return out;
}

// a beats b when a is defined and b is undefined or smaller.
inline bool beats(double a, double b) { return !std::isnan(a) && (std::isnan(b) || a > b); }

inline Expected exhaustive_greedy(const ModelLibrary& lib, std::size_t rounds, Metric metric) {
  const std::size_t m = lib.size();
  std::size_t total = 1;
  for (std::size_t r = 0; r < rounds; ++r) total *= m;

  // Greedy = the trace whose step scores win lexicographically, where a step
  // is won by a higher score and ties go to the lower member index.
  std::vector<std::size_t> best;
  std::vector<double> best_scores;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<std::size_t> trace(rounds);
    std::size_t c = code;
    for (std::size_t r = rounds; r-- > 0;) {
      trace[r] = c % m;
      c /= m;
    }
    std::vector<double> scores;
    for (std::size_t len = 1; len <= rounds; ++len)
      scores.push_back(score(metric, lib.validation_labels, uniform_average(lib, {trace.begin(), trace.begin() + static_cast<std::ptrdiff_t>(len)})));
    bool better = best.empty();
    for (std::size_t r = 0; r < rounds && !better; ++r) {
      if (beats(scores[r], best_scores[r])) {
        better = true;
      } else if (beats(best_scores[r], scores[r])) {
        break;
      } else if (trace[r] != best[r]) {
        // Tied step: only the lower index may continue.
        if (trace[r] > best[r]) break;
        better = true;
      }
    }
    if (better) {
      best = trace;
      best_scores = scores;
    }
  }

  Expected e{best, 1};
  double kept = kUndefinedScore;
  for (std::size_t len = 1; len <= rounds; ++len) {
    const double s =
        score(metric, lib.validation_labels, weighted_average(lib, {best.begin(), best.begin() + static_cast<std::ptrdiff_t>(len)}));
    if (len == 1 || beats(s, kept)) {
      kept = s;
      e.best_prefix = len;
    }
  }
  return e;
}

}  // namespace oracle

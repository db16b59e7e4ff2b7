#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "driftml/data.hpp"

namespace driftml {

/// One segment of the concept schedule.
struct ConceptSpec {
  int concept_id = 1;  // 1, 2 or 3
  bool inverted = false;

  bool operator==(const ConceptSpec&) const = default;
};

struct StaggerConfig {
  std::size_t n_instances = 70000;
  std::vector<std::size_t> drift_points;
  std::vector<ConceptSpec> concept_schedule;  // drift_points.size() + 1 entries
  double noise_rate = 0.0;
  std::uint64_t seed = 1;

  void validate() const;
  bool operator==(const StaggerConfig&) const = default;
};

/// Four equal segments: C1, inverted C1, C2, C3.
StaggerConfig default_stagger_config(std::size_t n_instances = 70000, std::uint64_t seed = 1);

/// size {small, medium, large}, color {red, green, blue}, shape {square, circular, triangular};
/// label classes {negative, positive}.
SchemaPtr stagger_schema();

/// Concept rule on level indices (size, color, shape), before inversion and noise.
///   C1: size = small and color = red
///   C2: color = green or shape = circular
///   C3: size = medium or size = large
bool stagger_concept(int concept_id, int size, int color, int shape);

Batch generate_stagger(const StaggerConfig& config);

}  // namespace driftml

#include "driftml/stagger.hpp"

#include <random>
#include <stdexcept>
#include <string>

namespace driftml {

void StaggerConfig::validate() const {
  if (concept_schedule.size() != drift_points.size() + 1)
    throw std::invalid_argument("concept schedule needs " + std::to_string(drift_points.size() + 1) +
                                " entries, has " + std::to_string(concept_schedule.size()));
  for (std::size_t i = 0; i < drift_points.size(); ++i) {
    if (drift_points[i] >= n_instances) throw std::invalid_argument("drift point beyond the stream length");
    if (i > 0 && drift_points[i] <= drift_points[i - 1])
      throw std::invalid_argument("drift points must be strictly increasing");
  }
  for (const auto& c : concept_schedule)
    if (c.concept_id < 1 || c.concept_id > 3) throw std::invalid_argument("concept id must be 1, 2 or 3");
  if (!(noise_rate >= 0.0 && noise_rate < 0.5)) throw std::invalid_argument("noise rate must be in [0, 0.5)");
}

StaggerConfig default_stagger_config(std::size_t n_instances, std::uint64_t seed) {
  StaggerConfig c;
  c.n_instances = n_instances;
  c.drift_points = {n_instances / 4, n_instances / 2, 3 * n_instances / 4};
  c.concept_schedule = {{1, false}, {1, true}, {2, false}, {3, false}};
  c.seed = seed;
  return c;
}

SchemaPtr stagger_schema() {
  static const SchemaPtr schema = std::make_shared<const Schema>(
      std::vector<FeatureSpec>{
          {"size", FeatureKind::Categorical, {"small", "medium", "large"}},
          {"color", FeatureKind::Categorical, {"red", "green", "blue"}},
          {"shape", FeatureKind::Categorical, {"square", "circular", "triangular"}},
      },
      LabelSpec{"class", {"negative", "positive"}});
  return schema;
}

bool stagger_concept(int concept_id, int size, int color, int shape) {
  switch (concept_id) {
    case 1: return size == 0 && color == 0;
    case 2: return color == 1 || shape == 1;
    case 3: return size == 1 || size == 2;
  }
  throw std::invalid_argument("concept id must be 1, 2 or 3");
}

Batch generate_stagger(const StaggerConfig& config) {
  config.validate();
  Batch out{stagger_schema(), {}, 0};
  out.instances.reserve(config.n_instances);
  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<int> attr(0, 2);
  std::bernoulli_distribution flip(config.noise_rate);
  std::size_t segment = 0;
  for (std::size_t i = 0; i < config.n_instances; ++i) {
    while (segment < config.drift_points.size() && i >= config.drift_points[segment]) ++segment;
    const auto& active = config.concept_schedule[segment];
    const int size = attr(rng);
    const int color = attr(rng);
    const int shape = attr(rng);
    bool label = stagger_concept(active.concept_id, size, color, shape);
    if (active.inverted) label = !label;
    if (config.noise_rate > 0.0 && flip(rng)) label = !label;
    out.instances.push_back(
        {{static_cast<double>(size), static_cast<double>(color), static_cast<double>(shape)}, label ? 1 : 0});
  }
  return out;
}

}  // namespace driftml

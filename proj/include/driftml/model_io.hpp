#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>

#include "driftml/pipeline.hpp"

namespace driftml {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary layout (little-endian):
//   magic "DRIFTMLP" | u16 major | u16 minor | payload
// The payload holds the pipeline config (text form), schema, encoder, selected
// columns, classifier tag + parameters, training fingerprint and seed. Readers
// accept any minor version up to their own within the same major version.
inline constexpr std::uint16_t kModelFormatMajor = 1;
inline constexpr std::uint16_t kModelFormatMinor = 0;

void save_model(std::ostream& out, const TrainedPipeline& model);
TrainedPipeline load_model(std::istream& in);

}  // namespace driftml

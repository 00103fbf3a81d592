#pragma once

#include <stdexcept>
#include <string>

namespace fkt {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WellDefinednessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A field-spec block references a cut that does not exist at the
/// requested level.
struct LevelTooCoarse : InputError {
  LevelTooCoarse(std::size_t block, std::size_t required_level)
      : InputError("block " + std::to_string(block) +
                   " requires level >= " + std::to_string(required_level)),
        block(block), required_level(required_level) {}
  std::size_t block;
  std::size_t required_level;
};

}  // namespace fkt

#pragma once

#include <stdexcept>
#include <string>

namespace dsmfuse {

/// Malformed text: set literals, proposition expressions, problem files.
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A hybrid model that cannot be built (e.g. total ignorance forced empty).
class model_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A frame with too many atoms for hyper-power set enumeration.
class frame_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dsmfuse

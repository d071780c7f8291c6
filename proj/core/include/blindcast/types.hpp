#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace blindcast {

using NodeId = std::uint64_t;
using Step = std::int64_t;

// Largest accepted node id. Keeps id + 1 representable.
inline constexpr NodeId kMaxNodeId = (NodeId{1} << 62);

// wakeup: nodes only have local clocks.  broadcast: a global clock is shared.
enum class Mode { wakeup, broadcast };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

// Malformed input or a violated precondition. Maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured size cap was exceeded. Maps to CLI exit code 2.
class LimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace blindcast

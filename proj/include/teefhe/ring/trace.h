#ifndef TEEFHE_RING_TRACE_H_
#define TEEFHE_RING_TRACE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace teefhe::trace {

// Kinds of instrumented word operations. Secret-buffer reads and writes carry
// the element index; arithmetic events carry kNoIndex.
enum class OpKind : uint8_t {
  kLoad = 1,
  kStore,
  kAddMod,
  kSubMod,
  kMulMod,
  kNegMod,
  kSelect,
  kCmov,
  kRound,
  kRngDraw,
  kBranch,  // only emitted by deliberately leaky code (negative controls)
};

inline constexpr int32_t kNoIndex = -1;

struct Event {
  OpKind op;
  int32_t index;

  bool operator==(const Event&) const = default;
};

struct ExecutionTrace {
  std::string label;
  std::vector<Event> events;
};

// True while a Capture() is running on the calling thread.
bool Active();

// Appends an event to the calling thread's recorder, if any.
void Record(OpKind op, int32_t index = kNoIndex);

// Runs `fn` with a fresh thread-confined recorder and returns what it saw.
// Captures do not nest; an inner capture throws ConfigurationError.
ExecutionTrace Capture(std::string label, const std::function<void()>& fn);

// Element-wise equality of the event sequences. Labels are ignored.
bool Equal(const ExecutionTrace& a, const ExecutionTrace& b);

// Position of the first differing event, or nullopt when equal.
std::optional<std::size_t> FirstDivergence(const ExecutionTrace& a,
                                           const ExecutionTrace& b);

std::string ToString(OpKind op);

}  // namespace teefhe::trace

#endif  // TEEFHE_RING_TRACE_H_

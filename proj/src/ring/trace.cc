#include "teefhe/ring/trace.h"

#include <algorithm>

#include "teefhe/errors.h"

namespace teefhe::trace {

namespace {

thread_local std::vector<Event>* active_recorder = nullptr;

}  // namespace

bool Active() { return active_recorder != nullptr; }

void Record(OpKind op, int32_t index) {
  if (active_recorder != nullptr) active_recorder->push_back({op, index});
}

ExecutionTrace Capture(std::string label, const std::function<void()>& fn) {
  if (active_recorder != nullptr) {
    throw ConfigurationError("trace captures cannot nest");
  }
  ExecutionTrace trace{std::move(label), {}};
  active_recorder = &trace.events;
  try {
    fn();
  } catch (...) {
    active_recorder = nullptr;
    throw;
  }
  active_recorder = nullptr;
  return trace;
}

bool Equal(const ExecutionTrace& a, const ExecutionTrace& b) {
  return a.events == b.events;
}

std::optional<std::size_t> FirstDivergence(const ExecutionTrace& a,
                                           const ExecutionTrace& b) {
  const auto [it_a, it_b] = std::mismatch(a.events.begin(), a.events.end(),
                                          b.events.begin(), b.events.end());
  if (it_a == a.events.end() && it_b == b.events.end()) return std::nullopt;
  return static_cast<std::size_t>(it_a - a.events.begin());
}

std::string ToString(OpKind op) {
  switch (op) {
    case OpKind::kLoad: return "load";
    case OpKind::kStore: return "store";
    case OpKind::kAddMod: return "add_mod";
    case OpKind::kSubMod: return "sub_mod";
    case OpKind::kMulMod: return "mul_mod";
    case OpKind::kNegMod: return "neg_mod";
    case OpKind::kSelect: return "select";
    case OpKind::kCmov: return "cmov";
    case OpKind::kRound: return "round";
    case OpKind::kRngDraw: return "rng_draw";
    case OpKind::kBranch: return "branch";
  }
  return "unknown";
}

}  // namespace teefhe::trace

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "haltlab/bits.hpp"
#include "haltlab/vm.hpp"

namespace haltlab {

// One halting computation, as observed by an enumerator: program p produced
// `output` after `steps` steps, and this was the seq-th event of the stream.
struct HaltEvent {
  std::uint64_t seq = 0;
  BinStr program;
  BinStr output;
  std::uint64_t steps = 0;
  bool operator==(const HaltEvent&) const = default;
};

// Pull-based event stream. Streams are single-use; machines hand out fresh
// ones on demand, which is what makes every consumer replayable.
class EventStream {
 public:
  virtual ~EventStream() = default;
  virtual std::optional<HaltEvent> next() = 0;
};
using EventStreamPtr = std::unique_ptr<EventStream>;
using EventSource = std::function<EventStreamPtr()>;

// A machine given by a budgeted evaluator plus a deterministic enumeration of
// its halting computations. `window` is the maximum program length the stream
// enumerates; within that window the stream is complete, so a program of
// window length that never appears is genuinely not in the domain.
struct EnumerableMachine {
  std::string name;
  std::function<RunOutcome(const BinStr&, std::uint64_t)> eval;
  EventSource events;
  int window = 0;
};

// --- small stream utilities -------------------------------------------------

class VectorEventStream : public EventStream {
 public:
  explicit VectorEventStream(std::vector<HaltEvent> v) : v_(std::move(v)) {}
  std::optional<HaltEvent> next() override {
    if (i_ >= v_.size()) return std::nullopt;
    return v_[i_++];
  }

 private:
  std::vector<HaltEvent> v_;
  std::size_t i_ = 0;
};

inline EventSource vector_source(std::vector<HaltEvent> v) {
  return [v = std::move(v)]() -> EventStreamPtr {
    return std::make_unique<VectorEventStream>(v);
  };
}

inline std::vector<HaltEvent> collect(const EnumerableMachine& m,
                                      std::size_t limit = SIZE_MAX) {
  std::vector<HaltEvent> out;
  auto s = m.events();
  while (out.size() < limit) {
    auto e = s->next();
    if (!e) break;
    out.push_back(std::move(*e));
  }
  return out;
}

// Deterministic stream of plain strings (enumerable-set input to several
// constructions). Same single-use/replayable convention as EventStream.
class StrStream {
 public:
  virtual ~StrStream() = default;
  virtual std::optional<BinStr> next() = 0;
};
using StrStreamPtr = std::unique_ptr<StrStream>;
using StrSource = std::function<StrStreamPtr()>;

class VectorStrStream : public StrStream {
 public:
  explicit VectorStrStream(std::vector<BinStr> v) : v_(std::move(v)) {}
  std::optional<BinStr> next() override {
    if (i_ >= v_.size()) return std::nullopt;
    return v_[i_++];
  }

 private:
  std::vector<BinStr> v_;
  std::size_t i_ = 0;
};

inline StrSource str_source(std::vector<BinStr> v) {
  return [v = std::move(v)]() -> StrStreamPtr {
    return std::make_unique<VectorStrStream>(v);
  };
}

// All strings of length <= max_len in length-lexicographic order.
inline StrSource all_strings_source(int max_len) {
  std::vector<BinStr> v;
  std::uint64_t count = (std::uint64_t(1) << (max_len + 1)) - 1;
  v.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) v.push_back(codec::index_to_string(i));
  return str_source(std::move(v));
}

}  // namespace haltlab

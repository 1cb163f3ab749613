#pragma once

#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

#include "haltlab/bits.hpp"
#include "haltlab/dovetail.hpp"
#include "haltlab/events.hpp"
#include "haltlab/rat.hpp"

namespace haltlab {

// ---------------------------------------------------------------------------
// Machine constructions. Each one consumes the deterministic event stream of
// a source machine (and possibly auxiliary string streams) and produces a new
// EnumerableMachine whose stream is again deterministic: same inputs, same
// bytes. Derived evaluators replay the stream (budget = number of events to
// inspect); within the machine's window a completed stream is authoritative,
// so "not enumerated" is certified divergence, while running out of replay
// budget stays inconclusive.
// ---------------------------------------------------------------------------

// Budgeted evaluator that answers by replaying the machine's event stream.
std::function<RunOutcome(const BinStr&, std::uint64_t)> replay_eval(EventSource events,
                                                                    int window);

// The framed machine U: on input encode(p) + x it behaves exactly like the
// base machine running p on input x; inputs that do not start with a
// well-formed frame never halt. Enumerates framed programs of length
// <= window. The frame adds 2|p| + 2 bits, so K_U(y) <= K_base(y | x) + ...
// is realized concretely by the framing reduction x -> encode(p) + x.
EnumerableMachine standard_optimal(int window, std::uint64_t budget = kDefaultBudget,
                                   std::uint64_t space = kDefaultSpace);

// Certifier matching standard_optimal (malformed frame = divergence by
// construction; otherwise the base machine's certifier on the framed parts).
Certifier framed_certifier();

// Re-seats the k-th halting event of each length n onto the k-th n-bit string
// in lex order: the defined n-bit inputs always form an initial segment of
// the lex order. Outputs, steps, and the event order are untouched.
EnumerableMachine left_total(const EnumerableMachine& src);

// left_total, but an event whose output already appeared at its length is
// dropped instead of seated: distinct same-length inputs then always carry
// distinct outputs. Shortest-program lengths per output are unchanged.
EnumerableMachine dedupe_values(const EnumerableMachine& src);

// --- domain_from_set ---------------------------------------------------------

// The matching process failed: the set stream ended while this event was
// still waiting for a fresh string within its length bound.
struct MatchFailure {
  HaltEvent waiting;
  int bound = 0;  // |waiting.program| + c
};

using DomainFromSetResult = std::variant<EnumerableMachine, MatchFailure>;

// Builds a machine V whose domain is exactly the explored prefix of S:
// every source event at x claims the next fresh S-element z with
// |z| <= |x| + c and gets value source(x); S-elements arriving while nothing
// is waiting (or too long for the current wait) get value epsilon
// immediately. S is pulled only while an event is waiting, so the consumed
// prefix is as short as possible. Result events appear in assignment order.
DomainFromSetResult domain_from_set(const EnumerableMachine& src, const StrSource& s,
                                    int c);

// --- seat_exchange -----------------------------------------------------------

// Adds spectator strings to the domain without disturbing the source's
// (length, output) profile. Source events sit at their own program if free;
// otherwise the value moves to the lex-least free string of the same length.
// The j-th auxiliary stream (j = 1..k) contributes exactly one fresh string
// of length > j with value epsilon, as soon as it shows one. Requires the
// source to occupy at most half of each length (compose with prepend_zero),
// which makes a free seat always available; violation throws SeatExhausted.
EnumerableMachine seat_exchange(const EnumerableMachine& src,
                                const std::vector<StrSource>& w);

struct SeatExhausted : std::runtime_error {
  SeatExhausted() : std::runtime_error("seat_exchange: no free seat at required length") {}
};

// --- density arithmetic -------------------------------------------------------

enum class ShiftVariant {
  Zero,     // every program gains a leading 0: same counts, one length later
  OneFill,  // additionally every string starting with 1 joins with value epsilon
};

// Per-length counts move from H_n to H'_{n+1} = H_n (Zero) or H_n + 2^n
// (OneFill). The OneFill stream interleaves the filler strings (length-lex)
// with the shifted source events one-for-one, then drains the leftovers.
EnumerableMachine shift_density(const EnumerableMachine& src, ShiftVariant variant);

inline EnumerableMachine prepend_zero(const EnumerableMachine& src) {
  return shift_density(src, ShiftVariant::Zero);
}

struct InvalidDensity : std::runtime_error {
  explicit InvalidDensity(const std::string& why)
      : std::runtime_error("set_with_density: " + why) {}
};

// One stage of a lower approximation: "at least value * 2^length strings of
// this length belong to the set". Values are rationals with denominator
// dividing 2^length, in [0, 1], nondecreasing per length across stages.
struct DensityUpdate {
  int length = 0;
  Rat value;
};

// Materializes a set with exactly value_n * 2^n strings of each length n,
// choosing lexicographically smallest strings first, emitting increments in
// update order. Throws InvalidDensity on values outside [0,1], denominators
// not dividing 2^length, or a decreasing stage.
std::vector<BinStr> set_with_density(const std::vector<DensityUpdate>& updates);

// Left half: the source behind d leading zeros; right half: the elements of
// s_right (each must start with '1'), joining with value epsilon. Counts obey
// H'_n = H_{n-d} + |{z in s_right : |z| <= n}|. Streams interleave
// left-first, one-for-one, then drain.
EnumerableMachine combine_halves(const EnumerableMachine& src, int d,
                                 const StrSource& s_right);

struct BadRightHalf : std::runtime_error {
  explicit BadRightHalf(const std::string& z)
      : std::runtime_error("combine_halves: right-half string does not start with 1: \"" + z +
                           "\"") {}
};

// Convenience adaptors for building right halves and spectator sets.
StrSource prepend_one_source(StrSource base);

}  // namespace haltlab

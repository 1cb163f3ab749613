#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "haltlab/bits.hpp"

namespace haltlab {

// ---------------------------------------------------------------------------
// DeskVM instruction set
// ---------------------------------------------------------------------------
// A deliberately small deterministic machine whose entire per-window behavior
// can be settled exactly. A program is ANY binary string; an input is any
// binary string.
//
// Decoding: the program is cut into consecutive 3-bit opcodes ("slots"),
// most-significant bit first. If the length is not a multiple of 3, the
// missing trailing bits read as 0. slot_count = ceil(|p| / 3).
//
// Machine state:
//   pc      instruction slot index, starts at 0
//   work    ring of 8 binary cells, all 0 at start
//   head    ring position, starts at 0 (wraps mod 8 in both directions)
//   cursor  read position in the input string, starts at 0
//   output  write-only bit buffer, starts empty
//
// Opcodes (value = the 3 bits as a number):
//   0  HALT    stop; the run's output is the buffer's content
//   1  RIGHT   head := (head + 1) mod 8
//   2  LEFT    head := (head + 7) mod 8
//   3  FLIP    work[head] := 1 - work[head]
//   4  EMIT    append work[head] to the output buffer
//   5  COPY    if cursor < |input|: work[head] := input[cursor], cursor += 1
//              else: work[head] := 0
//   6  JZ0     if work[head] == 0: pc := 0, else pc += 1
//   7  ECHO    append input[cursor..] to the output buffer, cursor := |input|,
//              then halt (exactly like HALT)
//
// Every executed opcode costs exactly one step (ECHO included). All opcodes
// except JZ0 advance pc by 1. If pc reaches slot_count (including the case
// slot_count == 0, i.e. the empty program), the machine never halts: by
// definition it idles there forever. run() reports that as budget exhaustion;
// certify() proves it immediately.
//
// The output buffer is write-only: whether and how the machine halts depends
// only on (pc, head, work, cursor). Divergence certification therefore hashes
// exactly that quadruple. Since the quadruple has at most
// slot_count * 8 * 256 * (|input|+1) distinct values, every run either halts
// or provably cycles within that many steps — there is no behavior beyond the
// reach of certify() given proportional budget and space.
// ---------------------------------------------------------------------------

struct Halted {
  BinStr output;
  std::uint64_t steps = 0;
  bool operator==(const Halted&) const = default;
};

struct BudgetExhausted {
  std::uint64_t budget = 0;
  bool operator==(const BudgetExhausted&) const = default;
};

// Produced by certify() and by derived machines; carries the reason the run
// can never halt. ByConstruction covers divergence that holds by definition
// of a construction (malformed frame; complete enumeration lacks the input)
// rather than by a cycle found in this run.
struct CertifiedDivergent {
  enum class Kind { OffEnd, Cycle, ByConstruction };
  Kind kind = Kind::Cycle;
  std::uint64_t detected_at_step = 0;
  bool operator==(const CertifiedDivergent&) const = default;
};

using RunOutcome = std::variant<Halted, BudgetExhausted, CertifiedDivergent>;

inline bool halted(const RunOutcome& r) { return std::holds_alternative<Halted>(r); }

// Runs program p on input x for at most `budget` steps.
RunOutcome run(const BinStr& p, const BinStr& x, std::uint64_t budget);

// Decides the run exactly where resources allow: Halted, CertifiedDivergent,
// or BudgetExhausted when the step budget or the config-space bound ran out
// first (sound: a certificate is never guessed). `space` bounds how many
// distinct configurations may be recorded for cycle detection.
RunOutcome certify(const BinStr& p, const BinStr& x, std::uint64_t budget,
                   std::uint64_t space);

inline constexpr std::uint64_t kDefaultBudget = 1u << 20;
inline constexpr std::uint64_t kDefaultSpace = 100000;

std::string outcome_name(const RunOutcome& r);

}  // namespace haltlab

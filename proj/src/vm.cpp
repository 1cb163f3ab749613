#include "haltlab/vm.hpp"

#include <unordered_set>
#include <vector>

namespace haltlab {

namespace {

enum Op : int { HALT = 0, RIGHT = 1, LEFT = 2, FLIP = 3, EMIT = 4, COPY = 5, JZ0 = 6, ECHO = 7 };

// Slots with missing trailing bits read as 0.
std::vector<int> decode_slots(const BinStr& p) {
  std::size_t n_slots = (p.size() + 2) / 3;
  std::vector<int> slots(n_slots, 0);
  for (std::size_t i = 0; i < n_slots; ++i) {
    int v = 0;
    for (std::size_t k = 0; k < 3; ++k) {
      std::size_t bit_pos = 3 * i + k;
      int b = bit_pos < p.size() ? p.bit(bit_pos) : 0;
      v = (v << 1) | b;
    }
    slots[i] = v;
  }
  return slots;
}

struct Machine {
  std::vector<int> slots;
  const BinStr* input;
  std::size_t pc = 0;
  unsigned head = 0;
  unsigned work = 0;  // 8 cells as a bitmask, cell i = bit i
  std::size_t cursor = 0;
  BinStr output;

  bool off_end() const { return pc >= slots.size(); }
  int cell() const { return (work >> head) & 1; }

  // One opcode. Returns true if this step halted the machine.
  bool step() {
    switch (slots[pc]) {
      case HALT:
        return true;
      case RIGHT:
        head = (head + 1) & 7;
        break;
      case LEFT:
        head = (head + 7) & 7;
        break;
      case FLIP:
        work ^= 1u << head;
        break;
      case EMIT:
        output.push_bit(cell());
        break;
      case COPY:
        if (cursor < input->size()) {
          work = (work & ~(1u << head)) | (unsigned(input->bit(cursor)) << head);
          ++cursor;
        } else {
          work &= ~(1u << head);
        }
        break;
      case JZ0:
        if (cell() == 0) {
          pc = 0;
          return false;  // pc already set
        }
        break;
      case ECHO:
        while (cursor < input->size()) output.push_bit(input->bit(cursor++));
        return true;
    }
    ++pc;
    return false;
  }

  // Everything halting-relevant, packed. Output is deliberately excluded:
  // it cannot influence any future transition.
  std::uint64_t config_key() const {
    return (std::uint64_t(pc) << 32) | (std::uint64_t(cursor) << 11) |
           (std::uint64_t(head) << 8) | std::uint64_t(work);
  }
};

}  // namespace

RunOutcome run(const BinStr& p, const BinStr& x, std::uint64_t budget) {
  Machine m{decode_slots(p), &x, 0, 0, 0, 0, {}};
  for (std::uint64_t t = 1; t <= budget; ++t) {
    if (m.off_end()) return BudgetExhausted{budget};
    if (m.step()) return Halted{std::move(m.output), t};
  }
  return BudgetExhausted{budget};
}

RunOutcome certify(const BinStr& p, const BinStr& x, std::uint64_t budget,
                   std::uint64_t space) {
  Machine m{decode_slots(p), &x, 0, 0, 0, 0, {}};
  std::unordered_set<std::uint64_t> seen;
  for (std::uint64_t t = 1; t <= budget; ++t) {
    if (m.off_end()) return CertifiedDivergent{CertifiedDivergent::Kind::OffEnd, t - 1};
    if (seen.size() >= space) return BudgetExhausted{budget};
    if (!seen.insert(m.config_key()).second)
      return CertifiedDivergent{CertifiedDivergent::Kind::Cycle, t - 1};
    if (m.step()) return Halted{std::move(m.output), t};
  }
  return BudgetExhausted{budget};
}

std::string outcome_name(const RunOutcome& r) {
  if (std::holds_alternative<Halted>(r)) return "halted";
  if (std::holds_alternative<BudgetExhausted>(r)) return "budget_exhausted";
  switch (std::get<CertifiedDivergent>(r).kind) {
    case CertifiedDivergent::Kind::OffEnd: return "diverges_off_end";
    case CertifiedDivergent::Kind::Cycle: return "diverges_cycle";
    default: return "diverges_by_construction";
  }
}

}  // namespace haltlab

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "haltlab/bits.hpp"
#include "haltlab/events.hpp"
#include "haltlab/rat.hpp"
#include "haltlab/vm.hpp"

namespace haltlab {

// Anything that can settle a single program: halts (with steps and output),
// provably diverges, or is left unknown within (budget, space).
using Certifier =
    std::function<RunOutcome(const BinStr&, std::uint64_t budget, std::uint64_t space)>;

inline Certifier raw_certifier() {
  return [](const BinStr& p, std::uint64_t budget, std::uint64_t space) {
    return certify(p, BinStr{}, budget, space);
  };
}

enum class Status : std::uint8_t { Halts, Diverges, Unknown };

// Exhaustive per-program verdicts for every program of length <= max_len
// (there are 2^(max_len+1) - 1 of them, the empty program included),
// indexed by length-lex index.
struct GroundTruth {
  int max_len = 0;
  std::uint64_t budget = 0;
  std::uint64_t space = 0;
  std::vector<Status> status;
  std::vector<std::uint32_t> steps;  // meaningful where status == Halts
  std::vector<BinStr> output;        // likewise
  std::vector<std::uint64_t> unknown;  // llex indices left unsettled

  std::uint64_t program_count() const { return status.size(); }
  Status status_of(const BinStr& p) const { return status[codec::string_to_index(p)]; }

  // Halting counts: exact length n, and cumulative over lengths <= n.
  std::uint64_t h(int n) const;
  std::uint64_t H(int n) const;
};

struct NonzeroUnknown : std::runtime_error {
  std::vector<std::uint64_t> indices;
  explicit NonzeroUnknown(std::vector<std::uint64_t> idx);
};

// Certifies the whole window; never throws. unknown lists what did not settle.
GroundTruth certify_window(const Certifier& c, int max_len, std::uint64_t budget,
                           std::uint64_t space);

// Same, but refuses (throws NonzeroUnknown) unless every program settled.
GroundTruth ground_truth(const Certifier& c, int max_len, std::uint64_t budget,
                         std::uint64_t space);

// Canonical enumeration order of the halting computations: doubling budget
// rounds t = 1, 2, 4, ...; within a round, programs in length-lex order; each
// program appears exactly once, in the first round whose budget covers its
// halting time. The order is a pure function of the truth window.
std::vector<HaltEvent> dovetail_events(const GroundTruth& truth);

// The base machine as an enumerable machine: evaluator = budgeted run on
// empty input, events = the canonical dovetail enumeration.
EnumerableMachine base_machine(int max_len, std::uint64_t budget = kDefaultBudget,
                               std::uint64_t space = kDefaultSpace);

// --- halting-rate table -----------------------------------------------------

struct HaltingTableRow {
  int n = 0;
  std::uint64_t t = 0;
  std::uint64_t h = 0;  // halted, length exactly n, within t steps
  std::uint64_t H = 0;  // halted, length <= n, within t steps
  Rat rho;              // H / 2^(n+1)
  Rat tau;              // h / 2^n
};

struct HaltingTable {
  int max_len = 0;
  std::vector<std::uint64_t> checkpoints;
  std::vector<HaltingTableRow> rows;  // n-major, then checkpoint order
  const HaltingTableRow& at(int n, std::size_t checkpoint_idx) const {
    return rows[std::size_t(n) * checkpoints.size() + checkpoint_idx];
  }
};

// Budget checkpoints 0, 1, 2, 4, ..., up to and including `budget`.
std::vector<std::uint64_t> power_checkpoints(std::uint64_t budget);

HaltingTable halting_table(const std::vector<HaltEvent>& events, int max_len,
                           std::vector<std::uint64_t> checkpoints);

// --- terminal statistics ----------------------------------------------------

// bb[n] = longest halting time among programs of length <= n (0 if none halt).
std::vector<std::uint64_t> bb_table(const GroundTruth& truth);

struct ComplexityTable {
  // Shortest program length per produced output, over the truth window only.
  // Outputs not present here have complexity > max_len ("beyond window").
  std::unordered_map<BinStr, int, BinStrHash> k;
  // b[m] = largest length-lex index of an output with complexity <= m,
  // or nullopt when no output is that cheap.
  std::vector<std::optional<std::uint64_t>> b;

  std::optional<int> k_of(const BinStr& y) const {
    auto it = k.find(y);
    if (it == k.end()) return std::nullopt;
    return it->second;
  }
};

ComplexityTable complexity_table(const GroundTruth& truth);

// Least c <= c_max such that b[n-c] <= bb[n] <= b[n+c] wherever both sides of
// a comparison are defined inside the window; nullopt if none works.
std::optional<int> bb_vs_b_constant(const std::vector<std::uint64_t>& bb,
                                    const ComplexityTable& ct, int c_max);

// --- survivor counts ----------------------------------------------------------

// Knowing the count of halting programs of length <= n only up to its k top
// bits still pins the moment when almost all of them have halted:
//   r(n, k)  = H_n mod 2^(n+1-k)      (what the dropped bits can hide)
//   t*(n, k) = least t with halted(n, t) >= H_n - r(n, k)
// and for every t >= t*, survivors(n, t) < 2^(n+1-k).
struct SurvivorStats {
  int n = 0;
  int k = 0;
  std::uint64_t r = 0;
  std::uint64_t t_star = 0;
  std::vector<std::uint64_t> checkpoints;
  std::vector<std::uint64_t> survivors;  // per checkpoint: still running at t
};

SurvivorStats survivor_stats(const GroundTruth& truth, int n, int k,
                             std::vector<std::uint64_t> checkpoints);

// survivors(n, t) for one length bound, any t.
std::uint64_t survivors_at(const GroundTruth& truth, int n, std::uint64_t t);

}  // namespace haltlab

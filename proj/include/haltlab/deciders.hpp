#pragma once

// Approximate halting deciders and the exact error-accounting harness.
// A decider answers Yes / No / Undefined to "does this program halt".
// Against certified ground truth the harness counts, for every length cap n,
// exactly how many of the 2^(n+1)-1 strings of length at most n get a wrong
// answer or no answer at all.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "haltlab/bits.hpp"
#include "haltlab/dovetail.hpp"
#include "haltlab/events.hpp"
#include "haltlab/rat.hpp"
#include "haltlab/vm.hpp"

namespace haltlab {

enum class Verdict { Yes, No, Undefined };

const char* verdict_name(Verdict v);

using Decider = std::function<Verdict(const BinStr&)>;
using Evaluator = std::function<RunOutcome(const BinStr&, std::uint64_t)>;

// Yes exactly when eval(p, t) halts, No otherwise. Total. t >= 1 required.
Decider budget_decider(Evaluator eval, std::uint64_t t);

// --- fraction decider ---------------------------------------------------------

// One block of the fraction decider. The block at length n simulates every
// program of length at most n and admits halters in (steps, lex) order until
// the quota ceil(r * 2^(n+1)) is met.
struct FractionBlock {
  int length = 0;
  std::uint64_t required = 0;      // halter quota
  bool reached = false;            // quota met within the step cap
  std::uint64_t cutoff_steps = 0;  // step count of the last admitted halter
};

struct FractionDecider {
  std::vector<FractionBlock> blocks;
  Decider decide;

  bool all_reached() const {
    for (const auto& b : blocks)
      if (!b.reached) return false;
    return true;
  }
};

// An input of length l is handled by the minimal block length >= l; inputs
// longer than every block get Undefined. A handled input gets Yes when it is
// among the block's admitted halters, No otherwise; if the block's quota was
// not met within cap steps the whole block answers Undefined and is flagged.
// Requires 0 < r < 1, lengths strictly increasing with
// lengths[i+1] >= lengths[i] + i + 1, and lengths.back() <= u.window.
FractionDecider fraction_decider(const EnumerableMachine& u, const Rat& r,
                                 const std::vector<int>& lengths, std::uint64_t cap);

// --- advice decider -----------------------------------------------------------

// Rank advice for machines whose defined strings form lexicographic initial
// segments per length: at a handled length m, lex rank below low * 2^m means
// Yes, rank at or above high * 2^m means No, in between means Undefined.
struct AdviceLevel {
  std::vector<int> lengths;  // exact lengths this level handles
  Rat low;
  Rat high;
};

// Unhandled lengths answer Undefined; the first level handling a length
// wins. Requires 0 <= low <= high <= 1 per level. When a level's pair
// brackets the machine's true halting fraction at each handled length, every
// Yes and No it gives is correct.
Decider advice_decider(const std::vector<AdviceLevel>& levels);

// --- staged decider -----------------------------------------------------------

// Stage i covers input lengths in [stages[i-1].length, stages[i].length)
// (the first stage covers from length 0). A covered input gets Yes exactly
// when the enumeration lists it with a step stamp at most stages[i].budget.
struct Stage {
  int length = 0;
  std::uint64_t budget = 0;
};

// Total: lengths at or beyond the last stage boundary answer No. Requires
// stages[i].length > stages[i-1].length + i.
Decider staged_decider(const std::vector<Stage>& stages, const EventSource& enumerated);

// --- error accounting ---------------------------------------------------------

struct ErrorRow {
  int n = 0;
  std::uint64_t false_pos = 0;  // Yes on a diverging program, lengths <= n
  std::uint64_t false_neg = 0;  // No on a halting program
  std::uint64_t undefined = 0;  // no answer either way
  Rat eps;                      // (false_pos + false_neg + undefined) / (2^(n+1) - 1)
};

struct ErrorReport {
  std::vector<ErrorRow> rows;  // one per n = 0..window
  // Spread of eps over the tail half of the window (n from ceil(window/2)
  // to window): a finite-window stand-in for the limit error rates, which
  // are not computable and not claimed.
  Rat tail_max;
  Rat tail_min;
};

// Exact counts against certified truth, cumulative in the length cap.
// Requires window <= truth.max_len and no unknown verdicts up to the window.
ErrorReport error_report(const Decider& d, const GroundTruth& truth, int window);

// --- sparse spoiler -----------------------------------------------------------

struct TriggerNotMet : std::runtime_error {
  TriggerNotMet() : std::runtime_error("sparse_spoiler: distribution mass is not above 1/2") {}
};

struct SpoilerResult {
  std::vector<BinStr> added;  // grouped by length, most probable first
  Rat carved_mass;            // mass of the added strings
  Rat total_mass;             // mass of the whole distribution
};

// Carves a sparse set that still captures a constant share of a heavy
// distribution. For each support length n, adds the ceil((eps/2) * 2^n) most
// probable strings of that length, breaking probability ties toward the
// lexicographically smaller string and padding with lex-least unsupported
// strings when the support is thin. Requires: distinct support strings, all
// of length >= n0 (n0 <= 62); dyadic probabilities in (0, 1]; total mass at
// most 1; 0 < eps <= 1; and ceil((eps/2) * 2^n0) <= eps * 2^n0. Throws
// TriggerNotMet when total mass is not above 1/2. Guarantees: added density
// at every length is at most eps, and carved_mass >= (eps/4) * total_mass.
SpoilerResult sparse_spoiler(const std::vector<std::pair<BinStr, Rat>>& dist,
                             const Rat& eps, int n0);

}  // namespace haltlab

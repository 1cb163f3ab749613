#pragma once

// Builds a bijection between two copies of the naturals out of two total
// injections f (left to right) and g (right to left), one pair at a time,
// keeping two patched views f-hat and g-hat so that every finished pair is
// consistent with both. The patched views never exceed the running maximum
// of the raw injection on any prefix, and every pair stays inside the
// connected component of the bipartite graph drawn by the raw queries.
// A window verifier re-checks all three properties from the recorded
// transcript, and a reduction wrapper turns the builder into a set
// isomorphism check: when f and g are membership-preserving reductions,
// the resulting bijection maps one set exactly onto the other.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace haltlab {

enum class Side { Left, Right };

inline const char* side_name(Side s) { return s == Side::Left ? "L" : "R"; }

// A total injection on the naturals with a decidable preimage. The factory
// family below (finite table plus affine tail) keeps both directions cheap.
struct InjectionOracle {
  std::function<std::uint64_t(std::uint64_t)> apply;
  std::function<std::optional<std::uint64_t>(std::uint64_t)> preimage;
};

// apply(n) = table[n] for n < table.size(), else n + tail_add.
// Requires distinct table values and tail_add > every table value.
InjectionOracle table_tail_oracle(std::vector<std::uint64_t> table, std::uint64_t tail_add);

// Deterministic pseudorandom instance of the family: an injective table on
// [0, table_width) with values below 2 * table_width, and a collision-free
// affine tail.
InjectionOracle seeded_oracle(std::uint64_t seed, std::uint64_t table_width);

struct InjectivityViolation : std::runtime_error {
  Side side;
  std::uint64_t first_pos, second_pos, value;
  InjectivityViolation(Side s, std::uint64_t a, std::uint64_t b, std::uint64_t v);
};

// --- transcript ---------------------------------------------------------------

struct TranscriptOverride {
  Side side;  // which patched view changed: Left = f-hat, Right = g-hat
  std::uint64_t at = 0;
  std::uint64_t value = 0;
};

struct TranscriptEntry {
  std::uint64_t step = 0;
  Side served = Side::Left;
  std::string case_label;  // "1", "2.1", "2.2.1", "2.2.2.1", "2.2.2.2"
  std::uint64_t left = 0, right = 0;  // the pair added this step
  std::vector<TranscriptOverride> overrides;
};

// Everything the builder did: pairs in order plus every raw oracle edge it
// consulted, ready for replay and independent verification.
struct BuildRecord {
  std::vector<TranscriptEntry> transcript;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> f_edges;  // (left, f(left))
  std::vector<std::pair<std::uint64_t, std::uint64_t>> g_edges;  // (g(right), right)
};

// --- component tracking --------------------------------------------------------

// Union-find over side-tagged vertices; an edge joins a left and a right
// vertex. Used to certify that built pairs never leave their component.
class ComponentIndex {
 public:
  void add_edge(std::uint64_t left, std::uint64_t right);
  bool same(Side sa, std::uint64_t a, Side sb, std::uint64_t b);

 private:
  std::uint64_t find(std::uint64_t key);
  std::uint64_t key(Side s, std::uint64_t v) const {
    return (v << 1) | (s == Side::Right ? 1 : 0);
  }
  std::unordered_map<std::uint64_t, std::uint64_t> parent_;
};

// --- the builder ---------------------------------------------------------------

// Serves sides alternately, Left first. Each step picks the minimal
// uncovered element of the served side and commits exactly one new pair,
// patching f-hat or g-hat when the raw views disagree; the five case labels
// in the transcript name which repair fired. Oracle injectivity is checked
// on every raw query and a detected duplicate throws InjectivityViolation.
class BijectionBuilder {
 public:
  BijectionBuilder(InjectionOracle f, InjectionOracle g);

  // One serve; returns the entry it appended to the transcript.
  const TranscriptEntry& step();

  // Runs steps until v is covered on the given side, then returns its
  // partner. Needs at most 2(v+1) steps from a fresh builder; a defensive
  // internal bound enforces that.
  std::uint64_t resolve(Side side, std::uint64_t v);

  std::optional<std::uint64_t> pair_of(Side side, std::uint64_t v) const;

  const BuildRecord& record() const { return record_; }
  std::uint64_t steps_taken() const { return record_.transcript.size(); }

  // Re-derives every builder invariant from scratch; throws std::logic_error
  // with a description on the first violation. Intended for property tests
  // after each step. Queries the oracles read-only (no edges are recorded).
  void check_invariants() const;

 private:
  struct View {  // one patched injection: raw oracle + overrides + query log
    InjectionOracle oracle;
    std::unordered_map<std::uint64_t, std::uint64_t> overrides, override_rev;
    std::unordered_map<std::uint64_t, std::uint64_t> raw, raw_rev;
    Side side;  // which side this view maps FROM (f: Left, g: Right)
  };

  std::uint64_t view_apply(View& w, std::uint64_t pos);
  std::optional<std::uint64_t> view_preimage(View& w, std::uint64_t val);
  void view_override(View& w, std::uint64_t pos, std::uint64_t val);
  void log_edge(const View& w, std::uint64_t pos, std::uint64_t val);
  void serve(View& fwd, View& bwd, Side side);
  void add_pair(Side served, std::uint64_t u, std::uint64_t v);
  void check_view(const View& w, const std::unordered_map<std::uint64_t, std::uint64_t>& h,
                  const char* tag) const;

  View f_, g_;
  std::unordered_map<std::uint64_t, std::uint64_t> h_lr_, h_rl_;
  std::uint64_t next_left_ = 0, next_right_ = 0;  // lower bounds for min uncovered
  Side turn_ = Side::Left;
  BuildRecord record_;
  std::vector<TranscriptOverride> pending_overrides_;
};

// --- verification ---------------------------------------------------------------

struct VerifyFailure {
  std::string what;
  std::uint64_t a = 0, b = 0;
};

struct VerifyReport {
  bool bijective = false;
  bool bounded = false;
  bool components_preserved = false;
  std::vector<VerifyFailure> failures;

  bool ok() const { return bijective && bounded && components_preserved; }
};

// Independent re-check of a finished record on the window [0, M): the pairs
// restricted to the window form a bijection, every pair obeys the prefix-max
// bounds of the raw injections, and every pair joins vertices that the
// consulted edges already connect.
VerifyReport verify_window(const InjectionOracle& f, const InjectionOracle& g,
                           const BuildRecord& rec, std::uint64_t m);

struct ReductionInvalid : std::runtime_error {
  Side side;
  std::uint64_t at, image;
  ReductionInvalid(Side s, std::uint64_t a, std::uint64_t img);
};

struct IsoResult {
  BuildRecord record;
  VerifyReport report;
  bool membership_preserved = false;
  std::vector<VerifyFailure> membership_failures;

  bool ok() const { return report.ok() && membership_preserved; }
};

// Builds the bijection while checking, on every raw oracle query, that f and
// g really are reductions between the two sets (i in S_left iff f(i) in
// S_right, and symmetrically); a counterexample throws ReductionInvalid.
// On success the result additionally certifies i in S_left iff h(i) in
// S_right for every i < m.
IsoResult isomorphism_from_reductions(const InjectionOracle& f, const InjectionOracle& g,
                                      const std::function<bool(std::uint64_t)>& in_left,
                                      const std::function<bool(std::uint64_t)>& in_right,
                                      std::uint64_t m);

}  // namespace haltlab

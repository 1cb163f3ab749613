#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "haltlab/deciders.hpp"
#include "haltlab/transforms.hpp"

using namespace haltlab;

namespace {

GroundTruth truth_for(int max_len) {
  return ground_truth(raw_certifier(), max_len, kDefaultBudget, kDefaultSpace);
}

EnumerableMachine synthetic(std::vector<HaltEvent> ev, int window) {
  EnumerableMachine m;
  m.name = "synthetic";
  m.window = window;
  m.events = vector_source(std::move(ev));
  m.eval = replay_eval(m.events, window);
  return m;
}

}  // namespace

TEST_CASE("budget decider: rejects a zero budget") {
  EnumerableMachine base = base_machine(6);
  CHECK_THROWS_AS(budget_decider(base.eval, 0), std::invalid_argument);
}

TEST_CASE("budget decider: one step admits exactly the one-step halters") {
  GroundTruth t = truth_for(8);
  Decider d = budget_decider(base_machine(8).eval, 1);
  for (std::uint64_t i = 0; i < t.program_count(); ++i) {
    BinStr p = codec::index_to_string(i);
    Verdict want = (t.status[i] == Status::Halts && t.steps[i] == 1) ? Verdict::Yes
                                                                     : Verdict::No;
    CHECK(d(p) == want);
  }
}

TEST_CASE("budget decider: errors are exactly the survivors") {
  GroundTruth t = truth_for(10);
  EnumerableMachine base = base_machine(10);
  for (std::uint64_t step_cap : {1, 2, 4, 8, 32}) {
    ErrorReport rep = error_report(budget_decider(base.eval, step_cap), t, 10);
    for (int n = 0; n <= 10; ++n) {
      const ErrorRow& row = rep.rows[n];
      CHECK(row.false_pos == 0);   // halting within the cap implies halting
      CHECK(row.undefined == 0);   // the decider is total
      CHECK(row.false_neg == survivors_at(t, n, step_cap));
      CHECK(row.eps == Rat((long long)row.false_neg, (2LL << n) - 1));
    }
  }
  // a cap at the longest halting time leaves no error at all
  ErrorReport perfect = error_report(budget_decider(base.eval, 25), t, 10);
  for (const auto& row : perfect.rows) CHECK(row.eps == Rat(0));
  CHECK(perfect.tail_max == Rat(0));
}

TEST_CASE("fraction decider: hand-sized machine, quota reached or not") {
  auto src = synthetic({{0, BinStr{"0"}, BinStr{}, 1},
                        {1, BinStr{}, BinStr{}, 5},
                        {2, BinStr{"1"}, BinStr{}, 9}},
                       1);
  // all three programs of length <= 1 halt; in simulation order they finish
  // at steps 1 ("0"), 5 (""), 9 ("1")

  SUBCASE("quota of three needs nine steps") {
    FractionDecider fd = fraction_decider(src, Rat(3, 4), {1}, 9);
    REQUIRE(fd.blocks.size() == 1);
    CHECK(fd.blocks[0].required == 3);
    CHECK(fd.blocks[0].reached);
    CHECK(fd.blocks[0].cutoff_steps == 9);
    CHECK(fd.all_reached());
    CHECK(fd.decide(BinStr{"0"}) == Verdict::Yes);
    CHECK(fd.decide(BinStr{}) == Verdict::Yes);
    CHECK(fd.decide(BinStr{"1"}) == Verdict::Yes);
    CHECK(fd.decide(BinStr{"00"}) == Verdict::Undefined);  // longer than every block
  }

  SUBCASE("a tighter cap leaves the block unreached and silent") {
    FractionDecider fd = fraction_decider(src, Rat(3, 4), {1}, 8);
    CHECK_FALSE(fd.blocks[0].reached);
    CHECK_FALSE(fd.all_reached());
    CHECK(fd.decide(BinStr{"0"}) == Verdict::Undefined);
  }

  SUBCASE("a smaller quota stops mid-enumeration") {
    FractionDecider fd = fraction_decider(src, Rat(1, 2), {1}, 100);
    CHECK(fd.blocks[0].required == 2);
    CHECK(fd.blocks[0].cutoff_steps == 5);
    CHECK(fd.decide(BinStr{"0"}) == Verdict::Yes);
    CHECK(fd.decide(BinStr{}) == Verdict::Yes);
    CHECK(fd.decide(BinStr{"1"}) == Verdict::No);  // halts, but after the quota
  }
}

TEST_CASE("fraction decider: asking for more than the machine ever halts") {
  // terminal halting fraction at window 10 is 1178/2048; one more is too many
  FractionDecider fd = fraction_decider(base_machine(10), Rat(295, 512), {10}, kDefaultBudget);
  CHECK(fd.blocks[0].required == 1180);
  CHECK_FALSE(fd.blocks[0].reached);
  CHECK(fd.decide(BinStr{"0"}) == Verdict::Undefined);
}

TEST_CASE("fraction decider: preconditions") {
  EnumerableMachine base = base_machine(8);
  CHECK_THROWS_AS(fraction_decider(base, Rat(0), {8}, 100), std::invalid_argument);
  CHECK_THROWS_AS(fraction_decider(base, Rat(1), {8}, 100), std::invalid_argument);
  CHECK_THROWS_AS(fraction_decider(base, Rat(1, 2), {}, 100), std::invalid_argument);
  CHECK_THROWS_AS(fraction_decider(base, Rat(1, 2), {4, 4}, 100), std::invalid_argument);
  CHECK_THROWS_AS(fraction_decider(base, Rat(1, 2), {4, 6, 7}, 100), std::invalid_argument);
  CHECK_THROWS_AS(fraction_decider(base, Rat(1, 2), {4, 9}, 100), std::invalid_argument);
  CHECK_THROWS_AS(fraction_decider(base, Rat(1, 2), {-1, 4}, 100), std::invalid_argument);
  CHECK_NOTHROW(fraction_decider(base, Rat(1, 2), {4, 6, 8}, 100));
}

TEST_CASE("fraction decider: full error accounting on the real machine") {
  GroundTruth t = truth_for(12);
  Rat rho12((long long)t.H(12), 1LL << 13);
  Rat r = rho12 - Rat(1, 64);
  FractionDecider fd = fraction_decider(base_machine(12), r, {10, 12}, kDefaultBudget);
  REQUIRE(fd.blocks.size() == 2);
  CHECK(fd.blocks[0].required == 1146);
  CHECK(fd.blocks[1].required == 4584);
  CHECK(fd.all_reached());

  // independent recount: per block, sort halters by (steps, llex), cut at the
  // quota, and predict every verdict from scratch
  auto yes_set = [&](int n, std::uint64_t quota) {
    std::vector<std::uint64_t> halters;
    for (std::uint64_t i = 0; i < (std::uint64_t{2} << n) - 1; ++i)
      if (t.status[i] == Status::Halts) halters.push_back(i);
    std::sort(halters.begin(), halters.end(), [&](std::uint64_t a, std::uint64_t b) {
      if (t.steps[a] != t.steps[b]) return t.steps[a] < t.steps[b];
      return a < b;
    });
    REQUIRE(halters.size() >= quota);
    return std::set<std::uint64_t>(halters.begin(), halters.begin() + quota);
  };
  std::set<std::uint64_t> yes10 = yes_set(10, 1146), yes12 = yes_set(12, 4584);

  std::uint64_t fp = 0, fn = 0;
  for (std::uint64_t i = 0; i < t.program_count(); ++i) {
    BinStr p = codec::index_to_string(i);
    const auto& yes = p.size() <= 10 ? yes10 : yes12;
    Verdict want = yes.count(i) ? Verdict::Yes : Verdict::No;
    CHECK(fd.decide(p) == want);
    if (want == Verdict::Yes && t.status[i] == Status::Diverges) ++fp;
    if (want == Verdict::No && t.status[i] == Status::Halts) ++fn;
  }
  CHECK(fp == 0);  // quota members all halt by construction

  ErrorReport rep = error_report(fd.decide, t, 12);
  CHECK(rep.rows[12].false_neg == fn);
  CHECK(rep.rows[12].false_pos == 0);
  CHECK(rep.rows[12].undefined == 0);

  // the block error is bounded by the requested gap plus how much the halting
  // fraction still grows across the tail of the window
  Rat slack(0);
  for (int n = 6; n <= 12; ++n) {
    Rat rho_n((long long)t.H(n), 1LL << (n + 1));
    slack = std::max(slack, rho12 - rho_n);
  }
  CHECK(rep.rows[10].eps <= Rat(1, 64) + slack);
  CHECK(rep.rows[12].eps <= Rat(1, 64) + slack);
}

TEST_CASE("advice decider: perfect advice, zero error, zero silence") {
  GroundTruth t = truth_for(10);
  EnumerableMachine lt = left_total(base_machine(10));
  std::vector<AdviceLevel> levels;
  for (int m : {8, 9, 10}) {
    Rat tau((long long)t.h(m), 1LL << m);
    levels.push_back(AdviceLevel{{m}, tau, tau});
  }
  Decider d = advice_decider(levels);

  // on the left_total machine, membership at length m is rank < h(m)
  for (int m : {8, 9, 10}) {
    std::uint64_t h = t.h(m);
    for (std::uint64_t rank = 0; rank < (std::uint64_t{1} << m); ++rank) {
      Verdict want = rank < h ? Verdict::Yes : Verdict::No;
      CHECK(d(codec::nth_of_length(rank, m)) == want);
    }
  }
  // and the left_total event stream really is that initial segment
  std::vector<std::uint64_t> count(11, 0);
  for (const auto& e : collect(lt)) ++count[e.program.size()];
  for (int m = 0; m <= 10; ++m) CHECK(count[m] == t.h(m));
}

TEST_CASE("advice decider: a bracket of width 1/16 leaves 2^m/16 silent, none wrong") {
  GroundTruth t = truth_for(10);
  std::vector<AdviceLevel> levels;
  for (int m : {10, 9, 8}) {
    Rat tau((long long)t.h(m), 1LL << m);
    levels.push_back(AdviceLevel{{m}, tau - Rat(1, 32), tau + Rat(1, 32)});
  }
  Decider d = advice_decider(levels);

  for (int m : {8, 9, 10}) {
    std::uint64_t h = t.h(m), wrong = 0, silent = 0;
    for (std::uint64_t rank = 0; rank < (std::uint64_t{1} << m); ++rank) {
      Verdict v = d(codec::nth_of_length(rank, m));
      bool member = rank < h;
      if ((v == Verdict::Yes && !member) || (v == Verdict::No && member)) ++wrong;
      if (v == Verdict::Undefined) ++silent;
    }
    CHECK(wrong == 0);
    CHECK(silent == (std::uint64_t{1} << m) / 16);
  }
}

TEST_CASE("advice decider: trivial advice says nothing") {
  Decider d = advice_decider({AdviceLevel{{4}, Rat(0), Rat(1)}});
  for (std::uint64_t rank = 0; rank < 16; ++rank)
    CHECK(d(codec::nth_of_length(rank, 4)) == Verdict::Undefined);
}

TEST_CASE("advice decider: exact threshold arithmetic and level priority") {
  Decider d = advice_decider({AdviceLevel{{3}, Rat(1, 2), Rat(1, 2)}});
  for (std::uint64_t rank = 0; rank < 8; ++rank)
    CHECK(d(codec::nth_of_length(rank, 3)) == (rank < 4 ? Verdict::Yes : Verdict::No));
  CHECK(d(BinStr{"0000"}) == Verdict::Undefined);  // unhandled length

  // the first level handling a length wins
  Decider d2 = advice_decider({AdviceLevel{{3}, Rat(1), Rat(1)},
                               AdviceLevel{{3}, Rat(0), Rat(0)}});
  CHECK(d2(BinStr{"111"}) == Verdict::Yes);
}

TEST_CASE("advice decider: preconditions") {
  CHECK_THROWS_AS(advice_decider({AdviceLevel{{3}, Rat(3, 4), Rat(1, 2)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(advice_decider({AdviceLevel{{3}, Rat(0), Rat(9, 8)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(advice_decider({AdviceLevel{{63}, Rat(0), Rat(1)}}),
                  std::invalid_argument);
}

TEST_CASE("staged decider: stamps, stage selection, and the No tail") {
  auto enumerated = vector_source({{0, BinStr{"0"}, BinStr{}, 2}, {1, BinStr{"00"}, BinStr{}, 7}});
  Decider d = staged_decider({{2, 3}, {4, 8}}, enumerated);
  CHECK(d(BinStr{"0"}) == Verdict::Yes);     // stamped 2 <= 3
  CHECK(d(BinStr{"1"}) == Verdict::No);      // never enumerated
  CHECK(d(BinStr{"00"}) == Verdict::Yes);    // second stage, stamped 7 <= 8
  CHECK(d(BinStr{"000"}) == Verdict::No);
  CHECK(d(BinStr{"0000"}) == Verdict::No);   // beyond the last stage boundary
}

TEST_CASE("staged decider: stage budgets act as step cutoffs") {
  auto enumerated = vector_source({{0, BinStr{"0"}, BinStr{}, 9}});
  Decider d = staged_decider({{2, 8}}, enumerated);
  CHECK(d(BinStr{"0"}) == Verdict::No);  // enumerated, but after the budget
}

TEST_CASE("staged decider: preconditions") {
  auto src = vector_source({});
  CHECK_THROWS_AS(staged_decider({}, src), std::invalid_argument);
  CHECK_THROWS_AS(staged_decider({{3, 5}, {4, 9}}, src), std::invalid_argument);
  CHECK_NOTHROW(staged_decider({{3, 5}, {5, 9}}, src));
}

TEST_CASE("staged decider: error rates on the real machine") {
  GroundTruth t = truth_for(12);
  EventSource events = base_machine(12).events;

  // zero budget: a constant No, so the error at n is the halting count
  ErrorReport all_no = error_report(staged_decider({{13, 0}}, events), t, 12);
  for (int n = 0; n <= 12; ++n) {
    CHECK(all_no.rows[n].false_neg == t.H(n));
    CHECK(all_no.rows[n].eps == Rat((long long)t.H(n), (2LL << n) - 1));
  }

  // budget below the longest halting time: errors are exactly the survivors
  ErrorReport some = error_report(staged_decider({{13, 16}}, events), t, 12);
  for (int n = 0; n <= 12; ++n) {
    CHECK(some.rows[n].false_pos == 0);
    CHECK(some.rows[n].undefined == 0);
    CHECK(some.rows[n].false_neg == survivors_at(t, n, 16));
  }
  CHECK(some.rows[12].eps == Rat(8, 8191));

  // budget at the longest halting time: a perfect decider inside the window
  ErrorReport none = error_report(staged_decider({{13, 25}}, events), t, 12);
  for (const auto& row : none.rows) CHECK(row.eps == Rat(0));
}

TEST_CASE("error report: perfect and silent deciders, tail spread") {
  GroundTruth t = truth_for(8);
  Decider perfect = [&](const BinStr& p) {
    return t.status_of(p) == Status::Halts ? Verdict::Yes : Verdict::No;
  };
  ErrorReport rep = error_report(perfect, t, 8);
  REQUIRE(rep.rows.size() == 9);
  for (const auto& row : rep.rows) {
    CHECK(row.false_pos == 0);
    CHECK(row.false_neg == 0);
    CHECK(row.undefined == 0);
    CHECK(row.eps == Rat(0));
  }
  CHECK(rep.tail_max == Rat(0));
  CHECK(rep.tail_min == Rat(0));

  Decider silent = [](const BinStr&) { return Verdict::Undefined; };
  ErrorReport rep2 = error_report(silent, t, 8);
  for (int n = 0; n <= 8; ++n) {
    CHECK(rep2.rows[n].undefined == (std::uint64_t{2} << n) - 1);
    CHECK(rep2.rows[n].eps == Rat(1));
  }
  CHECK(rep2.tail_max == Rat(1));
  CHECK(rep2.tail_min == Rat(1));
}

TEST_CASE("error report: refuses bad windows and unsettled truth") {
  GroundTruth t = truth_for(4);
  Decider silent = [](const BinStr&) { return Verdict::Undefined; };
  CHECK_THROWS_AS(error_report(silent, t, 5), std::invalid_argument);
  CHECK_THROWS_AS(error_report(silent, t, -1), std::invalid_argument);

  GroundTruth holes = certify_window(raw_certifier(), 4, 1, kDefaultSpace);
  CHECK_THROWS_AS(error_report(silent, holes, 4), std::invalid_argument);
}

TEST_CASE("sparse spoiler: uniform distribution, exact quota") {
  std::vector<std::pair<BinStr, Rat>> dist;
  for (std::uint64_t rank = 0; rank < 48; ++rank)
    dist.push_back({codec::nth_of_length(rank, 6), Rat(1, 64)});
  SpoilerResult res = sparse_spoiler(dist, Rat(1, 8), 6);
  CHECK(res.total_mass == Rat(3, 4));
  REQUIRE(res.added.size() == 4);  // ceil((1/16) * 64)
  for (std::uint64_t rank = 0; rank < 4; ++rank)
    CHECK(res.added[rank] == codec::nth_of_length(rank, 6));  // ties break toward lex
  CHECK(res.carved_mass == Rat(1, 16));
  CHECK(res.carved_mass >= Rat(1, 8) / 4 * res.total_mass);
}

TEST_CASE("sparse spoiler: mass at one half is not enough") {
  std::vector<std::pair<BinStr, Rat>> dist;
  for (std::uint64_t rank = 0; rank < 32; ++rank)
    dist.push_back({codec::nth_of_length(rank, 6), Rat(1, 64)});
  CHECK_THROWS_AS(sparse_spoiler(dist, Rat(1, 8), 6), TriggerNotMet);
}

TEST_CASE("sparse spoiler: thin support is padded to the quota") {
  std::vector<std::pair<BinStr, Rat>> dist{{BinStr{"111111"}, Rat(9, 16)}};
  SpoilerResult res = sparse_spoiler(dist, Rat(1, 8), 6);
  REQUIRE(res.added.size() == 4);
  CHECK(res.added[0] == BinStr{"111111"});
  CHECK(res.added[1] == BinStr{"000000"});
  CHECK(res.added[2] == BinStr{"000001"});
  CHECK(res.added[3] == BinStr{"000010"});
  CHECK(res.carved_mass == Rat(9, 16));
}

TEST_CASE("sparse spoiler: most probable first, lex on ties, lengths ascending") {
  std::vector<std::pair<BinStr, Rat>> dist{
      {BinStr{"1111111"}, Rat(1, 8)},   // length 7
      {BinStr{"110000"}, Rat(1, 4)},    // length 6
      {BinStr{"000011"}, Rat(1, 4)},    // length 6, same mass, lex smaller
      {BinStr{"101010"}, Rat(1, 16)},
  };
  SpoilerResult res = sparse_spoiler(dist, Rat(1, 8), 6);
  // quotas: 4 at length 6 (one padded), 8 at length 7 (seven padded)
  REQUIRE(res.added.size() == 12);
  CHECK(res.added[0] == BinStr{"000011"});
  CHECK(res.added[1] == BinStr{"110000"});
  CHECK(res.added[2] == BinStr{"101010"});
  std::size_t last_len = 0;
  for (const auto& s : res.added) {
    CHECK(s.size() >= last_len);
    last_len = s.size();
  }
  CHECK(res.carved_mass == Rat(1, 8) + Rat(1, 4) + Rat(1, 4) + Rat(1, 16));
}

TEST_CASE("sparse spoiler: preconditions, each with its own complaint") {
  std::vector<std::pair<BinStr, Rat>> ok{{BinStr{"111111"}, Rat(9, 16)}};
  CHECK_THROWS_AS(sparse_spoiler(ok, Rat(0), 6), std::invalid_argument);
  CHECK_THROWS_AS(sparse_spoiler(ok, Rat(9, 8), 6), std::invalid_argument);
  CHECK_THROWS_AS(sparse_spoiler(ok, Rat(1, 8), 63), std::invalid_argument);
  CHECK_THROWS_AS(sparse_spoiler(ok, Rat(1, 8), 7), std::invalid_argument);  // support too short
  CHECK_THROWS_AS(
      sparse_spoiler({{BinStr{"111111"}, Rat(1, 4)}, {BinStr{"111111"}, Rat(1, 4)}}, Rat(1, 8), 6),
      std::invalid_argument);
  CHECK_THROWS_AS(sparse_spoiler({{BinStr{"111111"}, Rat(1, 3)}}, Rat(1, 8), 6),
                  std::invalid_argument);
  CHECK_THROWS_AS(sparse_spoiler({{BinStr{"111111"}, Rat(0)}}, Rat(1, 8), 6),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      sparse_spoiler({{BinStr{"111111"}, Rat(3, 4)}, {BinStr{"111110"}, Rat(3, 4)}}, Rat(1, 8), 6),
      std::invalid_argument);
  // rounding the quota up must not break the density bound at the base length
  CHECK_THROWS_AS(sparse_spoiler({{BinStr{"11"}, Rat(1, 4)}}, Rat(1, 8), 2),
                  std::invalid_argument);
}

TEST_CASE("sparse spoiler: carved share holds across seeded distributions") {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 200; ++trial) {
    int n0 = 6 + int(rng() % 3);
    std::vector<std::pair<BinStr, Rat>> dist{{codec::nth_of_length(rng() % 16, n0), Rat(17, 32)}};
    std::set<std::string> used{dist[0].first.s};
    int extras = int(rng() % 12);
    for (int i = 0; i < extras; ++i) {
      int len = n0 + int(rng() % 3);
      BinStr s = codec::nth_of_length(rng() % (std::uint64_t{1} << len), len);
      if (!used.insert(s.s).second) continue;
      dist.push_back({s, Rat(1, 64)});
    }
    Rat eps(1, 8);
    SpoilerResult res = sparse_spoiler(dist, eps, n0);
    CHECK(res.carved_mass >= eps / 4 * res.total_mass);
    std::map<std::size_t, std::uint64_t> per_len;
    for (const auto& s : res.added) ++per_len[s.size()];
    for (const auto& [len, cnt] : per_len)
      CHECK(Rat((long long)cnt, 1) <= eps * Rat(1LL << len, 1));
    // determinism
    CHECK(sparse_spoiler(dist, eps, n0).added == res.added);
  }
}

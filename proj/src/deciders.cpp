#include "haltlab/deciders.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <unordered_map>
#include <unordered_set>

namespace haltlab {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Undefined: return "undefined";
  }
  return "?";
}

namespace {

using u128 = unsigned __int128;

// ceil(q * 2^pow) for a nonnegative rational q, exact in 128-bit intermediate.
std::uint64_t ceil_times_pow2(const Rat& q, int pow) {
  u128 num = u128(q.numerator()) << pow;
  u128 den = u128(q.denominator());
  return std::uint64_t((num + den - 1) / den);
}

// sign of (value - q * 2^pow)
int compare_with_times_pow2(std::uint64_t value, const Rat& q, int pow) {
  u128 lhs = u128(value) * u128(q.denominator());
  u128 rhs = u128(q.numerator()) << pow;
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

}  // namespace

Decider budget_decider(Evaluator eval, std::uint64_t t) {
  if (t < 1) throw std::invalid_argument("budget_decider: step budget must be at least 1");
  return [eval = std::move(eval), t](const BinStr& p) {
    return std::holds_alternative<Halted>(eval(p, t)) ? Verdict::Yes : Verdict::No;
  };
}

FractionDecider fraction_decider(const EnumerableMachine& u, const Rat& r,
                                 const std::vector<int>& lengths, std::uint64_t cap) {
  if (r <= Rat(0) || r >= Rat(1))
    throw std::invalid_argument("fraction_decider: r must lie strictly between 0 and 1");
  if (lengths.empty()) throw std::invalid_argument("fraction_decider: no block lengths");
  for (std::size_t i = 0; i + 1 < lengths.size(); ++i)
    if (lengths[i + 1] < lengths[i] + int(i) + 1)
      throw std::invalid_argument("fraction_decider: block lengths grow too slowly");
  if (lengths.front() < 0 || lengths.back() > u.window)
    throw std::invalid_argument("fraction_decider: block lengths outside the machine window");

  std::vector<HaltEvent> events;
  for (auto s = u.events(); auto e = s->next();) events.push_back(*e);

  struct Shared {
    std::vector<int> lengths;
    std::vector<char> reached;
    std::vector<std::unordered_set<std::string>> yes;
  };
  auto shared = std::make_shared<Shared>();
  shared->lengths = lengths;

  FractionDecider result;
  for (int n : lengths) {
    // Simulation order for one block: all programs of length <= n advanced in
    // lockstep, so halters arrive by step count, ties by enumeration order.
    std::vector<const HaltEvent*> block;
    for (const auto& e : events)
      if (int(e.program.size()) <= n) block.push_back(&e);
    std::sort(block.begin(), block.end(), [](const HaltEvent* a, const HaltEvent* b) {
      if (a->steps != b->steps) return a->steps < b->steps;
      return codec::string_to_index(a->program) < codec::string_to_index(b->program);
    });

    FractionBlock fb;
    fb.length = n;
    fb.required = ceil_times_pow2(r, n + 1);
    std::unordered_set<std::string> yes;
    if (block.size() >= fb.required && block[fb.required - 1]->steps <= cap) {
      fb.reached = true;
      fb.cutoff_steps = block[fb.required - 1]->steps;
      for (std::uint64_t i = 0; i < fb.required; ++i) yes.insert(block[i]->program.s);
    }
    shared->reached.push_back(fb.reached ? 1 : 0);
    shared->yes.push_back(std::move(yes));
    result.blocks.push_back(fb);
  }

  result.decide = [shared](const BinStr& p) {
    auto it = std::lower_bound(shared->lengths.begin(), shared->lengths.end(),
                               int(p.size()));
    if (it == shared->lengths.end()) return Verdict::Undefined;
    std::size_t i = std::size_t(it - shared->lengths.begin());
    if (!shared->reached[i]) return Verdict::Undefined;
    return shared->yes[i].count(p.s) ? Verdict::Yes : Verdict::No;
  };
  return result;
}

Decider advice_decider(const std::vector<AdviceLevel>& levels) {
  for (const auto& lv : levels) {
    if (lv.low < Rat(0) || lv.low > lv.high || lv.high > Rat(1))
      throw std::invalid_argument("advice_decider: need 0 <= low <= high <= 1");
    for (int m : lv.lengths)
      if (m < 0 || m > 62)
        throw std::invalid_argument("advice_decider: handled length out of range");
  }
  return [levels](const BinStr& p) {
    int m = int(p.size());
    for (const auto& lv : levels) {
      if (std::find(lv.lengths.begin(), lv.lengths.end(), m) == lv.lengths.end())
        continue;
      std::uint64_t rank = codec::lex_rank(p);
      if (compare_with_times_pow2(rank, lv.low, m) < 0) return Verdict::Yes;
      if (compare_with_times_pow2(rank, lv.high, m) >= 0) return Verdict::No;
      return Verdict::Undefined;
    }
    return Verdict::Undefined;
  };
}

Decider staged_decider(const std::vector<Stage>& stages, const EventSource& enumerated) {
  if (stages.empty()) throw std::invalid_argument("staged_decider: no stages");
  for (std::size_t i = 1; i < stages.size(); ++i)
    if (stages[i].length <= stages[i - 1].length + int(i))
      throw std::invalid_argument("staged_decider: stage lengths grow too slowly");

  auto stamps = std::make_shared<std::unordered_map<std::string, std::uint64_t>>();
  for (auto s = enumerated(); auto e = s->next();) stamps->emplace(e->program.s, e->steps);

  return [stages, stamps](const BinStr& p) {
    for (const auto& st : stages) {
      if (int(p.size()) >= st.length) continue;
      auto it = stamps->find(p.s);
      return (it != stamps->end() && it->second <= st.budget) ? Verdict::Yes : Verdict::No;
    }
    return Verdict::No;
  };
}

ErrorReport error_report(const Decider& d, const GroundTruth& truth, int window) {
  if (window < 0 || window > truth.max_len)
    throw std::invalid_argument("error_report: window outside the truth window");

  ErrorReport rep;
  std::uint64_t fp = 0, fn = 0, un = 0;
  for (int n = 0; n <= window; ++n) {
    for (std::uint64_t rank = 0; rank < (std::uint64_t(1) << n); ++rank) {
      BinStr p = codec::nth_of_length(rank, n);
      Status st = truth.status_of(p);
      if (st == Status::Unknown)
        throw std::invalid_argument("error_report: truth has unknown verdicts in the window");
      switch (d(p)) {
        case Verdict::Yes:
          if (st == Status::Diverges) ++fp;
          break;
        case Verdict::No:
          if (st == Status::Halts) ++fn;
          break;
        case Verdict::Undefined:
          ++un;
          break;
      }
    }
    auto strings = (long long)((std::uint64_t(1) << (n + 1)) - 1);
    rep.rows.push_back(ErrorRow{n, fp, fn, un, Rat((long long)(fp + fn + un), strings)});
  }

  int tail_lo = (window + 1) / 2;
  rep.tail_max = rep.rows[tail_lo].eps;
  rep.tail_min = rep.rows[tail_lo].eps;
  for (int n = tail_lo; n <= window; ++n) {
    rep.tail_max = std::max(rep.tail_max, rep.rows[n].eps);
    rep.tail_min = std::min(rep.tail_min, rep.rows[n].eps);
  }
  return rep;
}

SpoilerResult sparse_spoiler(const std::vector<std::pair<BinStr, Rat>>& dist,
                             const Rat& eps, int n0) {
  if (eps <= Rat(0) || eps > Rat(1))
    throw std::invalid_argument("sparse_spoiler: eps must lie in (0, 1]");
  if (n0 < 0 || n0 > 62) throw std::invalid_argument("sparse_spoiler: n0 out of range");

  Rat total(0);
  std::unordered_set<std::string> support;
  std::map<int, std::vector<std::pair<BinStr, Rat>>> by_length;
  for (const auto& [s, prob] : dist) {
    if (int(s.size()) < n0 || s.size() > 62)
      throw std::invalid_argument("sparse_spoiler: support string length outside [n0, 62]");
    if (!support.insert(s.s).second)
      throw std::invalid_argument("sparse_spoiler: duplicate support string");
    if (prob <= Rat(0) || prob > Rat(1))
      throw std::invalid_argument("sparse_spoiler: probabilities must lie in (0, 1]");
    long long den = prob.denominator();
    if ((den & (den - 1)) != 0)
      throw std::invalid_argument("sparse_spoiler: probabilities must be dyadic");
    total += prob;
    by_length[int(s.size())].push_back({s, prob});
  }
  if (total > Rat(1)) throw std::invalid_argument("sparse_spoiler: mass exceeds 1");

  // Quota sanity at the base length: the per-length addition count must stay
  // below the eps density even after rounding up.
  std::uint64_t k0 = ceil_times_pow2(eps / 2, n0);
  if (compare_with_times_pow2(k0, eps, n0) > 0)
    throw std::invalid_argument("sparse_spoiler: rounding breaks the density bound at n0");

  if (total <= Rat(1, 2)) throw TriggerNotMet{};

  SpoilerResult out;
  out.total_mass = total;
  out.carved_mass = Rat(0);
  for (auto& [n, group] : by_length) {
    std::sort(group.begin(), group.end(),
              [](const std::pair<BinStr, Rat>& a, const std::pair<BinStr, Rat>& b) {
                if (a.second != b.second) return a.second > b.second;
                return a.first.s < b.first.s;
              });
    std::uint64_t quota = ceil_times_pow2(eps / 2, n);
    std::uint64_t take = std::min<std::uint64_t>(quota, group.size());
    std::unordered_set<std::uint64_t> taken_ranks;
    for (std::uint64_t i = 0; i < take; ++i) {
      out.added.push_back(group[i].first);
      out.carved_mass += group[i].second;
      taken_ranks.insert(codec::lex_rank(group[i].first));
    }
    // Thin support: fill the quota with lex-least strings carrying no mass.
    for (std::uint64_t rank = 0; take < quota && rank < (std::uint64_t(1) << n); ++rank) {
      if (taken_ranks.count(rank)) continue;
      out.added.push_back(codec::nth_of_length(rank, n));
      ++take;
    }
  }
  return out;
}

}  // namespace haltlab

#include "haltlab/dovetail.hpp"

#include <algorithm>
#include <bit>

namespace haltlab {

std::uint64_t GroundTruth::h(int n) const {
  std::uint64_t first = n == 0 ? 0 : (std::uint64_t(1) << n) - 1;
  std::uint64_t last = (std::uint64_t(1) << (n + 1)) - 2;  // inclusive
  std::uint64_t c = 0;
  for (std::uint64_t i = first; i <= last; ++i)
    if (status[i] == Status::Halts) ++c;
  return c;
}

std::uint64_t GroundTruth::H(int n) const {
  std::uint64_t c = 0;
  for (int m = 0; m <= n; ++m) c += h(m);
  return c;
}

NonzeroUnknown::NonzeroUnknown(std::vector<std::uint64_t> idx)
    : std::runtime_error("ground truth refused: " + std::to_string(idx.size()) +
                         " program(s) uncertified in window"),
      indices(std::move(idx)) {}

GroundTruth certify_window(const Certifier& c, int max_len, std::uint64_t budget,
                           std::uint64_t space) {
  GroundTruth t;
  t.max_len = max_len;
  t.budget = budget;
  t.space = space;
  std::uint64_t count = (std::uint64_t(1) << (max_len + 1)) - 1;
  t.status.resize(count, Status::Unknown);
  t.steps.resize(count, 0);
  t.output.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    BinStr p = codec::index_to_string(i);
    RunOutcome r = c(p, budget, space);
    if (auto* h = std::get_if<Halted>(&r)) {
      t.status[i] = Status::Halts;
      t.steps[i] = std::uint32_t(h->steps);
      t.output[i] = std::move(h->output);
    } else if (std::holds_alternative<CertifiedDivergent>(r)) {
      t.status[i] = Status::Diverges;
    } else {
      t.unknown.push_back(i);
    }
  }
  return t;
}

GroundTruth ground_truth(const Certifier& c, int max_len, std::uint64_t budget,
                         std::uint64_t space) {
  GroundTruth t = certify_window(c, max_len, budget, space);
  if (!t.unknown.empty()) throw NonzeroUnknown(t.unknown);
  return t;
}

std::vector<HaltEvent> dovetail_events(const GroundTruth& truth) {
  struct Item {
    std::uint64_t round;
    std::uint64_t index;
  };
  std::vector<Item> items;
  for (std::uint64_t i = 0; i < truth.program_count(); ++i)
    if (truth.status[i] == Status::Halts)
      items.push_back({std::bit_ceil(std::uint64_t(truth.steps[i])), i});
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.round != b.round) return a.round < b.round;
    return a.index < b.index;
  });
  std::vector<HaltEvent> out;
  out.reserve(items.size());
  for (std::size_t s = 0; s < items.size(); ++s) {
    const auto i = items[s].index;
    out.push_back(HaltEvent{s, codec::index_to_string(i), truth.output[i],
                            truth.steps[i]});
  }
  return out;
}

EnumerableMachine base_machine(int max_len, std::uint64_t budget, std::uint64_t space) {
  EnumerableMachine m;
  m.name = "deskvm";
  m.window = max_len;
  m.eval = [](const BinStr& p, std::uint64_t b) { return run(p, BinStr{}, b); };
  m.events = [max_len, budget, space]() -> EventStreamPtr {
    GroundTruth t = ground_truth(raw_certifier(), max_len, budget, space);
    return std::make_unique<VectorEventStream>(dovetail_events(t));
  };
  return m;
}

std::vector<std::uint64_t> power_checkpoints(std::uint64_t budget) {
  std::vector<std::uint64_t> cps{0};
  for (std::uint64_t t = 1; t < budget; t *= 2) cps.push_back(t);
  cps.push_back(budget);
  return cps;
}

HaltingTable halting_table(const std::vector<HaltEvent>& events, int max_len,
                           std::vector<std::uint64_t> checkpoints) {
  HaltingTable table;
  table.max_len = max_len;
  table.checkpoints = std::move(checkpoints);
  const auto& cps = table.checkpoints;
  // halted[n][ci]: events of length exactly n with steps <= cps[ci]
  std::vector<std::vector<std::uint64_t>> halted(
      max_len + 1, std::vector<std::uint64_t>(cps.size(), 0));
  for (const auto& e : events) {
    if (int(e.program.size()) > max_len) continue;
    for (std::size_t ci = 0; ci < cps.size(); ++ci)
      if (e.steps <= cps[ci]) ++halted[e.program.size()][ci];
  }
  for (int n = 0; n <= max_len; ++n) {
    for (std::size_t ci = 0; ci < cps.size(); ++ci) {
      HaltingTableRow row;
      row.n = n;
      row.t = cps[ci];
      row.h = halted[n][ci];
      row.H = n == 0 ? row.h : table.at(n - 1, ci).H + row.h;
      row.rho = Rat(row.H, 1LL << (n + 1));
      row.tau = Rat(row.h, 1LL << n);
      table.rows.push_back(row);
    }
  }
  return table;
}

std::vector<std::uint64_t> bb_table(const GroundTruth& truth) {
  std::vector<std::uint64_t> bb(truth.max_len + 1, 0);
  for (int n = 0; n <= truth.max_len; ++n) {
    std::uint64_t first = n == 0 ? 0 : (std::uint64_t(1) << n) - 1;
    std::uint64_t last = (std::uint64_t(1) << (n + 1)) - 2;
    std::uint64_t best = n == 0 ? 0 : bb[n - 1];
    for (std::uint64_t i = first; i <= last; ++i)
      if (truth.status[i] == Status::Halts) best = std::max(best, std::uint64_t(truth.steps[i]));
    bb[n] = best;
  }
  return bb;
}

ComplexityTable complexity_table(const GroundTruth& truth) {
  ComplexityTable ct;
  for (std::uint64_t i = 0; i < truth.program_count(); ++i) {
    if (truth.status[i] != Status::Halts) continue;
    int len = int(codec::index_to_string(i).size());
    auto [it, fresh] = ct.k.emplace(truth.output[i], len);
    if (!fresh && len < it->second) it->second = len;
  }
  ct.b.resize(truth.max_len + 1);
  for (const auto& [y, k] : ct.k) {
    std::uint64_t idx = codec::string_to_index(y);
    for (int m = k; m <= truth.max_len; ++m)
      if (!ct.b[m] || *ct.b[m] < idx) ct.b[m] = idx;
  }
  return ct;
}

std::optional<int> bb_vs_b_constant(const std::vector<std::uint64_t>& bb,
                                    const ComplexityTable& ct, int c_max) {
  int max_len = int(bb.size()) - 1;
  for (int c = 0; c <= c_max; ++c) {
    bool ok = true;
    for (int n = 0; n <= max_len && ok; ++n) {
      if (bb[n] == 0) continue;  // no halting program this short
      if (n - c >= 0 && ct.b[n - c] && *ct.b[n - c] > bb[n]) ok = false;
      if (n + c <= max_len && ct.b[n + c] && *ct.b[n + c] < bb[n]) ok = false;
      if (n + c <= max_len && !ct.b[n + c]) ok = false;  // nothing that cheap, bound fails
    }
    if (ok) return c;
  }
  return std::nullopt;
}

std::uint64_t survivors_at(const GroundTruth& truth, int n, std::uint64_t t) {
  std::uint64_t alive = 0;
  std::uint64_t last = (std::uint64_t(1) << (n + 1)) - 2;
  for (std::uint64_t i = 0; i <= last; ++i)
    if (truth.status[i] == Status::Halts && truth.steps[i] > t) ++alive;
  return alive;
}

SurvivorStats survivor_stats(const GroundTruth& truth, int n, int k,
                             std::vector<std::uint64_t> checkpoints) {
  SurvivorStats s;
  s.n = n;
  s.k = k;
  std::uint64_t Hn = truth.H(n);
  s.r = Hn % (std::uint64_t(1) << (n + 1 - k));
  // t*: the (H_n - r)-th smallest halting time among programs of length <= n.
  std::vector<std::uint64_t> times;
  std::uint64_t last = (std::uint64_t(1) << (n + 1)) - 2;
  for (std::uint64_t i = 0; i <= last; ++i)
    if (truth.status[i] == Status::Halts) times.push_back(truth.steps[i]);
  std::sort(times.begin(), times.end());
  std::uint64_t need = Hn - s.r;
  s.t_star = need == 0 ? 0 : times[need - 1];
  s.checkpoints = std::move(checkpoints);
  for (std::uint64_t t : s.checkpoints) s.survivors.push_back(survivors_at(truth, n, t));
  return s;
}

}  // namespace haltlab

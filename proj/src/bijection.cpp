#include "haltlab/bijection.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <random>
#include <unordered_set>

namespace haltlab {

namespace {

std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  // Rejection sampling; engine output is pinned by the standard, and this
  // avoids the library-specific distribution adapters.
  std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

InjectionOracle table_tail_oracle(std::vector<std::uint64_t> table, std::uint64_t tail_add) {
  std::uint64_t top = 0;
  std::unordered_set<std::uint64_t> seen;
  for (std::uint64_t v : table) {
    if (!seen.insert(v).second)
      throw std::invalid_argument("table_tail_oracle: table values must be distinct");
    top = std::max(top, v + 1);
  }
  if (!table.empty() && tail_add < top)
    throw std::invalid_argument("table_tail_oracle: tail must clear every table value");

  auto shared = std::make_shared<std::vector<std::uint64_t>>(std::move(table));
  InjectionOracle o;
  o.apply = [shared, tail_add](std::uint64_t n) {
    return n < shared->size() ? (*shared)[n] : n + tail_add;
  };
  o.preimage = [shared, tail_add](std::uint64_t v) -> std::optional<std::uint64_t> {
    for (std::uint64_t i = 0; i < shared->size(); ++i)
      if ((*shared)[i] == v) return i;
    if (v >= shared->size() + tail_add) return v - tail_add;
    return std::nullopt;
  };
  return o;
}

InjectionOracle seeded_oracle(std::uint64_t seed, std::uint64_t table_width) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> pool(2 * table_width);
  for (std::uint64_t i = 0; i < pool.size(); ++i) pool[i] = i;
  std::uint64_t top = 0;
  std::vector<std::uint64_t> table(table_width);
  for (std::uint64_t i = 0; i < table_width; ++i) {
    std::uint64_t j = i + bounded_draw(rng, pool.size() - i);
    std::swap(pool[i], pool[j]);
    table[i] = pool[i];
    top = std::max(top, pool[i] + 1);
  }
  std::uint64_t tail_add = table_width == 0 ? 0 : top + bounded_draw(rng, 5);
  return table_tail_oracle(std::move(table), tail_add);
}

InjectivityViolation::InjectivityViolation(Side s, std::uint64_t a, std::uint64_t b,
                                           std::uint64_t v)
    : std::runtime_error("injection oracle " + std::string(side_name(s)) +
                         " maps positions " + std::to_string(a) + " and " +
                         std::to_string(b) + " both to " + std::to_string(v)),
      side(s),
      first_pos(a),
      second_pos(b),
      value(v) {}

ReductionInvalid::ReductionInvalid(Side s, std::uint64_t a, std::uint64_t img)
    : std::runtime_error("reduction " + std::string(side_name(s)) + " breaks membership at " +
                         std::to_string(a) + " -> " + std::to_string(img)),
      side(s),
      at(a),
      image(img) {}

// --- ComponentIndex ------------------------------------------------------------

std::uint64_t ComponentIndex::find(std::uint64_t k) {
  auto it = parent_.find(k);
  if (it == parent_.end()) {
    parent_.emplace(k, k);
    return k;
  }
  std::uint64_t root = k;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[k] != root) {
    std::uint64_t next = parent_[k];
    parent_[k] = root;
    k = next;
  }
  return root;
}

void ComponentIndex::add_edge(std::uint64_t left, std::uint64_t right) {
  parent_[find(key(Side::Left, left))] = find(key(Side::Right, right));
}

bool ComponentIndex::same(Side sa, std::uint64_t a, Side sb, std::uint64_t b) {
  return find(key(sa, a)) == find(key(sb, b));
}

// --- BijectionBuilder ----------------------------------------------------------

BijectionBuilder::BijectionBuilder(InjectionOracle f, InjectionOracle g) {
  f_.oracle = std::move(f);
  f_.side = Side::Left;
  g_.oracle = std::move(g);
  g_.side = Side::Right;
}

void BijectionBuilder::log_edge(const View& w, std::uint64_t pos, std::uint64_t val) {
  if (w.side == Side::Left)
    record_.f_edges.push_back({pos, val});
  else
    record_.g_edges.push_back({val, pos});
}

// Raw oracle query with caching, duplicate detection and edge logging.
std::uint64_t BijectionBuilder::view_apply(View& w, std::uint64_t pos) {
  if (auto it = w.overrides.find(pos); it != w.overrides.end()) return it->second;
  if (auto it = w.raw.find(pos); it != w.raw.end()) return it->second;
  std::uint64_t val = w.oracle.apply(pos);
  if (auto dup = w.raw_rev.find(val); dup != w.raw_rev.end())
    throw InjectivityViolation(w.side, dup->second, pos, val);
  w.raw.emplace(pos, val);
  w.raw_rev.emplace(val, pos);
  log_edge(w, pos, val);
  return val;
}

// Position currently mapping to val under the patched view, if any. The
// patched view is globally injective (raw injectivity plus the exchange
// discipline), so at most one candidate can exist; seeing two means an
// oracle lied.
std::optional<std::uint64_t> BijectionBuilder::view_preimage(View& w, std::uint64_t val) {
  std::optional<std::uint64_t> from_override, from_raw;
  if (auto it = w.override_rev.find(val); it != w.override_rev.end())
    from_override = it->second;
  if (auto p = w.oracle.preimage(val); p && !w.overrides.count(*p)) {
    if (auto it = w.raw.find(*p); it != w.raw.end()) {
      if (it->second == val) from_raw = *p;
    } else {
      std::uint64_t got = w.oracle.apply(*p);
      if (got == val) {
        if (auto dup = w.raw_rev.find(got); dup != w.raw_rev.end())
          throw InjectivityViolation(w.side, dup->second, *p, got);
        w.raw.emplace(*p, got);
        w.raw_rev.emplace(got, *p);
        log_edge(w, *p, got);
        from_raw = *p;
      }
    }
  }
  if (from_override && from_raw)
    throw InjectivityViolation(w.side, *from_override, *from_raw, val);
  return from_override ? from_override : from_raw;
}

void BijectionBuilder::view_override(View& w, std::uint64_t pos, std::uint64_t val) {
  if (auto it = w.overrides.find(pos); it != w.overrides.end()) {
    auto rit = w.override_rev.find(it->second);
    if (rit != w.override_rev.end() && rit->second == pos) w.override_rev.erase(rit);
  }
  w.overrides[pos] = val;
  w.override_rev[val] = pos;
  pending_overrides_.push_back(TranscriptOverride{w.side, pos, val});
}

void BijectionBuilder::add_pair(Side served, std::uint64_t u, std::uint64_t v) {
  std::uint64_t l = served == Side::Left ? u : v;
  std::uint64_t r = served == Side::Left ? v : u;
  if (!h_lr_.emplace(l, r).second || !h_rl_.emplace(r, l).second)
    throw std::logic_error("builder: element paired twice");
  TranscriptEntry e;
  e.step = record_.transcript.size();
  e.served = served;
  e.left = l;
  e.right = r;
  e.overrides = std::move(pending_overrides_);
  pending_overrides_.clear();
  record_.transcript.push_back(std::move(e));
}

void BijectionBuilder::serve(View& fwd, View& bwd, Side side) {
  std::uint64_t& cursor = side == Side::Left ? next_left_ : next_right_;
  const auto& covered = side == Side::Left ? h_lr_ : h_rl_;
  while (covered.count(cursor)) ++cursor;
  std::uint64_t u = cursor;

  std::uint64_t v = view_apply(fwd, u);
  std::uint64_t back = view_apply(bwd, v);
  std::string label;
  std::uint64_t partner;
  if (back == u) {
    label = "1";
    partner = v;
  } else if (back < u) {
    throw std::logic_error("builder: a covered element came back as a fresh partner");
  } else {
    std::uint64_t w = back;
    auto t = view_preimage(bwd, u);
    if (!t) {
      // u has no preimage in the backward view: repoint v at it.
      view_override(bwd, v, u);
      label = "2.1";
      partner = v;
    } else if (*t > v) {
      // Swap the two backward values sitting in reversed order.
      view_override(bwd, v, u);
      view_override(bwd, *t, w);
      label = "2.2.1";
      partner = v;
    } else {
      // t < v: pair u with t instead, repairing the forward view.
      auto s = view_preimage(fwd, *t);
      view_override(fwd, u, *t);
      if (!s) {
        label = "2.2.2.1";
      } else {
        view_override(fwd, *s, v);
        label = "2.2.2.2";
      }
      partner = *t;
    }
  }
  add_pair(side, u, partner);
  record_.transcript.back().case_label = label;
}

const TranscriptEntry& BijectionBuilder::step() {
  pending_overrides_.clear();
  if (turn_ == Side::Left)
    serve(f_, g_, Side::Left);
  else
    serve(g_, f_, Side::Right);
  turn_ = turn_ == Side::Left ? Side::Right : Side::Left;
  return record_.transcript.back();
}

std::uint64_t BijectionBuilder::resolve(Side side, std::uint64_t v) {
  const auto& h = side == Side::Left ? h_lr_ : h_rl_;
  while (!h.count(v)) {
    if (steps_taken() >= 2 * (v + 1))
      throw std::logic_error("resolve: coverage bound exceeded");
    step();
  }
  return h.at(v);
}

std::optional<std::uint64_t> BijectionBuilder::pair_of(Side side, std::uint64_t v) const {
  const auto& h = side == Side::Left ? h_lr_ : h_rl_;
  auto it = h.find(v);
  if (it == h.end()) return std::nullopt;
  return it->second;
}

void BijectionBuilder::check_view(const View& w,
                                  const std::unordered_map<std::uint64_t, std::uint64_t>& h,
                                  const char* tag) const {
  std::unordered_map<std::uint64_t, std::uint64_t> eff;  // position -> patched value
  for (const auto& [pos, val] : w.raw)
    if (!w.overrides.count(pos)) eff.emplace(pos, val);
  for (const auto& [pos, val] : w.overrides) eff.emplace(pos, val);

  std::unordered_map<std::uint64_t, std::uint64_t> rev;
  std::uint64_t max_pos = 0;
  for (const auto& [pos, val] : eff) {
    max_pos = std::max(max_pos, pos);
    if (!rev.emplace(val, pos).second)
      throw std::logic_error(std::string(tag) + ": patched view lost injectivity");
  }
  for (const auto& [a, b] : h) {
    auto it = eff.find(a);
    if (it == eff.end() || it->second != b)
      throw std::logic_error(std::string(tag) + ": finished pair not backed by the view");
  }
  std::vector<std::uint64_t> prefix_max(max_pos + 1);
  std::uint64_t running = 0;
  for (std::uint64_t i = 0; i <= max_pos; ++i) {
    running = std::max(running, w.oracle.apply(i));
    prefix_max[i] = running;
  }
  for (const auto& [pos, val] : eff)
    if (val > prefix_max[pos])
      throw std::logic_error(std::string(tag) + ": prefix-max bound violated");
}

void BijectionBuilder::check_invariants() const {
  if (h_lr_.size() != h_rl_.size()) throw std::logic_error("pair maps disagree in size");
  for (const auto& [l, r] : h_lr_) {
    auto it = h_rl_.find(r);
    if (it == h_rl_.end() || it->second != l)
      throw std::logic_error("pair maps are not mutually inverse");
  }
  check_view(f_, h_lr_, "f-hat");
  check_view(g_, h_rl_, "g-hat");

  std::uint64_t steps = record_.transcript.size();
  for (std::uint64_t i = 0; i < steps; ++i) {
    Side expect = i % 2 == 0 ? Side::Left : Side::Right;
    if (record_.transcript[i].served != expect)
      throw std::logic_error("serve order stopped alternating");
  }
  std::uint64_t left_serves = (steps + 1) / 2;
  std::uint64_t right_serves = steps / 2;
  for (std::uint64_t i = 0; i < left_serves; ++i)
    if (!h_lr_.count(i)) throw std::logic_error("left coverage gap");
  for (std::uint64_t j = 0; j < right_serves; ++j)
    if (!h_rl_.count(j)) throw std::logic_error("right coverage gap");
}

// --- verification ---------------------------------------------------------------

VerifyReport verify_window(const InjectionOracle& f, const InjectionOracle& g,
                           const BuildRecord& rec, std::uint64_t m) {
  VerifyReport rep;

  std::unordered_map<std::uint64_t, std::uint64_t> h, h_inv;
  rep.bijective = true;
  for (const auto& e : rec.transcript) {
    if (!h.emplace(e.left, e.right).second || !h_inv.emplace(e.right, e.left).second) {
      rep.bijective = false;
      rep.failures.push_back({"element paired twice", e.left, e.right});
    }
  }
  for (std::uint64_t i = 0; i < m; ++i) {
    if (!h.count(i)) {
      rep.bijective = false;
      rep.failures.push_back({"left element uncovered", i, 0});
    }
    if (!h_inv.count(i)) {
      rep.bijective = false;
      rep.failures.push_back({"right element uncovered", i, 0});
    }
  }

  rep.bounded = true;
  if (m > 0) {
    std::vector<std::uint64_t> pf(m), pg(m);
    std::uint64_t run_f = 0, run_g = 0;
    for (std::uint64_t i = 0; i < m; ++i) {
      run_f = std::max(run_f, f.apply(i));
      run_g = std::max(run_g, g.apply(i));
      pf[i] = run_f;
      pg[i] = run_g;
    }
    for (const auto& e : rec.transcript) {
      if (e.left < m && e.right > pf[e.left]) {
        rep.bounded = false;
        rep.failures.push_back({"pair exceeds the forward prefix-max bound", e.left, e.right});
      }
      if (e.right < m && e.left > pg[e.right]) {
        rep.bounded = false;
        rep.failures.push_back({"pair exceeds the backward prefix-max bound", e.left, e.right});
      }
    }
  }

  ComponentIndex comp;
  for (const auto& [l, r] : rec.f_edges) comp.add_edge(l, r);
  for (const auto& [l, r] : rec.g_edges) comp.add_edge(l, r);
  rep.components_preserved = true;
  for (const auto& e : rec.transcript) {
    if (!comp.same(Side::Left, e.left, Side::Right, e.right)) {
      rep.components_preserved = false;
      rep.failures.push_back({"pair leaves its connected component", e.left, e.right});
    }
  }
  return rep;
}

IsoResult isomorphism_from_reductions(const InjectionOracle& f, const InjectionOracle& g,
                                      const std::function<bool(std::uint64_t)>& in_left,
                                      const std::function<bool(std::uint64_t)>& in_right,
                                      std::uint64_t m) {
  InjectionOracle fc = f, gc = g;
  fc.apply = [f, in_left, in_right](std::uint64_t i) {
    std::uint64_t j = f.apply(i);
    if (in_left(i) != in_right(j)) throw ReductionInvalid(Side::Left, i, j);
    return j;
  };
  gc.apply = [g, in_left, in_right](std::uint64_t j) {
    std::uint64_t i = g.apply(j);
    if (in_right(j) != in_left(i)) throw ReductionInvalid(Side::Right, j, i);
    return i;
  };

  BijectionBuilder builder(fc, gc);
  for (std::uint64_t i = 0; i < m; ++i) builder.resolve(Side::Left, i);
  for (std::uint64_t j = 0; j < m; ++j) builder.resolve(Side::Right, j);

  IsoResult out;
  out.record = builder.record();
  out.report = verify_window(f, g, out.record, m);
  out.membership_preserved = true;
  for (std::uint64_t i = 0; i < m; ++i) {
    std::uint64_t hi = *builder.pair_of(Side::Left, i);
    if (in_left(i) != in_right(hi)) {
      out.membership_preserved = false;
      out.membership_failures.push_back({"bijection moves an element across the sets", i, hi});
    }
  }
  return out;
}

}  // namespace haltlab

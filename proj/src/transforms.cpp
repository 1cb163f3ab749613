#include "haltlab/transforms.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace haltlab {

std::function<RunOutcome(const BinStr&, std::uint64_t)> replay_eval(EventSource events,
                                                                    int window) {
  return [events = std::move(events), window](const BinStr& p,
                                              std::uint64_t budget) -> RunOutcome {
    auto stream = events();
    for (std::uint64_t i = 0; i < budget; ++i) {
      auto e = stream->next();
      if (!e) {
        if (int(p.size()) <= window)
          return CertifiedDivergent{CertifiedDivergent::Kind::ByConstruction, i};
        return BudgetExhausted{budget};  // outside the window nothing is settled
      }
      if (e->program == p) return Halted{e->output, e->steps};
    }
    return BudgetExhausted{budget};
  };
}

Certifier framed_certifier() {
  return [](const BinStr& q, std::uint64_t budget, std::uint64_t space) -> RunOutcome {
    auto f = codec::decode_selfdelim(q);
    if (!f) return CertifiedDivergent{CertifiedDivergent::Kind::ByConstruction, 0};
    return certify(f->payload, f->rest, budget, space);
  };
}

EnumerableMachine standard_optimal(int window, std::uint64_t budget, std::uint64_t space) {
  EnumerableMachine m;
  m.name = "deskvm-framed";
  m.window = window;
  m.eval = [](const BinStr& q, std::uint64_t b) -> RunOutcome {
    auto f = codec::decode_selfdelim(q);
    if (!f) return BudgetExhausted{b};
    return run(f->payload, f->rest, b);
  };
  m.events = [window, budget, space]() -> EventStreamPtr {
    GroundTruth t = ground_truth(framed_certifier(), window, budget, space);
    return std::make_unique<VectorEventStream>(dovetail_events(t));
  };
  return m;
}

namespace {

// Shared shape of the one-pass stream rewrites below: materialize the source,
// rewrite, renumber. Windows stay small enough that laziness buys nothing.
std::vector<HaltEvent> renumber(std::vector<HaltEvent> v) {
  for (std::size_t i = 0; i < v.size(); ++i) v[i].seq = i;
  return v;
}

}  // namespace

EnumerableMachine left_total(const EnumerableMachine& src) {
  EnumerableMachine m;
  m.name = src.name + "|left_total";
  m.window = src.window;
  EventSource base = src.events;
  m.events = [base]() -> EventStreamPtr {
    std::vector<HaltEvent> out;
    std::unordered_map<std::size_t, std::uint64_t> seated;  // length -> count
    auto s = base();
    while (auto e = s->next()) {
      std::uint64_t rank = seated[e->program.size()]++;
      out.push_back(HaltEvent{0, codec::nth_of_length(rank, int(e->program.size())),
                              e->output, e->steps});
    }
    return std::make_unique<VectorEventStream>(renumber(std::move(out)));
  };
  m.eval = replay_eval(m.events, m.window);
  return m;
}

EnumerableMachine dedupe_values(const EnumerableMachine& src) {
  EnumerableMachine m;
  m.name = src.name + "|dedupe_values";
  m.window = src.window;
  EventSource base = src.events;
  m.events = [base]() -> EventStreamPtr {
    std::vector<HaltEvent> out;
    std::unordered_map<std::size_t, std::uint64_t> seated;
    std::unordered_map<std::size_t, std::unordered_set<std::string>> seen;
    auto s = base();
    while (auto e = s->next()) {
      if (!seen[e->program.size()].insert(e->output.s).second) continue;
      std::uint64_t rank = seated[e->program.size()]++;
      out.push_back(HaltEvent{0, codec::nth_of_length(rank, int(e->program.size())),
                              e->output, e->steps});
    }
    return std::make_unique<VectorEventStream>(renumber(std::move(out)));
  };
  m.eval = replay_eval(m.events, m.window);
  return m;
}

DomainFromSetResult domain_from_set(const EnumerableMachine& src, const StrSource& s,
                                    int c) {
  std::vector<HaltEvent> out;
  auto events = src.events();
  auto strings = s();
  int window = 0;
  while (auto e = events->next()) {
    int bound = int(e->program.size()) + c;
    for (;;) {
      auto z = strings->next();
      if (!z) return MatchFailure{*e, bound};
      window = std::max(window, int(z->size()));
      if (int(z->size()) <= bound) {
        out.push_back(HaltEvent{0, *z, e->output, e->steps});
        break;
      }
      out.push_back(HaltEvent{0, *z, BinStr{}, 0});  // too long for this wait
    }
  }
  EnumerableMachine m;
  m.name = src.name + "|domain_from_set";
  m.window = window;
  m.events = vector_source(renumber(std::move(out)));
  m.eval = replay_eval(m.events, m.window);
  return m;
}

namespace {

// Lex-least free rank per length, amortized by a monotone hint.
struct SeatFinder {
  std::unordered_map<std::size_t, std::unordered_set<std::uint64_t>> occupied;
  std::unordered_map<std::size_t, std::uint64_t> hint;

  bool take(const BinStr& p) {  // returns false if already occupied
    return occupied[p.size()].insert(codec::lex_rank(p)).second;
  }
  BinStr take_least_free(std::size_t len) {
    auto& occ = occupied[len];
    std::uint64_t r = hint[len];
    while (r < (std::uint64_t(1) << len) && occ.count(r)) ++r;
    if (r >= (std::uint64_t(1) << len)) throw SeatExhausted{};
    hint[len] = r;
    occ.insert(r);
    return codec::nth_of_length(r, int(len));
  }
};

}  // namespace

EnumerableMachine seat_exchange(const EnumerableMachine& src,
                                const std::vector<StrSource>& w) {
  EnumerableMachine m;
  m.name = src.name + "|seat_exchange";
  m.window = src.window;
  EventSource base = src.events;
  auto aux = w;  // captured copy
  m.events = [base, aux]() -> EventStreamPtr {
    std::vector<HaltEvent> out;
    int window = 0;
    SeatFinder seats;
    struct Spectator {
      StrStreamPtr stream;
      std::size_t min_len;  // must exceed this
      bool done = false;
    };
    std::vector<Spectator> specs;
    for (std::size_t j = 0; j < aux.size(); ++j)
      specs.push_back(Spectator{aux[j](), j + 1, false});
    auto events = base();
    bool src_done = false;
    while (true) {
      bool progress = false;
      // Spectators first: each contributes one fresh long-enough string.
      for (auto& sp : specs) {
        if (sp.done) continue;
        auto z = sp.stream->next();
        if (!z) {
          sp.done = true;
          continue;
        }
        progress = true;
        if (z->size() <= sp.min_len) continue;    // too short, keep waiting
        if (!seats.take(*z)) continue;            // someone sits there already
        window = std::max(window, int(z->size()));
        out.push_back(HaltEvent{0, *z, BinStr{}, 0});
        sp.done = true;
      }
      if (!src_done) {
        auto e = events->next();
        if (!e) {
          src_done = true;
        } else {
          progress = true;
          BinStr seat = e->program;
          if (!seats.take(seat)) seat = seats.take_least_free(seat.size());
          out.push_back(HaltEvent{0, seat, e->output, e->steps});
        }
      }
      if (!progress) break;
    }
    auto v = renumber(std::move(out));
    return std::make_unique<VectorEventStream>(std::move(v));
  };
  m.eval = replay_eval(m.events, m.window);
  return m;
}

namespace {

BinStr with_prefix(const std::string& prefix, const BinStr& p) {
  return BinStr{prefix + p.s};
}

}  // namespace

EnumerableMachine shift_density(const EnumerableMachine& src, ShiftVariant variant) {
  EnumerableMachine m;
  m.name = src.name + (variant == ShiftVariant::Zero ? "|shift_zero" : "|shift_one_fill");
  m.window = src.window + 1;
  EventSource base = src.events;
  int fill_max = src.window;  // filler = "1" + s for |s| <= src.window
  m.events = [base, variant, fill_max]() -> EventStreamPtr {
    std::vector<HaltEvent> out;
    auto events = base();
    std::uint64_t fill_next = 0;
    std::uint64_t fill_count =
        variant == ShiftVariant::OneFill ? (std::uint64_t(1) << (fill_max + 1)) - 1 : 0;
    bool src_done = false;
    while (true) {
      bool progress = false;
      if (fill_next < fill_count) {
        out.push_back(
            HaltEvent{0, with_prefix("1", codec::index_to_string(fill_next)), BinStr{}, 0});
        ++fill_next;
        progress = true;
      }
      if (!src_done) {
        auto e = events->next();
        if (!e)
          src_done = true;
        else {
          out.push_back(HaltEvent{0, with_prefix("0", e->program), e->output, e->steps});
          progress = true;
        }
      }
      if (!progress) break;
    }
    return std::make_unique<VectorEventStream>(renumber(std::move(out)));
  };
  m.eval = replay_eval(m.events, m.window);
  return m;
}

std::vector<BinStr> set_with_density(const std::vector<DensityUpdate>& updates) {
  std::vector<BinStr> out;
  std::unordered_map<int, std::uint64_t> emitted;  // length -> strings so far
  for (const auto& u : updates) {
    if (u.length < 0 || u.length > 62) throw InvalidDensity("length out of range");
    if (u.value < Rat(0) || u.value > Rat(1)) throw InvalidDensity("value outside [0,1]");
    std::uint64_t full = std::uint64_t(1) << u.length;
    if (full % std::uint64_t(u.value.denominator()) != 0)
      throw InvalidDensity("denominator does not divide 2^length");
    std::uint64_t target =
        std::uint64_t(u.value.numerator()) * (full / std::uint64_t(u.value.denominator()));
    std::uint64_t& done = emitted[u.length];
    if (target < done) throw InvalidDensity("approximation decreased");
    while (done < target) out.push_back(codec::nth_of_length(done++, u.length));
  }
  return out;
}

EnumerableMachine combine_halves(const EnumerableMachine& src, int d,
                                 const StrSource& s_right) {
  EnumerableMachine m;
  m.name = src.name + "|combine_halves";
  m.window = src.window + d;
  EventSource base = src.events;
  std::string zeros(d, '0');
  m.events = [base, s_right, zeros]() -> EventStreamPtr {
    std::vector<HaltEvent> out;
    int window = 0;
    auto events = base();
    auto right = s_right();
    bool left_done = false, right_done = false;
    while (!left_done || !right_done) {
      if (!left_done) {
        auto e = events->next();
        if (!e)
          left_done = true;
        else
          out.push_back(HaltEvent{0, with_prefix(zeros, e->program), e->output, e->steps});
      }
      if (!right_done) {
        auto z = right->next();
        if (!z)
          right_done = true;
        else {
          if (z->empty() || z->bit(0) != 1) throw BadRightHalf(z->s);
          window = std::max(window, int(z->size()));
          out.push_back(HaltEvent{0, *z, BinStr{}, 0});
        }
      }
    }
    return std::make_unique<VectorEventStream>(renumber(std::move(out)));
  };
  // The declared window only covers the shifted left half; right-half strings
  // beyond it simply extend the enumeration.
  m.eval = replay_eval(m.events, m.window);
  return m;
}

StrSource prepend_one_source(StrSource base) {
  return [base = std::move(base)]() -> StrStreamPtr {
    class Stream : public StrStream {
     public:
      explicit Stream(StrStreamPtr inner) : inner_(std::move(inner)) {}
      std::optional<BinStr> next() override {
        auto s = inner_->next();
        if (!s) return std::nullopt;
        return BinStr{"1" + s->s};
      }

     private:
      StrStreamPtr inner_;
    };
    return std::make_unique<Stream>(base());
  };
}

}  // namespace haltlab

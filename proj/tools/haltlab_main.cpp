// haltlab: reproducible experiments on the desk-scale halting workbench.
// Every command is a pure function of its flags: same invocation, same bytes.

#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "haltlab/bijection.hpp"
#include "haltlab/deciders.hpp"
#include "haltlab/dovetail.hpp"
#include "haltlab/io.hpp"
#include "haltlab/transforms.hpp"
#include "haltlab/vm.hpp"

namespace {

using namespace haltlab;
using nlohmann::json;

struct Common {
  int max_len = 10;
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t space = kDefaultSpace;
  std::vector<std::uint64_t> checkpoints;
  std::uint64_t seed = 1;
  std::string out = "-";
  std::string format = "csv";
  std::string config;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--max-len", c.max_len, "program length window");
  cmd->add_option("--budget", c.budget, "step budget per run");
  cmd->add_option("--space", c.space, "configuration-store bound for certification");
  cmd->add_option("--checkpoints", c.checkpoints, "budget checkpoints (default: powers of 2)")
      ->delimiter(',');
  cmd->add_option("--seed", c.seed, "seed for the randomized instances");
  cmd->add_option("--out", c.out, "output path, - for stdout");
  cmd->add_option("--format", c.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--config", c.config, "JSON config file; flags override it");
}

// Config file supplies defaults; explicitly passed flags win.
void apply_config(CLI::App* cmd, Common& c) {
  if (c.config.empty()) return;
  std::ifstream f(c.config);
  if (!f) throw std::runtime_error("cannot read config: " + c.config);
  json j = json::parse(f);
  auto absent = [&](const char* flag) { return cmd->count(flag) == 0; };
  if (absent("--max-len") && j.contains("max_len")) c.max_len = j["max_len"];
  if (absent("--budget") && j.contains("budget")) c.budget = j["budget"];
  if (absent("--space") && j.contains("space")) c.space = j["space"];
  if (absent("--checkpoints") && j.contains("checkpoints"))
    c.checkpoints = j["checkpoints"].get<std::vector<std::uint64_t>>();
  if (absent("--seed") && j.contains("seed")) c.seed = j["seed"];
  if (absent("--out") && j.contains("out")) c.out = j["out"];
  if (absent("--format") && j.contains("format")) c.format = j["format"];
}

void emit(const Common& c, const std::string& bytes) {
  if (c.out == "-")
    std::cout << bytes;
  else
    io::write_file(c.out, bytes);
}

std::vector<std::uint64_t> grid(const Common& c) {
  return c.checkpoints.empty() ? power_checkpoints(c.budget) : c.checkpoints;
}

int cmd_truth(const Common& c) {
  GroundTruth t = certify_window(raw_certifier(), c.max_len, c.budget, c.space);
  json j;
  j["max_len"] = t.max_len;
  j["programs"] = t.program_count();
  std::uint64_t halts = 0, diverges = 0;
  for (auto s : t.status) {
    if (s == Status::Halts) ++halts;
    if (s == Status::Diverges) ++diverges;
  }
  j["halts"] = halts;
  j["diverges"] = diverges;
  j["unknown"] = t.unknown.size();
  std::vector<std::uint64_t> h, H;
  for (int n = 0; n <= t.max_len; ++n) {
    h.push_back(t.h(n));
    H.push_back(t.H(n));
  }
  j["h"] = h;
  j["H"] = H;
  j["bb"] = bb_table(t);
  emit(c, j.dump(2) + "\n");
  if (!t.unknown.empty()) {
    std::cerr << "error: " << t.unknown.size() << " programs did not settle\n";
    return 1;
  }
  return 0;
}

int cmd_density(const Common& c) {
  GroundTruth t = ground_truth(raw_certifier(), c.max_len, c.budget, c.space);
  HaltingTable table = halting_table(dovetail_events(t), c.max_len, grid(c));
  if (c.format == "csv") {
    emit(c, io::halting_table_csv(table));
  } else {
    json rows = json::array();
    for (const auto& r : table.rows)
      rows.push_back({{"n", r.n},
                      {"t", r.t},
                      {"h", r.h},
                      {"H", r.H},
                      {"rho", to_string(r.rho)},
                      {"tau", to_string(r.tau)}});
    emit(c, rows.dump(2) + "\n");
  }
  return 0;
}

int cmd_bb(const Common& c, int survivor_n, int survivor_k) {
  GroundTruth t = ground_truth(raw_certifier(), c.max_len, c.budget, c.space);
  auto bb = bb_table(t);
  auto ct = complexity_table(t);
  int n = survivor_n < 0 ? c.max_len : survivor_n;
  int k = survivor_k < 0 ? std::max(0, n - 2) : survivor_k;
  SurvivorStats s = survivor_stats(t, n, k, grid(c));
  json j = json::parse(io::bb_json(bb, ct));
  j["survivors"] = json::parse(io::survivor_json(s));
  auto c_bound = bb_vs_b_constant(bb, ct, 8);
  if (c_bound)
    j["bb_vs_b_constant"] = *c_bound;
  else
    j["bb_vs_b_constant"] = nullptr;
  emit(c, j.dump(2) + "\n");
  return 0;
}

int cmd_approx(const Common& c, const std::string& kind, std::uint64_t steps,
               const std::string& rate, std::vector<int> blocks, std::uint64_t cap) {
  GroundTruth t = ground_truth(raw_certifier(), c.max_len, c.budget, c.space);
  Decider d;
  if (kind == "budget") {
    d = budget_decider(
        [](const BinStr& p, std::uint64_t b) { return run(p, BinStr{}, b); }, steps);
  } else {
    EnumerableMachine m = base_machine(c.max_len, c.budget, c.space);
    if (blocks.empty()) blocks = {c.max_len};
    FractionDecider fd =
        fraction_decider(m, parse_rat(rate), blocks, cap ? cap : c.budget);
    d = fd.decide;
  }
  ErrorReport rep = error_report(d, t, c.max_len);
  if (c.format == "csv") {
    emit(c, io::error_report_csv(rep));
  } else {
    json j;
    json rows = json::array();
    for (const auto& r : rep.rows)
      rows.push_back({{"n", r.n},
                      {"fp", r.false_pos},
                      {"fn", r.false_neg},
                      {"undef", r.undefined},
                      {"eps", to_string(r.eps)}});
    j["rows"] = rows;
    j["tail_max"] = to_string(rep.tail_max);
    j["tail_min"] = to_string(rep.tail_min);
    emit(c, j.dump(2) + "\n");
  }
  return 0;
}

int cmd_transform(const Common& c, const std::string& machine,
                  std::vector<std::string> pipeline) {
  EnumerableMachine m = machine == "framed"
                            ? standard_optimal(c.max_len, c.budget, c.space)
                            : base_machine(c.max_len, c.budget, c.space);
  for (const auto& step : pipeline) {
    if (step == "left_total")
      m = left_total(m);
    else if (step == "dedupe_values")
      m = dedupe_values(m);
    else if (step == "prepend_zero")
      m = prepend_zero(m);
    else if (step == "one_fill")
      m = shift_density(m, ShiftVariant::OneFill);
    else
      throw std::runtime_error("unknown pipeline step: " + step);
  }
  std::vector<HaltEvent> events;
  for (auto s = m.events(); auto e = s->next();) events.push_back(*e);
  if (c.format == "json") {
    emit(c, io::events_jsonl(events));
  } else {
    emit(c, io::halting_table_csv(halting_table(events, m.window, grid(c))));
  }
  return 0;
}

int cmd_bijection(const Common& c, std::uint64_t window, std::uint64_t table_width) {
  InjectionOracle f = seeded_oracle(c.seed * 2 + 1, table_width);
  InjectionOracle g = seeded_oracle(c.seed * 2 + 2, table_width);
  BijectionBuilder b(f, g);
  for (std::uint64_t i = 0; i < window; ++i) {
    b.resolve(Side::Left, i);
    b.resolve(Side::Right, i);
  }
  VerifyReport rep = verify_window(f, g, b.record(), window);
  std::cout << io::verify_report_json(rep);
  std::string transcript = io::transcript_jsonl(b.record());
  if (c.out == "-")
    std::cout << transcript;
  else
    io::write_file(c.out, transcript);
  return rep.ok() ? 0 : 1;
}

// Deterministic dyadic test distribution with mass in (1/2, 15/16].
std::vector<std::pair<BinStr, Rat>> seeded_distribution(std::uint64_t seed, int n0) {
  std::mt19937_64 rng(seed);
  auto draw = [&rng](std::uint64_t bound) {
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                          std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = rng();
    } while (x >= limit);
    return x % bound;
  };
  std::vector<std::pair<BinStr, Rat>> dist;
  std::unordered_set<std::string> used;
  Rat total(0);
  for (int tries = 0; tries < 4096 && total <= Rat(1, 2); ++tries) {
    int n = n0 + int(draw(3));
    BinStr s = codec::nth_of_length(draw(std::uint64_t(1) << n), n);
    if (!used.insert(s.s).second) continue;
    Rat p = dyadic(1, 2 + int(draw(5)));
    if (total + p > Rat(15, 16)) continue;
    dist.push_back({s, p});
    total += p;
  }
  if (total <= Rat(1, 2)) throw std::logic_error("seeded distribution failed to gain mass");
  return dist;
}

int cmd_spoiler(const Common& c, const std::string& eps_text, int n0) {
  auto dist = seeded_distribution(c.seed, n0);
  SpoilerResult r = sparse_spoiler(dist, parse_rat(eps_text), n0);
  json j;
  j["support"] = dist.size();
  j["total_mass"] = to_string(r.total_mass);
  j["carved_mass"] = to_string(r.carved_mass);
  json added = json::array();
  for (const auto& s : r.added) added.push_back(s.s);
  j["added"] = added;
  emit(c, j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale halting workbench"};
  app.require_subcommand(1);

  Common c;

  auto* truth = app.add_subcommand("truth", "certify every program in the window");
  add_common(truth, c);

  auto* density = app.add_subcommand("density", "halting-rate tables over budget checkpoints");
  add_common(density, c);

  auto* bb = app.add_subcommand("bb", "busy-beaver, complexity and survivor tables");
  add_common(bb, c);
  int survivor_n = -1, survivor_k = -1;
  bb->add_option("--survivor-n", survivor_n, "length bound for the survivor curve");
  bb->add_option("--survivor-k", survivor_k, "known top bits of the halting count");

  auto* approx = app.add_subcommand("approx", "approximate decider with exact error report");
  add_common(approx, c);
  std::string decider_kind = "budget";
  std::uint64_t decider_steps = 4, fraction_cap = 0;
  std::string fraction_rate = "1/4";
  std::vector<int> fraction_blocks;
  approx->add_option("--decider", decider_kind, "budget or fraction")
      ->check(CLI::IsMember({"budget", "fraction"}));
  approx->add_option("--steps", decider_steps, "step cutoff for the budget decider");
  approx->add_option("--rate", fraction_rate, "target halting fraction, num/den");
  approx->add_option("--blocks", fraction_blocks, "fraction-decider block lengths")
      ->delimiter(',');
  approx->add_option("--cap", fraction_cap, "fraction-decider step cap (default: budget)");

  auto* transform = app.add_subcommand("transform", "re-tabulate a transformed machine");
  add_common(transform, c);
  std::string machine = "raw";
  std::vector<std::string> pipeline;
  transform->add_option("--machine", machine, "raw or framed")
      ->check(CLI::IsMember({"raw", "framed"}));
  transform->add_option("--pipeline", pipeline,
                        "steps: left_total,dedupe_values,prepend_zero,one_fill")
      ->delimiter(',');

  auto* bijection = app.add_subcommand("bijection", "build and verify a seeded bijection");
  add_common(bijection, c);
  std::uint64_t window = 256, table_width = 64;
  bijection->add_option("--window", window, "verify the bijection on [0, window)");
  bijection->add_option("--table-width", table_width, "random table size of the oracles");

  auto* spoiler = app.add_subcommand("spoiler", "carve a sparse heavy set from a seeded distribution");
  add_common(spoiler, c);
  std::string eps_text = "1/8";
  int spoiler_n0 = 6;
  spoiler->add_option("--eps", eps_text, "density budget, num/den");
  spoiler->add_option("--n0", spoiler_n0, "minimum support length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << app.help();
    return 2;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    apply_config(active, c);
    if (active == truth) return cmd_truth(c);
    if (active == density) return cmd_density(c);
    if (active == bb) return cmd_bb(c, survivor_n, survivor_k);
    if (active == approx)
      return cmd_approx(c, decider_kind, decider_steps, fraction_rate, fraction_blocks,
                        fraction_cap);
    if (active == transform) return cmd_transform(c, machine, pipeline);
    if (active == bijection) return cmd_bijection(c, window, table_width);
    if (active == spoiler) return cmd_spoiler(c, eps_text, spoiler_n0);
    std::cerr << "no command dispatched\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

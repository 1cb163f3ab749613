#include "haltlab/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace haltlab::io {

using nlohmann::json;

std::string halting_table_csv(const HaltingTable& t) {
  std::ostringstream out;
  out << "n,t,h,H,rho_num,rho_den,tau_num,tau_den\n";
  for (const auto& r : t.rows) {
    out << r.n << ',' << r.t << ',' << r.h << ',' << r.H << ',' << r.rho.numerator() << ','
        << r.rho.denominator() << ',' << r.tau.numerator() << ',' << r.tau.denominator()
        << '\n';
  }
  return out.str();
}

std::string error_report_csv(const ErrorReport& r) {
  std::ostringstream out;
  out << "n,fp,fn,undef,eps_num,eps_den\n";
  for (const auto& row : r.rows) {
    out << row.n << ',' << row.false_pos << ',' << row.false_neg << ',' << row.undefined
        << ',' << row.eps.numerator() << ',' << row.eps.denominator() << '\n';
  }
  return out.str();
}

std::string events_jsonl(const std::vector<HaltEvent>& events) {
  std::ostringstream out;
  for (const auto& e : events) {
    json j;
    j["seq"] = e.seq;
    j["program"] = e.program.s;
    j["output"] = e.output.s;
    j["steps"] = e.steps;
    out << j.dump() << '\n';
  }
  return out.str();
}

std::string transcript_jsonl(const BuildRecord& rec) {
  std::ostringstream out;
  for (const auto& e : rec.transcript) {
    json j;
    j["step"] = e.step;
    j["served"] = side_name(e.served);
    j["case"] = e.case_label;
    j["pair"] = {e.left, e.right};
    json os = json::array();
    for (const auto& o : e.overrides)
      os.push_back({{"view", o.side == Side::Left ? "f" : "g"},
                    {"at", o.at},
                    {"value", o.value}});
    j["overrides"] = os;
    out << j.dump() << '\n';
  }
  return out.str();
}

std::string bb_json(const std::vector<std::uint64_t>& bb, const ComplexityTable& ct) {
  json j;
  j["bb"] = bb;
  json b = json::array();
  for (const auto& v : ct.b) {
    if (v)
      b.push_back(*v);
    else
      b.push_back(nullptr);
  }
  j["b"] = b;
  json k = json::object();
  std::vector<std::pair<std::string, int>> items;
  items.reserve(ct.k.size());
  for (const auto& [y, len] : ct.k) items.push_back({y.s, len});
  for (const auto& [y, len] : items) k[y] = len;
  j["k"] = k;
  return j.dump(2) + "\n";
}

std::string survivor_json(const SurvivorStats& s) {
  json j;
  j["n"] = s.n;
  j["k"] = s.k;
  j["r"] = s.r;
  j["t_star"] = s.t_star;
  j["checkpoints"] = s.checkpoints;
  j["survivors"] = s.survivors;
  return j.dump(2) + "\n";
}

std::string verify_report_json(const VerifyReport& rep) {
  json j;
  j["bijective"] = rep.bijective;
  j["bounded"] = rep.bounded;
  j["components_preserved"] = rep.components_preserved;
  j["ok"] = rep.ok();
  json fails = json::array();
  for (const auto& f : rep.failures)
    fails.push_back({{"what", f.what}, {"a", f.a}, {"b", f.b}});
  j["failures"] = fails;
  return j.dump(2) + "\n";
}

std::string verdicts_jsonl(const std::vector<std::pair<BinStr, Verdict>>& verdicts) {
  std::ostringstream out;
  for (const auto& [p, v] : verdicts) {
    json j;
    j["program"] = p.s;
    j["verdict"] = verdict_name(v);
    out << j.dump() << '\n';
  }
  return out.str();
}

std::string string_lines(const std::vector<BinStr>& v) {
  std::ostringstream out;
  for (const auto& s : v) out << s.s << '\n';
  return out.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << bytes;
  if (!f.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace haltlab::io

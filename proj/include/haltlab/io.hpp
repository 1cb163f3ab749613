#pragma once

// Byte-deterministic report emission: CSV for the tabular outputs, JSON
// lines for streams and transcripts, plain JSON for the terminal tables.
// No floating point anywhere; rationals are rendered "num/den" so equal
// configurations produce identical artifacts bit for bit.

#include <string>
#include <vector>

#include "haltlab/bijection.hpp"
#include "haltlab/deciders.hpp"
#include "haltlab/dovetail.hpp"
#include "haltlab/events.hpp"
#include "haltlab/rat.hpp"

namespace haltlab::io {

// header: n,t,h,H,rho_num,rho_den,tau_num,tau_den
std::string halting_table_csv(const HaltingTable& t);

// header: n,fp,fn,undef,eps_num,eps_den
std::string error_report_csv(const ErrorReport& r);

// one {"seq":..,"program":"..","output":"..","steps":..} per line
std::string events_jsonl(const std::vector<HaltEvent>& events);

// one {"step":..,"case":"..","pair":[l,r],"overrides":[{..}]} per line
std::string transcript_jsonl(const BuildRecord& rec);

// {"bb":[..],"b":[..|null],"k":{output:len}}
std::string bb_json(const std::vector<std::uint64_t>& bb, const ComplexityTable& ct);

std::string survivor_json(const SurvivorStats& s);

std::string verify_report_json(const VerifyReport& rep);

// one program per line with its verdict
std::string verdicts_jsonl(const std::vector<std::pair<BinStr, Verdict>>& verdicts);

// one string per line
std::string string_lines(const std::vector<BinStr>& v);

void write_file(const std::string& path, const std::string& bytes);

}  // namespace haltlab::io

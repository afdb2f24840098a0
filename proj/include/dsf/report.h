#pragma once

// JSON renderings of results. Keys come out sorted and rationals as canonical
// "p/q" strings, so equal results give byte-identical text.

#include "dsf/pipeline.h"
#include "dsf/proof.h"

#include <json.hpp>

namespace dsf::report {

using nlohmann::json;

json rational(const Rational& r);
json ledger(const std::vector<Inequality>& inequalities);
json claims(const std::vector<ClaimCheck>& checks);
json junction(const Instance& inst, const JunctionTree& tree);
json junction_search(const Instance& inst, const JunctionSearchResult& result);
json solution(const Instance& inst, const Solution& sol);
json trace(const Instance& inst, const CoverTrace& trace);
json ratio(const RatioReport& rep);
json verify(const VerifyReport& rep);
json proof_replay(const Instance& inst, const ExistenceReplay& replay);

/// Two-space indented, newline-terminated.
std::string dump(const json& doc);

}  // namespace dsf::report

/*******************************************************************************
 *
 * Machine-readable run summaries and their terminal rendering. Reports
 * are deterministic: identical runs produce byte-identical JSON except
 * for the "timing_ms" subtree.
 *
 ******************************************************************************/

#pragma once

#include <string>

#include <json.hpp>

#include "predkit/abstraction.hpp"
#include "predkit/checker.hpp"
#include "predkit/compatibility.hpp"
#include "predkit/imprecision.hpp"

namespace predkit {

using Json = nlohmann::ordered_json;

Json predicates_to_json(const PredicateSet& ps);
Json verdict_to_json(const Verdict& v);
Json config_to_json(const Config& c);
Json scores_to_json(const ImprecisionScores& s, const PredicateSet& ps);
Json matrix_to_json(const CompatibilityMatrix& m, const PredicateSet& ps);

// Stable content hash (FNV-1a, hex) used to fingerprint model files.
std::string content_hash(const std::string& bytes);

// Render a report's score or compatibility matrix as a text grid:
// check marks for compatible pairs, numeric scores otherwise.
std::string render_grid(const Json& report);

// The report with every "timing_ms" subtree removed (for comparisons).
Json strip_timings(Json report);

}  // namespace predkit

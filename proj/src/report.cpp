#include "predkit/report.hpp"

#include <cstdint>
#include <iomanip>
#include <sstream>

namespace predkit {

Json predicates_to_json(const PredicateSet& ps) {
  Json arr = Json::array();
  for (const Predicate& p : ps.preds()) {
    Json entry;
    entry["index"] = p.index;
    entry["atom"] = p.atom.to_string();
    entry["bool_var"] = p.bool_var.name;
    Json scope = Json::array();
    for (const VarId& v : p.scope) scope.push_back(v.name);
    entry["scope"] = scope;
    arr.push_back(std::move(entry));
  }
  return arr;
}

Json verdict_to_json(const Verdict& v) {
  Json out;
  out["verdict"] = verdict_name(v.kind);
  out["iterations"] = v.iterations;
  out["widened"] = v.widened;
  if (!v.detail.empty()) out["detail"] = v.detail;
  if (v.kind == VerdictKind::NotShown) out["witness"] = v.witness.to_string();
  return out;
}

Json config_to_json(const Config& c) {
  Json out;
  out["preds"] = c.preds;
  out["num_vars"] = c.num_vars;
  out["score"] = c.score;
  return out;
}

Json scores_to_json(const ImprecisionScores& s, const PredicateSet& ps) {
  Json out;
  Json individual = Json::array();
  for (std::size_t i = 0; i < s.individual.size(); ++i) {
    Json entry;
    entry["pred"] = i;
    entry["atom"] = ps.at(i).atom.to_string();
    entry["score"] = s.individual[i];
    individual.push_back(std::move(entry));
  }
  out["individual"] = individual;
  Json pairwise = Json::array();
  for (const auto& [pair, score] : s.pairwise) {
    Json entry;
    entry["i"] = pair.first;
    entry["j"] = pair.second;
    entry["score"] = score;
    pairwise.push_back(std::move(entry));
  }
  out["pairwise"] = pairwise;
  return out;
}

Json matrix_to_json(const CompatibilityMatrix& m, const PredicateSet& ps) {
  Json out;
  out["size"] = m.size;
  out["predicates"] = predicates_to_json(ps);
  Json pairs = Json::array();
  for (const auto& [key, outcome] : m.pairs) {
    Json entry;
    entry["i"] = key.first;
    entry["j"] = key.second;
    entry["compatible"] = outcome.compatible;
    entry["verdict"] = verdict_name(outcome.verdict);
    if (!outcome.prop_preds.empty()) entry["prop_preds"] = outcome.prop_preds;
    if (!outcome.note.empty()) entry["note"] = outcome.note;
    pairs.push_back(std::move(entry));
  }
  out["pairs"] = pairs;
  return out;
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

namespace {

// Terminal columns, counting multi-byte UTF-8 sequences as one column.
std::size_t display_size(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::string pad(const std::string& s, std::size_t width) {
  std::size_t size = display_size(s);
  return size >= width ? s : s + std::string(width - size, ' ');
}

std::string render_cells(
    std::size_t n,
    const std::map<std::pair<std::size_t, std::size_t>, std::string>& cells) {
  std::size_t width = 3;
  for (const auto& [key, text] : cells) {
    width = std::max(width, display_size(text) + 1);
  }
  std::size_t label_width = 2 + std::to_string(n).size();

  std::ostringstream out;
  out << pad("", label_width);
  for (std::size_t j = 0; j < n; ++j) {
    out << pad("p" + std::to_string(j), width);
  }
  out << "\n";
  for (std::size_t i = 0; i < n; ++i) {
    out << pad("p" + std::to_string(i), label_width);
    for (std::size_t j = 0; j < n; ++j) {
      if (j <= i) {
        out << pad("", width);
        continue;
      }
      auto it = cells.find({i, j});
      out << pad(it == cells.end() ? "" : it->second, width);
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace

std::string render_grid(const Json& report) {
  std::map<std::pair<std::size_t, std::size_t>, std::string> cells;
  std::size_t n = 0;
  if (report.contains("pairs")) {
    n = report.value("size", 0u);
    for (const auto& entry : report["pairs"]) {
      std::size_t i = entry["i"];
      std::size_t j = entry["j"];
      cells[{i, j}] = entry["compatible"].get<int>() != 0 ? "✓" : "-";
      n = std::max(n, j + 1);
    }
  } else if (report.contains("pairwise")) {
    n = report["individual"].size();
    for (const auto& entry : report["pairwise"]) {
      std::size_t i = entry["i"];
      std::size_t j = entry["j"];
      long score = entry["score"];
      cells[{i, j}] = score == 0 ? "-" : std::to_string(score);
      n = std::max(n, j + 1);
    }
  } else {
    throw Error("report has neither a compatibility nor a score matrix");
  }
  return render_cells(n, cells);
}

Json strip_timings(Json report) {
  if (report.is_object()) {
    report.erase("timing_ms");
    for (auto& [key, value] : report.items()) {
      value = strip_timings(value);
    }
  } else if (report.is_array()) {
    for (auto& value : report) value = strip_timings(value);
  }
  return report;
}

}  // namespace predkit

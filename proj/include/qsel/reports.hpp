#ifndef QSEL_REPORTS_HPP
#define QSEL_REPORTS_HPP

#include <string>

#include <json.hpp>

#include "qsel/baselines.hpp"
#include "qsel/cost_model.hpp"
#include "qsel/qsearch.hpp"

namespace qsel {

std::string to_string(TieBreak tie_break);
TieBreak tie_break_from_string(const std::string& s);

// CSV schema (stable, documented in the README):
//   episode,epsilon,episode_latency_ms,best_so_far_ms
std::string learning_curve_csv(const std::vector<LearningCurvePoint>& curve);

nlohmann::json path_to_json(const Path& path);
nlohmann::json config_to_json(const SearchConfig& config);

// Both exporters re-check the stored latencies against evaluate_path and
// throw Error on any mismatch, so a written report is internally consistent.
nlohmann::json search_result_to_json(const CostModel& model, const SearchConfig& config,
                                     const SearchResult& result);
nlohmann::json baseline_report_to_json(const CostModel& model, const BaselineReport& report);

}  // namespace qsel

#endif  // QSEL_REPORTS_HPP

#include "qsel/reports.hpp"

#include <cstdio>

#include "qsel/errors.hpp"

namespace qsel {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void check_latency(const CostModel& model, const Path& path, double stored,
                   const char* what) {
    if (model.evaluate_path(path) != stored)
        throw Error(std::string("internal report inconsistency: ") + what +
                    " does not match evaluate_path");
}

}  // namespace

std::string to_string(TieBreak tie_break) {
    return tie_break == TieBreak::FirstCandidate ? "first" : "random";
}

TieBreak tie_break_from_string(const std::string& s) {
    if (s == "first") return TieBreak::FirstCandidate;
    if (s == "random") return TieBreak::Random;
    throw ValidationError("tie-break must be 'first' or 'random', got '" + s + "'");
}

std::string learning_curve_csv(const std::vector<LearningCurvePoint>& curve) {
    std::string out = "episode,epsilon,episode_latency_ms,best_so_far_ms\n";
    for (const LearningCurvePoint& p : curve) {
        out += std::to_string(p.episode);
        out += ',';
        out += fmt(p.epsilon);
        out += ',';
        out += fmt(p.episode_latency_ms);
        out += ',';
        out += fmt(p.best_so_far_ms);
        out += '\n';
    }
    return out;
}

nlohmann::json path_to_json(const Path& path) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t d = 0; d < path.choices.size(); ++d)
        arr.push_back({{"depth", d}, {"impl_id", path.choices[d]}});
    return arr;
}

nlohmann::json config_to_json(const SearchConfig& config) {
    return {{"alpha", config.alpha},
            {"gamma", config.gamma},
            {"total_episodes", config.total_episodes},
            {"replay_capacity", config.replay_capacity},
            {"seed", config.seed},
            {"tie_break", to_string(config.tie_break)}};
}

nlohmann::json search_result_to_json(const CostModel& model, const SearchConfig& config,
                                     const SearchResult& result) {
    check_latency(model, result.best_path, result.best_latency_ms, "best_latency_ms");
    check_latency(model, result.final_greedy_path, result.final_greedy_latency_ms,
                  "final_greedy_latency_ms");
    nlohmann::json doc;
    doc["model"] = model.name();
    doc["config"] = config_to_json(config);
    doc["best_path"] = path_to_json(result.best_path);
    doc["best_latency_ms"] = result.best_latency_ms;
    doc["final_greedy_path"] = path_to_json(result.final_greedy_path);
    doc["final_greedy_latency_ms"] = result.final_greedy_latency_ms;
    doc["episodes"] = result.learning_curve.size();
    return doc;
}

nlohmann::json baseline_report_to_json(const CostModel& model, const BaselineReport& report) {
    check_latency(model, report.path, report.latency_ms, "latency_ms");
    nlohmann::json doc;
    doc["model"] = model.name();
    doc["method"] = to_string(report.method);
    doc["path"] = path_to_json(report.path);
    doc["latency_ms"] = report.latency_ms;
    if (report.episodes_used) doc["episodes_used"] = *report.episodes_used;
    if (report.per_library) {
        doc["per_library_latency_ms"] = *report.per_library;
        double best = report.latency_ms;
        for (const auto& [library, ms] : *report.per_library) {
            if (ms == best) { doc["best_library"] = library; break; }
        }
    }
    return doc;
}

}  // namespace qsel

#include "qsel/compare.hpp"

#include <algorithm>
#include <cstdio>
#include <future>

#include "qsel/baselines.hpp"
#include "qsel/errors.hpp"
#include "qsel/reports.hpp"

namespace qsel {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double mean(const std::vector<double>& values) {
    double sum = 0.0;
    double lo = values.front(), hi = values.front();
    for (double v : values) {
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    // a mean lies in [min, max]; clamp away the division's rounding
    return std::clamp(sum / static_cast<double>(values.size()), lo, hi);
}

}  // namespace

CompareReport run_comparison(const CostModel& model, const CompareOptions& options) {
    if (options.seeds.empty()) throw ValidationError("compare needs at least one seed");
    if (options.budget < 1) throw ValidationError("compare budget must be >= 1");

    SearchConfig config = options.base;
    config.total_episodes = options.budget;

    CompareReport report;
    report.model_name = model.name();
    report.budget_episodes = options.budget;
    report.seeds = options.seeds;
    report.config = config;

    report.vanilla_latency_ms = model.evaluate_path(single_library_path(model, "vanilla"));
    const BaselineReport bsl = best_single_library(model);
    report.bsl_latency_ms = bsl.latency_ms;

    auto q_job = [&model, config](std::uint64_t seed) {
        SearchConfig c = config;
        c.seed = seed;
        return run_search(model, c).best_latency_ms;
    };
    auto rs_job = [&model, &options](std::uint64_t seed) {
        return random_search(model, options.budget, seed).latency_ms;
    };

    std::vector<double> q_best(options.seeds.size());
    std::vector<double> rs_best(options.seeds.size());
    if (options.parallel) {
        std::vector<std::future<double>> q_futures, rs_futures;
        for (std::uint64_t seed : options.seeds) {
            q_futures.push_back(std::async(std::launch::async, q_job, seed));
            rs_futures.push_back(std::async(std::launch::async, rs_job, seed));
        }
        for (std::size_t i = 0; i < options.seeds.size(); ++i) {
            q_best[i] = q_futures[i].get();
            rs_best[i] = rs_futures[i].get();
        }
    } else {
        for (std::size_t i = 0; i < options.seeds.size(); ++i) {
            q_best[i] = q_job(options.seeds[i]);
            rs_best[i] = rs_job(options.seeds[i]);
        }
    }

    for (std::size_t i = 0; i < options.seeds.size(); ++i) {
        report.runs.push_back({"qlearn", options.seeds[i], q_best[i]});
        report.runs.push_back({"random", options.seeds[i], rs_best[i]});
    }
    std::sort(report.runs.begin(), report.runs.end(),
              [](const CompareRun& a, const CompareRun& b) {
                  return std::tie(a.method, a.seed) < std::tie(b.method, b.seed);
              });

    const DpSolution dp = dp_oracle(model, 1.0);
    std::optional<double> brute_latency;
    if (model.design_space_size() <= options.brute_cap)
        brute_latency = brute_force(model, options.brute_cap).latency_ms;

    auto add_row = [&report](const std::string& method, double latency) {
        report.rows.push_back({method, latency, report.vanilla_latency_ms / latency,
                               report.bsl_latency_ms / latency});
    };
    add_row("qlearn", mean(q_best));
    add_row("random", mean(rs_best));
    add_row("bsl", bsl.latency_ms);
    add_row("dp", dp.latency_ms);
    if (brute_latency) add_row("brute", *brute_latency);
    return report;
}

nlohmann::json compare_report_to_json(const CompareReport& report) {
    nlohmann::json doc;
    doc["model"] = report.model_name;
    doc["budget_episodes"] = report.budget_episodes;
    doc["seeds"] = report.seeds;
    doc["vanilla_latency_ms"] = report.vanilla_latency_ms;
    doc["bsl_latency_ms"] = report.bsl_latency_ms;
    doc["config"] = config_to_json(report.config);
    nlohmann::json rows = nlohmann::json::array();
    for (const CompareRow& row : report.rows)
        rows.push_back({{"method", row.method},
                        {"latency_ms", row.latency_ms},
                        {"speedup_vs_vanilla", row.speedup_vs_vanilla},
                        {"speedup_vs_bsl", row.speedup_vs_bsl}});
    doc["rows"] = std::move(rows);
    nlohmann::json runs = nlohmann::json::array();
    for (const CompareRun& run : report.runs)
        runs.push_back({{"method", run.method},
                        {"seed", run.seed},
                        {"best_latency_ms", run.best_latency_ms}});
    doc["runs"] = std::move(runs);
    return doc;
}

std::string compare_summary_csv(const CompareReport& report) {
    std::string out = "method,latency_ms,speedup_vs_vanilla,speedup_vs_bsl\n";
    for (const CompareRow& row : report.rows) {
        out += row.method;
        out += ',';
        out += fmt(row.latency_ms);
        out += ',';
        out += fmt(row.speedup_vs_vanilla);
        out += ',';
        out += fmt(row.speedup_vs_bsl);
        out += '\n';
    }
    return out;
}

std::string compare_runs_csv(const CompareReport& report) {
    std::string out = "method,seed,budget_episodes,best_latency_ms\n";
    for (const CompareRun& run : report.runs) {
        out += run.method;
        out += ',';
        out += std::to_string(run.seed);
        out += ',';
        out += std::to_string(report.budget_episodes);
        out += ',';
        out += fmt(run.best_latency_ms);
        out += '\n';
    }
    return out;
}

}  // namespace qsel

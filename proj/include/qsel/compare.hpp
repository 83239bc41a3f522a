#ifndef QSEL_COMPARE_HPP
#define QSEL_COMPARE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsel/cost_model.hpp"
#include "qsel/qsearch.hpp"

namespace qsel {

struct CompareOptions {
    int budget = 1000;                          // episodes per seeded run
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    SearchConfig base;                          // alpha/gamma/replay/tie_break for the Q runs
    std::uint64_t brute_cap = 1'000'000;        // brute-force row only below this
    bool parallel = true;
};

struct CompareRun {
    std::string method;
    std::uint64_t seed = 0;
    double best_latency_ms = 0.0;
};

struct CompareRow {
    std::string method;             // qlearn | random | bsl | dp | brute
    double latency_ms = 0.0;        // mean of per-seed bests for seeded methods
    double speedup_vs_vanilla = 0.0;
    double speedup_vs_bsl = 0.0;
};

struct CompareReport {
    std::string model_name;
    int budget_episodes = 0;
    std::vector<std::uint64_t> seeds;
    double vanilla_latency_ms = 0.0;  // the all-vanilla path, the speedup baseline
    double bsl_latency_ms = 0.0;
    std::vector<CompareRow> rows;     // fixed order: qlearn, random, bsl, dp[, brute]
    std::vector<CompareRun> runs;     // sorted by (method, seed)
    SearchConfig config;
};

// Runs the Q search and random search over every seed at the shared budget
// (concurrently when options.parallel), plus BSL, the gamma=1 DP oracle and,
// when the space is within brute_cap, brute force.
CompareReport run_comparison(const CostModel& model, const CompareOptions& options);

nlohmann::json compare_report_to_json(const CompareReport& report);

// method,latency_ms,speedup_vs_vanilla,speedup_vs_bsl
std::string compare_summary_csv(const CompareReport& report);
// method,seed,budget_episodes,best_latency_ms
std::string compare_runs_csv(const CompareReport& report);

}  // namespace qsel

#endif  // QSEL_COMPARE_HPP

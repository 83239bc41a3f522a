#ifndef QSEL_BASELINES_HPP
#define QSEL_BASELINES_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "qsel/cost_model.hpp"
#include "qsel/qsearch.hpp"

namespace qsel {

enum class BaselineMethod { DpOracle, BruteForce, RandomSearch, BestSingleLibrary };

std::string to_string(BaselineMethod method);

struct BaselineReport {
    BaselineMethod method;
    Path path;
    double latency_ms = 0.0;
    std::optional<std::int64_t> episodes_used;           // RandomSearch / BruteForce
    std::optional<std::map<std::string, double>> per_library;  // BestSingleLibrary
    std::vector<LearningCurvePoint> curve;               // RandomSearch best-so-far
};

struct DpSolution {
    QTable qtable;
    Path path;
    double latency_ms = 0.0;
};

// Exact backward induction over the layered state space:
//   Q*(s, a) = r(s, a) + gamma * max_a' Q*(s', a'),  V(terminal) = 0,
// with the same reward shaping as the search. The returned path is the
// greedy walk of Q*, ties broken toward the lexicographically smallest
// impl_id. At gamma == 1 it is a true minimum-latency path.
DpSolution dp_oracle(const CostModel& model, double gamma);

// Evaluates every path and returns the exact optimum; ties keep the first
// path in per-layer candidate order. Refuses (ValidationError) when the
// design space exceeds `cap`.
BaselineReport brute_force(const CostModel& model, std::uint64_t cap = 1'000'000);

// Uniformly random paths, best-of-`episodes`; emits the same best-so-far
// curve schema as run_search (epsilon column fixed at 1.0: every draw is
// exploration).
BaselineReport random_search(const CostModel& model, int episodes, std::uint64_t seed);

// For every library in the model: take its fastest candidate wherever it
// covers a layer and the vanilla candidate elsewhere, evaluate the result
// with penalties, and report the best library (per_library holds them all).
BaselineReport best_single_library(const CostModel& model);

// The committed-to-one-library path for a specific library name.
Path single_library_path(const CostModel& model, const std::string& library);

}  // namespace qsel

#endif  // QSEL_BASELINES_HPP

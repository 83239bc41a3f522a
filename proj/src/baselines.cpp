#include "qsel/baselines.hpp"

#include <algorithm>
#include <limits>

#include "qsel/errors.hpp"
#include "qsel/rng.hpp"

namespace qsel {

std::string to_string(BaselineMethod method) {
    switch (method) {
        case BaselineMethod::DpOracle: return "dp";
        case BaselineMethod::BruteForce: return "brute";
        case BaselineMethod::RandomSearch: return "random";
        case BaselineMethod::BestSingleLibrary: return "bsl";
    }
    return {};
}

DpSolution dp_oracle(const CostModel& model, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ValidationError("gamma must be in [0, 1]");
    const int n = model.num_layers();
    QTable q(model);

    // value[i] = max_a Q*((k, i), a) for the layer below the one being filled
    std::vector<double> value(model.candidate_count(n - 1), 0.0);
    for (int k = n - 1; k >= 0; --k) {
        const int states = k == 0 ? 1 : model.candidate_count(k - 1);
        const int actions = model.candidate_count(k);
        std::vector<double> prev_value(states, -std::numeric_limits<double>::infinity());
        for (int i = 0; i < states; ++i) {
            for (int j = 0; j < actions; ++j) {
                const double step =
                    model.latency(k, j) + (k > 0 ? model.penalty_at(k, i, j) : 0.0);
                const double bootstrap = k == n - 1 ? 0.0 : value[j];
                const double qv = -step + gamma * bootstrap;
                q.set_at(k, i, j, qv);
                prev_value[i] = std::max(prev_value[i], qv);
            }
        }
        value = std::move(prev_value);
    }

    // Greedy walk; equal values resolve to the smallest impl_id.
    std::vector<int> choices;
    QState state = QState::source();
    for (int d = 0; d < n; ++d) {
        const auto row = q.row(state);
        int best = 0;
        for (int j = 1; j < static_cast<int>(row.size()); ++j) {
            if (row[j] > row[best] ||
                (row[j] == row[best] && model.candidate_id(d, j) < model.candidate_id(d, best)))
                best = j;
        }
        choices.push_back(best);
        state = QState{d, best};
    }

    DpSolution solution{std::move(q), model.to_path(choices),
                        model.evaluate_path(std::span<const int>(choices))};
    return solution;
}

BaselineReport brute_force(const CostModel& model, std::uint64_t cap) {
    const BigUint space = model.design_space_size();
    if (space > cap)
        throw ValidationError("design space of " + space.str() + " paths exceeds the cap of " +
                              std::to_string(cap) + "; brute force refused");

    const int n = model.num_layers();
    std::vector<int> current(n, 0);
    std::vector<int> best = current;
    double best_latency = model.evaluate_path(std::span<const int>(current));
    std::int64_t evaluated = 1;

    // odometer enumeration, last layer fastest: lexicographic path order
    while (true) {
        int d = n - 1;
        while (d >= 0 && current[d] + 1 >= model.candidate_count(d)) current[d--] = 0;
        if (d < 0) break;
        ++current[d];
        const double latency = model.evaluate_path(std::span<const int>(current));
        ++evaluated;
        if (latency < best_latency) {
            best_latency = latency;
            best = current;
        }
    }

    BaselineReport report;
    report.method = BaselineMethod::BruteForce;
    report.path = model.to_path(best);
    report.latency_ms = best_latency;
    report.episodes_used = evaluated;
    return report;
}

BaselineReport random_search(const CostModel& model, int episodes, std::uint64_t seed) {
    if (episodes < 1) throw ValidationError("random search needs episodes >= 1");
    Rng rng(seed);
    const int n = model.num_layers();

    BaselineReport report;
    report.method = BaselineMethod::RandomSearch;
    report.curve.reserve(episodes);

    std::vector<int> current(n);
    std::vector<int> best;
    double best_latency = std::numeric_limits<double>::infinity();
    for (int e = 0; e < episodes; ++e) {
        for (int d = 0; d < n; ++d)
            current[d] = static_cast<int>(rng.uniform_index(model.candidate_count(d)));
        const double latency = model.evaluate_path(std::span<const int>(current));
        if (latency < best_latency) {
            best_latency = latency;
            best = current;
        }
        report.curve.push_back({e, 1.0, latency, best_latency});
    }

    report.path = model.to_path(best);
    report.latency_ms = best_latency;
    report.episodes_used = episodes;
    return report;
}

Path single_library_path(const CostModel& model, const std::string& library) {
    std::vector<int> choices;
    choices.reserve(model.num_layers());
    for (int d = 0; d < model.num_layers(); ++d) {
        int pick = -1;
        for (int c = 0; c < model.candidate_count(d); ++c) {
            if (model.candidate_descriptor(d, c).library != library) continue;
            if (pick < 0 || model.latency(d, c) < model.latency(d, pick)) pick = c;
        }
        if (pick < 0) pick = model.vanilla_candidate(d);
        choices.push_back(pick);
    }
    return model.to_path(choices);
}

BaselineReport best_single_library(const CostModel& model) {
    BaselineReport report;
    report.method = BaselineMethod::BestSingleLibrary;
    report.per_library.emplace();

    std::string best_library;
    double best_latency = std::numeric_limits<double>::infinity();
    Path best_path;
    for (const std::string& library : model.libraries()) {
        Path path = single_library_path(model, library);
        const double latency = model.evaluate_path(path);
        (*report.per_library)[library] = latency;
        if (latency < best_latency) {  // model.libraries() is sorted: ties keep the smaller name
            best_latency = latency;
            best_library = library;
            best_path = std::move(path);
        }
    }

    report.path = std::move(best_path);
    report.latency_ms = best_latency;
    return report;
}

}  // namespace qsel

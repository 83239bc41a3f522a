#ifndef QSEL_TEST_UTIL_HPP
#define QSEL_TEST_UTIL_HPP

#include <functional>
#include <string>
#include <vector>

#include "qsel/cost_model.hpp"
#include "qsel/qsearch.hpp"
#include "qsel/rng.hpp"

namespace qsel::test {

// Independent cost oracle: folds (latency, penalty) pairs straight off the
// declarative layer maps and penalty entries, never touching the model's
// compiled lookup tables.
inline double oracle_eval(const CostModel& m, const std::vector<int>& choices) {
    double total = 0.0;
    for (int d = 0; d < m.num_layers(); ++d) {
        const LayerSpec& layer = m.layers()[d];
        const ImplId& id = layer.candidates.at(choices[d]);
        double pen = 0.0;
        if (d > 0) {
            const ImplId& prev = m.layers()[d - 1].candidates.at(choices[d - 1]);
            auto it = m.penalties().entries.find({d, prev, id});
            if (it != m.penalties().entries.end()) pen = it->second;
        }
        total += layer.latency_ms.at(id) + pen;
    }
    return total;
}

// Visits every complete path in lexicographic candidate order.
inline void for_each_path(const CostModel& m,
                          const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> current(m.num_layers(), 0);
    while (true) {
        fn(current);
        int d = m.num_layers() - 1;
        while (d >= 0 && current[d] + 1 >= m.candidate_count(d)) current[d--] = 0;
        if (d < 0) return;
        ++current[d];
    }
}

struct OraclePath {
    std::vector<int> choices;
    double latency = 0.0;
};

// Exhaustive ground truth built on oracle_eval only.
inline OraclePath oracle_brute_force(const CostModel& m) {
    OraclePath best;
    best.latency = std::numeric_limits<double>::infinity();
    for_each_path(m, [&](const std::vector<int>& path) {
        const double latency = oracle_eval(m, path);
        if (latency < best.latency) {
            best.latency = latency;
            best.choices = path;
        }
    });
    return best;
}

// The per-layer locally fastest path, penalties ignored.
inline std::vector<int> greedy_per_layer(const CostModel& m) {
    std::vector<int> choices(m.num_layers());
    for (int d = 0; d < m.num_layers(); ++d) {
        int best = 0;
        for (int c = 1; c < m.candidate_count(d); ++c)
            if (m.latency(d, c) < m.latency(d, best)) best = c;
        choices[d] = best;
    }
    return choices;
}

// Small random chain with arbitrary explicit penalties (not tag-derived),
// for properties that should not depend on the generator's structure.
inline CostModel random_model(std::uint64_t seed, int max_layers = 6, int max_cands = 4) {
    Rng rng(seed);
    const int n = 1 + static_cast<int>(rng.uniform_index(max_layers));

    std::vector<ImplementationDescriptor> impls;
    std::vector<LayerSpec> layers;
    for (int d = 0; d < n; ++d) {
        const int cands = 1 + static_cast<int>(rng.uniform_index(max_cands));
        LayerSpec layer;
        layer.depth = d;
        layer.layer_type = "convolution";
        for (int c = 0; c < cands; ++c) {
            const ImplId id = "l" + std::to_string(d) + "c" + std::to_string(c);
            ImplementationDescriptor impl;
            impl.impl_id = id;
            impl.library = c == 0 ? "vanilla" : "lib" + std::to_string(c);
            impl.algorithm = "convolution";
            impl.processor = c % 2 == 0 ? Processor::cpu() : Processor::gpu();
            impl.layout = c % 3 == 0 ? "NCHW" : "NHWC";
            impls.push_back(std::move(impl));
            layer.candidates.push_back(id);
            layer.latency_ms[id] = rng.uniform_range(0.1, 10.0);
        }
        layers.push_back(std::move(layer));
    }

    PenaltyTable penalties;
    for (int d = 1; d < n; ++d)
        for (const ImplId& from : layers[d - 1].candidates)
            for (const ImplId& to : layers[d].candidates)
                if (rng.uniform_real() < 0.3)
                    penalties.entries[{d, from, to}] = rng.uniform_range(0.0, 4.0);

    return CostModel("random-" + std::to_string(seed), std::move(impls), std::move(layers),
                     std::move(penalties));
}

// Builds the episode record run_episode would produce for a fixed path,
// rewards recomputed from the raw tables.
inline EpisodeRecord episode_from_choices(const CostModel& m, const std::vector<int>& choices) {
    EpisodeRecord record;
    record.choices = choices;
    QState state = QState::source();
    for (int d = 0; d < m.num_layers(); ++d) {
        const LayerSpec& layer = m.layers()[d];
        const ImplId& id = layer.candidates.at(choices[d]);
        double pen = 0.0;
        if (d > 0) {
            const ImplId& prev = m.layers()[d - 1].candidates.at(choices[d - 1]);
            auto it = m.penalties().entries.find({d, prev, id});
            if (it != m.penalties().entries.end()) pen = it->second;
        }
        const double step = layer.latency_ms.at(id) + pen;
        Transition t;
        t.state = state;
        t.action = choices[d];
        t.reward = -step;
        t.next_state = QState{d, choices[d]};
        t.terminal = d == m.num_layers() - 1;
        record.transitions.push_back(t);
        record.total_latency_ms += step;
        record.total_reward += t.reward;
        state = t.next_state;
    }
    return record;
}

}  // namespace qsel::test

#endif  // QSEL_TEST_UTIL_HPP

#include "qsel/qsearch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qsel/errors.hpp"

namespace qsel {

QTable::QTable(const CostModel& model) {
    const int n = model.num_layers();
    blocks_.resize(n);
    cols_.resize(n);
    for (int k = 0; k < n; ++k) {
        const int rows = k == 0 ? 1 : model.candidate_count(k - 1);
        cols_[k] = model.candidate_count(k);
        blocks_[k].assign(static_cast<std::size_t>(rows) * cols_[k], 0.0);
    }
}

double QTable::max_from(const QState& s) const {
    if (s.depth + 1 >= num_layers()) return 0.0;
    const auto r = row(s);
    double best = r[0];
    for (std::size_t i = 1; i < r.size(); ++i) best = std::max(best, r[i]);
    return best;
}

ReplayBuffer::ReplayBuffer(int capacity) : capacity_(capacity) {
    if (capacity < 1) throw ValidationError("replay capacity must be >= 1");
}

void ReplayBuffer::push(EpisodeRecord record) {
    records_.push_back(std::move(record));
    while (static_cast<int>(records_.size()) > capacity_) records_.pop_front();
}

void validate(const SearchConfig& config) {
    if (!(config.alpha > 0.0 && config.alpha <= 1.0))
        throw ValidationError("alpha must be in (0, 1]");
    if (!(config.gamma >= 0.0 && config.gamma <= 1.0))
        throw ValidationError("gamma must be in [0, 1]");
    if (config.total_episodes < 1)
        throw ValidationError("total_episodes must be >= 1");
    if (config.replay_capacity < 1)
        throw ValidationError("replay_capacity must be >= 1");
}

std::vector<std::pair<double, int>> epsilon_levels(int total_episodes) {
    if (total_episodes < 1) throw ValidationError("total_episodes must be >= 1");
    static constexpr double kLevels[] = {1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1};
    std::vector<std::pair<double, int>> blocks;
    int assigned = 0;
    for (double level : kLevels) {
        const double share = level == 1.0 ? 0.50 : 0.05;
        int count = static_cast<int>(std::ceil(share * total_episodes));
        count = std::min(count, total_episodes - assigned);
        blocks.emplace_back(level, count);
        assigned += count;
    }
    blocks.emplace_back(0.0, total_episodes - assigned);
    return blocks;
}

double epsilon_for_episode(const SearchConfig& config, int episode) {
    if (episode < 0 || episode >= config.total_episodes)
        throw std::out_of_range("episode " + std::to_string(episode) +
                                " outside budget of " + std::to_string(config.total_episodes));
    int start = 0;
    for (const auto& [eps, count] : epsilon_levels(config.total_episodes)) {
        if (episode < start + count) return eps;
        start += count;
    }
    return 0.0;  // unreachable: blocks sum to total_episodes
}

namespace {

int argmax_action(std::span<const double> values, Rng* rng, TieBreak tie_break) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(values.size()); ++i)
        if (values[i] > values[best]) best = i;
    if (tie_break == TieBreak::Random && rng) {
        int ties = 0;
        for (double v : values)
            if (v == values[best]) ++ties;
        if (ties > 1) {
            std::size_t pick = rng->uniform_index(ties);
            for (int i = 0; i < static_cast<int>(values.size()); ++i) {
                if (values[i] == values[best] && pick-- == 0) return i;
            }
        }
    }
    return best;
}

}  // namespace

int select_action(const QTable& q, const QState& state, double epsilon, Rng& rng,
                  TieBreak tie_break) {
    const auto values = q.row(state);
    if (rng.uniform_real() < epsilon)
        return static_cast<int>(rng.uniform_index(values.size()));
    return argmax_action(values, &rng, tie_break);
}

double q_update(QTable& q, const Transition& t, double alpha, double gamma) {
    const double old_q = q.get(t.state, t.action);
    const double max_next = t.terminal ? 0.0 : q.max_from(t.next_state);
    const double updated = (1.0 - alpha) * old_q + alpha * (t.reward + gamma * max_next);
    q.set(t.state, t.action, updated);
    return updated;
}

EpisodeRecord run_episode(const CostModel& model, QTable& q, double epsilon,
                          const SearchConfig& config, Rng& rng) {
    const int n = model.num_layers();
    EpisodeRecord record;
    record.choices.reserve(n);
    record.transitions.reserve(n);

    QState state = QState::source();
    for (int d = 0; d < n; ++d) {
        const int action = select_action(q, state, epsilon, rng, config.tie_break);
        const double step = model.latency(d, action) +
                            (d > 0 ? model.penalty_at(d, state.candidate, action) : 0.0);
        Transition t;
        t.state = state;
        t.action = action;
        t.reward = -step;
        t.next_state = QState{d, action};
        t.terminal = d == n - 1;
        record.transitions.push_back(t);
        record.choices.push_back(action);
        record.total_latency_ms += step;
        record.total_reward += t.reward;
        state = t.next_state;
    }

    for (auto it = record.transitions.rbegin(); it != record.transitions.rend(); ++it)
        q_update(q, *it, config.alpha, config.gamma);
    return record;
}

std::size_t experience_replay(QTable& q, const ReplayBuffer& buffer,
                              const SearchConfig& config) {
    std::size_t updates = 0;
    for (const EpisodeRecord& record : buffer.records()) {
        for (auto it = record.transitions.rbegin(); it != record.transitions.rend(); ++it) {
            q_update(q, *it, config.alpha, config.gamma);
            ++updates;
        }
    }
    return updates;
}

std::vector<int> greedy_rollout(const CostModel& model, const QTable& q,
                                TieBreak tie_break, Rng& rng) {
    std::vector<int> choices;
    choices.reserve(model.num_layers());
    QState state = QState::source();
    for (int d = 0; d < model.num_layers(); ++d) {
        const int action =
            argmax_action(q.row(state), tie_break == TieBreak::Random ? &rng : nullptr,
                          tie_break);
        choices.push_back(action);
        state = QState{d, action};
    }
    return choices;
}

SearchResult run_search(const CostModel& model, const SearchConfig& config) {
    validate(config);
    QTable q(model);
    ReplayBuffer buffer(config.replay_capacity);
    Rng rng(config.seed);

    SearchResult result;
    result.learning_curve.reserve(config.total_episodes);
    std::vector<int> best_choices;
    double best = std::numeric_limits<double>::infinity();

    const auto levels = epsilon_levels(config.total_episodes);
    int episode = 0;
    for (const auto& [epsilon, count] : levels) {
        for (int i = 0; i < count; ++i, ++episode) {
            EpisodeRecord record = run_episode(model, q, epsilon, config, rng);
            if (record.total_latency_ms < best) {
                best = record.total_latency_ms;
                best_choices = record.choices;
            }
            result.learning_curve.push_back(
                {episode, epsilon, record.total_latency_ms, best});
            buffer.push(std::move(record));
            experience_replay(q, buffer, config);
        }
    }

    result.best_path = model.to_path(best_choices);
    result.best_latency_ms = best;
    const std::vector<int> greedy = greedy_rollout(model, q, config.tie_break, rng);
    result.final_greedy_path = model.to_path(greedy);
    result.final_greedy_latency_ms = model.evaluate_path(std::span<const int>(greedy));
    return result;
}

}  // namespace qsel

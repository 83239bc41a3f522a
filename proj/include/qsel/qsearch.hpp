#ifndef QSEL_QSEARCH_HPP
#define QSEL_QSEARCH_HPP

#include <cstdint>
#include <deque>
#include <span>
#include <utility>
#include <vector>

#include "qsel/cost_model.hpp"
#include "qsel/rng.hpp"

namespace qsel {

// Agent position: the layer just assigned and the candidate chosen there.
// depth == -1 is the virtual source before layer 0 (candidate == -1).
struct QState {
    int depth = -1;
    int candidate = -1;

    static QState source() { return {}; }
    bool is_source() const { return depth < 0; }
    bool operator==(const QState&) const = default;
};

enum class TieBreak { FirstCandidate, Random };

// Action values Q(state, action) over the layered state space of one model,
// stored dense: block k holds the values for actions entering layer k from
// every state at depth k - 1 (a single source row for k == 0). Everything
// starts at 0, the value for never-updated pairs.
class QTable {
public:
    explicit QTable(const CostModel& model);

    int num_layers() const { return static_cast<int>(cols_.size()); }
    // States at depth k - 1 (1 for the source block).
    int rows(int block) const { return static_cast<int>(blocks_[block].size() / cols_[block]); }
    // Candidates of layer k.
    int cols(int block) const { return cols_[block]; }

    double at(int block, int row, int col) const { return blocks_[block][row * cols_[block] + col]; }
    void set_at(int block, int row, int col, double v) { blocks_[block][row * cols_[block] + col] = v; }

    double get(const QState& s, int action) const {
        return row(s)[action];
    }
    void set(const QState& s, int action, double v) {
        const int block = s.depth + 1;
        blocks_[block][row_offset(s) + action] = v;
    }

    // Action values available from `s` (the candidates of layer s.depth + 1).
    std::span<const double> row(const QState& s) const {
        const int block = s.depth + 1;
        return {blocks_[block].data() + row_offset(s), static_cast<std::size_t>(cols_[block])};
    }

    // max over the actions from `s`; 0 for terminal states (no successor layer).
    double max_from(const QState& s) const;

private:
    std::size_t row_offset(const QState& s) const {
        return static_cast<std::size_t>(s.is_source() ? 0 : s.candidate) * cols_[s.depth + 1];
    }

    std::vector<std::vector<double>> blocks_;
    std::vector<int> cols_;
};

// One step of an episode: entering layer next_state.depth with
// next_state.candidate. Reward is the negated cost of that entry
// (layer latency plus junction penalty), so rewards are always < 0.
struct Transition {
    QState state;
    int action = -1;
    double reward = 0.0;
    QState next_state;
    bool terminal = false;
};

// A full traversal of the network and its bookkeeping.
struct EpisodeRecord {
    std::vector<int> choices;  // candidate index per layer
    std::vector<Transition> transitions;
    double total_latency_ms = 0.0;
    double total_reward = 0.0;
};

// FIFO of past episodes replayed after every new one.
class ReplayBuffer {
public:
    explicit ReplayBuffer(int capacity = 128);

    void push(EpisodeRecord record);
    const std::deque<EpisodeRecord>& records() const { return records_; }
    int capacity() const { return capacity_; }
    std::size_t size() const { return records_.size(); }

private:
    int capacity_;
    std::deque<EpisodeRecord> records_;
};

struct SearchConfig {
    double alpha = 0.05;        // learning rate
    double gamma = 0.9;         // discount factor
    int total_episodes = 1000;
    int replay_capacity = 128;
    std::uint64_t seed = 0;
    TieBreak tie_break = TieBreak::FirstCandidate;
};

// Throws ValidationError when a field is out of range.
void validate(const SearchConfig& config);

// The exploration schedule as (epsilon, episode count) blocks: the first
// half of the budget fully exploring at 1.0, then 5% of it at each of
// 0.9 .. 0.1, and whatever remains exploiting at 0.0. Block lengths use
// ceilings; any shortfall or overflow lands on the trailing 0.0 block
// (levels are truncated in order once the budget is spent).
std::vector<std::pair<double, int>> epsilon_levels(int total_episodes);

// Epsilon for one episode index; throws std::out_of_range outside the budget.
double epsilon_for_episode(const SearchConfig& config, int episode);

// With probability epsilon a uniformly random action, otherwise the argmax
// of Q over the actions available from `state`.
int select_action(const QTable& q, const QState& state, double epsilon, Rng& rng,
                  TieBreak tie_break);

// One Bellman update:
//   Q(s,a) <- (1 - alpha) * Q(s,a) + alpha * (r + gamma * max_a' Q(s',a'))
// with max_a' Q defined as 0 for terminal transitions. Stores and returns
// the new value. The expression is evaluated exactly as written.
double q_update(QTable& q, const Transition& t, double alpha, double gamma);

// Rolls out one path with the epsilon-greedy policy, then applies q_update
// to its transitions in reverse depth order so late-layer values feed the
// bootstrap of earlier ones.
EpisodeRecord run_episode(const CostModel& model, QTable& q, double epsilon,
                          const SearchConfig& config, Rng& rng);

// Re-applies q_update to every buffered transition, episodes oldest to
// newest, reverse depth order within each. Returns the number of updates.
std::size_t experience_replay(QTable& q, const ReplayBuffer& buffer,
                              const SearchConfig& config);

// Pure exploitation walk (epsilon = 0); rng is only consumed when
// tie_break == Random has to split a tie.
std::vector<int> greedy_rollout(const CostModel& model, const QTable& q,
                                TieBreak tie_break, Rng& rng);

struct LearningCurvePoint {
    int episode = 0;
    double epsilon = 0.0;
    double episode_latency_ms = 0.0;
    double best_so_far_ms = 0.0;
};

struct SearchResult {
    Path best_path;
    double best_latency_ms = 0.0;
    std::vector<LearningCurvePoint> learning_curve;
    Path final_greedy_path;
    double final_greedy_latency_ms = 0.0;
};

// The full search: total_episodes episodes of rollout + update + replay on
// the scheduled epsilon, then one greedy rollout of the learned table.
// Deterministic given config.seed.
SearchResult run_search(const CostModel& model, const SearchConfig& config);

}  // namespace qsel

#endif  // QSEL_QSEARCH_HPP

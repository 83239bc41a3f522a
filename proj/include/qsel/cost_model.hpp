#ifndef QSEL_COST_MODEL_HPP
#define QSEL_COST_MODEL_HPP

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace qsel {

using ImplId = std::string;
using BigUint = boost::multiprecision::cpp_int;

// Hardware unit an implementation runs on.
struct Processor {
    enum class Kind { Cpu, Gpu, Other };

    Kind kind = Kind::Cpu;
    std::string other_name;  // set only when kind == Other

    static Processor cpu() { return {Kind::Cpu, {}}; }
    static Processor gpu() { return {Kind::Gpu, {}}; }
    static Processor other(std::string name) { return {Kind::Other, std::move(name)}; }

    // "CPU" / "GPU" (case-insensitive) map to the enum; anything else is Other.
    static Processor from_string(std::string_view s);
    std::string to_string() const;

    bool is_cpu() const { return kind == Kind::Cpu; }
    bool is_gpu() const { return kind == Kind::Gpu; }
    bool operator==(const Processor&) const = default;
};

// One primitive: a concrete way of executing a layer on the platform.
struct ImplementationDescriptor {
    ImplId impl_id;
    std::string library;         // e.g. "vanilla", "cudnn"
    std::string algorithm;       // routine type
    std::string algorithm_impl;  // sub-routine / lowering method
    Processor processor;
    std::string layout;          // data layout tag, e.g. "NCHW"
    std::string blas_library;    // empty = none

    bool operator==(const ImplementationDescriptor&) const = default;
};

// One profiled layer and the primitives that can execute it.
struct LayerSpec {
    int depth = 0;
    std::string layer_type;
    std::vector<ImplId> candidates;                    // ordered
    std::unordered_map<ImplId, double> latency_ms;     // per candidate, > 0

    bool operator==(const LayerSpec&) const = default;
};

// Extra latency charged when layer `depth` runs `to` right after layer
// `depth - 1` ran `from`. Missing entry means no conversion is needed.
struct PenaltyTable {
    struct Key {
        int depth;
        ImplId from;
        ImplId to;
        auto operator<=>(const Key&) const = default;
    };
    std::map<Key, double> entries;

    bool operator==(const PenaltyTable&) const = default;
};

// A complete network configuration: one implementation choice per layer.
struct Path {
    std::vector<ImplId> choices;

    bool operator==(const Path&) const = default;
};

// The search environment: an immutable, validated bundle of layers,
// implementation descriptors, latencies and junction penalties.
//
// The constructor checks every invariant and throws ValidationError naming
// the first violation. Instances are safe to share across threads.
class CostModel {
public:
    CostModel(std::string name,
              std::vector<ImplementationDescriptor> implementations,
              std::vector<LayerSpec> layers,
              PenaltyTable penalties,
              std::map<std::string, std::string> metadata = {});

    const std::string& name() const { return name_; }
    int num_layers() const { return static_cast<int>(layers_.size()); }
    const std::vector<LayerSpec>& layers() const { return layers_; }
    const LayerSpec& layer(int depth) const { return layers_.at(depth); }
    const std::map<ImplId, ImplementationDescriptor>& implementations() const {
        return implementations_;
    }
    const ImplementationDescriptor& descriptor(const ImplId& impl) const;
    const PenaltyTable& penalties() const { return penalties_; }
    const std::map<std::string, std::string>& metadata() const { return metadata_; }

    // --- candidate index view (candidates keep their per-layer order) ---

    int candidate_count(int depth) const {
        return static_cast<int>(layers_[depth].candidates.size());
    }
    const ImplId& candidate_id(int depth, int cand) const {
        return layers_[depth].candidates[cand];
    }
    const ImplementationDescriptor& candidate_descriptor(int depth, int cand) const {
        return descriptor(candidate_id(depth, cand));
    }
    // Index of `impl` in layer `depth`'s candidate list, or -1.
    int find_candidate(int depth, std::string_view impl) const;
    // Index of the library == "vanilla" candidate of the layer.
    int vanilla_candidate(int depth) const { return vanilla_idx_[depth]; }

    double latency(int depth, int cand) const { return lat_[depth][cand]; }

    // Stored junction penalty by candidate index; depth must be >= 1.
    double penalty_at(int depth, int from_cand, int to_cand) const {
        return pen_[depth][from_cand * lat_[depth].size() + to_cand];
    }

    // Junction penalty by impl id. Throws std::out_of_range for depth < 1 or
    // depth >= num_layers, std::invalid_argument when an id is not a
    // candidate at its depth. Missing table entries read as 0.
    double penalty(int depth, const ImplId& from, const ImplId& to) const;

    // Total latency of a full path: per layer, its latency plus the junction
    // penalty charged on entry. Throws std::invalid_argument on a wrong-length
    // path or a non-candidate choice.
    double evaluate_path(const Path& path) const;
    double evaluate_path(std::span<const int> cand_indices) const;

    // Number of complete paths, as an exact big integer.
    BigUint design_space_size() const;

    // Library names appearing among any layer's candidates, sorted.
    std::vector<std::string> libraries() const;

    Path to_path(std::span<const int> cand_indices) const;
    std::vector<int> to_indices(const Path& path) const;

    // Semantic equality of the declarative content (name, descriptors,
    // layers, penalties, metadata).
    bool operator==(const CostModel& rhs) const;

private:
    void validate_and_compile();

    std::string name_;
    std::map<ImplId, ImplementationDescriptor> implementations_;
    std::vector<LayerSpec> layers_;
    PenaltyTable penalties_;
    std::map<std::string, std::string> metadata_;

    // compiled lookup tables
    std::vector<std::vector<double>> lat_;                     // [depth][cand]
    std::vector<std::vector<double>> pen_;                     // [depth][from * n_to + to], depth >= 1
    std::vector<std::unordered_map<std::string, int>> cand_index_;
    std::vector<int> vanilla_idx_;
};

}  // namespace qsel

#endif  // QSEL_COST_MODEL_HPP

#include "qsel/cost_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qsel/errors.hpp"

namespace qsel {

namespace {

std::string to_upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    return out;
}

[[noreturn]] void fail(const std::string& msg) { throw ValidationError(msg); }

}  // namespace

Processor Processor::from_string(std::string_view s) {
    const std::string up = to_upper(s);
    if (up == "CPU") return cpu();
    if (up == "GPU") return gpu();
    return other(std::string(s));
}

std::string Processor::to_string() const {
    switch (kind) {
        case Kind::Cpu: return "CPU";
        case Kind::Gpu: return "GPU";
        case Kind::Other: return other_name;
    }
    return {};
}

CostModel::CostModel(std::string name,
                     std::vector<ImplementationDescriptor> implementations,
                     std::vector<LayerSpec> layers,
                     PenaltyTable penalties,
                     std::map<std::string, std::string> metadata)
    : name_(std::move(name)),
      layers_(std::move(layers)),
      penalties_(std::move(penalties)),
      metadata_(std::move(metadata)) {
    for (auto& impl : implementations) {
        if (impl.impl_id.empty()) fail("implementation with empty impl_id");
        auto [it, inserted] = implementations_.emplace(impl.impl_id, std::move(impl));
        if (!inserted) fail("duplicate impl_id '" + it->first + "'");
    }
    validate_and_compile();
}

void CostModel::validate_and_compile() {
    if (layers_.empty()) fail("model has no layers");

    for (const auto& [id, impl] : implementations_) {
        if (impl.library.empty()) fail("impl '" + id + "' has empty library");
        if (impl.algorithm.empty()) fail("impl '" + id + "' has empty algorithm");
    }

    const int n = num_layers();
    std::vector<bool> seen(n, false);
    for (const auto& layer : layers_) {
        if (layer.depth < 0 || layer.depth >= n)
            fail("layer depth " + std::to_string(layer.depth) +
                 " outside 0.." + std::to_string(n - 1) +
                 "; depths must form a contiguous chain");
        if (seen[layer.depth])
            fail("duplicate layer depth " + std::to_string(layer.depth) +
                 "; branched topologies are not supported");
        seen[layer.depth] = true;
    }
    std::sort(layers_.begin(), layers_.end(),
              [](const LayerSpec& a, const LayerSpec& b) { return a.depth < b.depth; });

    lat_.assign(n, {});
    pen_.assign(n, {});
    cand_index_.assign(n, {});
    vanilla_idx_.assign(n, -1);

    for (int d = 0; d < n; ++d) {
        const LayerSpec& layer = layers_[d];
        if (layer.candidates.empty())
            fail("layer at depth " + std::to_string(d) + " has no candidates");

        lat_[d].resize(layer.candidates.size());
        for (int c = 0; c < static_cast<int>(layer.candidates.size()); ++c) {
            const ImplId& id = layer.candidates[c];
            auto impl_it = implementations_.find(id);
            if (impl_it == implementations_.end())
                fail("unknown impl_id '" + id + "' referenced at depth " + std::to_string(d));
            if (!cand_index_[d].emplace(id, c).second)
                fail("duplicate candidate '" + id + "' at depth " + std::to_string(d));

            auto lat_it = layer.latency_ms.find(id);
            if (lat_it == layer.latency_ms.end())
                fail("no latency entry for candidate '" + id + "' at depth " +
                     std::to_string(d));
            if (!std::isfinite(lat_it->second))
                fail("non-finite latency for '" + id + "' at depth " + std::to_string(d));
            if (lat_it->second <= 0.0)
                fail("non-positive latency for '" + id + "' at depth " + std::to_string(d));
            lat_[d][c] = lat_it->second;

            if (impl_it->second.library == "vanilla") {
                if (vanilla_idx_[d] >= 0)
                    fail("multiple vanilla candidates at depth " + std::to_string(d));
                vanilla_idx_[d] = c;
            }
        }
        if (vanilla_idx_[d] < 0)
            fail("missing vanilla fallback at depth " + std::to_string(d));
        for (const auto& [id, ms] : layer.latency_ms) {
            (void)ms;
            if (!cand_index_[d].count(id))
                fail("latency entry for non-candidate '" + id + "' at depth " +
                     std::to_string(d));
        }
    }

    for (int d = 1; d < n; ++d)
        pen_[d].assign(lat_[d - 1].size() * lat_[d].size(), 0.0);

    for (const auto& [key, ms] : penalties_.entries) {
        std::ostringstream where;
        where << "penalty entry (" << key.depth << ", " << key.from << ", " << key.to << ")";
        if (key.depth < 1 || key.depth >= n) fail(where.str() + " has out-of-range depth");
        if (!std::isfinite(ms)) fail(where.str() + " is non-finite");
        if (ms < 0.0) fail(where.str() + " is negative");
        const int from = find_candidate(key.depth - 1, key.from);
        const int to = find_candidate(key.depth, key.to);
        if (from < 0) fail(where.str() + " references '" + key.from +
                           "', not a candidate at depth " + std::to_string(key.depth - 1));
        if (to < 0) fail(where.str() + " references '" + key.to +
                         "', not a candidate at depth " + std::to_string(key.depth));
        pen_[key.depth][from * lat_[key.depth].size() + to] = ms;
    }
}

const ImplementationDescriptor& CostModel::descriptor(const ImplId& impl) const {
    auto it = implementations_.find(impl);
    if (it == implementations_.end())
        throw std::invalid_argument("unknown impl_id '" + impl + "'");
    return it->second;
}

int CostModel::find_candidate(int depth, std::string_view impl) const {
    const auto& index = cand_index_[depth];
    auto it = index.find(std::string(impl));
    return it == index.end() ? -1 : it->second;
}

double CostModel::penalty(int depth, const ImplId& from, const ImplId& to) const {
    if (depth < 1 || depth >= num_layers())
        throw std::out_of_range("penalty depth " + std::to_string(depth) +
                                " out of range [1, " + std::to_string(num_layers() - 1) + "]");
    const int from_cand = find_candidate(depth - 1, from);
    if (from_cand < 0)
        throw std::invalid_argument("'" + from + "' is not a candidate at depth " +
                                    std::to_string(depth - 1));
    const int to_cand = find_candidate(depth, to);
    if (to_cand < 0)
        throw std::invalid_argument("'" + to + "' is not a candidate at depth " +
                                    std::to_string(depth));
    return penalty_at(depth, from_cand, to_cand);
}

double CostModel::evaluate_path(const Path& path) const {
    return evaluate_path(std::span<const int>(to_indices(path)));
}

double CostModel::evaluate_path(std::span<const int> cand_indices) const {
    const int n = num_layers();
    if (static_cast<int>(cand_indices.size()) != n)
        throw std::invalid_argument("path has " + std::to_string(cand_indices.size()) +
                                    " choices for " + std::to_string(n) + " layers");
    double total = 0.0;
    for (int d = 0; d < n; ++d) {
        const int c = cand_indices[d];
        if (c < 0 || c >= candidate_count(d))
            throw std::invalid_argument("path choice at depth " + std::to_string(d) +
                                        " is not a candidate");
        // One add per layer: latency plus the penalty charged on entry. The
        // episode reward uses the same expression with the sign flipped, so
        // the two stay bit-identical.
        const double step = lat_[d][c] + (d > 0 ? penalty_at(d, cand_indices[d - 1], c) : 0.0);
        total += step;
    }
    return total;
}

BigUint CostModel::design_space_size() const {
    BigUint size = 1;
    for (int d = 0; d < num_layers(); ++d) size *= candidate_count(d);
    return size;
}

std::vector<std::string> CostModel::libraries() const {
    std::set<std::string> names;
    for (int d = 0; d < num_layers(); ++d)
        for (const ImplId& id : layers_[d].candidates)
            names.insert(implementations_.at(id).library);
    return {names.begin(), names.end()};
}

Path CostModel::to_path(std::span<const int> cand_indices) const {
    if (static_cast<int>(cand_indices.size()) != num_layers())
        throw std::invalid_argument("wrong index-path length");
    Path path;
    path.choices.reserve(cand_indices.size());
    for (int d = 0; d < num_layers(); ++d)
        path.choices.push_back(candidate_id(d, cand_indices[d]));
    return path;
}

std::vector<int> CostModel::to_indices(const Path& path) const {
    if (static_cast<int>(path.choices.size()) != num_layers())
        throw std::invalid_argument("path has " + std::to_string(path.choices.size()) +
                                    " choices for " + std::to_string(num_layers()) + " layers");
    std::vector<int> indices(path.choices.size());
    for (int d = 0; d < num_layers(); ++d) {
        indices[d] = find_candidate(d, path.choices[d]);
        if (indices[d] < 0)
            throw std::invalid_argument("'" + path.choices[d] +
                                        "' is not a candidate at depth " + std::to_string(d));
    }
    return indices;
}

bool CostModel::operator==(const CostModel& rhs) const {
    return name_ == rhs.name_ && implementations_ == rhs.implementations_ &&
           layers_ == rhs.layers_ && penalties_ == rhs.penalties_ &&
           metadata_ == rhs.metadata_;
}

}  // namespace qsel

#ifndef QSEL_BENCHGEN_HPP
#define QSEL_BENCHGEN_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qsel/cost_model.hpp"

namespace qsel {

// One synthetic acceleration library: where it applies and how fast it is.
struct LibraryProfile {
    std::string name;
    // layer type -> probability that this library covers a layer of that
    // type; "*" is the fallback for unlisted types (default 0).
    std::map<std::string, double> coverage;
    Processor processor = Processor::cpu();
    std::string layout = "NCHW";
    std::string blas_library;                        // empty = none
    std::pair<double, double> latency_range_ms = {0.1, 10.0};  // log-uniform

    double coverage_for(const std::string& layer_type) const;
};

struct GeneratorSpec {
    std::string name;  // optional; synthesized from the seed when empty
    std::uint64_t seed = 0;
    int num_layers = 1;
    std::vector<std::pair<std::string, double>> layer_type_mix = {{"convolution", 1.0}};
    std::vector<LibraryProfile> libraries;  // non-vanilla entries; a "vanilla"
                                            // entry overrides the built-in one
    int max_impls_per_layer = 13;
    std::pair<double, double> layout_conversion_penalty_ms = {0.05, 0.5};
    std::pair<double, double> processor_transfer_penalty_ms = {0.5, 5.0};
};

// Throws ValidationError on bad fields (num_layers < 1, probabilities
// outside [0, 1], non-positive ranges, ...).
void validate(const GeneratorSpec& spec);

// Builds a cost model from the spec, deterministically in the seed:
// a full-coverage vanilla library on CPU plus, per layer, one candidate per
// covering library (truncated at max_impls_per_layer). Junction penalties
// are derived from the tags — layout mismatch draws from the layout range,
// processor mismatch adds a draw from the transfer range — and frozen into
// the model's explicit penalty table.
CostModel generate(const GeneratorSpec& spec);

GeneratorSpec generator_spec_from_json(const nlohmann::json& doc, std::ostream* warn = nullptr);
GeneratorSpec load_generator_spec(std::istream& in, std::ostream* warn = nullptr);
GeneratorSpec load_generator_spec_file(const std::filesystem::path& path,
                                       std::ostream* warn = nullptr);

// Hand-built reference models with brute-force-verified structure:
//  - "local_minimum_trap":  the locally fastest middle layer loses to the
//    penalty-free path.
//  - "transfer_dominated":  GPU candidates beat CPU per layer but lose once
//    cross-processor transfers are charged.
//  - "missing_fc_fallback": the fast GPU library has no fully-connected
//    candidate, so the best path mixes it with vanilla.
//  - "three_library_mix":   the optimum needs three different libraries.
std::vector<CostModel> make_reference_models();

// Single reference model by name; throws ValidationError on unknown names.
CostModel reference_model(const std::string& name);

}  // namespace qsel

#endif  // QSEL_BENCHGEN_HPP

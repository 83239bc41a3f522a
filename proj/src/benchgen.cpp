#include "qsel/benchgen.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "qsel/errors.hpp"
#include "qsel/rng.hpp"

namespace qsel {

namespace {

using nlohmann::json;

void check_range(const std::pair<double, double>& range, const std::string& what) {
    if (!(range.first > 0.0) || !(range.second >= range.first))
        throw ValidationError(what + " range must satisfy 0 < lo <= hi");
}

std::string impl_id_for(const std::string& library, const std::string& layer_type) {
    return library + "_" + layer_type;
}

}  // namespace

double LibraryProfile::coverage_for(const std::string& layer_type) const {
    if (auto it = coverage.find(layer_type); it != coverage.end()) return it->second;
    if (auto it = coverage.find("*"); it != coverage.end()) return it->second;
    return 0.0;
}

void validate(const GeneratorSpec& spec) {
    if (spec.num_layers < 1) throw ValidationError("num_layers must be >= 1");
    if (spec.max_impls_per_layer < 1)
        throw ValidationError("max_impls_per_layer must be >= 1");
    if (spec.layer_type_mix.empty())
        throw ValidationError("layer_type_mix must not be empty");
    double weight_sum = 0.0;
    for (const auto& [type, weight] : spec.layer_type_mix) {
        if (type.empty()) throw ValidationError("layer type tag must not be empty");
        if (weight < 0.0) throw ValidationError("layer type weight must be >= 0");
        weight_sum += weight;
    }
    if (!(weight_sum > 0.0)) throw ValidationError("layer_type_mix weights sum to zero");

    std::set<std::string> names;
    for (const LibraryProfile& lib : spec.libraries) {
        if (lib.name.empty()) throw ValidationError("library name must not be empty");
        if (!names.insert(lib.name).second)
            throw ValidationError("duplicate library '" + lib.name + "'");
        for (const auto& [type, prob] : lib.coverage) {
            (void)type;
            if (prob < 0.0 || prob > 1.0)
                throw ValidationError("coverage probability of '" + lib.name +
                                      "' outside [0, 1]");
        }
        check_range(lib.latency_range_ms, "latency of '" + lib.name + "'");
    }
    check_range(spec.layout_conversion_penalty_ms, "layout conversion penalty");
    check_range(spec.processor_transfer_penalty_ms, "processor transfer penalty");
}

CostModel generate(const GeneratorSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);

    LibraryProfile vanilla;
    vanilla.name = "vanilla";
    vanilla.latency_range_ms = {1.0, 10.0};
    std::vector<const LibraryProfile*> others;
    for (const LibraryProfile& lib : spec.libraries) {
        if (lib.name == "vanilla") {
            vanilla = lib;
            vanilla.processor = Processor::cpu();  // the fallback always runs on CPU
        } else {
            others.push_back(&lib);
        }
    }

    double weight_sum = 0.0;
    for (const auto& [type, weight] : spec.layer_type_mix) weight_sum += weight;

    std::map<ImplId, ImplementationDescriptor> descriptors;
    auto descriptor_for = [&](const LibraryProfile& lib, const std::string& layer_type) {
        const ImplId id = impl_id_for(lib.name, layer_type);
        auto it = descriptors.find(id);
        if (it == descriptors.end()) {
            ImplementationDescriptor d;
            d.impl_id = id;
            d.library = lib.name;
            d.algorithm = layer_type;
            d.algorithm_impl = "default";
            d.processor = lib.processor;
            d.layout = lib.layout;
            d.blas_library = lib.blas_library;
            it = descriptors.emplace(id, std::move(d)).first;
        }
        return it->first;
    };

    std::vector<LayerSpec> layers;
    layers.reserve(spec.num_layers);
    for (int d = 0; d < spec.num_layers; ++d) {
        double pick = rng.uniform_real() * weight_sum;
        std::string layer_type = spec.layer_type_mix.back().first;
        for (const auto& [type, weight] : spec.layer_type_mix) {
            if (pick < weight) { layer_type = type; break; }
            pick -= weight;
        }

        LayerSpec layer;
        layer.depth = d;
        layer.layer_type = layer_type;

        const ImplId vanilla_id = descriptor_for(vanilla, layer_type);
        layer.candidates.push_back(vanilla_id);
        layer.latency_ms[vanilla_id] =
            rng.log_uniform(vanilla.latency_range_ms.first, vanilla.latency_range_ms.second);

        for (const LibraryProfile* lib : others) {
            if (static_cast<int>(layer.candidates.size()) >= spec.max_impls_per_layer) break;
            if (rng.uniform_real() >= lib->coverage_for(layer_type)) continue;
            const ImplId id = descriptor_for(*lib, layer_type);
            layer.candidates.push_back(id);
            layer.latency_ms[id] =
                rng.log_uniform(lib->latency_range_ms.first, lib->latency_range_ms.second);
        }
        layers.push_back(std::move(layer));
    }

    PenaltyTable penalties;
    for (int d = 1; d < spec.num_layers; ++d) {
        for (const ImplId& from : layers[d - 1].candidates) {
            const ImplementationDescriptor& from_desc = descriptors.at(from);
            for (const ImplId& to : layers[d].candidates) {
                const ImplementationDescriptor& to_desc = descriptors.at(to);
                double penalty = 0.0;
                if (from_desc.layout != to_desc.layout)
                    penalty += rng.uniform_range(spec.layout_conversion_penalty_ms.first,
                                                 spec.layout_conversion_penalty_ms.second);
                if (from_desc.processor != to_desc.processor)
                    penalty += rng.uniform_range(spec.processor_transfer_penalty_ms.first,
                                                 spec.processor_transfer_penalty_ms.second);
                if (penalty > 0.0) penalties.entries[{d, from, to}] = penalty;
            }
        }
    }

    std::string name = spec.name;
    if (name.empty()) {
        std::ostringstream n;
        n << "synthetic-s" << spec.seed << "-L" << spec.num_layers;
        name = n.str();
    }

    std::vector<ImplementationDescriptor> impls;
    impls.reserve(descriptors.size());
    for (auto& [id, d] : descriptors) { (void)id; impls.push_back(std::move(d)); }

    std::map<std::string, std::string> metadata;
    metadata["generator_seed"] = std::to_string(spec.seed);

    return CostModel(std::move(name), std::move(impls), std::move(layers),
                     std::move(penalties), std::move(metadata));
}

GeneratorSpec generator_spec_from_json(const json& doc, std::ostream* warn) {
    if (!doc.is_object()) throw ParseError("generator spec must be a JSON object");
    auto warn_keys = [&](const json& obj, std::initializer_list<const char*> known,
                         const char* context) {
        if (!warn) return;
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            bool found = false;
            for (const char* k : known)
                if (it.key() == k) { found = true; break; }
            if (!found)
                *warn << "warning: ignoring unknown key '" << it.key() << "' in " << context
                      << "\n";
        }
    };
    warn_keys(doc,
              {"name", "seed", "num_layers", "layer_type_mix", "libraries",
               "max_impls_per_layer", "layout_conversion_penalty_ms",
               "processor_transfer_penalty_ms"},
              "generator spec");

    auto range_from = [](const json& v, const char* what) -> std::pair<double, double> {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw ParseError(std::string(what) + " must be a [lo, hi] number pair");
        return {v[0].get<double>(), v[1].get<double>()};
    };

    GeneratorSpec spec;
    if (auto it = doc.find("name"); it != doc.end()) spec.name = it->get<std::string>();
    if (auto it = doc.find("seed"); it != doc.end()) {
        if (!it->is_number_integer()) throw ParseError("'seed' must be an integer");
        spec.seed = it->get<std::uint64_t>();
    }
    if (auto it = doc.find("num_layers"); it != doc.end()) {
        if (!it->is_number_integer()) throw ParseError("'num_layers' must be an integer");
        spec.num_layers = it->get<int>();
    }
    if (auto it = doc.find("layer_type_mix"); it != doc.end()) {
        if (!it->is_array()) throw ParseError("'layer_type_mix' must be an array");
        spec.layer_type_mix.clear();
        for (const json& e : *it) {
            warn_keys(e, {"type", "weight"}, "layer_type_mix entry");
            if (!e.is_object() || !e.contains("type") || !e.contains("weight"))
                throw ParseError("layer_type_mix entries need 'type' and 'weight'");
            spec.layer_type_mix.emplace_back(e["type"].get<std::string>(),
                                             e["weight"].get<double>());
        }
    }
    if (auto it = doc.find("libraries"); it != doc.end()) {
        if (!it->is_array()) throw ParseError("'libraries' must be an array");
        for (const json& e : *it) {
            warn_keys(e,
                      {"name", "coverage", "processor", "layout", "blas_library",
                       "latency_range_ms"},
                      "library entry");
            if (!e.is_object() || !e.contains("name"))
                throw ParseError("library entries need a 'name'");
            LibraryProfile lib;
            lib.name = e["name"].get<std::string>();
            if (auto c = e.find("coverage"); c != e.end()) {
                if (!c->is_object()) throw ParseError("'coverage' must be an object");
                for (auto m = c->begin(); m != c->end(); ++m)
                    lib.coverage[m.key()] = m.value().get<double>();
            }
            if (auto p = e.find("processor"); p != e.end())
                lib.processor = Processor::from_string(p->get<std::string>());
            if (auto l = e.find("layout"); l != e.end()) lib.layout = l->get<std::string>();
            if (auto b = e.find("blas_library"); b != e.end() && !b->is_null())
                lib.blas_library = b->get<std::string>();
            if (auto r = e.find("latency_range_ms"); r != e.end())
                lib.latency_range_ms = range_from(*r, "latency_range_ms");
            spec.libraries.push_back(std::move(lib));
        }
    }
    if (auto it = doc.find("max_impls_per_layer"); it != doc.end())
        spec.max_impls_per_layer = it->get<int>();
    if (auto it = doc.find("layout_conversion_penalty_ms"); it != doc.end())
        spec.layout_conversion_penalty_ms = range_from(*it, "layout_conversion_penalty_ms");
    if (auto it = doc.find("processor_transfer_penalty_ms"); it != doc.end())
        spec.processor_transfer_penalty_ms = range_from(*it, "processor_transfer_penalty_ms");
    return spec;
}

GeneratorSpec load_generator_spec(std::istream& in, std::ostream* warn) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed generator spec: ") + e.what());
    }
    return generator_spec_from_json(doc, warn);
}

GeneratorSpec load_generator_spec_file(const std::filesystem::path& path, std::ostream* warn) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return load_generator_spec(in, warn);
}

namespace {

struct FixtureBuilder {
    std::vector<ImplementationDescriptor> impls;
    std::vector<LayerSpec> layers;
    PenaltyTable penalties;

    void impl(const ImplId& id, const std::string& library, const std::string& algorithm,
              Processor processor, const std::string& layout) {
        impls.push_back({id, library, algorithm, "default", processor, layout, ""});
    }
    void layer(const std::string& type, std::vector<std::pair<ImplId, double>> cands) {
        LayerSpec l;
        l.depth = static_cast<int>(layers.size());
        l.layer_type = type;
        for (auto& [id, ms] : cands) {
            l.candidates.push_back(id);
            l.latency_ms[id] = ms;
        }
        layers.push_back(std::move(l));
    }
    void penalty(int depth, const ImplId& from, const ImplId& to, double ms) {
        penalties.entries[{depth, from, to}] = ms;
    }
    CostModel build(const std::string& name, const std::string& note) {
        return CostModel(name, std::move(impls), std::move(layers), std::move(penalties),
                         {{"note", note}});
    }
};

// The locally fastest middle implementation drags in a conversion penalty
// that the all-vanilla path avoids: optimum 2.8 ms, per-layer greedy 4.5 ms.
CostModel local_minimum_trap() {
    FixtureBuilder b;
    b.impl("vanilla", "vanilla", "convolution", Processor::cpu(), "NCHW");
    b.impl("blas_gemm", "blas", "convolution", Processor::cpu(), "NCHW");
    b.impl("turbo_wino", "turbo", "convolution", Processor::cpu(), "WHCN");
    b.impl("nnp_direct", "nnpack", "convolution", Processor::cpu(), "NCHW");
    b.layer("convolution", {{"vanilla", 1.0}, {"blas_gemm", 1.2}});
    b.layer("convolution", {{"vanilla", 0.8}, {"turbo_wino", 0.5}});
    b.layer("convolution", {{"vanilla", 1.0}, {"nnp_direct", 1.1}});
    b.penalty(1, "vanilla", "turbo_wino", 2.0);
    b.penalty(1, "blas_gemm", "turbo_wino", 2.0);
    return b.build("local_minimum_trap",
                   "fastest middle layer loses to the penalty-free path");
}

// GPU candidates are ~10x faster per layer, but every CPU<->GPU junction
// costs 5 ms, so the true optimum stays entirely on CPU (all vanilla).
CostModel transfer_dominated() {
    FixtureBuilder b;
    b.impl("vanilla_conv", "vanilla", "convolution", Processor::cpu(), "NCHW");
    b.impl("vanilla_pool", "vanilla", "pooling", Processor::cpu(), "NCHW");
    b.impl("vanilla_fc", "vanilla", "fc", Processor::cpu(), "NCHW");
    b.impl("gpu_conv", "gpu_dnn", "convolution", Processor::gpu(), "NCHW");
    b.layer("convolution", {{"vanilla_conv", 1.0}, {"gpu_conv", 0.1}});
    b.layer("pooling", {{"vanilla_pool", 0.6}});
    b.layer("convolution", {{"vanilla_conv", 1.2}, {"gpu_conv", 0.12}});
    b.layer("fc", {{"vanilla_fc", 0.9}});
    b.penalty(1, "gpu_conv", "vanilla_pool", 5.0);
    b.penalty(2, "vanilla_pool", "gpu_conv", 5.0);
    b.penalty(3, "gpu_conv", "vanilla_fc", 5.0);
    return b.build("transfer_dominated",
                   "per-layer GPU wins are wiped out by transfer penalties");
}

// The GPU library covers convolutions only (and is slower than vanilla on
// the first one), so its whole-library substitution is beaten by a mixed
// path; BSL must fall back to vanilla on the FC layer.
CostModel missing_fc_fallback() {
    FixtureBuilder b;
    b.impl("vanilla_conv", "vanilla", "convolution", Processor::cpu(), "NCHW");
    b.impl("vanilla_fc", "vanilla", "fc", Processor::cpu(), "NCHW");
    b.impl("gpu_conv", "gpu_dnn", "convolution", Processor::gpu(), "NCHW");
    b.layer("convolution", {{"vanilla_conv", 1.5}, {"gpu_conv", 2.5}});
    b.layer("convolution", {{"vanilla_conv", 1.6}, {"gpu_conv", 0.25}});
    b.layer("fc", {{"vanilla_fc", 2.0}});
    b.penalty(1, "vanilla_conv", "gpu_conv", 0.3);
    b.penalty(1, "gpu_conv", "vanilla_conv", 0.4);
    b.penalty(2, "gpu_conv", "vanilla_fc", 0.5);
    return b.build("missing_fc_fallback",
                   "GPU library lacks FC; the optimum mixes it with vanilla");
}

// Depthwise-style chain where the optimum combines a depthwise specialist,
// a GPU convolution library and vanilla; any 2-library path is >5% slower.
CostModel three_library_mix() {
    FixtureBuilder b;
    b.impl("vanilla_conv", "vanilla", "convolution", Processor::cpu(), "NCHW");
    b.impl("vanilla_dw", "vanilla", "depthwise", Processor::cpu(), "NCHW");
    b.impl("vanilla_relu", "vanilla", "relu", Processor::cpu(), "NCHW");
    b.impl("gpu_conv", "gpu_dnn", "convolution", Processor::gpu(), "NCHW");
    b.impl("arm_dw", "arm_cl", "depthwise", Processor::cpu(), "NCHW");
    b.layer("convolution", {{"vanilla_conv", 2.0}, {"gpu_conv", 0.4}});
    b.layer("depthwise", {{"vanilla_dw", 3.0}, {"arm_dw", 0.35}});
    b.layer("convolution", {{"vanilla_conv", 2.2}, {"gpu_conv", 0.5}});
    b.layer("relu", {{"vanilla_relu", 0.1}});
    b.penalty(1, "gpu_conv", "vanilla_dw", 0.25);
    b.penalty(1, "gpu_conv", "arm_dw", 0.25);
    b.penalty(2, "vanilla_dw", "gpu_conv", 0.25);
    b.penalty(2, "arm_dw", "gpu_conv", 0.25);
    b.penalty(3, "gpu_conv", "vanilla_relu", 0.25);
    return b.build("three_library_mix",
                   "optimum needs three libraries; two-library paths are >5% slower");
}

}  // namespace

std::vector<CostModel> make_reference_models() {
    std::vector<CostModel> models;
    models.push_back(local_minimum_trap());
    models.push_back(transfer_dominated());
    models.push_back(missing_fc_fallback());
    models.push_back(three_library_mix());
    return models;
}

CostModel reference_model(const std::string& name) {
    if (name == "local_minimum_trap") return local_minimum_trap();
    if (name == "transfer_dominated") return transfer_dominated();
    if (name == "missing_fc_fallback") return missing_fc_fallback();
    if (name == "three_library_mix") return three_library_mix();
    throw ValidationError("unknown reference model '" + name + "'");
}

}  // namespace qsel

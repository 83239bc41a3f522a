#include "qsel/model_io.hpp"

#include <fstream>
#include <ostream>

#include "qsel/errors.hpp"

namespace qsel {

namespace {

using nlohmann::json;

void warn_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                       const std::string& context, std::ostream* warn) {
    if (!warn) return;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool found = false;
        for (const char* k : known)
            if (it.key() == k) { found = true; break; }
        if (!found)
            *warn << "warning: ignoring unknown key '" << it.key() << "' in " << context << "\n";
    }
}

const json& require(const json& obj, const char* key, const std::string& context) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw ParseError("missing key '" + std::string(key) + "' in " + context);
    return *it;
}

std::string as_string(const json& v, const std::string& context) {
    if (!v.is_string()) throw ParseError(context + " must be a string");
    return v.get<std::string>();
}

double as_number(const json& v, const std::string& context) {
    if (!v.is_number()) throw ParseError(context + " must be a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& context) {
    if (!v.is_number_integer()) throw ParseError(context + " must be an integer");
    return v.get<int>();
}

}  // namespace

CostModel cost_model_from_json(const json& doc, std::ostream* warn) {
    if (!doc.is_object()) throw ParseError("cost model document must be a JSON object");
    warn_unknown_keys(doc, {"name", "implementations", "layers", "penalties", "metadata"},
                      "cost model document", warn);

    std::string name = as_string(require(doc, "name", "document"), "name");

    std::vector<ImplementationDescriptor> impls;
    const json& impls_doc = require(doc, "implementations", "document");
    if (!impls_doc.is_array()) throw ParseError("'implementations' must be an array");
    for (const json& e : impls_doc) {
        if (!e.is_object()) throw ParseError("implementation entry must be an object");
        warn_unknown_keys(e,
                          {"impl_id", "library", "algorithm", "algorithm_impl", "processor",
                           "layout", "blas_library"},
                          "implementation entry", warn);
        ImplementationDescriptor d;
        d.impl_id = as_string(require(e, "impl_id", "implementation entry"), "impl_id");
        d.library = as_string(require(e, "library", "implementation '" + d.impl_id + "'"),
                              "library");
        d.algorithm = as_string(require(e, "algorithm", "implementation '" + d.impl_id + "'"),
                                "algorithm");
        if (auto it = e.find("algorithm_impl"); it != e.end() && !it->is_null())
            d.algorithm_impl = as_string(*it, "algorithm_impl");
        if (auto it = e.find("processor"); it != e.end() && !it->is_null())
            d.processor = Processor::from_string(as_string(*it, "processor"));
        if (auto it = e.find("layout"); it != e.end() && !it->is_null())
            d.layout = as_string(*it, "layout");
        if (auto it = e.find("blas_library"); it != e.end() && !it->is_null())
            d.blas_library = as_string(*it, "blas_library");
        impls.push_back(std::move(d));
    }

    std::vector<LayerSpec> layers;
    const json& layers_doc = require(doc, "layers", "document");
    if (!layers_doc.is_array()) throw ParseError("'layers' must be an array");
    for (const json& e : layers_doc) {
        if (!e.is_object()) throw ParseError("layer entry must be an object");
        warn_unknown_keys(e, {"depth", "layer_type", "candidates", "latency_ms"},
                          "layer entry", warn);
        LayerSpec layer;
        layer.depth = as_int(require(e, "depth", "layer entry"), "depth");
        const std::string ctx = "layer at depth " + std::to_string(layer.depth);
        layer.layer_type = as_string(require(e, "layer_type", ctx), "layer_type");
        const json& cands = require(e, "candidates", ctx);
        if (!cands.is_array()) throw ParseError("'candidates' of " + ctx + " must be an array");
        for (const json& c : cands) layer.candidates.push_back(as_string(c, "candidate id"));
        const json& lats = require(e, "latency_ms", ctx);
        if (!lats.is_object()) throw ParseError("'latency_ms' of " + ctx + " must be an object");
        for (auto it = lats.begin(); it != lats.end(); ++it)
            layer.latency_ms[it.key()] = as_number(it.value(), "latency of '" + it.key() + "'");
        layers.push_back(std::move(layer));
    }

    PenaltyTable penalties;
    if (auto it = doc.find("penalties"); it != doc.end() && !it->is_null()) {
        if (!it->is_array()) throw ParseError("'penalties' must be an array");
        for (const json& e : *it) {
            if (!e.is_object()) throw ParseError("penalty entry must be an object");
            warn_unknown_keys(e, {"depth", "from", "to", "penalty_ms"}, "penalty entry", warn);
            PenaltyTable::Key key;
            key.depth = as_int(require(e, "depth", "penalty entry"), "penalty depth");
            key.from = as_string(require(e, "from", "penalty entry"), "penalty 'from'");
            key.to = as_string(require(e, "to", "penalty entry"), "penalty 'to'");
            const double ms = as_number(require(e, "penalty_ms", "penalty entry"), "penalty_ms");
            penalties.entries[key] = ms;
        }
    }

    std::map<std::string, std::string> metadata;
    if (auto it = doc.find("metadata"); it != doc.end() && !it->is_null()) {
        if (!it->is_object()) throw ParseError("'metadata' must be an object");
        for (auto m = it->begin(); m != it->end(); ++m) {
            if (m.value().is_string()) {
                metadata[m.key()] = m.value().get<std::string>();
            } else {
                if (warn)
                    *warn << "warning: coercing non-string metadata value '" << m.key()
                          << "' to text\n";
                metadata[m.key()] = m.value().dump();
            }
        }
    }

    return CostModel(std::move(name), std::move(impls), std::move(layers),
                     std::move(penalties), std::move(metadata));
}

nlohmann::json cost_model_to_json(const CostModel& model) {
    json doc;
    doc["name"] = model.name();

    json impls = json::array();
    for (const auto& [id, d] : model.implementations()) {
        json e;
        e["impl_id"] = d.impl_id;
        e["library"] = d.library;
        e["algorithm"] = d.algorithm;
        e["algorithm_impl"] = d.algorithm_impl;
        e["processor"] = d.processor.to_string();
        e["layout"] = d.layout;
        if (!d.blas_library.empty()) e["blas_library"] = d.blas_library;
        impls.push_back(std::move(e));
    }
    doc["implementations"] = std::move(impls);

    json layers = json::array();
    for (const LayerSpec& layer : model.layers()) {
        json e;
        e["depth"] = layer.depth;
        e["layer_type"] = layer.layer_type;
        e["candidates"] = layer.candidates;
        json lats;
        for (const ImplId& id : layer.candidates) lats[id] = layer.latency_ms.at(id);
        e["latency_ms"] = std::move(lats);
        layers.push_back(std::move(e));
    }
    doc["layers"] = std::move(layers);

    json pens = json::array();
    for (const auto& [key, ms] : model.penalties().entries) {
        json e;
        e["depth"] = key.depth;
        e["from"] = key.from;
        e["to"] = key.to;
        e["penalty_ms"] = ms;
        pens.push_back(std::move(e));
    }
    doc["penalties"] = std::move(pens);

    doc["metadata"] = model.metadata();
    return doc;
}

CostModel load_cost_model(std::istream& in, std::ostream* warn) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed cost model document: ") + e.what());
    }
    return cost_model_from_json(doc, warn);
}

CostModel load_cost_model_file(const std::filesystem::path& path, std::ostream* warn) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return load_cost_model(in, warn);
}

void save_cost_model(const CostModel& model, std::ostream& out) {
    out << cost_model_to_json(model).dump(2) << "\n";
}

void save_cost_model_file(const CostModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    save_cost_model(model, out);
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace qsel

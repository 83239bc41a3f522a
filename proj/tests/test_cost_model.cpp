#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "qsel/benchgen.hpp"
#include "qsel/cost_model.hpp"
#include "qsel/errors.hpp"
#include "qsel/model_io.hpp"
#include "test_util.hpp"

using namespace qsel;

namespace {

const char* kThreeLayerDoc = R"({
  "name": "tiny",
  "implementations": [
    {"impl_id": "van", "library": "vanilla", "algorithm": "convolution",
     "algorithm_impl": "direct", "processor": "CPU", "layout": "NCHW"},
    {"impl_id": "gemm", "library": "blas", "algorithm": "convolution",
     "algorithm_impl": "im2col", "processor": "CPU", "layout": "NCHW",
     "blas_library": "openblas"}
  ],
  "layers": [
    {"depth": 0, "layer_type": "convolution", "candidates": ["van", "gemm"],
     "latency_ms": {"van": 1.0, "gemm": 0.4}},
    {"depth": 1, "layer_type": "convolution", "candidates": ["van"],
     "latency_ms": {"van": 2.0}},
    {"depth": 2, "layer_type": "convolution", "candidates": ["van", "gemm"],
     "latency_ms": {"van": 1.5, "gemm": 0.9}}
  ],
  "penalties": [
    {"depth": 2, "from": "van", "to": "gemm", "penalty_ms": 0.5}
  ],
  "metadata": {"platform": "test"}
})";

CostModel parse(const std::string& text, std::ostream* warn = nullptr) {
    std::istringstream in(text);
    return load_cost_model(in, warn);
}

CostModel single_layer_model() {
    return CostModel("one", {{"v", "vanilla", "fc", {}, Processor::cpu(), "NCHW", ""}},
                     {{0, "fc", {"v"}, {{"v", 0.7}}}}, {});
}

}  // namespace

TEST_CASE("well-formed document loads with all fields") {
    const CostModel m = parse(kThreeLayerDoc);
    CHECK(m.num_layers() == 3);
    CHECK(m.name() == "tiny");
    CHECK(m.layer(0).candidates.size() == 2);
    CHECK(m.layer(1).candidates.size() == 1);
    CHECK(m.descriptor("gemm").blas_library == "openblas");
    CHECK(m.descriptor("gemm").processor.is_cpu());
    CHECK(m.metadata().at("platform") == "test");
    CHECK(m.vanilla_candidate(0) == 0);
    CHECK(m.latency(0, 1) == 0.4);
}

TEST_CASE("validation errors name the first violated invariant") {
    nlohmann::json doc = nlohmann::json::parse(kThreeLayerDoc);

    SUBCASE("missing vanilla fallback") {
        doc["layers"][1]["candidates"] = {"gemm"};
        doc["layers"][1]["latency_ms"] = {{"gemm", 2.0}};
        CHECK_THROWS_WITH_AS(cost_model_from_json(doc),
                             doctest::Contains("missing vanilla fallback at depth 1"),
                             ValidationError);
    }
    SUBCASE("non-positive latency") {
        doc["layers"][0]["latency_ms"]["van"] = 0.0;
        CHECK_THROWS_WITH_AS(cost_model_from_json(doc),
                             doctest::Contains("non-positive latency"), ValidationError);
    }
    SUBCASE("dangling impl_id") {
        doc["layers"][0]["candidates"].push_back("ghost");
        doc["layers"][0]["latency_ms"]["ghost"] = 1.0;
        CHECK_THROWS_WITH_AS(cost_model_from_json(doc),
                             doctest::Contains("unknown impl_id 'ghost'"), ValidationError);
    }
    SUBCASE("depth gap") {
        doc["layers"][2]["depth"] = 5;
        CHECK_THROWS_WITH_AS(cost_model_from_json(doc), doctest::Contains("contiguous"),
                             ValidationError);
    }
    SUBCASE("duplicate depth reads as a branch") {
        doc["layers"][2]["depth"] = 1;
        CHECK_THROWS_WITH_AS(cost_model_from_json(doc), doctest::Contains("branched"),
                             ValidationError);
    }
    SUBCASE("negative penalty") {
        doc["penalties"][0]["penalty_ms"] = -0.1;
        CHECK_THROWS_AS(cost_model_from_json(doc), ValidationError);
    }
    SUBCASE("penalty referencing a non-candidate") {
        doc["penalties"][0]["depth"] = 1;  // gemm is not a candidate at depth 1
        CHECK_THROWS_WITH_AS(cost_model_from_json(doc), doctest::Contains("not a candidate"),
                             ValidationError);
    }
    SUBCASE("empty model") {
        doc["layers"] = nlohmann::json::array();
        doc["penalties"] = nlohmann::json::array();
        CHECK_THROWS_WITH_AS(cost_model_from_json(doc), doctest::Contains("no layers"),
                             ValidationError);
    }
}

TEST_CASE("malformed documents raise ParseError") {
    std::istringstream in("{not json");
    CHECK_THROWS_AS(load_cost_model(in), ParseError);
    CHECK_THROWS_AS(parse(R"({"name": 3})"), ParseError);
}

TEST_CASE("unknown keys are skipped with a warning") {
    nlohmann::json doc = nlohmann::json::parse(kThreeLayerDoc);
    doc["comment"] = "ignore me";
    std::ostringstream warn;
    const CostModel m = cost_model_from_json(doc, &warn);
    CHECK(m.num_layers() == 3);
    CHECK(warn.str().find("unknown key 'comment'") != std::string::npos);
}

TEST_CASE("penalty lookup") {
    const CostModel m = parse(kThreeLayerDoc);
    CHECK(m.penalty(1, "van", "van") == 0.0);   // no stored entry
    CHECK(m.penalty(2, "van", "gemm") == 0.5);  // stored entry
    CHECK_THROWS_AS(m.penalty(0, "van", "van"), std::out_of_range);
    CHECK_THROWS_AS(m.penalty(3, "van", "van"), std::out_of_range);
    CHECK_THROWS_AS(m.penalty(1, "van", "gemm"), std::invalid_argument);
    CHECK_THROWS_AS(m.penalty(2, "nope", "van"), std::invalid_argument);
}

TEST_CASE("evaluate_path sums latencies and junction penalties") {
    SUBCASE("plain summation") {
        const CostModel m = parse(kThreeLayerDoc);
        CHECK(m.evaluate_path(Path{{"van", "van", "van"}}) == doctest::Approx(4.5));
        CHECK(m.evaluate_path(Path{{"van", "van", "gemm"}}) ==
              doctest::Approx(1.0 + 2.0 + 0.9 + 0.5));
    }
    SUBCASE("single layer") {
        CHECK(single_layer_model().evaluate_path(Path{{"v"}}) == 0.7);
    }
    SUBCASE("invalid paths are rejected") {
        const CostModel m = parse(kThreeLayerDoc);
        CHECK_THROWS_AS(m.evaluate_path(Path{{"van", "van"}}), std::invalid_argument);
        CHECK_THROWS_AS(m.evaluate_path(Path{{"van", "gemm", "van"}}), std::invalid_argument);
    }
}

TEST_CASE("local-minimum trap: cheapest middle layer loses overall") {
    const CostModel m = reference_model("local_minimum_trap");
    const Path red{{"vanilla", "turbo_wino", "vanilla"}};
    const Path blue{{"vanilla", "vanilla", "vanilla"}};
    CHECK(m.evaluate_path(red) == doctest::Approx(4.5));
    CHECK(m.evaluate_path(blue) == doctest::Approx(2.8));

    const auto best = test::oracle_brute_force(m);
    CHECK(best.latency == doctest::Approx(2.8));
    CHECK(m.to_path(best.choices) == blue);
}

TEST_CASE("design_space_size") {
    SUBCASE("2^3 paths") {
        CHECK(reference_model("local_minimum_trap").design_space_size() == 8);
    }
    SUBCASE("13 candidates over 10 layers") {
        std::vector<ImplementationDescriptor> impls;
        std::vector<LayerSpec> layers;
        for (int c = 0; c < 13; ++c) {
            ImplementationDescriptor d;
            d.impl_id = "i" + std::to_string(c);
            d.library = c == 0 ? "vanilla" : "lib" + std::to_string(c);
            d.algorithm = "convolution";
            impls.push_back(std::move(d));
        }
        for (int depth = 0; depth < 10; ++depth) {
            LayerSpec layer;
            layer.depth = depth;
            layer.layer_type = "convolution";
            for (int c = 0; c < 13; ++c) {
                layer.candidates.push_back("i" + std::to_string(c));
                layer.latency_ms["i" + std::to_string(c)] = 1.0 + c;
            }
            layers.push_back(std::move(layer));
        }
        const CostModel m("wide", std::move(impls), std::move(layers), {});
        CHECK(m.design_space_size() == BigUint("137858491849"));
    }
    SUBCASE("degenerate single choice") {
        CHECK(single_layer_model().design_space_size() == 1);
    }
}

TEST_CASE("properties over random models") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        CAPTURE(seed);
        const CostModel m = test::random_model(seed);

        // evaluate_path matches the independent fold exactly; the path count
        // matches design_space_size; every path costs at least as much as
        // the largest per-layer minimum
        double max_single = 0.0;
        for (int d = 0; d < m.num_layers(); ++d) {
            double fastest = m.latency(d, 0);
            for (int c = 1; c < m.candidate_count(d); ++c)
                fastest = std::min(fastest, m.latency(d, c));
            max_single = std::max(max_single, fastest);
        }
        std::int64_t paths = 0;
        test::for_each_path(m, [&](const std::vector<int>& path) {
            ++paths;
            const double got = m.evaluate_path(std::span<const int>(path));
            REQUIRE(got == test::oracle_eval(m, path));
            REQUIRE(got >= max_single);
        });
        REQUIRE(m.design_space_size() == paths);

        // dropping all penalties never increases a path's cost
        std::vector<ImplementationDescriptor> impls;
        for (const auto& [id, d] : m.implementations()) {
            (void)id;
            impls.push_back(d);
        }
        const CostModel no_pen(m.name(), std::move(impls), m.layers(), PenaltyTable{},
                               m.metadata());
        test::for_each_path(m, [&](const std::vector<int>& path) {
            REQUIRE(no_pen.evaluate_path(std::span<const int>(path)) <=
                    m.evaluate_path(std::span<const int>(path)));
        });
    }
}

TEST_CASE("load -> save -> load is the identity on semantic content") {
    auto roundtrip = [](const CostModel& m) {
        std::ostringstream out;
        save_cost_model(m, out);
        std::istringstream in(out.str());
        const CostModel again = load_cost_model(in);
        CHECK(again == m);

        std::ostringstream out2;
        save_cost_model(again, out2);
        CHECK(out.str() == out2.str());
    };
    roundtrip(parse(kThreeLayerDoc));
    for (const CostModel& m : make_reference_models()) roundtrip(m);
    for (std::uint64_t seed = 50; seed < 55; ++seed) roundtrip(test::random_model(seed));
}

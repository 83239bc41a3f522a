#include "qsel/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qsel/baselines.hpp"
#include "qsel/benchgen.hpp"
#include "qsel/compare.hpp"
#include "qsel/errors.hpp"
#include "qsel/model_io.hpp"
#include "qsel/reports.hpp"

namespace qsel {

namespace {

namespace fs = std::filesystem;

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_json_file(const fs::path& path, const nlohmann::json& doc) {
    write_text_file(path, doc.dump(2) + "\n");
}

fs::path prepare_output_dir(const std::string& dir) {
    fs::path path(dir);
    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
    return path;
}

void print_path(const CostModel& model, const Path& path) {
    for (std::size_t d = 0; d < path.choices.size(); ++d) {
        const ImplementationDescriptor& impl = model.descriptor(path.choices[d]);
        std::cout << "  " << d << ": " << path.choices[d] << " [" << impl.library << ", "
                  << impl.processor.to_string() << ", " << impl.layout << "]\n";
    }
}

struct SearchFlags {
    std::string model_path;
    std::string output_dir = ".";
    SearchConfig config;
    std::string tie_break = "first";

    void apply_tie_break() { config.tie_break = tie_break_from_string(tie_break); }
};

void add_config_flags(CLI::App* cmd, SearchFlags& flags, bool with_episodes_and_seed) {
    cmd->add_option("--alpha", flags.config.alpha, "Learning rate")
        ->capture_default_str();
    cmd->add_option("--gamma", flags.config.gamma, "Discount factor")
        ->capture_default_str();
    cmd->add_option("--replay-capacity", flags.config.replay_capacity,
                    "Experience replay buffer size")
        ->capture_default_str();
    cmd->add_option("--tie-break", flags.tie_break, "Argmax tie-break: first|random")
        ->capture_default_str();
    if (with_episodes_and_seed) {
        cmd->add_option("--episodes", flags.config.total_episodes, "Episode budget")
            ->capture_default_str();
        cmd->add_option("--seed", flags.config.seed, "RNG seed")->capture_default_str();
    }
}

void cmd_generate(const std::string& spec_path, const std::string& output_path) {
    const GeneratorSpec spec = load_generator_spec_file(spec_path, &std::cerr);
    const CostModel model = generate(spec);
    save_cost_model_file(model, output_path);

    std::cout << "wrote " << output_path << " (" << model.num_layers() << " layers, "
              << model.implementations().size() << " implementations)\n";
    std::cout << "design space: " << model.design_space_size().str() << " paths\n";
    std::cout << "candidates per layer:";
    for (int d = 0; d < model.num_layers(); ++d) std::cout << ' ' << model.candidate_count(d);
    std::cout << "\n";
}

void cmd_search(const SearchFlags& flags) {
    const CostModel model = load_cost_model_file(flags.model_path, &std::cerr);
    const SearchResult result = run_search(model, flags.config);

    const fs::path dir = prepare_output_dir(flags.output_dir);
    write_json_file(dir / "search_result.json",
                    search_result_to_json(model, flags.config, result));
    write_text_file(dir / "learning_curve.csv", learning_curve_csv(result.learning_curve));

    std::cout << "best latency: " << result.best_latency_ms << " ms\n";
    std::cout << "best path:\n";
    print_path(model, result.best_path);
    std::cout << "final greedy latency: " << result.final_greedy_latency_ms << " ms\n";
    std::cout << "wrote " << (dir / "search_result.json").string() << " and "
              << (dir / "learning_curve.csv").string() << "\n";
}

void cmd_baseline(const std::string& method, const SearchFlags& flags,
                  std::uint64_t brute_cap, double dp_gamma) {
    const CostModel model = load_cost_model_file(flags.model_path, &std::cerr);

    BaselineReport report;
    if (method == "dp") {
        DpSolution dp = dp_oracle(model, dp_gamma);
        report.method = BaselineMethod::DpOracle;
        report.path = std::move(dp.path);
        report.latency_ms = dp.latency_ms;
    } else if (method == "brute") {
        report = brute_force(model, brute_cap);
    } else if (method == "rs") {
        report = random_search(model, flags.config.total_episodes, flags.config.seed);
    } else if (method == "bsl") {
        report = best_single_library(model);
    } else {
        throw ValidationError("unknown baseline method '" + method +
                              "'; expected dp|brute|rs|bsl");
    }

    const fs::path dir = prepare_output_dir(flags.output_dir);
    const fs::path report_path = dir / ("baseline_" + method + ".json");
    write_json_file(report_path, baseline_report_to_json(model, report));
    if (!report.curve.empty())
        write_text_file(dir / ("baseline_" + method + "_curve.csv"),
                        learning_curve_csv(report.curve));

    std::cout << to_string(report.method) << " latency: " << report.latency_ms << " ms\n";
    print_path(model, report.path);
    if (report.per_library) {
        std::cout << "per-library latencies:\n";
        for (const auto& [library, ms] : *report.per_library)
            std::cout << "  " << library << ": " << ms << " ms\n";
    }
    std::cout << "wrote " << report_path.string() << "\n";
}

void cmd_compare(const SearchFlags& flags, const CompareOptions& options) {
    const CostModel model = load_cost_model_file(flags.model_path, &std::cerr);
    const CompareReport report = run_comparison(model, options);

    const fs::path dir = prepare_output_dir(flags.output_dir);
    write_json_file(dir / "compare_report.json", compare_report_to_json(report));
    write_text_file(dir / "compare_summary.csv", compare_summary_csv(report));
    write_text_file(dir / "compare_runs.csv", compare_runs_csv(report));

    std::cout << "model: " << report.model_name << " | budget " << report.budget_episodes
              << " episodes | " << report.seeds.size() << " seeds\n";
    std::cout << "vanilla path: " << report.vanilla_latency_ms << " ms\n";
    for (const CompareRow& row : report.rows)
        std::cout << "  " << row.method << ": " << row.latency_ms << " ms ("
                  << row.speedup_vs_vanilla << "x vs vanilla, " << row.speedup_vs_bsl
                  << "x vs bsl)\n";
    std::cout << "wrote " << (dir / "compare_report.json").string() << "\n";
}

}  // namespace

int run_cli(std::vector<std::string> args) {
    CLI::App app{"Per-layer implementation search over profiled cost models"};
    app.require_subcommand(1);

    // generate
    std::string spec_path, output_path;
    CLI::App* generate_cmd =
        app.add_subcommand("generate", "Generate a synthetic cost model from a spec");
    generate_cmd->add_option("spec", spec_path, "Generator spec JSON")->required();
    generate_cmd->add_option("output", output_path, "Output cost model path")->required();

    // search
    SearchFlags search_flags;
    CLI::App* search_cmd = app.add_subcommand("search", "Run the Q-learning search");
    search_cmd->add_option("model", search_flags.model_path, "Cost model JSON")->required();
    search_cmd->add_option("--output-dir", search_flags.output_dir, "Output directory")
        ->capture_default_str();
    add_config_flags(search_cmd, search_flags, true);

    // baseline
    SearchFlags baseline_flags;
    std::string baseline_method;
    std::uint64_t brute_cap = 1'000'000;
    double dp_gamma = 1.0;
    CLI::App* baseline_cmd =
        app.add_subcommand("baseline", "Run one baseline: dp|brute|rs|bsl");
    baseline_cmd->add_option("method", baseline_method, "dp|brute|rs|bsl")->required();
    baseline_cmd->add_option("model", baseline_flags.model_path, "Cost model JSON")->required();
    baseline_cmd->add_option("--output-dir", baseline_flags.output_dir, "Output directory")
        ->capture_default_str();
    baseline_cmd->add_option("--episodes", baseline_flags.config.total_episodes,
                             "Episode budget (rs)")
        ->capture_default_str();
    baseline_cmd->add_option("--seed", baseline_flags.config.seed, "RNG seed (rs)")
        ->capture_default_str();
    baseline_cmd->add_option("--cap", brute_cap, "Path cap (brute)")->capture_default_str();
    baseline_cmd->add_option("--gamma", dp_gamma, "Discount factor (dp)")
        ->capture_default_str();

    // compare
    SearchFlags compare_flags;
    CompareOptions compare_options;
    bool sequential = false;
    CLI::App* compare_cmd =
        app.add_subcommand("compare", "Search vs random vs BSL vs exact oracles");
    compare_cmd->add_option("model", compare_flags.model_path, "Cost model JSON")->required();
    compare_cmd->add_option("--output-dir", compare_flags.output_dir, "Output directory")
        ->capture_default_str();
    compare_cmd->add_option("--budget", compare_options.budget, "Episodes per seeded run")
        ->capture_default_str();
    compare_cmd
        ->add_option("--seeds", compare_options.seeds, "Comma-separated seed list")
        ->delimiter(',')
        ->capture_default_str();
    compare_cmd->add_option("--brute-cap", compare_options.brute_cap,
                            "Path cap for the brute-force row")
        ->capture_default_str();
    compare_cmd->add_flag("--sequential", sequential, "Disable concurrent runs");
    add_config_flags(compare_cmd, compare_flags, false);

    try {
        args.insert(args.begin(), "qsel");
        std::vector<const char*> argv;
        argv.reserve(args.size());
        for (const std::string& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());

        if (generate_cmd->parsed()) {
            cmd_generate(spec_path, output_path);
        } else if (search_cmd->parsed()) {
            search_flags.apply_tie_break();
            cmd_search(search_flags);
        } else if (baseline_cmd->parsed()) {
            cmd_baseline(baseline_method, baseline_flags, brute_cap, dp_gamma);
        } else if (compare_cmd->parsed()) {
            compare_flags.apply_tie_break();
            compare_options.base = compare_flags.config;
            compare_options.parallel = !sequential;
            cmd_compare(compare_flags, compare_options);
        }
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace qsel

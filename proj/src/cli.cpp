#include "aoicontract/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <vector>

#include <CLI11.hpp>

#include "aoicontract/config.hpp"
#include "aoicontract/errors.hpp"
#include "aoicontract/experiments.hpp"
#include "aoicontract/flsim.hpp"
#include "aoicontract/report.hpp"

namespace aoicontract::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config;
    std::string out_dir = "out";
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::string variant;
    std::string menu;  // verify only
};

std::ofstream open_output(const fs::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + path.string());
    return os;
}

void write_text(const fs::path& path, const std::string& text) {
    auto os = open_output(path);
    os << text << '\n';
}

int execute(const std::string& command, const Options& opt, std::ostream& out) {
    std::vector<std::string> overrides = opt.sets;
    if (opt.seed) overrides.push_back("seed=" + std::to_string(*opt.seed));
    if (!opt.variant.empty()) overrides.push_back("solver.variant=\"" + opt.variant + "\"");

    const auto doc = load_config_document(opt.config, overrides);
    const ScenarioConfig cfg = scenario_from_json(doc);

    const fs::path dir(opt.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("--out: cannot create " + dir.string() + ": " + ec.message());
    write_text(dir / "effective_config.json", doc.dump(2));

    if (command == "solve") {
        const auto res = solve_scenario(cfg, cfg.mechanism);
        write_text(dir / "solve_result.json", to_json(res, cfg.timing).dump(2));
        out << to_string(res.mechanism) << " provider_utility=" << format_number(res.provider_utility)
            << " feasible=" << (res.menu.feasible ? "true" : "false") << '\n';
    } else if (command == "verify") {
        const auto types = build_population(cfg);
        ContractMenu menu;
        if (opt.menu.empty()) {
            // round trip through the serialized form
            const auto res = solve_scenario(cfg, cfg.mechanism);
            menu = menu_from_json(nlohmann::json::parse(to_json(res, cfg.timing).dump()));
        } else {
            std::ifstream in(opt.menu);
            if (!in) throw ConfigError("--menu: cannot open " + opt.menu);
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(in);
            } catch (const nlohmann::json::parse_error& e) {
                throw ConfigError("--menu: " + std::string(e.what()));
            }
            menu = menu_from_json(j);
        }
        if (menu.items.size() != types.size()) {
            throw ConfigError("menu.items: has " + std::to_string(menu.items.size()) + " entries, population has " +
                              std::to_string(types.size()));
        }
        menu = verify_ic_ir(std::move(menu), types);
        nlohmann::ordered_json j;
        j["menu"] = to_json(menu);
        j["lemma1"] = to_json(check_lemma1(menu, types));
        write_text(dir / "verify.json", j.dump(2));
        out << "feasible=" << (menu.feasible ? "true" : "false") << " violations=" << menu.violations.size() << '\n';
    } else if (command == "choice-matrix") {
        auto os = open_output(dir / "choice_matrix.csv");
        write_choice_matrix_csv(os, choice_matrix(cfg));
    } else if (command == "sweep-a") {
        const auto sweep = sweep_duration(cfg, cfg.a_values);
        auto os = open_output(dir / "sweep_a.csv");
        write_sweep_a_csv(os, sweep);
        write_text(dir / "sweep_a.json", to_json(sweep).dump(2));
    } else if (command == "sweep-alpha") {
        const auto sweep = sweep_alpha(cfg, cfg.alpha_values);
        auto os = open_output(dir / "sweep_alpha.csv");
        write_sweep_alpha_csv(os, sweep);
        write_text(dir / "sweep_alpha.json", to_json(sweep).dump(2));
    } else if (command == "compare") {
        const auto rows = compare_mechanisms(cfg);
        auto os = open_output(dir / "compare.csv");
        write_compare_csv(os, rows);
        write_text(dir / "compare_timing.json", comparison_timing_json(rows).dump(2));
        for (const auto& r : rows) {
            if (!r.solved) throw Infeasible(std::string(to_string(r.mechanism)) + ": " + r.error);
        }
    } else if (command == "simulate-timing") {
        const auto avg = flsim::average_round_timing(cfg.workflow);
        write_text(dir / "timing_summary.json", flsim::summary_json(avg, cfg.workflow.epochs));
        auto os = open_output(dir / "trace.jsonl");
        const auto trace = flsim::emit_trace(cfg.workflow, 0);
        flsim::write_trace_jsonl(os, trace, 0);
        out << "t_u=" << format_number(avg.t_u) << " t_c=" << format_number(avg.t_c)
            << " t=" << format_number(avg.t) << '\n';
    }
    return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Age-of-information contract design for federated-learning workers"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    Options opt;
    std::uint64_t seed = 0;
    app.add_option("--config", opt.config, "Scenario JSON file (missing keys take defaults)");
    app.add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
    app.add_option("--set", opt.sets, "Override, dotted.key=value (repeatable)")->take_all();
    auto* seed_opt = app.add_option("--seed", seed, "Random seed");
    app.add_option("--variant", opt.variant, "Freshness closed forms")->check(CLI::IsMember({"paper", "oracle"}));

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"solve", "Compute the contract menu for the configured mechanism"},
        {"verify", "Check IC/IR of a menu (from --menu or a fresh solve)"},
        {"choice-matrix", "Utility of every type for every CA menu item"},
        {"sweep-a", "Solve CA/CC/CS over the idle-duration values"},
        {"sweep-alpha", "Solve CA over the preference-factor values"},
        {"compare", "Provider and worker utilities of CA, CC and CS"},
        {"simulate-timing", "Simulate cross-chain FL rounds and report t = t_u + t_c"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        if (name == "verify") sub->add_option("--menu", opt.menu, "solve_result.json to verify");
    }

    std::vector<const char*> argv{"aoicontract"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    if (seed_opt->count() > 0) opt.seed = seed;

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return execute(command, opt, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Infeasible& e) {
        err << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    }
}

}  // namespace aoicontract::cli

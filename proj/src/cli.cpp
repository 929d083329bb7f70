#include "ibn/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ibn/agent_runtime.hpp"
#include "ibn/error.hpp"
#include "ibn/eval_harness.hpp"
#include "ibn/oracle.hpp"
#include "json_util.hpp"
#include "text_util.hpp"

#ifndef IBN_DEFAULT_DATA_DIR
#define IBN_DEFAULT_DATA_DIR "."
#endif

namespace ibn {

namespace fs = std::filesystem;
using detail::json;

fs::path default_data_dir() {
    if (const char* env = std::getenv("IBN_DATA_DIR"); env && *env) return fs::path(env);
    return fs::path(IBN_DEFAULT_DATA_DIR);
}

RunConfig default_run_config() {
    const auto data = default_data_dir();
    RunConfig c;
    c.state = data / "topology" / "metro_6g.json";
    c.prompts = data / "prompts";
    c.scenarios = data / "scenarios" / "benchmark12.json";
    c.backend = "scripted:" + (data / "fixtures" / "benchmark_suite.json").string();
    return c;
}

namespace {

struct Flags {
    std::string config_file;
    std::string state, prompts, scenarios, backend, out, system;
    double l_max = 0.0, kappa_max = 0.0;
    int repeats = 0, jobs = 0;
    std::vector<CLI::Option*> options;

    bool given(const std::string& name) const {
        for (auto* o : options) {
            if (o->get_name() == name && o->count() > 0) return true;
        }
        return false;
    }
};

void add_common(CLI::App& cmd, Flags& f) {
    f.options.push_back(cmd.add_option("--config", f.config_file, "Run-config file (JSON); flags win over it"));
    f.options.push_back(cmd.add_option("--state", f.state, "Network state document"));
    f.options.push_back(cmd.add_option("--prompts", f.prompts, "Prompt directory"));
    f.options.push_back(cmd.add_option("--scenarios", f.scenarios, "Scenario suite"));
    f.options.push_back(cmd.add_option("--backend", f.backend, "live | scripted:<fixture>"));
    f.options.push_back(cmd.add_option("--l-max", f.l_max, "Sector load admission limit (%)"));
    f.options.push_back(cmd.add_option("--kappa-max", f.kappa_max, "Node compute headroom limit (%)"));
    f.options.push_back(cmd.add_option("--repeats", f.repeats, "Runs per scenario"));
    f.options.push_back(cmd.add_option("--jobs", f.jobs, "Parallel scenario workers"));
    f.options.push_back(cmd.add_option("--out", f.out, "Write the machine report / transcript here"));
}

fs::path resolve(const fs::path& p, const fs::path& base) {
    if (p.empty() || p.is_absolute()) return p;
    return base / p;
}

RunConfig build_config(const Flags& f) {
    RunConfig c = default_run_config();
    if (!f.config_file.empty()) {
        std::ifstream in(f.config_file, std::ios::binary);
        if (!in) throw ConfigError("cannot open run config: " + f.config_file);
        std::stringstream buf;
        buf << in.rdbuf();
        const json doc = detail::parse_json(buf.str(), "run config");
        if (!doc.is_object()) throw ConfigError("run config must be a JSON object");
        const fs::path base = fs::path(f.config_file).parent_path();
        try {
            for (const auto& [key, v] : doc.items()) {
                if (key == "state") c.state = resolve(v.get<std::string>(), base);
                else if (key == "prompts") c.prompts = resolve(v.get<std::string>(), base);
                else if (key == "scenarios") c.scenarios = resolve(v.get<std::string>(), base);
                else if (key == "backend") {
                    auto b = v.get<std::string>();
                    if (detail::starts_with(b, "scripted:")) b = "scripted:" + resolve(b.substr(9), base).string();
                    c.backend = b;
                } else if (key == "l_max") c.l_max = v.get<double>();
                else if (key == "kappa_max") c.kappa_max = v.get<double>();
                else if (key == "repeats") c.repeats = v.get<int>();
                else if (key == "jobs") c.jobs = v.get<int>();
                else if (key == "out") c.out = resolve(v.get<std::string>(), base);
                else if (key == "system") c.system = v.get<std::string>();
                else throw ConfigError("run config: unknown key '" + key + "'");
            }
        } catch (const json::exception& e) {
            throw ConfigError(std::string("run config: ") + e.what());
        }
    }
    if (f.given("--state")) c.state = f.state;
    if (f.given("--prompts")) c.prompts = f.prompts;
    if (f.given("--scenarios")) c.scenarios = f.scenarios;
    if (f.given("--backend")) c.backend = f.backend;
    if (f.given("--l-max")) c.l_max = f.l_max;
    if (f.given("--kappa-max")) c.kappa_max = f.kappa_max;
    if (f.given("--repeats")) c.repeats = f.repeats;
    if (f.given("--jobs")) c.jobs = f.jobs;
    if (f.given("--out")) c.out = fs::path(f.out);
    if (!f.system.empty()) c.system = f.system;

    if (c.repeats < 1) throw ConfigError("--repeats must be >= 1");
    if (c.jobs < 1) throw ConfigError("--jobs must be >= 1");
    if (c.l_max <= 0.0 || c.kappa_max <= 0.0) throw ConfigError("--l-max and --kappa-max must be positive");
    return c;
}

Thresholds thresholds_of(const RunConfig& c) {
    Thresholds t;
    t.l_max = c.l_max;
    t.kappa_max = c.kappa_max;
    return t;
}

NetworkState load_state_checked(const RunConfig& c) {
    if (!fs::exists(c.state)) throw ConfigError("state file not found: " + c.state.string());
    return load_state_file(c.state);
}

std::unique_ptr<BackendFactory> open_backend(const RunConfig& c) {
    std::string sel = c.backend;
    if (detail::starts_with(sel, "scripted:")) {
        fs::path p = sel.substr(9);
        if (p.is_relative() && !fs::exists(p) && fs::exists(default_data_dir() / p)) p = default_data_dir() / p;
        if (!fs::exists(p)) throw ConfigError("script fixture not found: " + p.string());
        sel = "scripted:" + p.string();
    }
    return make_backend_factory(sel);
}

SystemKind system_of(const RunConfig& c) {
    const auto s = parse_system(c.system);
    if (!s) throw ConfigError("unknown system '" + c.system + "'");
    return *s;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream o(path, std::ios::binary);
    if (!o) throw ConfigError("cannot write " + path.string());
    o << text;
    if (!o) throw ConfigError("write failed: " + path.string());
}

struct Harness {
    NetworkState state;
    std::vector<Scenario> suite;
    std::unique_ptr<BackendFactory> backend;
    HarnessContext ctx;
};

/// Loads only what the requested systems need.
std::unique_ptr<Harness> make_harness(const RunConfig& c, const std::vector<SystemKind>& systems) {
    auto h = std::make_unique<Harness>();
    h->state = load_state_checked(c);
    if (!fs::exists(c.scenarios)) throw ConfigError("scenario suite not found: " + c.scenarios.string());
    h->suite = load_scenarios_file(c.scenarios, h->state);
    h->ctx.state = h->state;
    h->ctx.thresholds = thresholds_of(c);
    const bool any_llm = std::any_of(systems.begin(), systems.end(), uses_llm);
    if (any_llm) {
        h->ctx.prompts = load_prompts(c.prompts, true);
        h->backend = open_backend(c);
        h->ctx.backend = h->backend.get();
    }
    for (auto s : systems) {
        if (s == SystemKind::no_prompts) h->ctx.generic_prompts = load_prompts(c.prompts / "ablation_generic", false);
        if (s == SystemKind::direct_llm) h->ctx.direct_prompt = load_prompt_file(c.prompts / "direct_llm.md");
    }
    return h;
}

std::string read_stdin() {
    std::stringstream buf;
    buf << std::cin.rdbuf();
    return std::string(detail::trim(buf.str()));
}

// ---------------------------------------------------------------------------

int cmd_run_intent(const RunConfig& c, std::string intent, const std::string& scenario_id, int top,
                   std::ostream& out) {
    const auto state = load_state_checked(c);
    std::optional<Scenario> scenario;
    if (!scenario_id.empty()) {
        for (auto& s : load_scenarios_file(c.scenarios, state)) {
            if (s.id == scenario_id) scenario = s;
        }
        if (!scenario) throw ConfigError("scenario '" + scenario_id + "' not in " + c.scenarios.string());
        if (intent.empty()) intent = scenario->intent_text;
    }
    if (intent.empty()) intent = read_stdin();
    if (intent.empty()) throw ConfigError("no intent given");

    const auto system = system_of(c);
    const auto thresholds = thresholds_of(c);
    const IntentProfile profile = scenario ? scoring_profile(*scenario, state) : classify_intent(intent, state);

    std::optional<SliceConfiguration> produced;
    if (system == SystemKind::oracle || system == SystemKind::rule_based) {
        std::vector<RankedConfiguration> ranking;
        if (system == SystemKind::oracle) {
            ranking = solve(state, profile, thresholds);
        } else {
            const auto d = rule_based_provision(intent, state, thresholds);
            out << "Rule-based: " << d.rationale << "\n";
            ranking = solve(state, d.profile, thresholds);
        }
        const int n = std::min<int>(std::max(top, 1), static_cast<int>(ranking.size()));
        for (int i = 0; i < n; ++i) {
            const auto& r = ranking[i];
            out << "#" << r.rank << " " << describe(r.config) << "  U=" << round_to(r.breakdown.utility, 3)
                << "  latency=" << r.latency_ms << "ms" << (r.constraints.feasible ? "" : "  (infeasible)") << "\n";
        }
        produced = ranking.front().config;
    } else {
        HarnessContext ctx;
        ctx.state = state;
        ctx.thresholds = thresholds;
        ctx.prompts = load_prompts(c.prompts, true);
        if (system == SystemKind::no_prompts) ctx.generic_prompts = load_prompts(c.prompts / "ablation_generic", false);
        if (system == SystemKind::direct_llm) ctx.direct_prompt = load_prompt_file(c.prompts / "direct_llm.md");
        const auto options = react_options_for(system, ctx);
        auto factory = open_backend(c);
        auto backend = factory->open(to_string(system), scenario ? scenario->id : std::string("intent"));
        Session session(*backend);
        const PromptSet& prompts = system == SystemKind::no_prompts ? *ctx.generic_prompts : ctx.prompts;
        const auto t = run_react(intent, state, session, prompts, options);
        out << render_trace(t);
        if (c.out) write_file(*c.out, transcript_to_json(t) + "\n");
        if (t.outcome == Outcome::error) return 1;
        if (t.outcome == Outcome::finished) produced = t.final_config;
    }

    if (!produced) {
        out << "No configuration provisioned\n";
        return 0;
    }
    const auto b = compute_utility(*produced, profile, state);
    const auto k = check_constraints(*produced, profile, state, thresholds);
    out << "Score: S_lat=" << b.s_latency << " S_res=" << b.s_resource << " S_cong=" << round_to(b.s_congestion, 4)
        << " weights=(" << b.weights.latency << ", " << b.weights.resource << ", " << b.weights.congestion << ")"
        << (k.feasible ? "" : " constraints violated") << "\n";
    if (scenario) {
        out << "Semantic accuracy vs golden: " << semantic_accuracy(produced, scenario->golden) << "\n";
    }
    SliceConfiguration shown = *produced;
    shown.slice_id.reset();
    char u[16];
    std::snprintf(u, sizeof u, "%.2f", round_to(b.utility, 2));
    out << "Final: (" << describe(shown) << "), U=" << u << "\n";
    return 0;
}

int cmd_benchmark(const RunConfig& c, std::ostream& out) {
    const auto system = system_of(c);
    auto h = make_harness(c, {system});
    const auto rep = run_benchmark(h->suite, system, h->ctx, c.repeats, c.jobs);
    out << emit_report(rep, ReportFormat::table);
    if (c.out) write_file(*c.out, emit_report(rep, ReportFormat::machine));
    return 0;
}

int cmd_compare(const RunConfig& c, std::ostream& out) {
    const auto systems = comparison_systems();
    auto h = make_harness(c, systems);
    std::vector<BenchmarkReport> reports;
    for (auto s : systems) reports.push_back(run_benchmark(h->suite, s, h->ctx, c.repeats, c.jobs));
    out << emit_comparison(reports, ReportFormat::table);
    if (c.out) write_file(*c.out, emit_comparison(reports, ReportFormat::machine));
    return 0;
}

int cmd_ablate(const RunConfig& c, std::ostream& out) {
    std::vector<SystemKind> systems;
    for (auto v : ablation_variants()) systems.push_back(system_for(v));
    auto h = make_harness(c, systems);
    std::vector<std::pair<AblationVariant, BenchmarkReport>> reports;
    for (auto v : ablation_variants()) reports.emplace_back(v, run_ablation(v, h->suite, h->ctx, c.repeats, c.jobs));
    out << emit_ablation(reports, ReportFormat::table);
    if (c.out) write_file(*c.out, emit_ablation(reports, ReportFormat::machine));
    return 0;
}

int cmd_oracle(const RunConfig& c, const std::string& intent, const std::string& scenario_id, int top,
               std::ostream& out) {
    const auto state = load_state_checked(c);
    const auto thresholds = thresholds_of(c);
    std::vector<std::pair<std::string, IntentProfile>> jobs;
    if (!intent.empty()) {
        jobs.emplace_back("intent", classify_intent(intent, state));
    } else {
        for (const auto& s : load_scenarios_file(c.scenarios, state)) {
            if (scenario_id.empty() || s.id == scenario_id) jobs.emplace_back(s.id, scoring_profile(s, state));
        }
        if (jobs.empty()) throw ConfigError("scenario '" + scenario_id + "' not in " + c.scenarios.string());
    }
    json doc = json::array();
    for (const auto& [name, profile] : jobs) {
        const auto ranking = solve(state, profile, thresholds);
        out << name << " [" << to_string(profile.traffic_class) << ", beta=" << to_string(profile.bandwidth)
            << ", tau_req=" << profile.tau_req_ms << "ms]\n";
        const int n = std::min<int>(std::max(top, 1), static_cast<int>(ranking.size()));
        json rows = json::array();
        for (int i = 0; i < n; ++i) {
            const auto& r = ranking[i];
            out << "  #" << r.rank << " " << describe(r.config) << "  U=" << round_to(r.breakdown.utility, 3)
                << "  latency=" << r.latency_ms << "ms" << (r.constraints.feasible ? "" : "  (infeasible)") << "\n";
            rows.push_back({{"rank", r.rank},
                            {"sector", r.config.sector_id},
                            {"band", std::string(to_string(r.config.band))},
                            {"node", r.config.node_id},
                            {"utility", r.breakdown.utility},
                            {"feasible", r.constraints.feasible}});
        }
        doc.push_back({{"name", name}, {"candidates", ranking.size()}, {"ranking", std::move(rows)}});
    }
    if (c.out) write_file(*c.out, doc.dump(2) + "\n");
    return 0;
}

int cmd_validate_state(const RunConfig& c, std::ostream& out) {
    const auto state = load_state_checked(c);
    out << "OK: " << c.state.string() << " (" << state.sectors.size() << " sectors, " << state.nodes.size()
        << " nodes)\n";
    return 0;
}

int cmd_validate_prompts(const RunConfig& c, bool generic, std::ostream& out) {
    const fs::path dir = generic ? c.prompts / "ablation_generic" : c.prompts;
    load_prompts(dir, !generic);
    if (!generic) load_prompt_file(dir / "direct_llm.md");
    out << "OK: " << dir.string() << (generic ? " (marker check disabled)" : "") << "\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Intent-based slice provisioning: agent runs, benchmarks and oracle queries", "ibnorch"};
    app.require_subcommand(1);

    Flags flags;
    std::string intent, scenario_id;
    int top = 5;
    bool generic = false;

    auto* run = app.add_subcommand("run-intent", "Provision one intent and print the reasoning trace");
    add_common(*run, flags);
    run->add_option("intent", intent, "Intent text (read from stdin when omitted)");
    run->add_option("--system", flags.system, "multi_agent, monolithic, rule_based, direct_llm, oracle, ...");
    run->add_option("--scenario-id", scenario_id, "Take the intent and golden from the suite");
    run->add_option("--top", top, "Ranking rows shown for oracle/rule_based");

    auto* bench = app.add_subcommand("benchmark", "Run one system over the scenario suite");
    add_common(*bench, flags);
    bench->add_option("--system", flags.system, "System to evaluate");

    auto* compare = app.add_subcommand("compare", "Multi-agent vs monolithic, rule-based and direct LLM");
    add_common(*compare, flags);

    auto* ablate = app.add_subcommand("ablate", "Full system vs component ablations");
    add_common(*ablate, flags);

    auto* oracle = app.add_subcommand("oracle", "Exhaustive ranking without any LLM call");
    add_common(*oracle, flags);
    oracle->add_option("--intent", intent, "Classify and rank a free-text intent");
    oracle->add_option("--scenario-id", scenario_id, "Rank one suite scenario (default: all)");
    oracle->add_option("--top", top, "Ranking rows shown");

    auto* vstate = app.add_subcommand("validate-state", "Check a network state document");
    add_common(*vstate, flags);

    auto* vprompts = app.add_subcommand("validate-prompts", "Check the prompt directory");
    add_common(*vprompts, flags);
    vprompts->add_flag("--generic", generic, "Check prompts/ablation_generic with markers disabled");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        const RunConfig c = build_config(flags);
        if (run->parsed()) return cmd_run_intent(c, intent, scenario_id, top, out);
        if (bench->parsed()) return cmd_benchmark(c, out);
        if (compare->parsed()) return cmd_compare(c, out);
        if (ablate->parsed()) return cmd_ablate(c, out);
        if (oracle->parsed()) return cmd_oracle(c, intent, scenario_id, top, out);
        if (vstate->parsed()) return cmd_validate_state(c, out);
        if (vprompts->parsed()) return cmd_validate_prompts(c, generic, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace ibn

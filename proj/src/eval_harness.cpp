#include "ibn/eval_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "ibn/error.hpp"
#include "ibn/oracle.hpp"
#include "json_util.hpp"

namespace ibn {

using detail::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) throw ParseError(where + ": unknown field '" + key + "'");
    }
}

const json& required(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
    return obj.at(key);
}

std::string required_string(const json& obj, const char* key, const std::string& where) {
    const auto& v = required(obj, key, where);
    if (!v.is_string()) throw ParseError(where + ": field '" + key + "' must be a string");
    return v.get<std::string>();
}

Scenario parse_scenario(const json& j, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": scenario must be an object");
    reject_unknown(j, {"id", "category", "intent_text", "golden", "declared_beta", "notes", "provenance"}, where);
    Scenario s;
    s.id = required_string(j, "id", where);
    if (s.id.empty()) throw ValidationError(where + ": empty id");
    const auto where_id = where + " (" + s.id + ")";

    const auto category = required_string(j, "category", where_id);
    const auto cls = parse_traffic_class(category);
    if (!cls) throw ValidationError(where_id + ": unknown category '" + category + "'");
    s.category = *cls;

    s.intent_text = required_string(j, "intent_text", where_id);
    if (s.intent_text.empty()) throw ValidationError(where_id + ": empty intent_text");

    const auto beta_text = required_string(j, "declared_beta", where_id);
    const auto beta = parse_bandwidth_category(beta_text);
    if (!beta) throw ValidationError(where_id + ": unknown declared_beta '" + beta_text + "'");
    s.declared_beta = *beta;

    const auto& g = required(j, "golden", where_id);
    if (!g.is_object()) throw ParseError(where_id + ": golden must be an object");
    reject_unknown(g, {"sector", "band", "node"}, where_id + ".golden");
    s.golden.sector_id = required_string(g, "sector", where_id + ".golden");
    const auto band_text = required_string(g, "band", where_id + ".golden");
    const auto band = parse_band(band_text);
    if (!band) throw ValidationError(where_id + ": unknown golden band '" + band_text + "'");
    s.golden.band = *band;
    s.golden.node_id = required_string(g, "node", where_id + ".golden");

    if (j.contains("notes")) s.notes = required_string(j, "notes", where_id);
    const auto prov = j.contains("provenance") ? required_string(j, "provenance", where_id) : std::string("authored");
    if (prov == "reference") s.provenance = Provenance::reference;
    else if (prov == "authored") s.provenance = Provenance::authored;
    else throw ValidationError(where_id + ": provenance must be 'reference' or 'authored'");
    return s;
}

}  // namespace

std::vector<Scenario> load_scenarios(std::string_view document, const NetworkState& state) {
    const json doc = detail::parse_json(document, "scenario suite");
    const json* list = &doc;
    if (doc.is_object()) {
        reject_unknown(doc, {"scenarios"}, "scenario suite");
        list = &required(doc, "scenarios", "scenario suite");
    }
    if (!list->is_array()) throw ParseError("scenario suite: expected a list of scenarios");

    std::vector<Scenario> out;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < list->size(); ++i) {
        auto s = parse_scenario(list->at(i), "scenarios[" + std::to_string(i) + "]");
        if (!seen.insert(s.id).second) throw ValidationError("duplicate scenario id '" + s.id + "'");
        try {
            validate_configuration(state, s.golden);
        } catch (const Error& e) {
            throw ValidationError("scenario " + s.id + ": golden does not fit the topology: " + e.what());
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<Scenario> load_scenarios_file(const std::filesystem::path& path, const NetworkState& state) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open scenario suite: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return load_scenarios(buf.str(), state);
}

IntentProfile scoring_profile(const Scenario& s, const NetworkState& state) {
    IntentProfile p;
    p.raw_text = s.intent_text;
    p.traffic_class = s.category;
    p.bandwidth = s.declared_beta;
    p.tau_req_ms = extract_tau_req(s.intent_text, s.category);
    p.target_sector = extract_target_sector(s.intent_text, state);
    return p;
}

double semantic_accuracy(const std::optional<SliceConfiguration>& produced, const SliceConfiguration& golden) {
    if (!produced) return 0.0;
    const int matches = (produced->sector_id == golden.sector_id) + (produced->band == golden.band) +
                        (produced->node_id == golden.node_id);
    if (matches == 3) return 1.0;
    if (matches == 2) return 0.5;
    return 0.0;
}

bool hybrid_success(double accuracy, double utility) { return accuracy >= 0.5 && utility >= 0.7 - 1e-9; }

std::string_view to_string(SystemKind kind) {
    switch (kind) {
        case SystemKind::multi_agent: return "multi_agent";
        case SystemKind::monolithic: return "monolithic";
        case SystemKind::rule_based: return "rule_based";
        case SystemKind::direct_llm: return "direct_llm";
        case SystemKind::oracle: return "oracle";
        case SystemKind::no_prompts: return "no_prompts";
        case SystemKind::no_specialists: return "no_specialists";
        case SystemKind::no_react: return "no_react";
    }
    return "multi_agent";
}

std::optional<SystemKind> parse_system(std::string_view text) {
    for (auto k : {SystemKind::multi_agent, SystemKind::monolithic, SystemKind::rule_based, SystemKind::direct_llm,
                   SystemKind::oracle, SystemKind::no_prompts, SystemKind::no_specialists, SystemKind::no_react}) {
        if (text == to_string(k)) return k;
    }
    if (text == "full") return SystemKind::multi_agent;
    return std::nullopt;
}

std::string_view display_name(SystemKind kind) {
    switch (kind) {
        case SystemKind::multi_agent: return "Proposed Multi-Agent";
        case SystemKind::monolithic: return "Monolithic Agent";
        case SystemKind::rule_based: return "Rule-Based System";
        case SystemKind::direct_llm: return "Direct LLM";
        case SystemKind::oracle: return "Oracle";
        case SystemKind::no_prompts: return "Remove Prompts";
        case SystemKind::no_specialists: return "Remove Specialists";
        case SystemKind::no_react: return "Remove ReAct";
    }
    return "";
}

bool uses_llm(SystemKind kind) { return kind != SystemKind::oracle && kind != SystemKind::rule_based; }

ReactOptions react_options_for(SystemKind system, const HarnessContext& ctx) {
    ReactOptions o;
    o.k_max = ctx.k_max;
    o.thresholds = ctx.thresholds;
    switch (system) {
        case SystemKind::multi_agent:
            break;
        case SystemKind::no_prompts:
            if (!ctx.generic_prompts) throw ConfigError("no_prompts needs the generic prompt set");
            break;
        case SystemKind::monolithic:
            o.system_prompt = ctx.prompts.merged();
            o.specialists_enabled = false;
            o.inject_state = true;
            break;
        case SystemKind::no_specialists:
            o.specialists_enabled = false;
            o.inject_state = true;
            break;
        case SystemKind::no_react:
            o.specialists_enabled = false;
            o.inject_state = true;
            o.k_max = 1;
            break;
        case SystemKind::direct_llm:
            if (!ctx.direct_prompt) throw ConfigError("direct_llm needs the direct prompt");
            o.system_prompt = *ctx.direct_prompt;
            o.specialists_enabled = false;
            o.inject_state = true;
            o.k_max = 1;
            break;
        case SystemKind::oracle:
        case SystemKind::rule_based:
            throw ConfigError(std::string(to_string(system)) + " does not use the agent runtime");
    }
    return o;
}

namespace {

EvaluationRecord base_record(const Scenario& s, SystemKind system) {
    EvaluationRecord r;
    r.scenario_id = s.id;
    r.category = s.category;
    r.system = system;
    return r;
}

void score(EvaluationRecord& r, const Scenario& s, const IntentProfile& profile, const NetworkState& state) {
    r.semantic_accuracy = semantic_accuracy(r.produced, s.golden);
    r.utility = 0.0;
    if (r.produced) {
        try {
            r.utility = compute_utility(*r.produced, profile, state).utility;
        } catch (const Error& e) {
            r.error = e.what();
        }
    }
    r.hybrid_success = hybrid_success(r.semantic_accuracy, r.utility);
}

}  // namespace

std::vector<EvaluationRecord> run_scenario(const Scenario& s, SystemKind system, const HarnessContext& ctx,
                                           int repeats) {
    if (repeats < 1) throw ConfigError("repeats must be >= 1");
    const auto profile = scoring_profile(s, ctx.state);
    std::vector<EvaluationRecord> out;

    if (!uses_llm(system)) {
        auto r = base_record(s, system);
        r.outcome = std::string(to_string(Outcome::finished));
        try {
            if (system == SystemKind::oracle) {
                r.produced = solve(ctx.state, profile, ctx.thresholds).front().config;
            } else {
                r.produced = rule_based_provision(s.intent_text, ctx.state, ctx.thresholds).config;
            }
        } catch (const Error& e) {
            r.outcome = std::string(to_string(Outcome::error));
            r.error = e.what();
        }
        score(r, s, profile, ctx.state);
        for (int i = 0; i < repeats; ++i) {
            r.run = i;
            out.push_back(r);
        }
        return out;
    }

    if (!ctx.backend) throw ConfigError(std::string(to_string(system)) + " needs an LLM backend");
    const auto options = react_options_for(system, ctx);
    const PromptSet& prompts = system == SystemKind::no_prompts ? *ctx.generic_prompts : ctx.prompts;
    for (int i = 0; i < repeats; ++i) {
        auto r = base_record(s, system);
        r.run = i;
        try {
            auto backend = ctx.backend->open(to_string(system), s.id);
            Session session(*backend);
            const auto t = run_react(s.intent_text, ctx.state, session, prompts, options);
            if (t.outcome == Outcome::finished) r.produced = t.final_config;
            if (r.produced) r.produced->slice_id.reset();
            r.tokens = t.usage.total_tokens();
            r.wall_seconds = t.usage.wall_seconds;
            r.iterations = t.iterations();
            r.outcome = std::string(to_string(t.outcome));
            r.error = t.error;
        } catch (const Error& e) {
            r.outcome = std::string(to_string(Outcome::error));
            r.error = e.what();
        }
        score(r, s, profile, ctx.state);
        out.push_back(std::move(r));
    }
    return out;
}

Stat mean_std(const std::vector<double>& v) {
    Stat s;
    if (v.empty()) return s;
    // Offsetting by the first value keeps the mean of identical runs exact.
    double dev = 0.0;
    for (double x : v) dev += x - v.front();
    s.mean = v.front() + dev / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return s;
}

BenchmarkReport summarize(SystemKind system, std::vector<EvaluationRecord> records) {
    BenchmarkReport rep;
    rep.system = system;
    rep.records = std::move(records);

    std::vector<std::string> order;
    std::map<std::string, std::vector<const EvaluationRecord*>> groups;
    for (const auto& r : rep.records) {
        auto& g = groups[r.scenario_id];
        if (g.empty()) order.push_back(r.scenario_id);
        g.push_back(&r);
    }

    std::vector<double> acc, util, tok, wall, iters;
    double successes = 0.0;
    for (const auto& id : order) {
        const auto& g = groups[id];
        ScenarioRow row;
        row.scenario_id = id;
        row.category = g.front()->category;
        std::vector<double> a, u, t, w, it, ok;
        for (const auto* r : g) {
            a.push_back(r->semantic_accuracy);
            u.push_back(r->utility);
            t.push_back(static_cast<double>(r->tokens));
            w.push_back(r->wall_seconds);
            it.push_back(r->iterations);
            ok.push_back(r->hybrid_success ? 1.0 : 0.0);
            successes += r->hybrid_success ? 1.0 : 0.0;
        }
        row.accuracy = mean_std(a).mean;
        row.utility = mean_std(u).mean;
        row.tokens = mean_std(t).mean;
        row.wall_seconds = mean_std(w).mean;
        row.iterations = mean_std(it).mean;
        row.success_rate = mean_std(ok).mean;
        acc.push_back(row.accuracy);
        util.push_back(row.utility);
        tok.push_back(row.tokens);
        wall.push_back(row.wall_seconds);
        iters.push_back(row.iterations);
        rep.rows.push_back(row);
    }
    rep.summary.accuracy = mean_std(acc);
    rep.summary.utility = mean_std(util);
    rep.summary.tokens = mean_std(tok);
    rep.summary.wall_seconds = mean_std(wall);
    rep.summary.iterations = mean_std(iters);
    rep.summary.success_rate = rep.records.empty() ? 0.0 : successes / static_cast<double>(rep.records.size());
    return rep;
}

BenchmarkReport run_benchmark(const std::vector<Scenario>& suite, SystemKind system, const HarnessContext& ctx,
                              int repeats, int jobs) {
    if (repeats < 1) throw ConfigError("repeats must be >= 1");
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
    if (uses_llm(system)) {
        if (!ctx.backend) throw ConfigError(std::string(to_string(system)) + " needs an LLM backend");
        react_options_for(system, ctx);  // asset check before any run
    }

    std::vector<std::vector<EvaluationRecord>> per_scenario(suite.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    const auto worker = [&] {
        for (std::size_t i = next++; i < suite.size(); i = next++) {
            try {
                per_scenario[i] = run_scenario(suite[i], system, ctx, repeats);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const int n_threads = std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(suite.size(), 1)));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<EvaluationRecord> records;
    for (auto& v : per_scenario) {
        for (auto& r : v) records.push_back(std::move(r));
    }
    return summarize(system, std::move(records));
}

std::string_view to_string(AblationVariant v) {
    switch (v) {
        case AblationVariant::full: return "full";
        case AblationVariant::no_prompts: return "no_prompts";
        case AblationVariant::no_specialists: return "no_specialists";
        case AblationVariant::no_react: return "no_react";
    }
    return "full";
}

SystemKind system_for(AblationVariant v) {
    switch (v) {
        case AblationVariant::full: return SystemKind::multi_agent;
        case AblationVariant::no_prompts: return SystemKind::no_prompts;
        case AblationVariant::no_specialists: return SystemKind::no_specialists;
        case AblationVariant::no_react: return SystemKind::no_react;
    }
    return SystemKind::multi_agent;
}

BenchmarkReport run_ablation(AblationVariant variant, const std::vector<Scenario>& suite, const HarnessContext& ctx,
                             int repeats, int jobs) {
    return run_benchmark(suite, system_for(variant), ctx, repeats, jobs);
}

std::vector<SystemKind> comparison_systems() {
    return {SystemKind::multi_agent, SystemKind::monolithic, SystemKind::rule_based, SystemKind::direct_llm};
}

std::vector<AblationVariant> ablation_variants() {
    return {AblationVariant::full, AblationVariant::no_prompts, AblationVariant::no_specialists,
            AblationVariant::no_react};
}

}  // namespace ibn

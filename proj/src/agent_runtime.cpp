#include "ibn/agent_runtime.hpp"

#include <fstream>
#include <sstream>

#include "ibn/error.hpp"
#include "json_util.hpp"
#include "text_util.hpp"

namespace ibn {

using detail::json;

// ---------------------------------------------------------------------------
// Prompts

std::string PromptSet::merged() const {
    return "# Orchestration\n\n" + orchestrator + "\n\n# Radio access expertise\n\n" + ran_specialist +
           "\n\n# Core network expertise\n\n" + core_specialist;
}

const std::string& PromptSet::specialist(std::string_view name) const {
    static const std::string empty;
    if (name == kRanSpecialist) return ran_specialist;
    if (name == kCoreSpecialist) return core_specialist;
    return empty;
}

std::vector<std::pair<std::string, std::vector<std::string>>> required_markers() {
    return {
        {"orchestrator.md",
         {std::string(kConsultRule), "THOUGHT:", "ACTION: CALL_AGENT", "ACTION: PROVISION_SLICE", "ACTION: FINISH"}},
        {"ran_specialist.md", {"RECOMMENDATION:", "WARNING:"}},
        {"core_specialist.md", {"RECOMMENDATION:"}},
    };
}

std::string load_prompt_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PromptError("cannot read prompt file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

PromptSet load_prompts(const std::filesystem::path& directory, bool check_markers) {
    const auto markers = required_markers();
    std::vector<std::string> missing_files;
    for (const auto& [file, _] : markers) {
        if (!std::filesystem::is_regular_file(directory / file)) missing_files.push_back(file);
    }
    if (!missing_files.empty()) {
        std::string msg = "prompt directory " + directory.string() + " is missing:";
        for (const auto& f : missing_files) msg += " " + f;
        throw PromptError(msg);
    }

    PromptSet set;
    set.orchestrator = load_prompt_file(directory / "orchestrator.md");
    set.ran_specialist = load_prompt_file(directory / "ran_specialist.md");
    set.core_specialist = load_prompt_file(directory / "core_specialist.md");

    std::vector<std::string> problems;
    const std::string* texts[] = {&set.orchestrator, &set.ran_specialist, &set.core_specialist};
    for (std::size_t i = 0; i < markers.size(); ++i) {
        const auto& [file, required] = markers[i];
        if (detail::trim(*texts[i]).empty()) {
            problems.push_back(file + " is empty");
            continue;
        }
        if (!check_markers) continue;
        for (const auto& m : required) {
            if (texts[i]->find(m) == std::string::npos) problems.push_back(file + " lacks \"" + m + "\"");
        }
    }
    if (!problems.empty()) {
        std::string msg = "invalid prompt set in " + directory.string() + ":";
        for (const auto& p : problems) msg += "\n  " + p;
        throw PromptError(msg);
    }
    return set;
}

// ---------------------------------------------------------------------------
// Specialists

std::string build_specialist_message(std::string_view request, const NetworkState& state) {
    if (request.empty()) throw ValidationError("specialist request is empty");
    std::string msg = "ORCHESTRATOR REQUEST:\n";
    msg += request;
    msg += "\n\nCURRENT NETWORK STATE:\n";
    msg += serialize_state(state);
    msg += "\n\nProvide your expert recommendation based on this state.";
    return msg;
}

Consultation consult_specialist(std::string_view agent_name, std::string_view request, const NetworkState& state,
                                const PromptSet& prompts, Session& session, double temperature) {
    const auto& prompt = prompts.specialist(agent_name);
    if (prompt.empty()) {
        return {"ERROR: unknown agent '" + std::string(agent_name) + "'; available agents are " +
                    std::string(kRanSpecialist) + " and " + std::string(kCoreSpecialist),
                false};
    }
    const std::vector<ChatMessage> history = {
        {Role::system, prompt},
        {Role::user, build_specialist_message(request, state)},
    };
    return {session.complete(history, temperature).text, true};
}

// ---------------------------------------------------------------------------
// ReAct loop

std::string_view to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::finished: return "finished";
        case Outcome::iteration_limit: return "iteration_limit";
        case Outcome::error: return "error";
    }
    return "error";
}

int AgentTranscript::specialist_calls() const {
    int n = 0;
    for (const auto& e : entries) {
        for (const auto& s : e.steps) n += s.specialist_call ? 1 : 0;
    }
    return n;
}

namespace {

constexpr std::string_view kObs = "Observation: ";

SliceConfiguration provision(const AgentAction& action, NetworkState& working, const Thresholds& th) {
    const auto parsed = parse_slice_configs(*action.ran_config, *action.core_config);
    SliceConfiguration cfg{parsed.sector_id, parsed.band, parsed.node_id, action.slice_id};
    validate_configuration(working, cfg);
    const auto& sector = working.sector(cfg.sector_id);
    if (sector.load_percent > th.l_max) {
        throw ProvisioningError("sector " + cfg.sector_id + " load exceeds the admission limit");
    }
    const auto& node = working.node(cfg.node_id);
    if (node.compute_load_percent > th.kappa_max) {
        throw ProvisioningError("node " + cfg.node_id + " compute load exceeds the headroom limit");
    }
    working = apply_provisioning(working, cfg);
    return cfg;
}

}  // namespace

AgentTranscript run_react(std::string_view intent_text, const NetworkState& state, Session& session,
                          const PromptSet& prompts, const ReactOptions& options) {
    if (detail::trim(intent_text).empty()) throw ValidationError("intent text is empty");
    if (options.k_max < 1) throw ValidationError("k_max must be >= 1");

    AgentTranscript t;
    t.intent = std::string(intent_text);
    const std::size_t calls_before = session.calls().size();

    std::string user = t.intent;
    if (options.inject_state) user += "\n\nCURRENT NETWORK STATE:\n" + serialize_state(state);
    t.history = {{Role::system, options.system_prompt.value_or(prompts.orchestrator)}, {Role::user, user}};

    NetworkState working = state;
    std::optional<SliceConfiguration> provisioned;

    const auto close = [&](Outcome outcome) {
        t.outcome = outcome;
        const auto& calls = session.calls();
        for (std::size_t i = calls_before; i < calls.size(); ++i) t.usage += calls[i];
        return t;
    };

    for (int k = 1; k <= options.k_max; ++k) {
        TranscriptEntry entry;
        entry.iteration = k;
        try {
            entry.call = session.complete(t.history, options.temperature);
        } catch (const Error& e) {
            t.error = e.what();
            return close(Outcome::error);
        }
        entry.response = entry.call.text;
        entry.thought = extract_thought(entry.response);
        t.history.push_back({Role::assistant, entry.response});

        std::vector<AgentAction> actions;
        std::string parse_error;
        try {
            actions = parse_action(entry.response);
        } catch (const ParseError& e) {
            parse_error = e.what();
        }

        std::vector<std::string> observations;
        if (!parse_error.empty()) {
            entry.steps.push_back({AgentAction{}, std::string(kObs) + "Could not parse ACTION line: " + parse_error, {}});
            observations.push_back(entry.steps.back().observation);
        }

        for (const auto& action : actions) {
            TranscriptStep step{action, {}, {}};
            bool stop_turn = false;
            switch (action.kind) {
                case ActionKind::none:
                    step.observation = std::string(kObs) + std::string(kNudge);
                    break;
                case ActionKind::call_agent:
                    if (!options.specialists_enabled) {
                        step.observation = std::string(kObs) +
                                           "Specialist consultation is not available in this configuration; "
                                           "decide from the network state provided.";
                        break;
                    }
                    try {
                        const auto c = consult_specialist(*action.agent_name, *action.request, working, prompts,
                                                          session, options.temperature);
                        if (c.called) step.specialist_call = session.calls().back();
                        step.observation = std::string(kObs) + c.text;
                    } catch (const Error& e) {
                        step.observation = std::string(kObs) + "specialist call failed: " + e.what();
                        entry.steps.push_back(std::move(step));
                        t.entries.push_back(std::move(entry));
                        t.error = e.what();
                        return close(Outcome::error);
                    }
                    break;
                case ActionKind::provision_slice:
                    try {
                        provisioned = provision(action, working, options.thresholds);
                        step.observation = std::string(kObs) + "Slice " + provisioned->slice_id.value_or("") +
                                           " provisioned: " + describe(*provisioned);
                    } catch (const Error& e) {
                        step.observation = std::string(kObs) + "Provisioning failed: " + e.what();
                        stop_turn = true;
                    }
                    break;
                case ActionKind::finish:
                    if (!provisioned) {
                        step.observation = std::string(kObs) +
                                           "FINISH rejected: no slice has been provisioned yet; emit PROVISION_SLICE first.";
                        break;
                    }
                    step.observation.clear();
                    entry.steps.push_back(std::move(step));
                    t.entries.push_back(std::move(entry));
                    t.final_config = provisioned;
                    t.summary = action.summary;
                    return close(Outcome::finished);
            }
            observations.push_back(step.observation);
            entry.steps.push_back(std::move(step));
            if (stop_turn) break;
        }

        std::string joined;
        for (const auto& o : observations) {
            if (!joined.empty()) joined += "\n";
            joined += o;
        }
        t.history.push_back({Role::user, joined});
        t.entries.push_back(std::move(entry));
    }
    return close(Outcome::iteration_limit);
}

// ---------------------------------------------------------------------------
// Rendering

std::string render_trace(const AgentTranscript& t) {
    std::ostringstream out;
    for (const auto& e : t.entries) {
        out << "--- Iteration " << e.iteration << " ---\n";
        out << "[Thinking]: " << e.response << "\n";
        for (const auto& s : e.steps) {
            switch (s.action.kind) {
                case ActionKind::call_agent:
                    out << "\n   -> Calling " << *s.action.agent_name << "...\n";
                    out << "   <- Agent Response: "
                        << (s.observation.size() >= kObs.size() ? s.observation.substr(kObs.size()) : s.observation)
                        << "\n";
                    break;
                case ActionKind::provision_slice:
                    out << "\n   -> Provisioning " << s.action.slice_id.value_or("") << "...\n";
                    out << "   <- " << s.observation << "\n";
                    break;
                case ActionKind::finish:
                    out << "\n   -> Finish";
                    if (s.action.summary) out << ": " << *s.action.summary;
                    out << "\n";
                    if (!s.observation.empty()) out << "   <- " << s.observation << "\n";
                    break;
                case ActionKind::none:
                    out << "\n   <- " << s.observation << "\n";
                    break;
            }
        }
        out << "\n";
    }
    out << "Outcome: " << to_string(t.outcome) << " after " << t.iterations() << " iteration(s)\n";
    if (!t.error.empty()) out << "Error: " << t.error << "\n";
    if (t.final_config) out << "Final configuration: " << describe(*t.final_config) << "\n";
    out << "Tokens: " << t.usage.total_tokens() << " (prompt " << t.usage.prompt_tokens << ", completion "
        << t.usage.completion_tokens << ")\n";
    return out.str();
}

namespace {

json action_json(const AgentAction& a) {
    json j = {{"kind", std::string(to_string(a.kind))}};
    const auto put = [&j](const char* key, const std::optional<std::string>& v) {
        if (v) j[key] = *v;
    };
    put("agent_name", a.agent_name);
    put("request", a.request);
    put("slice_id", a.slice_id);
    put("ran_config", a.ran_config);
    put("core_config", a.core_config);
    put("summary", a.summary);
    return j;
}

json call_json(const CompletionResult& c) {
    return {{"prompt_tokens", c.prompt_tokens},
            {"completion_tokens", c.completion_tokens},
            {"latency_seconds", c.latency_seconds},
            {"backend", c.backend_id}};
}

}  // namespace

std::string transcript_to_json(const AgentTranscript& t) {
    json entries = json::array();
    for (const auto& e : t.entries) {
        json steps = json::array();
        for (const auto& s : e.steps) {
            json step = {{"action", action_json(s.action)}, {"observation", s.observation}};
            if (s.specialist_call) step["specialist_call"] = call_json(*s.specialist_call);
            steps.push_back(std::move(step));
        }
        entries.push_back({{"iteration", e.iteration},
                           {"response", e.response},
                           {"thought", e.thought},
                           {"call", call_json(e.call)},
                           {"steps", std::move(steps)}});
    }
    json doc = {{"intent", t.intent},
                {"outcome", std::string(to_string(t.outcome))},
                {"iterations", t.iterations()},
                {"specialist_calls", t.specialist_calls()},
                {"usage",
                 {{"prompt_tokens", t.usage.prompt_tokens},
                  {"completion_tokens", t.usage.completion_tokens},
                  {"total_tokens", t.usage.total_tokens()},
                  {"wall_seconds", t.usage.wall_seconds},
                  {"calls", t.usage.calls}}},
                {"entries", std::move(entries)}};
    if (!t.error.empty()) doc["error"] = t.error;
    if (t.summary) doc["summary"] = *t.summary;
    if (t.final_config) {
        const auto& c = *t.final_config;
        doc["final_config"] = {{"sector", c.sector_id}, {"band", std::string(to_string(c.band))}, {"node", c.node_id}};
        if (c.slice_id) doc["final_config"]["slice_id"] = *c.slice_id;
    }
    return doc.dump(2);
}

}  // namespace ibn

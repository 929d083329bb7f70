#include <doctest.h>

#include <algorithm>

#include <json.hpp>

#include "ibn/agent_runtime.hpp"
#include "ibn/error.hpp"
#include "ibn/eval_harness.hpp"
#include "ibn/oracle.hpp"
#include "test_support.hpp"

using namespace ibn;
using ibn::test::bundled_state;
using ibn::test::data_dir;

namespace {

const char* kAssemblyIntent =
    "Configure network slice for automated robotic assembly line at industrial_park_a. Requires ultra-low "
    "latency (<5ms) for real-time control and high reliability for safety-critical operations.";

const PromptSet& bundled_prompts() {
    static const PromptSet p = load_prompts(data_dir() / "prompts");
    return p;
}

std::vector<ScriptedExchange> reference_script() {
    const auto lib = load_script_file(data_dir() / "fixtures" / "industrial_automation_trace.json");
    const auto* s = lib.find("multi_agent", "industrial_automation");
    REQUIRE(s != nullptr);
    return *s;
}

ScriptedExchange say(std::string text, long long p = 10, long long c = 5) {
    ScriptedExchange e;
    e.response = std::move(text);
    e.prompt_tokens = p;
    e.completion_tokens = c;
    return e;
}

/// Keeps every history the runtime sends.
class RecordingBackend final : public ChatBackend {
public:
    explicit RecordingBackend(std::vector<ScriptedExchange> script) : inner_(std::move(script)) {}
    CompletionResult complete(std::span<const ChatMessage> history, double temperature) override {
        seen.emplace_back(history.begin(), history.end());
        return inner_.complete(history, temperature);
    }
    std::string id() const override { return "recording"; }

    std::vector<std::vector<ChatMessage>> seen;
    ScriptedBackend inner_;
};

}  // namespace

TEST_CASE("bundled prompts load with their markers") {
    const auto& p = bundled_prompts();
    CHECK(p.orchestrator.find(kConsultRule) != std::string::npos);
    for (const char* marker : {"THOUGHT:", "ACTION: CALL_AGENT", "ACTION: PROVISION_SLICE", "ACTION: FINISH"}) {
        CHECK(p.orchestrator.find(marker) != std::string::npos);
    }
    CHECK(p.ran_specialist.find("RECOMMENDATION:") != std::string::npos);
    CHECK(p.core_specialist.find("RECOMMENDATION:") != std::string::npos);
    CHECK(&p.specialist("ran_specialist") == &p.ran_specialist);
    CHECK(p.specialist("billing_specialist").empty());
    const auto merged = p.merged();
    CHECK(merged.find(p.orchestrator) != std::string::npos);
    CHECK(merged.find(p.ran_specialist) != std::string::npos);
    CHECK(merged.find(p.core_specialist) != std::string::npos);
}

TEST_CASE("prompt loading errors") {
    ibn::test::TempDir dir;
    try {
        load_prompts(dir.path);
        FAIL("expected PromptError");
    } catch (const PromptError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("orchestrator.md") != std::string::npos);
        CHECK(msg.find("ran_specialist.md") != std::string::npos);
        CHECK(msg.find("core_specialist.md") != std::string::npos);
    }
    const auto generic = data_dir() / "prompts" / "ablation_generic";
    CHECK_NOTHROW(load_prompts(generic, false));
    CHECK_THROWS_AS(load_prompts(generic, true), PromptError);

    dir.write("orchestrator.md", "Be helpful.\n");
    dir.write("ran_specialist.md", "RECOMMENDATION: and WARNING: lines\n");
    dir.write("core_specialist.md", "RECOMMENDATION: line\n");
    try {
        load_prompts(dir.path);
        FAIL("expected PromptError");
    } catch (const PromptError& e) {
        CHECK(std::string(e.what()).find(std::string(kConsultRule)) != std::string::npos);
    }
    CHECK_THROWS_AS(load_prompt_file(dir.path / "missing.md"), PromptError);
}

TEST_CASE("specialist message template") {
    const auto& s = bundled_state();
    const std::string msg = build_specialist_message("Which band?\nConsider load.", s);
    CHECK(msg == "ORCHESTRATOR REQUEST:\nWhich band?\nConsider load.\n\nCURRENT NETWORK STATE:\n" + serialize_state(s) +
                     "\n\nProvide your expert recommendation based on this state.");
    CHECK_THROWS_AS(build_specialist_message("", s), ValidationError);
}

TEST_CASE("specialist messages carry every sector and node id") {
    // Grounding property over trimmed and extended variants of the bundled state.
    for (int drop = 0; drop < 5; ++drop) {
        NetworkState s = bundled_state();
        auto it = std::next(s.sectors.begin(), drop);
        const std::string gone = it->first;
        s.sectors.erase(it);
        for (auto& [_, n] : s.nodes) n.latency_to_sector.erase(gone);
        CoreNode extra{"upf_extra_" + std::to_string(drop), Tier::metro, 20, {}, ""};
        for (const auto& [sid, _] : s.sectors) extra.latency_to_sector[sid] = 7;
        s.nodes.emplace(extra.id, extra);
        validate_state(s);
        const auto msg = build_specialist_message("req", s);
        for (const auto& [sid, _] : s.sectors) CHECK(msg.find("\"" + sid + "\"") != std::string::npos);
        for (const auto& [nid, _] : s.nodes) CHECK(msg.find("\"" + nid + "\"") != std::string::npos);
    }
}

TEST_CASE("consulting an unknown agent reports an error without a call") {
    ScriptedBackend backend({});
    Session session(backend);
    const auto c = consult_specialist("billing_specialist", "hi", bundled_state(), bundled_prompts(), session);
    CHECK_FALSE(c.called);
    CHECK(c.text.find("unknown agent 'billing_specialist'") != std::string::npos);
    CHECK(session.calls().empty());
}

TEST_CASE("worked example replays from the bundled fixture") {
    RecordingBackend backend(reference_script());
    Session session(backend);
    const auto t = run_react(kAssemblyIntent, bundled_state(), session, bundled_prompts());

    CHECK(t.outcome == Outcome::finished);
    CHECK(t.iterations() == 3);
    CHECK(t.specialist_calls() == 2);
    REQUIRE(t.final_config);
    CHECK(same_placement(*t.final_config, {"industrial_park_a", Band::mid_band, "mec_industrial_1", std::nullopt}));
    CHECK(t.final_config->slice_id == "industrial_autonomy_001");
    CHECK(t.usage.total_tokens() == 13573);
    CHECK(t.usage.calls == 5);
    CHECK(backend.inner_.remaining() == 0);
    CHECK(backend.inner_.temperatures() == std::vector<double>(5, 0.0));

    // Specialists get a fresh two-message history with the full state.
    REQUIRE(backend.seen.size() == 5);
    for (std::size_t i : {1u, 3u}) {
        REQUIRE(backend.seen[i].size() == 2);
        CHECK(backend.seen[i][1].content.find(serialize_state(bundled_state())) != std::string::npos);
    }
    CHECK(backend.seen[1][0].content == bundled_prompts().ran_specialist);
    CHECK(backend.seen[3][0].content == bundled_prompts().core_specialist);
    // Orchestrator history grows [system, intent, reply, observation, ...].
    CHECK(backend.seen[0].size() == 2);
    CHECK(backend.seen[2].size() == 4);
    CHECK(backend.seen[2][3].content.rfind("Observation: ", 0) == 0);
    CHECK(backend.seen[4].size() == 6);

    const auto trace = render_trace(t);
    CHECK(trace.find("--- Iteration 1 ---") != std::string::npos);
    CHECK(trace.find("--- Iteration 3 ---") != std::string::npos);
    CHECK(trace.find("[Thinking]: THOUGHT:") != std::string::npos);
    CHECK(trace.find("-> Calling ran_specialist...") != std::string::npos);
    CHECK(trace.find("-> Calling core_specialist...") != std::string::npos);
    CHECK(trace.find("<- Agent Response: ") != std::string::npos);
    CHECK(trace.find("Deploy UPF at mec_industrial_1") != std::string::npos);
    CHECK(trace.find("Tokens: 13573") != std::string::npos);

    const auto doc = nlohmann::json::parse(transcript_to_json(t));
    CHECK(doc["outcome"] == "finished");
    CHECK(doc["usage"]["total_tokens"] == 13573);

    SUBCASE("a second replay is byte-identical") {
        ScriptedBackend again(reference_script());
        Session s2(again);
        const auto t2 = run_react(kAssemblyIntent, bundled_state(), s2, bundled_prompts());
        CHECK(render_trace(t2) == trace);
        CHECK(transcript_to_json(t2) == transcript_to_json(t));
    }
}

TEST_CASE("a script that never acts hits the iteration limit") {
    std::vector<ScriptedExchange> script(12, say("THOUGHT: let me think some more."));
    ScriptedBackend backend(script);
    Session session(backend);
    const auto t = run_react("Deliver 4K video at city_plaza", bundled_state(), session, bundled_prompts());
    CHECK(t.outcome == Outcome::iteration_limit);
    CHECK(t.iterations() == 10);
    CHECK(backend.consumed() == 10);
    CHECK_FALSE(t.final_config);
    CHECK(t.usage.total_tokens() == 150);
    CHECK(t.history.back().content == "Observation: " + std::string(kNudge));
}

TEST_CASE("a failed provision is observed and a corrected one succeeds") {
    const std::string intent = "Offer fixed wireless broadband to homes in suburban_residential.";
    ScriptedBackend backend({
        say("THOUGHT: ask RAN.\nACTION: CALL_AGENT | agent_name=ran_specialist | request=Which band for fixed "
            "wireless at suburban_residential?"),
        say("RECOMMENDATION: Use mmWave at suburban_residential for capacity."),
        say("THOUGHT: follow the advice.\nACTION: PROVISION_SLICE | slice_id=fwa_001 | "
            "ran_config=mmWave@suburban_residential | core_config=UPF@metro_agg_hub\nACTION: FINISH | summary=done"),
        say("THOUGHT: mmWave is not available there; use mid-band.\nACTION: PROVISION_SLICE | slice_id=fwa_001 | "
            "ran_config=mid-band@suburban_residential | core_config=UPF@metro_agg_hub\nACTION: FINISH | "
            "summary=fixed wireless on mid-band"),
    });
    Session session(backend);
    const auto t = run_react(intent, bundled_state(), session, bundled_prompts());
    REQUIRE(t.outcome == Outcome::finished);
    CHECK(t.iterations() == 3);
    CHECK(backend.remaining() == 0);

    // The failing turn stops after the provision; its FINISH never runs.
    const auto& failed = t.entries[1];
    REQUIRE(failed.steps.size() == 1);
    CHECK(failed.steps[0].observation.find("Provisioning failed") != std::string::npos);
    CHECK(failed.steps[0].observation.find("mmwave") != std::string::npos);

    REQUIRE(t.final_config);
    CHECK_NOTHROW(validate_configuration(bundled_state(), *t.final_config));
    // The corrected choice is what the oracle picks for this intent.
    const auto suite = load_scenarios_file(data_dir() / "scenarios" / "benchmark12.json", bundled_state());
    const auto sc = std::find_if(suite.begin(), suite.end(), [](const auto& s) { return s.id == "suburban_fixed_wireless"; });
    REQUIRE(sc != suite.end());
    const auto head = solve(bundled_state(), scoring_profile(*sc, bundled_state())).front();
    CHECK(same_placement(head.config, *t.final_config));
}

TEST_CASE("recovering from an unknown agent") {
    ScriptedBackend backend({
        say("ACTION: CALL_AGENT | agent_name=billing_specialist | request=What does this cost?"),
        say("ACTION: PROVISION_SLICE | slice_id=s1 | ran_config=low-band@rural_highway | "
            "core_config=UPF@metro_agg_hub\nACTION: FINISH | summary=ok"),
    });
    Session session(backend);
    const auto t = run_react("Sensors along rural_highway", bundled_state(), session, bundled_prompts());
    CHECK(t.outcome == Outcome::finished);
    CHECK(t.specialist_calls() == 0);
    CHECK(t.entries[0].steps[0].observation.find("unknown agent") != std::string::npos);
    CHECK(t.summary == "ok");
}

TEST_CASE("FINISH before any provision is rejected") {
    ScriptedBackend backend({
        say("ACTION: FINISH | summary=nothing to do"),
        say("ACTION: PROVISION_SLICE | slice_id=s1 | ran_config=mid-band@city_plaza | core_config=UPF@metro_agg_hub"),
        say("ACTION: FINISH | summary=now done"),
    });
    Session session(backend);
    const auto t = run_react("Browse the web at city_plaza", bundled_state(), session, bundled_prompts());
    CHECK(t.outcome == Outcome::finished);
    CHECK(t.iterations() == 3);
    CHECK(t.entries[0].steps[0].observation.find("FINISH rejected") != std::string::npos);
    CHECK(t.entries[1].steps[0].observation.find("Slice s1 provisioned") != std::string::npos);
    CHECK(t.summary == "now done");
}

TEST_CASE("unparseable ACTION lines become observations") {
    ScriptedBackend backend({
        say("ACTION: PROVISION_SLICE | slice_id"),
        say("ACTION: PROVISION_SLICE | slice_id=s | ran_config=teraband@city_plaza | core_config=UPF@metro_agg_hub"),
        say("ACTION: PROVISION_SLICE | slice_id=s | ran_config=mid-band@city_plaza | core_config=UPF@metro_agg_hub\n"
            "ACTION: FINISH | summary=ok"),
    });
    Session session(backend);
    const auto t = run_react("Browse the web at city_plaza", bundled_state(), session, bundled_prompts());
    CHECK(t.outcome == Outcome::finished);
    CHECK(t.entries[0].steps[0].observation.find("Could not parse ACTION line") != std::string::npos);
    CHECK(t.entries[1].steps[0].observation.find("Provisioning failed") != std::string::npos);
}

TEST_CASE("thresholds gate provisioning") {
    const std::string turn =
        "ACTION: PROVISION_SLICE | slice_id=s | ran_config=mmWave@stadium_central | core_config=UPF@mec_stadium_1\n"
        "ACTION: FINISH | summary=ok";
    ReactOptions opts;
    opts.k_max = 1;
    opts.thresholds.l_max = 80;
    ScriptedBackend strict({say(turn)});
    Session s1(strict);
    const auto blocked = run_react("4K at stadium_central", bundled_state(), s1, bundled_prompts(), opts);
    CHECK(blocked.outcome == Outcome::iteration_limit);
    CHECK(blocked.entries[0].steps[0].observation.find("load") != std::string::npos);

    opts.thresholds = {100, 60, 80};  // mec_stadium_1 runs at 65 %
    ScriptedBackend busy({say(turn)});
    Session s2(busy);
    CHECK(run_react("4K at stadium_central", bundled_state(), s2, bundled_prompts(), opts).outcome ==
          Outcome::iteration_limit);

    opts.thresholds = {};
    ScriptedBackend relaxed({say(turn)});
    Session s3(relaxed);
    CHECK(run_react("4K at stadium_central", bundled_state(), s3, bundled_prompts(), opts).outcome ==
          Outcome::finished);
}

TEST_CASE("gateway failure ends the run with a partial transcript") {
    ScriptedBackend backend({say("ACTION: CALL_AGENT | agent_name=ran_specialist | request=help")});
    Session session(backend);
    const auto t = run_react("Video at city_plaza", bundled_state(), session, bundled_prompts());
    CHECK(t.outcome == Outcome::error);
    CHECK(t.error.find("exhausted") != std::string::npos);
    CHECK(t.iterations() == 1);
    CHECK(t.usage.calls == 1);
    CHECK_FALSE(t.final_config);
    CHECK(render_trace(t).find("Error: ") != std::string::npos);
}

TEST_CASE("orchestrator-only mode makes no specialist calls") {
    ReactOptions opts;
    opts.specialists_enabled = false;
    opts.inject_state = true;
    RecordingBackend backend({
        say("ACTION: CALL_AGENT | agent_name=ran_specialist | request=help"),
        say("ACTION: PROVISION_SLICE | slice_id=s | ran_config=mid-band@city_plaza | core_config=UPF@metro_agg_hub\n"
            "ACTION: FINISH | summary=ok"),
    });
    Session session(backend);
    const auto t = run_react("Browse at city_plaza", bundled_state(), session, bundled_prompts(), opts);
    CHECK(t.outcome == Outcome::finished);
    CHECK(t.specialist_calls() == 0);
    CHECK(backend.seen.size() == 2);
    CHECK(backend.seen[0][1].content.find("CURRENT NETWORK STATE:\n" + serialize_state(bundled_state())) !=
          std::string::npos);
    CHECK(t.entries[0].steps[0].observation.find("not available") != std::string::npos);
}

TEST_CASE("a lone provision gets an observation and the loop continues") {
    RecordingBackend backend({
        say("ACTION: PROVISION_SLICE | slice_id=s | ran_config=mid-band@city_plaza | core_config=UPF@metro_agg_hub"),
        say("ACTION: FINISH | summary=ok"),
    });
    Session session(backend);
    const auto t = run_react("Browse at city_plaza", bundled_state(), session, bundled_prompts());
    CHECK(t.outcome == Outcome::finished);
    CHECK(backend.seen[1].back().content ==
          "Observation: Slice s provisioned: mid_band@city_plaza, UPF@metro_agg_hub");
}

TEST_CASE("iteration bound holds for every budget") {
    for (int k = 1; k <= 12; ++k) {
        std::vector<ScriptedExchange> script(20, say("no action"));
        ScriptedBackend backend(script);
        Session session(backend);
        ReactOptions opts;
        opts.k_max = k;
        const auto t = run_react("Video at city_plaza", bundled_state(), session, bundled_prompts(), opts);
        CHECK(t.iterations() == k);
        CHECK(backend.consumed() == static_cast<std::size_t>(k));
    }
    ScriptedBackend b({});
    Session s(b);
    CHECK_THROWS_AS(run_react("   ", bundled_state(), s, bundled_prompts()), ValidationError);
}

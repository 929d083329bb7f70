#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ibn/llm_gateway.hpp"
#include "ibn/network_model.hpp"
#include "ibn/utility_engine.hpp"

namespace ibn {

// ---------------------------------------------------------------------------
// Prompts

inline constexpr std::string_view kConsultRule = "ALWAYS consult specialists before provisioning";
inline constexpr std::string_view kRanSpecialist = "ran_specialist";
inline constexpr std::string_view kCoreSpecialist = "core_specialist";

struct PromptSet {
    std::string orchestrator;
    std::string ran_specialist;
    std::string core_specialist;

    /// Orchestrator, RAN and Core prompts concatenated under section headings;
    /// the single-agent baseline uses this.
    std::string merged() const;
    /// Empty string for unknown names.
    const std::string& specialist(std::string_view name) const;
};

/// Marker strings each prompt must contain, keyed by file name.
std::vector<std::pair<std::string, std::vector<std::string>>> required_markers();

/// Reads orchestrator.md, ran_specialist.md and core_specialist.md verbatim.
/// Throws PromptError listing every missing file, or every missing marker when
/// `check_markers` is set.
PromptSet load_prompts(const std::filesystem::path& directory, bool check_markers = true);

/// Reads a single prompt file verbatim. Throws PromptError when unreadable.
std::string load_prompt_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Action grammar
//
//   ACTION: CALL_AGENT | agent_name=<id> | request=<rest of line>
//   ACTION: PROVISION_SLICE | slice_id=<id> | ran_config=<band>@<sector> | core_config=UPF@<node>
//   ACTION: FINISH | summary=<rest of line>

enum class ActionKind { call_agent, provision_slice, finish, none };

std::string_view to_string(ActionKind kind);

struct AgentAction {
    ActionKind kind = ActionKind::none;
    std::optional<std::string> agent_name;
    std::optional<std::string> request;
    std::optional<std::string> slice_id;
    std::optional<std::string> ran_config;   // as written, e.g. "mid-band@industrial_park_a"
    std::optional<std::string> core_config;  // as written, e.g. "UPF@mec_industrial_1"
    std::optional<std::string> summary;

    bool operator==(const AgentAction&) const = default;
};

/// Parses one `ACTION:` line. Throws ParseError carrying the line.
AgentAction parse_action_line(std::string_view line);

/// Operative actions of an assistant turn, in textual order: the last ACTION
/// line, preceded by a PROVISION_SLICE on the line directly above when the
/// last one is FINISH. A single kind=none action when no ACTION line exists.
std::vector<AgentAction> parse_action(std::string_view assistant_text);

/// Inverse of parse_action_line for well-formed actions; "" for kind none.
std::string format_action(const AgentAction& action);

struct ParsedSliceConfig {
    Band band = Band::mid_band;
    std::string sector_id;
    std::string node_id;

    bool operator==(const ParsedSliceConfig&) const = default;
};

/// "mid-band@industrial_park_a" + "UPF@mec_industrial_1". Throws ParseError on
/// a missing '@', an unknown band alias or an empty segment.
ParsedSliceConfig parse_slice_configs(std::string_view ran_config, std::string_view core_config);

/// Text preceding the first ACTION line, with a leading "THOUGHT:" removed.
std::string extract_thought(std::string_view assistant_text);

// ---------------------------------------------------------------------------
// Specialists

/// "ORCHESTRATOR REQUEST:\n<request>\n\nCURRENT NETWORK STATE:\n<state>\n\n"
/// "Provide your expert recommendation based on this state."
std::string build_specialist_message(std::string_view request, const NetworkState& state);

struct Consultation {
    std::string text;  // specialist reply, or the error text for an unknown agent
    bool called = false;
};

/// One stateless completion with [specialist prompt, built message]. Unknown
/// agent names produce an error text without a gateway call.
Consultation consult_specialist(std::string_view agent_name, std::string_view request, const NetworkState& state,
                                const PromptSet& prompts, Session& session, double temperature = 0.0);

// ---------------------------------------------------------------------------
// ReAct loop

inline constexpr std::string_view kNudge = "No ACTION detected; emit a valid ACTION line";

struct ReactOptions {
    int k_max = 10;
    double temperature = 0.0;
    bool specialists_enabled = true;
    /// Appends the serialized state to the intent message (agents without specialists).
    bool inject_state = false;
    /// Replaces the orchestrator prompt as the system message.
    std::optional<std::string> system_prompt;
    Thresholds thresholds;
};

struct TranscriptStep {
    AgentAction action;
    std::string observation;
    std::optional<CompletionResult> specialist_call;
};

struct TranscriptEntry {
    int iteration = 0;
    std::string response;
    std::string thought;
    CompletionResult call;
    std::vector<TranscriptStep> steps;
};

enum class Outcome { finished, iteration_limit, error };

std::string_view to_string(Outcome outcome);

struct AgentTranscript {
    std::string intent;
    std::vector<TranscriptEntry> entries;
    std::optional<SliceConfiguration> final_config;
    std::optional<std::string> summary;
    Outcome outcome = Outcome::error;
    std::string error;
    TokenUsage usage;
    std::vector<ChatMessage> history;

    int iterations() const { return static_cast<int>(entries.size()); }
    int specialist_calls() const;
};

/// Orchestrator loop over `session`. Gateway failures end the run with
/// outcome error and the partial transcript; nothing is thrown for them.
AgentTranscript run_react(std::string_view intent_text, const NetworkState& state, Session& session,
                          const PromptSet& prompts, const ReactOptions& options = {});

/// Human-readable trace: "--- Iteration N ---", "[Thinking]:", "-> Calling", "<- Agent Response:".
std::string render_trace(const AgentTranscript& transcript);

/// Structured transcript, two-space indented JSON.
std::string transcript_to_json(const AgentTranscript& transcript);

}  // namespace ibn

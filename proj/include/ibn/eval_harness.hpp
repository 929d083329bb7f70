#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ibn/agent_runtime.hpp"
#include "ibn/intent_classifier.hpp"
#include "ibn/llm_gateway.hpp"
#include "ibn/network_model.hpp"
#include "ibn/utility_engine.hpp"

namespace ibn {

enum class Provenance { reference, authored };

struct Scenario {
    std::string id;
    TrafficClass category = TrafficClass::embb;
    std::string intent_text;
    SliceConfiguration golden;
    BandwidthCategory declared_beta = BandwidthCategory::medium;
    std::string notes;
    Provenance provenance = Provenance::authored;
};

/// Accepts a list of scenarios or {"scenarios": [...]}. Goldens are validated
/// against `state`; ids must be unique.
std::vector<Scenario> load_scenarios(std::string_view document, const NetworkState& state);
std::vector<Scenario> load_scenarios_file(const std::filesystem::path& path, const NetworkState& state);

/// The ground-truth profile used to score a scenario: declared class and
/// bandwidth, latency bound and target sector read from the intent text.
IntentProfile scoring_profile(const Scenario& scenario, const NetworkState& state);

/// 1.0 when sector, band and node all match, 0.5 for two of three, else 0.0.
double semantic_accuracy(const std::optional<SliceConfiguration>& produced, const SliceConfiguration& golden);

/// accuracy >= 0.5 and utility >= 0.7 (utility compared with a 1e-9 tolerance).
bool hybrid_success(double accuracy, double utility);

enum class SystemKind { multi_agent, monolithic, rule_based, direct_llm, oracle, no_prompts, no_specialists, no_react };

std::string_view to_string(SystemKind kind);
std::optional<SystemKind> parse_system(std::string_view text);
/// Human label used in comparison tables ("Proposed Multi-Agent", "Remove ReAct", ...).
std::string_view display_name(SystemKind kind);
bool uses_llm(SystemKind kind);

struct EvaluationRecord {
    std::string scenario_id;
    TrafficClass category = TrafficClass::embb;
    SystemKind system = SystemKind::multi_agent;
    int run = 0;
    std::optional<SliceConfiguration> produced;
    double semantic_accuracy = 0.0;
    double utility = 0.0;
    bool hybrid_success = false;
    long long tokens = 0;
    double wall_seconds = 0.0;
    int iterations = 0;
    std::string outcome;
    std::string error;

    bool operator==(const EvaluationRecord&) const = default;
};

struct HarnessContext {
    NetworkState state;
    PromptSet prompts;
    std::optional<PromptSet> generic_prompts;  // no_prompts ablation
    std::optional<std::string> direct_prompt;  // direct_llm baseline
    Thresholds thresholds;
    BackendFactory* backend = nullptr;  // required for LLM systems
    int k_max = 10;
};

/// Options the runtime uses for an LLM-backed system.
ReactOptions react_options_for(SystemKind system, const HarnessContext& ctx);

/// `repeats` records. LLM systems open a fresh backend session per repeat;
/// deterministic systems execute once and replicate. Failures become
/// zero-accuracy records.
std::vector<EvaluationRecord> run_scenario(const Scenario& scenario, SystemKind system, const HarnessContext& ctx,
                                           int repeats = 3);

struct Stat {
    double mean = 0.0;
    double std = 0.0;  // sample (N-1); 0 for N <= 1
};

Stat mean_std(const std::vector<double>& values);

struct ScenarioRow {
    std::string scenario_id;
    TrafficClass category = TrafficClass::embb;
    double accuracy = 0.0;
    double utility = 0.0;
    double tokens = 0.0;
    double wall_seconds = 0.0;
    double iterations = 0.0;
    double success_rate = 0.0;
};

struct BenchmarkSummary {
    Stat accuracy;
    Stat utility;
    Stat tokens;
    Stat wall_seconds;
    Stat iterations;
    double success_rate = 0.0;
};

struct BenchmarkReport {
    SystemKind system = SystemKind::multi_agent;
    std::vector<EvaluationRecord> records;
    std::vector<ScenarioRow> rows;  // per-scenario means over repeats, suite order
    BenchmarkSummary summary;       // over rows
};

/// Groups records by scenario (first-appearance order) and aggregates.
BenchmarkReport summarize(SystemKind system, std::vector<EvaluationRecord> records);

/// Runs every scenario; `jobs` > 1 spreads scenarios over worker threads.
/// Output order follows the suite regardless of `jobs`.
BenchmarkReport run_benchmark(const std::vector<Scenario>& suite, SystemKind system, const HarnessContext& ctx,
                              int repeats = 3, int jobs = 1);

enum class AblationVariant { full, no_prompts, no_specialists, no_react };

std::string_view to_string(AblationVariant v);
SystemKind system_for(AblationVariant v);

BenchmarkReport run_ablation(AblationVariant variant, const std::vector<Scenario>& suite, const HarnessContext& ctx,
                             int repeats = 3, int jobs = 1);

/// Baselines compared by `compare`: multi_agent, monolithic, rule_based, direct_llm.
std::vector<SystemKind> comparison_systems();
/// Ablation variants in order: full, no_prompts, no_specialists, no_react.
std::vector<AblationVariant> ablation_variants();

// ---------------------------------------------------------------------------
// Reports

enum class ReportFormat { table, machine };

/// table is the fixed-width text report with 2 dp rounding;
/// machine is lossless JSON.
std::string emit_report(const BenchmarkReport& report, ReportFormat format);
/// Same as emit_report over a bare record list.
std::string emit_report(const std::vector<EvaluationRecord>& records, ReportFormat format);

/// Parses a machine benchmark report back into records and re-aggregates.
BenchmarkReport load_report(std::string_view machine_document);

std::string emit_comparison(const std::vector<BenchmarkReport>& reports, ReportFormat format);
/// First report is the baseline for the delta columns.
std::string emit_ablation(const std::vector<std::pair<AblationVariant, BenchmarkReport>>& reports,
                          ReportFormat format);

}  // namespace ibn

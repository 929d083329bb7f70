#include <cmath>
#include <cstdio>
#include <sstream>

#include "ibn/error.hpp"
#include "ibn/eval_harness.hpp"
#include "json_util.hpp"

namespace ibn {

using detail::json;

namespace {

constexpr std::string_view kFormatTag = "ibn-report/1";
constexpr std::string_view kStdNote = "Std: sample standard deviation (N-1) over per-scenario means.";

std::string fixed(double v, int dp) {
    double r = round_to(v, dp);
    if (r == 0.0) r = 0.0;  // no "-0.00"
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", dp, r);
    return buf;
}

std::string signed_fixed(double v, int dp) {
    const auto s = fixed(v, dp);
    if (s.front() == '-' || round_to(v, dp) == 0.0) return s;
    return "+" + s;
}

// Halves print with one decimal like the benchmark table; other means need two.
std::string accuracy_cell(double v) {
    const double twice = v * 2.0;
    return std::fabs(twice - std::round(twice)) < 1e-9 ? fixed(v, 1) : fixed(v, 2);
}

std::string iterations_cell(double v) {
    return std::fabs(v - std::round(v)) < 1e-9 ? fixed(v, 0) : fixed(v, 1);
}

// Width in code points so "Δ" counts as one column.
std::string pad(std::string s, std::size_t width) {
    std::size_t cols = 0;
    for (unsigned char c : s) cols += (c & 0xC0) != 0x80;
    if (cols < width) s.append(width - cols, ' ');
    return s;
}

std::string stat_cell(const Stat& s, int dp) { return fixed(s.mean, dp) + " ± " + fixed(s.std, dp); }

json stat_json(const Stat& s) { return {{"mean", s.mean}, {"std", s.std}}; }

json config_json(const std::optional<SliceConfiguration>& c) {
    if (!c) return nullptr;
    return {{"sector", c->sector_id}, {"band", std::string(to_string(c->band))}, {"node", c->node_id}};
}

json record_json(const EvaluationRecord& r) {
    return {{"scenario", r.scenario_id},
            {"category", std::string(to_string(r.category))},
            {"system", std::string(to_string(r.system))},
            {"run", r.run},
            {"produced", config_json(r.produced)},
            {"semantic_accuracy", r.semantic_accuracy},
            {"utility", r.utility},
            {"hybrid_success", r.hybrid_success},
            {"tokens", r.tokens},
            {"wall_seconds", r.wall_seconds},
            {"iterations", r.iterations},
            {"outcome", r.outcome},
            {"error", r.error}};
}

json summary_json(const BenchmarkReport& rep) {
    return {{"accuracy", stat_json(rep.summary.accuracy)},
            {"utility", stat_json(rep.summary.utility)},
            {"tokens", stat_json(rep.summary.tokens)},
            {"wall_seconds", stat_json(rep.summary.wall_seconds)},
            {"iterations", stat_json(rep.summary.iterations)},
            {"success_rate", rep.summary.success_rate},
            {"std_convention", "sample"}};
}

json report_json(const BenchmarkReport& rep) {
    json records = json::array();
    for (const auto& r : rep.records) records.push_back(record_json(r));
    json rows = json::array();
    for (const auto& row : rep.rows) {
        rows.push_back({{"scenario", row.scenario_id},
                        {"category", std::string(to_string(row.category))},
                        {"accuracy", row.accuracy},
                        {"utility", row.utility},
                        {"tokens", row.tokens},
                        {"wall_seconds", row.wall_seconds},
                        {"iterations", row.iterations},
                        {"success_rate", row.success_rate}});
    }
    return {{"system", std::string(to_string(rep.system))},
            {"records", std::move(records)},
            {"rows", std::move(rows)},
            {"summary", summary_json(rep)}};
}

EvaluationRecord parse_record(const json& j) {
    EvaluationRecord r;
    r.scenario_id = j.at("scenario").get<std::string>();
    const auto cat = parse_traffic_class(j.at("category").get<std::string>());
    const auto sys = parse_system(j.at("system").get<std::string>());
    if (!cat || !sys) throw ParseError("report record " + r.scenario_id + ": unknown category or system");
    r.category = *cat;
    r.system = *sys;
    r.run = j.at("run").get<int>();
    const auto& p = j.at("produced");
    if (!p.is_null()) {
        const auto band = parse_band(p.at("band").get<std::string>());
        if (!band) throw ParseError("report record " + r.scenario_id + ": unknown band");
        r.produced = SliceConfiguration{p.at("sector").get<std::string>(), *band, p.at("node").get<std::string>(), {}};
    }
    r.semantic_accuracy = j.at("semantic_accuracy").get<double>();
    r.utility = j.at("utility").get<double>();
    r.hybrid_success = j.at("hybrid_success").get<bool>();
    r.tokens = j.at("tokens").get<long long>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    r.iterations = j.at("iterations").get<int>();
    r.outcome = j.at("outcome").get<std::string>();
    r.error = j.at("error").get<std::string>();
    if (r.hybrid_success != hybrid_success(r.semantic_accuracy, r.utility)) {
        throw ValidationError("report record " + r.scenario_id + ": hybrid_success disagrees with its scores");
    }
    return r;
}

std::string benchmark_table(const BenchmarkReport& rep) {
    std::ostringstream out;
    out << "System: " << to_string(rep.system) << " (" << display_name(rep.system) << ")\n";
    out << pad("Scenario", 30) << pad("Category", 10) << pad("Accuracy", 10) << pad("Utility", 9) << pad("Tokens", 9)
        << pad("Time (s)", 10) << "Iterations\n";
    for (const auto& row : rep.rows) {
        out << pad(row.scenario_id, 30) << pad(std::string(to_string(row.category)), 10)
            << pad(accuracy_cell(row.accuracy), 10) << pad(fixed(row.utility, 2), 9) << pad(fixed(row.tokens, 0), 9)
            << pad(fixed(row.wall_seconds, 1), 10) << iterations_cell(row.iterations) << "\n";
    }
    if (rep.rows.empty()) return out.str();
    const auto& s = rep.summary;
    out << "Mean ± Std: accuracy " << stat_cell(s.accuracy, 3) << ", utility " << stat_cell(s.utility, 3)
        << ", tokens " << stat_cell(s.tokens, 0) << ", time " << stat_cell(s.wall_seconds, 2) << ", iterations "
        << stat_cell(s.iterations, 1) << "\n";
    out << "Hybrid success: " << fixed(100.0 * s.success_rate, 1) << "% of " << rep.records.size() << " runs\n";
    out << kStdNote << "\n";
    return out.str();
}

}  // namespace

std::string emit_report(const BenchmarkReport& report, ReportFormat format) {
    if (format == ReportFormat::table) return benchmark_table(report);
    json doc = report_json(report);
    doc["format"] = kFormatTag;
    doc["kind"] = "benchmark";
    return doc.dump(2) + "\n";
}

std::string emit_report(const std::vector<EvaluationRecord>& records, ReportFormat format) {
    const auto system = records.empty() ? SystemKind::multi_agent : records.front().system;
    return emit_report(summarize(system, records), format);
}

BenchmarkReport load_report(std::string_view document) {
    const json doc = detail::parse_json(document, "machine report");
    try {
        if (doc.value("format", std::string()) != kFormatTag || doc.value("kind", std::string()) != "benchmark") {
            throw ParseError("machine report: not an " + std::string(kFormatTag) + " benchmark document");
        }
        const auto system = parse_system(doc.at("system").get<std::string>());
        if (!system) throw ParseError("machine report: unknown system");
        std::vector<EvaluationRecord> records;
        for (const auto& r : doc.at("records")) records.push_back(parse_record(r));
        return summarize(*system, std::move(records));
    } catch (const json::exception& e) {
        throw ParseError(std::string("machine report: ") + e.what());
    }
}

std::string emit_comparison(const std::vector<BenchmarkReport>& reports, ReportFormat format) {
    if (format == ReportFormat::machine) {
        json systems = json::array();
        for (const auto& r : reports) systems.push_back(report_json(r));
        json doc = {{"format", kFormatTag}, {"kind", "comparison"}, {"systems", std::move(systems)}};
        return doc.dump(2) + "\n";
    }
    std::ostringstream out;
    out << pad("System", 24) << pad("Accuracy", 10) << pad("Utility", 9) << pad("Tokens", 9) << pad("Time (s)", 10)
        << "Hybrid success\n";
    for (const auto& r : reports) {
        const auto& s = r.summary;
        out << pad(std::string(display_name(r.system)), 24) << pad(fixed(s.accuracy.mean, 2), 10)
            << pad(fixed(s.utility.mean, 2), 9) << pad(uses_llm(r.system) ? fixed(s.tokens.mean, 0) : "N/A", 9)
            << pad(fixed(s.wall_seconds.mean, 1), 10) << fixed(100.0 * s.success_rate, 1) << "%\n";
    }
    return out.str();
}

std::string emit_ablation(const std::vector<std::pair<AblationVariant, BenchmarkReport>>& reports,
                          ReportFormat format) {
    const double base_acc = reports.empty() ? 0.0 : reports.front().second.summary.accuracy.mean;
    const double base_util = reports.empty() ? 0.0 : reports.front().second.summary.utility.mean;
    if (format == ReportFormat::machine) {
        json variants = json::array();
        for (const auto& [v, r] : reports) {
            json j = report_json(r);
            j["variant"] = std::string(to_string(v));
            j["delta_accuracy"] = r.summary.accuracy.mean - base_acc;
            j["delta_utility"] = r.summary.utility.mean - base_util;
            variants.push_back(std::move(j));
        }
        json doc = {{"format", kFormatTag}, {"kind", "ablation"}, {"variants", std::move(variants)}};
        return doc.dump(2) + "\n";
    }
    std::ostringstream out;
    out << pad("Configuration", 22) << pad("Accuracy", 10) << pad("Utility", 9) << pad("Δ Sem", 9) << "Δ Util\n";
    for (const auto& [v, r] : reports) {
        const auto& s = r.summary;
        const std::string label = v == AblationVariant::full ? "Full System" : std::string(display_name(r.system));
        out << pad(label, 22) << pad(fixed(s.accuracy.mean, 2), 10) << pad(fixed(s.utility.mean, 2), 9)
            << pad(signed_fixed(s.accuracy.mean - base_acc, 2), 9) << signed_fixed(s.utility.mean - base_util, 2)
            << "\n";
    }
    return out.str();
}

}  // namespace ibn

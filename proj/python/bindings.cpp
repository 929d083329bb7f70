#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "ibn/agent_runtime.hpp"
#include "ibn/cli.hpp"
#include "ibn/error.hpp"
#include "ibn/eval_harness.hpp"
#include "ibn/network_model.hpp"
#include "ibn/oracle.hpp"

namespace py = pybind11;

namespace {

ibn::Band band_arg(const std::string& text) {
    auto b = ibn::parse_band(text);
    if (!b) throw ibn::ValidationError("unknown band '" + text + "'");
    return *b;
}

py::dict config_dict(const ibn::SliceConfiguration& c) {
    py::dict d;
    d["sector"] = c.sector_id;
    d["band"] = std::string(ibn::to_string(c.band));
    d["node"] = c.node_id;
    return d;
}

py::dict profile_dict(const ibn::IntentProfile& p) {
    py::dict d;
    d["traffic_class"] = std::string(ibn::to_string(p.traffic_class));
    d["bandwidth"] = std::string(ibn::to_string(p.bandwidth));
    d["tau_req_ms"] = p.tau_req_ms;
    d["target_sector"] = p.target_sector ? py::cast(*p.target_sector) : py::none();
    d["matched_keywords"] = p.matched_keywords;
    d["defaulted_class"] = p.defaulted_class;
    return d;
}

py::dict action_dict(const ibn::AgentAction& a) {
    py::dict d;
    d["kind"] = std::string(ibn::to_string(a.kind));
    const auto put = [&d](const char* key, const std::optional<std::string>& v) {
        if (v) d[key] = *v;
    };
    put("agent_name", a.agent_name);
    put("request", a.request);
    put("slice_id", a.slice_id);
    put("ran_config", a.ran_config);
    put("core_config", a.core_config);
    put("summary", a.summary);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Slice provisioning engine: topology, scoring, oracle, action grammar and CLI";

    py::register_exception<ibn::Error>(m, "Error");

    py::class_<ibn::NetworkState>(m, "NetworkState")
        .def_property_readonly("sector_ids",
                               [](const ibn::NetworkState& s) {
                                   std::vector<std::string> ids;
                                   for (const auto& [id, _] : s.sectors) ids.push_back(id);
                                   return ids;
                               })
        .def_property_readonly("node_ids", [](const ibn::NetworkState& s) {
            std::vector<std::string> ids;
            for (const auto& [id, _] : s.nodes) ids.push_back(id);
            return ids;
        });

    m.def("load_state", &ibn::load_state, py::arg("document"));
    m.def("load_state_file", &ibn::load_state_file, py::arg("path"));
    m.def("serialize_state", &ibn::serialize_state, py::arg("state"));
    m.def("default_data_dir", &ibn::default_data_dir);

    m.def(
        "classify_intent",
        [](const std::string& text, const ibn::NetworkState& state) {
            return profile_dict(ibn::classify_intent(text, state));
        },
        py::arg("text"), py::arg("state"));

    m.def(
        "compute_utility",
        [](const ibn::NetworkState& state, const std::string& sector, const std::string& band,
           const std::string& node, const std::string& traffic_class, const std::string& bandwidth,
           std::optional<double> tau_req_ms) {
            ibn::IntentProfile p;
            const auto cls = ibn::parse_traffic_class(traffic_class);
            const auto beta = ibn::parse_bandwidth_category(bandwidth);
            if (!cls || !beta) throw ibn::ValidationError("unknown traffic class or bandwidth category");
            p.traffic_class = *cls;
            p.bandwidth = *beta;
            p.tau_req_ms = tau_req_ms.value_or(ibn::default_tau_req_ms(*cls));
            const auto b = ibn::compute_utility({sector, band_arg(band), node, {}}, p, state);
            py::dict d;
            d["s_latency"] = b.s_latency;
            d["s_resource"] = b.s_resource;
            d["s_congestion"] = b.s_congestion;
            d["utility"] = b.utility;
            return d;
        },
        py::arg("state"), py::arg("sector"), py::arg("band"), py::arg("node"), py::arg("traffic_class"),
        py::arg("bandwidth"), py::arg("tau_req_ms") = py::none());

    m.def(
        "oracle",
        [](const std::string& text, const ibn::NetworkState& state, int top) {
            const auto ranking = ibn::solve(state, ibn::classify_intent(text, state));
            py::list out;
            for (int i = 0; i < top && i < static_cast<int>(ranking.size()); ++i) {
                auto d = config_dict(ranking[i].config);
                d["utility"] = ranking[i].breakdown.utility;
                d["feasible"] = ranking[i].constraints.feasible;
                out.append(d);
            }
            return out;
        },
        py::arg("text"), py::arg("state"), py::arg("top") = 1);

    m.def(
        "parse_action",
        [](const std::string& text) {
            py::list out;
            for (const auto& a : ibn::parse_action(text)) out.append(action_dict(a));
            return out;
        },
        py::arg("text"));

    m.def(
        "build_specialist_message", &ibn::build_specialist_message, py::arg("request"), py::arg("state"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code = 0;
            {
                py::gil_scoped_release release;
                code = ibn::run_cli(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}

#!/usr/bin/env python3
"""Regenerates fixtures/benchmark_suite.json, the scripted backend used by the
hermetic benchmark, compare and ablate runs.

Each script key is "<system>/<scenario id>". The multi_agent script for
industrial_automation is copied from fixtures/industrial_automation_trace.json;
the others are rendered from the templates below. Produced configurations,
token totals and call latencies are fixed data so the output is reproducible.

    python3 tools/gen_fixtures.py
"""

import json
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

ORCH_MARK = "ALWAYS consult specialists before provisioning"
RAN_MARK = "RAN Specialist"
CORE_MARK = "Core Network Specialist"
MERGED_MARK = "# Orchestration"
DIRECT_MARK = "You provision network slices"
GENERIC_ORCH = "You are a helpful network assistant"
GENERIC_RAN = "You are a helpful radio network assistant"
GENERIC_CORE = "You are a helpful core network assistant"

BAND_TEXT = {"mmwave": "mmWave", "mid_band": "mid-band", "low_band": "low-band"}

# (sector, band, node) per scenario in suite order; None = no provision in the turn.
MULTI_AGENT = {
    "esports_stadium": ("stadium_central", "mmwave", "mec_stadium_1"),
    "connected_ambulance_rural": ("rural_highway", "mid_band", "metro_agg_hub"),
    "ar_maintenance_industrial": ("industrial_park_a", "low_band", "mec_industrial_1"),
    "stadium_4k_streaming": ("city_plaza", "mmwave", "mec_stadium_1"),
    "suburban_fixed_wireless": ("suburban_residential", "mid_band", "regional_dc_north"),
    "highway_patrol_video": ("rural_highway", "mid_band", "mec_industrial_1"),
    "plaza_public_wifi": ("city_plaza", "mmwave", "regional_dc_north"),
    "smart_meters_suburban": ("stadium_central", "mid_band", "metro_agg_hub"),
    "agricultural_iot_rural": ("rural_highway", "mid_band", "mec_industrial_1"),
    "stadium_crowd_analytics": ("stadium_central", "mid_band", "mec_stadium_1"),
    "environmental_monitoring": ("city_plaza", "mid_band", "regional_dc_north"),
}

MONOLITHIC = {
    "esports_stadium": ("stadium_central", "mid_band", "mec_stadium_1"),
    "industrial_automation": ("industrial_park_a", "mmwave", "mec_industrial_1"),
    "connected_ambulance_rural": ("city_plaza", "mid_band", "metro_agg_hub"),
    "ar_maintenance_industrial": ("industrial_park_a", "mid_band", "mec_industrial_1"),
    "stadium_4k_streaming": ("stadium_central", "mmwave", "mec_stadium_1"),
    "suburban_fixed_wireless": ("stadium_central", "mid_band", "metro_agg_hub"),
    "highway_patrol_video": ("rural_highway", "mid_band", "regional_dc_north"),
    "plaza_public_wifi": ("city_plaza", "mmwave", "metro_agg_hub"),
    "smart_meters_suburban": ("suburban_residential", "mid_band", "regional_dc_north"),
    "agricultural_iot_rural": ("stadium_central", "mid_band", "metro_agg_hub"),
    "stadium_crowd_analytics": ("stadium_central", "mid_band", "metro_agg_hub"),
    "environmental_monitoring": ("city_plaza", "mid_band", "regional_dc_north"),
}

DIRECT_LLM = {
    "esports_stadium": ("stadium_central", "mid_band", "mec_stadium_1"),
    "industrial_automation": ("city_plaza", "mid_band", "mec_industrial_1"),
    "connected_ambulance_rural": ("rural_highway", "mid_band", "regional_dc_north"),
    "ar_maintenance_industrial": ("industrial_park_a", "low_band", "mec_industrial_1"),
    "stadium_4k_streaming": ("industrial_park_a", "mmwave", "mec_stadium_1"),
    "suburban_fixed_wireless": ("suburban_residential", "mid_band", "metro_agg_hub"),
    "highway_patrol_video": ("suburban_residential", "mid_band", "metro_agg_hub"),
    "plaza_public_wifi": ("city_plaza", "low_band", "metro_agg_hub"),
    "smart_meters_suburban": ("industrial_park_a", "mid_band", "metro_agg_hub"),
    "agricultural_iot_rural": ("rural_highway", "mid_band", "metro_agg_hub"),
    "stadium_crowd_analytics": ("industrial_park_a", "mid_band", "mec_stadium_1"),
    "environmental_monitoring": ("industrial_park_a", "mid_band", "metro_agg_hub"),
}

NO_PROMPTS = {
    "esports_stadium": ("stadium_central", "mmwave", "mec_stadium_1"),
    "industrial_automation": ("industrial_park_a", "mmwave", "mec_industrial_1"),
    "connected_ambulance_rural": ("industrial_park_a", "mid_band", "metro_agg_hub"),
    "ar_maintenance_industrial": ("suburban_residential", "mid_band", "mec_industrial_1"),
    "stadium_4k_streaming": ("stadium_central", "mmwave", "mec_stadium_1"),
    "suburban_fixed_wireless": ("city_plaza", "mid_band", "metro_agg_hub"),
    "highway_patrol_video": ("rural_highway", "mid_band", "mec_stadium_1"),
    "plaza_public_wifi": ("city_plaza", "mmwave", "regional_dc_north"),
    "smart_meters_suburban": ("rural_highway", "mid_band", "metro_agg_hub"),
    "agricultural_iot_rural": ("rural_highway", "low_band", "metro_agg_hub"),
    "stadium_crowd_analytics": ("stadium_central", "mid_band", "metro_agg_hub"),
    "environmental_monitoring": ("rural_highway", "mid_band", "metro_agg_hub"),
}

NO_SPECIALISTS = dict(MONOLITHIC)

NO_REACT = {
    "esports_stadium": ("stadium_central", "mmwave", "mec_stadium_1"),
    "industrial_automation": ("city_plaza", "mid_band", "mec_industrial_1"),
    "connected_ambulance_rural": None,
    "ar_maintenance_industrial": ("rural_highway", "mid_band", "mec_industrial_1"),
    "stadium_4k_streaming": ("city_plaza", "mmwave", "mec_stadium_1"),
    "suburban_fixed_wireless": ("city_plaza", "mid_band", "metro_agg_hub"),
    "highway_patrol_video": ("stadium_central", "mid_band", "metro_agg_hub"),
    "plaza_public_wifi": ("city_plaza", "mmwave", "metro_agg_hub"),
    "smart_meters_suburban": ("suburban_residential", "low_band", "metro_agg_hub"),
    "agricultural_iot_rural": None,
    "stadium_crowd_analytics": ("stadium_central", "mid_band", "metro_agg_hub"),
    "environmental_monitoring": ("city_plaza", "mid_band", "metro_agg_hub"),
}

# Total tokens and wall seconds of one multi_agent run per scenario.
MULTI_AGENT_USAGE = {
    "esports_stadium": (13363, 3.2),
    "industrial_automation": (13573, 4.0),
    "connected_ambulance_rural": (13617, 3.5),
    "ar_maintenance_industrial": (12989, 3.1),
    "stadium_4k_streaming": (12587, 3.3),
    "suburban_fixed_wireless": (13731, 3.3),
    "highway_patrol_video": (13101, 3.1),
    "plaza_public_wifi": (13799, 3.3),
    "smart_meters_suburban": (13085, 3.6),
    "agricultural_iot_rural": (13021, 3.2),
    "stadium_crowd_analytics": (13557, 3.5),
    "environmental_monitoring": (12951, 3.1),
}

# Base tokens / seconds for the other systems; a small per-scenario offset is added.
BASE_USAGE = {
    "monolithic": (1894, 0.8),
    "direct_llm": (1157, 0.6),
    "no_prompts": (9850, 2.9),
    "no_specialists": (4120, 1.4),
    "no_react": (2060, 0.7),
}

# Share of a run's tokens per exchange and prompt share within each exchange.
FIVE_CALL_SPLIT = [0.12, 0.20, 0.20, 0.20, 0.28]
PROMPT_SHARE = [0.87, 0.73, 0.93, 0.79, 0.93]


def offset(i):
    return ((i * 37) % 11 - 5) * 13


def split_usage(total_tokens, seconds, shares, prompt_share):
    exchanges = []
    used_tokens, used_ms = 0, 0
    total_ms = round(seconds * 1000)
    for k, share in enumerate(shares):
        last = k == len(shares) - 1
        tokens = total_tokens - used_tokens if last else round(total_tokens * share)
        ms = total_ms - used_ms if last else round(total_ms * share)
        used_tokens += tokens
        used_ms += ms
        prompt = round(tokens * prompt_share[k])
        exchanges.append((prompt, tokens - prompt, ms / 1000))
    return exchanges


def load_state():
    doc = json.loads((ROOT / "topology" / "metro_6g.json").read_text())
    return doc["sectors"], doc["nodes"]


SECTORS, NODES = load_state()


def latency(sector, node):
    return NODES[node]["latency_to_ran_ms"][sector]


def provision_lines(slice_id, config, summary):
    sector, band, node = config
    return (
        f"ACTION: PROVISION_SLICE | slice_id={slice_id} | ran_config={BAND_TEXT[band]}@{sector} "
        f"| core_config=UPF@{node}\n"
        f"ACTION: FINISH | summary={summary}"
    )


def summary_for(scenario, config):
    sector, band, node = config
    return (
        f"Slice for {scenario['id'].replace('_', ' ')} on {BAND_TEXT[band]} at {sector} "
        f"with the UPF at {node} ({latency(sector, node)} ms)."
    )


def bound_text(scenario):
    return {"URLLC": "a latency bound near 10 ms", "eMBB": "high throughput", "mMTC": "many low-rate devices"}[
        scenario["category"]
    ]


def with_usage(exchanges, usage):
    out = []
    for ex, (p, c, s) in zip(exchanges, usage):
        ex = dict(ex)
        ex["prompt_tokens"] = p
        ex["completion_tokens"] = c
        ex["latency_seconds"] = s
        out.append(ex)
    return out


def five_call_script(scenario, config, marks, generic):
    orch_mark, ran_mark, core_mark = marks
    sector, band, node = config
    target = scenario["golden"]["sector"]
    cls = scenario["category"]
    load = SECTORS[sector]["load_percentage"]
    tload = SECTORS[target]["load_percentage"]

    if generic:
        q1 = f"What radio band should I use for this request at {target}?"
        ran_reply = (
            f"{target} has {SECTORS[target]['active_users']} active users and is at {tload}% load. "
            f"{BAND_TEXT[band]} at {sector} looks like a reasonable choice."
        )
        q2 = f"Which core node should host the UPF for {BAND_TEXT[band]} at {sector}?"
        core_reply = f"{node} is reachable from {sector} in {latency(sector, node)} ms and has spare compute."
    else:
        q1 = (
            f"Can {target} carry {cls} traffic with {bound_text(scenario)}? "
            f"Which of mmWave, mid-band or low-band do you recommend?"
        )
        moved = "" if sector == target else (
            f" {target} is at {tload}% load, so the slice moves to the neighbouring sector {sector} (load {load}%)."
        )
        warning = f"Sector {sector} is at {load}% load." if load > 80 else "none"
        ran_reply = (
            f"**ANALYSIS FOR {target.upper()}**\n\n"
            f"Active users: {SECTORS[target]['active_users']}, load {tload}%.{moved}\n\n"
            f"RECOMMENDATION: Use {BAND_TEXT[band]} at {sector} for {cls} traffic.\n"
            f"WARNING: {warning}"
        )
        q2 = (
            f"Given {BAND_TEXT[band]} at {sector} for {cls} traffic with {bound_text(scenario)}, "
            f"which UPF node should host the slice?"
        )
        rows = "\n".join(
            f"- {n}: {latency(sector, n)}ms, compute {NODES[n]['compute_load_percent']}%" for n in sorted(NODES)
        )
        core_reply = (
            f"Latencies from {sector}:\n{rows}\n\n"
            f"RECOMMENDATION: Deploy UPF at {node} to achieve {latency(sector, node)}ms latency from {sector}."
        )

    slice_id = f"{scenario['id']}_001"
    exchanges = [
        {
            "matcher": {"system": orch_mark, "contains": scenario["intent_text"]},
            "response": f"THOUGHT: The request targets {target}. I will ask about the radio side first.\n\n"
            f"ACTION: CALL_AGENT | agent_name=ran_specialist | request={q1}",
        },
        {"matcher": {"system": ran_mark, "contains": "ORCHESTRATOR REQUEST:\n" + q1}, "response": ran_reply},
        {
            "matcher": {"system": orch_mark, "contains": "Observation: " + ran_reply[:40]},
            "response": f"THOUGHT: The radio side suggests {BAND_TEXT[band]} at {sector}. Next the UPF placement.\n\n"
            f"ACTION: CALL_AGENT | agent_name=core_specialist | request={q2}",
        },
        {"matcher": {"system": core_mark, "contains": "ORCHESTRATOR REQUEST:\n" + q2}, "response": core_reply},
        {
            "matcher": {"system": orch_mark, "contains": "Observation: " + core_reply[:40]},
            "response": f"THOUGHT: Both recommendations are in and consistent. Provisioning the slice.\n\n"
            + provision_lines(slice_id, config, summary_for(scenario, config)),
        },
    ]
    return exchanges


def single_turn_script(scenario, config, system_mark):
    slice_id = f"{scenario['id']}_001"
    if config is None:
        response = (
            f"THOUGHT: The request targets {scenario['golden']['sector']}. I need the radio view first.\n\n"
            f"ACTION: CALL_AGENT | agent_name=ran_specialist | request=Which band fits this request?"
        )
    else:
        sector, band, node = config
        response = (
            f"THOUGHT: From the network state, {BAND_TEXT[band]} at {sector} with the UPF at {node} "
            f"({latency(sector, node)} ms) fits the request.\n\n"
            + provision_lines(slice_id, config, summary_for(scenario, config))
        )
    return [{"matcher": {"system": system_mark, "contains": "CURRENT NETWORK STATE:"}, "response": response}]


def no_specialists_script(scenario, config):
    first = {
        "matcher": {"system": ORCH_MARK, "contains": "CURRENT NETWORK STATE:"},
        "response": f"THOUGHT: I should check the radio side for {scenario['golden']['sector']} first.\n\n"
        "ACTION: CALL_AGENT | agent_name=ran_specialist | request=Which band fits this request?",
    }
    second = single_turn_script(scenario, config, ORCH_MARK)[0]
    second["matcher"] = {"system": ORCH_MARK, "contains": "Specialist consultation is not available"}
    return [first, second]


def main():
    suite = json.loads((ROOT / "scenarios" / "benchmark12.json").read_text())["scenarios"]
    trace = json.loads((ROOT / "fixtures" / "industrial_automation_trace.json").read_text())["exchanges"]
    scripts = {}
    for i, s in enumerate(suite):
        sid = s["id"]
        if sid == "industrial_automation":
            scripts[f"multi_agent/{sid}"] = trace
        else:
            tokens, seconds = MULTI_AGENT_USAGE[sid]
            ex = five_call_script(s, MULTI_AGENT[sid], (ORCH_MARK, RAN_MARK, CORE_MARK), generic=False)
            scripts[f"multi_agent/{sid}"] = with_usage(ex, split_usage(tokens, seconds, FIVE_CALL_SPLIT, PROMPT_SHARE))

        def base(system):
            tokens, seconds = BASE_USAGE[system]
            return tokens + offset(i), seconds

        t, sec = base("no_prompts")
        ex = five_call_script(s, NO_PROMPTS[sid], (GENERIC_ORCH, GENERIC_RAN, GENERIC_CORE), generic=True)
        scripts[f"no_prompts/{sid}"] = with_usage(ex, split_usage(t, sec, FIVE_CALL_SPLIT, PROMPT_SHARE))

        t, sec = base("monolithic")
        ex = single_turn_script(s, MONOLITHIC[sid], MERGED_MARK)
        scripts[f"monolithic/{sid}"] = with_usage(ex, split_usage(t, sec, [1.0], [0.9]))

        t, sec = base("direct_llm")
        ex = single_turn_script(s, DIRECT_LLM[sid], DIRECT_MARK)
        scripts[f"direct_llm/{sid}"] = with_usage(ex, split_usage(t, sec, [1.0], [0.88]))

        t, sec = base("no_specialists")
        ex = no_specialists_script(s, NO_SPECIALISTS[sid])
        scripts[f"no_specialists/{sid}"] = with_usage(ex, split_usage(t, sec, [0.45, 0.55], [0.95, 0.9]))

        t, sec = base("no_react")
        ex = single_turn_script(s, NO_REACT[sid], ORCH_MARK)
        scripts[f"no_react/{sid}"] = with_usage(ex, split_usage(t, sec, [1.0], [0.9]))

    out = ROOT / "fixtures" / "benchmark_suite.json"
    out.write_text(json.dumps({"scripts": dict(sorted(scripts.items()))}, indent=2, ensure_ascii=False) + "\n")
    print(f"wrote {len(scripts)} scripts to {out.relative_to(ROOT)}")


if __name__ == "__main__":
    main()

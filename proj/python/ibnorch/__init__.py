"""Python bindings for the slice provisioning engine."""

from ._core import (
    Error,
    NetworkState,
    build_specialist_message,
    classify_intent,
    compute_utility,
    default_data_dir,
    load_state,
    load_state_file,
    oracle,
    parse_action,
    run_cli,
    serialize_state,
)

__all__ = [
    "Error",
    "NetworkState",
    "build_specialist_message",
    "classify_intent",
    "compute_utility",
    "default_data_dir",
    "load_state",
    "load_state_file",
    "oracle",
    "parse_action",
    "run_cli",
    "serialize_state",
]

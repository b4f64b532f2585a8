"""Axiom catalogs, instantiation and rewriting."""

from .base import (
    Param,
    Rule,
    RuleInstance,
    SideConditionError,
    catalog,
    check_instance,
    decode_params,
    get_rule,
    instantiate,
    soundness_check,
)
from .rewrite import ReplayError, SiteMismatchError, apply, find_sites, load_script, replay
from .zx import convolve_phase_vectors, hx_scalar, k2_transform, solve_pc, ww_quantities

__all__ = [
    "Param", "Rule", "RuleInstance", "SideConditionError", "catalog", "check_instance",
    "decode_params", "get_rule", "instantiate", "soundness_check", "ReplayError",
    "SiteMismatchError", "apply", "find_sites", "load_script", "replay",
    "convolve_phase_vectors", "hx_scalar", "k2_transform", "solve_pc", "ww_quantities",
]

"""Derivative-free box-constrained minimizers."""

from .abc import AbcConfig, abc_fitness, abc_minimize
from .base import Objective, RunRecord, spawn_rngs
from .chain import OPTIMIZERS, chain, run_stage, stage_from_dict
from .pattern import PatternSearchConfig, pattern_search_minimize, poll_directions
from .pso import PsoConfig, pso_minimize
from .sga import SgaConfig, polynomial_mutation, sga_minimize

__all__ = [
    "AbcConfig",
    "OPTIMIZERS",
    "Objective",
    "PatternSearchConfig",
    "PsoConfig",
    "RunRecord",
    "SgaConfig",
    "abc_fitness",
    "abc_minimize",
    "chain",
    "pattern_search_minimize",
    "poll_directions",
    "polynomial_mutation",
    "pso_minimize",
    "run_stage",
    "sga_minimize",
    "spawn_rngs",
    "stage_from_dict",
]

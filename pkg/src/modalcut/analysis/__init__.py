"""Normalization, reduction graphs, verdicts and random generation."""

from .generate import POOL, gen_beta_redex, gen_typed, root_constructor
from .rewriting import (
    STRATEGIES, Edge, GraphReport, Step, Trace, choose, default_stepper, normalize,
    reduction_graph,
)
from .verdicts import (
    KINDS, TRANSLATIONS, Verdict, check_confluence, check_embedding, check_simulation,
    check_subject_reduction, eager_beta, joinable, overlap_shapes, overlaps, search_path,
    sigma_pi_overlap,
)

__all__ = [
    "POOL", "gen_beta_redex", "gen_typed", "root_constructor",
    "STRATEGIES", "Edge", "GraphReport", "Step", "Trace", "choose", "default_stepper",
    "normalize", "reduction_graph",
    "KINDS", "TRANSLATIONS", "Verdict", "check_confluence", "check_embedding",
    "check_simulation", "check_subject_reduction", "eager_beta", "joinable",
    "overlap_shapes", "overlaps", "search_path", "sigma_pi_overlap",
]

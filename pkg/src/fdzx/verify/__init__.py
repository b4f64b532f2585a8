"""Suite runners and the random diagram generator."""

from .fixtures import A1_FIXTURES
from .random import RandomDiagramSpec, random_diagram, random_diagrams
from .suites import (
    perturb,
    run_axiom_suite,
    run_lemma_suite,
    run_translation_suite,
)

__all__ = [
    "A1_FIXTURES",
    "RandomDiagramSpec",
    "perturb",
    "random_diagram",
    "random_diagrams",
    "run_axiom_suite",
    "run_lemma_suite",
    "run_translation_suite",
]

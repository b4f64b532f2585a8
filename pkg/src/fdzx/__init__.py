"""Finite-dimensional ZX and ZW diagrams: semantics, rules, translations, checks."""

from .diagram import (
    ZW,
    ZX,
    BasisKet,
    BoundarySignature,
    Builder,
    Cap,
    CompositionError,
    Cup,
    Diagram,
    DiagramError,
    Embedding,
    GlobalScalar,
    Identity,
    Swap,
    ValidationError,
    WNode,
    XSpider,
    ZSpider,
    ZWCap,
    ZWCup,
    ZWIdentity,
    ZWKet,
    ZWScalar,
    ZWSpider,
    ZWSwap,
    canonical,
    compose_par,
    compose_seq,
    permutation,
    transpose,
    validate,
)
from .report import CheckRecord, VerificationReport
from .rules import RuleInstance, SideConditionError, apply, catalog, instantiate, replay, soundness_check
from .semantics import (
    DEFAULT_TOL,
    EquivalenceVerdict,
    ResourceError,
    Tensor,
    apply_basis,
    diagrams_equal,
    interpret,
    tensor_equal,
)
from .serialize import ParseError, SchemaError, canonical_json, deserialize, dump, load, serialize
from .translate import RoundTrip, TranslationTrace, round_trip_zx, to_zw, to_zx, translate

__version__ = "0.1.0"

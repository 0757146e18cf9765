"""Probabilistic-argumentative reasoning over cyber attribution problems.

The package couples two knowledge models. The environmental model holds
probabilistic formulas over ground atoms and answers queries by linear
programming over possible worlds. The analytical model holds strict and
defeasible constructs and answers queries by dialectical analysis. An
annotation function ties analytical elements to environmental formulas so
that warrant can be evaluated world by world and lifted back to
probability intervals.
"""

from .am import (
    AMElement,
    AMProgram,
    Argument,
    DialecticalNode,
    arguments_for,
    attacks,
    build_dialectical_tree,
    defeaters,
    dialectical_forest,
    ground_program,
    instantiate,
    prefers,
    warrant_status,
)
from .attribution import (
    AttributionResult,
    EvidenceItem,
    apply_evidence,
    most_probable_suspects,
)
from .bridge import AnnotationFunction, InCAFramework
from .em import (
    EMKnowledgeBase,
    IntegrityConstraint,
    ProbabilisticFormula,
    ProbabilityInterval,
    enumerate_worlds,
    is_consistent,
    lp_bounds,
    max_entailment,
    worlds_satisfying,
)
from .errors import (
    AssemblyError,
    CapacityError,
    DistributionError,
    GroundednessError,
    InCAError,
    InconsistentEvidenceError,
    InconsistentKBError,
    InternalInconsistencyError,
    ParseError,
    SortError,
)
from .kbformat import (
    KBDocument,
    assemble,
    format_fraction,
    load_kb,
    parse_evidence,
    parse_kb,
    parse_literal_text,
    parse_query,
    render_kb,
    render_world,
)
from .language import (
    Atom,
    Formula,
    Literal,
    Term,
    World,
    conj,
    conj_all,
    disj,
    disj_all,
    neg,
)

__all__ = [
    "AMElement",
    "AMProgram",
    "AnnotationFunction",
    "Argument",
    "AssemblyError",
    "Atom",
    "AttributionResult",
    "CapacityError",
    "DialecticalNode",
    "DistributionError",
    "EMKnowledgeBase",
    "EvidenceItem",
    "Formula",
    "GroundednessError",
    "InCAError",
    "InCAFramework",
    "InconsistentEvidenceError",
    "InconsistentKBError",
    "IntegrityConstraint",
    "InternalInconsistencyError",
    "KBDocument",
    "Literal",
    "ParseError",
    "ProbabilisticFormula",
    "ProbabilityInterval",
    "SortError",
    "Term",
    "World",
    "apply_evidence",
    "arguments_for",
    "assemble",
    "attacks",
    "build_dialectical_tree",
    "conj",
    "conj_all",
    "defeaters",
    "dialectical_forest",
    "disj",
    "disj_all",
    "enumerate_worlds",
    "format_fraction",
    "ground_program",
    "instantiate",
    "is_consistent",
    "load_kb",
    "lp_bounds",
    "max_entailment",
    "most_probable_suspects",
    "neg",
    "parse_evidence",
    "parse_kb",
    "parse_literal_text",
    "parse_query",
    "prefers",
    "render_kb",
    "render_world",
    "warrant_status",
    "worlds_satisfying",
]

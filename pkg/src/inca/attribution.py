"""Attribution queries: rank suspects by how probably they conducted an
operation, under the knowledge base extended with case-specific evidence."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .am import SORTED_PREDICATES
from .bridge import InCAFramework
from .em import (
    EMKnowledgeBase,
    ProbabilisticFormula,
    ProbabilityInterval,
    is_consistent,
)
from .errors import InconsistentEvidenceError, SortError
from .language import (
    AM,
    ROLE_ACTOR,
    ROLE_OPERATION,
    Atom,
    Literal,
    Term,
    World,
    atom_formula,
)

MIDPOINT = "midpoint"
LOWER = "lower"
COMPARISONS = (MIDPOINT, LOWER)

# Minimal-conflict search is exponential; beyond this many formulas the
# error simply reports no subset.
CONFLICT_SEARCH_LIMIT = 12


@dataclass(frozen=True)
class EvidenceItem:
    """One piece of evidence: an environmental atom that holds with the given
    probability, by default with certainty."""

    atom: Atom
    p: Fraction = Fraction(1)
    eps: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "eps", Fraction(self.eps))
        self.to_formula()  # reuse its validation

    def to_formula(self) -> ProbabilisticFormula:
        return ProbabilisticFormula(atom_formula(self.atom), self.p, self.eps)

    def __str__(self) -> str:
        return f"{self.atom} : {self.p} +- {self.eps}"


def _minimal_conflict(formulas, constraints, max_atoms):
    if len(formulas) > CONFLICT_SEARCH_LIMIT:
        return ()
    for size in range(1, len(formulas) + 1):
        for combo in itertools.combinations(formulas, size):
            kb = EMKnowledgeBase(formulas=combo, constraints=constraints)
            if not is_consistent(kb, max_atoms):
                return combo
    return tuple(formulas)


def apply_evidence(framework: InCAFramework, evidence) -> InCAFramework:
    """New framework whose probabilistic knowledge base also holds the
    evidence; the atom universe grows as needed. Raises
    InconsistentEvidenceError when nothing satisfies the combination, with a
    minimal conflicting formula set attached when small enough to find."""
    items = tuple(evidence)
    if not items:
        return framework
    em = framework.em
    formulas = tuple(em.formulas) + tuple(i.to_formula() for i in items)
    universe = list(em.atom_universe)
    for item in items:
        if item.atom not in universe:
            universe.append(item.atom)
    kb = EMKnowledgeBase(
        formulas=formulas,
        constraints=em.constraints,
        atom_universe=tuple(universe),
    )
    if not is_consistent(kb, framework.max_atoms):
        conflict = _minimal_conflict(
            formulas, em.constraints, framework.max_atoms
        )
        raise InconsistentEvidenceError(
            "evidence is inconsistent with the knowledge base", conflict
        )
    return InCAFramework(
        em=kb,
        program=framework.program,
        annotations=framework.annotations,
        max_atoms=framework.max_atoms,
        specificity_cap=framework.specificity_cap,
    )


def _positional_roles(program) -> dict[str, set[str]]:
    roles: dict[str, set[str]] = {}
    for e in program.elements:
        for lit in (e.head, *e.body):
            sig = SORTED_PREDICATES.get(lit.atom.predicate)
            if sig is None:
                continue
            for term, role in zip(lit.atom.args, sig):
                roles.setdefault(term.name, set()).add(role)
    return roles


@dataclass(frozen=True)
class SuspectReport:
    suspect: str
    interval: ProbabilityInterval


@dataclass(frozen=True)
class Trace:
    """Why a suspect is implicated: one world that warrants the conducting
    literal, plus the marked dialectical forest in that world."""

    suspect: str
    literal: Literal
    world: World
    forest: tuple


@dataclass(frozen=True)
class AttributionResult:
    most_probable: tuple[str, ...]
    reports: tuple[SuspectReport, ...]
    traces: tuple[Trace, ...]


def _conducting_literal(suspect: str, operation: str) -> Literal:
    atom = Atom(
        "condOp",
        (Term(suspect, ROLE_ACTOR), Term(operation, ROLE_OPERATION)),
        AM,
    )
    return Literal(atom)


def most_probable_suspects(
    framework: InCAFramework,
    operation: str,
    suspects,
    evidence=(),
    compare: str = MIDPOINT,
) -> AttributionResult:
    """Bound the probability that each suspect conducted the operation and
    keep the ones whose interval compares best: by midpoint unless the
    caller opts into comparing lower bounds. Ties all stay in."""
    if compare not in COMPARISONS:
        raise ValueError(f"compare must be one of {COMPARISONS}")
    names = list(dict.fromkeys(suspects))
    if not names:
        raise ValueError("no suspects given")
    roles = _positional_roles(framework.program)
    for name in names:
        seen = roles.get(name, set())
        if seen and ROLE_ACTOR not in seen:
            raise SortError(f"{name} is not an actor")
    op_roles = roles.get(operation, set())
    if op_roles and ROLE_OPERATION not in op_roles:
        raise SortError(f"{operation} is not an operation")

    extended = apply_evidence(framework, evidence)
    reports = []
    for name in names:
        literal = _conducting_literal(name, operation)
        reports.append(SuspectReport(name, extended.prob_bounds(literal)))

    def score(report: SuspectReport) -> Fraction:
        if compare == LOWER:
            return report.interval.lower
        return report.interval.p

    best = max(score(r) for r in reports)
    most = tuple(sorted(r.suspect for r in reports if score(r) == best))

    traces = []
    for name in most:
        literal = _conducting_literal(name, operation)
        nec = extended.nec_set(literal)
        if not nec:
            continue
        world = nec[0]
        traces.append(
            Trace(name, literal, world, extended.forest_in(world, literal))
        )
    return AttributionResult(
        most_probable=most,
        reports=tuple(reports),
        traces=tuple(traces),
    )

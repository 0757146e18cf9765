"""Couples the probabilistic and argumentation layers.

Every program element carries an annotation: an environmental-model formula
stating when the element can be used. In a given world only the elements
whose annotations hold are available, so each world induces its own
subprogram, its own dialectical forests, and its own warranted literals.
Probability bounds for a literal then come from the worlds that necessarily
(respectively possibly) warrant it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .am import (
    AMProgram,
    Argument,
    DEFAULT_SPECIFICITY_CAP,
    DialecticalNode,
    WARRANTED,
    index_for,
)
from .em import (
    DEFAULT_MAX_ATOMS,
    EMKnowledgeBase,
    ProbabilityInterval,
    enumerate_worlds,
    lp_extrema,
)
from .errors import AssemblyError, DistributionError, GroundednessError
from .language import (
    EM,
    Formula,
    Literal,
    TOP,
    World,
    atom_formula,
    disj_all,
    conj_all,
    formula_atoms,
    neg,
    satisfies,
)


def _base_label(label: str) -> str:
    return label.split("[", 1)[0]


@dataclass(frozen=True)
class AnnotationFunction:
    """Maps element labels to environmental-model formulas; unmapped labels
    default to true. Ground instances named label[...] inherit the schematic
    label's annotation unless mapped themselves."""

    mapping: tuple[tuple[str, Formula], ...] = ()

    def __post_init__(self):
        if isinstance(self.mapping, dict):
            items = self.mapping.items()
        else:
            items = self.mapping
        canonical = []
        seen = set()
        for label, formula in sorted(items, key=lambda pair: pair[0]):
            if label in seen:
                raise AssemblyError(f"duplicate annotation for {label}")
            seen.add(label)
            if formula.model not in (EM, None):
                raise AssemblyError(
                    f"annotation for {label} must be an environmental formula"
                )
            if not formula.is_ground:
                raise GroundednessError(
                    f"annotation for {label} must be ground"
                )
            if formula != TOP:
                canonical.append((label, formula))
        object.__setattr__(self, "mapping", tuple(canonical))

    def annotation_for(self, label: str) -> Formula:
        table = dict(self.mapping)
        if label in table:
            return table[label]
        return table.get(_base_label(label), TOP)

    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.mapping)


@dataclass(eq=False)
class InCAFramework:
    """A probabilistic knowledge base, a ground argumentation program, and
    the annotation function tying them together."""

    em: EMKnowledgeBase
    program: AMProgram
    annotations: AnnotationFunction = field(default_factory=AnnotationFunction)
    max_atoms: int = DEFAULT_MAX_ATOMS
    specificity_cap: int = DEFAULT_SPECIFICITY_CAP

    def __post_init__(self):
        if isinstance(self.annotations, dict):
            self.annotations = AnnotationFunction(self.annotations)
        if not self.program.is_ground:
            raise GroundednessError(
                "framework programs must be ground; instantiate first"
            )
        known = {e.label for e in self.program.elements}
        known |= {_base_label(e.label) for e in self.program.elements}
        universe = set(self.em.atom_universe)
        for label, formula in self.annotations.mapping:
            if label not in known:
                raise AssemblyError(f"annotation for unknown element {label}")
            for atom in formula_atoms(formula):
                if atom not in universe:
                    raise AssemblyError(
                        f"annotation for {label} mentions {atom}, which is "
                        "outside the atom universe"
                    )
        self._worlds: tuple[World, ...] | None = None
        self._warrants: dict[tuple, bool] = {}
        self._valid_labels: dict[World, frozenset[str]] = {}

    @property
    def index(self):
        return index_for(self.program, self.specificity_cap)

    @property
    def worlds(self) -> tuple[World, ...]:
        if self._worlds is None:
            self._worlds = tuple(enumerate_worlds(self.em, self.max_atoms))
        return self._worlds

    # -- validity -----------------------------------------------------------

    def valid_labels(self, world: World) -> frozenset[str]:
        cached = self._valid_labels.get(world)
        if cached is None:
            cached = frozenset(
                e.label
                for e in self.program.elements
                if satisfies(world, self.annotations.annotation_for(e.label))
            )
            self._valid_labels[world] = cached
        return cached

    def is_valid(self, argument: Argument, world: World) -> bool:
        """An argument can be used in a world iff the annotation of every
        element in its support holds there."""
        labels = self.valid_labels(world)
        return all(e.label in labels for e in argument.support)

    # -- world-indexed warrant ----------------------------------------------

    def _validity_test(self, world: World):
        labels = self.valid_labels(world)
        return lambda a: all(e.label in labels for e in a.support)

    def warrants_in(self, world: World, literal: Literal) -> bool:
        key = (self.valid_labels(world), literal.key())
        cached = self._warrants.get(key)
        if cached is None:
            status = self.index.warrant_status(literal, self._validity_test(world))
            cached = status == WARRANTED
            self._warrants[key] = cached
        return cached

    def forest_in(self, world: World, literal: Literal) -> tuple[DialecticalNode, ...]:
        return self.index.forest(literal, self._validity_test(world))

    def warrant_status_in(self, world: World, literal: Literal) -> str:
        return self.index.warrant_status(literal, self._validity_test(world))

    # -- nec / poss ----------------------------------------------------------

    def nec_set(self, literal: Literal) -> tuple[World, ...]:
        """Worlds whose induced subprogram warrants the literal."""
        return tuple(w for w in self.worlds if self.warrants_in(w, literal))

    def poss_set(self, literal: Literal) -> tuple[World, ...]:
        """Worlds where some argument for the literal is available and the
        complement is not warranted."""
        arguments = self.index.arguments_for(literal)
        out = []
        for w in self.worlds:
            if not any(self.is_valid(a, w) for a in arguments):
                continue
            if self.warrants_in(w, literal.complement()):
                continue
            out.append(w)
        return tuple(out)

    # -- probabilities --------------------------------------------------------

    def world_formula(self, world: World) -> Formula:
        """The formula satisfied by exactly this world: a conjunction fixing
        every universe atom's polarity."""
        parts = []
        for atom in self.em.atom_universe:
            f = atom_formula(atom)
            parts.append(f if atom in world else neg(f))
        return conj_all(parts)

    def _worlds_formula(self, worlds) -> Formula:
        return disj_all([self.world_formula(w) for w in worlds])

    def prob_bounds(self, literal: Literal) -> ProbabilityInterval:
        """Tight probability interval for the literal being warranted: the
        lower bound ranges over necessary worlds, the upper over possible
        ones."""
        lower_q = self._worlds_formula(self.nec_set(literal))
        upper_q = self._worlds_formula(self.poss_set(literal))
        lower, _ = lp_extrema(self.em, lower_q, self.max_atoms)
        _, upper = lp_extrema(self.em, upper_q, self.max_atoms)
        return ProbabilityInterval(lower, upper)

    def prob_from_distribution(
        self, literal: Literal, distribution: dict[World, Fraction]
    ) -> ProbabilityInterval:
        """Interval for one concrete distribution over the worlds."""
        allowed = set(self.worlds)
        total = Fraction(0)
        for world, pr in distribution.items():
            if world not in allowed:
                raise DistributionError(
                    "distribution assigns mass to a non-conforming world"
                )
            pr = Fraction(pr)
            if pr < 0:
                raise DistributionError("probabilities must be nonnegative")
            total += pr
        if total != 1:
            raise DistributionError(f"probabilities sum to {total}, not 1")
        lower = sum(
            (Fraction(distribution.get(w, 0)) for w in self.nec_set(literal)),
            Fraction(0),
        )
        upper = sum(
            (Fraction(distribution.get(w, 0)) for w in self.poss_set(literal)),
            Fraction(0),
        )
        return ProbabilityInterval(lower, upper)

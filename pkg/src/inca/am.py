"""Defeasible argumentation with presumptions.

A program holds facts, strict rules, presumptions, and defeasible rules.
Arguments are minimal defeasible proofs for a literal; competing arguments
attack each other, and dialectical trees with a recursive U/D marking decide
which literals come out warranted.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import (
    AssemblyError,
    CapacityError,
    GroundednessError,
    InternalInconsistencyError,
)
from .language import ROLE_ACTOR, ROLE_OPERATION, Literal, substitute_literal

FACT = "fact"
STRICT_RULE = "strict"
PRESUMPTION = "presumption"
DEFEASIBLE_RULE = "defeasible"
KINDS = (FACT, STRICT_RULE, PRESUMPTION, DEFEASIBLE_RULE)

PROPER = "proper"
BLOCKING = "blocking"

WARRANTED = "warranted"
NOT_WARRANTED = "not-warranted"
UNDECIDED = "undecided"

# Predicates with typed argument positions. A variable sitting in one of
# these positions only binds to constants that carry the matching role.
SORTED_PREDICATES = {
    "condOp": (ROLE_ACTOR, ROLE_OPERATION),
    "motiv": (ROLE_ACTOR, ROLE_ACTOR),
    "isCap": (ROLE_ACTOR, ROLE_OPERATION),
    "tgt": (ROLE_ACTOR, ROLE_OPERATION),
}

DEFAULT_SPECIFICITY_CAP = 16

_LABEL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(\[[A-Za-z0-9_,]+\])?\Z")


@dataclass(frozen=True)
class AMElement:
    """One labeled program element: fact, strict rule, presumption, or
    defeasible rule. Facts and presumptions carry no body; inequality guards
    live on schematic rules and disappear at grounding.
    """

    label: str
    kind: str
    head: Literal
    body: tuple[Literal, ...] = ()
    guards: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "body", tuple(self.body))
        object.__setattr__(self, "guards", tuple(tuple(g) for g in self.guards))
        if not _LABEL_RE.match(self.label):
            raise ValueError(f"bad element label: {self.label!r}")
        if self.kind not in KINDS:
            raise ValueError(f"bad element kind: {self.kind!r}")
        if self.kind in (FACT, PRESUMPTION):
            if self.body:
                raise ValueError(f"{self.kind} {self.label} cannot have a body")
            if self.guards:
                raise ValueError(f"{self.kind} {self.label} cannot have guards")
        else:
            if not self.body:
                raise ValueError(f"rule {self.label} needs a nonempty body")
        names = self.variables()
        for a, b in self.guards:
            if a not in names or b not in names:
                raise ValueError(
                    f"guard {a} != {b} on {self.label} names an unused variable"
                )

    @property
    def is_defeasible(self) -> bool:
        return self.kind in (PRESUMPTION, DEFEASIBLE_RULE)

    @property
    def is_ground(self) -> bool:
        return self.head.is_ground and all(b.is_ground for b in self.body)

    def variables(self) -> frozenset[str]:
        out = set(self.head.atom.variables())
        for b in self.body:
            out |= b.atom.variables()
        return frozenset(out)

    def __str__(self) -> str:
        if self.kind == FACT:
            return f"{self.label} : fact {self.head}"
        if self.kind == PRESUMPTION:
            return f"{self.label} : presume {self.head}"
        arrow = "<-" if self.kind == STRICT_RULE else "-<"
        parts = [str(b) for b in self.body]
        parts += [f"{a} != {b}" for a, b in self.guards]
        return f"{self.label} : {self.head} {arrow} {', '.join(parts)}"


@dataclass(frozen=True)
class AMProgram:
    elements: tuple[AMElement, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        seen = set()
        for e in self.elements:
            if e.label in seen:
                raise AssemblyError(f"duplicate element label: {e.label}")
            seen.add(e.label)
            if e.kind == FACT and e.head.atom.predicate == "condOp":
                raise AssemblyError(
                    f"{e.label}: condOp literals must be defeasible; "
                    "use a presumption or a rule"
                )

    def _of_kind(self, kind: str) -> tuple[AMElement, ...]:
        return tuple(e for e in self.elements if e.kind == kind)

    @property
    def theta(self) -> tuple[AMElement, ...]:
        return self._of_kind(FACT)

    @property
    def omega(self) -> tuple[AMElement, ...]:
        return self._of_kind(STRICT_RULE)

    @property
    def phi(self) -> tuple[AMElement, ...]:
        return self._of_kind(PRESUMPTION)

    @property
    def delta(self) -> tuple[AMElement, ...]:
        return self._of_kind(DEFEASIBLE_RULE)

    @property
    def is_ground(self) -> bool:
        return all(e.is_ground for e in self.elements)

    def by_label(self, label: str) -> AMElement:
        for e in self.elements:
            if e.label == label:
                return e
        raise KeyError(label)


def _role_constraints(literals) -> dict[str, set[str]]:
    out: dict[str, set[str]] = {}
    for lit in literals:
        sig = SORTED_PREDICATES.get(lit.atom.predicate)
        if sig is None:
            continue
        for term, role in zip(lit.atom.args, sig):
            if term.is_variable:
                out.setdefault(term.name, set()).add(role)
    return out


def _bindings(variables, constraints, constants):
    pools = []
    for v in variables:
        required = constraints.get(v, set())
        if required:
            pool = [c for c in constants if not c.is_variable and c.role in required]
        else:
            pool = [c for c in constants if not c.is_variable]
        pools.append(pool)
    for combo in itertools.product(*pools):
        yield dict(zip(variables, combo))


def instantiate(item, constants) -> tuple:
    """All ground instances of a schematic element or literal.

    Constants substitute for variables in a deterministic order (variables
    sorted by name, constants in the order given); bindings violating an
    inequality guard are dropped. Ground input comes back as-is.
    """
    constants = tuple(constants)
    if isinstance(item, Literal):
        if item.is_ground:
            return (item,)
        variables = sorted(item.atom.variables())
        constraints = _role_constraints([item])
        return tuple(
            substitute_literal(item, b)
            for b in _bindings(variables, constraints, constants)
        )
    if not isinstance(item, AMElement):
        raise TypeError(f"cannot instantiate {type(item).__name__}")
    if item.is_ground:
        return (item,)
    variables = sorted(item.variables())
    constraints = _role_constraints((item.head, *item.body))
    out = []
    for binding in _bindings(variables, constraints, constants):
        if any(binding[a].name == binding[b].name for a, b in item.guards):
            continue
        label = f"{item.label}[{','.join(binding[v].name for v in variables)}]"
        out.append(
            AMElement(
                label=label,
                kind=item.kind,
                head=substitute_literal(item.head, binding),
                body=tuple(substitute_literal(b, binding) for b in item.body),
            )
        )
    return tuple(out)


def ground_program(program: AMProgram, constants) -> AMProgram:
    elements = []
    for e in program.elements:
        elements.extend(instantiate(e, constants))
    return AMProgram(tuple(elements))


def _check_ground(elements):
    for e in elements:
        if not e.is_ground:
            raise GroundednessError(f"element {e.label} is not ground")


def _closure(elements, extra=(), strict_only=False) -> frozenset[Literal]:
    """Forward-chaining closure; facts and presumptions act as rules with an
    empty body, extra literals are injected as given."""
    if strict_only:
        pool = [e for e in elements if e.kind in (FACT, STRICT_RULE)]
    else:
        pool = list(elements)
    derived = set(extra)
    rules = []
    for e in pool:
        if e.kind in (FACT, PRESUMPTION):
            derived.add(e.head)
        else:
            rules.append(e)
    changed = True
    while changed:
        changed = False
        for r in rules:
            if r.head not in derived and all(b in derived for b in r.body):
                derived.add(r.head)
                changed = True
    return frozenset(derived)


def _contradictory(literals) -> bool:
    return any(lit.complement() in literals for lit in literals)


def derives(elements, literal: Literal, strict_only: bool = False) -> bool:
    """True iff the literal is in the forward-chaining closure of the set."""
    elements = tuple(elements)
    _check_ground(elements)
    return literal in _closure(elements, strict_only=strict_only)


def is_contradictory(elements, extra=()) -> bool:
    elements = tuple(elements)
    _check_ground(elements)
    return _contradictory(_closure(elements, extra=extra))


@dataclass(frozen=True)
class Argument:
    """A conclusion plus its support: the minimal defeasible elements that
    derive it along with the strict rules and facts the derivation uses."""

    support: frozenset
    conclusion: Literal

    def __post_init__(self):
        object.__setattr__(self, "support", frozenset(self.support))

    def _of_kind(self, kind: str) -> frozenset:
        return frozenset(e for e in self.support if e.kind == kind)

    @property
    def theta(self) -> frozenset:
        return self._of_kind(FACT)

    @property
    def omega(self) -> frozenset:
        return self._of_kind(STRICT_RULE)

    @property
    def phi(self) -> frozenset:
        return self._of_kind(PRESUMPTION)

    @property
    def delta(self) -> frozenset:
        return self._of_kind(DEFEASIBLE_RULE)

    @property
    def defeasible_part(self) -> frozenset:
        return frozenset(e for e in self.support if e.is_defeasible)

    @property
    def is_presumptive(self) -> bool:
        return bool(self.phi)

    @property
    def is_factual(self) -> bool:
        return not self.phi

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(sorted(e.label for e in self.support))

    def sort_key(self) -> tuple:
        return (self.labels, self.conclusion.key())

    def __str__(self) -> str:
        return f"<{{{', '.join(self.labels)}}}, {self.conclusion}>"


def is_subargument(b: Argument, a: Argument) -> bool:
    return b.support <= a.support


@dataclass
class DialecticalNode:
    """Tree node: an argument, how it defeats its parent (None at the root),
    its defeaters, and the U/D mark once the tree is marked."""

    argument: Argument
    defeat_kind: str | None = None
    children: list["DialecticalNode"] = field(default_factory=list)
    mark: str | None = None


def mark_tree(node: DialecticalNode) -> DialecticalNode:
    """In-place bottom-up marking: leaves U; an inner node is U iff every
    child is D."""
    for child in node.children:
        mark_tree(child)
    node.mark = "U" if all(c.mark == "D" for c in node.children) else "D"
    return node


class ProgramIndex:
    """Cached argumentation machinery over one ground program."""

    def __init__(self, program: AMProgram, specificity_cap: int = DEFAULT_SPECIFICITY_CAP):
        _check_ground(program.elements)
        self.program = program
        self.specificity_cap = specificity_cap
        self.strict_elements = tuple(
            e for e in program.elements if not e.is_defeasible
        )
        self.defeasible_elements = frozenset(
            e for e in program.elements if e.is_defeasible
        )
        self._by_head: dict[tuple, list[AMElement]] = {}
        for e in program.elements:
            self._by_head.setdefault(e.head.key(), []).append(e)
        self._arguments: dict[tuple, tuple[Argument, ...]] = {}
        self._all_arguments: tuple[Argument, ...] | None = None
        self._defeaters: dict[Argument, tuple] = {}
        self._prefers_ps: dict[tuple[Argument, Argument], bool] = {}
        self._mask_memo: dict[tuple, dict[int, int]] = {}
        self._bits: dict[Literal, int] | None = None
        self._contra_pairs: list[tuple[int, int]] | None = None

    # -- derivable literals ------------------------------------------------

    @property
    def derivable(self) -> frozenset[Literal]:
        try:
            return self._derivable
        except AttributeError:
            self._derivable = _closure(self.program.elements)
            return self._derivable

    # -- arguments ---------------------------------------------------------

    def _proofs(self, literal: Literal, visiting: frozenset) -> list[frozenset]:
        if literal in visiting:
            return []
        below = visiting | {literal}
        out: list[frozenset] = []
        seen: set[frozenset] = set()
        for e in self._by_head.get(literal.key(), ()):
            if e.kind in (FACT, PRESUMPTION):
                candidates = [frozenset((e,))]
            else:
                body_proofs = [self._proofs(b, below) for b in e.body]
                candidates = [
                    frozenset((e,)).union(*combo)
                    for combo in itertools.product(*body_proofs)
                ]
            for c in candidates:
                if c not in seen:
                    seen.add(c)
                    out.append(c)
        return out

    def _strict_support(self, defeasible_part: frozenset, literal: Literal) -> frozenset:
        # Drop strict elements one at a time (stable order) while the
        # conclusion still derives; what remains is the recorded strict part.
        keep = sorted(self.strict_elements, key=lambda e: e.label)
        for e in list(keep):
            trial = [x for x in keep if x is not e]
            if literal in _closure(tuple(defeasible_part) + tuple(trial)):
                keep = trial
        return frozenset(keep)

    def arguments_for(self, literal: Literal) -> tuple[Argument, ...]:
        key = literal.key()
        if key in self._arguments:
            return self._arguments[key]
        proofs = self._proofs(literal, frozenset())
        candidates = {p & self.defeasible_elements for p in proofs}
        strict = self.strict_elements
        valid = [
            d
            for d in candidates
            if not _contradictory(_closure(strict + tuple(d)))
        ]
        minimal = [d for d in valid if not any(d2 < d for d2 in valid)]
        args = tuple(
            sorted(
                (
                    Argument(d | self._strict_support(d, literal), literal)
                    for d in minimal
                ),
                key=Argument.sort_key,
            )
        )
        self._arguments[key] = args
        return args

    def all_arguments(self) -> tuple[Argument, ...]:
        if self._all_arguments is None:
            out = []
            for lit in sorted(self.derivable, key=Literal.key):
                out.extend(self.arguments_for(lit))
            self._all_arguments = tuple(out)
        return self._all_arguments

    def subarguments_of(self, a: Argument) -> tuple[Argument, ...]:
        return tuple(b for b in self.all_arguments() if b.support <= a.support)

    # -- attack ------------------------------------------------------------

    def attacks(self, a2: Argument, a1: Argument) -> bool:
        shared = [
            e
            for e in a1.support | a2.support
            if e.kind in (FACT, STRICT_RULE)
        ]
        for sub in self.subarguments_of(a1):
            closure = _closure(
                shared,
                extra=(a2.conclusion, sub.conclusion),
                strict_only=True,
            )
            if _contradictory(closure):
                return True
        return False

    # -- generalized specificity --------------------------------------------

    def _literal_bits(self):
        if self._bits is None:
            universe = sorted(self.derivable, key=Literal.key)
            if len(universe) > self.specificity_cap:
                raise CapacityError(
                    f"{len(universe)} defeasibly derivable literals exceed "
                    f"the specificity cap of {self.specificity_cap}"
                )
            self._bits = {lit: 1 << i for i, lit in enumerate(universe)}
            self._contra_pairs = [
                (bit, self._bits[lit.complement()])
                for lit, bit in self._bits.items()
                if lit.complement() in self._bits and not lit.negated
            ]
        return self._bits

    def _rule_masks(self, elements) -> tuple:
        bits = self._literal_bits()
        rules = []
        for e in elements:
            if e.kind not in (STRICT_RULE, DEFEASIBLE_RULE):
                continue
            if e.head not in bits or any(b not in bits for b in e.body):
                continue  # can never fire from derivable literals
            body = 0
            for b in e.body:
                body |= bits[b]
            rules.append((body, bits[e.head]))
        return tuple(rules)

    def _mask_closure(self, rules: tuple, mask: int) -> int:
        memo = self._mask_memo.setdefault(rules, {})
        cached = memo.get(mask)
        if cached is not None:
            return cached
        out = mask
        changed = True
        while changed:
            changed = False
            for body, head in rules:
                if out & head == 0 and out & body == body:
                    out |= head
                    changed = True
        memo[mask] = out
        return out

    def _mask_contradictory(self, mask: int) -> bool:
        return any(mask & a and mask & b for a, b in self._contra_pairs)

    def prefers_ps(self, a1: Argument, a2: Argument) -> bool:
        """Generalized specificity: a1 is strictly more specific than a2.

        Quantifies activation sets H over the defeasibly derivable literals;
        literals outside every rule body and distinct from both conclusions
        cannot change any of the tested derivations, so H ranges over the
        relevant ones only.
        """
        key = (a1, a2)
        if key in self._prefers_ps:
            return self._prefers_ps[key]
        bits = self._literal_bits()
        omega = a1.omega | a2.omega
        base_rules = self._rule_masks(sorted(omega, key=lambda e: e.label))
        r1 = self._rule_masks(
            sorted(omega | a1.delta, key=lambda e: e.label)
        )
        r2 = self._rule_masks(
            sorted(omega | a2.delta, key=lambda e: e.label)
        )
        l1 = bits[a1.conclusion]
        l2 = bits[a2.conclusion]
        relevant = l1 | l2
        for body, _ in base_rules + r1 + r2:
            relevant |= body

        cond1 = True
        cond2 = False
        sub = relevant
        while True:
            base = self._mask_closure(base_rules, sub)
            if not self._mask_contradictory(base):
                with1 = self._mask_closure(r1, sub)
                with2 = self._mask_closure(r2, sub)
                if with1 & l1 and not base & l1 and not with2 & l2:
                    cond1 = False
                    break
                if with2 & l2 and not base & l2 and not with1 & l1:
                    cond2 = True
            if sub == 0:
                break
            sub = (sub - 1) & relevant
        result = cond1 and cond2
        self._prefers_ps[key] = result
        return result

    def prefers(self, a1: Argument, a2: Argument) -> bool:
        if a1.is_factual and a2.is_factual:
            return self.prefers_ps(a1, a2)
        if a1.is_factual:
            return True
        if a2.is_factual:
            return False
        if a1.phi < a2.phi:
            return True
        if a1.phi == a2.phi:
            return self.prefers_ps(a1, a2)
        return False

    # -- defeat and dialectical trees ---------------------------------------

    def defeaters(self, a: Argument) -> tuple:
        if a in self._defeaters:
            return self._defeaters[a]
        out = []
        for b in self.all_arguments():
            if not self.attacks(b, a):
                continue
            if self.prefers(b, a):
                out.append((b, PROPER))
            elif not self.prefers(a, b):
                out.append((b, BLOCKING))
        result = tuple(sorted(out, key=lambda pair: (pair[1], pair[0].sort_key())))
        self._defeaters[a] = result
        return result

    def _line_consistent(self, side_args) -> bool:
        elements = set(self.strict_elements)
        for arg in side_args:
            elements |= arg.support
        return not _contradictory(_closure(tuple(elements)))

    def _expand(self, node: DialecticalNode, line: tuple, valid) -> None:
        for b, kind in self.defeaters(node.argument):
            if valid is not None and not valid(b):
                continue
            # A blocking defeater may only be answered by a proper one.
            if node.defeat_kind == BLOCKING and kind != PROPER:
                continue
            if any(b.support <= earlier.support for earlier in line):
                continue
            side = line[len(line) % 2 :: 2] + (b,)
            if not self._line_consistent(side):
                continue
            child = DialecticalNode(b, kind)
            node.children.append(child)
            self._expand(child, line + (b,), valid)

    def build_tree(self, root: Argument, valid=None) -> DialecticalNode:
        node = DialecticalNode(root)
        self._expand(node, (root,), valid)
        return node

    def forest(self, literal: Literal, valid=None) -> tuple[DialecticalNode, ...]:
        roots = [
            a
            for a in self.arguments_for(literal)
            if valid is None or valid(a)
        ]
        return tuple(mark_tree(self.build_tree(a, valid)) for a in roots)

    def warrant_status(self, literal: Literal, valid=None) -> str:
        pro = any(t.mark == "U" for t in self.forest(literal, valid))
        con = any(t.mark == "U" for t in self.forest(literal.complement(), valid))
        if pro and con:
            raise InternalInconsistencyError(
                f"both {literal} and its complement are warranted"
            )
        if pro:
            return WARRANTED
        if con:
            return NOT_WARRANTED
        return UNDECIDED


@lru_cache(maxsize=128)
def index_for(program: AMProgram, specificity_cap: int = DEFAULT_SPECIFICITY_CAP) -> ProgramIndex:
    return ProgramIndex(program, specificity_cap)


def arguments_for(program: AMProgram, literal: Literal) -> tuple[Argument, ...]:
    return index_for(program).arguments_for(literal)


def attacks(a2: Argument, a1: Argument, program: AMProgram) -> bool:
    return index_for(program).attacks(a2, a1)


def prefers_ps(a1: Argument, a2: Argument, program: AMProgram) -> bool:
    return index_for(program).prefers_ps(a1, a2)


def prefers(a1: Argument, a2: Argument, program: AMProgram) -> bool:
    return index_for(program).prefers(a1, a2)


def defeaters(a: Argument, program: AMProgram) -> tuple:
    return index_for(program).defeaters(a)


def build_dialectical_tree(root: Argument, program: AMProgram) -> DialecticalNode:
    return index_for(program).build_tree(root)


def dialectical_forest(literal: Literal, program: AMProgram) -> tuple[DialecticalNode, ...]:
    return index_for(program).forest(literal)


def warrant_status(literal: Literal, program: AMProgram) -> str:
    return index_for(program).warrant_status(literal)

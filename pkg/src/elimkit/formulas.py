"""Core syntax: atoms, literals, scopes, formulas, interpretations.

Atoms carry a predicate group encoded in their printed name: a name whose
main functor ends in digits denotes the base name with that group number
(``p1`` is ``p`` in group 1), a name with no trailing digits is group 0.
Scopes are symbolic literal-set expressions that are grounded against a
finite signature on demand.  Formulas are immutable trees; every value in
this module is hashable and safe to share.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

from .errors import OperatorPresentError, SignatureError


# ---------------------------------------------------------------------------
# terms and atoms

@dataclass(frozen=True)
class Term:
    """Ground term or variable occurring as an atom argument.

    A name starting with an uppercase letter is a quantified variable;
    everything else is a constant or a compound ground application.
    """

    name: str
    args: tuple["Term", ...] = ()

    @property
    def is_var(self) -> bool:
        return self.name[0].isupper()

    def is_ground(self) -> bool:
        return not self.is_var and all(t.is_ground() for t in self.args)

    def __str__(self) -> str:
        if not self.args:
            return self.name
        return f"{self.name}({','.join(str(t) for t in self.args)})"


@dataclass(frozen=True)
class Atom:
    """Propositional atom: base name, predicate group, ground arguments."""

    base: str
    group: int = 0
    args: tuple[Term, ...] = ()

    def __post_init__(self):
        if not self.base:
            raise ValueError("atom base must be nonempty")
        if self.base[-1].isdigit():
            raise ValueError(f"atom base may not end in a digit: {self.base!r}")
        if self.group < 0:
            raise ValueError("atom group must be a natural number")

    @property
    def name(self) -> str:
        """Printed functor: base suffixed by the group number unless 0."""
        return self.base + (str(self.group) if self.group else "")

    def is_ground(self) -> bool:
        return all(t.is_ground() for t in self.args)

    def correspondent(self, group: int) -> "Atom":
        """The same predicate in another group."""
        return Atom(self.base, group, self.args)

    def sort_key(self) -> str:
        return str(self)

    def __str__(self) -> str:
        if not self.args:
            return self.name
        return f"{self.name}({','.join(str(t) for t in self.args)})"


def atom_from_functor(functor: str, args: tuple[Term, ...] = ()) -> Atom:
    """Split a printed functor into base and group.

    The longest trailing run of decimal digits is the group number; an
    empty run means group 0.
    """
    i = len(functor)
    while i > 0 and functor[i - 1].isdigit():
        i -= 1
    if i == 0:
        raise ValueError(f"atom name must not be all digits: {functor!r}")
    base = functor[:i]
    group = int(functor[i:]) if i < len(functor) else 0
    return Atom(base, group, args)


@dataclass(frozen=True)
class Literal:
    atom: Atom
    positive: bool = True

    def complement(self) -> "Literal":
        return Literal(self.atom, not self.positive)

    def sort_key(self):
        return (self.atom.sort_key(), 0 if self.positive else 1)

    def __str__(self) -> str:
        return ("+" if self.positive else "-") + str(self.atom)


def pos(atom: Atom) -> Literal:
    return Literal(atom, True)


def neg(atom: Atom) -> Literal:
    return Literal(atom, False)


def all_literals(atoms: Iterable[Atom]) -> frozenset[Literal]:
    """Both literals of every atom."""
    return frozenset(Literal(a, s) for a in atoms for s in (True, False))


# ---------------------------------------------------------------------------
# scopes

@dataclass(frozen=True)
class ScopeAtomItem:
    """Unsigned atom in a scope list: shorthand for both of its literals."""

    atom: Atom


@dataclass(frozen=True)
class ScopeLiteralItem:
    literal: Literal


@dataclass(frozen=True)
class ScopeGroupItem:
    """Group wildcard: all literals of the group's atoms in the signature,
    or one polarity of them when sign is set."""

    group: int
    sign: Optional[bool] = None


ScopeItem = Union[ScopeAtomItem, ScopeLiteralItem, ScopeGroupItem]


@dataclass(frozen=True)
class ScopeList:
    items: tuple[ScopeItem, ...]


@dataclass(frozen=True)
class ScopeAll:
    pass


@dataclass(frozen=True)
class ScopeComplements:
    inner: "Scope"


@dataclass(frozen=True)
class ScopeUnion:
    left: "Scope"
    right: "Scope"


@dataclass(frozen=True)
class ScopeParam:
    """Placeholder for a macro's scope parameter inside a macro body."""

    name: str


Scope = Union[ScopeList, ScopeAll, ScopeComplements, ScopeUnion, ScopeParam]

EMPTY_SCOPE = ScopeList(())


def scope_from_literals(literals: Iterable[Literal]) -> ScopeList:
    """Explicit scope listing exactly the given literals."""
    items = tuple(ScopeLiteralItem(l)
                  for l in sorted(literals, key=Literal.sort_key))
    return ScopeList(items)


def scope_from_atoms(atoms: Iterable[Atom]) -> ScopeList:
    items = tuple(ScopeAtomItem(a) for a in sorted(atoms, key=Atom.sort_key))
    return ScopeList(items)


def ground_scope(scope: Scope, sig: Iterable[Atom]) -> frozenset[Literal]:
    """Ground a symbolic scope against a signature.

    Explicitly named atoms contribute their literals whether or not they
    belong to the signature; group wildcards and ALL range over the
    signature only.
    """
    sig = frozenset(sig)
    if isinstance(scope, ScopeList):
        out: set[Literal] = set()
        for item in scope.items:
            if isinstance(item, ScopeAtomItem):
                out.add(pos(item.atom))
                out.add(neg(item.atom))
            elif isinstance(item, ScopeLiteralItem):
                out.add(item.literal)
            elif isinstance(item, ScopeGroupItem):
                for a in sig:
                    if a.group != item.group:
                        continue
                    if item.sign is None:
                        out.add(pos(a))
                        out.add(neg(a))
                    else:
                        out.add(Literal(a, item.sign))
            else:
                raise TypeError(f"unknown scope item: {item!r}")
        return frozenset(out)
    if isinstance(scope, ScopeAll):
        return all_literals(sig)
    if isinstance(scope, ScopeComplements):
        return frozenset(l.complement() for l in ground_scope(scope.inner, sig))
    if isinstance(scope, ScopeUnion):
        return ground_scope(scope.left, sig) | ground_scope(scope.right, sig)
    if isinstance(scope, ScopeParam):
        raise OperatorPresentError(
            f"scope parameter {scope.name!r} not substituted")
    raise TypeError(f"unknown scope: {scope!r}")


def scope_explicit_atoms(scope: Scope) -> frozenset[Atom]:
    """Atoms named literally in the scope expression (wildcards excluded)."""
    if isinstance(scope, ScopeList):
        out = set()
        for item in scope.items:
            if isinstance(item, ScopeAtomItem):
                out.add(item.atom)
            elif isinstance(item, ScopeLiteralItem):
                out.add(item.literal.atom)
        return frozenset(out)
    if isinstance(scope, ScopeAll):
        return frozenset()
    if isinstance(scope, ScopeComplements):
        return scope_explicit_atoms(scope.inner)
    if isinstance(scope, ScopeUnion):
        return scope_explicit_atoms(scope.left) | scope_explicit_atoms(scope.right)
    if isinstance(scope, ScopeParam):
        return frozenset()
    raise TypeError(f"unknown scope: {scope!r}")


# ---------------------------------------------------------------------------
# formulas

class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


TRUE = Top()
FALSE = Bot()


@dataclass(frozen=True)
class AtomRef(Formula):
    atom: Atom


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ImpliedBy(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Equiv(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forg(Formula):
    scope: Scope
    arg: Formula


@dataclass(frozen=True)
class Proj(Formula):
    scope: Scope
    arg: Formula


@dataclass(frozen=True)
class Circ(Formula):
    scope: Scope
    arg: Formula


@dataclass(frozen=True)
class Rename(Formula):
    """Systematic renaming of whole predicate groups, as written in input:
    each pair (source, target) sends every source-group atom of the
    eliminated argument to its target-group correspondent."""

    pairs: tuple[tuple[int, int], ...]
    arg: Formula


@dataclass(frozen=True)
class RenameAtoms(Formula):
    """Renaming grounded to an explicit atom map (engine-internal form of
    Rename; the map is applied to the eliminated argument)."""

    mapping: tuple[tuple[Atom, Atom], ...]
    arg: Formula


@dataclass(frozen=True)
class MacroCall(Formula):
    name: str
    args: tuple[Union[Formula, Scope], ...]


@dataclass(frozen=True)
class ForAll(Formula):
    var: str
    arg: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    arg: Formula


@dataclass(frozen=True)
class FormulaParam(Formula):
    """Placeholder for a macro's formula parameter inside a macro body."""

    name: str


BINARY = (And, Or, Implies, ImpliedBy, Equiv)
OPERATOR_NODES = (Forg, Proj, Circ, Rename, RenameAtoms, MacroCall,
                  ForAll, Exists, FormulaParam)


def atom(name: str, *args: str) -> AtomRef:
    """Convenience constructor: ``atom("p1", "a")`` is p(a) in group 1."""
    return AtomRef(atom_from_functor(name, tuple(Term(a) for a in args)))


def and_all(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return TRUE
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def or_all(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return FALSE
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Or(p, out)
    return out


def literal_formula(l: Literal) -> Formula:
    return AtomRef(l.atom) if l.positive else Not(AtomRef(l.atom))


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Top, Bot, AtomRef, FormulaParam)):
        return ()
    if isinstance(f, Not):
        return (f.arg,)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    if isinstance(f, (Forg, Proj, Circ, Rename, RenameAtoms, ForAll, Exists)):
        return (f.arg,)
    if isinstance(f, MacroCall):
        return tuple(a for a in f.args if isinstance(a, Formula))
    raise TypeError(f"unknown formula node: {f!r}")


def with_arg(f: Formula, new: Formula) -> Formula:
    """Rebuild a single-child node around a new argument."""
    if isinstance(f, Not):
        return Not(new)
    if isinstance(f, Forg):
        return Forg(f.scope, new)
    if isinstance(f, Proj):
        return Proj(f.scope, new)
    if isinstance(f, Circ):
        return Circ(f.scope, new)
    if isinstance(f, Rename):
        return Rename(f.pairs, new)
    if isinstance(f, RenameAtoms):
        return RenameAtoms(f.mapping, new)
    if isinstance(f, ForAll):
        return ForAll(f.var, new)
    if isinstance(f, Exists):
        return Exists(f.var, new)
    raise TypeError(f"not a single-child node: {f!r}")


def is_operator_free(f: Formula) -> bool:
    """True when the formula contains no second-order operator, renaming,
    macro call, or quantifier node."""
    if isinstance(f, OPERATOR_NODES):
        return False
    return all(is_operator_free(c) for c in children(f))


def node_count(f: Formula) -> int:
    """AST size: the engine's formula size measure."""
    return 1 + sum(node_count(c) for c in children(f))


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    for c in children(f):
        yield from subformulas(c)


def atoms_of(f: Formula) -> frozenset[Atom]:
    """All atoms occurring in the formula, including scope literal items
    and operator arguments.  Rename nodes also contribute the target-group
    correspondents of their argument's source-group atoms, so that the
    global signature of a problem covers everything renaming can produce.
    """
    out: set[Atom] = set()
    _collect_atoms(f, out)
    return frozenset(out)


def _collect_atoms(f: Formula, out: set[Atom]) -> None:
    if isinstance(f, AtomRef):
        out.add(f.atom)
    elif isinstance(f, (Forg, Proj, Circ)):
        out.update(scope_explicit_atoms(f.scope))
        _collect_atoms(f.arg, out)
    elif isinstance(f, Rename):
        inner: set[Atom] = set()
        _collect_atoms(f.arg, inner)
        out.update(inner)
        for a in inner:
            for src, tgt in f.pairs:
                if a.group == src:
                    out.add(a.correspondent(tgt))
                    break
    elif isinstance(f, RenameAtoms):
        inner = set()
        _collect_atoms(f.arg, inner)
        out.update(inner)
        mapping = dict(f.mapping)
        for a in inner:
            if a in mapping:
                out.add(mapping[a])
    elif isinstance(f, MacroCall):
        for a in f.args:
            if isinstance(a, Formula):
                _collect_atoms(a, out)
            else:
                out.update(scope_explicit_atoms(a))
    else:
        for c in children(f):
            _collect_atoms(c, out)


def _require_operator_free(f: Formula, what: str) -> None:
    if not is_operator_free(f):
        raise OperatorPresentError(f"{what} requires an operator-free formula")


def substitute(f: Formula, a: Atom, replacement: Formula) -> Formula:
    """Replace every occurrence of the atom by the replacement formula."""
    _require_operator_free(f, "substitute")
    _require_operator_free(replacement, "substitute")
    return _subst(f, a, replacement)


def _subst(f: Formula, a: Atom, r: Formula) -> Formula:
    if isinstance(f, AtomRef):
        return r if f.atom == a else f
    if isinstance(f, (Top, Bot)):
        return f
    if isinstance(f, Not):
        new = _subst(f.arg, a, r)
        return f if new is f.arg else Not(new)
    if isinstance(f, BINARY):
        nl = _subst(f.left, a, r)
        nr = _subst(f.right, a, r)
        if nl is f.left and nr is f.right:
            return f
        return type(f)(nl, nr)
    raise OperatorPresentError(f"substitute cannot descend into {f!r}")


def substitute_atoms(f: Formula, mapping: dict[Atom, Atom]) -> Formula:
    """Simultaneously replace atoms by atoms in an operator-free formula."""
    _require_operator_free(f, "substitute_atoms")

    def walk(g: Formula) -> Formula:
        if isinstance(g, AtomRef):
            tgt = mapping.get(g.atom)
            return AtomRef(tgt) if tgt is not None else g
        if isinstance(g, (Top, Bot)):
            return g
        if isinstance(g, Not):
            new = walk(g.arg)
            return g if new is g.arg else Not(new)
        nl, nr = walk(g.left), walk(g.right)
        if nl is g.left and nr is g.right:
            return g
        return type(g)(nl, nr)

    return walk(f)


def to_nnf(f: Formula) -> Formula:
    """Negation normal form over And/Or/Not-of-atom/constants."""
    _require_operator_free(f, "to_nnf")
    return _nnf(f, False)


def _nnf(f: Formula, negated: bool) -> Formula:
    if isinstance(f, Top):
        return FALSE if negated else TRUE
    if isinstance(f, Bot):
        return TRUE if negated else FALSE
    if isinstance(f, AtomRef):
        return Not(f) if negated else f
    if isinstance(f, Not):
        return _nnf(f.arg, not negated)
    if isinstance(f, And):
        l, r = _nnf(f.left, negated), _nnf(f.right, negated)
        return Or(l, r) if negated else And(l, r)
    if isinstance(f, Or):
        l, r = _nnf(f.left, negated), _nnf(f.right, negated)
        return And(l, r) if negated else Or(l, r)
    if isinstance(f, Implies):
        return _nnf(Or(Not(f.left), f.right), negated)
    if isinstance(f, ImpliedBy):
        return _nnf(Or(f.left, Not(f.right)), negated)
    if isinstance(f, Equiv):
        unfolded = And(Or(f.left, Not(f.right)), Or(Not(f.left), f.right))
        return _nnf(unfolded, negated)
    raise OperatorPresentError(f"to_nnf cannot handle {f!r}")


class Polarity(enum.Enum):
    POS = "pos"
    NEG = "neg"
    BOTH = "both"
    NONE = "none"

    def __or__(self, other: "Polarity") -> "Polarity":
        if self is other or other is Polarity.NONE:
            return self
        if self is Polarity.NONE:
            return other
        return Polarity.BOTH


def polarity_of_atom(f: Formula, a: Atom) -> Polarity:
    """Sign(s) with which the atom occurs in the NNF of the formula."""
    return _polarity(to_nnf(f), a)


def _polarity(nnf: Formula, a: Atom) -> Polarity:
    if isinstance(nnf, AtomRef):
        return Polarity.POS if nnf.atom == a else Polarity.NONE
    if isinstance(nnf, Not):
        assert isinstance(nnf.arg, AtomRef)
        return Polarity.NEG if nnf.arg.atom == a else Polarity.NONE
    if isinstance(nnf, (And, Or)):
        return _polarity(nnf.left, a) | _polarity(nnf.right, a)
    return Polarity.NONE


# ---------------------------------------------------------------------------
# interpretations and evaluation

@dataclass(frozen=True)
class Interpretation:
    """Total truth assignment over an ordered signature."""

    atoms: tuple[Atom, ...]
    true_atoms: frozenset[Atom] = field(default_factory=frozenset)

    def __post_init__(self):
        if not self.true_atoms <= frozenset(self.atoms):
            raise SignatureError("true_atoms must lie within the signature")

    def value(self, a: Atom) -> bool:
        if a not in self.atoms:
            raise SignatureError(f"atom {a} outside interpretation signature")
        return a in self.true_atoms

    def literals(self) -> frozenset[Literal]:
        return frozenset(Literal(a, a in self.true_atoms) for a in self.atoms)

    @classmethod
    def from_bits(cls, atoms: tuple[Atom, ...], mask: int) -> "Interpretation":
        return cls(atoms, frozenset(a for i, a in enumerate(atoms)
                                    if mask >> i & 1))


def evaluate(f: Formula, interp: Interpretation) -> bool:
    """Classical truth-functional evaluation of an operator-free formula."""
    _require_operator_free(f, "evaluate")
    return _eval(f, interp)


def _eval(f: Formula, i: Interpretation) -> bool:
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, AtomRef):
        return i.value(f.atom)
    if isinstance(f, Not):
        return not _eval(f.arg, i)
    if isinstance(f, And):
        return _eval(f.left, i) and _eval(f.right, i)
    if isinstance(f, Or):
        return _eval(f.left, i) or _eval(f.right, i)
    if isinstance(f, Implies):
        return not _eval(f.left, i) or _eval(f.right, i)
    if isinstance(f, ImpliedBy):
        return _eval(f.left, i) or not _eval(f.right, i)
    if isinstance(f, Equiv):
        return _eval(f.left, i) == _eval(f.right, i)
    raise OperatorPresentError(f"evaluate cannot handle {f!r}")


# ---------------------------------------------------------------------------
# constant propagation

def simplify_constants(f: Formula) -> Formula:
    """Propagate truth constants bottom-up; returns the same object when
    nothing changes."""
    if isinstance(f, (Top, Bot, AtomRef, FormulaParam)):
        return f
    if isinstance(f, Not):
        a = simplify_constants(f.arg)
        if isinstance(a, Top):
            return FALSE
        if isinstance(a, Bot):
            return TRUE
        return f if a is f.arg else Not(a)
    if isinstance(f, And):
        l, r = simplify_constants(f.left), simplify_constants(f.right)
        if isinstance(l, Bot) or isinstance(r, Bot):
            return FALSE
        if isinstance(l, Top):
            return r
        if isinstance(r, Top):
            return l
        return f if (l is f.left and r is f.right) else And(l, r)
    if isinstance(f, Or):
        l, r = simplify_constants(f.left), simplify_constants(f.right)
        if isinstance(l, Top) or isinstance(r, Top):
            return TRUE
        if isinstance(l, Bot):
            return r
        if isinstance(r, Bot):
            return l
        return f if (l is f.left and r is f.right) else Or(l, r)
    if isinstance(f, Implies):
        l, r = simplify_constants(f.left), simplify_constants(f.right)
        if isinstance(l, Bot) or isinstance(r, Top):
            return TRUE
        if isinstance(l, Top):
            return r
        if isinstance(r, Bot):
            return simplify_constants(Not(l))
        return f if (l is f.left and r is f.right) else Implies(l, r)
    if isinstance(f, ImpliedBy):
        l, r = simplify_constants(f.left), simplify_constants(f.right)
        if isinstance(l, Top) or isinstance(r, Bot):
            return TRUE
        if isinstance(r, Top):
            return l
        if isinstance(l, Bot):
            return simplify_constants(Not(r))
        return f if (l is f.left and r is f.right) else ImpliedBy(l, r)
    if isinstance(f, Equiv):
        l, r = simplify_constants(f.left), simplify_constants(f.right)
        if isinstance(l, Top):
            return r
        if isinstance(r, Top):
            return l
        if isinstance(l, Bot):
            return simplify_constants(Not(r))
        if isinstance(r, Bot):
            return simplify_constants(Not(l))
        return f if (l is f.left and r is f.right) else Equiv(l, r)
    if isinstance(f, (Forg, Proj, Rename, RenameAtoms)):
        a = simplify_constants(f.arg)
        if isinstance(a, (Top, Bot)):
            return a
        return f if a is f.arg else with_arg(f, a)
    if isinstance(f, Circ):
        # Circ(S, true) is not true in general (scope atoms get minimized),
        # so only the unsatisfiable case folds
        a = simplify_constants(f.arg)
        if isinstance(a, Bot):
            return FALSE
        return f if a is f.arg else Circ(f.scope, a)
    if isinstance(f, (ForAll, Exists)):
        a = simplify_constants(f.arg)
        return f if a is f.arg else with_arg(f, a)
    if isinstance(f, MacroCall):
        return f
    raise TypeError(f"unknown formula node: {f!r}")


def sorted_atoms(atoms: Iterable[Atom]) -> tuple[Atom, ...]:
    return tuple(sorted(atoms, key=Atom.sort_key))

"""Brute-force model-set semantics for all second-order operators.

This is the reference oracle: exact enumeration over total interpretations
of a finite signature, with interpretations treated as complete consistent
literal sets.  It is deliberately independent of the elimination engine and
of the normal-form code so that it can serve as ground truth for both.

Interpretations over the ordered signature ``atoms`` are encoded as bit
masks: bit i set means atoms[i] is true.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

from .errors import OperatorPresentError, SignatureError
from .formulas import (
    And, Atom, AtomRef, Bot, Circ, Equiv, Exists, ForAll, Forg, Formula,
    FormulaParam, Implies, ImpliedBy, Interpretation, Literal, MacroCall, Not,
    Or, Proj, Rename, RenameAtoms, Scope, Top, atom_from_functor, atoms_of,
    ground_scope, sorted_atoms,
)

DEFAULT_BOUND = 20


@dataclass(frozen=True)
class ModelSet:
    """Explicit set of models over an ordered signature."""

    atoms: tuple[Atom, ...]
    masks: frozenset[int]

    @property
    def count(self) -> int:
        return len(self.masks)

    def interpretations(self) -> Iterator[Interpretation]:
        for m in sorted(self.masks):
            yield Interpretation.from_bits(self.atoms, m)

    def literal_sets(self) -> frozenset[frozenset[Literal]]:
        return frozenset(i.literals() for i in self.interpretations())


def model_set(f: Formula, sig: Iterable[Atom] | None = None,
              bound: int = DEFAULT_BOUND) -> ModelSet:
    """All models of the formula over the signature (default: its atoms)."""
    atoms = sorted_atoms(atoms_of(f) if sig is None else sig)
    if len(atoms) > bound:
        raise SignatureError(
            f"signature of {len(atoms)} atoms exceeds oracle bound {bound}")
    if not atoms_of(f) <= frozenset(atoms):
        raise SignatureError("formula atoms outside the given signature")
    index = {a: i for i, a in enumerate(atoms)}
    masks = _models(f, atoms, index)
    return ModelSet(atoms, frozenset(masks))


def equivalent(f: Formula, g: Formula, bound: int = DEFAULT_BOUND) -> bool:
    """Model-set equality over the combined signature of both formulas."""
    sig = sorted_atoms(atoms_of(f) | atoms_of(g))
    return model_set(f, sig, bound).masks == model_set(g, sig, bound).masks


def satisfiable(f: Formula, bound: int = DEFAULT_BOUND) -> bool:
    return bool(model_set(f, bound=bound).masks)


def valid(f: Formula, bound: int = DEFAULT_BOUND) -> bool:
    ms = model_set(f, bound=bound)
    return len(ms.masks) == 1 << len(ms.atoms)


def _models(f: Formula, atoms: tuple[Atom, ...],
            index: dict[Atom, int]) -> frozenset[int]:
    n = len(atoms)
    space = frozenset(range(1 << n))
    return _rec(f, atoms, index, space)


def _rec(f: Formula, atoms, index, space) -> frozenset[int]:
    if isinstance(f, Top):
        return space
    if isinstance(f, Bot):
        return frozenset()
    if isinstance(f, AtomRef):
        bit = 1 << index[f.atom]
        return frozenset(m for m in space if m & bit)
    if isinstance(f, Not):
        return space - _rec(f.arg, atoms, index, space)
    if isinstance(f, And):
        return _rec(f.left, atoms, index, space) & _rec(f.right, atoms, index, space)
    if isinstance(f, Or):
        return _rec(f.left, atoms, index, space) | _rec(f.right, atoms, index, space)
    if isinstance(f, Implies):
        return (space - _rec(f.left, atoms, index, space)) | _rec(f.right, atoms, index, space)
    if isinstance(f, ImpliedBy):
        return _rec(f.left, atoms, index, space) | (space - _rec(f.right, atoms, index, space))
    if isinstance(f, Equiv):
        l = _rec(f.left, atoms, index, space)
        r = _rec(f.right, atoms, index, space)
        return (l & r) | ((space - l) & (space - r))
    if isinstance(f, Forg):
        return _forget(_rec(f.arg, atoms, index, space),
                       f.scope, atoms, index, space, keep=False)
    if isinstance(f, Proj):
        return _forget(_rec(f.arg, atoms, index, space),
                       f.scope, atoms, index, space, keep=True)
    if isinstance(f, Circ):
        return _circumscribe(_rec(f.arg, atoms, index, space),
                             f.scope, atoms, index)
    if isinstance(f, Rename):
        mapping = {}
        for a in atoms:
            for src, tgt in f.pairs:
                if a.group == src:
                    mapping[a] = a.correspondent(tgt)
                    break
        return _rename(_rec(f.arg, atoms, index, space), mapping, atoms, index)
    if isinstance(f, RenameAtoms):
        return _rename(_rec(f.arg, atoms, index, space), dict(f.mapping),
                       atoms, index)
    if isinstance(f, (MacroCall, ForAll, Exists, FormulaParam)):
        raise OperatorPresentError(
            f"oracle requires macro- and quantifier-free input, got {type(f).__name__}")
    raise TypeError(f"unknown formula node: {f!r}")


def _scope_masks(scope: Scope, atoms, index) -> tuple[int, int]:
    """Bit masks (P, N) of signature atoms whose positive / negative
    literal belongs to the grounded scope."""
    sg = ground_scope(scope, atoms)
    p = n = 0
    for l in sg:
        i = index.get(l.atom)
        if i is None:
            continue  # explicit scope atom outside the signature
        if l.positive:
            p |= 1 << i
        else:
            n |= 1 << i
    return p, n


def _forget(models, scope, atoms, index, space, keep: bool) -> frozenset[int]:
    """Forgetting (keep=False) or projection (keep=True) on a model set.

    I is a model iff some model I' of the argument satisfies
    I' \\ scope <= I (forgetting) or I' & scope <= I (projection):
    literals of I' that escape the constraint leave their atom free in I.
    """
    p, n = _scope_masks(scope, atoms, index)
    total = len(space)
    out: set[int] = set()
    for m in models:
        in_scope = (m & p) | (~m & n)
        free = in_scope if not keep else ~in_scope
        free &= (1 << len(atoms)) - 1
        base = m & ~free
        sub = free
        while True:
            out.add(base | sub)
            if len(out) == total:
                return frozenset(out)
            if sub == 0:
                break
            sub = (sub - 1) & free
    return frozenset(out)


def _circumscribe(models, scope, atoms, index) -> frozenset[int]:
    """Models minimal in the preorder I <= I' iff I & Sg  subset of  I' & Sg.

    Atoms with both literals in the scope are fixed: models are comparable
    only within equal assignments to them, so we partition classes by the
    fixed part and compare positive/negative scope parts inside each class.
    """
    p, n = _scope_masks(scope, atoms, index)
    fix = p & n
    classes: dict[int, list[int]] = {}
    for m in models:
        classes.setdefault(m & fix, []).append(m)
    full = (1 << len(atoms)) - 1
    out: set[int] = set()
    for members in classes.values():
        parts = [(m, m & p, ~m & n & full) for m in members]
        for m, mp, mn in parts:
            minimal = True
            for m2, m2p, m2n in parts:
                if m2p & ~mp or m2n & ~mn:
                    continue  # not below m
                if mp & ~m2p or mn & ~m2n:
                    minimal = False  # strictly below m
                    break
            if minimal:
                out.add(m)
    return frozenset(out)


def _rename(models, mapping: dict[Atom, Atom], atoms, index) -> frozenset[int]:
    """Eliminate-then-replace semantics: substitute the atom map into the
    full DNF of the model set and collect the models of the result."""
    if not mapping:
        return frozenset(models)
    for tgt in mapping.values():
        if tgt not in index:
            raise SignatureError(
                f"rename target {tgt} outside the signature; "
                "use the global signature of the whole problem")
    out: set[int] = set()
    nbits = len(atoms)
    for m in models:
        constrained: dict[int, bool] = {}
        ok = True
        for i, a in enumerate(atoms):
            tgt = mapping.get(a, a)
            j = index[tgt]
            v = bool(m >> i & 1)
            if constrained.setdefault(j, v) != v:
                ok = False
                break
        if not ok:
            continue
        base = 0
        free = (1 << nbits) - 1
        for j, v in constrained.items():
            free &= ~(1 << j)
            if v:
                base |= 1 << j
        sub = free
        while True:
            out.add(base | sub)
            if sub == 0:
                break
            sub = (sub - 1) & free
    return frozenset(out)


# ---------------------------------------------------------------------------
# stable models via the Gelfond-Lifschitz reduct (independent cross-check
# for the circumscription-based stable macro)

AtomLike = Union[Atom, str]
Rule = tuple[AtomLike, Sequence[AtomLike], Sequence[AtomLike]]


def _as_atom(a: AtomLike) -> Atom:
    return a if isinstance(a, Atom) else atom_from_functor(a)


def answer_sets_reduct(rules: Sequence[Rule]) -> frozenset[frozenset[Atom]]:
    """All stable models of a normal program, by definition.

    Each rule is (head, positive body atoms, negation-as-failure body
    atoms).  A candidate set X is stable iff X equals the least model of
    the reduct: drop rules with a NAF atom in X, drop remaining NAF
    literals, close the definite rules under forward chaining.
    """
    norm = [( _as_atom(h),
              frozenset(_as_atom(b) for b in pb),
              frozenset(_as_atom(b) for b in nb))
            for h, pb, nb in rules]
    universe = sorted_atoms(
        {h for h, _, _ in norm}
        | {b for _, pb, _ in norm for b in pb}
        | {b for _, _, nb in norm for b in nb})
    stable: set[frozenset[Atom]] = set()
    for k in range(1 << len(universe)):
        x = frozenset(a for i, a in enumerate(universe) if k >> i & 1)
        reduct = [(h, pb) for h, pb, nb in norm if not nb & x]
        least: set[Atom] = set()
        changed = True
        while changed:
            changed = False
            for h, pb in reduct:
                if h not in least and pb <= least:
                    least.add(h)
                    changed = True
        if frozenset(least) == x:
            stable.add(x)
    return frozenset(stable)

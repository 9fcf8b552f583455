"""Equivalence-preserving CNF/DNF conversion and clause-set simplification.

No auxiliary atoms are introduced here: the printers need results that are
equivalent, not merely equisatisfiable, so distribution is used and the
exponential worst case is accepted.  Decision-only clausification with
definitional atoms lives in the sat module.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import SignatureError
from .formulas import (
    And, Atom, AtomRef, Bot, Formula, Interpretation, Literal, Not, Or, Top,
    and_all, atoms_of, evaluate, literal_formula, or_all, sorted_atoms,
    to_nnf,
)

Clause = frozenset[Literal]


@dataclass(frozen=True)
class ClauseSet:
    """Set of sets of literals, read conjunctively (CNF) or disjunctively
    (DNF) depending on context."""

    clauses: frozenset[Clause]
    signature: frozenset[Atom]

    @classmethod
    def from_clauses(cls, clauses: Iterable[Iterable[Literal]],
                     signature: Iterable[Atom] | None = None) -> "ClauseSet":
        cs = frozenset(frozenset(c) for c in clauses)
        if signature is None:
            signature = {l.atom for c in cs for l in c}
        return cls(cs, frozenset(signature))

    def sorted_clauses(self) -> list[list[Literal]]:
        """Clauses and literals in canonical order."""
        rows = [sorted(c, key=Literal.sort_key) for c in self.clauses]
        rows.sort(key=lambda c: [l.sort_key() for l in c])
        return rows

    def __len__(self) -> int:
        return len(self.clauses)


def is_tautological(clause: Clause) -> bool:
    return any(l.complement() in clause for l in clause)


def simplify_clauses(cs: ClauseSet, mode: str = "cnf") -> ClauseSet:
    """Remove tautological clauses, then clauses subsumed by a subset.

    The same literal-level operation is correct under both the CNF and the
    DNF reading; the mode argument only documents the caller's intent.
    """
    if mode not in ("cnf", "dnf"):
        raise ValueError(f"mode must be 'cnf' or 'dnf', got {mode!r}")
    kept = [c for c in cs.clauses if not is_tautological(c)]
    kept.sort(key=len)
    result: list[Clause] = []
    for c in kept:
        if not any(d <= c for d in result):
            result.append(c)
    return ClauseSet(frozenset(result), cs.signature)


def _nnf_to_clauses(f: Formula, cross_node: type) -> frozenset[Clause]:
    """Clause sets from an NNF formula.

    With cross_node=Or this produces CNF clauses (And unions, Or crosses);
    with cross_node=And the dual DNF clauses.
    """
    if isinstance(f, Top):
        return frozenset() if cross_node is Or else frozenset({frozenset()})
    if isinstance(f, Bot):
        return frozenset({frozenset()}) if cross_node is Or else frozenset()
    if isinstance(f, AtomRef):
        return frozenset({frozenset({Literal(f.atom, True)})})
    if isinstance(f, Not):
        assert isinstance(f.arg, AtomRef)
        return frozenset({frozenset({Literal(f.arg.atom, False)})})
    left = _nnf_to_clauses(f.left, cross_node)
    right = _nnf_to_clauses(f.right, cross_node)
    if isinstance(f, cross_node):
        merged = set()
        for c in left:
            for d in right:
                u = c | d
                if not is_tautological(u):
                    merged.add(u)
        return frozenset(merged)
    return left | right


def to_cnf(f: Formula) -> ClauseSet:
    """Equivalence-preserving conjunctive normal form."""
    sig = atoms_of(f)
    clauses = _nnf_to_clauses(to_nnf(f), Or)
    return simplify_clauses(ClauseSet(clauses, frozenset(sig)), "cnf")


def to_dnf(f: Formula) -> ClauseSet:
    """Equivalence-preserving disjunctive normal form."""
    sig = atoms_of(f)
    clauses = _nnf_to_clauses(to_nnf(f), And)
    return simplify_clauses(ClauseSet(clauses, frozenset(sig)), "dnf")


def clauses_to_formula(cs: ClauseSet, mode: str = "cnf") -> Formula:
    """Deterministic formula reading of a clause set."""
    inner, outer = (or_all, and_all) if mode == "cnf" else (and_all, or_all)
    return outer(inner(literal_formula(l) for l in row)
                 for row in cs.sorted_clauses())


def full_dnf(f: Formula, sig: Iterable[Atom],
             bound: int = 20) -> ClauseSet:
    """One conjunctive clause per model of f over sig, each clause holding
    exactly one literal per signature atom."""
    atoms = sorted_atoms(sig)
    if len(atoms) > bound:
        raise SignatureError(
            f"signature of {len(atoms)} atoms exceeds enumeration bound {bound}")
    if not atoms_of(f) <= frozenset(atoms):
        raise SignatureError("formula atoms outside the given signature")
    clauses = []
    for mask in range(1 << len(atoms)):
        interp = Interpretation.from_bits(atoms, mask)
        if evaluate(f, interp):
            clauses.append(interp.literals())
    return ClauseSet(frozenset(clauses), frozenset(atoms))

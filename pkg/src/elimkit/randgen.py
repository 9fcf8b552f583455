"""Seeded random instance generators for property suites and experiments.

Everything takes an explicit random.Random so runs are reproducible.
"""

from __future__ import annotations

import random
from typing import Optional, Sequence

from .formulas import (
    And, Atom, AtomRef, Bot, Circ, Equiv, Forg, Formula, Implies, ImpliedBy,
    Literal, Not, Or, Proj, Rename, Scope, ScopeAtomItem, ScopeComplements,
    ScopeGroupItem, ScopeList, ScopeLiteralItem, ScopeUnion, Top, and_all,
)
from .normalform import ClauseSet

BASES = ("p", "q", "r", "s", "t", "u", "v", "w")


def atom_pool(count: int, groups: Sequence[int] = (0,)) -> list[Atom]:
    """Up to count distinct atoms drawn from short names and given groups."""
    pool = [Atom(b, g) for g in groups for b in BASES]
    return pool[:count]


def random_operator_free(rng: random.Random, atoms: Sequence[Atom],
                         size: int) -> Formula:
    """Random connective tree with about `size` internal nodes."""
    if size <= 0 or not atoms:
        roll = rng.random()
        if roll < 0.05:
            return Top()
        if roll < 0.1:
            return Bot()
        return AtomRef(rng.choice(list(atoms)))
    kind = rng.choice(("not", "and", "or", "implies", "impliedby", "equiv"))
    if kind == "not":
        return Not(random_operator_free(rng, atoms, size - 1))
    split = rng.randint(0, size - 1)
    left = random_operator_free(rng, atoms, split)
    right = random_operator_free(rng, atoms, size - 1 - split)
    node = {"and": And, "or": Or, "implies": Implies,
            "impliedby": ImpliedBy, "equiv": Equiv}[kind]
    return node(left, right)


def random_scope(rng: random.Random, atoms: Sequence[Atom],
                 allow_symbolic: bool = True) -> Scope:
    roll = rng.random()
    if allow_symbolic and roll < 0.08:
        return ScopeComplements(random_scope(rng, atoms, False))
    if allow_symbolic and roll < 0.14:
        return ScopeUnion(random_scope(rng, atoms, False),
                          random_scope(rng, atoms, False))
    if allow_symbolic and roll < 0.18:
        groups = sorted({a.group for a in atoms})
        g = rng.choice(groups)
        sign = rng.choice((None, True, False))
        return ScopeList((ScopeGroupItem(g, sign),))
    items = []
    for a in rng.sample(list(atoms), k=rng.randint(0, min(3, len(atoms)))):
        roll = rng.random()
        if roll < 0.5:
            items.append(ScopeAtomItem(a))
        else:
            items.append(ScopeLiteralItem(Literal(a, roll < 0.75)))
    return ScopeList(tuple(items))


def random_operator_formula(rng: random.Random, atoms: Sequence[Atom],
                            size: int, operator_nesting: int) -> Formula:
    """Random formula with forg/proj/circ/rename nodes nested at most
    operator_nesting deep."""
    if operator_nesting <= 0:
        return random_operator_free(rng, atoms, size)
    roll = rng.random()
    if roll < 0.45:
        inner = random_operator_formula(rng, atoms, size, operator_nesting - 1)
        kind = rng.choice(("forg", "proj", "circ", "rename"))
        if kind == "forg":
            return Forg(random_scope(rng, atoms), inner)
        if kind == "proj":
            return Proj(random_scope(rng, atoms), inner)
        if kind == "circ":
            return Circ(random_scope(rng, atoms), inner)
        groups = sorted({a.group for a in atoms})
        src = rng.choice(groups)
        tgt = rng.choice(groups)
        return Rename(((src, tgt),), inner)
    if roll < 0.6:
        return Not(random_operator_formula(rng, atoms, max(0, size - 1),
                                           operator_nesting))
    if roll < 0.9:
        node = rng.choice((And, Or))
        split = rng.randint(0, max(0, size - 1))
        return node(
            random_operator_formula(rng, atoms, split, operator_nesting - 1),
            random_operator_formula(rng, atoms, max(0, size - 1 - split),
                                    operator_nesting - 1))
    return random_operator_free(rng, atoms, size)


def random_clause_set(rng: random.Random, atoms: Sequence[Atom],
                      max_clauses: int, max_width: int = 3) -> ClauseSet:
    clauses = []
    for _ in range(rng.randint(0, max_clauses)):
        width = rng.randint(1, max_width)
        chosen = rng.sample(list(atoms), k=min(width, len(atoms)))
        clauses.append(frozenset(Literal(a, rng.random() < 0.5)
                                 for a in chosen))
    return ClauseSet.from_clauses(clauses, atoms)


def random_normal_program(rng: random.Random, atoms: Sequence[Atom],
                          max_rules: int
                          ) -> list[tuple[Atom, list[Atom], list[Atom]]]:
    """Random normal rules (head, positive body, NAF body) over group-0 atoms."""
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        head = rng.choice(list(atoms))
        others = [a for a in atoms if a != head]
        rng.shuffle(others)
        n_pos = rng.randint(0, min(2, len(others)))
        n_naf = rng.randint(0, min(2, len(others) - n_pos))
        rules.append((head, others[:n_pos], others[n_pos:n_pos + n_naf]))
    return rules


def program_formula(rules: Sequence[tuple[Atom, Sequence[Atom], Sequence[Atom]]]
                    ) -> Formula:
    """Classical encoding of a normal program: NAF atoms become their
    group-1 correspondents under negation."""
    parts = []
    for head, pos_body, naf_body in rules:
        body = [AtomRef(b) for b in pos_body]
        body += [Not(AtomRef(b.correspondent(1))) for b in naf_body]
        if body:
            parts.append(ImpliedBy(AtomRef(head), and_all(body)))
        else:
            parts.append(AtomRef(head))
    return and_all(parts)

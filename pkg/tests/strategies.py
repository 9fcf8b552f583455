"""Hypothesis strategies for formulas, scopes, and clause sets."""

from hypothesis import strategies as st

from elimkit.formulas import (
    And, Atom, AtomRef, Bot, Equiv, Forg, Implies, ImpliedBy, Literal, Not,
    Or, Proj, Rename, Circ, ScopeAtomItem, ScopeComplements, ScopeGroupItem,
    ScopeList, ScopeLiteralItem, ScopeUnion, Top,
)

ATOMS = tuple(Atom(b) for b in ("p", "q", "r", "s", "t"))
GROUPED_ATOMS = ATOMS + tuple(Atom(b, 1) for b in ("p", "q"))


def atoms(pool=ATOMS):
    return st.sampled_from(pool)


def literals(pool=ATOMS):
    return st.builds(Literal, atoms(pool), st.booleans())


def operator_free(pool=ATOMS, max_leaves=10):
    leaves = st.one_of(
        st.just(Top()), st.just(Bot()), st.builds(AtomRef, atoms(pool)))
    return st.recursive(
        leaves,
        lambda kids: st.one_of(
            st.builds(Not, kids),
            st.builds(And, kids, kids),
            st.builds(Or, kids, kids),
            st.builds(Implies, kids, kids),
            st.builds(ImpliedBy, kids, kids),
            st.builds(Equiv, kids, kids)),
        max_leaves=max_leaves)


def scope_lists(pool=ATOMS, max_size=3):
    items = st.one_of(
        st.builds(ScopeAtomItem, atoms(pool)),
        st.builds(ScopeLiteralItem, literals(pool)))
    return st.builds(
        ScopeList, st.lists(items, max_size=max_size).map(tuple))


def scopes(pool=GROUPED_ATOMS, max_size=3):
    base = st.one_of(
        scope_lists(pool, max_size),
        st.builds(ScopeList,
                  st.tuples(st.builds(ScopeGroupItem,
                                      st.sampled_from((0, 1)),
                                      st.sampled_from((None, True, False))))))
    return st.recursive(
        base,
        lambda kids: st.one_of(
            st.builds(ScopeComplements, kids),
            st.builds(ScopeUnion, kids, kids)),
        max_leaves=2)


def operator_formulas(pool=GROUPED_ATOMS, max_leaves=8):
    leaves = st.one_of(
        st.just(Top()), st.just(Bot()), st.builds(AtomRef, atoms(pool)))
    return st.recursive(
        leaves,
        lambda kids: st.one_of(
            st.builds(Not, kids),
            st.builds(And, kids, kids),
            st.builds(Or, kids, kids),
            st.builds(Implies, kids, kids),
            st.builds(Forg, scopes(pool), kids),
            st.builds(Proj, scopes(pool), kids),
            st.builds(Circ, scopes(pool), kids),
            st.builds(Rename, st.just(((1, 0),)), kids)),
        max_leaves=max_leaves)


def clause_sets(pool=ATOMS, max_clauses=6):
    clause = st.frozensets(literals(pool), max_size=3)
    return st.lists(clause, max_size=max_clauses)

from hypothesis import given, settings

from elimkit.formulas import (
    And, Atom, AtomRef, Bot, Equiv, ImpliedBy, Literal, Not, Or, Top,
    atoms_of, sorted_atoms,
)
from elimkit.normalform import (
    ClauseSet, clauses_to_formula, full_dnf, simplify_clauses, to_cnf, to_dnf,
)
from elimkit.semantics import equivalent, model_set

from .strategies import ATOMS, clause_sets, operator_free

P, Q, R = Atom("p"), Atom("q"), Atom("r")


def clause(*lits):
    return frozenset(lits)


def test_cnf_of_sprinkler_disjunction():
    shoes, rained, on = Atom("shoes"), Atom("rained"), Atom("sprinkler_on")
    f = Or(AtomRef(shoes), And(Not(AtomRef(rained)), Not(AtomRef(on))))
    assert to_cnf(f).clauses == frozenset({
        clause(Literal(shoes), Literal(rained, False)),
        clause(Literal(shoes), Literal(on, False))})


def test_cnf_of_constants():
    assert to_cnf(Top()).clauses == frozenset()
    assert to_cnf(Bot()).clauses == frozenset({frozenset()})


def test_cnf_of_equivalence():
    f = Equiv(AtomRef(P), AtomRef(Q))
    assert to_cnf(f).clauses == frozenset({
        clause(Literal(P, False), Literal(Q)),
        clause(Literal(P), Literal(Q, False))})


def test_dnf_of_disjunction():
    rained, on = Atom("rained"), Atom("sprinkler_on")
    f = Or(AtomRef(rained), AtomRef(on))
    assert to_dnf(f).clauses == frozenset({
        clause(Literal(rained)), clause(Literal(on))})


def test_dnf_of_constants():
    assert to_dnf(Bot()).clauses == frozenset()
    assert to_dnf(Top()).clauses == frozenset({frozenset()})


def test_dnf_prunes_contradiction():
    f = And(Or(AtomRef(P), AtomRef(Q)), Not(AtomRef(P)))
    assert to_dnf(f).clauses == frozenset({
        clause(Literal(P, False), Literal(Q))})


def test_simplify_removes_tautologies():
    cs = ClauseSet.from_clauses([
        [Literal(P), Literal(P, False)], [Literal(Q)]])
    assert simplify_clauses(cs).clauses == frozenset({clause(Literal(Q))})


def test_simplify_removes_subsumed():
    cs = ClauseSet.from_clauses([[Literal(P)], [Literal(P), Literal(Q)]])
    assert simplify_clauses(cs).clauses == frozenset({clause(Literal(P))})


@given(clause_sets())
@settings(max_examples=80, deadline=None)
def test_simplify_idempotent_and_equivalent(clauses):
    cs = ClauseSet.from_clauses(clauses, ATOMS)
    for mode in ("cnf", "dnf"):
        once = simplify_clauses(cs, mode)
        assert simplify_clauses(once, mode).clauses == once.clauses
        assert equivalent(clauses_to_formula(cs, mode),
                          clauses_to_formula(once, mode))


@given(operator_free(max_leaves=10))
@settings(max_examples=100, deadline=None)
def test_cnf_dnf_equivalent_to_input(f):
    assert equivalent(f, clauses_to_formula(to_cnf(f), "cnf"))
    assert equivalent(f, clauses_to_formula(to_dnf(f), "dnf"))


def test_full_dnf_of_tautology():
    cs = full_dnf(Top(), (P,))
    assert cs.clauses == frozenset({clause(Literal(P)),
                                    clause(Literal(P, False))})


def test_full_dnf_of_implication():
    cs = full_dnf(ImpliedBy(AtomRef(P), AtomRef(R)), (P, R))
    assert len(cs.clauses) == 3
    assert all(len(c) == 2 for c in cs.clauses)


@given(operator_free(max_leaves=8))
@settings(max_examples=60, deadline=None)
def test_full_dnf_counts_models(f):
    sig = sorted_atoms(atoms_of(f) | frozenset(ATOMS[:3]))
    assert len(full_dnf(f, sig).clauses) == model_set(f, sig).count

import pytest
from hypothesis import given, settings

from elimkit.errors import OperatorPresentError, SignatureError
from elimkit.formulas import (
    And, Atom, AtomRef, Bot, Forg, ImpliedBy, Implies, Literal, MacroCall,
    Not, Or, Proj, Rename, Circ, ScopeAll, ScopeAtomItem, ScopeList,
    ScopeLiteralItem, ScopeUnion, Top, all_literals, atoms_of, ground_scope,
    scope_from_literals, sorted_atoms, substitute,
)
from elimkit.macros import Program, expand_macros
from elimkit.randgen import program_formula
from elimkit.semantics import (
    ModelSet, answer_sets_reduct, equivalent, model_set, satisfiable,
)

from .strategies import ATOMS, operator_free, scope_lists, scopes

P, Q, R = Atom("p"), Atom("q"), Atom("r")


def scope_of(*atoms):
    return ScopeList(tuple(ScopeAtomItem(a) for a in atoms))


def lit_scope(*lits):
    return ScopeList(tuple(ScopeLiteralItem(l) for l in lits))


class TestModelSet:
    def test_intro_forgetting(self):
        kb = And(ImpliedBy(AtomRef(P), AtomRef(Q)),
                 ImpliedBy(AtomRef(Q), AtomRef(R)))
        forgot = Forg(scope_of(Q), kb)
        target = ImpliedBy(AtomRef(P), AtomRef(R))
        sig = (P, Q, R)
        assert model_set(forgot, sig).masks == model_set(target, sig).masks

    def test_circ_empty_scope_is_identity(self):
        f = Or(AtomRef(P), Not(AtomRef(Q)))
        assert model_set(Circ(ScopeList(()), f)).masks == model_set(f).masks

    def test_circ_minimizes_single_positive(self):
        f = Or(AtomRef(P), AtomRef(Q))
        ms = model_set(Circ(lit_scope(Literal(P)), f), (P, Q))
        # enumerating the three models of p|q and applying minimality
        # leaves only {~p, q}, i.e. mask with just the q bit
        assert ms.masks == frozenset({0b10})

    def test_rename_equates_groups(self):
        p1 = Atom("p", 1)
        f = Rename(((1, 0),), And(AtomRef(p1), Not(AtomRef(P))))
        # after renaming p1 -> p the conjunction is contradictory
        assert model_set(f).masks == frozenset()

    def test_rename_identity_pairs(self):
        f = Rename(((1, 0),), AtomRef(P))
        assert model_set(f).masks == model_set(AtomRef(P)).masks

    def test_bound_enforced(self):
        sig = tuple(Atom("p", 0, ()) for _ in range(1))
        with pytest.raises(SignatureError):
            model_set(AtomRef(P), tuple(Atom(b) for b in
                                        "abcdefghijklmnopqrstu"), bound=20)

    def test_macro_rejected(self):
        with pytest.raises(OperatorPresentError):
            model_set(MacroCall("stable", (AtomRef(P),)))


class TestEquivalent:
    def test_reflexive(self):
        f = Implies(AtomRef(P), AtomRef(Q))
        assert equivalent(f, f)

    @given(operator_free(max_leaves=8))
    @settings(max_examples=80, deadline=None)
    def test_naive_forgetting_unfold(self, f):
        forgot = Forg(scope_of(P), f)
        naive = Or(substitute(f, P, Top()), substitute(f, P, Bot()))
        assert equivalent(forgot, naive)

    def test_single_positive_literal_characterization(self):
        f = And(AtomRef(P), Implies(AtomRef(P), AtomRef(Q)))
        forgot = Forg(lit_scope(Literal(P)), f)
        assert equivalent(forgot, AtomRef(Q))


class TestForgettingProperties:
    @given(operator_free(max_leaves=8), scope_lists())
    @settings(max_examples=60, deadline=None)
    def test_duality_with_projection(self, f, s):
        sig = sorted_atoms(atoms_of(f) | frozenset(ATOMS))
        complement = all_literals(sig) - ground_scope(s, sig)
        proj = Proj(s, f)
        forg = Forg(scope_from_literals(complement), f)
        assert model_set(proj, sig).masks == model_set(forg, sig).masks

    @given(operator_free(max_leaves=8), scopes())
    @settings(max_examples=60, deadline=None)
    def test_models_are_preserved_by_forgetting(self, f, s):
        forgetting = Forg(s, f)
        sig = sorted_atoms(atoms_of(forgetting) | frozenset(ATOMS))
        base = model_set(f, sig).masks
        forgot = model_set(forgetting, sig).masks
        assert base <= forgot

    @given(operator_free(max_leaves=8))
    @settings(max_examples=40, deadline=None)
    def test_identities(self, f):
        assert equivalent(Forg(ScopeList(()), f), f)
        assert equivalent(Forg(scope_of(P), Top()), Top())
        absent = Atom("zz")
        assert equivalent(Forg(scope_of(absent), f), f)

    @given(operator_free(max_leaves=6), scope_lists(), scope_lists())
    @settings(max_examples=60, deadline=None)
    def test_union_composition_law(self, f, s1, s2):
        # the engine's merge rewrite depends on this holding
        nested = Forg(s1, Forg(s2, f))
        merged = Forg(ScopeUnion(s1, s2), f)
        assert equivalent(nested, merged)


class TestCircProperties:
    @given(operator_free(max_leaves=8), scope_lists())
    @settings(max_examples=60, deadline=None)
    def test_circ_models_model_the_argument(self, f, s):
        sig = sorted_atoms(atoms_of(f) | frozenset(ATOMS))
        circ = model_set(Circ(s, f), sig).masks
        base = model_set(f, sig).masks
        assert circ <= base

    @given(operator_free(max_leaves=8))
    @settings(max_examples=40, deadline=None)
    def test_circ_identity_and_unsat(self, f):
        assert equivalent(Circ(ScopeList(()), f), f)
        unsat = And(f, And(AtomRef(P), Not(AtomRef(P))))
        assert not satisfiable(Circ(scope_of(P, Q), unsat))


class TestAnswerSets:
    def test_kb2_rules(self):
        shoes, grass, sprinkler = (Atom("shoes_are_wet"),
                                   Atom("grass_is_wet"),
                                   Atom("sprinkler_was_on"))
        abnormal = Atom("sprinkler_was_abnormal")
        rules = [
            (shoes, [grass], []),
            (grass, [sprinkler], [abnormal]),
            (sprinkler, [], []),
        ]
        assert answer_sets_reduct(rules) == frozenset(
            {frozenset({shoes, grass, sprinkler})})

    def test_odd_loop_has_no_stable_model(self):
        assert answer_sets_reduct([(P, [], [P])]) == frozenset()

    def test_even_loop_has_two(self):
        got = answer_sets_reduct([(P, [], [Q]), (Q, [], [P])])
        assert got == frozenset({frozenset({P}), frozenset({Q})})

    def test_string_atoms_accepted(self):
        got = answer_sets_reduct([("p", [], [])])
        assert got == frozenset({frozenset({P})})

    def test_matches_stable_macro_oracle(self):
        # small fixed programs, checked against the circumscription encoding
        programs = [
            [(P, [], [Q]), (Q, [], [P])],
            [(P, [], [P])],
            [(P, [Q], []), (Q, [], [])],
            [(P, [], []), (Q, [P], [R])],
        ]
        prog = Program.with_builtins()
        for rules in programs:
            f = expand_macros(
                MacroCall("stable", (program_formula(rules),)), prog)
            ms = model_set(f)
            group0 = [a for a in ms.atoms if a.group == 0]
            got = {frozenset(a for a in group0 if i.value(a))
                   for i in ms.interpretations()}
            assert got == set(answer_sets_reduct(rules))

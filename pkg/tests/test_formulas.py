import itertools

import pytest
from hypothesis import given, settings, strategies as st

from elimkit.errors import OperatorPresentError, SignatureError
from elimkit.formulas import (
    And, Atom, AtomRef, Bot, Equiv, Forg, ImpliedBy, Interpretation, Literal,
    Not, Or, Polarity, Rename, ScopeAll, ScopeAtomItem, ScopeComplements,
    ScopeGroupItem, ScopeList, ScopeLiteralItem, Term, Top, all_literals,
    atom, atom_from_functor, atoms_of, evaluate, ground_scope,
    is_operator_free, polarity_of_atom, sorted_atoms, substitute, to_nnf,
)

from .strategies import ATOMS, operator_free, scope_lists

P, Q, R = Atom("p"), Atom("q"), Atom("r")


def interp(atoms, trues):
    return Interpretation(tuple(atoms), frozenset(trues))


def all_interps(atoms):
    atoms = sorted_atoms(atoms)
    for mask in range(1 << len(atoms)):
        yield Interpretation.from_bits(atoms, mask)


def equal_on_all(f, g):
    sig = atoms_of(f) | atoms_of(g)
    return all(evaluate(f, i) == evaluate(g, i) for i in all_interps(sig))


class TestAtoms:
    def test_group_parsing(self):
        a = atom_from_functor("sprinkler_was_abnormal1")
        assert a.base == "sprinkler_was_abnormal" and a.group == 1
        assert atom_from_functor("p").group == 0
        assert atom_from_functor("p10").group == 10
        assert str(atom_from_functor("p10")) == "p10"

    def test_base_invariants(self):
        with pytest.raises(ValueError):
            Atom("")
        with pytest.raises(ValueError):
            Atom("p1")  # trailing digit belongs to the group
        with pytest.raises(ValueError):
            Atom("p", -1)
        with pytest.raises(ValueError):
            atom_from_functor("123")

    def test_equality_is_structural(self):
        assert Atom("p", 1, (Term("a"),)) == Atom("p", 1, (Term("a"),))
        assert Atom("p", 1) != Atom("p", 0)
        assert Atom("p", 0, (Term("a"),)) != Atom("p", 0)

    def test_compound_printing(self):
        a = atom_from_functor("p1", (Term("a"), Term("f", (Term("b"),))))
        assert str(a) == "p1(a,f(b))"

    def test_complement_involution(self):
        l = Literal(P, True)
        assert l.complement().complement() == l


class TestAtomsOf:
    def test_constant_has_no_atoms(self):
        assert atoms_of(Top()) == frozenset()

    def test_kb2_atoms(self, kb_program):
        kb2 = kb_program.definitions["kb2"]
        names = {str(a) for a in atoms_of(kb2)}
        assert names == {"shoes_are_wet", "grass_is_wet", "sprinkler_was_on",
                         "sprinkler_was_abnormal1"}

    def test_rename_contributes_targets(self):
        ab1 = Atom("sprinkler_was_abnormal", 1)
        f = Rename(((1, 0),), AtomRef(ab1))
        assert atoms_of(f) == frozenset({ab1, ab1.correspondent(0)})

    def test_scope_literal_items_count(self):
        f = Forg(ScopeList((ScopeLiteralItem(Literal(Q)),)), AtomRef(P))
        assert atoms_of(f) == frozenset({P, Q})


class TestSubstitute:
    def test_direct_replacement(self):
        f = And(AtomRef(P), Not(AtomRef(P)))
        assert substitute(f, P, Top()) == And(Top(), Not(Top()))

    def test_intro_example(self):
        f = And(ImpliedBy(AtomRef(P), AtomRef(Q)),
                ImpliedBy(AtomRef(Q), AtomRef(R)))
        out = substitute(f, Q, Top())
        assert out == And(ImpliedBy(AtomRef(P), Top()),
                          ImpliedBy(Top(), AtomRef(R)))

    def test_absent_atom(self):
        assert substitute(AtomRef(Q), P, Bot()) == AtomRef(Q)

    def test_rejects_operator_nodes(self):
        f = Forg(ScopeList((ScopeAtomItem(P),)), AtomRef(P))
        with pytest.raises(OperatorPresentError):
            substitute(f, P, Top())

    @given(operator_free(max_leaves=8), st.sampled_from(ATOMS))
    @settings(max_examples=80, deadline=None)
    def test_substitution_lemma(self, f, a):
        # evaluate(F[a\true], I) == evaluate(F, I[a:=true])
        sub = substitute(f, a, Top())
        sig = sorted_atoms(atoms_of(f) | {a})
        for i in all_interps(sig):
            flipped = Interpretation(i.atoms, i.true_atoms | {a})
            assert evaluate(sub, i) == evaluate(f, flipped)


class TestNnf:
    def test_de_morgan(self):
        f = Not(And(AtomRef(P), AtomRef(Q)))
        assert to_nnf(f) == Or(Not(AtomRef(P)), Not(AtomRef(Q)))

    def test_implied_by(self):
        assert to_nnf(ImpliedBy(AtomRef(P), AtomRef(Q))) == \
            Or(AtomRef(P), Not(AtomRef(Q)))

    def test_equivalence_is_semantically_preserved(self):
        f = Equiv(AtomRef(P), AtomRef(Q))
        assert equal_on_all(f, to_nnf(f))

    @given(operator_free(max_leaves=10))
    @settings(max_examples=120, deadline=None)
    def test_nnf_preserves_evaluation(self, f):
        assert equal_on_all(f, to_nnf(f))

    @given(operator_free(max_leaves=10))
    @settings(max_examples=60, deadline=None)
    def test_nnf_shape(self, f):
        def shaped(g):
            if isinstance(g, (Top, Bot, AtomRef)):
                return True
            if isinstance(g, Not):
                return isinstance(g.arg, AtomRef)
            if isinstance(g, (And, Or)):
                return shaped(g.left) and shaped(g.right)
            return False
        assert shaped(to_nnf(f))


class TestEvaluate:
    def test_false_antecedent(self):
        f = ImpliedBy(AtomRef(P), AtomRef(R))
        assert evaluate(f, interp([P, R], [])) is True

    def test_kb1_all_true(self, kb_program):
        kb1 = kb_program.definitions["kb1"]
        sig = sorted_atoms(atoms_of(kb1))
        assert evaluate(kb1, Interpretation(sig, frozenset(sig))) is True

    def test_false_everywhere(self):
        assert evaluate(Bot(), interp([P], [P])) is False

    def test_atom_outside_signature(self):
        with pytest.raises(SignatureError):
            evaluate(AtomRef(P), interp([Q], []))


class TestPolarity:
    def test_pos(self):
        assert polarity_of_atom(And(AtomRef(P), AtomRef(Q)), P) is Polarity.POS

    def test_neg_in_antecedent(self):
        f = ImpliedBy(AtomRef(P), AtomRef(Q))
        assert polarity_of_atom(f, Q) is Polarity.NEG

    def test_both_in_equivalence(self):
        assert polarity_of_atom(Equiv(AtomRef(P), AtomRef(Q)), P) is Polarity.BOTH

    def test_none(self):
        assert polarity_of_atom(AtomRef(Q), P) is Polarity.NONE


class TestGroundScope:
    def test_unsigned_atom_is_shorthand_for_both(self):
        abnormal, bird = Atom("abnormal"), Atom("bird")
        s = ScopeList((ScopeLiteralItem(Literal(abnormal)), ScopeAtomItem(bird)))
        assert ground_scope(s, {abnormal, bird}) == frozenset({
            Literal(abnormal), Literal(bird), Literal(bird, False)})

    def test_group_wildcards_over_kb2_signature(self):
        sig = {Atom("shoes_are_wet"), Atom("grass_is_wet"),
               Atom("sprinkler_was_on"), Atom("sprinkler_was_abnormal"),
               Atom("sprinkler_was_abnormal", 1)}
        s = ScopeList((ScopeGroupItem(0, True), ScopeGroupItem(1)))
        lits = ground_scope(s, sig)
        positives = {l for l in lits if l.positive}
        assert len(positives) == 5 and len(lits) == 6
        ab1 = Atom("sprinkler_was_abnormal", 1)
        assert Literal(ab1, False) in lits

    def test_complements_single_literal(self):
        s = ScopeComplements(ScopeList((ScopeLiteralItem(Literal(P)),)))
        assert ground_scope(s, {P}) == frozenset({Literal(P, False)})

    def test_explicit_atoms_outside_signature_retained(self):
        s = ScopeList((ScopeAtomItem(Q),))
        assert ground_scope(s, {P}) == all_literals({Q})

    @given(scope_lists())
    @settings(max_examples=60, deadline=None)
    def test_complements_is_an_involution(self, s):
        sig = frozenset(ATOMS)
        once = ground_scope(ScopeComplements(s), sig)
        twice = ground_scope(ScopeComplements(ScopeComplements(s)), sig)
        assert twice == ground_scope(s, sig)
        assert once == {l.complement() for l in ground_scope(s, sig)}

    @given(scope_lists())
    @settings(max_examples=60, deadline=None)
    def test_all_minus_s_covers_signature(self, s):
        sig = frozenset(ATOMS)
        everything = ground_scope(ScopeAll(), sig)
        grounded = ground_scope(s, sig)
        assert (everything - grounded) | grounded == everything | grounded


class TestOperatorFree:
    def test_plain_formula(self):
        assert is_operator_free(And(AtomRef(P), Not(AtomRef(Q))))

    def test_forg_is_not(self):
        assert not is_operator_free(
            Forg(ScopeList((ScopeAtomItem(P),)), AtomRef(P)))

    def test_atom_helper(self):
        assert atom("p1", "a").atom == Atom("p", 1, (Term("a"),))

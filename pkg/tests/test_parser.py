import pytest
from hypothesis import given, settings

from elimkit.errors import ExpansionError, MacroError, ParseError
from elimkit.formulas import (
    And, Atom, AtomRef, Equiv, Exists, ForAll, Forg, ImpliedBy, Implies,
    Literal, MacroCall, Not, Or, Proj, Rename, ScopeAll, ScopeAtomItem,
    ScopeComplements, ScopeGroupItem, ScopeList, ScopeLiteralItem, Term, Top,
    atoms_of,
)
from elimkit.parser import expand_quantifiers, parse_formula, parse_program
from elimkit.printing import format_ast

from .conftest import KB_TEXT
from .strategies import operator_formulas

P, Q, R = Atom("p"), Atom("q"), Atom("r")


def parse(text):
    return parse_formula(text)


class TestFormulaGrammar:
    def test_kb1_is_three_rule_conjunction(self, kb_program):
        kb1 = kb_program.definitions["kb1"]
        rules = []
        node = kb1
        while isinstance(node, And):
            rules.append(node.left)
            node = node.right
        rules.append(node)
        assert len(rules) == 3
        assert all(isinstance(r, ImpliedBy) for r in rules)

    def test_comma_binds_tighter_than_arrow(self):
        f = parse("a <- b, c")
        assert f == ImpliedBy(AtomRef(Atom("a")),
                              And(AtomRef(Atom("b")), AtomRef(Atom("c"))))

    def test_precedence_ladder(self):
        f = parse("a <-> b -> c ; d, ~e")
        assert isinstance(f, Equiv)
        assert isinstance(f.right, Implies)
        assert isinstance(f.right.right, Or)
        assert isinstance(f.right.right.right, And)
        assert isinstance(f.right.right.right.right, Not)

    def test_compound_ground_atom(self):
        f = parse("p(a,f(b))")
        assert f == AtomRef(Atom("p", 0, (Term("a"), Term("f", (Term("b"),)))))

    def test_group_suffix_on_functor(self):
        f = parse("p1(a)")
        assert f.atom == Atom("p", 1, (Term("a"),))

    def test_parenthesized_conjunction_as_argument(self):
        f = parse("forg([q], ((p <- q), (q <- r)))")
        assert isinstance(f, Forg)
        assert isinstance(f.arg, And)

    def test_operator_calls(self):
        f = parse_formula("proj([shoes_are_wet], stable(kb2))",
                          parse_program(KB_TEXT))
        assert isinstance(f, Proj)
        assert isinstance(f.arg, MacroCall)
        assert f.arg.name == "stable"

    def test_true_false(self):
        assert parse("true") == Top()

    def test_rename_pairs(self):
        f = parse("rename([1-0, 2-0], p1)")
        assert isinstance(f, Rename)
        assert f.pairs == ((1, 0), (2, 0))

    def test_unbound_variable_in_formula_position(self):
        with pytest.raises(ParseError):
            parse("X")

    def test_error_carries_position(self):
        with pytest.raises(ParseError) as err:
            parse_program("let x = (p .\n")
        assert err.value.line is not None


class TestScopeGrammar:
    def test_mixed_items(self):
        f = parse("forg([+grass, shoes, 1, +(0), -(2)], p)")
        items = f.scope.items
        assert items[0] == ScopeLiteralItem(Literal(Atom("grass")))
        assert items[1] == ScopeAtomItem(Atom("shoes"))
        assert items[2] == ScopeGroupItem(1, None)
        assert items[3] == ScopeGroupItem(0, True)
        assert items[4] == ScopeGroupItem(2, False)

    def test_all_and_complements(self):
        f = parse("proj(all, p)")
        assert f.scope == ScopeAll()
        g = parse("forg(complements([+p]), p)")
        assert isinstance(g.scope, ScopeComplements)


class TestStatements:
    def test_duplicate_let(self):
        with pytest.raises(ParseError):
            parse_program("let x = p.\nlet x = q.\n")

    def test_domain_statement(self):
        prog = parse_program("domain {a, b}.\ndomain {b, c}.\n")
        assert prog.domain == ("a", "b", "c")

    def test_macro_statement_and_call(self):
        prog = parse_program(
            "macro mine(S, F) = ~proj(S, ~F).\n"
            "let x = mine([p], q).\n")
        x = prog.definitions["x"]
        assert isinstance(x, MacroCall) and x.name == "mine"

    def test_macro_arity_mismatch(self):
        prog = parse_program("macro mine(F) = ~F.\n")
        with pytest.raises(ParseError):
            parse_formula("mine(p, q)", prog)

    def test_macro_kind_conflict(self):
        with pytest.raises((ParseError, MacroError)):
            parse_program("macro bad(S) = forg(S, S).\n")

    def test_redefining_builtin_gwsc(self):
        with pytest.raises(MacroError):
            parse_program("macro gwsc(S, F, G) = ~F.\n")

    def test_undeclared_call_is_compound_atom(self):
        prog = parse_program("let x = mystery(a, b).\n")
        x = prog.definitions["x"]
        assert isinstance(x, AtomRef)
        assert x.atom.base == "mystery" and len(x.atom.args) == 2

    def test_comments_and_whitespace(self):
        prog = parse_program("# comment\nlet x = p. # trailing\n")
        assert "x" in prog.definitions


class TestQuantifiers:
    def test_forall_expansion(self):
        f = parse("all(X, p(X))")
        out = expand_quantifiers(f, ("a", "b"))
        assert out == And(AtomRef(Atom("p", 0, (Term("a"),))),
                          AtomRef(Atom("p", 0, (Term("b"),))))

    def test_singleton_domain(self):
        f = parse("ex(X, (q(X), r))")
        out = expand_quantifiers(f, ("a",))
        assert out == And(AtomRef(Atom("q", 0, (Term("a"),))),
                          AtomRef(Atom("r")))

    def test_nested_expansion(self):
        f = parse("all(X, ex(Y, e(X,Y)))")
        out = expand_quantifiers(f, ("a", "b"))
        def e(x, y):
            return AtomRef(Atom("e", 0, (Term(x), Term(y))))
        assert out == And(Or(e("a", "a"), e("a", "b")),
                          Or(e("b", "a"), e("b", "b")))

    def test_empty_domain_rejected(self):
        with pytest.raises(ExpansionError):
            expand_quantifiers(parse("all(X, p(X))"), ())

    def test_unbound_variable_rejected(self):
        with pytest.raises(ExpansionError):
            expand_quantifiers(parse("p(X)"), ("a",))

    def test_shadowing(self):
        f = parse("all(X, (p(X), ex(X, q(X))))")
        out = expand_quantifiers(f, ("a", "b"))
        # inner ex rebinds X; both constants appear under each outer branch
        names = {str(a) for a in atoms_of(out)}
        assert names == {"p(a)", "p(b)", "q(a)", "q(b)"}


class TestRoundTrip:
    @given(operator_formulas())
    @settings(max_examples=120, deadline=None)
    def test_debug_form_reparses_structurally(self, f):
        text = format_ast(f)
        assert parse_formula(text) == f

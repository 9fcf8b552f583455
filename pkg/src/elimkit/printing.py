"""Application-facing output formats.

``print_ppr`` renders a simplified CNF with clauses written as reverse
implications; ``print_ppm`` renders a simplified DNF in list notation.
Both are canonical: atoms sort lexicographically by printed name, negative
literals sort after positive ones of the same atom, clauses sort
lexicographically, and identical inputs produce byte-identical output.
"""

from __future__ import annotations

from .errors import OperatorPresentError, ParseError
from .formulas import (
    And, Atom, AtomRef, Bot, Circ, Equiv, Exists, ForAll, Forg, Formula,
    FormulaParam, Implies, ImpliedBy, Literal, MacroCall, Not, Or, Proj,
    Rename, RenameAtoms, Scope, ScopeAll, ScopeAtomItem, ScopeComplements,
    ScopeGroupItem, ScopeList, ScopeLiteralItem, ScopeParam, ScopeUnion, Top,
    atom_from_functor, is_operator_free, or_all, and_all, literal_formula,
)
from .normalform import ClauseSet, to_cnf, to_dnf
from .parser import tokenize


def _require_operator_free(f: Formula, printer: str) -> None:
    if not is_operator_free(f):
        raise OperatorPresentError(
            f"{printer} requires an operator-free formula; run elimination first")


def print_ppr(f: Formula) -> str:
    """Simplified CNF as a conjunction of reverse implications."""
    _require_operator_free(f, "ppr")
    cs = to_cnf(f)
    if not cs.clauses:
        return "true"
    if frozenset() in cs.clauses:
        return "false"
    rendered = sorted(_ppr_clause(c) for c in cs.clauses)
    if len(rendered) == 1:
        return f"({rendered[0]})"
    return "(" + ",\n ".join(f"({c})" for c in rendered) + ")"


def _ppr_clause(clause) -> str:
    heads = sorted(str(l.atom) for l in clause if l.positive)
    bodies = sorted(str(l.atom) for l in clause if not l.positive)
    if heads and bodies:
        return f"{' ; '.join(heads)} <- {', '.join(bodies)}"
    if heads:
        return " ; ".join(heads)
    return f"false <- {', '.join(bodies)}"


def _ppm_literal(l: Literal) -> str:
    return str(l.atom) if l.positive else "~" + str(l.atom)


def _ppm_clauses(cs: ClauseSet) -> str:
    rows = cs.sorted_clauses()
    return "[" + ",".join(
        "[" + ", ".join(_ppm_literal(l) for l in row) + "]"
        for row in rows) + "]"


def print_ppm(f: Formula) -> str:
    """Simplified DNF in list notation, tautology- and subsumption-free.

    An unsatisfiable input prints ``[]``, a valid one prints ``[[]]``.
    """
    _require_operator_free(f, "ppm")
    return _ppm_clauses(to_dnf(f))


def print_model_list(cs: ClauseSet) -> str:
    """Full-DNF clause set (one clause per model) in ppm list notation."""
    return _ppm_clauses(cs)


def parse_ppm(text: str) -> Formula:
    """Read ppm list notation back into a formula (testing aid)."""
    tokens = tokenize(text)
    pos = 0

    def expect(kind: str):
        nonlocal pos
        tok = tokens[pos]
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.value!r}",
                             tok.line, tok.col)
        pos += 1
        return tok

    def literal() -> Formula:
        nonlocal pos
        negated = tokens[pos].kind == "~"
        if negated:
            pos += 1
        tok = expect("ident")
        ref = AtomRef(atom_from_functor(tok.value))
        return Not(ref) if negated else ref

    def clause() -> Formula:
        expect("[")
        lits = []
        if tokens[pos].kind != "]":
            lits.append(literal())
            while tokens[pos].kind == ",":
                expect(",")
                lits.append(literal())
        expect("]")
        return and_all(lits)

    expect("[")
    clauses = []
    if tokens[pos].kind != "]":
        clauses.append(clause())
        while tokens[pos].kind == ",":
            expect(",")
            clauses.append(clause())
    expect("]")
    expect("eof")
    return or_all(clauses)


# ---------------------------------------------------------------------------
# fully parenthesized debug form (re-parseable)

_BINOP = {And: ",", Or: ";", Implies: "->", ImpliedBy: "<-", Equiv: "<->"}


def format_scope(s: Scope) -> str:
    if isinstance(s, ScopeList):
        return "[" + ", ".join(_scope_item(i) for i in s.items) + "]"
    if isinstance(s, ScopeAll):
        return "all"
    if isinstance(s, ScopeComplements):
        return f"complements({format_scope(s.inner)})"
    if isinstance(s, ScopeUnion):
        return f"union({format_scope(s.left)}, {format_scope(s.right)})"
    if isinstance(s, ScopeParam):
        return s.name
    raise TypeError(f"unknown scope: {s!r}")


def _scope_item(item) -> str:
    if isinstance(item, ScopeAtomItem):
        return str(item.atom)
    if isinstance(item, ScopeLiteralItem):
        sign = "+" if item.literal.positive else "-"
        return sign + str(item.literal.atom)
    if isinstance(item, ScopeGroupItem):
        if item.sign is None:
            return str(item.group)
        return ("+" if item.sign else "-") + f"({item.group})"
    raise TypeError(f"unknown scope item: {item!r}")


def format_ast(f: Formula) -> str:
    """Parenthesized tree text that re-parses to the same AST."""
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, AtomRef):
        return str(f.atom)
    if isinstance(f, Not):
        return "~" + format_ast(f.arg)
    op = _BINOP.get(type(f))
    if op is not None:
        return f"({format_ast(f.left)} {op} {format_ast(f.right)})"
    if isinstance(f, Forg):
        return f"forg({format_scope(f.scope)}, {format_ast(f.arg)})"
    if isinstance(f, Proj):
        return f"proj({format_scope(f.scope)}, {format_ast(f.arg)})"
    if isinstance(f, Circ):
        return f"circ({format_scope(f.scope)}, {format_ast(f.arg)})"
    if isinstance(f, Rename):
        pairs = ", ".join(f"{s}-{t}" for s, t in f.pairs)
        return f"rename([{pairs}], {format_ast(f.arg)})"
    if isinstance(f, RenameAtoms):
        # engine-internal node; informational only, not re-parseable
        pairs = ", ".join(f"{a}>{b}" for a, b in f.mapping)
        return f"rename_atoms({{{pairs}}}, {format_ast(f.arg)})"
    if isinstance(f, MacroCall):
        parts = [format_scope(a) if not isinstance(a, Formula) else format_ast(a)
                 for a in f.args]
        return f"{f.name}({', '.join(parts)})"
    if isinstance(f, ForAll):
        return f"all({f.var}, {format_ast(f.arg)})"
    if isinstance(f, Exists):
        return f"ex({f.var}, {format_ast(f.arg)})"
    if isinstance(f, FormulaParam):
        return f.name
    raise TypeError(f"unknown formula node: {f!r}")

"""Concrete syntax for programs and query expressions.

Statements (terminated by ``.``, with ``#`` line comments):

    let NAME = formula.
    macro NAME(P1, ..., Pk) = formula.
    domain {c1, ..., ck}.

Connectives from weakest to strongest binding: ``<->``, then ``->`` and
``<-``, then ``;``, then ``,``, then ``~``.  Parentheses override.  Call
arguments (operator, macro, and quantifier positions) are parsed at unary
level, so an argument using a binary connective needs parentheses, as in
``forg([q], ((p <- q), (q <- r)))``.

Uppercase identifiers are macro parameters inside macro bodies and
quantified variables under ``all``/``ex``; everywhere else they are an
error.  Defined names resolve to their definitions; undeclared names with
argument lists parse as compound ground atoms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .errors import ExpansionError, MacroError, ParseError
from .formulas import (
    And, Atom, AtomRef, Bot, Circ, Equiv, Exists, ForAll, Forg, Formula,
    FormulaParam, Implies, ImpliedBy, MacroCall, Not, Or, Proj, Rename, Scope,
    ScopeAll, ScopeAtomItem, ScopeComplements, ScopeGroupItem, ScopeList,
    ScopeLiteralItem, ScopeParam, ScopeUnion, Term, Top, atom_from_functor,
    and_all, or_all, BINARY, RenameAtoms, Literal, with_arg,
)
from .macros import (
    FORMULA_PARAM, MacroDef, Program, RESERVED_NAMES, SCOPE_PARAM,
    register_macro,
)

TRUE = Top()
FALSE = Bot()


# ---------------------------------------------------------------------------
# lexer

@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    col: int


_SYMBOLS = ("<->", "<-", "->", "(", ")", "[", "]", "{", "}",
            ",", ";", "~", "+", "-", "=", ".")


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "var" if word[0].isupper() else "ident"
            tokens.append(Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("num", text[i:j], line, col))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token(sym, sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# recursive-descent parser

class _Parser:
    def __init__(self, text: str, prog: Program,
                 params: Optional[dict[str, Optional[str]]] = None):
        self.tokens = tokenize(text)
        self.pos = 0
        self.prog = prog
        self.params = params  # macro body parameter kinds, inferred in place
        self.bound_vars: list[str] = []

    # -- token helpers

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.value!r}",
                             tok.line, tok.col)
        return tok

    def error(self, message: str) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.line, tok.col)

    # -- formulas, weakest binding first

    def formula(self) -> Formula:
        return self._equiv()

    def _equiv(self) -> Formula:
        parts = [self._impl()]
        while self.peek().kind == "<->":
            self.next()
            parts.append(self._impl())
        out = parts[-1]
        for p in reversed(parts[:-1]):
            out = Equiv(p, out)
        return out

    def _impl(self) -> Formula:
        left = self._or()
        kind = self.peek().kind
        if kind == "->":
            self.next()
            return Implies(left, self._impl())
        if kind == "<-":
            self.next()
            return ImpliedBy(left, self._impl())
        return left

    def _or(self) -> Formula:
        parts = [self._and()]
        while self.peek().kind == ";":
            self.next()
            parts.append(self._and())
        return or_all(parts)

    def _and(self) -> Formula:
        parts = [self._unary()]
        while self.peek().kind == ",":
            self.next()
            parts.append(self._unary())
        return and_all(parts)

    def _unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "~":
            self.next()
            return Not(self._unary())
        if tok.kind == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        if tok.kind == "var":
            return self._param_ref()
        if tok.kind == "ident":
            return self._named()
        raise self.error(f"expected a formula, found {tok.value!r}")

    def _param_ref(self) -> Formula:
        tok = self.next()
        if self.params is None or tok.value not in self.params:
            raise ParseError(f"unbound name {tok.value!r} in formula position",
                             tok.line, tok.col)
        kind = self.params[tok.value]
        if kind == SCOPE_PARAM:
            raise ParseError(
                f"scope parameter {tok.value!r} used as a formula",
                tok.line, tok.col)
        self.params[tok.value] = FORMULA_PARAM
        return FormulaParam(tok.value)

    def _named(self) -> Formula:
        tok = self.next()
        word = tok.value
        called = self.peek().kind == "("
        if word == "true":
            return TRUE
        if word == "false":
            return FALSE
        if word in ("all", "ex") and called:
            return self._quantifier(word)
        if word in ("forg", "proj", "circ") and called:
            self.next()
            scope = self.scope()
            self.expect(",")
            arg = self._unary()
            self.expect(")")
            node = {"forg": Forg, "proj": Proj, "circ": Circ}[word]
            return node(scope, arg)
        if word == "rename" and called:
            self.next()
            pairs = self._group_pairs()
            self.expect(",")
            arg = self._unary()
            self.expect(")")
            return Rename(pairs, arg)
        if word in RESERVED_NAMES:
            raise ParseError(f"reserved name {word!r} used as an atom",
                             tok.line, tok.col)
        if called and word in self.prog.macros:
            return self._macro_call(word, tok)
        if called:
            # undeclared name with arguments: a compound ground atom
            args = self._term_args()
            return AtomRef(self._make_atom(word, args, tok))
        if word in self.prog.definitions:
            return self.prog.definitions[word]
        return AtomRef(self._make_atom(word, (), tok))

    def _make_atom(self, functor: str, args: tuple[Term, ...],
                   tok: Token) -> Atom:
        try:
            return atom_from_functor(functor, args)
        except ValueError as exc:
            raise ParseError(str(exc), tok.line, tok.col) from exc

    def _quantifier(self, word: str) -> Formula:
        self.expect("(")
        var = self.expect("var").value
        self.expect(",")
        self.bound_vars.append(var)
        try:
            arg = self._unary()
        finally:
            self.bound_vars.pop()
        self.expect(")")
        return (ForAll if word == "all" else Exists)(var, arg)

    def _macro_call(self, name: str, tok: Token) -> Formula:
        mdef = self.prog.macros[name]
        self.expect("(")
        args: list[Union[Formula, Scope]] = []
        for k, (_, kind) in enumerate(mdef.params):
            if k:
                self.expect(",")
            args.append(self.scope() if kind == SCOPE_PARAM else self._unary())
        if self.peek().kind == ",":
            raise ParseError(
                f"macro {name!r} expects {mdef.arity} arguments",
                tok.line, tok.col)
        self.expect(")")
        return MacroCall(name, tuple(args))

    def _term_args(self) -> tuple[Term, ...]:
        self.expect("(")
        args = [self._term()]
        while self.peek().kind == ",":
            self.next()
            args.append(self._term())
        self.expect(")")
        return tuple(args)

    def _term(self) -> Term:
        tok = self.next()
        if tok.kind == "var":
            if (self.params is not None and tok.value in self.params
                    and tok.value not in self.bound_vars):
                raise ParseError(
                    f"macro parameter {tok.value!r} cannot occur as a term",
                    tok.line, tok.col)
            return Term(tok.value)
        if tok.kind != "ident":
            raise ParseError(f"expected a term, found {tok.value!r}",
                             tok.line, tok.col)
        if self.peek().kind == "(":
            return Term(tok.value, self._term_args())
        return Term(tok.value)

    # -- scopes

    def scope(self) -> Scope:
        tok = self.peek()
        if tok.kind == "[":
            return self._scope_list()
        if tok.kind == "ident" and tok.value == "all":
            self.next()
            return ScopeAll()
        if tok.kind == "ident" and tok.value == "complements":
            self.next()
            self.expect("(")
            inner = self.scope()
            self.expect(")")
            return ScopeComplements(inner)
        if tok.kind == "ident" and tok.value == "union":
            self.next()
            self.expect("(")
            left = self.scope()
            self.expect(",")
            right = self.scope()
            self.expect(")")
            return ScopeUnion(left, right)
        if tok.kind == "var":
            self.next()
            if self.params is None or tok.value not in self.params:
                raise ParseError(f"unbound name {tok.value!r} in scope position",
                                 tok.line, tok.col)
            kind = self.params[tok.value]
            if kind == FORMULA_PARAM:
                raise ParseError(
                    f"formula parameter {tok.value!r} used as a scope",
                    tok.line, tok.col)
            self.params[tok.value] = SCOPE_PARAM
            return ScopeParam(tok.value)
        raise self.error(f"expected a scope, found {tok.value!r}")

    def _scope_list(self) -> ScopeList:
        self.expect("[")
        items = []
        if self.peek().kind != "]":
            items.append(self._scope_item())
            while self.peek().kind == ",":
                self.next()
                items.append(self._scope_item())
        self.expect("]")
        return ScopeList(tuple(items))

    def _scope_item(self):
        tok = self.next()
        if tok.kind in ("+", "-"):
            sign = tok.kind == "+"
            nxt = self.peek()
            if nxt.kind == "(":
                self.next()
                num = self.expect("num")
                self.expect(")")
                return ScopeGroupItem(int(num.value), sign)
            if nxt.kind == "num":
                self.next()
                return ScopeGroupItem(int(nxt.value), sign)
            if nxt.kind == "ident":
                self.next()
                args = self._term_args() if self.peek().kind == "(" else ()
                return ScopeLiteralItem(
                    Literal(self._make_atom(nxt.value, args, nxt), sign))
            raise self.error(f"expected an atom or group after {tok.value!r}")
        if tok.kind == "num":
            return ScopeGroupItem(int(tok.value))
        if tok.kind == "ident":
            if tok.value in RESERVED_NAMES:
                raise ParseError(f"reserved name {tok.value!r} in scope",
                                 tok.line, tok.col)
            args = self._term_args() if self.peek().kind == "(" else ()
            return ScopeAtomItem(self._make_atom(tok.value, args, tok))
        raise ParseError(f"expected a scope item, found {tok.value!r}",
                         tok.line, tok.col)

    def _group_pairs(self) -> tuple[tuple[int, int], ...]:
        self.expect("[")
        pairs = []
        while self.peek().kind != "]":
            if pairs:
                self.expect(",")
            src = self.expect("num")
            self.expect("-")
            tgt = self.expect("num")
            pairs.append((int(src.value), int(tgt.value)))
        self.expect("]")
        return tuple(pairs)

    # -- statements

    def program(self) -> Program:
        while self.peek().kind != "eof":
            self._statement()
        return self.prog

    def _statement(self) -> None:
        tok = self.expect("ident")
        if tok.value == "let":
            name = self.expect("ident").value
            if name in self.prog.definitions:
                raise ParseError(f"duplicate definition of {name!r}",
                                 tok.line, tok.col)
            if name in RESERVED_NAMES:
                raise ParseError(f"reserved name {name!r} cannot be defined",
                                 tok.line, tok.col)
            self.expect("=")
            body = self.formula()
            self.expect(".")
            self.prog.definitions[name] = body
        elif tok.value == "macro":
            self._macro_statement(tok)
        elif tok.value == "domain":
            self.expect("{")
            constants = []
            if self.peek().kind != "}":
                constants.append(self.expect("ident").value)
                while self.peek().kind == ",":
                    self.next()
                    constants.append(self.expect("ident").value)
            self.expect("}")
            self.expect(".")
            merged = list(self.prog.domain)
            for c in constants:
                if c not in merged:
                    merged.append(c)
            self.prog.domain = tuple(merged)
        else:
            raise ParseError(
                f"expected 'let', 'macro' or 'domain', found {tok.value!r}",
                tok.line, tok.col)

    def _macro_statement(self, tok: Token) -> None:
        name = self.expect("ident").value
        self.expect("(")
        params = [self.expect("var").value]
        while self.peek().kind == ",":
            self.next()
            params.append(self.expect("var").value)
        self.expect(")")
        self.expect("=")
        outer_params = self.params
        self.params = {p: None for p in params}
        if len(self.params) != len(params):
            raise ParseError(f"duplicate parameter in macro {name!r}",
                             tok.line, tok.col)
        try:
            body = self.formula()
        finally:
            kinds = self.params
            self.params = outer_params
        self.expect(".")
        mdef = MacroDef(
            name,
            tuple((p, kinds[p] or FORMULA_PARAM) for p in params),
            body)
        self.prog = register_macro(self.prog, mdef)


def parse_program(text: str, include_builtins: bool = True) -> Program:
    """Parse a program file into definitions, macros, and domain."""
    prog = Program.with_builtins() if include_builtins else Program()
    parser = _Parser(text, prog)
    return parser.program()


def parse_formula(text: str, ctx: Optional[Program] = None) -> Formula:
    """Parse a single query expression against a program context."""
    prog = ctx if ctx is not None else Program.with_builtins()
    parser = _Parser(text, prog)
    f = parser.formula()
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input {tok.value!r}", tok.line, tok.col)
    return f


# ---------------------------------------------------------------------------
# propositional expansion of first-order quantifiers

def _subst_term(t: Term, env: dict[str, str]) -> Term:
    if t.is_var:
        if t.name in env:
            return Term(env[t.name])
        raise ExpansionError(f"unbound variable {t.name!r}")
    if not t.args:
        return t
    return Term(t.name, tuple(_subst_term(a, env) for a in t.args))


def _expand_atom(a: Atom, env: dict[str, str]) -> Atom:
    if a.is_ground():
        return a
    return Atom(a.base, a.group, tuple(_subst_term(t, env) for t in a.args))


def _expand_scope(s: Scope, env: dict[str, str]) -> Scope:
    if isinstance(s, ScopeList):
        items = []
        for item in s.items:
            if isinstance(item, ScopeAtomItem):
                items.append(ScopeAtomItem(_expand_atom(item.atom, env)))
            elif isinstance(item, ScopeLiteralItem):
                lit = item.literal
                items.append(ScopeLiteralItem(
                    Literal(_expand_atom(lit.atom, env), lit.positive)))
            else:
                items.append(item)
        return ScopeList(tuple(items))
    if isinstance(s, ScopeComplements):
        return ScopeComplements(_expand_scope(s.inner, env))
    if isinstance(s, ScopeUnion):
        return ScopeUnion(_expand_scope(s.left, env),
                          _expand_scope(s.right, env))
    return s


def expand_quantifiers(f: Formula, domain: tuple[str, ...]) -> Formula:
    """Replace all/ex by finite conjunctions/disjunctions over the domain."""

    def walk(g: Formula, env: dict[str, str]) -> Formula:
        if isinstance(g, (ForAll, Exists)):
            if not domain:
                raise ExpansionError(
                    "quantifier present but the domain is empty")
            parts = []
            for c in domain:
                sub = dict(env)
                sub[g.var] = c
                parts.append(walk(g.arg, sub))
            return (and_all if isinstance(g, ForAll) else or_all)(parts)
        if isinstance(g, AtomRef):
            return AtomRef(_expand_atom(g.atom, env))
        if isinstance(g, (Top, Bot, FormulaParam)):
            return g
        if isinstance(g, Not):
            return Not(walk(g.arg, env))
        if isinstance(g, BINARY):
            return type(g)(walk(g.left, env), walk(g.right, env))
        if isinstance(g, (Forg, Proj, Circ)):
            return type(g)(_expand_scope(g.scope, env), walk(g.arg, env))
        if isinstance(g, (Rename, RenameAtoms)):
            return with_arg(g, walk(g.arg, env))
        if isinstance(g, MacroCall):
            return MacroCall(g.name, tuple(
                walk(a, env) if isinstance(a, Formula)
                else _expand_scope(a, env)
                for a in g.args))
        raise TypeError(f"unknown formula node: {g!r}")

    return walk(f, {})

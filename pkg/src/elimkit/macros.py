"""User-defined and built-in logic operators (macros).

A macro maps a named call with scope- and formula-valued parameters to a
formula template.  Two macros ship built in:

    gwsc(S, F, G)  ->  ~proj(complements(S), (F, ~G))
    stable(F)      ->  rename([1-0], circ([+(0), 1], F))

the weakest sufficient condition used for abduction and the
circumscription-plus-renaming encoding of the stable-model semantics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .errors import EngineLimitError, MacroError
from .formulas import (
    And, Circ, Formula, FormulaParam, MacroCall, Not, Proj, Rename,
    RenameAtoms, Scope, ScopeAtomItem, ScopeComplements, ScopeGroupItem,
    ScopeList, ScopeLiteralItem, ScopeParam, ScopeUnion, children, with_arg,
    BINARY, Forg, ForAll, Exists, Top, Bot, AtomRef,
)

MACRO_DEPTH_LIMIT = 32

RESERVED_NAMES = frozenset({
    "true", "false", "all", "ex", "forg", "proj", "circ", "rename",
    "complements", "union", "let", "macro", "domain",
})

SCOPE_PARAM = "scope"
FORMULA_PARAM = "formula"


@dataclass(frozen=True)
class MacroDef:
    name: str
    params: tuple[tuple[str, str], ...]  # (param name, kind)
    body: Formula

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass
class Program:
    """Named definitions, registered macros, and the finite domain used for
    quantifier expansion.  Treated as immutable after parsing."""

    definitions: dict[str, Formula] = field(default_factory=dict)
    macros: dict[str, MacroDef] = field(default_factory=dict)
    domain: tuple[str, ...] = ()

    @classmethod
    def with_builtins(cls) -> "Program":
        prog = cls()
        for mdef in builtin_macro_table():
            prog.macros[mdef.name] = mdef
        return prog


def builtin_macro_table() -> tuple[MacroDef, ...]:
    """The built-in macro definitions, as formula templates."""
    gwsc = MacroDef(
        "gwsc",
        (("S", SCOPE_PARAM), ("F", FORMULA_PARAM), ("G", FORMULA_PARAM)),
        Not(Proj(ScopeComplements(ScopeParam("S")),
                 And(FormulaParam("F"), Not(FormulaParam("G"))))))
    stable = MacroDef(
        "stable",
        (("F", FORMULA_PARAM),),
        Rename(((1, 0),),
               Circ(ScopeList((ScopeGroupItem(0, True), ScopeGroupItem(1))),
                    FormulaParam("F"))))
    return (gwsc, stable)


def _scope_params(scope: Scope, out: dict[str, str]) -> None:
    if isinstance(scope, ScopeParam):
        prev = out.setdefault(scope.name, SCOPE_PARAM)
        if prev != SCOPE_PARAM:
            raise MacroError(
                f"parameter {scope.name!r} used both as scope and formula")
    elif isinstance(scope, ScopeComplements):
        _scope_params(scope.inner, out)
    elif isinstance(scope, ScopeUnion):
        _scope_params(scope.left, out)
        _scope_params(scope.right, out)


def _body_params(f: Formula, out: dict[str, str]) -> None:
    if isinstance(f, FormulaParam):
        prev = out.setdefault(f.name, FORMULA_PARAM)
        if prev != FORMULA_PARAM:
            raise MacroError(
                f"parameter {f.name!r} used both as scope and formula")
        return
    if isinstance(f, (Forg, Proj, Circ)):
        _scope_params(f.scope, out)
        _body_params(f.arg, out)
        return
    if isinstance(f, MacroCall):
        for a in f.args:
            if isinstance(a, Formula):
                _body_params(a, out)
            else:
                _scope_params(a, out)
        return
    for c in children(f):
        _body_params(c, out)


def _body_macro_names(f: Formula, out: set[str]) -> None:
    if isinstance(f, MacroCall):
        out.add(f.name)
        for a in f.args:
            if isinstance(a, Formula):
                _body_macro_names(a, out)
        return
    for c in children(f):
        _body_macro_names(c, out)


def register_macro(prog: Program, mdef: MacroDef) -> Program:
    """Add a macro definition, checking name, parameters, and body."""
    if mdef.name in RESERVED_NAMES:
        raise MacroError(f"{mdef.name!r} is a reserved operator name")
    if mdef.name in prog.macros:
        raise MacroError(f"duplicate definition of macro {mdef.name!r}")
    names = [p for p, _ in mdef.params]
    if len(set(names)) != len(names):
        raise MacroError(f"duplicate parameter in macro {mdef.name!r}")
    used: dict[str, str] = {}
    _body_params(mdef.body, used)
    declared = dict(mdef.params)
    for pname, kind in used.items():
        if pname not in declared:
            raise MacroError(
                f"macro {mdef.name!r} body references undeclared {pname!r}")
        if declared[pname] != kind:
            raise MacroError(
                f"parameter {pname!r} of {mdef.name!r} declared {declared[pname]} "
                f"but used as {kind}")
    called: set[str] = set()
    _body_macro_names(mdef.body, called)
    unknown = called - set(prog.macros)
    if unknown:
        raise MacroError(
            f"macro {mdef.name!r} body calls unknown {sorted(unknown)}")
    macros = dict(prog.macros)
    macros[mdef.name] = mdef
    return Program(dict(prog.definitions), macros, prog.domain)


def _subst_scope(scope: Scope, env: dict[str, Union[Formula, Scope]]) -> Scope:
    if isinstance(scope, ScopeParam):
        actual = env.get(scope.name)
        if actual is None:
            return scope
        if isinstance(actual, Formula):
            raise MacroError(
                f"formula argument supplied for scope parameter {scope.name!r}")
        return actual
    if isinstance(scope, ScopeComplements):
        return ScopeComplements(_subst_scope(scope.inner, env))
    if isinstance(scope, ScopeUnion):
        return ScopeUnion(_subst_scope(scope.left, env),
                          _subst_scope(scope.right, env))
    return scope


def _subst_body(f: Formula, env: dict[str, Union[Formula, Scope]]) -> Formula:
    if isinstance(f, FormulaParam):
        actual = env.get(f.name)
        if actual is None:
            return f
        if not isinstance(actual, Formula):
            raise MacroError(
                f"scope argument supplied for formula parameter {f.name!r}")
        return actual
    if isinstance(f, (Top, Bot, AtomRef)):
        return f
    if isinstance(f, (Forg, Proj, Circ)):
        return type(f)(_subst_scope(f.scope, env), _subst_body(f.arg, env))
    if isinstance(f, MacroCall):
        new_args = tuple(
            _subst_body(a, env) if isinstance(a, Formula)
            else _subst_scope(a, env)
            for a in f.args)
        return MacroCall(f.name, new_args)
    if isinstance(f, Not):
        return Not(_subst_body(f.arg, env))
    if isinstance(f, BINARY):
        return type(f)(_subst_body(f.left, env), _subst_body(f.right, env))
    if isinstance(f, (Rename, RenameAtoms, ForAll, Exists)):
        return with_arg(f, _subst_body(f.arg, env))
    raise TypeError(f"unknown formula node: {f!r}")


def _expand_outermost(f: Formula, prog: Program) -> Formula:
    if isinstance(f, MacroCall):
        mdef = prog.macros.get(f.name)
        if mdef is None:
            raise MacroError(f"unknown macro {f.name!r}")
        if len(f.args) != mdef.arity:
            raise MacroError(
                f"macro {f.name!r} expects {mdef.arity} arguments, "
                f"got {len(f.args)}")
        env: dict[str, Union[Formula, Scope]] = {
            p: a for (p, _), a in zip(mdef.params, f.args)}
        return _subst_body(mdef.body, env)
    if isinstance(f, (Top, Bot, AtomRef, FormulaParam)):
        return f
    if isinstance(f, Not):
        new = _expand_outermost(f.arg, prog)
        return f if new is f.arg else Not(new)
    if isinstance(f, BINARY):
        nl = _expand_outermost(f.left, prog)
        nr = _expand_outermost(f.right, prog)
        if nl is f.left and nr is f.right:
            return f
        return type(f)(nl, nr)
    new = _expand_outermost(f.arg, prog)
    return f if new is f.arg else with_arg(f, new)


def expand_macros(f: Formula, prog: Program) -> Formula:
    """Outside-in macro expansion to a macro-free formula."""
    for _ in range(MACRO_DEPTH_LIMIT):
        expanded = _expand_outermost(f, prog)
        if expanded is f:
            return f
        f = expanded
    raise EngineLimitError(
        f"macro expansion exceeded depth {MACRO_DEPTH_LIMIT}")

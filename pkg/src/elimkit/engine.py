"""The elimination loop.

A problem formula is preprocessed so that only the two primitive operators
survive: forgetting (with scopes grounded once against the global
signature of the whole problem) and renaming (grounded to an explicit atom
map).  The loop then alternates equivalence-preserving simplification with
dispatching one subtask at a time, picked leftmost-innermost within the
priority order: resolve renamings, reduce full-signature forgetting via a
SAT call, decide closed subformulas as QBF, and otherwise eliminate one
scope atom with Davis-Putnam resolution when its resolvent bound looks
favourable, or Shannon expansion when it does not.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .errors import EngineLimitError, OperatorPresentError, SolverError
from .formulas import (
    And, Atom, AtomRef, Bot, Circ, Forg, Formula, FormulaParam, Implies,
    Literal, Not, Or, Polarity, Proj, Rename, RenameAtoms, Scope,
    ScopeAtomItem, ScopeList, ScopeLiteralItem, Top, all_literals, and_all,
    atoms_of, children, ground_scope, is_operator_free, neg, node_count,
    or_all, polarity_of_atom, pos, scope_from_atoms, scope_from_literals,
    simplify_constants, sorted_atoms, substitute, substitute_atoms, with_arg,
    BINARY,
)
from .macros import Program, expand_macros
from .normalform import ClauseSet, clauses_to_formula, is_tautological, simplify_clauses, to_cnf
from .parser import expand_quantifiers
from .sat import clausify_equisat, decide_closed, is_closed, run_external_sat, solve_cnf

TRUE = Top()
FALSE = Bot()


@dataclass
class EngineConfig:
    size_measure: str = "nodes"
    shannon_guard: bool = True
    portfolio_threshold: int = 0
    external_sat_cmd: Optional[str] = None
    external_qbf_cmd: Optional[str] = None
    solver_timeout_ms: int = 10_000
    step_limit: int = 100_000
    enable_forg_merge: bool = True
    trace: Optional[Callable[[str], None]] = None

    def __post_init__(self):
        if self.step_limit <= 0:
            raise ValueError("step limit must be positive")


@dataclass
class EngineStats:
    rewrites_applied: int = 0
    shannon_guard_commits: int = 0
    sat_dispatches: int = 0
    qbf_dispatches: int = 0
    portfolio_dp: int = 0
    portfolio_shannon: int = 0
    renames_resolved: int = 0
    external_solver_calls: int = 0
    steps: int = 0


@dataclass
class ElimState:
    current: Formula
    sig: tuple[Atom, ...]
    stats: EngineStats
    config: EngineConfig


@dataclass(frozen=True)
class Subtask:
    kind: str  # rename | sat | qbf | dp | shannon
    path: tuple[int, ...]
    atom: Optional[Atom] = None


# ---------------------------------------------------------------------------
# scope helpers (engine-internal scopes are explicit literal lists)

def _explicit_literals(scope: Scope) -> frozenset[Literal]:
    if not isinstance(scope, ScopeList):
        raise OperatorPresentError(
            "engine scopes must be grounded literal lists; "
            "run rewrite_to_primitives first")
    out: set[Literal] = set()
    for item in scope.items:
        if isinstance(item, ScopeLiteralItem):
            out.add(item.literal)
        elif isinstance(item, ScopeAtomItem):
            out.add(pos(item.atom))
            out.add(neg(item.atom))
        else:
            raise OperatorPresentError(
                "engine scopes must be grounded literal lists")
    return frozenset(out)


def _forg(lits: frozenset[Literal], arg: Formula) -> Formula:
    if not lits:
        return arg
    return Forg(scope_from_literals(lits), arg)


# ---------------------------------------------------------------------------
# reduction to the primitive operators

def _max_group(f: Formula, sig) -> int:
    groups = [a.group for a in atoms_of(f)] + [a.group for a in sig]
    return max(groups, default=0)


def _apply_atom_map(f: Formula, mapping: dict[Atom, Atom]) -> Formula:
    """Rename atoms everywhere, including inside grounded scopes and
    renaming maps (used to build the primed copy for circumscription)."""

    def m(a: Atom) -> Atom:
        return mapping.get(a, a)

    if isinstance(f, AtomRef):
        return AtomRef(m(f.atom))
    if isinstance(f, (Top, Bot)):
        return f
    if isinstance(f, Not):
        return Not(_apply_atom_map(f.arg, mapping))
    if isinstance(f, BINARY):
        return type(f)(_apply_atom_map(f.left, mapping),
                       _apply_atom_map(f.right, mapping))
    if isinstance(f, Forg):
        lits = _explicit_literals(f.scope)
        new = frozenset(Literal(m(l.atom), l.positive) for l in lits)
        return Forg(scope_from_literals(new), _apply_atom_map(f.arg, mapping))
    if isinstance(f, RenameAtoms):
        new_map = tuple(sorted(((m(a), m(b)) for a, b in f.mapping),
                               key=lambda p: p[0].sort_key()))
        return RenameAtoms(new_map, _apply_atom_map(f.arg, mapping))
    raise OperatorPresentError(
        f"cannot rename atoms under {type(f).__name__}; lower it first")


def build_circ_reduction(scope: Scope, g: Formula, sig) -> Formula:
    """Reduce scope-determined circumscription to forgetting.

    Signature atoms with only their positive literal in the grounded scope
    are minimized, negative-only atoms maximized, both-polarity atoms
    fixed, absent atoms varied.  The result conjoins g with the negated
    forgetting, over primed copies of all non-fixed atoms, of: the primed
    copy of g, the preorder constraints between primed and plain atoms,
    and the strictness disjunction.  Primed copies live in reserved groups
    above every group in sight, so nested reductions cannot collide.
    """
    sig = frozenset(sig)
    sg = ground_scope(scope, sig)
    minimized, maximized, varied = [], [], []
    for a in sorted_atoms(sig):
        p_in, n_in = pos(a) in sg, neg(a) in sg
        if p_in and not n_in:
            minimized.append(a)
        elif n_in and not p_in:
            maximized.append(a)
        elif not p_in and not n_in:
            varied.append(a)
    if not minimized and not maximized:
        return g
    reserved = _max_group(g, sig) + 1
    prime = {a: Atom(a.base, reserved + a.group, a.args)
             for a in minimized + maximized + varied}
    g_primed = _apply_atom_map(g, prime)
    constraints = [Implies(AtomRef(prime[a]), AtomRef(a)) for a in minimized]
    constraints += [Implies(AtomRef(a), AtomRef(prime[a])) for a in maximized]
    strict = or_all(
        [And(AtomRef(a), Not(AtomRef(prime[a]))) for a in minimized]
        + [And(Not(AtomRef(a)), AtomRef(prime[a])) for a in maximized])
    body = and_all([g_primed] + constraints + [strict])
    return And(g, Not(Forg(scope_from_atoms(prime.values()), body)))


def rewrite_to_primitives(f: Formula, sig) -> Formula:
    """Lower projection and circumscription so that only forgetting and
    grounded renaming remain; all scopes become explicit literal lists
    grounded against the global signature."""
    sig = frozenset(sig)

    def lower(g: Formula) -> Formula:
        if isinstance(g, (Top, Bot, AtomRef)):
            return g
        if isinstance(g, Not):
            return Not(lower(g.arg))
        if isinstance(g, BINARY):
            return type(g)(lower(g.left), lower(g.right))
        if isinstance(g, Forg):
            return _forg(ground_scope(g.scope, sig), lower(g.arg))
        if isinstance(g, Proj):
            kept = ground_scope(g.scope, sig)
            return _forg(all_literals(sig) - kept, lower(g.arg))
        if isinstance(g, Circ):
            return build_circ_reduction(g.scope, lower(g.arg), sig)
        if isinstance(g, Rename):
            mapping = {}
            for a in sorted_atoms(sig):
                for src, tgt in g.pairs:
                    if a.group == src:
                        if tgt != src:
                            mapping[a] = a.correspondent(tgt)
                        break
            return RenameAtoms(
                tuple(sorted(mapping.items(), key=lambda p: p[0].sort_key())),
                lower(g.arg))
        if isinstance(g, RenameAtoms):
            return RenameAtoms(g.mapping, lower(g.arg))
        raise OperatorPresentError(
            f"macros and quantifiers must be expanded before elimination, "
            f"got {type(g).__name__}")

    return lower(f)


# ---------------------------------------------------------------------------
# simplifying rewrites

def simplify_step(f: Formula) -> Formula:
    """One bottom-up pass of the low-cost rewrites; returns the argument
    object itself when nothing applies.

    Per forgetting node and pass at most one of: vacuous scope-literal
    drop, empty-scope removal, merge with a directly nested forgetting,
    distribution over a disjunction, distribution over a scope-disjoint
    conjunct, a purity substitution, or a single-sign literal unfold.
    """
    return _simplify(f, merge=True)


def _simplify(f: Formula, merge: bool) -> Formula:
    if isinstance(f, (Top, Bot, AtomRef, FormulaParam)):
        return f
    if isinstance(f, Not):
        a = _simplify(f.arg, merge)
        g = f if a is f.arg else Not(a)
    elif isinstance(f, BINARY):
        l = _simplify(f.left, merge)
        r = _simplify(f.right, merge)
        g = f if (l is f.left and r is f.right) else type(f)(l, r)
    elif isinstance(f, (Forg, RenameAtoms)):
        a = _simplify(f.arg, merge)
        g = f if a is f.arg else with_arg(f, a)
    else:
        raise OperatorPresentError(
            f"simplify_step expects lowered formulas, got {type(f).__name__}")
    return _local(g, merge)


def _fold1(f: Formula) -> Formula:
    """One-level truth-constant propagation (children already folded)."""
    if isinstance(f, Not):
        if isinstance(f.arg, Top):
            return FALSE
        if isinstance(f.arg, Bot):
            return TRUE
        return f
    if isinstance(f, And):
        if isinstance(f.left, Bot) or isinstance(f.right, Bot):
            return FALSE
        if isinstance(f.left, Top):
            return f.right
        if isinstance(f.right, Top):
            return f.left
        return f
    if isinstance(f, Or):
        if isinstance(f.left, Top) or isinstance(f.right, Top):
            return TRUE
        if isinstance(f.left, Bot):
            return f.right
        if isinstance(f.right, Bot):
            return f.left
        return f
    if isinstance(f, BINARY):
        if isinstance(f.left, (Top, Bot)) or isinstance(f.right, (Top, Bot)):
            return simplify_constants(f)
        return f
    if isinstance(f, (Forg, RenameAtoms)) and isinstance(f.arg, (Top, Bot)):
        return f.arg
    return f


def _local(f: Formula, merge: bool) -> Formula:
    g = _fold1(f)
    if isinstance(g, RenameAtoms) and not g.mapping:
        return g.arg
    if not isinstance(g, Forg):
        return g
    lits = _explicit_literals(g.scope)
    arg = g.arg
    arg_atoms = atoms_of(arg)
    kept = frozenset(l for l in lits if l.atom in arg_atoms)
    if not kept:
        return arg
    if kept != lits:
        return Forg(scope_from_literals(kept), arg)
    if merge and isinstance(arg, Forg):
        inner = _explicit_literals(arg.scope)
        return Forg(scope_from_literals(kept | inner), arg.arg)
    if isinstance(arg, Or):
        s = scope_from_literals(kept)
        return Or(Forg(s, arg.left), Forg(s, arg.right))
    if isinstance(arg, And):
        scope_atoms = frozenset(l.atom for l in kept)
        if not atoms_of(arg.right) & scope_atoms:
            return And(Forg(scope_from_literals(kept), arg.left), arg.right)
        if not atoms_of(arg.left) & scope_atoms:
            return And(arg.left, Forg(scope_from_literals(kept), arg.right))
    if is_operator_free(arg):
        for a in sorted_atoms({l.atom for l in kept}):
            polarity = polarity_of_atom(arg, a)
            if polarity is Polarity.POS and pos(a) in kept:
                new_arg = simplify_constants(substitute(arg, a, TRUE))
                return _forg(kept - {pos(a), neg(a)}, new_arg)
            if polarity is Polarity.NEG and neg(a) in kept:
                new_arg = simplify_constants(substitute(arg, a, FALSE))
                return _forg(kept - {pos(a), neg(a)}, new_arg)
        for l in sorted(kept, key=Literal.sort_key):
            if l.complement() in kept:
                continue
            a = l.atom
            if l.positive:
                cofactor = simplify_constants(substitute(arg, a, TRUE))
                new_arg = Or(arg, And(Not(AtomRef(a)), cofactor))
            else:
                cofactor = simplify_constants(substitute(arg, a, FALSE))
                new_arg = Or(arg, And(AtomRef(a), cofactor))
            return _forg(kept - {l}, new_arg)
    return g


def shannon_step(g: Formula, p: Atom) -> Formula:
    """Shannon expansion on one atom, constant-simplified."""
    return simplify_constants(
        Or(And(AtomRef(p), substitute(g, p, TRUE)),
           And(Not(AtomRef(p)), substitute(g, p, FALSE))))


# ---------------------------------------------------------------------------
# Davis-Putnam atom elimination on clause sets

def dp_forget_atom(cs: ClauseSet, a: Atom) -> ClauseSet:
    """Forget one atom from a CNF: add all non-tautological resolvents on
    the atom, drop every clause mentioning it, apply subsumption."""
    pa, na = pos(a), neg(a)
    with_pos = [c for c in cs.clauses if pa in c]
    with_neg = [c for c in cs.clauses if na in c]
    rest = {c for c in cs.clauses if pa not in c and na not in c}
    resolvents = set()
    for c in with_pos:
        for d in with_neg:
            r = (c - {pa}) | (d - {na})
            if not is_tautological(r):
                resolvents.add(r)
    out = ClauseSet(frozenset(rest | resolvents), cs.signature - {a})
    return simplify_clauses(out, "cnf")


# ---------------------------------------------------------------------------
# scheduling

def _postorder(f: Formula, path: tuple[int, ...] = ()
               ) -> Iterator[tuple[tuple[int, ...], Formula]]:
    for i, c in enumerate(children(f)):
        yield from _postorder(c, path + (i,))
    yield path, f


def _node_at(f: Formula, path: tuple[int, ...]) -> Formula:
    for i in path:
        f = children(f)[i]
    return f


def _replace_at(f: Formula, path: tuple[int, ...], new: Formula) -> Formula:
    if not path:
        return new
    i = path[0]
    kids = children(f)
    replaced = _replace_at(kids[i], path[1:], new)
    if isinstance(f, BINARY):
        return type(f)(replaced if i == 0 else f.left,
                       replaced if i == 1 else f.right)
    return with_arg(f, replaced)


def _portfolio_choice(node: Forg, threshold: int) -> tuple[Atom, bool]:
    """Atom to eliminate and whether the DP resolvent bound holds for it
    (estimated as pos*neg <= pos+neg on the CNF of the argument)."""
    lits = _explicit_literals(node.scope)
    candidates = sorted({l.atom for l in lits if l.complement() in lits},
                        key=Atom.sort_key)
    if not candidates:
        raise EngineLimitError(
            "internal scheduling error: no atom with both literals in scope")
    cnf = to_cnf(node.arg)
    best: Optional[tuple[int, Atom]] = None
    for a in candidates:
        p = sum(1 for c in cnf.clauses if pos(a) in c)
        n = sum(1 for c in cnf.clauses if neg(a) in c)
        score = p * n - (p + n)
        if best is None or score < best[0]:
            best = (score, a)
    return best[1], best[0] <= threshold


def schedule_subtask(state: ElimState) -> Subtask:
    """Pick the next subtask, leftmost-innermost within each priority tier:
    rename resolution, full-signature SAT reduction, closed-subformula QBF
    decision, then the DP/Shannon elimination portfolio."""
    nodes = list(_postorder(state.current))
    for path, node in nodes:
        if isinstance(node, RenameAtoms) and is_operator_free(node.arg):
            return Subtask("rename", path)
    for path, node in nodes:
        if isinstance(node, Forg) and is_operator_free(node.arg):
            lits = _explicit_literals(node.scope)
            if all_literals(atoms_of(node.arg)) <= lits:
                return Subtask("sat", path)
    for path, node in nodes:
        if isinstance(node, Forg) and is_closed(node):
            return Subtask("qbf", path)
    for path, node in nodes:
        if isinstance(node, Forg) and is_operator_free(node.arg):
            atom, use_dp = _portfolio_choice(node, state.config.portfolio_threshold)
            return Subtask("dp" if use_dp else "shannon", path, atom)
    raise ValueError("no second-order operator left to schedule")


# ---------------------------------------------------------------------------
# the eliminator

class Eliminator:
    """Runs the elimination loop for one problem formula."""

    def __init__(self, f: Formula, prog: Optional[Program] = None,
                 config: Optional[EngineConfig] = None):
        self.prog = prog if prog is not None else Program.with_builtins()
        self.config = config if config is not None else EngineConfig()
        self.stats = EngineStats()
        g = expand_macros(f, self.prog)
        g = expand_quantifiers(g, self.prog.domain)
        self.sig = sorted_atoms(atoms_of(g))
        g = rewrite_to_primitives(g, self.sig)
        self.state = ElimState(g, self.sig, self.stats, self.config)

    def _trace(self, message: str) -> None:
        if self.config.trace is not None:
            self.config.trace(message)

    def _tick(self) -> None:
        self.stats.steps += 1
        if self.stats.steps > self.config.step_limit:
            raise EngineLimitError(
                f"engine exceeded step limit {self.config.step_limit}")

    def run(self) -> Formula:
        g = self.state.current
        self._trace(f"start: |sig|={len(self.sig)} size={node_count(g)}")
        while True:
            g = self._simplify_fixpoint(g)
            if self.config.shannon_guard:
                guarded = self._shannon_guard(g)
                if guarded is not g:
                    g = guarded
                    continue
            if is_operator_free(g):
                break
            self.state.current = g
            task = schedule_subtask(self.state)
            g = self._execute(g, task)
        g = simplify_constants(g)
        self.state.current = g
        self._trace(f"done: size={node_count(g)}")
        return g

    def step(self) -> bool:
        """One simplify-and-dispatch round; False once operator-free."""
        g = self._simplify_fixpoint(self.state.current)
        if is_operator_free(g):
            self.state.current = simplify_constants(g)
            return False
        self.state.current = g
        task = schedule_subtask(self.state)
        self.state.current = self._execute(g, task)
        return True

    def _simplify_fixpoint(self, g: Formula) -> Formula:
        while True:
            self._tick()
            g2 = _simplify(g, self.config.enable_forg_merge)
            if g2 is g:
                return g
            self.stats.rewrites_applied += 1
            g = g2

    def _shannon_guard(self, g: Formula) -> Formula:
        """Commit a Shannon-driven elimination when, after constant
        simplification, it does not increase the node count."""
        for path, node in _postorder(g):
            if not (isinstance(node, Forg) and is_operator_free(node.arg)):
                continue
            lits = _explicit_literals(node.scope)
            old_size = node_count(node)
            for a in sorted_atoms({l.atom for l in lits
                                   if l.complement() in lits}):
                cofactors = simplify_constants(
                    Or(substitute(node.arg, a, TRUE),
                       substitute(node.arg, a, FALSE)))
                candidate = _forg(lits - {pos(a), neg(a)}, cofactors)
                if node_count(candidate) <= old_size:
                    self._tick()
                    self.stats.shannon_guard_commits += 1
                    self._trace(f"shannon-guard: eliminated {a} "
                                f"({old_size} -> {node_count(candidate)} nodes)")
                    return _replace_at(g, path, candidate)
        return g

    def _satisfiable(self, f: Formula) -> bool:
        cs = clausify_equisat(f)
        if self.config.external_sat_cmd:
            self.stats.external_solver_calls += 1
            try:
                return run_external_sat(cs, self.config.external_sat_cmd,
                                        self.config.solver_timeout_ms)
            except SolverError as exc:
                self._trace(f"external SAT failed, falling back: {exc}")
        return solve_cnf(cs) is not None

    def _execute(self, g: Formula, task: Subtask) -> Formula:
        self._tick()
        node = _node_at(g, task.path)
        if task.kind == "rename":
            assert isinstance(node, RenameAtoms)
            new = substitute_atoms(node.arg, dict(node.mapping))
            self.stats.renames_resolved += 1
        elif task.kind == "sat":
            assert isinstance(node, Forg)
            new = TRUE if self._satisfiable(node.arg) else FALSE
            self.stats.sat_dispatches += 1
        elif task.kind == "qbf":
            if self.config.external_qbf_cmd:
                self.stats.external_solver_calls += 1
            new = TRUE if decide_closed(
                node, self.config.external_qbf_cmd,
                self.config.solver_timeout_ms) else FALSE
            self.stats.qbf_dispatches += 1
        elif task.kind == "dp":
            assert isinstance(node, Forg) and task.atom is not None
            lits = _explicit_literals(node.scope)
            reduced = dp_forget_atom(to_cnf(node.arg), task.atom)
            new = _forg(lits - {pos(task.atom), neg(task.atom)},
                        clauses_to_formula(reduced, "cnf"))
            self.stats.portfolio_dp += 1
        elif task.kind == "shannon":
            assert isinstance(node, Forg) and task.atom is not None
            lits = _explicit_literals(node.scope)
            cofactors = simplify_constants(
                Or(substitute(node.arg, task.atom, TRUE),
                   substitute(node.arg, task.atom, FALSE)))
            new = _forg(lits - {pos(task.atom), neg(task.atom)}, cofactors)
            self.stats.portfolio_shannon += 1
        else:
            raise ValueError(f"unknown subtask kind {task.kind!r}")
        self._trace(f"subtask {task.kind}"
                    + (f" on {task.atom}" if task.atom else "")
                    + f" at {task.path}")
        return _replace_at(g, task.path, new)


def eliminate(f: Formula, prog: Optional[Program] = None,
              config: Optional[EngineConfig] = None) -> Formula:
    """Eliminate all second-order operators; the result is operator-free
    and equivalent to the input."""
    return Eliminator(f, prog, config).run()

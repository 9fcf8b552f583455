"""Internal decision procedures and the external solver bridge.

The internal SAT solver is a plain DPLL with unit propagation and
pure-literal elimination, branching on the most frequent atom with
lexicographic tie-breaking, so results and models are deterministic.
Closed formulas built from forgetting and connectives are decided by
innermost-first expansion (optionally by an external QDIMACS solver for
prenexable inputs).  External solvers receive DIMACS/QDIMACS on stdin and
answer via SAT/UNSAT tokens on stdout or via exit codes 10/20.
"""

from __future__ import annotations

import shlex
import subprocess
from dataclasses import dataclass
from typing import Optional

from .errors import ElimkitError, SignatureError, SolverError
from .formulas import (
    And, Atom, AtomRef, Bot, Forg, Formula, Literal, Not, Or, Term, Top,
    all_literals, atoms_of, ground_scope, is_operator_free, neg, pos,
    simplify_constants, sorted_atoms, substitute, to_nnf, BINARY,
)
from .normalform import ClauseSet, is_tautological

DEFAULT_TIMEOUT_MS = 10_000


# ---------------------------------------------------------------------------
# decision-only clausification (equisatisfiable, definitional atoms from a
# reserved predicate group that never leaks into elimination results)

def _is_clause(f: Formula) -> bool:
    if isinstance(f, Or):
        return _is_clause(f.left) and _is_clause(f.right)
    return isinstance(f, AtomRef) or (
        isinstance(f, Not) and isinstance(f.arg, AtomRef))


def _is_cnf(f: Formula) -> bool:
    if isinstance(f, And):
        return _is_cnf(f.left) and _is_cnf(f.right)
    return _is_clause(f)


def _clause_literals(f: Formula, out: set[Literal]) -> None:
    if isinstance(f, Or):
        _clause_literals(f.left, out)
        _clause_literals(f.right, out)
    elif isinstance(f, AtomRef):
        out.add(pos(f.atom))
    else:
        out.add(neg(f.arg.atom))


def _cnf_clauses(f: Formula, out: list[frozenset[Literal]]) -> None:
    if isinstance(f, And):
        _cnf_clauses(f.left, out)
        _cnf_clauses(f.right, out)
    else:
        lits: set[Literal] = set()
        _clause_literals(f, lits)
        out.append(frozenset(lits))


def clausify_equisat(f: Formula) -> ClauseSet:
    """Equisatisfiable clause set for a decision call.

    Input that is already in CNF shape is taken clause by clause with no
    auxiliary atoms.  Otherwise the NNF is encoded with one definitional
    atom per internal connective (implication direction only, which is
    enough in NNF): satisfiability is preserved and the models projected
    onto the original atoms are exactly the models of the input.
    """
    f = simplify_constants(f)
    if isinstance(f, Top):
        return ClauseSet(frozenset(), frozenset())
    if isinstance(f, Bot):
        return ClauseSet(frozenset({frozenset()}), frozenset())
    nnf = to_nnf(f)
    sig = atoms_of(nnf)
    if _is_cnf(nnf):
        out: list[frozenset[Literal]] = []
        _cnf_clauses(nnf, out)
        return ClauseSet(frozenset(out), frozenset(sig))
    reserved = max((a.group for a in sig), default=0) + 1
    counter = [0]
    clauses: list[frozenset[Literal]] = []

    def fresh() -> Atom:
        counter[0] += 1
        return Atom("aux", reserved, (Term(f"n{counter[0]}"),))

    def define(g: Formula) -> Literal:
        if isinstance(g, AtomRef):
            return pos(g.atom)
        if isinstance(g, Not):
            return neg(g.arg.atom)
        d = fresh()
        l = define(g.left)
        r = define(g.right)
        if isinstance(g, And):
            clauses.append(frozenset({neg(d), l}))
            clauses.append(frozenset({neg(d), r}))
        else:
            clauses.append(frozenset({neg(d), l, r}))
        return pos(d)

    root = define(nnf)
    clauses.append(frozenset({root}))
    all_atoms = sig | {l.atom for c in clauses for l in c}
    return ClauseSet(frozenset(clauses), frozenset(all_atoms))


# ---------------------------------------------------------------------------
# internal DPLL

def _int_clauses(cs: ClauseSet) -> tuple[tuple[Atom, ...], list[frozenset[int]]]:
    atoms = sorted_atoms(cs.signature)
    index = {a: i + 1 for i, a in enumerate(atoms)}
    clauses = [frozenset(index[l.atom] if l.positive else -index[l.atom]
                         for l in c)
               for c in cs.clauses]
    return atoms, clauses


def _dpll(clauses: list[frozenset[int]], assignment: dict[int, bool]) -> bool:
    while True:
        changed = False
        if any(not c for c in clauses):
            return False
        unit = next((next(iter(c)) for c in clauses if len(c) == 1), None)
        if unit is not None:
            assignment[abs(unit)] = unit > 0
            clauses = _reduce(clauses, unit)
            changed = True
        else:
            counts: dict[int, int] = {}
            for c in clauses:
                for l in c:
                    counts[l] = counts.get(l, 0) + 1
            pure = sorted(l for l in counts if -l not in counts)
            if pure:
                l = pure[0]
                assignment[abs(l)] = l > 0
                clauses = _reduce(clauses, l)
                changed = True
        if not changed:
            break
    if not clauses:
        return True
    counts = {}
    for c in clauses:
        for l in c:
            counts[abs(l)] = counts.get(abs(l), 0) + 1
    var = min(counts, key=lambda v: (-counts[v], v))
    for value in (True, False):
        trial = dict(assignment)
        trial[var] = value
        if _dpll(_reduce(clauses, var if value else -var), trial):
            assignment.clear()
            assignment.update(trial)
            return True
    return False


def _reduce(clauses: list[frozenset[int]], lit: int) -> list[frozenset[int]]:
    out = []
    for c in clauses:
        if lit in c:
            continue
        if -lit in c:
            c = c - {-lit}
        out.append(c)
    return out


def solve_cnf(cs: ClauseSet) -> Optional[dict[Atom, bool]]:
    """DPLL satisfiability: a total model over the signature, or None."""
    atoms, clauses = _int_clauses(cs)
    if any(not c for c in clauses):
        return None
    assignment: dict[int, bool] = {}
    if not _dpll(clauses, assignment):
        return None
    return {a: assignment.get(i + 1, False) for i, a in enumerate(atoms)}


# ---------------------------------------------------------------------------
# DIMACS emission and solver output parsing

@dataclass(frozen=True)
class DimacsCnf:
    """DIMACS text plus the recorded atom dictionary (index i+1 = atoms[i])."""

    text: str
    atoms: tuple[Atom, ...]


def emit_dimacs(cs: ClauseSet) -> DimacsCnf:
    """Standard DIMACS CNF with atoms mapped to 1..V in canonical order."""
    atoms, clauses = _int_clauses(cs)
    rows = sorted(tuple(sorted(c, key=lambda l: (abs(l), l < 0)))
                  for c in clauses)
    lines = [f"p cnf {len(atoms)} {len(rows)}"]
    lines.extend(" ".join(str(l) for l in row) + " 0" if row else "0"
                 for row in rows)
    return DimacsCnf("\n".join(lines) + "\n", atoms)


def parse_dimacs(text: str, atoms: tuple[Atom, ...]) -> ClauseSet:
    """Rebuild a clause set from DIMACS text and its atom dictionary."""
    clauses = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith(("c", "p")):
            continue
        lits = set()
        for tok in line.split():
            v = int(tok)
            if v == 0:
                break
            lits.add(Literal(atoms[abs(v) - 1], v > 0))
        clauses.append(frozenset(lits))
    return ClauseSet(frozenset(clauses), frozenset(atoms))


def parse_solver_output(stdout: str, returncode: Optional[int] = None) -> bool:
    """True for SAT, False for UNSAT, SolverError otherwise.

    Tokens are matched whole so that UNSATISFIABLE is not mistaken for its
    SAT suffix; exit codes 10/20 are accepted as a fallback convention.
    """
    tokens = {t.upper() for t in stdout.split()}
    if tokens & {"UNSAT", "UNSATISFIABLE"}:
        return False
    if tokens & {"SAT", "SATISFIABLE"}:
        return True
    if returncode == 10:
        return True
    if returncode == 20:
        return False
    raise SolverError(
        f"cannot interpret solver output (exit {returncode}): {stdout[:200]!r}")


def _run_solver(cmd: str, payload: str, timeout_ms: int) -> bool:
    try:
        proc = subprocess.run(
            shlex.split(cmd), input=payload, capture_output=True,
            text=True, timeout=timeout_ms / 1000.0)
    except (OSError, subprocess.TimeoutExpired, ValueError) as exc:
        raise SolverError(f"external solver failed: {exc}") from exc
    return parse_solver_output(proc.stdout, proc.returncode)


def run_external_sat(cs: ClauseSet, cmd: str,
                     timeout_ms: int = DEFAULT_TIMEOUT_MS) -> bool:
    return _run_solver(cmd, emit_dimacs(cs).text, timeout_ms)


# ---------------------------------------------------------------------------
# closed formulas (nested forgetting with no free literals)

def free_literals(f: Formula, sig: frozenset[Atom]) -> frozenset[Literal]:
    """Literals the formula's value may depend on; conservative for
    connectives, exact scope subtraction for forgetting."""
    if isinstance(f, (Top, Bot)):
        return frozenset()
    if isinstance(f, AtomRef):
        return all_literals({f.atom})
    if isinstance(f, Not):
        return free_literals(f.arg, sig)
    if isinstance(f, BINARY):
        return free_literals(f.left, sig) | free_literals(f.right, sig)
    if isinstance(f, Forg):
        return free_literals(f.arg, sig) - ground_scope(f.scope, sig)
    raise SolverError(
        f"closed-formula decision supports only forgetting, got {type(f).__name__}")


def is_closed(f: Formula) -> bool:
    try:
        return not free_literals(f, atoms_of(f))
    except SolverError:
        return False


def _expand_forg(f: Formula, sig: frozenset[Atom]) -> Formula:
    """Eliminate every Forg node bottom-up by quantifier expansion."""
    if isinstance(f, (Top, Bot, AtomRef)):
        return f
    if isinstance(f, Not):
        return simplify_constants(Not(_expand_forg(f.arg, sig)))
    if isinstance(f, BINARY):
        return simplify_constants(
            type(f)(_expand_forg(f.left, sig), _expand_forg(f.right, sig)))
    if isinstance(f, Forg):
        g = _expand_forg(f.arg, sig)
        lits = ground_scope(f.scope, sig)
        arg_atoms = atoms_of(g)
        for a in sorted_atoms({l.atom for l in lits} & arg_atoms):
            both = pos(a) in lits and neg(a) in lits
            if both:
                g = simplify_constants(
                    Or(substitute(g, a, Top()), substitute(g, a, Bot())))
            elif pos(a) in lits:
                g = simplify_constants(
                    Or(g, And(Not(AtomRef(a)), substitute(g, a, Top()))))
            else:
                g = simplify_constants(
                    Or(g, And(AtomRef(a), substitute(g, a, Bot()))))
        return g
    raise SolverError(f"cannot expand {type(f).__name__}")


def _prenex(f: Formula) -> Optional[tuple[list[tuple[bool, tuple[Atom, ...]]],
                                          Formula]]:
    """Quantifier prefix and matrix for QDIMACS, or None when the formula
    does not have a prenexable shape (negations flip the quantifiers)."""
    if isinstance(f, Forg):
        lits = ground_scope(f.scope, atoms_of(f))
        atoms = {l.atom for l in lits}
        if not all(pos(a) in lits and neg(a) in lits for a in atoms):
            return None
        sub = _prenex(f.arg)
        if sub is None:
            return None
        prefix, matrix = sub
        return [(True, sorted_atoms(atoms))] + prefix, matrix
    if isinstance(f, Not):
        sub = _prenex(f.arg)
        if sub is None:
            return None
        prefix, matrix = sub
        return [(not e, a) for e, a in prefix], Not(matrix)
    if is_operator_free(f):
        return [], f
    return None


def emit_qdimacs(prefix: list[tuple[bool, tuple[Atom, ...]]],
                 matrix: Formula) -> Optional[str]:
    """QDIMACS for a prenex closed formula; definitional atoms from the
    matrix clausification join the innermost existential block."""
    cs = clausify_equisat(matrix)
    quantified = [a for _, block in prefix for a in block]
    defs = sorted_atoms(cs.signature - set(quantified))
    matrix_atoms = atoms_of(matrix)
    if not matrix_atoms <= set(quantified):
        return None
    blocks = [(e, list(block)) for e, block in prefix if block]
    if defs:
        if blocks and blocks[-1][0]:
            blocks[-1][1].extend(defs)
        else:
            blocks.append((True, list(defs)))
    atoms = tuple(a for _, block in blocks for a in block)
    index = {a: i + 1 for i, a in enumerate(atoms)}
    rows = sorted(
        tuple(sorted((index[l.atom] if l.positive else -index[l.atom]
                      for l in c), key=lambda v: (abs(v), v < 0)))
        for c in cs.clauses)
    lines = [f"p cnf {len(atoms)} {len(rows)}"]
    for e, block in blocks:
        lines.append(("e " if e else "a ")
                     + " ".join(str(index[a]) for a in block) + " 0")
    lines.extend(" ".join(str(v) for v in row) + " 0" if row else "0"
                 for row in rows)
    return "\n".join(lines) + "\n"


def decide_closed(f: Formula, external_cmd: Optional[str] = None,
                  timeout_ms: int = DEFAULT_TIMEOUT_MS) -> bool:
    """Decide a closed formula: True iff it is equivalent to true.

    A closed formula denotes a constant, so after expanding all forgetting
    operators validity coincides with satisfiability of the residue.
    """
    sig = atoms_of(f)
    if free_literals(f, sig):
        raise SolverError("decide_closed requires a closed formula")
    if external_cmd:
        pm = _prenex(f)
        if pm is not None:
            text = emit_qdimacs(*pm)
            if text is not None:
                try:
                    return _run_solver(external_cmd, text, timeout_ms)
                except SolverError:
                    pass  # fall through to the internal procedure
    residue = _expand_forg(f, sig)
    return solve_cnf(clausify_equisat(residue)) is not None

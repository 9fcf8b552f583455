"""elimkit: eliminate second-order operators (forgetting, projection,
circumscription, renaming, user macros) from propositional formulas."""

from .engine import (
    EngineConfig, EngineStats, ElimState, Eliminator, Subtask,
    build_circ_reduction, dp_forget_atom, eliminate, rewrite_to_primitives,
    schedule_subtask, shannon_step, simplify_step,
)
from .errors import (
    ElimkitError, EngineLimitError, ExpansionError, MacroError,
    OperatorPresentError, ParseError, RenderError, SignatureError,
    SolverError,
)
from .formulas import (
    And, Atom, AtomRef, Bot, Circ, Equiv, Exists, ForAll, Forg, Formula,
    Implies, ImpliedBy, Interpretation, Literal, MacroCall, Not, Or,
    Polarity, Proj, Rename, RenameAtoms, Scope, ScopeAll, ScopeAtomItem,
    ScopeComplements, ScopeGroupItem, ScopeList, ScopeLiteralItem,
    ScopeParam, ScopeUnion, Term, Top, atom, atom_from_functor, atoms_of,
    evaluate, ground_scope, is_operator_free, node_count, polarity_of_atom,
    substitute, to_nnf,
)
from .macros import (
    MacroDef, Program, builtin_macro_table, expand_macros, register_macro,
)
from .normalform import (
    ClauseSet, clauses_to_formula, full_dnf, simplify_clauses, to_cnf, to_dnf,
)
from .parser import expand_quantifiers, parse_formula, parse_program
from .printing import format_ast, parse_ppm, print_ppm, print_ppr
from .sat import (
    DimacsCnf, clausify_equisat, decide_closed, emit_dimacs, parse_dimacs,
    parse_solver_output, solve_cnf,
)
from .semantics import ModelSet, answer_sets_reduct, equivalent, model_set

__version__ = "0.1.0"

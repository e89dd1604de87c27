"""Monadic first-order formula language: syntax, printing, and decision procedure."""

from deepa2.formula.syntax import (
    And,
    Atom,
    Const,
    Exists,
    ForAll,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Term,
    Var,
    constants_of,
    free_variables,
    parse_formula,
    predicates_of,
    render_formula,
)
from deepa2.formula.decide import check_entailment, check_satisfiable

__all__ = [
    "And",
    "Atom",
    "Const",
    "Exists",
    "ForAll",
    "Formula",
    "Iff",
    "Implies",
    "Not",
    "Or",
    "Term",
    "Var",
    "check_entailment",
    "check_satisfiable",
    "constants_of",
    "free_variables",
    "parse_formula",
    "predicates_of",
    "render_formula",
]

"""Inference-scheme catalog and scheme-instantiation checking.

Scheme variants carry formula patterns whose letters act as placeholders.
A step instantiates its declared scheme when its statements match the
variant's patterns under a consistent placeholder assignment.  Matching
prefers the formalization level (formulas attached to statement numbers);
without formulas it falls back to parsing the statement texts against the
sentence-template bank, a path that tolerates false negatives.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from importlib import resources
from itertools import permutations

from deepa2.argdown import ArgdownArgument, InferenceStep
from deepa2.errors import CatalogError
from deepa2.formula import check_entailment, parse_formula
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
    Var,
)
from deepa2.nl_templates import recover_statement, shape_of

logger = logging.getLogger(__name__)

_MAX_PERMUTED_PREMISES = 4


@dataclass(frozen=True)
class SchemeVariant:
    scheme_name: str
    variant: str | None
    premises: tuple[Formula, ...]
    conclusion: Formula
    intricate: bool = False

    @property
    def label(self) -> str:
        return self.scheme_name + (f" ({self.variant})" if self.variant else "")


@dataclass(frozen=True)
class SchemeSpec:
    name: str
    variants: tuple[SchemeVariant, ...]

    def variant_named(self, label: str | None) -> SchemeVariant | None:
        for v in self.variants:
            if v.variant == label:
                return v
        return None


@dataclass
class SchemeCatalog:
    schemes: dict[str, SchemeSpec] = field(default_factory=dict)

    def get(self, name: str) -> SchemeSpec | None:
        return self.schemes.get(name)

    @property
    def names(self) -> list[str]:
        return list(self.schemes)

    def all_variants(self) -> list[SchemeVariant]:
        return [v for spec in self.schemes.values() for v in spec.variants]

    @classmethod
    def from_variants(cls, variants: list[SchemeVariant]) -> "SchemeCatalog":
        for v in variants:
            if not v.premises:
                raise CatalogError(f"{v.label}: a scheme needs at least one premise")
            if not check_entailment(list(v.premises), v.conclusion):
                raise CatalogError(f"{v.label}: formal core is not deductively valid")
        grouped: dict[str, list[SchemeVariant]] = {}
        for v in variants:
            grouped.setdefault(v.scheme_name, []).append(v)
        schemes = {
            name: SchemeSpec(name, tuple(vs)) for name, vs in grouped.items()
        }
        return cls(schemes)

    @classmethod
    def from_text(cls, text: str) -> "SchemeCatalog":
        variants = []
        block: dict[str, list[str]] = {}

        def flush():
            if not block:
                return
            name = block.get("scheme", [None])[0]
            if not name:
                raise CatalogError("scheme block without a 'scheme:' line")
            variant = block.get("variant", [None])[0]
            premises = tuple(parse_formula(p) for p in block.get("premise", []))
            conclusions = block.get("conclusion", [])
            if len(conclusions) != 1:
                raise CatalogError(f"{name}: exactly one conclusion required")
            intricate = block.get("intricate", ["no"])[0].lower() in ("yes", "true")
            variants.append(
                SchemeVariant(name, variant, premises, parse_formula(conclusions[0]), intricate)
            )
            block.clear()

        for raw in text.splitlines():
            line = raw.strip()
            if line.startswith("#"):
                continue
            if not line:
                flush()
                continue
            key, sep, value = line.partition(":")
            if not sep:
                raise CatalogError(f"malformed catalog line: {line!r}")
            block.setdefault(key.strip(), []).append(value.strip())
        flush()
        return cls.from_variants(variants)

    @classmethod
    def load(cls, path) -> "SchemeCatalog":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())


_builtin_catalog: SchemeCatalog | None = None


def builtin_catalog() -> SchemeCatalog:
    """The packaged catalog; loaded and validity-checked once."""
    global _builtin_catalog
    if _builtin_catalog is None:
        text = resources.files("deepa2.data").joinpath("schemes.txt").read_text("utf-8")
        _builtin_catalog = SchemeCatalog.from_text(text)
    return _builtin_catalog


# ---------------------------------------------------------------------------
# Pattern matching
# ---------------------------------------------------------------------------


class _Binding:
    """Consistent placeholder assignment built up during matching."""

    def __init__(self):
        self.preds: dict[str, str] = {}
        self.consts: dict[str, str] = {}
        self.vars: dict[str, str] = {}

    def copy(self) -> "_Binding":
        b = _Binding()
        b.preds = dict(self.preds)
        b.consts = dict(self.consts)
        b.vars = dict(self.vars)
        return b

    def bind(self, table: dict[str, str], key: str, value: str) -> bool:
        old = table.setdefault(key, value)
        return old == value


def match_pattern(pattern: Formula, concrete: Formula, binding: _Binding) -> bool:
    """Structural match of a pattern against a concrete formula; extends
    the binding in place on success."""
    if isinstance(pattern, Atom) and isinstance(concrete, Atom):
        if not binding.bind(binding.preds, pattern.pred, concrete.pred):
            return False
        pt, ct = pattern.term, concrete.term
        if isinstance(pt, Var) and isinstance(ct, Var):
            return binding.bind(binding.vars, pt.name, ct.name)
        if isinstance(pt, Const) and isinstance(ct, Const):
            return binding.bind(binding.consts, pt.name, ct.name)
        return False
    if isinstance(pattern, Not) and isinstance(concrete, Not):
        return match_pattern(pattern.sub, concrete.sub, binding)
    for node_type in (And, Or, Implies, Iff):
        if isinstance(pattern, node_type) and isinstance(concrete, node_type):
            return match_pattern(pattern.left, concrete.left, binding) and match_pattern(
                pattern.right, concrete.right, binding
            )
    for node_type in (ForAll, Exists):
        if isinstance(pattern, node_type) and isinstance(concrete, node_type):
            if not binding.bind(binding.vars, pattern.var, concrete.var):
                return False
            return match_pattern(pattern.body, concrete.body, binding)
    return False


def instantiate_pattern(pattern: Formula, binding: _Binding) -> Formula:
    """Substitute bound placeholders; unbound ones raise KeyError."""
    if isinstance(pattern, Atom):
        term = pattern.term
        if isinstance(term, Const):
            term = Const(binding.consts[term.name])
        else:
            term = Var(binding.vars.get(term.name, term.name))
        return Atom(binding.preds[pattern.pred], term)
    if isinstance(pattern, Not):
        return Not(instantiate_pattern(pattern.sub, binding))
    if isinstance(pattern, (And, Or, Implies, Iff)):
        return type(pattern)(
            instantiate_pattern(pattern.left, binding),
            instantiate_pattern(pattern.right, binding),
        )
    if isinstance(pattern, (ForAll, Exists)):
        return type(pattern)(
            binding.vars.get(pattern.var, pattern.var),
            instantiate_pattern(pattern.body, binding),
        )
    raise TypeError(f"not a formula node: {pattern!r}")


def patterns_unify(producer_conclusion: Formula, consumer_premise: Formula) -> bool:
    """True when one pattern is the other up to bijective letter renaming."""
    binding = _Binding()
    if not match_pattern(consumer_premise, producer_conclusion, binding):
        return False
    return len(set(binding.preds.values())) == len(binding.preds) and len(
        set(binding.consts.values())
    ) == len(binding.consts)


# ---------------------------------------------------------------------------
# Step checking
# ---------------------------------------------------------------------------


def _candidate_variants(step: InferenceStep, catalog: SchemeCatalog) -> list[SchemeVariant]:
    spec = catalog.get(step.scheme_name)
    if spec is None:
        return []
    exact = spec.variant_named(step.variant)
    if exact is not None:
        return [exact]
    if step.variant is not None:
        # Unknown variant label: fall back to all variants of the scheme.
        return list(spec.variants)
    return list(spec.variants)


def _match_formal(
    variant: SchemeVariant,
    premise_formulas: list[Formula],
    conclusion_formula: Formula | None,
) -> Formula | None:
    if len(premise_formulas) != len(variant.premises):
        return None
    if len(premise_formulas) > _MAX_PERMUTED_PREMISES:
        orders = [tuple(range(len(premise_formulas)))]
    else:
        orders = list(permutations(range(len(premise_formulas))))
    for order in orders:
        binding = _Binding()
        ok = all(
            match_pattern(variant.premises[i], premise_formulas[order[i]], binding)
            for i in range(len(order))
        )
        if not ok:
            continue
        if conclusion_formula is not None:
            trial = binding.copy()
            if match_pattern(variant.conclusion, conclusion_formula, trial):
                return conclusion_formula
            continue
        try:
            return instantiate_pattern(variant.conclusion, binding)
        except KeyError:
            continue
    return None


def _match_nl(variant: SchemeVariant, premise_texts: list[str], conclusion_text: str) -> bool:
    if len(premise_texts) != len(variant.premises):
        return False
    readings = [recover_statement(t) for t in premise_texts + [conclusion_text]]
    if any(not r for r in readings):
        return False
    pattern_shapes = [shape_of(p) for p in variant.premises] + [shape_of(variant.conclusion)]

    def assign(idx: int, bound_preds: dict[str, str], bound_consts: dict[str, str]) -> bool:
        if idx == len(pattern_shapes):
            return True
        shape = pattern_shapes[idx]
        for shape_key, phrases, names in readings[idx]:
            if shape_key != shape.key:
                continue
            trial_p = dict(bound_preds)
            trial_c = dict(bound_consts)
            ok = True
            for pos, letter in enumerate(shape.pred_letters):
                phrase = phrases.get(f"P{pos + 1}")
                if phrase is None or trial_p.setdefault(letter, phrase) != phrase:
                    ok = False
                    break
            if ok:
                for pos, letter in enumerate(shape.const_letters):
                    name = names.get(f"c{pos + 1}", "").lower()
                    if not name or trial_c.setdefault(letter, name) != name:
                        ok = False
                        break
            if ok and assign(idx + 1, trial_p, trial_c):
                return True
        return False

    return assign(0, {}, {})


def check_scheme_instantiation(
    step: InferenceStep,
    arg: ArgdownArgument,
    catalog: SchemeCatalog,
    forms: dict[int, Formula] | None = None,
) -> bool:
    """True iff the step's statements instantiate its declared scheme."""
    matched, _derived = match_step(step, arg, catalog, forms or {})
    return matched


def match_step(
    step: InferenceStep,
    arg: ArgdownArgument,
    catalog: SchemeCatalog,
    formulas_by_number: dict[int, Formula],
) -> tuple[bool, Formula | None]:
    """Check one step; on a formal-level match also returns the instantiated
    conclusion formula so downstream steps can use it."""
    if step.scheme_name is None:
        return False, None
    candidates = _candidate_variants(step, catalog)
    if not candidates:
        logger.debug("unknown scheme %r declared by step deriving (%d)",
                     step.scheme_name, step.derives)
        return False, None

    premise_formulas = [formulas_by_number.get(n) for n in step.from_numbers]
    conclusion_formula = formulas_by_number.get(step.derives)
    if all(f is not None for f in premise_formulas):
        for variant in candidates:
            derived = _match_formal(variant, premise_formulas, conclusion_formula)
            if derived is not None:
                return True, derived
        return False, None

    statement_texts = dict(arg.statements)
    premise_texts = [statement_texts[n] for n in step.from_numbers]
    conclusion_text = statement_texts[step.derives]
    for variant in candidates:
        if _match_nl(variant, premise_texts, conclusion_text):
            return True, None
    return False, None


def sys_sch_ratio(
    arg: ArgdownArgument,
    catalog: SchemeCatalog,
    forms: dict[int, Formula] | None = None,
) -> float | None:
    """Share of scheme-declaring steps that instantiate their scheme.

    Steps without a declared scheme are not checkable and fall out of the
    denominator; None when no step declares a scheme.
    """
    formulas = dict(forms or {})
    checkable = 0
    matched = 0
    for step in sorted(arg.inferences, key=lambda s: s.derives):
        if step.scheme_name is None:
            continue
        checkable += 1
        ok, derived = match_step(step, arg, catalog, formulas)
        if ok:
            matched += 1
            if derived is not None and step.derives not in formulas:
                formulas[step.derives] = derived
    if checkable == 0:
        return None
    return matched / checkable

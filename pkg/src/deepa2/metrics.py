"""Systematic and exegetic quality metrics for argument reconstructions.

Systematic metrics judge the reconstructed argument itself (basic flaws,
scheme instantiation, deductive validity); exegetic metrics judge how the
reconstruction accounts for the source text (verbatim quoting, coherence
of quotes with their counterpart statements, predictive performance on
target reasons/conjectures, and text exploitation).

Every metric is total: arbitrary garbage input yields an in-range value
plus diagnostics, never an exception.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from deepa2.argdown import (
    ArgdownArgument,
    conclusions_of,
    final_conclusion_of,
    premises_of,
)
from deepa2.dimensions import DimensionId
from deepa2.errors import DeepA2Error, UndefinedMetricError
from deepa2.formula import Formula, check_entailment, parse_formula
from deepa2.records import DeepA2Record, QuotedStatement, parse_statements
from deepa2.schemes import SchemeCatalog, builtin_catalog, sys_sch_ratio
from deepa2.textnorm import normalize_ws, token_f1

logger = logging.getLogger(__name__)

Scorer = Callable[[str, str], float]

#: Minimum token-overlap F1 for a predicted statement to count as matching a
#: target statement in the predictive-performance metrics.
MATCH_THRESHOLD = 0.8


def default_scorer(a: str, b: str) -> float:
    """Deterministic lexical similarity in [-1, 1]: 2 * token F1 - 1."""
    return 2.0 * token_f1(a, b) - 1.0


# ---------------------------------------------------------------------------
# Systematic metrics
# ---------------------------------------------------------------------------


def eval_basic_flaws(arg: ArgdownArgument) -> tuple[int, int, int, int]:
    """(no petitio, no redundant premises, no redundant conclusions, all
    statements used) as 0/1 bits, via normalized string identity."""
    premise_texts = [normalize_ws(t) for _, t in premises_of(arg)]
    conclusion_texts = [normalize_ws(t) for _, t in conclusions_of(arg)]
    final_text = normalize_ws(final_conclusion_of(arg)[1])

    sys_pp = 0 if final_text in premise_texts else 1
    sys_rp = 1 if len(set(premise_texts)) == len(premise_texts) else 0
    sys_rc = 1 if len(set(conclusion_texts)) == len(conclusion_texts) else 0

    used = {n for inf in arg.inferences for n in inf.from_numbers}
    final_number = final_conclusion_of(arg)[0]
    sys_us = 1 if all(n in used or n == final_number for n, _ in arg.statements) else 0
    return sys_pp, sys_rp, sys_rc, sys_us


def eval_sys_val(
    premises_form: Sequence[QuotedStatement],
    conclusion_form: Sequence[QuotedStatement],
    diagnostics: list[str] | None = None,
) -> int:
    """1 iff all formalizations parse and the premises entail the conclusion."""
    diag = diagnostics if diagnostics is not None else []
    if len(conclusion_form) != 1:
        diag.append(f"conclusion_form must hold exactly one formula, got {len(conclusion_form)}")
        return 0
    try:
        premises = [parse_formula(q.text) for q in premises_form]
        conclusion = parse_formula(conclusion_form[0].text)
        return 1 if check_entailment(premises, conclusion) else 0
    except DeepA2Error as err:
        diag.append(f"sys_val: {err}")
        return 0


# ---------------------------------------------------------------------------
# Exegetic metrics
# ---------------------------------------------------------------------------


def eval_exe_meq(
    source: str,
    reasons: Sequence[QuotedStatement],
    conjectures: Sequence[QuotedStatement],
) -> int:
    """1 iff every reason and conjecture occurs verbatim in the source and
    pairwise-disjoint spans can be assigned greedily left to right."""
    haystack = normalize_ws(source)
    quotes = [normalize_ws(q.text) for q in list(reasons) + list(conjectures)]
    if not quotes:
        return 1
    first_positions = []
    for idx, quote in enumerate(quotes):
        pos = haystack.find(quote)
        if pos < 0:
            return 0
        first_positions.append((pos, idx, quote))
    cursor = 0
    for _, _, quote in sorted(first_positions):
        pos = haystack.find(quote, cursor)
        if pos < 0:
            return 0
        cursor = pos + len(quote)
    return 1


def _counterpart_mean(
    quotes: Sequence[QuotedStatement],
    counterparts: list[tuple[int, str]],
    scorer: Scorer,
) -> float:
    """Shared core of the reason/conjecture coherence metrics.

    Each counterpart statement scores against the quote referring to it
    (implicit statements, i.e. counterparts nobody quotes, contribute -1)
    and each quote whose reference resolves to no counterpart contributes
    -1.  Empty quote lists are neutral by convention.
    """
    if not quotes:
        return 0.0
    numbers = {n for n, _ in counterparts}
    contributions: list[float] = []
    for number, text in counterparts:
        matching = [q for q in quotes if q.ref == number]
        if matching:
            contributions.extend(
                scorer(normalize_ws(q.text), normalize_ws(text)) for q in matching
            )
        else:
            contributions.append(-1.0)
    for q in quotes:
        if q.ref is None or q.ref not in numbers:
            contributions.append(-1.0)
    if not contributions:
        return 0.0
    return sum(contributions) / len(contributions)


def eval_exe_rss(
    reasons: Sequence[QuotedStatement],
    arg: ArgdownArgument | None,
    scorer: Scorer = default_scorer,
) -> float:
    """Mean coherence of reason quotes with their counterpart premises."""
    counterparts = premises_of(arg) if arg is not None else []
    return _counterpart_mean(reasons, counterparts, scorer)


def eval_exe_jss(
    conjectures: Sequence[QuotedStatement],
    arg: ArgdownArgument | None,
    scorer: Scorer = default_scorer,
) -> float:
    """Mean coherence of conjecture quotes with their counterpart conclusions."""
    counterparts = conclusions_of(arg) if arg is not None else []
    return _counterpart_mean(conjectures, counterparts, scorer)


def eval_exe_ppr(
    predicted: Sequence[str],
    target: Sequence[str],
    threshold: float = MATCH_THRESHOLD,
) -> float:
    """F1 for identifying target statements, greedy one-to-one matching at a
    token-overlap threshold.  Also used for conjectures (EXE-PPJ)."""
    predicted = [normalize_ws(t) for t in predicted]
    target = [normalize_ws(t) for t in target]
    if not predicted and not target:
        return 1.0
    if not predicted or not target:
        return 0.0
    unmatched = list(range(len(target)))
    true_positives = 0
    for p in predicted:
        for j in unmatched:
            if token_f1(p, target[j]) >= threshold:
                unmatched.remove(j)
                true_positives += 1
                break
    precision = true_positives / len(predicted)
    recall = true_positives / len(target)
    if true_positives == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


eval_exe_ppj = eval_exe_ppr


def te_prediction(
    conjectures: Sequence[QuotedStatement], arg: ArgdownArgument | None
) -> bool:
    """Whether the analysis presents the final conclusion as explicit: some
    conjecture's reference equals the final conclusion's number."""
    if arg is None:
        return False
    final_number = final_conclusion_of(arg)[0]
    return any(q.ref == final_number for q in conjectures)


def eval_exe_te(items: Sequence[tuple[bool, bool]]) -> float:
    """Corpus-level F1 for (predicted explicit, target explicit) pairs, with
    "explicit" as the positive class; all-negative corpora score 1.0."""
    if not items:
        raise UndefinedMetricError("EXE-TE needs at least one item")
    tp = sum(1 for p, t in items if p and t)
    fp = sum(1 for p, t in items if p and not t)
    fn = sum(1 for p, t in items if not p and t)
    if tp + fp + fn == 0:
        return 1.0
    return 2 * tp / (2 * tp + fp + fn)


# ---------------------------------------------------------------------------
# Whole-analysis evaluation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MetricReport:
    """The metric values for one analysis; exe_te is corpus-level, so the
    per-item report carries only the explicitness prediction."""

    sys_pp: int
    sys_rp: int
    sys_rc: int
    sys_us: int
    sys_sch: float | None
    sys_val: int
    exe_meq: int
    exe_rss: float
    exe_jss: float
    exe_ppr: float | None
    exe_ppj: float | None
    exe_te_prediction: bool
    diagnostics: tuple[str, ...] = ()

    def to_flat_dict(self) -> dict:
        data = {
            "sys_pp": self.sys_pp,
            "sys_rp": self.sys_rp,
            "sys_rc": self.sys_rc,
            "sys_us": self.sys_us,
            "sys_sch": self.sys_sch,
            "sys_val": self.sys_val,
            "exe_meq": self.exe_meq,
            "exe_rss": self.exe_rss,
            "exe_jss": self.exe_jss,
            "exe_ppr": self.exe_ppr,
            "exe_ppj": self.exe_ppj,
            "exe_te_prediction": self.exe_te_prediction,
        }
        if self.diagnostics:
            data["diagnostics"] = list(self.diagnostics)
        return data

    @property
    def basic_flaw_bits(self) -> tuple[int, int, int, int]:
        return (self.sys_pp, self.sys_rp, self.sys_rc, self.sys_us)


def _parse_quotes(text: str | None, dim: DimensionId, diag: list[str]):
    if text is None:
        return ()
    try:
        return parse_statements(text, validate_formulas=False)
    except DeepA2Error as err:
        diag.append(f"{dim.keyword}: {err}")
        return None


def evaluate_analysis(
    work: Mapping[DimensionId, str],
    target: DeepA2Record | None = None,
    catalog: SchemeCatalog | None = None,
    scorer: Scorer = default_scorer,
) -> MetricReport:
    """Apply the full metric suite to one analysis given as raw dimension
    texts (e.g. the final dictionary of a generative chain)."""
    catalog = catalog or builtin_catalog()
    diag: list[str] = []

    arg: ArgdownArgument | None = None
    argdown_text = work.get(DimensionId.ARGDOWN)
    if argdown_text is None:
        diag.append("argdown: absent")
    else:
        try:
            from deepa2.argdown import parse_argdown

            arg = parse_argdown(argdown_text)
        except DeepA2Error as err:
            diag.append(f"argdown: {err}")

    reasons = _parse_quotes(work.get(DimensionId.REASONS), DimensionId.REASONS, diag)
    conjectures = _parse_quotes(
        work.get(DimensionId.CONJECTURES), DimensionId.CONJECTURES, diag
    )

    if arg is not None:
        sys_pp, sys_rp, sys_rc, sys_us = eval_basic_flaws(arg)
    else:
        sys_pp = sys_rp = sys_rc = sys_us = 0

    premises_form = _parse_quotes(
        work.get(DimensionId.PREMISES_FORM), DimensionId.PREMISES_FORM, diag
    )
    conclusion_form = _parse_quotes(
        work.get(DimensionId.CONCLUSION_FORM), DimensionId.CONCLUSION_FORM, diag
    )
    if premises_form is None or conclusion_form is None:
        sys_val = 0
    else:
        sys_val = eval_sys_val(premises_form, conclusion_form, diag)

    forms: dict[int, Formula] = {}
    if premises_form and arg is not None:
        for q in premises_form:
            if q.ref is not None:
                try:
                    forms[q.ref] = parse_formula(q.text)
                except DeepA2Error:
                    pass
    if conclusion_form and arg is not None:
        for q in conclusion_form:
            if q.ref is not None:
                try:
                    forms[q.ref] = parse_formula(q.text)
                except DeepA2Error:
                    pass

    if arg is None:
        sys_sch: float | None = 0.0
    else:
        sys_sch = sys_sch_ratio(arg, catalog, forms)

    source = work.get(DimensionId.SOURCE, "")
    if reasons is None or conjectures is None:
        exe_meq = 0
    else:
        exe_meq = eval_exe_meq(source, reasons, conjectures)

    exe_rss = eval_exe_rss(reasons or (), arg, scorer)
    exe_jss = eval_exe_jss(conjectures or (), arg, scorer)
    prediction = te_prediction(conjectures or (), arg)

    exe_ppr: float | None = None
    exe_ppj: float | None = None
    if target is not None and target.reasons is not None:
        exe_ppr = eval_exe_ppr(
            [q.text for q in (reasons or ())], [q.text for q in target.reasons]
        )
    if target is not None and target.conjectures is not None:
        exe_ppj = eval_exe_ppj(
            [q.text for q in (conjectures or ())], [q.text for q in target.conjectures]
        )

    return MetricReport(
        sys_pp=sys_pp,
        sys_rp=sys_rp,
        sys_rc=sys_rc,
        sys_us=sys_us,
        sys_sch=sys_sch,
        sys_val=sys_val,
        exe_meq=exe_meq,
        exe_rss=exe_rss,
        exe_jss=exe_jss,
        exe_ppr=exe_ppr,
        exe_ppj=exe_ppj,
        exe_te_prediction=prediction,
        diagnostics=tuple(diag),
    )


def work_dict_of_record(record: DeepA2Record) -> dict[DimensionId, str]:
    """A record's own dimensions as raw texts (oracle-style evaluation input)."""
    from deepa2.records import serialize_dimension

    return {dim: serialize_dimension(record, dim) for dim in record.present_dimensions()}

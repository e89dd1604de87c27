"""Importing external entailment datasets and higher-order-evidence tooling.

Multi-hop entailment-tree records become analysis records via a fixed
source template ("{theory} All this entails: {hypothesis}"); reasons and
conjectures are recorded on the fly.  Imported records never carry
formalizations or scheme declarations.  The higher-order-evidence part
turns several chains' reconstructions of one record into a feature vector
(cross-chain agreement plus per-chain metrics) and fits a small linear
classifier on such vectors.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from deepa2.argdown import ArgdownArgument, InferenceStep, final_conclusion_of
from deepa2.chains import ChainResult
from deepa2.dimensions import DimensionId
from deepa2.errors import DeepA2Error, ImportFormatError
from deepa2.metrics import MetricReport, Scorer, default_scorer
from deepa2.records import DeepA2Record, QuotedStatement, RecordMeta, parse_statements

SOURCE_TEMPLATE_GLUE = "All this entails:"

VALID, CONTRADICTION, NEUTRAL = "valid", "contradiction", "neutral"
RULETAKER_LABELS = (VALID, CONTRADICTION, NEUTRAL)


# ---------------------------------------------------------------------------
# Entailment-tree import
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TreeProofStep:
    from_ids: tuple[str, ...]
    conclusion_id: str
    conclusion_text: str


@dataclass(frozen=True)
class EntailmentTreeRecord:
    record_id: str
    sentences: dict[str, str]  # leaf id -> text, distractors included
    distractor_ids: frozenset[str]
    hypothesis: str
    steps: tuple[TreeProofStep, ...]

    def __post_init__(self):
        known = set(self.sentences)
        for step in self.steps:
            for sid in step.from_ids:
                if sid not in known:
                    raise ImportFormatError(
                        f"{self.record_id}: step uses unknown sentence {sid!r}"
                    )
            known.add(step.conclusion_id)
        if not self.steps:
            raise ImportFormatError(f"{self.record_id}: no proof steps")
        if self.steps[-1].conclusion_text != self.hypothesis:
            raise ImportFormatError(
                f"{self.record_id}: the last step must derive the hypothesis"
            )


def _natural_order(sid: str) -> tuple:
    m = re.match(r"([a-zA-Z]*)(\d+)$", sid)
    if m:
        return (m.group(1), int(m.group(2)))
    return (sid, 0)


def import_entailmentbank(rec: EntailmentTreeRecord) -> DeepA2Record:
    """Translate one entailment tree; schemes and formalizations stay absent."""
    leaf_ids = sorted(rec.sentences, key=_natural_order)
    used_ids = {sid for step in rec.steps for sid in step.from_ids} - {
        step.conclusion_id for step in rec.steps
    }
    used_leaves = [sid for sid in leaf_ids if sid in used_ids]
    if any(sid in rec.distractor_ids for sid in used_leaves):
        raise ImportFormatError(f"{rec.record_id}: proof uses a distractor sentence")

    numbers: dict[str, int] = {}
    statements: list[tuple[int, str]] = []
    for sid in used_leaves:
        numbers[sid] = len(statements) + 1
        statements.append((numbers[sid], rec.sentences[sid]))
    inferences = []
    for step in rec.steps:
        try:
            from_numbers = tuple(numbers[sid] for sid in step.from_ids)
        except KeyError as err:
            raise ImportFormatError(
                f"{rec.record_id}: step premise {err} is not available"
            ) from None
        numbers[step.conclusion_id] = len(statements) + 1
        statements.append((numbers[step.conclusion_id], step.conclusion_text))
        inferences.append(
            InferenceStep(from_numbers, numbers[step.conclusion_id], None, None)
        )
    argdown = ArgdownArgument(tuple(statements), tuple(inferences))

    theory = " ".join(rec.sentences[sid] for sid in leaf_ids)
    source = f"{theory} {SOURCE_TEMPLATE_GLUE} {rec.hypothesis}"
    final_number = final_conclusion_of(argdown)[0]
    reasons = tuple(
        QuotedStatement(rec.sentences[sid], numbers[sid]) for sid in used_leaves
    )
    conjectures = (QuotedStatement(rec.hypothesis, final_number),)
    # Premise and conclusion quotes are derivable from the tree, so they are
    # filled in; formalizations would be fabrications and stay absent.
    premises = tuple(QuotedStatement(text, n) for n, text in statements
                     if n not in argdown.derived_numbers)
    meta = RecordMeta(
        record_id=rec.record_id,
        n_inference_steps=len(inferences),
        n_distractors=len(rec.distractor_ids),
        final_conclusion_explicit=True,
        domain_tag="entailment_bank",
    )
    return DeepA2Record(
        source=source,
        reasons=reasons,
        conjectures=conjectures,
        argdown=argdown,
        premises=premises,
        conclusion=(QuotedStatement(rec.hypothesis, final_number),),
        meta=meta,
    )


def load_entailmentbank(path) -> list[EntailmentTreeRecord]:
    """Read entailment-tree records from a JSON-lines file.

    Expected row shape: ``{"id": ..., "sentences": {"s1": text, ...},
    "distractors": ["s3", ...], "hypothesis": text, "steps": [{"from":
    ["s1", "s2"], "id": "int1", "text": text}, ...]}``; the final step may
    use ``"id": "hypothesis"`` and omit the text.
    """
    records = []
    with open(path, encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
                steps = tuple(
                    TreeProofStep(
                        tuple(s["from"]),
                        s.get("id", "hypothesis"),
                        s.get("text", data["hypothesis"]),
                    )
                    for s in data["steps"]
                )
                records.append(
                    EntailmentTreeRecord(
                        record_id=str(data.get("id", f"eb-{line_number}")),
                        sentences=dict(data["sentences"]),
                        distractor_ids=frozenset(data.get("distractors", ())),
                        hypothesis=data["hypothesis"],
                        steps=steps,
                    )
                )
            except (KeyError, TypeError, json.JSONDecodeError) as err:
                raise ImportFormatError(f"{path}:{line_number}: {err}") from err
    return records


# ---------------------------------------------------------------------------
# Rule-theory import
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RuleTakerRecord:
    record_id: str
    theory: tuple[str, ...]
    hypothesis: str
    label: str

    def __post_init__(self):
        if self.label not in RULETAKER_LABELS:
            raise ImportFormatError(
                f"{self.record_id}: label must be one of {RULETAKER_LABELS}"
            )


def import_ruletaker(rec: RuleTakerRecord) -> tuple[DeepA2Record, str]:
    """Translate a rule-theory problem; the reconstruction dimensions are
    left for model generation and the label rides along in the meta."""
    theory = " ".join(rec.theory)
    source = f"{theory} {SOURCE_TEMPLATE_GLUE} {rec.hypothesis}"
    meta = RecordMeta(
        record_id=rec.record_id,
        domain_tag="ruletaker",
        label=rec.label,
    )
    return DeepA2Record(source=source, meta=meta), rec.label


def load_ruletaker(path) -> list[RuleTakerRecord]:
    """Read rule-theory records from a JSON-lines file with rows
    ``{"id": ..., "theory": [...], "hypothesis": ..., "label": ...}``."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
                records.append(
                    RuleTakerRecord(
                        record_id=str(data.get("id", f"rt-{line_number}")),
                        theory=tuple(data["theory"]),
                        hypothesis=data["hypothesis"],
                        label=data["label"],
                    )
                )
            except (KeyError, TypeError, json.JSONDecodeError) as err:
                raise ImportFormatError(f"{path}:{line_number}: {err}") from err
    return records


# ---------------------------------------------------------------------------
# Higher-order evidence
# ---------------------------------------------------------------------------

#: Per-chain feature layout (6 metrics per chain plus one agreement value).
CHAIN_FEATURES = ("sys_val", "basic_flaws_all", "sys_sch", "exe_meq", "exe_rss", "exe_jss")


@dataclass(frozen=True)
class HoeFeatures:
    """Cross-chain agreement plus per-chain metric values for one record."""

    record_id: str | None
    chain_ids: tuple[int, ...]
    values: tuple[float, ...]
    label: str | None = None

    @property
    def dimensionality(self) -> int:
        return len(self.values)


def _final_conclusion_text(result: ChainResult) -> str:
    text = result.final.get(DimensionId.CONCLUSION)
    if text:
        try:
            items = parse_statements(text)
            if items:
                return items[0].text
        except DeepA2Error:
            return text
    argdown_text = result.final.get(DimensionId.ARGDOWN)
    if argdown_text:
        try:
            from deepa2.argdown import parse_argdown

            return final_conclusion_of(parse_argdown(argdown_text))[1]
        except DeepA2Error:
            pass
    return ""


def extract_hoe_features(
    results: Sequence[tuple[ChainResult, MetricReport]],
    label: str | None = None,
    scorer: Scorer = default_scorer,
) -> HoeFeatures:
    """Feature vector over >= 2 chains' reconstructions of one record:
    mean pairwise similarity of final conclusions, then the per-chain
    metric block in chain-id order."""
    if len(results) < 2:
        raise ValueError("higher-order evidence needs at least two chains")
    record_ids = {r.record_id for r, _ in results}
    if len(record_ids) != 1:
        raise ValueError(f"results span several records: {sorted(record_ids)}")
    ordered = sorted(results, key=lambda pair: pair[0].chain_id)

    conclusions = [_final_conclusion_text(r) for r, _ in ordered]
    pairs = [
        scorer(conclusions[i], conclusions[j])
        for i in range(len(conclusions))
        for j in range(i + 1, len(conclusions))
    ]
    agreement = sum(pairs) / len(pairs)

    values = [agreement]
    for _, report in ordered:
        flaws_all = 1.0 if report.basic_flaw_bits == (1, 1, 1, 1) else 0.0
        values.extend(
            [
                float(report.sys_val),
                flaws_all,
                report.sys_sch if report.sys_sch is not None else 0.0,
                float(report.exe_meq),
                report.exe_rss,
                report.exe_jss,
            ]
        )
    return HoeFeatures(
        record_id=next(iter(record_ids)),
        chain_ids=tuple(r.chain_id for r, _ in ordered),
        values=tuple(values),
        label=label,
    )


# ---------------------------------------------------------------------------
# Linear label classifier
# ---------------------------------------------------------------------------


@dataclass
class LinearLabelClassifier:
    classes: tuple[str, ...]
    weights: np.ndarray  # (n_classes, n_features + 1)
    mean: np.ndarray
    scale: np.ndarray

    def scores(self, features: HoeFeatures) -> np.ndarray:
        x = (np.asarray(features.values) - self.mean) / self.scale
        x = np.concatenate([x, [1.0]])
        return self.weights @ x


def fit_label_classifier(
    features: Sequence[HoeFeatures],
    seed: int = 0,
    epochs: int = 400,
    learning_rate: float = 0.5,
    l2: float = 1e-4,
) -> LinearLabelClassifier:
    """Multinomial logistic regression by full-batch gradient descent;
    deterministic under the seed."""
    labeled = [f for f in features if f.label is not None]
    classes = tuple(sorted({f.label for f in labeled}))
    if len(classes) < 2:
        raise ValueError("training needs at least two classes")
    counts = {c: sum(1 for f in labeled if f.label == c) for c in classes}
    thin = [c for c, k in counts.items() if k < 3]
    if thin:
        raise ValueError(f"need at least 3 examples per class, too few for {thin}")

    x = np.asarray([f.values for f in labeled], dtype=float)
    mean = x.mean(axis=0)
    scale = x.std(axis=0)
    scale[scale < 1e-9] = 1.0
    xs = (x - mean) / scale
    xs = np.concatenate([xs, np.ones((len(xs), 1))], axis=1)
    y = np.asarray([classes.index(f.label) for f in labeled])
    onehot = np.eye(len(classes))[y]

    rng = np.random.default_rng(seed)
    weights = rng.normal(scale=0.01, size=(len(classes), xs.shape[1]))
    for _ in range(epochs):
        logits = xs @ weights.T
        logits -= logits.max(axis=1, keepdims=True)
        probs = np.exp(logits)
        probs /= probs.sum(axis=1, keepdims=True)
        grad = (probs - onehot).T @ xs / len(xs) + l2 * weights
        weights -= learning_rate * grad
    return LinearLabelClassifier(classes, weights, mean, scale)


def apply_label_classifier(
    classifier: LinearLabelClassifier, features: HoeFeatures
) -> str:
    """The argmax class for one feature vector."""
    return classifier.classes[int(np.argmax(classifier.scores(features)))]

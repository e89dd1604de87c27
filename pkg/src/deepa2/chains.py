"""Generative chains: catalogued mode sequences, execution, pooling, export.

A chain executes its modes in order over a dynamic dictionary keyed by the
nine dimensions.  The dictionary starts with the source text; each mode
reads its input dimensions and overwrites its output dimension, so later
modes can revise earlier results.  For evaluation a fixed formalization
sub-chain can be appended to derive the formal dimensions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from deepa2.backends import GenerationRequest, ModelBackend, format_prompt
from deepa2.dimensions import DimensionId
from deepa2.errors import (
    BackendError,
    ChainDefinitionError,
    GenerationError,
    InternalInvariantError,
)
from deepa2.metrics import MetricReport
from deepa2.modes import ModeSpec, TRAINING_MODES, mode
from deepa2.records import DeepA2Record, serialize_dimension


@dataclass(frozen=True)
class ChainSpec:
    """An ordered mode sequence; every input dimension must be the source
    or produced by an earlier mode."""

    id: int
    modes: tuple[ModeSpec, ...]
    name: str | None = None

    def __post_init__(self):
        available = {DimensionId.SOURCE}
        for m in self.modes:
            for d in m.inputs:
                if d not in available:
                    raise ChainDefinitionError(
                        f"chain {self.id}: mode {m.label} needs {d.keyword} "
                        "before any mode produces it"
                    )
            available.add(m.output)

    def __len__(self) -> int:
        return len(self.modes)


def sophistication(chain: ChainSpec) -> int:
    """Sum of non-source input dimensions over the chain's modes."""
    return sum(
        sum(1 for d in m.inputs if d is not DimensionId.SOURCE) for m in chain.modes
    )


def formalization_subchain() -> tuple[ModeSpec, ...]:
    """The five modes appended to a chain to formalize its reconstruction."""
    return (
        mode("A", "P"),
        mode("A", "C"),
        mode("P", "F"),
        mode("CPF", "O"),
        mode("PFCO", "K"),
    )


def _chain(chain_id: int, specs: str, name: str | None = None) -> ChainSpec:
    modes = tuple(mode(*part.split(">")) for part in specs.split())
    return ChainSpec(chain_id, modes, name)


_CHAIN_CATALOG: tuple[ChainSpec, ...] = (
    _chain(1, "S>A S>R S>J", "straight"),
    _chain(2, "S>J S>R SJ>A"),
    _chain(3, "S>J S>R SR>A"),
    _chain(4, "S>J S>R RJ>A"),
    _chain(5, "S>J SJ>R RJ>A"),
    _chain(6, "S>J SJ>R SRJ>A"),
    _chain(7, "S>R SR>J RJ>A"),
    _chain(8, "S>R SR>J SRJ>A"),
    _chain(9, "S>A SA>R SA>J RJ>A", "hermeneutic cycle"),
    _chain(10, "S>A SA>R SA>J SRJ>A"),
    _chain(11, "S>A SA>R SA>J SRJ>A SA>R SA>J SRJ>A"),
    _chain(12, "S>A A>P A>C P>F PF>K FK>P PC>A SA>R SA>J"),
    _chain(13, "S>A A>P A>C C>O CO>K OK>C PC>A SA>R SA>J", "logical streamlining"),
    _chain(
        14,
        "S>A A>P A>C C>O CO>K OK>C PC>A A>P A>C P>F PF>K FK>P PC>A SA>R SA>J",
    ),
    _chain(15, "S>A A>P A>C P>F CPF>O PFCO>K FK>P OK>C PC>A SA>R SA>J"),
    _chain(16, "S>A A>P A>C P>F CPF>O PCO>F PFCO>K FK>P OK>C PC>A SA>R SA>J"),
)

_BY_NAME = {c.name: c for c in _CHAIN_CATALOG if c.name}


def chain_catalog() -> list[ChainSpec]:
    """All sixteen catalogued chains, ordered by id."""
    return list(_CHAIN_CATALOG)


def chain_by_id(chain_id: int) -> ChainSpec:
    if not 1 <= chain_id <= len(_CHAIN_CATALOG):
        raise ChainDefinitionError(f"chain id must lie in 1..16, got {chain_id}")
    return _CHAIN_CATALOG[chain_id - 1]


def chain_by_name(name: str) -> ChainSpec:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise ChainDefinitionError(f"unknown chain name {name!r}") from None


# ---------------------------------------------------------------------------
# Execution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceStep:
    mode_label: str
    inputs: dict[str, str]
    output: str


@dataclass(frozen=True)
class ChainResult:
    chain_id: int
    record_id: str | None
    final: dict[DimensionId, str]
    trace: tuple[TraceStep, ...]
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "chain_id": self.chain_id,
            "record_id": self.record_id,
            "final": {d.keyword: text for d, text in self.final.items()},
            "steps": [
                {"mode": s.mode_label, "inputs": s.inputs, "output": s.output}
                for s in self.trace
            ],
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ChainResult":
        return cls(
            chain_id=data["chain_id"],
            record_id=data.get("record_id"),
            final={
                DimensionId.from_keyword(k): v for k, v in data.get("final", {}).items()
            },
            trace=tuple(
                TraceStep(s["mode"], dict(s["inputs"]), s["output"])
                for s in data.get("steps", [])
            ),
            error=data.get("error"),
        )


def run_chain(
    chain: ChainSpec,
    source: str,
    backend: ModelBackend,
    with_formalization: bool = False,
    record_id: str | None = None,
) -> ChainResult:
    """Execute the chain over the source text; on backend failure the
    partial trace is preserved and the error recorded."""
    work: dict[DimensionId, str] = {DimensionId.SOURCE: source}
    trace: list[TraceStep] = []
    modes: tuple[ModeSpec, ...] = chain.modes
    if with_formalization:
        modes = modes + formalization_subchain()
    for m in modes:
        missing = [d for d in m.inputs if d not in work]
        if missing:
            raise InternalInvariantError(
                f"chain {chain.id}: inputs {[d.keyword for d in missing]} absent "
                f"for mode {m.label}"
            )
        inputs = {d: work[d] for d in m.inputs}
        request = GenerationRequest(mode=m, inputs=inputs, record_id=record_id)
        try:
            output = backend.generate(request)
        except BackendError as err:
            return ChainResult(
                chain.id, record_id, dict(work), tuple(trace), error=str(err)
            )
        work[m.output] = output
        trace.append(
            TraceStep(m.label, {d.keyword: t for d, t in inputs.items()}, output)
        )
    return ChainResult(chain.id, record_id, dict(work), tuple(trace))


# ---------------------------------------------------------------------------
# Pooling
# ---------------------------------------------------------------------------


def default_ranking_key(report: MetricReport) -> tuple:
    """Lexicographic quality key over self-computable metrics, validity
    first."""
    return (
        report.sys_val,
        report.sys_pp + report.sys_rp + report.sys_rc + report.sys_us,
        report.sys_sch if report.sys_sch is not None else 0.0,
        report.exe_meq,
        (report.exe_rss + report.exe_jss) / 2,
    )


def pool_index(
    results: Sequence[tuple[ChainResult, MetricReport]],
    key: Callable[[MetricReport], tuple] = default_ranking_key,
) -> int:
    """Index of the item-wise best result under the ranking key."""
    if not results:
        raise ValueError("pooling needs at least one result")
    best = 0
    best_key = key(results[0][1])
    for i in range(1, len(results)):
        k = key(results[i][1])
        if k > best_key:
            best, best_key = i, k
    return best


def pool(
    results: Sequence[tuple[ChainResult, MetricReport]],
    key: Callable[[MetricReport], tuple] = default_ranking_key,
) -> ChainResult:
    """The result of the item-wise best performing chain."""
    return results[pool_index(results, key)][0]


# ---------------------------------------------------------------------------
# Training export
# ---------------------------------------------------------------------------

WEIGHT_COLUMNS = ("aaac", "entailment_bank")


def training_mode_pool(weights: str) -> tuple[list[ModeSpec], list[float]]:
    """Registry modes carrying the chosen weight column, with their weights."""
    if weights not in WEIGHT_COLUMNS:
        raise ValueError(f"weights must be one of {WEIGHT_COLUMNS}, got {weights!r}")
    pool_modes = [
        m
        for m in TRAINING_MODES
        if (m.weight_aaac if weights == "aaac" else m.weight_eb) is not None
    ]
    mode_weights = [
        m.weight_aaac if weights == "aaac" else m.weight_eb for m in pool_modes
    ]
    return pool_modes, mode_weights


def sample_training_modes(
    record: DeepA2Record,
    weights: str,
    n: int,
    rng: random.Random,
) -> list[ModeSpec]:
    """Draw n modes with probability proportional to the weight column;
    modes needing a dimension the record lacks are resampled."""
    pool_modes, mode_weights = training_mode_pool(weights)
    usable = {
        i
        for i, m in enumerate(pool_modes)
        if record.has(m.output) and all(record.has(d) for d in m.inputs)
    }
    if not usable:
        raise GenerationError(
            f"record {record.meta.record_id!r} supports no training mode"
        )
    out: list[ModeSpec] = []
    for _ in range(n):
        for _attempt in range(1000):
            (idx,) = rng.choices(range(len(pool_modes)), weights=mode_weights)
            if idx in usable:
                break
        else:
            raise GenerationError("mode resampling did not terminate")
        out.append(pool_modes[idx])
    return out


def export_training(
    records: Iterable[DeepA2Record],
    weights: str = "aaac",
    n_per_record: int = 14,
    seed: int = 0,
) -> list[tuple[str, str]]:
    """Sequence-to-sequence pairs: per record, sample modes with probability
    proportional to the chosen weight column and emit (prompt, target
    dimension text)."""
    rng = random.Random(seed)
    pairs: list[tuple[str, str]] = []
    for record in records:
        for m in sample_training_modes(record, weights, n_per_record, rng):
            inputs = {d: serialize_dimension(record, d) for d in m.inputs}
            pairs.append(
                (format_prompt(m, inputs), serialize_dimension(record, m.output))
            )
    return pairs

"""Corpus-level evaluation: applying the metric suite to chain traces and
aggregating per-chain, pooled, and oracle rows into one table."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from deepa2.chains import ChainResult, default_ranking_key, pool_index
from deepa2.errors import DeepA2Error, UndefinedMetricError
from deepa2.metrics import (
    MetricReport,
    Scorer,
    default_scorer,
    eval_exe_te,
    evaluate_analysis,
    work_dict_of_record,
)
from deepa2.records import DeepA2Record
from deepa2.schemes import SchemeCatalog, builtin_catalog

METRIC_COLUMNS = (
    "sys_pp", "sys_rp", "sys_rc", "sys_us", "sys_sch", "sys_val",
    "exe_meq", "exe_rss", "exe_jss", "exe_ppr", "exe_ppj", "exe_te",
)


@dataclass(frozen=True)
class EvaluatedTrace:
    record_id: str
    chain_id: int
    report: MetricReport

    def to_dict(self) -> dict:
        data = {"record_id": self.record_id, "chain_id": self.chain_id}
        data.update(self.report.to_flat_dict())
        return data


def evaluate_trace(
    result: ChainResult,
    record: DeepA2Record,
    catalog: SchemeCatalog | None = None,
    scorer: Scorer = default_scorer,
) -> EvaluatedTrace:
    report = evaluate_analysis(result.final, target=record, catalog=catalog, scorer=scorer)
    return EvaluatedTrace(result.record_id, result.chain_id, report)


def evaluate_traces(
    results: Iterable[ChainResult],
    corpus: dict[str, DeepA2Record],
    catalog: SchemeCatalog | None = None,
    scorer: Scorer = default_scorer,
) -> list[EvaluatedTrace]:
    catalog = catalog or builtin_catalog()
    rows = []
    for result in results:
        record = corpus.get(result.record_id)
        if record is None:
            raise DeepA2Error(
                f"trace for unknown record {result.record_id!r}; corpus mismatch"
            )
        rows.append(evaluate_trace(result, record, catalog, scorer))
    if not rows:
        raise UndefinedMetricError("no traces to evaluate")
    return rows


def oracle_reports(
    records: Sequence[DeepA2Record],
    catalog: SchemeCatalog | None = None,
    scorer: Scorer = default_scorer,
) -> list[tuple[DeepA2Record, MetricReport]]:
    """Metric suite applied to the target data itself."""
    catalog = catalog or builtin_catalog()
    out = []
    for record in records:
        report = evaluate_analysis(
            work_dict_of_record(record), target=record, catalog=catalog, scorer=scorer
        )
        out.append((record, report))
    return out


def _aggregate_reports(
    pairs: Sequence[tuple[MetricReport, DeepA2Record]]
) -> dict[str, float | None]:
    def mean_of(values):
        values = [v for v in values if v is not None]
        return sum(values) / len(values) if values else None

    row: dict[str, float | None] = {}
    row["sys_pp"] = mean_of([r.sys_pp for r, _ in pairs])
    row["sys_rp"] = mean_of([r.sys_rp for r, _ in pairs])
    row["sys_rc"] = mean_of([r.sys_rc for r, _ in pairs])
    row["sys_us"] = mean_of([r.sys_us for r, _ in pairs])
    row["sys_sch"] = mean_of([r.sys_sch for r, _ in pairs])
    row["sys_val"] = mean_of([r.sys_val for r, _ in pairs])
    row["exe_meq"] = mean_of([r.exe_meq for r, _ in pairs])
    row["exe_rss"] = mean_of([r.exe_rss for r, _ in pairs])
    row["exe_jss"] = mean_of([r.exe_jss for r, _ in pairs])
    row["exe_ppr"] = mean_of([r.exe_ppr for r, _ in pairs])
    row["exe_ppj"] = mean_of([r.exe_ppj for r, _ in pairs])
    te_items = [
        (r.exe_te_prediction, record.meta.final_conclusion_explicit)
        for r, record in pairs
    ]
    row["exe_te"] = eval_exe_te(te_items) if te_items else None
    return row


def aggregate_table(
    rows: Sequence[EvaluatedTrace],
    corpus: dict[str, DeepA2Record],
    results_by_key: dict[tuple[str, int], ChainResult] | None = None,
    include_oracle: bool = True,
) -> dict:
    """Per-chain mean rows plus a pooling row (item-wise best chain) and an
    oracle row (metrics on the target data)."""
    chains = sorted({row.chain_id for row in rows})
    table_rows = []
    for chain_id in chains:
        pairs = [
            (row.report, corpus[row.record_id])
            for row in rows
            if row.chain_id == chain_id
        ]
        table_rows.append({"chain": str(chain_id), **_aggregate_reports(pairs)})

    if len(chains) >= 1:
        pooled_pairs = []
        by_record: dict[str, list[EvaluatedTrace]] = {}
        for row in rows:
            by_record.setdefault(row.record_id, []).append(row)
        for record_id, group in by_record.items():
            candidates = [
                (
                    results_by_key.get((record_id, row.chain_id))
                    if results_by_key
                    else ChainResult(row.chain_id, record_id, {}, ()),
                    row.report,
                )
                for row in group
            ]
            best = pool_index(candidates, key=default_ranking_key)
            pooled_pairs.append((group[best].report, corpus[record_id]))
        table_rows.append({"chain": "pooling", **_aggregate_reports(pooled_pairs)})

    if include_oracle:
        oracle_pairs = [
            (report, record)
            for record, report in oracle_reports(
                [corpus[rid] for rid in sorted({r.record_id for r in rows})]
            )
        ]
        table_rows.append({"chain": "oracle", **_aggregate_reports(oracle_pairs)})
    return {"columns": list(METRIC_COLUMNS), "rows": table_rows}


def render_table(table: dict) -> str:
    """Fixed-width text rendering of an aggregate table."""
    headers = ["chain"] + [c.replace("sys_", "").replace("exe_", "").upper()
                           for c in table["columns"]]
    lines = ["  ".join(f"{h:>8}" for h in headers)]
    for row in table["rows"]:
        cells = [f"{row['chain']:>8}"]
        for column in table["columns"]:
            value = row.get(column)
            cells.append(f"{value:8.2f}" if value is not None else f"{'--':>8}")
        lines.append("  ".join(cells))
    return "\n".join(lines)

"""Trace evaluation and table aggregation tests."""

import pytest

from deepa2.backends import NoisyOracleBackend, OracleBackend
from deepa2.chains import chain_by_id, run_chain
from deepa2.errors import DeepA2Error, UndefinedMetricError
from deepa2.evaluation import (
    METRIC_COLUMNS,
    aggregate_table,
    evaluate_traces,
    oracle_reports,
    render_table,
)
from deepa2.generator import GeneratorConfig, generate_corpus


@pytest.fixture(scope="module")
def corpus():
    records = generate_corpus(GeneratorConfig(), 40, seed=51)
    return {r.meta.record_id: r for r in records}


def traces_for(corpus, backend, chain_ids):
    return [
        run_chain(chain_by_id(cid), record.source, backend,
                  with_formalization=True, record_id=record_id)
        for record_id, record in corpus.items()
        for cid in chain_ids
    ]


class TestEvaluateTraces:
    def test_oracle_rows_are_perfect(self, corpus):
        backend = OracleBackend(corpus.values())
        rows = evaluate_traces(traces_for(corpus, backend, [1]), corpus)
        for row in rows:
            assert row.report.sys_val == 1
            assert row.report.sys_sch == 1.0
            assert row.report.exe_meq == 1
            assert row.report.exe_ppr == 1.0

    def test_unknown_record_rejected(self, corpus):
        backend = OracleBackend(corpus.values())
        traces = traces_for(corpus, backend, [1])
        bad = {k: v for i, (k, v) in enumerate(corpus.items()) if i > 0}
        with pytest.raises(DeepA2Error, match="mismatch"):
            evaluate_traces(traces, bad)

    def test_empty_traces_rejected(self, corpus):
        with pytest.raises(UndefinedMetricError):
            evaluate_traces([], corpus)


class TestAggregateTable:
    def test_shape_and_rows(self, corpus):
        backend = OracleBackend(corpus.values())
        rows = evaluate_traces(traces_for(corpus, backend, [1, 9]), corpus)
        table = aggregate_table(rows, corpus)
        assert table["columns"] == list(METRIC_COLUMNS)
        assert [r["chain"] for r in table["rows"]] == ["1", "9", "pooling", "oracle"]
        oracle_row = table["rows"][-1]
        for column in ("sys_pp", "sys_rp", "sys_rc", "sys_us", "sys_sch",
                       "sys_val", "exe_meq", "exe_ppr", "exe_ppj", "exe_te"):
            assert oracle_row[column] == 1.0, column

    def test_pooling_dominates_on_validity(self, corpus):
        backend = NoisyOracleBackend(list(corpus.values()), 0.4, seed=5)
        rows = evaluate_traces(traces_for(corpus, backend, [1, 9, 13]), corpus)
        table = aggregate_table(rows, corpus, include_oracle=False)
        by_chain = {r["chain"]: r for r in table["rows"]}
        for chain in ("1", "9", "13"):
            assert by_chain["pooling"]["sys_val"] >= by_chain[chain]["sys_val"]

    def test_pooling_is_itemwise_max(self, corpus):
        backend = NoisyOracleBackend(list(corpus.values()), 0.5, seed=6)
        rows = evaluate_traces(traces_for(corpus, backend, [1, 9]), corpus)
        by_record = {}
        for row in rows:
            by_record.setdefault(row.record_id, []).append(row.report.sys_val)
        table = aggregate_table(rows, corpus, include_oracle=False)
        pooled = next(r for r in table["rows"] if r["chain"] == "pooling")
        expected = sum(max(vals) for vals in by_record.values()) / len(by_record)
        assert pooled["sys_val"] == pytest.approx(expected)

    def test_render_table_mentions_all_rows(self, corpus):
        backend = OracleBackend(corpus.values())
        rows = evaluate_traces(traces_for(corpus, backend, [1]), corpus)
        text = render_table(aggregate_table(rows, corpus))
        assert "pooling" in text and "oracle" in text


def test_oracle_reports_match_targets(corpus):
    for record, report in oracle_reports(list(corpus.values())[:10]):
        assert report.sys_val == 1
        assert report.exe_te_prediction == record.meta.final_conclusion_explicit

"""Prompt formatting and backend behavior tests (oracle, noisy, HTTP)."""

import threading

import pytest

from deepa2.backends import (
    GenerationRequest,
    HttpBackend,
    NoisyOracleBackend,
    OracleBackend,
    format_prompt,
    make_backend,
)
from deepa2.dimensions import DimensionId as D
from deepa2.errors import BackendError, BackendUnavailableError, MissingDimensionError
from deepa2.modes import mode
from deepa2.records import serialize_dimension

from .helpers import dilemma_record
from .stubserver import start_stub_server, stop_stub_server


class TestFormatPrompt:
    def test_source_to_conjectures(self):
        got = format_prompt(
            mode("S", "J"),
            {D.SOURCE: "Socrates is mortal because every human is."},
        )
        assert got == "conjectures: source: Socrates is mortal because every human is."

    def test_formalize_alias_for_premises_to_form(self):
        got = format_prompt(
            mode("P", "F"),
            {D.PREMISES: "Socrates is human | If someone is human, then they are mortal"},
        )
        assert got.startswith("formalize: premises: Socrates is human")

    def test_other_formal_modes_keep_keyword_prefix(self):
        got = format_prompt(mode("C", "O"), {D.CONCLUSION: "Socrates is mortal"})
        assert got.startswith("conclusion_form: conclusion: ")

    def test_empty_field_serialized_as_empty_string(self):
        got = format_prompt(
            mode("RJ", "A"),
            {D.REASONS: "", D.CONJECTURES: "Socrates is mortal"},
        )
        assert got == "argdown: reasons:  conjectures: Socrates is mortal"

    def test_missing_input_names_the_dimension(self):
        with pytest.raises(MissingDimensionError, match="conjectures"):
            format_prompt(mode("RJ", "A"), {D.REASONS: "r"})

    def test_injective_over_distinct_inputs(self):
        seen = {}
        for source in ("text one", "text two", "text  one"):
            for reasons in ("a", "b", ""):
                prompt = format_prompt(
                    mode("SR", "A"), {D.SOURCE: source, D.REASONS: reasons}
                )
                assert prompt not in seen or seen[prompt] == (source, reasons)
                seen[prompt] = (source, reasons)


class TestOracle:
    def test_returns_target_dimension(self):
        record = dilemma_record()
        backend = OracleBackend([record])
        request = GenerationRequest(
            mode("S", "A"), {D.SOURCE: record.source}, record_id=record.meta.record_id
        )
        assert backend.generate(request) == serialize_dimension(record, D.ARGDOWN)

    def test_unknown_record_id(self):
        backend = OracleBackend([dilemma_record()])
        request = GenerationRequest(mode("S", "A"), {D.SOURCE: "x"}, record_id="nope")
        with pytest.raises(BackendError):
            backend.generate(request)

    def test_missing_record_id(self):
        backend = OracleBackend([dilemma_record()])
        with pytest.raises(BackendError):
            backend.generate(GenerationRequest(mode("S", "A"), {D.SOURCE: "x"}))

    def test_request_inputs_must_cover_mode_inputs(self):
        with pytest.raises(MissingDimensionError):
            GenerationRequest(mode("SR", "A"), {D.SOURCE: "x"})
        with pytest.raises(MissingDimensionError):
            GenerationRequest(mode("S", "A"), {D.SOURCE: "x", D.REASONS: "y"})


class TestNoisyOracle:
    def _request(self, record):
        return GenerationRequest(
            mode("S", "R"), {D.SOURCE: record.source}, record_id=record.meta.record_id
        )

    def test_rate_zero_equals_oracle(self):
        record = dilemma_record()
        noisy = NoisyOracleBackend([record], 0.0, seed=1)
        oracle = OracleBackend([record])
        assert noisy.generate(self._request(record)) == oracle.generate(
            self._request(record)
        )

    def test_rate_one_always_corrupts(self):
        record = dilemma_record()
        oracle = OracleBackend([record])
        for seed in range(10):
            noisy = NoisyOracleBackend([record], 1.0, seed=seed)
            assert noisy.generate(self._request(record)) != oracle.generate(
                self._request(record)
            )

    def test_deterministic_per_seed(self):
        record = dilemma_record()
        a = NoisyOracleBackend([record], 0.7, seed=42)
        b = NoisyOracleBackend([record], 0.7, seed=42)
        c = NoisyOracleBackend([record], 0.7, seed=43)
        outs_a = [a.generate(self._request(record)) for _ in range(5)]
        outs_b = [b.generate(self._request(record)) for _ in range(5)]
        assert outs_a == outs_b
        assert len(set(outs_a)) == 1
        _ = [c.generate(self._request(record)) for _ in range(5)]

    def test_formula_corruption_is_unparseable(self):
        from deepa2.records import parse_dimension
        from deepa2.errors import DimensionParseError

        record = dilemma_record()
        noisy = NoisyOracleBackend([record], 1.0, seed=9)
        request = GenerationRequest(
            mode("P", "F"),
            {D.PREMISES: serialize_dimension(record, D.PREMISES)},
            record_id=record.meta.record_id,
        )
        corrupted = noisy.generate(request)
        with pytest.raises(DimensionParseError):
            parse_dimension(corrupted, D.PREMISES_FORM)


@pytest.fixture()
def stub_server():
    server = start_stub_server()
    yield server
    stop_stub_server(server)


class TestHttpBackend:
    def _request(self):
        return GenerationRequest(
            mode("S", "A"), {D.SOURCE: "some text"}, record_id="r1"
        )

    def test_round_trip_schema(self, stub_server):
        url = f"http://127.0.0.1:{stub_server.server_address[1]}"
        backend = HttpBackend(url, timeout=5)
        output = backend.generate(self._request())
        assert output == 'ECHO {"source": "some text"}'
        path, body = stub_server.state["requests"][0]
        assert path == "/generate"
        assert body == {
            "mode": "argdown",
            "inputs": {"source": "some text"},
            "beam_width": 2,
        }

    def test_retries_then_succeeds(self, stub_server):
        stub_server.state["fail_next"] = 2
        url = f"http://127.0.0.1:{stub_server.server_address[1]}"
        backend = HttpBackend(url, timeout=5, backoff=0.01)
        assert backend.generate(self._request()).startswith("ECHO")
        assert len(stub_server.state["requests"]) == 3

    def test_unavailable_after_retry_budget(self, stub_server):
        stub_server.state["fail_next"] = 3
        url = f"http://127.0.0.1:{stub_server.server_address[1]}"
        backend = HttpBackend(url, timeout=5, backoff=0.01)
        with pytest.raises(BackendUnavailableError):
            backend.generate(self._request())

    def test_in_flight_bound_respected(self, stub_server):
        stub_server.state["latency"] = 0.05
        url = f"http://127.0.0.1:{stub_server.server_address[1]}"
        backend = HttpBackend(url, timeout=5, max_in_flight=2)
        threads = [
            threading.Thread(target=backend.generate, args=(self._request(),))
            for _ in range(8)
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert stub_server.state["max_in_flight"] <= 2

    def test_dead_endpoint(self):
        backend = HttpBackend("http://127.0.0.1:1", timeout=0.2, backoff=0.01)
        with pytest.raises(BackendUnavailableError):
            backend.generate(self._request())


class TestMakeBackend:
    def test_specs(self):
        record = dilemma_record()
        assert isinstance(make_backend("oracle", [record]), OracleBackend)
        noisy = make_backend("noisy:0.25", [record], seed=7)
        assert isinstance(noisy, NoisyOracleBackend)
        assert noisy.corruption_rate == 0.25
        assert isinstance(make_backend("http://x.test"), HttpBackend)

    def test_unknown_spec(self):
        with pytest.raises(BackendError):
            make_backend("carrier-pigeon")

"""Text-to-text model backends and prompt formatting.

A backend turns a generation request (mode plus serialized input
dimensions) into raw output text.  The oracle backend answers from target
records, the noisy oracle corrupts a seeded fraction of its answers, and
the HTTP backend talks to an external inference service over a small JSON
protocol.
"""

from __future__ import annotations

import hashlib
import random
import re
import threading
import time
from dataclasses import dataclass
from typing import Iterable, Mapping, Protocol

import requests

from deepa2.dimensions import DimensionId, FORMULA_DIMENSIONS, LIST_DIMENSIONS
from deepa2.errors import BackendError, BackendUnavailableError, MissingDimensionError
from deepa2.modes import ModeSpec, mode
from deepa2.records import DeepA2Record, serialize_dimension

DEFAULT_BEAM_WIDTH = 2

#: The premises-to-formalization mode goes by the task prefix "formalize".
_FORMALIZE_MODE = mode("P", "F")


@dataclass(frozen=True)
class GenerationRequest:
    mode: ModeSpec
    inputs: Mapping[DimensionId, str]
    beam_width: int = DEFAULT_BEAM_WIDTH
    record_id: str | None = None

    def __post_init__(self):
        if set(self.inputs) != set(self.mode.inputs):
            raise MissingDimensionError(
                f"request inputs {sorted(d.keyword for d in self.inputs)} do not "
                f"cover exactly the {self.mode.label} inputs"
            )


class ModelBackend(Protocol):
    def generate(self, request: GenerationRequest) -> str:  # pragma: no cover
        ...


def format_prompt(mode_spec: ModeSpec, inputs: Mapping[DimensionId, str]) -> str:
    """Task-prefixed prompt: target keyword, then each input dimension as
    ``keyword: value`` in mode order."""
    prefix = "formalize" if mode_spec == _FORMALIZE_MODE else mode_spec.output.keyword
    parts = [f"{prefix}:"]
    for dim in mode_spec.inputs:
        if dim not in inputs:
            raise MissingDimensionError(
                f"prompt for {mode_spec.label} misses input dimension {dim.keyword}"
            )
        parts.append(f"{dim.keyword}: {inputs[dim]}")
    return " ".join(parts).rstrip()


# ---------------------------------------------------------------------------
# Oracle backends
# ---------------------------------------------------------------------------


class OracleBackend:
    """Answers every request with the target record's output dimension."""

    def __init__(self, records: Iterable[DeepA2Record]):
        self._records: dict[str, DeepA2Record] = {}
        for record in records:
            record_id = record.meta.record_id
            if record_id is None:
                raise BackendError("oracle backend needs records with ids")
            self._records[record_id] = record

    def target(self, record_id: str) -> DeepA2Record:
        try:
            return self._records[record_id]
        except KeyError:
            raise BackendError(f"unknown record id {record_id!r}") from None

    def generate(self, request: GenerationRequest) -> str:
        if request.record_id is None:
            raise BackendError("oracle backend needs a record id on each request")
        record = self.target(request.record_id)
        return serialize_dimension(record, request.mode.output)


_JUNK_WORDS = ("quasar", "marzipan", "flotsam", "kumquat", "zephyr", "borogove")


class NoisyOracleBackend:
    """Oracle that corrupts each answer independently with a fixed
    probability; deterministic given the seed."""

    def __init__(self, records: Iterable[DeepA2Record], corruption_rate: float, seed: int):
        if not 0 <= corruption_rate <= 1:
            raise ValueError("corruption_rate must lie in [0, 1]")
        self._oracle = OracleBackend(records)
        self.corruption_rate = corruption_rate
        self.seed = seed

    def generate(self, request: GenerationRequest) -> str:
        text = self._oracle.generate(request)
        rng = self._request_rng(request, text)
        if rng.random() >= self.corruption_rate:
            return text
        return _corrupt(text, request.mode.output, rng)

    def _request_rng(self, request: GenerationRequest, text: str) -> random.Random:
        # Keyed on the inputs as well, so the same mode reached through
        # different chains draws independently; still fully deterministic.
        inputs = "\x1f".join(
            f"{d.keyword}={request.inputs[d]}" for d in request.mode.inputs
        )
        key = f"{self.seed}:{request.record_id}:{request.mode.label}:{inputs}:{text}"
        digest = hashlib.sha256(key.encode("utf-8")).digest()
        return random.Random(int.from_bytes(digest[:8], "big"))


def _corrupt(text: str, dim: DimensionId, rng: random.Random) -> str:
    if dim in FORMULA_DIMENSIONS:
        # An unparseable formalization is the canonical failure.
        return (text + " @@").strip()
    if dim in LIST_DIMENSIONS:
        items = text.split(" | ") if text else []
        if len(items) >= 2 and rng.random() < 0.5:
            items.pop(rng.randrange(len(items)))
            return " | ".join(items)
        if items:
            k = rng.randrange(len(items))
            items[k] = _mangle_statement(items[k], rng)
            return " | ".join(items)
        return rng.choice(_JUNK_WORDS)
    if dim is DimensionId.ARGDOWN:
        lines = text.splitlines()
        statement_lines = [i for i, ln in enumerate(lines) if re.match(r"^\(\d+\)", ln)]
        if len(statement_lines) > 1:
            del lines[rng.choice(statement_lines)]
            return "\n".join(lines)
        return text + "\n!!"
    # Keys and anything else: swap words for junk.
    return _mangle_statement(text, rng)


def _mangle_statement(item: str, rng: random.Random) -> str:
    ref_match = re.search(r"\s*\(ref: \(\d+\)\)\s*$", item)
    body = item[: ref_match.start()] if ref_match else item
    suffix = item[ref_match.start():] if ref_match else ""
    if rng.random() < 0.5 and ref_match:
        # Dangle the reference instead of touching the text.
        number = int(re.search(r"\((\d+)\)\)", suffix).group(1))
        return body + f" (ref: ({number + 7}))"
    words = body.split()
    if not words:
        return rng.choice(_JUNK_WORDS) + suffix
    n_swaps = max(1, len(words) // 2)
    for _ in range(n_swaps):
        words[rng.randrange(len(words))] = rng.choice(_JUNK_WORDS)
    return " ".join(words) + suffix


# ---------------------------------------------------------------------------
# HTTP backend
# ---------------------------------------------------------------------------


@dataclass
class HttpBackend:
    """Client for an external inference service.

    POSTs ``{endpoint}/generate`` with ``{"mode": keyword, "inputs":
    {keyword: text}, "beam_width": n}`` and expects ``{"output": text}``.
    Transient failures are retried with exponential backoff; at most
    ``max_in_flight`` requests run concurrently, each thread on its own
    connection pool.
    """

    endpoint: str
    timeout: float = 30.0
    max_in_flight: int = 4
    max_attempts: int = 3
    backoff: float = 0.25

    def __post_init__(self):
        self._semaphore = threading.Semaphore(self.max_in_flight)
        self._local = threading.local()

    @property
    def _session(self) -> requests.Session:
        if not hasattr(self._local, "session"):
            self._local.session = requests.Session()
        return self._local.session

    def generate(self, request: GenerationRequest) -> str:
        body = {
            "mode": request.mode.output.keyword,
            "inputs": {d.keyword: text for d, text in request.inputs.items()},
            "beam_width": request.beam_width,
        }
        url = self.endpoint.rstrip("/") + "/generate"
        last_error: str = "no attempt made"
        with self._semaphore:
            for attempt in range(self.max_attempts):
                if attempt:
                    time.sleep(self.backoff * (2 ** (attempt - 1)))
                try:
                    response = self._session.post(url, json=body, timeout=self.timeout)
                except requests.RequestException as err:
                    last_error = f"transport error: {err}"
                    continue
                if response.status_code // 100 == 2:
                    try:
                        payload = response.json()
                        return payload["output"]
                    except (ValueError, KeyError) as err:
                        raise BackendError(
                            f"malformed response from {url}: {err}"
                        ) from err
                last_error = f"HTTP {response.status_code}"
        raise BackendUnavailableError(
            f"{url} unavailable after {self.max_attempts} attempts ({last_error})"
        )


def make_backend(spec: str, records: Iterable[DeepA2Record] | None = None,
                 seed: int = 0, timeout: float = 30.0,
                 max_in_flight: int = 4) -> ModelBackend:
    """Build a backend from a CLI-style spec: ``oracle``, ``noisy:<rate>``,
    or ``http:<url>`` / a bare URL."""
    if spec == "oracle":
        if records is None:
            raise BackendError("oracle backend needs a target corpus")
        return OracleBackend(records)
    if spec.startswith("noisy:"):
        if records is None:
            raise BackendError("noisy oracle backend needs a target corpus")
        rate = float(spec.split(":", 1)[1])
        return NoisyOracleBackend(records, rate, seed)
    if spec.startswith(("http://", "https://")):
        return HttpBackend(spec, timeout=timeout, max_in_flight=max_in_flight)
    if spec.startswith("http:"):
        return HttpBackend(spec.split(":", 1)[1], timeout=timeout, max_in_flight=max_in_flight)
    raise BackendError(f"unknown backend spec {spec!r}")

"""Command-line surface for batch pipelines.

All stages communicate through files so each is independently re-runnable:
``generate`` writes a corpus, ``run`` executes chains against a backend and
writes traces, ``eval`` scores traces against the corpus, and
``export-training`` emits sequence-to-sequence pairs.

Exit codes: 0 success, 2 configuration/usage error, 3 backend failure,
4 validation failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from deepa2.backends import make_backend
from deepa2.chains import ChainResult, chain_by_id, export_training, run_chain
from deepa2.errors import (
    BackendError,
    ChainDefinitionError,
    ConfigError,
    DeepA2Error,
)
from deepa2.evaluation import aggregate_table, evaluate_traces, render_table
from deepa2.generator import GeneratorConfig, generate_corpus, subset_census
from deepa2.records import load_corpus

logger = logging.getLogger("deepa2")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BACKEND = 3
EXIT_VALIDATION = 4

ENV_ENDPOINT = "DEEPA2_ENDPOINT"
ENV_TIMEOUT_MS = "DEEPA2_TIMEOUT_MS"


@dataclass(frozen=True)
class RunManifest:
    corpus: Path
    chain_ids: tuple[int, ...]
    backend_spec: str
    seed: int
    out: Path
    with_formalization: bool
    jobs: int = 1


def _atomic_write(path: Path, write) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            write(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _atomic_write_lines(path: Path, lines) -> None:
    def write(fh):
        for line in lines:
            fh.write(line)

    _atomic_write(path, write)


def _atomic_write_json(path: Path, payload) -> None:
    _atomic_write(path, lambda fh: json.dump(payload, fh, indent=2))


def _parse_chain_ids(text: str) -> tuple[int, ...]:
    if text.strip() == "all":
        return tuple(range(1, 17))
    try:
        ids = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise ConfigError(f"cannot parse chain ids from {text!r}") from None
    for chain_id in ids:
        chain_by_id(chain_id)
    if not ids:
        raise ConfigError("no chain ids given")
    return ids


def cmd_generate(args) -> int:
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                config = GeneratorConfig.from_dict(json.load(fh))
        except (OSError, json.JSONDecodeError) as err:
            raise ConfigError(f"cannot read config {args.config}: {err}") from err
    else:
        config = GeneratorConfig.preset(args.preset)

    out = Path(args.out)
    if args.n == 0:
        logger.warning("n=0: writing an empty corpus file")
        _atomic_write(out, lambda fh: None)
        return EXIT_OK
    records = generate_corpus(config, args.n, seed=args.seed)
    _atomic_write_lines(out, _corpus_lines(records))
    census = subset_census(records)
    census_path = Path(args.census) if args.census else out.with_suffix(
        out.suffix + ".census.json"
    )
    _atomic_write_json(census_path, census)
    digest = hashlib.sha256(out.read_bytes()).hexdigest()[:12]
    print(f"wrote {len(records)} records to {out} (sha256 {digest})")
    print(f"census: {census}")
    return EXIT_OK


def _corpus_lines(records):
    from deepa2.records import record_to_dict

    for record in records:
        yield json.dumps(record_to_dict(record), ensure_ascii=False) + "\n"


def cmd_run(args) -> int:
    manifest = RunManifest(
        corpus=Path(args.corpus),
        chain_ids=_parse_chain_ids(args.chains),
        backend_spec=args.backend,
        seed=args.seed,
        out=Path(args.out),
        with_formalization=args.with_formalization,
        jobs=args.jobs,
    )
    records = load_corpus(manifest.corpus)
    timeout_ms = float(os.environ.get(ENV_TIMEOUT_MS, "30000"))
    backend_spec = manifest.backend_spec
    if backend_spec == "http":
        endpoint = os.environ.get(ENV_ENDPOINT)
        if not endpoint:
            raise ConfigError(f"backend 'http' needs {ENV_ENDPOINT} set")
        backend_spec = endpoint
    backend = make_backend(
        backend_spec,
        records,
        seed=manifest.seed,
        timeout=timeout_ms / 1000.0,
        max_in_flight=max(1, manifest.jobs),
    )

    tasks = [
        (record, chain_by_id(chain_id))
        for record in records
        for chain_id in manifest.chain_ids
    ]

    def execute(task) -> ChainResult:
        record, chain = task
        return run_chain(
            chain,
            record.source or "",
            backend,
            with_formalization=manifest.with_formalization,
            record_id=record.meta.record_id,
        )

    if manifest.jobs > 1:
        with ThreadPoolExecutor(max_workers=manifest.jobs) as executor:
            results = list(executor.map(execute, tasks))
    else:
        results = [execute(task) for task in tasks]

    failed = [r for r in results if r.error]
    _atomic_write_lines(
        manifest.out,
        (json.dumps(r.to_dict(), ensure_ascii=False) + "\n" for r in results),
    )
    print(f"wrote {len(results)} traces to {manifest.out} ({len(failed)} failed)")
    if failed:
        logger.error("backend failures on %d traces (first: %s)", len(failed),
                     failed[0].error)
        return EXIT_BACKEND
    return EXIT_OK


def cmd_eval(args) -> int:
    corpus = {r.meta.record_id: r for r in load_corpus(args.corpus)}
    results = []
    with open(args.traces, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                results.append(ChainResult.from_dict(json.loads(line)))
    if not results:
        raise DeepA2Error("traces file is empty")
    usable = [r for r in results if not r.error]
    rows = evaluate_traces(usable, corpus)
    out = Path(args.out)
    _atomic_write_lines(
        out,
        (json.dumps(row.to_dict(), ensure_ascii=False) + "\n" for row in rows),
    )
    table = aggregate_table(rows, corpus)
    aggregate_path = out.with_suffix(out.suffix + ".aggregate.json")
    _atomic_write_json(aggregate_path, table)
    print(render_table(table))
    print(f"wrote per-record metrics to {out} and aggregate to {aggregate_path}")
    return EXIT_OK


def cmd_export_training(args) -> int:
    records = load_corpus(args.corpus)
    weights = {"aaac": "aaac", "entailment-bank": "entailment_bank"}[args.weights]
    pairs = export_training(records, weights=weights, n_per_record=args.n, seed=args.seed)
    _atomic_write_lines(
        Path(args.out),
        (
            json.dumps({"input": src, "target": tgt}, ensure_ascii=False) + "\n"
            for src, tgt in pairs
        ),
    )
    print(f"wrote {len(pairs)} sequence-to-sequence pairs to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deepa2",
        description="Deep argument analysis toolkit: corpus generation, "
        "generative chains, and reconstruction metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a synthetic corpus")
    p.add_argument("--preset", default="aaac01", help="config preset (aaac01, aaac02)")
    p.add_argument("--config", help="JSON generator-config file (overrides --preset)")
    p.add_argument("-n", type=int, required=True, help="number of records")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="corpus JSON-lines path")
    p.add_argument("--census", help="census JSON path (default: <out>.census.json)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("run", help="execute generative chains over a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--chains", default="all", help='comma-separated ids or "all"')
    p.add_argument(
        "--backend",
        default="oracle",
        help="oracle | noisy:<rate> | http | http(s)://host:port",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--with-formalization", action="store_true",
                   help="append the formalization sub-chain")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True, help="traces JSON-lines path")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("eval", help="apply the metric suite to traces")
    p.add_argument("--traces", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="per-record metrics JSON-lines path")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("export-training", help="emit seq2seq training pairs")
    p.add_argument("--corpus", required=True)
    p.add_argument("--weights", choices=("aaac", "entailment-bank"), default="aaac")
    p.add_argument("-n", type=int, default=14, help="pairs per record")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_training)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_CONFIG if err.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (ConfigError, ChainDefinitionError) as err:
        logger.error("%s", err)
        return EXIT_CONFIG
    except BackendError as err:
        logger.error("backend: %s", err)
        return EXIT_BACKEND
    except (DeepA2Error, OSError) as err:
        logger.error("%s", err)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``rpt <subcommand> ...``.

Exit codes: 0 success, 1 operational error, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import tempfile
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from rpt.errors import EmptyProgram, InputError, RptError

log = logging.getLogger("rpt")

EXIT_OK, EXIT_OPERATIONAL, EXIT_INPUT = 0, 1, 2


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text}")
    return value


def _non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected an integer >= 0, got {text}")
    return value


def _unit_float(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"expected a value in [0, 1], got {text}")
    return value


def _cap(text: str) -> Optional[int]:
    if text.lower() in ("none", "0"):
        return None
    return _positive_int(text)


def _add_store(p: argparse.ArgumentParser, index: bool = False) -> None:
    p.add_argument("--store", required=True, type=Path, help="store directory")
    if index:
        p.add_argument("--index", type=Path, help="index directory (default: STORE/index)")


def _add_retrieval(p: argparse.ArgumentParser) -> None:
    from rpt.pbi import DEFAULT_CAP, DEFAULT_MIN_HIT_RATIO, DEFAULT_SLACK

    g = p.add_argument_group("retrieval")
    g.add_argument("--k", type=_positive_int, default=10, help="results to return (default 10)")
    g.add_argument("--k1", type=_positive_int, default=100, help="structural shortlist size (default 100)")
    g.add_argument("--w-struct", type=_unit_float, default=0.6, help="structural weight; text weight is 1 - this")
    g.add_argument("--slack", type=_non_negative_int, default=DEFAULT_SLACK, help="neighbouring buckets probed")
    g.add_argument("--min-hit-ratio", type=_unit_float, default=DEFAULT_MIN_HIT_RATIO)
    g.add_argument("--cap", type=_cap, default=DEFAULT_CAP, help="candidate cap, 'none' to disable")
    g.add_argument("--text-threshold", type=_unit_float, default=None)


def _retrieval_config(args: argparse.Namespace):
    from rpt.retriever import RetrievalConfig

    try:
        return RetrievalConfig(
            w_struct=args.w_struct,
            w_text=1.0 - args.w_struct,
            k1=args.k1,
            k=args.k,
            slack=args.slack,
            min_hit_ratio=args.min_hit_ratio,
            cap=args.cap,
            text_threshold=args.text_threshold,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _frontend(args: argparse.Namespace, config):
    from rpt.frontend.mapping import load_mappings, mapping_dir
    from rpt.pipeline import Frontend

    return Frontend(load_mappings(mapping_dir(args.mapping_dir)), config)


def _index_dir(args: argparse.Namespace) -> Path:
    return args.index if args.index is not None else args.store / "index"


def _open_retriever(args: argparse.Namespace):
    from rpt.pbi import PbiIndex
    from rpt.retriever import Retriever
    from rpt.store import Store

    store = Store.open(args.store)
    index = PbiIndex.load(_index_dir(args))
    return store, Retriever(index, store)


def _print_json(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


# -- subcommands -------------------------------------------------------------


def cmd_ingest(args: argparse.Namespace) -> int:
    from rpt.ingest import discover, ingest
    from rpt.representation import ExtractionConfig
    from rpt.store import Store

    config = None
    if args.max_path_length is not None or args.max_paths is not None:
        default = ExtractionConfig()
        config = ExtractionConfig(
            max_length=args.max_path_length if args.max_path_length is not None else default.max_length,
            max_paths=args.max_paths if args.max_paths is not None else default.max_paths,
        )
    files = discover(args.paths, args.lang)
    with Store.open(args.store, "append", config=config) as store:
        summary = ingest(store, files, _frontend(args, store.config), jobs=args.jobs)
    _print_json(summary.to_dict())
    return EXIT_OK


def cmd_build_index(args: argparse.Namespace) -> int:
    from rpt.pbi import build
    from rpt.store import Store

    store = Store.open(args.store)
    index = build(store, args.buckets)
    out = _index_dir(args)
    index.save(out)
    _print_json(
        {
            "index": str(out),
            "buckets": index.bucket_count,
            "checksum": index.checksum,
            "documents": {lang: li.n_docs for lang, li in sorted(index.languages.items())},
        }
    )
    return EXIT_OK


def cmd_query(args: argparse.Namespace) -> int:
    from rpt.frontend import SourceUnit, language_for_path

    cfg = _retrieval_config(args)
    language = args.lang or language_for_path(args.file.name)
    if language is None:
        raise InputError(f"cannot infer the language of {args.file}; pass --lang")
    try:
        body = args.file.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"{args.file}: {exc}") from None
    store, retriever = _open_retriever(args)
    retriever._frontend = _frontend(args, store.config)
    unit = SourceUnit(args.file.as_posix(), language, body)
    try:
        ranked = retriever.retrieve(unit, args.target_lang, cfg)
    except EmptyProgram:
        log.warning("%s: no paths extracted, nothing to query", args.file)
        ranked = []
    for rank, item in enumerate(ranked, 1):
        _print_json(
            {
                "rank": rank,
                "program_id": item.program_id,
                "locator": item.locator,
                "s_struct": item.s_struct,
                "s_text": item.s_text,
                "s_combined": item.s_combined,
            }
        )
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    from rpt.evaluation.harness import build_smoke_store, evaluate, load_pairs
    from rpt.pbi import build
    from rpt.retriever import Retriever

    cfg = _retrieval_config(args)
    if args.smoke:
        with tempfile.TemporaryDirectory() as tmp:
            store, pairs = build_smoke_store(Path(tmp) / "store", pad=args.pad, seed=args.seed)
            retriever = Retriever(build(store, args.buckets), store)
            report = evaluate(pairs, retriever, cfg, repeats=args.repeats, workers=args.workers)
    else:
        if args.pairs is None or args.store is None:
            raise InputError("eval needs --pairs and --store, or --smoke")
        pairs = load_pairs(args.pairs)
        _, retriever = _open_retriever(args)
        report = evaluate(pairs, retriever, cfg, repeats=args.repeats, workers=args.workers)
    if args.report is not None:
        args.report.write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if args.json:
        _print_json(report.to_dict())
    else:
        print(report.table())
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    from rpt.evaluation.harness import bench_index
    from rpt.evaluation.synth import synth_corpus
    from rpt.store import Store

    def run(path: Path) -> int:
        if (path / "manifest.json").exists():
            store = Store.open(path)
        else:
            log.info("generating %d synthetic records (seed %d)", args.n, args.seed)
            store = synth_corpus(path, args.n, args.seed)
        report = bench_index(store, args.buckets, args.queries, args.seed, repeats=args.repeats)
        if args.json:
            _print_json(report.to_dict())
        else:
            print(report.table())
        return EXIT_OK

    if args.store is not None:
        return run(args.store)
    with tempfile.TemporaryDirectory() as tmp:
        return run(Path(tmp) / "store")


def _percentile(values: np.ndarray, q: float) -> float:
    return float(np.percentile(values, q, method="lower"))


def cmd_stats(args: argparse.Namespace) -> int:
    from rpt.pbi import PbiIndex
    from rpt.store import Store

    store = Store.open(args.store)
    out: dict = {"records": len(store), "languages": {}}
    for lang in store.languages():
        doc_freq: dict[str, int] = {}
        n = 0
        for rec in store.scan(lang):
            n += 1
            for key in rec.repr.freq:
                doc_freq[key] = doc_freq.get(key, 0) + 1
        top = sorted(doc_freq, key=lambda k: (-doc_freq[k], k))[: args.top]
        summaries = []
        for key in top:
            values = np.asarray(store.freq_histogram(lang, key))
            summaries.append(
                {
                    "path_type": key,
                    "programs": int(values.size),
                    "min": int(values.min()),
                    "median": float(np.median(values)),
                    "p95": _percentile(values, 95),
                    "max": int(values.max()),
                }
            )
        out["languages"][lang] = {"programs": n, "path_types": len(doc_freq), "top_path_types": summaries}

    index_dir = _index_dir(args)
    if (index_dir / "index.meta.json").exists():
        index = PbiIndex.load(index_dir)
        occupancy = {}
        for lang, li in sorted(index.languages.items()):
            used = [sum(1 for p in tb.postings if len(p)) for tb in li.types.values()]
            hist = np.bincount(used, minlength=index.bucket_count + 1) if used else np.zeros(1, int)
            occupancy[lang] = {
                "types": len(used),
                "max_buckets": int(max(used, default=0)),
                "nonempty_buckets_histogram": {str(b): int(c) for b, c in enumerate(hist) if c},
            }
        out["index"] = {
            "buckets": index.bucket_count,
            "consistent": index.checksum == store.checksum(),
            "occupancy": occupancy,
        }
    print(json.dumps(out, indent=2, sort_keys=True))
    return EXIT_OK


# -- argument parsing --------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    from rpt.pbi import DEFAULT_BUCKETS

    parser = argparse.ArgumentParser(prog="rpt", description="Retrieve likely translations of a program from a code corpus.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more diagnostics on stderr")
    parser.add_argument("--mapping-dir", type=Path, help="mapping-table directory (env RPT_MAPPING_DIR)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("ingest", help="parse source files and append them to a store")
    _add_store(p)
    p.add_argument("paths", nargs="*", type=Path, help="files or directories")
    p.add_argument("--lang", help="language of all inputs (default: by file extension)")
    p.add_argument("--max-path-length", type=_positive_int)
    p.add_argument("--max-paths", type=_positive_int)
    p.add_argument("--jobs", type=_positive_int, default=1, help="parallel parser processes")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("build-index", help="build the bucketed index over a store")
    _add_store(p, index=True)
    p.add_argument("--buckets", type=_positive_int, default=DEFAULT_BUCKETS)
    p.set_defaults(func=cmd_build_index)

    p = sub.add_parser("query", help="retrieve translation candidates for a source file")
    _add_store(p, index=True)
    p.add_argument("file", type=Path)
    p.add_argument("--target-lang", required=True)
    p.add_argument("--lang", help="language of FILE (default: by extension)")
    _add_retrieval(p)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("eval", help="accuracy@1 / recall@10 over parallel pairs")
    p.add_argument("--store", type=Path)
    p.add_argument("--index", type=Path)
    p.add_argument("--pairs", type=Path, help="source_id<TAB>translation_id file")
    p.add_argument("--smoke", action="store_true", help="use the bundled Java/C# smoke set")
    p.add_argument("--pad", type=_non_negative_int, default=0, help="synthetic distractors added to the smoke store")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--buckets", type=_positive_int, default=DEFAULT_BUCKETS, help="index buckets (smoke mode)")
    p.add_argument("--repeats", type=_positive_int, default=3)
    p.add_argument("--workers", type=_positive_int, default=1, help="parallel queries; disables timing")
    p.add_argument("--json", action="store_true", help="print the JSON report instead of the table")
    p.add_argument("--report", type=Path, help="also write the JSON report here")
    _add_retrieval(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="time index probing against baselines on a synthetic corpus")
    p.add_argument("--n", type=_positive_int, default=100_000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--buckets", type=_positive_int, default=DEFAULT_BUCKETS)
    p.add_argument("--queries", type=_positive_int, default=20)
    p.add_argument("--repeats", type=_positive_int, default=3)
    p.add_argument("--store", type=Path, help="keep (or reuse) the synthetic store here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("stats", help="summarise a store and its index")
    _add_store(p, index=True)
    p.add_argument("--top", type=_positive_int, default=10, help="path types to summarise")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="rpt: %(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    if getattr(args, "k", None) is not None and getattr(args, "k1", None) is not None and args.k > args.k1:
        parser.error("--k must not exceed --k1")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"rpt: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (RptError, OSError) as exc:
        print(f"rpt: error: {exc}", file=sys.stderr)
        return EXIT_OPERATIONAL


if __name__ == "__main__":
    sys.exit(main())

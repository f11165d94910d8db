"""Command-line entry point for the whole toolchain.

Subcommands: clean, dedupe, split, stats, gen, segment, classify, extract,
eval. Exit codes: 0 success, 1 completed run with page failures, 2 usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import json
import shutil
import sys
from pathlib import Path

from . import corpus as corpus_mod
from . import syngen
from .classifier import classify_heuristic, classify_external, make_request
from .dom import parse_html, serialize_html
from .labeler_client import open_labeler
from .pipeline import PipelineConfig, run_corpus, run_manifest
from .report import (
    build_report,
    load_predictions,
    render_report,
    write_predictions,
)
from .segmenter import DEFAULT_TAU


def _add_labeler_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--labeler-endpoint", help="HTTP URL or subprocess command")
    p.add_argument("--tau", type=float, default=DEFAULT_TAU)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="listpage", description="multi-record list-page extraction toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("clean", help="strip script/style from HTML files")
    p.add_argument("files", nargs="+", type=Path)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("dedupe", help="drop pages repeating >25%% of seen records")
    p.add_argument("corpus", type=Path)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("split", help="domain-disjoint train/test split")
    p.add_argument("corpus", type=Path)
    p.add_argument("--ratio", type=float, default=0.75)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("stats", help="attribute frequency table")
    p.add_argument("corpus", type=Path)

    p = sub.add_parser("gen", help="generate a synthetic annotated corpus")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--pages", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--templates", default=",".join(syngen.TEMPLATES),
        help="comma-separated template names",
    )
    p.add_argument("--noise", default="", help="comma-separated of nav,footer,ads")
    p.add_argument("--dropout", type=float, default=0.0)
    p.add_argument("--multi-tag", default="1,2", help="min,max tags per record")
    p.add_argument("--churn", action="store_true", help="randomize class names")
    p.add_argument("--duplicates", type=float, default=0.0)
    p.add_argument("--domains", type=int, default=8)

    p = sub.add_parser("segment", help="emit record boundaries per page")
    p.add_argument("corpus", type=Path)
    p.add_argument("--segmenter", choices=["mdr", "external"], default="mdr")
    p.add_argument("--out", type=Path, required=True)
    _add_labeler_flags(p)

    p = sub.add_parser("classify", help="emit node labels per page")
    p.add_argument("corpus", type=Path)
    p.add_argument(
        "--classifier", choices=["heuristic", "external"], default="heuristic"
    )
    p.add_argument("--out", type=Path, required=True)
    _add_labeler_flags(p)

    p = sub.add_parser("extract", help="run a pipeline end to end")
    p.add_argument("corpus", type=Path)
    p.add_argument(
        "--pipeline", choices=["parallel", "sequential"], default="sequential"
    )
    p.add_argument("--segmenter", choices=["mdr", "external"], default="mdr")
    p.add_argument(
        "--classifier", choices=["heuristic", "external"], default="heuristic"
    )
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path, required=True)
    _add_labeler_flags(p)

    p = sub.add_parser("eval", help="score predictions against a corpus")
    p.add_argument("--pred", type=Path, required=True)
    p.add_argument("--ref", type=Path, required=True)
    p.add_argument("--out", type=Path, help="also write the report as JSON")

    return parser


def _load_corpus(path: Path):
    pages = corpus_mod.load_corpus(path)
    if not pages:
        raise SystemExit(f"listpage: no annotation files in {path}")
    return pages


def _make_config(args, mode: str | None = None) -> PipelineConfig:
    labeler = None
    if "external" in (getattr(args, "segmenter", ""), getattr(args, "classifier", "")):
        if not args.labeler_endpoint:
            print(
                "listpage: --labeler-endpoint required for external components",
                file=sys.stderr,
            )
            raise SystemExit(2)
        labeler = open_labeler(args.labeler_endpoint)
    return PipelineConfig(
        mode=mode or getattr(args, "pipeline", "sequential"),
        segmenter=getattr(args, "segmenter", "mdr"),
        classifier=getattr(args, "classifier", "heuristic"),
        tau=args.tau,
        labeler=labeler,
        workers=getattr(args, "workers", 1),
    )


def cmd_clean(args) -> int:
    args.out.mkdir(parents=True, exist_ok=True)
    for path in args.files:
        tree = corpus_mod.clean_html(parse_html(path.read_bytes()))
        (args.out / path.name).write_text(serialize_html(tree), encoding="utf-8")
    return 0


def _copy_page_files(corpus_dir: Path, page_ids: list[str], out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    for page_id in page_ids:
        for suffix in (".json", ".html"):
            src = corpus_dir / f"{page_id}{suffix}"
            if src.exists():
                shutil.copy(src, out_dir / src.name)


def cmd_dedupe(args) -> int:
    pages = _load_corpus(args.corpus)
    kept, dropped = corpus_mod.dedupe(pages)
    _copy_page_files(args.corpus, [p.page_id for p in kept], args.out)
    print(f"kept {len(kept)} pages, dropped {len(dropped)}: {dropped}")
    return 0


def cmd_split(args) -> int:
    pages = _load_corpus(args.corpus)
    train, test = corpus_mod.split_by_domain(pages, args.ratio, args.seed)
    _copy_page_files(args.corpus, [p.page_id for p in train], args.out / "train")
    _copy_page_files(args.corpus, [p.page_id for p in test], args.out / "test")
    manifest = {
        "ratio": args.ratio,
        "seed": args.seed,
        "train_pages": len(train),
        "test_pages": len(test),
        "train_domains": sorted({p.domain for p in train}),
        "test_domains": sorted({p.domain for p in test}),
    }
    (args.out / "split.json").write_text(json.dumps(manifest, indent=2))
    print(f"train {len(train)} pages / test {len(test)} pages")
    return 0


def cmd_stats(args) -> int:
    pages = _load_corpus(args.corpus)
    print(corpus_mod.stats_table(corpus_mod.compute_stats(pages)))
    return 0


def cmd_gen(args) -> int:
    lo, hi = (int(x) for x in args.multi_tag.split(","))
    cspec = syngen.CorpusSpec(
        n_pages=args.pages,
        seed=args.seed,
        templates=tuple(t for t in args.templates.split(",") if t),
        optional_attr_dropout=args.dropout,
        multi_tag_range=(lo, hi),
        noise=tuple(n for n in args.noise.split(",") if n),
        class_name_churn=args.churn,
        n_domains=args.domains,
        duplicate_fraction=args.duplicates,
    )
    pages = syngen.generate_corpus(cspec, args.out)
    print(f"wrote {len(pages)} pages to {args.out}")
    return 0


def cmd_segment(args) -> int:
    pages = _load_corpus(args.corpus)
    cfg = _make_config(args)
    failures = 0
    with open(args.out, "w", encoding="utf-8") as fh:
        for page in sorted(pages, key=lambda p: p.page_id):
            from .pipeline import _segment

            try:
                seg = _segment(page.html, page.page_id, cfg)
            except Exception as exc:
                print(f"page {page.page_id} failed: {exc}", file=sys.stderr)
                failures += 1
                continue
            fh.write(
                json.dumps(
                    {
                        "page_id": page.page_id,
                        "boundaries": [str(b) for b in seg.boundaries],
                    }
                )
                + "\n"
            )
    return 1 if failures else 0


def cmd_classify(args) -> int:
    pages = _load_corpus(args.corpus)
    cfg = _make_config(args)
    with open(args.out, "w", encoding="utf-8") as fh:
        for page in sorted(pages, key=lambda p: p.page_id):
            if cfg.classifier == "heuristic":
                labels = classify_heuristic(page.html)
            else:
                request = make_request(page.html, "page", page.page_id)
                labels = classify_external(cfg.labeler, request)
            fh.write(
                json.dumps(
                    {
                        "page_id": page.page_id,
                        "labels": [
                            {"xpath": str(n.xpath), "label": n.label, "text": n.text}
                            for n in labels
                        ],
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
    return 0


def cmd_extract(args) -> int:
    pages = _load_corpus(args.corpus)
    cfg = _make_config(args)
    run = run_corpus(pages, cfg)
    args.out.mkdir(parents=True, exist_ok=True)
    write_predictions(run.results, args.out / "extractions.jsonl")
    manifest = run_manifest(run, cfg)
    (args.out / "manifest.json").write_text(json.dumps(manifest, indent=2))
    if run.failed:
        print(f"{len(run.failed)} pages failed", file=sys.stderr)
        return 1
    return 0


def cmd_eval(args) -> int:
    pages = _load_corpus(args.ref)
    predictions = load_predictions(args.pred)
    report = build_report(pages, predictions)
    print(render_report(report))
    if args.out:
        args.out.write_text(json.dumps(report, indent=2))
    return 0


_COMMANDS = {
    "clean": cmd_clean,
    "dedupe": cmd_dedupe,
    "split": cmd_split,
    "stats": cmd_stats,
    "gen": cmd_gen,
    "segment": cmd_segment,
    "classify": cmd_classify,
    "extract": cmd_extract,
    "eval": cmd_eval,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"listpage: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

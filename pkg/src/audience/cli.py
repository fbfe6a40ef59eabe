"""Command-line entry point: ``audience <subcommand> ...``.

Exit status is 0 on success, 1 on data errors and 2 on usage errors.  Tables
go to ``--out`` as CSV or JSON together with a ``<command>.manifest.json``
recording input hashes, flags, seed and package version.  Human-readable
summaries are logged to stderr (level from ``AUDIENCE_LOG_LEVEL``).
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import os
import sys
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .config import AnalysisConfig
from .errors import AudienceError
from .factorization import (
    DEFAULT_K,
    DEFAULT_LAMBDA,
    DEFAULT_MAX_ITERS,
    DEFAULT_TOL,
    FactorModel,
    als_fit,
    embedding_export,
    most_similar,
    performance_similarity,
    recommend_top_k,
)
from .ingest import build_matrix, read_catalog, read_transactions, student_flags
from .lifecycle import STATES, assign_states, churn_summary, fit_transitions, season_of
from .reports import activity_durations, genre_breakdown, purchase_heatmap, revenue_composition
from .stylometrics import style_report
from .synth import GeneratorConfig, generate

logger = logging.getLogger("audience")


class Output:
    """Collects written files for one command and writes its manifest."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.dir = Path(args.out)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.fmt = args.format
        self.files: list[str] = []

    def table(self, name: str, rows: list[dict]) -> Path:
        path = self.dir / f"{name}.{self.fmt}"
        if self.fmt == "json":
            path.write_text(json.dumps(rows, indent=1) + "\n", encoding="utf-8")
        else:
            with open(path, "w", newline="", encoding="utf-8") as fh:
                fields = list(rows[0]) if rows else []
                w = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
                w.writeheader()
                w.writerows(rows)
        self.files.append(path.name)
        return path

    def document(self, name: str, doc: dict) -> Path:
        path = self.dir / f"{name}.json"
        path.write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
        self.files.append(path.name)
        return path

    def register(self, path: Path):
        self.files.append(str(Path(path).relative_to(self.dir)))

    def manifest(self):
        a = self.args
        flags = {k: v for k, v in vars(a).items() if k not in ("func", "out") and v is not None}
        inputs = {}
        for key in ("transactions", "catalog", "model", "config"):
            p = getattr(a, key, None)
            if p:
                inputs[key] = {"path": str(p), "sha256": _sha256(p)}
        doc = {
            "command": a.command,
            "version": __version__,
            "seed": getattr(a, "seed", None),
            "flags": flags,
            "inputs": inputs,
            "outputs": self.files,
        }
        path = self.dir / f"{a.command}.manifest.json"
        path.write_text(json.dumps(doc, indent=1, default=str) + "\n", encoding="utf-8")


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _config(args) -> AnalysisConfig:
    return AnalysisConfig.from_json(args.config) if args.config else AnalysisConfig()


def _load(args, need_catalog=True):
    tx, tdiag = read_transactions(args.transactions, strict=args.strict)
    catalog, cdiag = [], []
    if need_catalog:
        catalog, cdiag = read_catalog(args.catalog, strict=args.strict,
                                      descriptions_root=args.descriptions_dir)
    for d in tdiag:
        logger.warning("transactions %s", d)
    for d in cdiag:
        logger.warning("catalog %s", d)
    return tx, catalog, tdiag, cdiag


# -- subcommands --------------------------------------------------------------

def cmd_synth(args, out: Output):
    config = GeneratorConfig(
        seed=args.seed,
        n_customers=args.customers,
        n_performances=args.performances,
        latent_dim=args.latent_dim,
        student_fraction=args.student_fraction,
        student_magnitude_scale=args.student_scale,
        single_purchase_target=args.single_purchase,
        readability_vertex=args.vertex,
        years=tuple(args.years),
        subscription_fraction=args.subscription_fraction,
    )
    ds = generate(config)
    for path in ds.write(out.dir).values():
        out.register(path)
    logger.info("wrote %d transactions, %d performances", len(ds.transactions), len(ds.catalog))


def cmd_ingest(args, out: Output):
    tx, catalog, tdiag, cdiag = _load(args)
    diags = [{"table": "transactions", "row": d.row, "message": d.message} for d in tdiag]
    diags += [{"table": "catalog", "row": d.row, "message": d.message} for d in cdiag]
    out.table("diagnostics", diags)
    matrix = build_matrix(tx, catalog, exclude_subscriptions=args.exclude_subscriptions)
    out.document("ingest_summary", {
        "transactions": len(tx),
        "performances": len(catalog),
        "customers": matrix.shape[0],
        "bought_cells": int(matrix.bought.sum()),
        "missing_cells": int(matrix.missing.sum()),
        "diagnostics": len(diags),
    })
    logger.info("%d transactions, %d performances, %d diagnostics", len(tx), len(catalog), len(diags))


def cmd_report(args, out: Output):
    tx, catalog, _, _ = _load(args)
    records, share = activity_durations(tx)
    out.table("activity", [
        {"account_id": r.account_id, "first_purchase": r.first_purchase.isoformat(),
         "last_purchase": r.last_purchase.isoformat(), "span_days": r.span_days,
         "single_purchase": r.single_purchase}
        for r in records
    ])
    revenue = revenue_composition(tx)
    out.table("revenue", [{"price_group": g, "share": s} for g, s in revenue.items()])
    year = args.year if args.year is not None else max(t.order_date.year for t in tx)
    for label, flag in (("all", None), ("subscription", True), ("non_subscription", False)):
        grid = purchase_heatmap(tx, year, subscription_only=flag)
        out.table(f"heatmap_{label}_{year}", [
            {"week": w, **{f"day{d + 1}": int(grid[w, d]) for d in range(7)}}
            for w in range(grid.shape[0])
        ])
    out.table("genres", [asdict(g) for g in genre_breakdown(tx, catalog)])
    out.document("report_summary", {"single_purchase_share": share, "heatmap_year": year,
                                    "revenue_composition": revenue})
    logger.info("single-purchase share %.4f", share)


def cmd_style(args, out: Output):
    tx, catalog, _, _ = _load(args)
    rep = style_report(catalog, tx, _config(args))
    out.table("style_records", [asdict(r) for r in rep.records])
    out.document("style_summary", {
        "correlations": rep.correlations,
        "fits": {m: {"degree": f.degree, "coefficients": list(f.coefficients), "rss": f.rss}
                 for m, f in rep.fits.items()},
        "readability_vertex": rep.readability_vertex,
        "diagnostics": rep.diagnostics,
    })
    logger.info("correlations %s", rep.correlations)


def cmd_train(args, out: Output):
    tx, catalog, _, _ = _load(args)
    matrix = build_matrix(tx, catalog, exclude_subscriptions=args.exclude_subscriptions)
    model, report = als_fit(matrix, k=args.k, lam=args.lam, seed=args.seed,
                            max_iters=args.max_iters, tol=args.tol)
    model.metadata["exclude_subscriptions"] = args.exclude_subscriptions
    path = out.dir / "model.json"
    model.save(path)
    out.register(path)
    out.document("fit_report", report.to_dict())
    logger.info("trained k=%d in %d iterations, rmse %.4f", model.k, report.iterations, report.rmse)


def cmd_recommend(args, out: Output):
    model = FactorModel.load(args.model)
    purchased = set()
    if args.transactions:
        tx, _ = read_transactions(args.transactions, strict=args.strict)
        purchased = {t.performance_id for t in tx if t.account_id == args.customer}
    candidates = args.candidates.split(",") if args.candidates else None
    recs = recommend_top_k(model, args.customer, candidates, args.n, purchased)
    rows = [{"rank": r + 1, "performance_id": p, "score": s} for r, (p, s) in enumerate(recs)]
    out.table("recommendations", rows)
    _echo(rows, args.format)


def cmd_similar(args, out: Output):
    model = FactorModel.load(args.model)
    if args.other:
        rows = [{"performance_id": args.performance, "other": args.other,
                 "cosine": performance_similarity(model, args.performance, args.other)}]
    else:
        rows = [{"performance_id": args.performance, "other": p, "cosine": c}
                for p, c in most_similar(model, args.performance, args.n)]
    out.table("similarity", rows)
    _echo(rows, args.format)


def cmd_embed(args, out: Output):
    model = FactorModel.load(args.model)
    flags, groups = {}, {}
    if args.transactions:
        tx, _ = read_transactions(args.transactions, strict=args.strict)
        flags = student_flags(tx, _config(args))
    if args.catalog:
        catalog, _ = read_catalog(args.catalog, strict=args.strict,
                                  descriptions_root=args.descriptions_dir)
        groups = {p.performance_id: p.subscription_series or p.genre for p in catalog}
    rows = embedding_export(model, args.dims, flags, groups)
    out.table("embeddings", [
        {"entity": r.entity, "kind": r.kind, "group": r.group,
         **{f"dim{d + 1}": v for d, v in enumerate(r.coordinates)}, "magnitude": r.magnitude}
        for r in rows
    ])


def cmd_lifecycle(args, out: Output):
    tx, _, _, _ = _load(args, need_catalog=False)
    if args.years:
        year_range = tuple(args.years)
    else:
        labels = [season_of(t.order_date, args.season_start_month) for t in tx]
        year_range = (min(labels), max(labels))
    seqs = assign_states(tx, year_range, args.season_start_month)
    model = fit_transitions(seqs)
    summary = churn_summary(model, seqs)
    out.table("transitions", [
        {"from": s, **{t: (None if v != v else float(v)) for t, v in zip(STATES, row)}}
        for s, row in zip(STATES, model.transition_probs)
    ])
    out.table("sequences", [
        {"account_id": s.account_id, "year": y, "state": st}
        for s in seqs for y, st in zip(s.years, s.states)
    ])
    out.document("lifecycle_summary", {
        "year_range": list(year_range),
        "transition_counts": model.transition_counts.tolist(),
        "undefined_rows": list(model.undefined_rows),
        "cohort_sizes": {str(k): v for k, v in model.cohort_sizes.items()},
        "inactive_share": summary.inactive_share,
        "return_rate": summary.return_rate,
        "new_customers": {str(k): v for k, v in summary.new_customers.items()},
        "resurrections": summary.resurrections,
    })
    if summary.resurrections:
        logger.warning("%d purchase(s) after death restarted as new sequences", summary.resurrections)


def _echo(rows, fmt):
    if fmt == "json":
        sys.stdout.write(json.dumps(rows, indent=1) + "\n")
    else:
        w = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="audience", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="output", help="output directory")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--config", help="JSON file with student promotion codes / abbreviations")
    common.add_argument("--strict", action="store_true", help="abort on any row diagnostic")

    def data(p, catalog=True, required=True):
        p.add_argument("--transactions", required=required)
        if catalog:
            p.add_argument("--catalog", required=required)
        p.add_argument("--descriptions-dir", default=None,
                       help="root for description_path (default: the catalog's directory)")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", parents=[common], help="generate a synthetic dataset")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--customers", type=int, default=2000)
    p.add_argument("--performances", type=int, default=60)
    p.add_argument("--latent-dim", type=int, default=3)
    p.add_argument("--student-fraction", type=float, default=0.15)
    p.add_argument("--student-scale", type=float, default=0.5)
    p.add_argument("--single-purchase", type=float, default=0.66)
    p.add_argument("--subscription-fraction", type=float, default=0.056)
    p.add_argument("--vertex", type=float, default=15.0)
    p.add_argument("--years", type=int, nargs=2, default=[2011, 2015], metavar=("FIRST", "LAST"))
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("ingest", parents=[common], help="validate inputs and summarize the matrix")
    data(p)
    p.add_argument("--exclude-subscriptions", action="store_true")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("report", parents=[common], help="descriptive statistics")
    data(p)
    p.add_argument("--year", type=int, default=None, help="heatmap year (default: latest)")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("style", parents=[common], help="description style vs. sales")
    data(p)
    p.set_defaults(func=cmd_style)

    p = sub.add_parser("train", parents=[common], help="fit the factor model")
    data(p)
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--lambda", dest="lam", type=float, default=DEFAULT_LAMBDA)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--exclude-subscriptions", action="store_true")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("recommend", parents=[common], help="top-n shows for a customer")
    p.add_argument("--model", required=True)
    p.add_argument("--customer", required=True)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--candidates", help="comma-separated performance ids (default: all)")
    p.add_argument("--transactions", help="exclude the customer's past purchases")
    p.set_defaults(func=cmd_recommend)

    p = sub.add_parser("similar", parents=[common], help="cosine similarity of performances")
    p.add_argument("--model", required=True)
    p.add_argument("--performance", required=True)
    p.add_argument("--other", help="compare against one performance instead of ranking all")
    p.add_argument("--n", type=int, default=10)
    p.set_defaults(func=cmd_similar)

    p = sub.add_parser("embed", parents=[common], help="export latent embeddings")
    p.add_argument("--model", required=True)
    p.add_argument("--dims", type=int, default=3)
    data(p, required=False)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("lifecycle", parents=[common], help="annual lifecycle Markov chain")
    data(p, catalog=False)
    p.add_argument("--years", type=int, nargs=2, metavar=("FIRST", "LAST"))
    p.add_argument("--season-start-month", type=int, default=1, choices=range(1, 13))
    p.set_defaults(func=cmd_lifecycle)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(
        level=os.environ.get("AUDIENCE_LOG_LEVEL", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    args = build_parser().parse_args(argv)
    for n in ("n", "k", "dims", "max_iters", "customers", "performances"):
        if getattr(args, n, 1) is not None and getattr(args, n, 1) < 1:
            build_parser().error(f"--{n.replace('_', '-')} must be >= 1")
    try:
        out = Output(args)
        args.func(args, out)
        out.manifest()
    except (AudienceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: a thin client over the workflow layer.

Subcommands: tour, bound, neighbors, classify, export, serve. Every run
with fixed inputs and seeds writes byte-identical primary outputs (files);
wall-clock fields appear only in summaries and timing columns.
"""

from __future__ import annotations

import argparse
import csv
import sys

from . import workflows
from .errors import WordringError

_METHOD_CHOICES = workflows.METHODS + ("all",)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wordring",
        description="Order a vocabulary along a near-optimal cyclic tour of its "
        "embedding vectors, certify the tour, and use it for neighbor lookup "
        "and document classification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tour", help="compute a word tour and write it to a file")
    p.add_argument("--embeddings", required=True, help="word-per-line embedding text file")
    p.add_argument("--max-vocab", type=int, default=None, help="truncate to the first N words")
    p.add_argument("--candidates", type=int, default=8, metavar="K",
                   help="nearest neighbors per node in the candidate graph (default 8)")
    p.add_argument("--budget", type=int, default=None, help="max improving moves (default unlimited)")
    p.add_argument("--time-limit", type=float, default=None, help="local search time limit, seconds")
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads for the candidate build; results are identical for any value")
    p.add_argument("--output", required=True, help="tour file to write")

    p = sub.add_parser("bound", help="certify a tour with a one-tree lower bound")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--tour", required=True)
    p.add_argument("--iterations", type=int, default=50, help="ascent iterations (default 50)")
    p.add_argument("--max-vocab", type=int, default=None)

    p = sub.add_parser("neighbors", help="look up the words around a query word on the tour")
    p.add_argument("--tour", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--radius", type=int, default=5)
    p.add_argument("--server", default=None, metavar="URL",
                   help="query a running wordring service instead of reading the file locally")

    p = sub.add_parser("classify", help="blurred bag-of-words document classification")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--train", required=True, help="corpus: label<TAB>tokens per line")
    p.add_argument("--test", required=True)
    p.add_argument("--method", action="append", choices=_METHOD_CHOICES, default=None,
                   help="repeatable; 'all' runs every method (default: bow)")
    p.add_argument("--tour", default=None, help="tour file, required for method blurred:tour")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for CV folds and the random projection (default 0)")
    p.add_argument("--width", type=int, default=10, metavar="W", help="blur half-width (default 10)")
    p.add_argument("--k", type=int, default=None,
                   help="pin the neighbor count instead of cross-validating (needs --variance)")
    p.add_argument("--variance", type=float, default=None,
                   help="pin the kernel variance instead of cross-validating (needs --k)")
    p.add_argument("--max-vocab", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=("csv", "table"), default="table")
    p.add_argument("--output", default=None, help="write the report here instead of stdout")

    p = sub.add_parser("export", help="export a TSPLIB instance with floor(1000*L2) weights")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--max-vocab", type=int, default=None)
    p.add_argument("--output", required=True)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _classify_report(rows: list[workflows.ClassifyRun], fmt: str) -> str:
    header = ["method", "k", "variance", "width", "cv_error_pct", "test_error_pct",
              "mean_comparison_ns", "train_docs", "test_docs", "oov_dropped"]
    records = [
        [r.method, r.k, f"{r.variance:g}", r.width,
         "" if r.cv_error_pct is None else f"{r.cv_error_pct:.4f}",
         f"{r.test_error_pct:.4f}", f"{r.mean_comparison_ns:.1f}",
         r.train_docs, r.test_docs, r.oov_dropped]
        for r in rows
    ]
    if fmt == "csv":
        import io

        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(records)
        return buf.getvalue()
    widths = [max(len(str(h)), *(len(str(rec[i])) for rec in records)) for i, h in enumerate(header)]
    lines = ["  ".join(str(h).ljust(widths[i]) for i, h in enumerate(header))]
    for rec in records:
        lines.append("  ".join(str(v).ljust(widths[i]) for i, v in enumerate(rec)))
    return "\n".join(lines) + "\n"


def _neighbors_via_server(server: str, tour: str, word: str, radius: int) -> list[str]:
    import os

    import httpx

    base = server.rstrip("/")
    with httpx.Client(base_url=base, timeout=30.0) as client:
        resp = client.post("/tours", json={"path": os.path.abspath(tour)})
        resp.raise_for_status()
        name = resp.json()["name"]
        resp = client.get(f"/tours/{name}/neighbors", params={"word": word, "radius": radius})
        if resp.status_code != 200:
            raise WordringError(resp.json().get("detail", f"server error {resp.status_code}"))
        return resp.json()["words"]


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "tour":
            run = workflows.run_tour(
                args.embeddings,
                args.output,
                max_vocab=args.max_vocab,
                candidates=args.candidates,
                max_moves=args.budget,
                time_limit=args.time_limit,
                threads=args.threads,
            )
            print(f"n={run.n} d={run.d} cost={run.cost:.6f} seconds={run.seconds:.3f}")
            if run.budget_exhausted:
                print("note: budget exhausted, tour is best-so-far", file=sys.stderr)
        elif args.command == "bound":
            run = workflows.run_bound(
                args.embeddings, args.tour, iterations=args.iterations, max_vocab=args.max_vocab
            )
            print(f"tour_cost={run.tour_cost:.6f}")
            print(f"lower_bound={run.lower_bound:.6f}")
            print(f"ratio={run.ratio:.6f}")
        elif args.command == "neighbors":
            if args.server:
                words = _neighbors_via_server(args.server, args.tour, args.word, args.radius)
            else:
                words = workflows.run_neighbors(args.tour, args.word, args.radius)
            print(" ".join(words))
        elif args.command == "classify":
            methods = args.method or ["bow"]
            if "all" in methods:
                methods = list(workflows.METHODS)
            rows = workflows.run_classify(
                args.embeddings,
                args.train,
                args.test,
                methods=methods,
                tour_path=args.tour,
                seed=args.seed,
                width=args.width,
                max_vocab=args.max_vocab,
                k=args.k,
                variance=args.variance,
                threads=args.threads,
            )
            report = _classify_report(rows, args.format)
            if args.output:
                with open(args.output, "w", encoding="utf-8", newline="") as fh:
                    fh.write(report)
            else:
                sys.stdout.write(report)
        elif args.command == "export":
            run = workflows.run_export(args.embeddings, args.output, max_vocab=args.max_vocab)
            print(f"wrote {run.output} (n={run.n}, d={run.d})")
        elif args.command == "serve":
            import uvicorn

            from .service import create_app

            uvicorn.run(create_app(), host=args.host, port=args.port)
    except (WordringError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: ``ldpath analyze|eval|lookup``."""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .context import EvalConfig, ContextEvaluator, LookupBudgetExceeded, NotWebBoundedError, eval_ctx_reference
from .multiset import SolutionMultiset
from .ntriples import NTriplesError, parse_ntriples, parse_term
from .parser import QuerySyntaxError, parse_query
from .patterns import vars_of
from .rdf import Term
from .safety import is_web_safe
from .standard import eval_fullweb, eval_graph_pattern_standard
from .web import FixtureError, FixtureWeb, OmniscienceRequiredError, load_fixture

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_UNSAFE = 2
EXIT_BUDGET = 3
EXIT_IO = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ldpath", description="Property path queries over a Web of Linked Data.")
    sub = ap.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="check whether a query is Web-safe")
    analyze.add_argument("query")

    ev = sub.add_parser("eval", help="evaluate a query")
    ev.add_argument("query")
    ev.add_argument("--semantics", choices=["ctx", "ctx-ref", "fullweb", "std"], default="ctx")
    src = ev.add_mutually_exclusive_group()
    src.add_argument("--wold", metavar="MANIFEST", help="JSON manifest of a fixture Web")
    src.add_argument("--graph", metavar="NT_FILE", help="single N-Triples file (std semantics)")
    src.add_argument("--http", action="store_true", help="dereference IRIs on the live Web")
    ev.add_argument("--format", choices=["json-lines", "tsv"], default="json-lines")
    ev.add_argument("--max-lookups", type=_positive_int, metavar="N")
    ev.add_argument("--force", action="store_true", help="evaluate even if the query is not Web-safe")
    ev.add_argument("--trace", action="store_true", help="print the evaluation trace to stderr")

    lk = sub.add_parser("lookup", help="show the context of an IRI")
    lk.add_argument("iri", help="an IRI, with or without angle brackets")
    lk_src = lk.add_mutually_exclusive_group(required=True)
    lk_src.add_argument("--wold", metavar="MANIFEST")
    lk_src.add_argument("--http", action="store_true")
    return ap


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "analyze":
            return cmd_analyze(args.query)
        if args.command == "eval":
            return cmd_eval(args)
        return cmd_lookup(args, ap)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


def _parse(text: str):
    try:
        return parse_query(text)
    except QuerySyntaxError as exc:
        raise CliError(f"syntax error: {exc}", EXIT_PARSE) from None


def cmd_analyze(text: str) -> int:
    report = is_web_safe(_parse(text))
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK if report.web_safe else EXIT_UNSAFE


def _open_web(args):
    if args.http:
        from .http import HttpWeb

        return HttpWeb()
    if not args.wold:
        raise CliError("a source is required: --wold MANIFEST or --http", EXIT_IO)
    try:
        return FixtureWeb(load_fixture(args.wold))
    except FixtureError as exc:
        raise CliError(str(exc), EXIT_IO) from None


def cmd_eval(args) -> int:
    pattern = _parse(args.query)
    web = None
    if args.semantics == "std":
        if not args.graph:
            raise CliError("std semantics needs --graph NT_FILE", EXIT_IO)
        try:
            with open(args.graph, encoding="utf-8") as fh:
                graph = parse_ntriples(fh.read(), source=args.graph)
        except OSError as exc:
            raise CliError(f"cannot read {args.graph}: {exc.strerror}", EXIT_IO) from None
        except NTriplesError as exc:
            raise CliError(str(exc), EXIT_IO) from None
        result = eval_graph_pattern_standard(pattern, graph)
    else:
        if args.graph:
            raise CliError(f"--graph only applies to std semantics; use --wold for {args.semantics}", EXIT_IO)
        web = _open_web(args)
        result = _eval_on_web(pattern, web, args)
    _emit(result, sorted(v.name for v in vars_of(pattern)), args.format)
    if web is not None:
        print(web.ledger.summary(), file=sys.stderr)
    return EXIT_OK


def _eval_on_web(pattern, web, args) -> SolutionMultiset:
    try:
        if args.semantics == "ctx-ref":
            return eval_ctx_reference(pattern, web)
        if args.semantics == "fullweb":
            return eval_fullweb(pattern, web)
        cfg = EvalConfig(max_lookups=args.max_lookups, force_unsafe=args.force, trace=args.trace)
        evaluator = ContextEvaluator(web, cfg)
        try:
            return evaluator.evaluate(pattern)
        finally:
            for line in evaluator.trace_lines:
                print(line, file=sys.stderr)
    except OmniscienceRequiredError as exc:
        raise CliError(f"{args.semantics} semantics needs a fixture Web: {exc}", EXIT_UNSAFE) from None
    except NotWebBoundedError as exc:
        print(web.ledger.summary(), file=sys.stderr)
        raise CliError(f"{exc} (use --force to evaluate anyway on a fixture)", EXIT_UNSAFE) from None
    except LookupBudgetExceeded as exc:
        print(web.ledger.summary(), file=sys.stderr)
        raise CliError(str(exc), EXIT_BUDGET) from None


def result_rows(result: SolutionMultiset) -> list[dict]:
    rows = [
        {"bindings": {v.name: mu[v].n3() for v in sorted(mu)}, "cardinality": n}
        for mu, n in result.items()
    ]
    rows.sort(key=lambda r: json.dumps(r["bindings"], sort_keys=True))
    return rows


def _emit(result: SolutionMultiset, names: list[str], fmt: str) -> None:
    rows = result_rows(result)
    if fmt == "json-lines":
        for row in rows:
            print(json.dumps(row, sort_keys=True, ensure_ascii=False))
        return
    print("\t".join([f"?{n}" for n in names] + ["cardinality"]))
    for row in rows:
        print("\t".join([row["bindings"].get(n, "") for n in names] + [str(row["cardinality"])]))


def cmd_lookup(args, ap: argparse.ArgumentParser) -> int:
    text = args.iri.strip()
    if not text.startswith(("<", '"', "_:")):
        text = f"<{text}>"
    try:
        u = parse_term(text)
    except ValueError:
        ap.error(f"not an IRI: {args.iri}")
    if not isinstance(u, Term) or not u.is_iri:
        ap.error(f"not an IRI: {args.iri}")
    web = _open_web(args)
    doc = web.lookup(u)
    if doc is None:
        print(f"{u.n3()}: not retrievable")
    else:
        context = [t for t in doc.triples.sorted() if t.subject == u]
        for t in context:
            print(t.n3())
        print(f"# {len(context)} context triples of {len(doc.triples)} document triples")
    print(web.ledger.summary(), file=sys.stderr)
    return EXIT_OK

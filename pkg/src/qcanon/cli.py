"""Command line front end.

    qcanon roots      --type A2
    qcanon canonical  --type A2 --bound 4 [--cache-dir DIR]
    qcanon transition --type A2 --word 1,2,1 --bound 6 [--format csv]
    qcanon verify     --type B2 --bound 6 --suite all [--jobs 4]

Output on stdout is deterministic for identical arguments.  Exit status:
0 success, 1 failed assertion or integrity error, 2 usage or domain
error, 3 capacity exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .canon import CanonicalBasis, SliceCache, dump_canonical
from .errors import CapacityError, DomainError, IntegrityError
from .qfield import render
from .rootdata import (
    cartan_type,
    format_word,
    longest_element_words,
    parse_word,
    positive_roots_of,
    reference_word,
)
from .transition import check_row, transition_table
from .verify import SUITES, overall, run_suite

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3

log = logging.getLogger("qcanon")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _tuple_key(c) -> str:
    return "(" + ",".join(map(str, c)) + ")"


def _cache(args, datum, word):
    root = args.cache_dir or os.environ.get("QCANON_CACHE_DIR")
    if not root:
        return None
    cache = SliceCache(root, datum, word)
    if cache.stale:
        print(f"notice: slice cache {cache.path} had an old format version and is being rebuilt",
              file=sys.stderr)
    return cache


def _canonical_basis(args, datum):
    return CanonicalBasis(datum, args.bound, cache=_cache(args, datum, reference_word(datum)))


def _words(args, datum) -> list:
    if args.word in (None, "all"):
        return longest_element_words(datum)
    w = parse_word(args.word, datum)
    if w not in longest_element_words(datum):
        raise DomainError(f"{format_word(w)} is not a reduced word of the longest element of {datum}")
    return [w]


def _jobs(args) -> int:
    if args.jobs is None:
        return os.cpu_count() or 1
    if args.jobs < 1:
        raise DomainError("--jobs must be at least 1")
    return args.jobs


def _map(fn, tasks, jobs):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
        futures = [pool.submit(fn, *t) for t in tasks]
        return [f.result() for f in futures]


def _emit(payload: dict, rows: list, header: list, fmt: str):
    if fmt == "json":
        sys.stdout.write(json.dumps({"schema_version": SCHEMA_VERSION, **payload},
                                    sort_keys=True, indent=1) + "\n")
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        sys.stdout.write(buf.getvalue())


# ---------------------------------------------------------------------------
# commands

def cmd_roots(args) -> int:
    datum = cartan_type(args.type)
    words = longest_element_words(datum)
    entries = []
    rows = []
    for w in words:
        roots = positive_roots_of(datum, w)
        entries.append({"word": format_word(w), "roots": [list(b) for b in roots]})
        for k, (a, b) in enumerate(zip(w, roots), 1):
            rows.append([datum.type_label, format_word(w), k, a, " ".join(map(str, b))])
    payload = {"command": "roots", "type": datum.type_label, "cartan": [list(r) for r in datum.cartan],
               "d": list(datum.d), "words": entries}
    _emit(payload, rows, ["type", "word", "position", "letter", "root"], args.format)
    return EXIT_OK


def cmd_canonical(args) -> int:
    datum = cartan_type(args.type)
    cb = _canonical_basis(args, datum)
    report = dump_canonical(cb)
    written = cb.save()
    if cb.cache is not None:
        print(f"cache: {cb.loaded} slices loaded, {written} written", file=sys.stderr)
    rows = []
    for s in report["slices"]:
        for b in s["labels"]:
            for e, v in b["pbw"].items():
                rows.append([report["type"], " ".join(map(str, s["weight"])), _tuple_key(b["datum"]),
                             " ".join(map(str, b["eps"])), " ".join(map(str, b["eps_star"])),
                             "(" + e.replace("_", ",") + ")", v])
    _emit({"command": "canonical", **report}, rows,
          ["type", "weight", "label", "eps", "eps_star", "pbw_tuple", "coefficient"], args.format)
    return EXIT_OK


def _transition_job(type_label, word, bound, cache_root):
    datum = cartan_type(type_label)
    cache = SliceCache(cache_root, datum, reference_word(datum)) if cache_root else None
    cb = CanonicalBasis(datum, bound, cache=cache)
    table = transition_table(cb, word, routes="both")
    rows = []
    for b in sorted(table.rows):
        direct = table.rows[b]
        formula = table.formula_rows[b]
        res = check_row(direct, table.leading[b])
        entries = []
        for d in sorted(set(direct) | set(formula)):
            dv, fv = direct.get(d), formula.get(d)
            entries.append({"tuple": list(d), "direct": render(dv) if dv is not None else "0",
                            "formula": render(fv) if fv is not None else "0", "agree": dv == fv})
        rows.append({"label": list(b), "leading": list(table.leading[b]), "agree": table.agree[b],
                     "unitriangular": res["unitriangular"], "positive": res["positive"],
                     "entries": entries})
    return {"word": format_word(word), "rows": rows, "all_agree": all(table.agree.values())}


def cmd_transition(args) -> int:
    datum = cartan_type(args.type)
    words = _words(args, datum)
    cache_root = args.cache_dir or os.environ.get("QCANON_CACHE_DIR")
    if cache_root:
        # the parent fills the cache; workers only read it
        cb = _canonical_basis(args, datum)
        for _ in cb.slices():
            pass
        cb.save()
    tables = _map(_transition_job, [(datum.type_label, w, args.bound, cache_root) for w in words],
                  _jobs(args))
    rows = []
    for t in tables:
        for r in t["rows"]:
            for e in r["entries"]:
                rows.append([datum.type_label, t["word"], _tuple_key(r["label"]), _tuple_key(r["leading"]),
                             _tuple_key(e["tuple"]), e["direct"], e["formula"], int(e["agree"])])
    ok = all(t["all_agree"] and all(r["unitriangular"] for r in t["rows"]) for t in tables)
    _emit({"command": "transition", "type": datum.type_label, "bound": args.bound, "tables": tables,
           "all_agree": ok}, rows,
          ["type", "word", "label", "leading", "tuple", "direct", "formula", "agree"], args.format)
    return EXIT_OK if ok else EXIT_FAIL


def _suite_job(suite, type_label, bound, words):
    datum = cartan_type(type_label)
    return run_suite(suite, datum, bound, words)


def cmd_verify(args) -> int:
    datum = cartan_type(args.type)
    words = _words(args, datum)
    suites = list(SUITES) if args.suite == "all" else [args.suite]
    results = _map(_suite_job, [(s, datum.type_label, args.bound, words) for s in suites], _jobs(args))
    reports = [r for rs in results for r in rs]
    for r in reports:
        print(r, file=sys.stderr)
    ok = overall(reports)
    rows = [[r.check, json.dumps(r.params, sort_keys=True), int(r.passed), int(r.asserted), r.count,
             len(r.failures)] for r in reports]
    _emit({"command": "verify", "type": datum.type_label, "bound": args.bound, "suite": args.suite,
           "passed": ok, "reports": [r.as_dict() for r in reports]}, rows,
          ["check", "params", "passed", "asserted", "count", "failures"], args.format)
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", required=True, help="Cartan type such as A2, B2, G2")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--cache-dir", default=None,
                        help="slice cache directory (default: $QCANON_CACHE_DIR, else no cache)")
    common.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")

    p = _Parser(prog="qcanon", description="Canonical bases and PBW transition coefficients of U_q(n^-).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("roots", parents=[common], help="reduced words of w0 and their root sequences")
    c = sub.add_parser("canonical", parents=[common], help="dump canonical basis slices")
    c.add_argument("--bound", type=int, default=4)
    t = sub.add_parser("transition", parents=[common], help="transition coefficients by both routes")
    t.add_argument("--word", default="all", help="comma-separated reduced word, or 'all'")
    t.add_argument("--bound", type=int, default=4)
    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--word", default="all", help="comma-separated reduced word, or 'all'")
    v.add_argument("--bound", type=int, default=4)
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    return p


COMMANDS = {"roots": cmd_roots, "canonical": cmd_canonical, "transition": cmd_transition,
            "verify": cmd_verify}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    if getattr(args, "bound", 1) < 1:
        print("error: --bound must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except CapacityError as e:
        print(f"capacity error: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except IntegrityError as e:
        print(f"integrity error: {e}", file=sys.stderr)
        return EXIT_FAIL
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

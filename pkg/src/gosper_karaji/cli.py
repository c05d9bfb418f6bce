"""Command-line front end.

Exit codes: 0 when a command completes (a FAIL decision and refuted errata
are results, not errors), 1 when an engine-generated identity fails
verification, 2 for usage, parse, domain and resource errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional, Sequence

from .corpus import CORPUS_ENV, CorpusError, append_records, default_corpus_path, identity_record, read_corpus
from .errata import errata_report, summary_table
from .errors import GosperKarajiError, ParseError
from .expr import to_latex, to_text
from .gosper import gosper_record, definite_sum
from .lsum import MAX_M, build_prefix_pair, generate_identity, present_identity, raw_text
from .parser import parse_term
from .sequences import derangement
from .verify import (
    DEFAULT_SEED,
    check_range,
    oracle_special_1d,
    oracle_special_2d,
    random_grid_trials,
    zeta_identity,
)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2
MAX_N = 10**5


def _m_list(text: str) -> list[int]:
    try:
        ms = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}") from None
    if not ms or any(not 1 <= m <= MAX_M for m in ms):
        raise argparse.ArgumentTypeError(f"orders must lie in [1, {MAX_M}]")
    return ms


def _n_max(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 1 <= n <= MAX_N:
        raise argparse.ArgumentTypeError(f"n-max must lie in [1, {MAX_N}]")
    return n


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _diagnose(exc: Exception, text: Optional[str], err) -> int:
    print(f"error: {exc}", file=err)
    if isinstance(exc, ParseError) and text is not None:
        raw = text.encode("utf-8")
        col = len(raw[: exc.offset].decode("utf-8", errors="ignore"))
        print(f"  {text}", file=err)
        print(f"  {' ' * col}^", file=err)
    return EXIT_USAGE


# -- subcommands ---------------------------------------------------------------------------------


def cmd_gosper(args, out, err) -> int:
    rec = gosper_record(args.term, lower=args.lower)
    if rec["status"] == "error":
        try:
            parse_term(args.term)
        except ParseError as exc:
            return _diagnose(exc, args.term, err)
        print(f"error: {rec['error']}", file=err)
        return EXIT_USAGE
    if args.format == "json":
        print(_dump(rec), file=out)
    elif args.format == "latex":
        if rec["status"] == "fail":
            print("\\text{FAIL}", file=out)
        else:
            t = parse_term(args.term)
            s = definite_sum(t, rec["lower"])
            print(f"\\sum_{{j={rec['lower']}}}^{{k}} t_j = {to_latex(s)}", file=out)
    else:
        print(f"term: {args.term}", file=out)
        if rec["status"] == "fail":
            print("result: FAIL (no hypergeometric antidifference)", file=out)
        else:
            print(f"antidifference: F(k) = {rec['antidifference']}  (k >= {rec['antidifference_start']})", file=out)
            print(f"definite sum: S(k) = {rec['definite_sum']}  (from k = {rec['lower']})", file=out)
    return EXIT_OK


def cmd_karaji(args, out, err) -> int:
    try:
        t = parse_term(args.term)
    except ParseError as exc:
        return _diagnose(exc, args.term, err)
    try:
        s = parse_term(args.s) if args.s else None
    except ParseError as exc:
        return _diagnose(exc, args.s, err)
    try:
        pair = build_prefix_pair(t, s, args.lower)
    except GosperKarajiError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    records, status = [], EXIT_OK
    for m in args.m:
        raw = generate_identity(pair, m)
        presented = present_identity(raw, args.basis)
        checks = [check_range(raw, args.n_max), check_range(presented, args.n_max)]
        ok = all(c.all_equal for c in checks)
        rec = identity_record(raw, presented)
        if not ok:
            status = EXIT_VERIFY
            bad = next(c for c in checks if not c.all_equal)
            print(f"error: order-{m} identity failed verification at n={bad.first_failure.n}", file=err)
        else:
            records.append(rec)
        if args.format == "json":
            print(_dump({**rec, "verified_to": args.n_max, "verified": ok}), file=out)
        elif args.format == "latex":
            print(rec["latex"], file=out)
        else:
            print(f"m = {m}", file=out)
            print(f"  raw:       {raw_text(raw)}", file=out)
            print(f"  presented: {rec['text']}", file=out)
            print(f"  verified for n = {raw.lower}..{args.n_max}: {'yes' if ok else 'NO'}", file=out)
    if args.corpus and records:
        append_records(args.corpus, records)
    return status


def cmd_verify(args, out, err) -> int:
    path = args.corpus or default_corpus_path()
    if not path:
        print(f"error: no corpus given (use --corpus or set {CORPUS_ENV})", file=err)
        return EXIT_USAGE
    count, failures = 0, []
    try:
        for line_no, raw, presented in read_corpus(path):
            count += 1
            for label, ident in (("raw", raw), ("presented", presented)):
                n_max = max(args.n_max, ident.lower)
                summary = check_range(ident, n_max)
                if not summary.all_equal:
                    failures.append((line_no, label, summary))
                    break
            if args.format == "json":
                failed = failures and failures[-1][0] == line_no
                print(_dump({"line": line_no, "m": raw.m, "t": to_text(raw.pair.t), "verified": not failed,
                             "first_failure": failures[-1][2].first_failure.to_json() if failed else None}),
                      file=out)
    except CorpusError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except GosperKarajiError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    for line_no, label, summary in failures:
        v = summary.first_failure
        print(f"line {line_no}: {label} identity fails first at n={v.n} "
              f"({v.side_a} != {v.side_b})", file=err)
    print(f"{count} identities checked, {len(failures)} failed", file=out if args.format != "json" else err)
    return EXIT_VERIFY if failures else EXIT_OK


_SPECIAL_2D = {
    "one": lambda i, j: 1,
    "binom": lambda i, j: math.comb(i, j),
    "sum": lambda i, j: i + j,
    "product": lambda i, j: i * j,
}


def cmd_oracle(args, out, err) -> int:
    lines = []
    if args.kind in ("grid2d", "grid3d"):
        dim = 2 if args.kind == "grid2d" else 3
        trials = args.trials if args.trials is not None else (1000 if dim == 2 else 300)
        size = args.n if args.n is not None else (12 if dim == 2 else 8)
        res = random_grid_trials(trials, size, dim, args.seed)
        lines.append(res.to_json())
    elif args.kind == "special1d":
        n = args.n if args.n is not None else 10
        f = derangement if args.f in (None, "D(k)") else parse_term(args.f)
        for m in range(args.lower, n + 1):
            lines.append({"kind": "special1d", "f": args.f or "D(k)", "lower": args.lower,
                          **oracle_special_1d(f, m, args.lower).to_json()})
    elif args.kind == "special2d":
        n = args.n if args.n is not None else 6
        name = args.f or "binom"
        if name not in _SPECIAL_2D:
            print(f"error: unknown bivariate function {name!r} (choose from {', '.join(_SPECIAL_2D)})", file=err)
            return EXIT_USAGE
        for m in range(0, n + 1):
            v = oracle_special_2d(_SPECIAL_2D[name], m)
            lines.append({"kind": "special2d", "f": name, "n": m, **v.to_json()})
    elif args.kind == "zeta":
        n = args.n if args.n is not None else 50
        for s in args.s_values:
            for m in range(1, n + 1):
                lines.append({"kind": "zeta", "s": s, **zeta_identity(s, m).to_json()})
    if args.format == "json":
        for line in lines:
            print(_dump(line), file=out)
    else:
        for line in lines:
            print(_oracle_text(line), file=out)
    return EXIT_OK


def _oracle_text(line: dict) -> str:
    if line["kind"] == "grid_trials":
        return (f"{line['trials']} random {line['size']}^{line['dimension']} grids (seed {line['seed']}): "
                f"{'all equal' if line['all_equal'] else str(len(line['failures'])) + ' unequal'}")
    if line["kind"] == "special2d":
        p, d = line["as_printed"], line["as_derived"]
        return (f"n={line['n']}: as printed {p['side_a']} vs {p['side_b']} ({'equal' if p['equal'] else 'unequal'}); "
                f"as derived {d['side_a']} vs {d['side_b']} ({'equal' if d['equal'] else 'unequal'})")
    return f"n={line['n']}: {line['side_a']} vs {line['side_b']} ({'equal' if line['equal'] else 'unequal'})"


def cmd_errata(args, out, err) -> int:
    entries = errata_report()
    if args.format == "json":
        for e in entries:
            print(_dump(e.to_json()), file=out)
        print(summary_table(entries), file=err)
    else:
        print(summary_table(entries), file=out)
    return EXIT_OK


# -- wiring ------------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("json", "text", "latex"), default="text")
    fmt.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized oracles")

    p = argparse.ArgumentParser(prog="gosper-karaji", description="Gosper summation and Gosper-Karaji identities.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gosper", parents=[fmt], help="run Gosper's algorithm on a term")
    g.add_argument("term")
    g.add_argument("--lower", type=int, choices=(0, 1), default=1)
    g.set_defaults(func=cmd_gosper)

    k = sub.add_parser("karaji", parents=[fmt], help="generate Gosper-Karaji identities")
    k.add_argument("term")
    k.add_argument("--m", type=_m_list, default=[2], help="comma-separated orders, e.g. 2,3,4")
    k.add_argument("--s", help="explicit prefix sum")
    k.add_argument("--lower", type=int, choices=(0, 1), default=1)
    k.add_argument("--n-max", type=_n_max, default=200, help="range verified before output")
    k.add_argument("--basis", choices=("auto", "power", "binomial"), default="auto")
    k.add_argument("--corpus", help="append verified identities to this JSON-lines file")
    k.set_defaults(func=cmd_karaji)

    v = sub.add_parser("verify", parents=[fmt], help="check every identity in a corpus")
    v.add_argument("--corpus", help=f"corpus path (default: ${CORPUS_ENV})")
    v.add_argument("--n-max", type=_n_max, default=200)
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", parents=[fmt], help="run an L-summing oracle")
    o.add_argument("kind", choices=("grid2d", "grid3d", "special1d", "special2d", "zeta"))
    o.add_argument("--n", type=_n_max)
    o.add_argument("--trials", type=_n_max)
    o.add_argument("--lower", type=int, choices=(0, 1), default=1)
    o.add_argument("--f", help="function: a term in k for special1d, one/binom/sum/product for special2d")
    o.add_argument("--s", dest="s_values", type=_m_list, default=[2, 3], help="zeta orders")
    o.set_defaults(func=cmd_oracle)

    e = sub.add_parser("errata", parents=[fmt], help="adjudicate the printed identities")
    e.set_defaults(func=cmd_errata)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    try:
        return args.func(args, out, err)
    except ParseError as exc:
        return _diagnose(exc, getattr(args, "term", None), err)
    except GosperKarajiError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()

"""Command-line front end.

    orbitoda hurwitz --g 0 --mu 2 --nu 1,1 --method all
    orbitoda characters --d 3 --K Z2
    orbitoda hodge --g 1 --points 0 --r 1
    orbitoda gw --r 2 --s 1 --d 1 --zero 1/2 --inf 0 --ucap 0
    orbitoda toda-check --K Z2 --qmax 2 --degmax 4
    orbitoda gw-verify --suite divisor --r 2 --s 1
    orbitoda selftest

Output is JSON on stdout (rationals as strings) or CSV with ``--format csv``
(schemas in docs/csv_schema.md).  Options may also come from an INI-style
config file (``--config``): keys of the ``[orbitoda]`` section apply to every
command, keys of a section named after the command apply to that command;
command-line flags win.

Exit codes: 0 success, 1 a verification failed, 2 usage error, 3 a
resource cap was exceeded.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import dataclasses
import io
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .algebra import scalar_to_json
from .cache import ENV_VAR, TableCache, default_cache_dir

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

COMMANDS = ("hurwitz", "characters", "hodge", "gw", "toda-check", "gw-verify", "selftest")


class UsageError(ValueError):
    """Malformed or inconsistent options (exit code 2)."""


class CapExceeded(RuntimeError):
    """A computation would exceed a configured resource cap (exit code 3)."""


# ---------------------------------------------------------------------------
# parsing helpers


def _fraction_text(x) -> str:
    return str(Fraction(x))


def _group(text: str):
    from .groups import FiniteAbelianGroup

    try:
        return FiniteAbelianGroup.parse(text)
    except ValueError as exc:
        raise UsageError(f"cannot parse group {text!r}: {exc}") from None


def _label(text: str | None, K):
    from .partitions import parse_label

    if text is None:
        return None
    try:
        return parse_label(text, len(K.moduli))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _target(args):
    from .groups import GerbeTarget

    K = _group(args.K)
    try:
        return GerbeTarget(args.r, args.s, K, _label(args.k0, K), _label(args.kinf, K), _label(args.L, K))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _elements(text: str | None, G) -> tuple:
    """Comma-separated elements "a", "a/r", "a:k" or "a/r:k" of R or S."""
    if not text:
        return ()
    try:
        return tuple(G.parse_element(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise UsageError(f"cannot parse elements {text!r}: {exc}") from None


def _ints(text: str | None) -> tuple:
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise UsageError(f"expected integers, got {text!r}") from None


def _elem_json(x) -> str:
    a, k = x
    return f"{a}:{'.'.join(map(str, k))}" if k else str(a)


# ---------------------------------------------------------------------------
# output


def emit(payload: dict, fmt: str, rows: list[dict] | None = None, out=None) -> None:
    """JSON (sorted keys, so output is byte-stable) or CSV of ``rows``."""
    out = out or sys.stdout
    if fmt == "csv":
        rows = rows if rows is not None else [{"key": k, "value": json.dumps(v, sort_keys=True)}
                                              for k, v in sorted(payload.items())]
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        out.write(buf.getvalue())
    else:
        out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _report_rows(reports: list[dict]) -> list[dict]:
    return [{"suite": r.get("suite", ""), "target": json.dumps(r.get("target", {}), sort_keys=True),
             "pass": str(r.get("pass")).lower(), "compared": r.get("compared", ""),
             "first_failure": json.dumps(r["first_failure"], sort_keys=True) if r.get("first_failure") else ""}
            for r in reports]


# ---------------------------------------------------------------------------
# commands


def cmd_hurwitz(args, cache: TableCache):
    from .hurwitz import BudgetExceeded, hurwitz, make_query
    from .partitions import parse_labeled_partition

    K = _group(args.K)
    try:
        mu = parse_labeled_partition(args.mu, K)
        nu = parse_labeled_partition(args.nu, K)
        q = make_query(args.g, mu, nu, K)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    methods = ("char", "fock", "brute") if args.method == "all" else (args.method,)
    request = {"cmd": "hurwitz", "g": args.g, "mu": [[p, list(k)] for p, k in q.mu],
               "nu": [[p, list(k)] for p, k in q.nu], "K": list(K.moduli),
               "connected": args.connected, "methods": list(methods)}

    def compute():
        vals = {}
        for m in methods:
            try:
                vals[m] = _fraction_text(hurwitz(q, m, connected=args.connected))
            except BudgetExceeded as exc:
                raise CapExceeded(str(exc)) from None
        return vals

    vals, _ = cache.get_or_compute(request, compute)
    payload = {"value": vals[methods[0]], "d": q.d, "b": q.b, "connected": args.connected,
               "empty": q.empty}
    if len(methods) > 1:
        payload["method_agreement"] = len(set(vals.values())) == 1
        payload["values"] = vals
    rows = [{"method": m, "value": v} for m, v in vals.items()]
    emit(payload, args.format, rows)
    return EXIT_OK if payload.get("method_agreement", True) else EXIT_FAIL


def character_table_json(d: int, K) -> dict:
    from .characters import character_table

    rows, cols, table = character_table(d, K)
    return {
        "rows": [[list(p) for p in lam] for lam in rows],
        "columns": [[[p, list(k)] for p, k in mu] for mu in cols],
        "table": [[scalar_to_json(x) for x in row] for row in table],
    }


def cmd_characters(args, cache: TableCache):
    K = _group(args.K)
    if args.d < 0:
        raise UsageError("--d must be nonnegative")
    if args.d > args.max_d:
        raise CapExceeded(f"d={args.d} exceeds --max-d {args.max_d}")
    request = {"cmd": "characters", "d": args.d, "K": list(K.moduli)}
    table, _ = cache.get_or_compute(request, lambda: character_table_json(args.d, K))
    payload = {"d": args.d, "K": list(K.moduli), **table}
    rows = []
    for lam, row in zip(table["rows"], table["table"]):
        for mu, val in zip(table["columns"], row):
            rows.append({"lambda": json.dumps(lam), "mu": json.dumps(mu), "value": json.dumps(val)})
    emit(payload, args.format, rows)
    return EXIT_OK


def cmd_hodge(args, cache: TableCache):
    from .hodge import UnstableError, interpolate_H

    X = _target(args)
    side = "0" if args.side == "0" else "inf"
    G = X.side_group(side)
    tup = _elements(args.points, G)
    if not tup:
        raise UsageError("--points needs at least one element")
    try:
        poly = interpolate_H(args.g, tup, X, side, args.method)
    except UnstableError as exc:
        raise UsageError(str(exc)) from None
    payload = {"target": X.describe(), "side": side, "polynomial": poly.to_json(), "text": poly.text()}
    if args.at:
        pt = _ints(args.at)
        if len(pt) != poly.nvars:
            raise UsageError(f"--at needs {poly.nvars} values")
        payload["value_at"] = {"z": list(pt), "value": _fraction_text(poly.evaluate(pt))}
    rows = [{"exponents": " ".join(map(str, e)), "coefficient": str(c)} for e, c in poly.terms]
    emit(payload, args.format, rows)
    return EXIT_OK


def _parse_insertions(items: Sequence[str], X) -> list:
    """``side:k:element`` with side 0 or inf, e.g. ``0:1:1/2`` or ``inf:0:0``."""
    out = []
    for item in items:
        try:
            side, k, elem = item.split(":", 2)
            side = "0" if side == "0" else "inf" if side in ("inf", "oo") else None
            if side is None:
                raise ValueError
            out.append((side, int(k), X.side_group(side).parse_element(elem)))
        except ValueError:
            raise UsageError(f"cannot parse insertion {item!r}; expected side:k:element") from None
    return out


def cmd_gw(args, cache: TableCache):
    from .gw import G_connected, G_disconnected, GWCaps, GWQuery, gw_invariant

    X = _target(args)
    if args.d < 0:
        raise UsageError("--d must be nonnegative")
    if args.d > args.max_d:
        raise CapExceeded(f"degree {args.d} exceeds --max-d {args.max_d}")
    if args.insert:
        if args.genus is None:
            raise UsageError("--insert needs --genus")
        ins = _parse_insertions(args.insert, X)
        val = gw_invariant(args.genus, args.d, ins, X, connected=args.connected)
        payload = {"target": X.describe(), "genus": args.genus, "d": args.d,
                   "insertions": [[s, k, _elem_json(e)] for s, k, e in ins],
                   "value": {str(k): scalar_to_json(v) for k, v in val.items()}}
        rows = [{"t_exponent": k, "value": scalar_to_json(v)} for k, v in val.items()]
        emit(payload, args.format, rows)
        return EXIT_OK
    q = GWQuery(X, args.d, _elements(args.zero, X.R), _elements(args.inf, X.S),
                GWCaps(ucap=args.ucap, zcap=args.zcap))
    f = G_connected(q) if args.connected else G_disconnected(q)
    payload = {"target": X.describe(), "d": args.d, "connected": args.connected,
               "zero": [_elem_json(e) for e in q.r_tuple], "inf": [_elem_json(e) for e in q.s_tuple],
               "caps": {"ucap": args.ucap, "zcap": args.zcap}, "function": f.to_json(), "text": f.text()}
    rows = []
    for key, s in sorted(f.parts.items()):
        for e, c in s.sorted_items():
            rows.append({"rational_factor": json.dumps([list(k) for k in key]),
                         "monomial": " ".join(f"{n}^{p}" for n, p in zip(s.ring.names, e) if p),
                         "coefficient": json.dumps(scalar_to_json(c))})
    emit(payload, args.format, rows)
    return EXIT_OK


def cmd_toda_check(args, cache: TableCache):
    from .toda import TodaCaps, factorization_check, hurwitz_toda_check

    K = _group(args.K)
    if min(args.qmax, args.degmax) < 1 or args.betamax < 0:
        raise UsageError("caps must be positive")
    caps = TodaCaps(args.qmax, args.degmax, args.betamax)
    reports = [hurwitz_toda_check(caps).to_json()]
    if K.order > 1:
        reports.append(hurwitz_toda_check(caps, beta_scale=K.order).to_json())
        reports.append(factorization_check(K, caps).to_json())
    payload = {"K": list(K.moduli), "caps": dataclasses.asdict(caps), "pass": all(r["pass"] for r in reports),
               "reports": reports}
    emit(payload, args.format, _report_rows(reports))
    return EXIT_OK if payload["pass"] else EXIT_FAIL


def cmd_gw_verify(args, cache: TableCache):
    from . import gw

    X = _target(args)
    suites = ("divisor", "string", "decomposition", "toda", "vertices") if args.suite == "all" else (args.suite,)
    reports = []
    for suite in suites:
        if suite == "divisor":
            const = Fraction(args.constant) if args.constant else Fraction(-1, 24)
            rep = gw.divisor_check(X, args.dmax, gw.GWCaps(args.ucap, args.zcap), constant=const)
        elif suite == "string":
            rep = gw.string_check(X, args.dmax, gw.GWCaps(args.ucap, args.zcap))
        elif suite == "decomposition":
            if X.K.order == 1:
                if args.suite == "all":
                    continue
                raise UsageError("the decomposition suite needs a nontrivial gerbe (--K)")
            rep = gw.decomposition_check(X, gw.PotentialCaps(args.dmax, args.marks, args.kmax, args.ucap))
        elif suite == "toda":
            if X.r < 2 or X.s < 2:
                if args.suite == "all":
                    continue
                raise UsageError("the GW 2-Toda suite needs r, s > 1")
            pc = gw.PotentialCaps(args.dmax, args.marks, args.kmax, args.ucap)
            if args.normalization == "stated":
                rep = gw.gw_toda_check(X, pc, normalization="geometric",
                                       prefactor_t=Fraction(1, X.r) + Fraction(1, X.s))
            else:
                rep = gw.gw_toda_check(X, pc, normalization=args.normalization)
        else:
            rep = gw.vertex_check(X)
        reports.append(rep.to_json())
    payload = {"target": X.describe(), "pass": all(r["pass"] for r in reports), "reports": reports}
    emit(payload, args.format, _report_rows(reports))
    return EXIT_OK if payload["pass"] else EXIT_FAIL


def cmd_selftest(args, cache: TableCache):
    from .acceptance import CRITERIA, run_all

    only = set(_ints(args.only)) if args.only else None
    if only and not only <= set(CRITERIA):
        raise UsageError(f"criteria are numbered {min(CRITERIA)}..{max(CRITERIA)}")
    results = run_all(only, echo=lambda line: print(line, file=sys.stderr, flush=True))
    reports = [r.to_json() for r in results]
    payload = {"pass": all(r.passed for r in results), "criteria": reports}
    rows = [{"criterion": r.number, "title": r.title, "pass": str(r.passed).lower(), "detail": r.detail}
            for r in results]
    emit(payload, args.format, rows)
    return EXIT_OK if payload["pass"] else EXIT_FAIL


HANDLERS = {
    "hurwitz": cmd_hurwitz,
    "characters": cmd_characters,
    "hodge": cmd_hodge,
    "gw": cmd_gw,
    "toda-check": cmd_toda_check,
    "gw-verify": cmd_gw_verify,
    "selftest": cmd_selftest,
}


# ---------------------------------------------------------------------------
# parser and configuration


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="INI-style config file; flags win over its values")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--cache-dir", help=f"cache directory (default ${ENV_VAR} or ~/.cache/orbitoda)")
    p.add_argument("--no-cache", action="store_true", help="do not read or write cached tables")
    return p


def _target_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--r", type=int, default=1, help="isotropy order at 0")
    p.add_argument("--s", type=int, default=1, help="isotropy order at infinity")
    p.add_argument("--K", "--group", dest="K", default="1", help='gerbe group, e.g. "Z2" or "Z2xZ2"')
    p.add_argument("--k0", help="gerbe datum at 0 (dotted residues)")
    p.add_argument("--kinf", help="gerbe datum at infinity")
    p.add_argument("--L", help="gerbe datum L")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="orbitoda", description=__doc__.split("\n\n")[0],
                                     parents=[common])
    parser.add_argument("--version", action="version", version=f"orbitoda {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("hurwitz", parents=[common], help="double (wreath) Hurwitz numbers")
    p.add_argument("--g", type=int, required=True, help="genus")
    p.add_argument("--mu", required=True, help='profile over 0, e.g. "2,1" or "2_1 1_0"')
    p.add_argument("--nu", required=True, help="profile over infinity")
    p.add_argument("--K", "--group", dest="K", default="1", help="group K")
    p.add_argument("--connected", action="store_true")
    p.add_argument("--method", choices=("char", "fock", "brute", "all"), default="char")

    p = sub.add_parser("characters", parents=[common], help="character table of K wr S_d")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--K", "--group", dest="K", default="1")
    p.add_argument("--max-d", type=int, default=6, help="resource cap on d")

    p = sub.add_parser("hodge", parents=[common], help="Hurwitz-Hodge polynomial H_{g,r}(z)")
    _target_args(p)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--points", required=True, help='comma-separated elements, e.g. "1/2,1/2,0"')
    p.add_argument("--side", choices=("0", "inf"), default="0")
    p.add_argument("--method", choices=("char", "operator"), default="char")
    p.add_argument("--at", help="evaluate at these admissible integers")

    p = sub.add_parser("gw", parents=[common], help="GW n-point functions or invariants")
    _target_args(p)
    p.add_argument("--d", type=int, required=True, help="degree")
    p.add_argument("--zero", help="elements of R at the marks over 0")
    p.add_argument("--inf", help="elements of S at the marks over infinity")
    p.add_argument("--ucap", type=int, default=0, help="highest power of u")
    p.add_argument("--zcap", type=int, default=3, help="highest power of each mark variable")
    p.add_argument("--connected", action="store_true")
    p.add_argument("--genus", type=int, help="with --insert: genus of the invariant")
    p.add_argument("--insert", action="append", default=[], help="side:k:element, repeatable")
    p.add_argument("--max-d", type=int, default=4, help="resource cap on the degree")

    p = sub.add_parser("toda-check", parents=[common], help="Toda equation and factorization of Hurwitz tau functions")
    p.add_argument("--K", "--group", dest="K", default="1")
    p.add_argument("--qmax", type=int, default=3)
    p.add_argument("--degmax", type=int, default=4)
    p.add_argument("--betamax", type=int, default=4)

    p = sub.add_parser("gw-verify", parents=[common], help="divisor, string, decomposition, GW-Toda and vertex suites")
    _target_args(p)
    p.add_argument("--suite", choices=("divisor", "string", "decomposition", "toda", "vertices", "all"),
                   default="all")
    p.add_argument("--dmax", type=int, default=1)
    p.add_argument("--ucap", type=int, default=0)
    p.add_argument("--zcap", type=int, default=2)
    p.add_argument("--marks", type=int, default=2)
    p.add_argument("--kmax", type=int, default=1)
    p.add_argument("--constant", help="divisor constant (default -1/24)")
    p.add_argument("--normalization", choices=("stated", "geometric", "operator"), default="stated",
                   help="GW-Toda form: stated = prefactor q t^(1/r+1/s)/u^2 in insertion variables; "
                        "geometric = prefactor q/u^2; operator = twisted variables")

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance criteria")
    p.add_argument("--only", help="comma-separated criterion numbers")
    return parser


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]) -> None:
    """Install config-file values as parser defaults, so flags still win."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    cp = configparser.ConfigParser(interpolation=None)
    try:
        with open(known.config, encoding="utf-8") as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    except configparser.Error as exc:
        raise UsageError(f"malformed config file: {exc}") from None
    command = next((a for a in argv if a in COMMANDS), None)
    if command is None:
        return
    sp = _subparser(parser, command)
    actions = {a.dest: a for a in sp._actions}
    values = {}
    for section in ("orbitoda", command):
        if not cp.has_section(section):
            continue
        for key, raw in cp.items(section):
            dest = key.replace("-", "_")
            if dest not in actions or dest in ("config", "help"):
                raise UsageError(f"unknown option {key!r} in section [{section}] of the config file")
            action = actions[dest]
            if isinstance(action, argparse._StoreTrueAction):
                values[dest] = cp.getboolean(section, key)
            elif isinstance(action, argparse._AppendAction):
                values[dest] = [x.strip() for x in raw.split("\n") if x.strip()]
            else:
                if action.choices is not None and raw not in action.choices:
                    raise UsageError(f"invalid value {raw!r} for {key} in the config file")
                values[dest] = raw
    # required options satisfied by the config file
    for dest in values:
        actions[dest].required = False
    sp.set_defaults(**values)


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        apply_config(parser, argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"orbitoda: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    if args.no_cache:
        cache = TableCache(None)
    else:
        cache = TableCache(args.cache_dir or default_cache_dir())
    from .fock import CutoffError
    from .hurwitz import BudgetExceeded

    try:
        return HANDLERS[args.command](args, cache)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"orbitoda: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CapExceeded, BudgetExceeded, CutoffError) as exc:
        emit({"error": "resource_cap_exceeded", "command": args.command, "message": str(exc)}, "json")
        return EXIT_CAP


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command-line front end.

One subcommand per pipeline stage; every output is deterministic (bytes
do not depend on thread count, locale, or repetition), and the exit
code is machine-checkable: 0 success, 1 a requested audit or search
failed, 2 usage error, 3 parse error, 4 precision guard tripped.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from random import Random

from .blockpaths import BlockPath
from .errors import (
    ParseError,
    PrecisionError,
    SpindexError,
    UsageError,
)
from .exact import ExactReal, exact
from .generate import random_ellipsoid_deltas
from .indices import index_bundle
from .orbits import (
    ellipsoid_comparison,
    ellipsoid_system,
    multiplicity_audit,
    rescale_to_mean_index,
    staircase_barcode,
)
from .persistence import (
    AuditOptions,
    Barcode,
    FilteredComplex,
    barcode_audit,
    barcode_from_filtered_complex,
)
from .plotting import (
    write_barcode_png,
    write_barcode_svg,
    write_indices_png,
)
from .recurrence import (
    OrbitSystem,
    RecurrenceEvent,
    RecurrenceParams,
    derive_params,
    find_recurrence_events,
    verify_event,
)


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as err:
        raise ParseError(f"{path}: {err}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _line(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


def _parse_exact(text: str, what: str) -> ExactReal:
    try:
        return ExactReal.parse(text)
    except SpindexError:
        raise
    except Exception as err:
        raise ParseError(f"bad {what} {text!r}: {err}") from None


def _cmd_indices(args) -> int:
    path = BlockPath.from_json(_load_json(args.path))
    bundles = [index_bundle(path, k) for k in range(1, args.kmax + 1)]
    if (args.format or "csv") == "json":
        text = _dumps({"path": path.to_json(),
                       "table": [b.to_json() for b in bundles]})
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "hmu", "mu_minus", "mu_plus", "degenerate"])
        for b in bundles:
            writer.writerow([b.k, b.mean_index.to_text(), b.mu_minus,
                             b.mu_plus, "true" if b.degenerate else "false"])
        text = buf.getvalue()
    _emit(text, args.out)
    if args.plot:
        write_indices_png([(b.k, float(b.mean_index), b.mu_minus, b.mu_plus)
                           for b in bundles], args.plot)
    return 0


def _cmd_recurrence(args) -> int:
    system = OrbitSystem.from_json(_load_json(args.system))
    params = RecurrenceParams(
        eta=_parse_exact(args.eta, "eta"),
        ell0=args.ell0, divisor=args.div, event_count=args.events,
        k_ceiling=args.kmax,
        epsilon=_parse_exact(args.epsilon, "epsilon") if args.epsilon
        else None,
        sigma=_parse_exact(args.sigma, "sigma") if args.sigma else None)
    bound = derive_params(system, params)
    events = find_recurrence_events(system, bound)

    def reverify(ev: RecurrenceEvent):
        return verify_event(system, ev, bound, bound.k_ceiling)

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            audits = list(pool.map(reverify, events))
    else:
        audits = [reverify(ev) for ev in events]
    lines = []
    for ev, audit in zip(events, audits):
        obj = ev.to_json(system)
        obj["verified"] = audit.to_json()
        lines.append(_line(obj))
    all_ok = all(a.ok for a in audits)
    lines.append(_line({"summary": {
        "events": len(events),
        "allVerified": all_ok,
        "maxPivotGap": events.max_gap,
    }}))
    _emit("".join(lines), args.out)
    return 0 if all_ok and events else 1


def _cmd_barcode(args) -> int:
    obj = _load_json(args.complex)
    if args.field is not None:
        obj = dict(obj)
        obj["field"] = args.field
    cx = FilteredComplex.from_json(obj)
    bc = barcode_from_filtered_complex(cx)
    _emit(_dumps(bc.to_json()), args.out)
    if args.svg:
        write_barcode_svg(bc, args.svg)
    return 0


def _parse_primes(text: str) -> tuple:
    if not text:
        return ()
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"bad prime list {text!r}") from None


def _cmd_audit(args) -> int:
    bc = Barcode.from_json(_load_json(args.barcode))
    opts = AuditOptions(
        half_dim_n=args.n,
        euler_char=args.chi,
        boundary_depth_cap=_parse_exact(args.depth_cap, "depth cap")
        if args.depth_cap else None,
        vanishing=args.vanishing,
        primes=_parse_primes(args.primes),
        window_top=_parse_exact(args.window_top, "window top")
        if args.window_top else None)
    rep = barcode_audit(bc, opts)
    _emit(_dumps(rep.to_json()), args.out)
    if args.svg:
        write_barcode_svg(bc, args.svg)
    return 0 if rep.ok else 1


def _cmd_ellipsoid(args) -> int:
    deltas = [_parse_exact(part, "delta")
              for part in args.deltas.split(",")]
    system = ellipsoid_system(deltas)
    st = staircase_barcode(system, args.count)
    _emit(_dumps(st.to_json()), args.out)
    if args.system:
        with open(args.system, "w", encoding="utf-8") as fh:
            fh.write(_dumps(system.to_json()))
    if args.barcode:
        with open(args.barcode, "w", encoding="utf-8") as fh:
            fh.write(_dumps(st.barcode.to_json()))
    top = float(st.points[-1].action)
    if args.svg:
        write_barcode_svg(st.barcode, args.svg, window_top=top * 1.02)
    if args.plot:
        write_barcode_png(st.barcode, args.plot)
    return 0


def _cmd_audit_mult(args) -> int:
    system = OrbitSystem.from_json(_load_json(args.system))
    event = RecurrenceEvent.from_json(_load_json(args.event))
    rep = multiplicity_audit(system, event, args.kmax)
    _emit(_dumps(rep.to_json()), args.out)
    return 0 if rep.ok else 1


def _cmd_compare(args) -> int:
    system = OrbitSystem.from_json(_load_json(args.system))
    if args.rescale:
        system = rescale_to_mean_index(system)
    rep = ellipsoid_comparison(system, args.kmax)
    _emit(_dumps(rep.to_json()), args.out)
    return 0 if rep.ok else 1


def _cmd_gen_system(args) -> int:
    rng = Random(args.seed)
    deltas = random_ellipsoid_deltas(rng, args.n)
    system = ellipsoid_system(deltas)
    obj = system.to_json()
    obj["deltas"] = [v.to_json() for v in deltas]
    _emit(_dumps(obj), args.out)
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="spindex",
        description="Exact index theory, recurrence events, and graded "
                    "barcodes for closed-orbit systems.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=("json", "csv"),
                        help="tabular output format where applicable")
    common.add_argument("--threads", type=int, default=1,
                        help="worker threads for verification sharding")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for generated test data")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("indices", parents=[common],
                       help="iterate index table of one path")
    p.add_argument("--path", required=True, help="path JSON file")
    p.add_argument("--kmax", type=int, default=20)
    p.add_argument("--plot", help="write an index profile PNG")
    p.set_defaults(fn=_cmd_indices)

    p = sub.add_parser("recurrence", parents=[common],
                       help="search and verify index recurrence events")
    p.add_argument("--system", required=True, help="orbit system JSON")
    p.add_argument("--eta", required=True,
                   help="recurrence tolerance (exact literal)")
    p.add_argument("--ell0", type=int, default=1)
    p.add_argument("--div", type=int, default=1,
                   help="require iterates divisible by this")
    p.add_argument("--events", type=int, default=1)
    p.add_argument("--kmax", type=int, default=10000)
    p.add_argument("--epsilon", help="override the rotation window")
    p.add_argument("--sigma", help="override the action window")
    p.set_defaults(fn=_cmd_recurrence)

    p = sub.add_parser("barcode", parents=[common],
                       help="barcode of a filtered complex")
    p.add_argument("--complex", required=True, help="complex JSON file")
    p.add_argument("--field", type=int,
                   help="override the ground field characteristic")
    p.add_argument("--svg", help="write an SVG rendering")
    p.set_defaults(fn=_cmd_barcode)

    p = sub.add_parser("audit", parents=[common],
                       help="structural barcode checks")
    p.add_argument("--barcode", required=True, help="barcode JSON file")
    p.add_argument("--n", type=int, help="ambient half-dimension")
    p.add_argument("--chi", type=int, help="expected Euler characteristic")
    p.add_argument("--primes", default="",
                   help="comma-separated primes for the dimension check")
    p.add_argument("--depth-cap", help="bar length cap (exact literal)")
    p.add_argument("--vanishing", action="store_true",
                   help="forbid infinite bars")
    p.add_argument("--window-top", help="truncation bound of the barcode")
    p.add_argument("--svg", help="write an SVG rendering")
    p.set_defaults(fn=_cmd_audit)

    p = sub.add_parser("ellipsoid", parents=[common],
                       help="staircase barcode of an ellipsoid system")
    p.add_argument("--deltas", required=True,
                   help="comma-separated parameters, e.g. 1,sqrt2")
    p.add_argument("--count", type=int, default=50,
                   help="number of spectrum points")
    p.add_argument("--system", help="also write the orbit system JSON")
    p.add_argument("--barcode", help="also write the bare barcode JSON")
    p.add_argument("--svg", help="write an SVG rendering")
    p.add_argument("--plot", help="write a PNG rendering")
    p.set_defaults(fn=_cmd_ellipsoid)

    p = sub.add_parser("audit-mult", parents=[common],
                       help="multiplicity slot audit of an event")
    p.add_argument("--system", required=True, help="orbit system JSON")
    p.add_argument("--event", required=True, help="event JSON file")
    p.add_argument("--kmax", type=int, default=500)
    p.set_defaults(fn=_cmd_audit_mult)

    p = sub.add_parser("compare", parents=[common],
                       help="match a system against its ellipsoid model")
    p.add_argument("--system", required=True, help="orbit system JSON")
    p.add_argument("--kmax", type=int, default=200)
    p.add_argument("--rescale", action="store_true",
                   help="rescale actions to mean indices first")
    p.set_defaults(fn=_cmd_compare)

    p = sub.add_parser("gen-system", parents=[common],
                       help="seeded random ellipsoid system")
    p.add_argument("--n", type=int, default=2, help="number of orbits")
    p.set_defaults(fn=_cmd_gen_system)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        return args.fn(args)
    except SystemExit as err:  # --help
        return int(err.code or 0)
    except UsageError as err:
        print(f"usage-error: {err}", file=sys.stderr)
        return 2
    except ParseError as err:
        print(f"parse-error: {err}", file=sys.stderr)
        return 3
    except PrecisionError as err:
        print(f"precision-error: {err}", file=sys.stderr)
        return 4
    except SpindexError as err:
        print(f"audit-error: {err}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as err:
        print(f"parse-error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

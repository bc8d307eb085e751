"""Command-line surface: rank sweeps, torsion reports, place counts,
finite-field scans and formal-immersion certificates.

Reports are deterministic JSON (or text) embedding the tool version, the
chosen normalization and the operator lists, so every number is
reproducible from the report alone.  Level sweeps checkpoint each level in
the cache directory and resume on rerun; golden mode compares against the
shipped reference sets and exits 0 on match, 1 on mismatch, 2 on a
resource refusal.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .jacobian import (
    DEFAULT_NORMALIZATION,
    good_primes,
    is_rank_zero,
    torsion_report,
)
from .modsym import GroupSpec, build_space

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "golden")


def load_golden(name):
    with open(os.path.join(GOLDEN_DIR, name)) as fh:
        return json.load(fh)


def make_spec(kind, level):
    if kind == "gamma0":
        return GroupSpec.gamma0(level)
    if kind == "gamma1":
        return GroupSpec.gamma1(level)
    if kind == "x1-2-2n":
        if level % 2:
            raise ValueError("X1(2,2N) takes the even number 2N")
        return GroupSpec.x1_2_2n(level // 2)
    raise ValueError(f"unknown group kind {kind!r}")


def parse_levels(arg):
    out = []
    for part in arg.split(","):
        if "-" in part:
            a, b = part.split("-")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def checkpoint_path(cache_dir, command, key):
    os.makedirs(cache_dir, exist_ok=True)
    return os.path.join(cache_dir, f"{command}-{key}.json")


def with_checkpoint(cache_dir, command, key, compute):
    if cache_dir:
        path = checkpoint_path(cache_dir, command, key)
        if os.path.exists(path):
            with open(path) as fh:
                return json.load(fh)
    result = compute()
    if cache_dir:
        with open(path, "w") as fh:
            json.dump(result, fh, sort_keys=True)
    return result


def report_header(args, command):
    return {
        "tool": f"modtors {__version__}",
        "command": command,
        "normalization": getattr(args, "normalization", DEFAULT_NORMALIZATION),
    }


def _rank_one(task):
    kind, level, normalization = task
    spec = make_spec(kind, level)
    cert = is_rank_zero(spec)
    return cert.to_json() | {"level": level}


def cmd_rank(args):
    levels = parse_levels(args.levels)
    report = report_header(args, "rank")
    tasks = [(args.kind, n, args.normalization) for n in levels]

    def compute_all():
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                return list(pool.map(_rank_one, tasks))
        return [
            with_checkpoint(
                args.cache_dir,
                "rank",
                f"{args.kind}-{n}",
                lambda n=n: _rank_one((args.kind, n, args.normalization)),
            )
            for n in levels
        ]

    try:
        results = compute_all()
    except (ResourceWarning, MemoryError) as exc:
        print(f"resource refusal: {exc}", file=sys.stderr)
        return 2
    report["results"] = results
    emit(report, args)
    if args.golden:
        sets = load_golden("rank_sets.json")
        want_zero = {
            "gamma0": set(sets["S0"]),
            "gamma1": set(sets["gamma1_rank0"]),
            "x1-2-2n": {2 * n for n in sets["S1"]},
        }[args.kind]
        bad = [
            r["level"]
            for r in results
            if (r["verdict"] == "rank_zero") != (r["level"] in want_zero)
        ]
        if bad:
            print(f"golden mismatch at levels {bad}", file=sys.stderr)
            return 1
    return 0


def _torsion_one(task):
    kind, level, primes, normalization = task
    spec = make_spec(kind, level)
    rep = torsion_report(spec, primes=primes, normalization=normalization)
    return rep.to_json() | {"level": level}


def cmd_torsion(args):
    levels = parse_levels(args.levels)
    primes = [int(p) for p in args.primes.split(",")] if args.primes else None
    report = report_header(args, "torsion")
    report["primes"] = primes or "two smallest good primes per level"
    kill = "T_q - q<q> - 1" if args.normalization == "eq41" else "T_q - <q> - q"
    report["operators"] = [kill + " for each listed prime q", "star - 1"]
    tasks = [(args.kind, n, primes, args.normalization) for n in levels]
    try:
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(_torsion_one, tasks))
        else:
            results = [
                with_checkpoint(
                    args.cache_dir,
                    "torsion",
                    f"{args.kind}-{n}-{args.primes or 'auto'}-{args.normalization}",
                    lambda t=t: _torsion_one(t),
                )
                for n, t in zip(levels, tasks)
            ]
    except (ResourceWarning, MemoryError) as exc:
        print(f"resource refusal: {exc}", file=sys.stderr)
        return 2
    report["results"] = results
    emit(report, args)
    if args.golden:
        table = load_golden(
            "table1.json" if args.kind == "gamma1" else "table2.json"
        )
        bad = []
        for r in results:
            lv = r["level"]
            want = table.get(str(lv))
            if want is None:
                continue
            got = r["clcc_Q"]
            if got != [x for x in want if x > 1]:
                bad.append((lv, got, want))
        if bad:
            print(f"golden mismatch: {bad}", file=sys.stderr)
            return 1
    return 0


def cmd_places(args):
    from .ecff import places_of_degree

    counts = [
        places_of_degree(args.level, args.prime, d, q_bound=args.q_bound)
        for d in range(1, args.maxdeg + 1)
    ]
    report = report_header(args, "places") | {
        "level": args.level,
        "prime": args.prime,
        "places_by_degree": counts,
    }
    emit(report, args)
    return 0


def cmd_ecscan(args):
    from .ecff import exists_point_of_order, hasse_excludes

    results = []
    for q in parse_levels(args.fields):
        row = {"q": q, "N": args.order, "hasse_excluded": hasse_excludes(q, args.order)}
        try:
            row["exists_point_of_order"] = exists_point_of_order(
                q, args.order, q_bound=args.q_bound
            )
        except ResourceWarning as exc:
            print(f"resource refusal: {exc}", file=sys.stderr)
            return 2
        results.append(row)
    emit(report_header(args, "ecscan") | {"results": results}, args)
    return 0


def cmd_immersion(args):
    from .immersion import immersion_certificate

    try:
        cert = immersion_certificate(
            args.level,
            args.prime,
            count=args.count,
            rows_mode=args.rows_mode,
            refine="auto" if args.refine else False,
        )
    except (ResourceWarning, MemoryError) as exc:
        print(f"resource refusal: {exc}", file=sys.stderr)
        return 2
    report = report_header(args, "immersion") | cert
    if not args.verbose:
        report.pop("matrices", None)
    emit(report, args)
    if args.golden:
        return 0 if cert["all_pass"] else 1
    return 0


def emit(report, args):
    if args.format == "json":
        print(json.dumps(report, sort_keys=True, indent=1))
    else:
        _emit_text(report)


def _emit_text(report, indent=0):
    pad = " " * indent
    if isinstance(report, dict):
        for k in sorted(report):
            v = report[k]
            if isinstance(v, (dict, list)):
                print(f"{pad}{k}:")
                _emit_text(v, indent + 2)
            else:
                print(f"{pad}{k}: {v}")
    elif isinstance(report, list):
        for v in report:
            if isinstance(v, (dict, list)):
                _emit_text(v, indent)
                print(f"{pad}-")
            else:
                print(f"{pad}{v}")
    else:
        print(f"{pad}{report}")


def main(argv=None):
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--cache-dir", default=None)
    common.add_argument(
        "--normalization",
        choices=("eq41", "diamondless"),
        default=DEFAULT_NORMALIZATION,
    )
    common.add_argument("--jobs", type=int, default=1)
    parser = argparse.ArgumentParser(
        prog="modtors",
        description="exact computations with modular symbols, torsion of "
        "modular Jacobians, and cubic-point certificates",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add_parser("rank", help="rank-zero certification of J(N)")
    p.add_argument("kind", choices=("gamma0", "gamma1", "x1-2-2n"))
    p.add_argument("levels", help="e.g. 11 or 1-100 or 11,37,65")
    p.add_argument("--golden", action="store_true")
    p.set_defaults(func=cmd_rank)

    p = add_parser("torsion", help="torsion reports and class groups")
    p.add_argument("kind", choices=("gamma0", "gamma1", "x1-2-2n"))
    p.add_argument("levels")
    p.add_argument("--primes", default=None, help="comma-separated")
    p.add_argument("--golden", action="store_true")
    p.set_defaults(func=cmd_torsion)

    p = add_parser("places", help="degree-d place counts of X1(N) mod p")
    p.add_argument("level", type=int)
    p.add_argument("prime", type=int)
    p.add_argument("--maxdeg", type=int, default=3)
    p.add_argument("--q-bound", type=int, default=3**6)
    p.set_defaults(func=cmd_places)

    p = add_parser("ecscan", help="torsion existence over finite fields")
    p.add_argument("order", type=int, help="torsion order N")
    p.add_argument("fields", help="field sizes, e.g. 5,25,125")
    p.add_argument("--q-bound", type=int, default=3**6)
    p.set_defaults(func=cmd_ecscan)

    p = add_parser("immersion", help="formal-immersion certificate chain")
    p.add_argument("level", type=int)
    p.add_argument("prime", type=int)
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--rows-mode", choices=("full", "newform", "degeneracy"),
                   default="full")
    p.add_argument("--no-refine", dest="refine", action="store_false")
    p.add_argument("--verbose", action="store_true")
    p.add_argument("--golden", action="store_true")
    p.set_defaults(func=cmd_immersion)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

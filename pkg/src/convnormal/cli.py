"""Command-line front end: ``convnormal info|check|gen|fuzz|bounds``.

Exit codes: 0 the property holds, 1 it fails (a witness is reported),
2 error or exhausted budget.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bounds import BoundTable, cn1_lower_bound
from .covers import (DEFAULT_BUDGET, check_bcn_at, check_cn, check_cn_at,
                     check_corner_cover, simplex_ppd_cover)
from .errors import BudgetExceeded, PolytopeError
from .exactnum import as_fraction
from .fixtures import (gen_fixture, random_lattice_polytope, rng_for,
                       random_unimodular)
from .formats import (dumps, polytope_to_dict, rat, read_fixture,
                      write_fixture)
from .latticepts import check_integrally_closed, check_normal
from .polytope import (alg_width, dilate, from_vertices, is_simple,
                       is_smooth, is_unimodular_simplex, min_edge_length,
                       unimodular_image, volume)

EXIT_HOLDS, EXIT_FAILS, EXIT_ERROR = 0, 1, 2


def source_hash() -> str:
    h = hashlib.sha256()
    for f in sorted(Path(__file__).parent.glob("*.py")):
        h.update(f.read_bytes())
    return h.hexdigest()[:12]


def _witness(w):
    return None if w is None else [rat(x) for x in w]


class Run:
    """Collects a deterministic report; only ``wall_time`` varies."""

    def __init__(self, argv, seed):
        self.report = {"command": list(argv), "seed": seed, "version": f"{__version__}+{source_hash()}",
                       "verdicts": {}, "witnesses": {}, "result": {}}
        self.t0 = time.perf_counter()

    def finish(self, out) -> str:
        self.report["wall_time"] = round(time.perf_counter() - self.t0, 3)
        text = json.dumps(self.report, indent=2) + "\n"
        if out:
            Path(out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return text


def _load(path):
    return read_fixture(path).polytope


# ---------------------------------------------------------------------------
# commands


def cmd_info(args, run: Run) -> int:
    P = _load(args.file)
    info = {"dim": P.dim, "ambient_dim": P.ambient_dim, "vertices": len(P.vertices),
            "facets": len(P.facets), "edges": len(P.edges)}
    if P.dim > 0:
        info["E"] = rat(min_edge_length(P))
    info["widths"] = [{"normal": list(F.normal), "offset": rat(F.offset), "width": rat(alg_width(P, F))}
                      for F in P.facets]
    info["simple"] = is_simple(P)
    if P.is_lattice:
        info["smooth"] = is_smooth(P)
        info["unimodular"] = is_unimodular_simplex(P)
    info["volume"] = rat(volume(P)) if P.dim == P.ambient_dim else "0"
    info["polytope"] = polytope_to_dict(P)
    run.report["result"] = info
    return EXIT_HOLDS


def _cover_kw(args) -> dict:
    return {"mode": "montecarlo" if args.mode == "mc" else "exact",
            "budget": args.budget if args.budget is not None else DEFAULT_BUDGET,
            "workers": args.workers, "seed": args.seed}


def _cover_exit(covered) -> int:
    return EXIT_FAILS if covered is False else EXIT_HOLDS


def cmd_check(args, run: Run) -> int:
    P = _load(args.file)
    what = args.what
    if what in ("ic", "normal"):
        rep = (check_integrally_closed if what == "ic" else check_normal)(P, args.max_degree)
        holds = rep.integrally_closed if what == "ic" else rep.normal
        wit = rep.witness if what == "ic" else rep.normal_witness
        run.report["verdicts"][what] = holds
        run.report["witnesses"][what] = None if wit is None else {"degree": wit[0], "point": list(wit[1])}
        run.report["result"] = {"integrally_closed": rep.integrally_closed, "normal": rep.normal,
                                "summand": rep.summand, "degrees_checked": rep.degrees_checked}
        return EXIT_HOLDS if holds else EXIT_FAILS
    kw = _cover_kw(args)
    if what == "cn":
        if args.c is not None:
            rep = check_cn_at(P, args.c, **kw)
            run.report["verdicts"][f"cn@{rat(args.c)}"] = rep.covered
            run.report["witnesses"][f"cn@{rat(args.c)}"] = _witness(rep.witness)
            run.report["result"] = rep.to_json()
            return _cover_exit(rep.covered)
        k = args.k if args.k is not None else Fraction(2)
        summ = check_cn(P, k, args.c_grid, **kw)
        for c, r in zip(summ.grid, summ.reports):
            run.report["verdicts"][f"cn@{rat(c)}"] = r.covered
            run.report["witnesses"][f"cn@{rat(c)}"] = _witness(r.witness)
        run.report["result"] = summ.to_json()
        return _cover_exit(summ.holds)
    if what == "bcn":
        cs = args.c_grid or [args.c if args.c is not None else Fraction(2)]
        facets = [args.facet] if args.facet is not None else range(len(P.facets))
        worst = True
        results = []
        for c in cs:
            for i in facets:
                rep = check_bcn_at(P, c, i, **kw)
                key = f"bcn@{rat(c)}/F{i}"
                run.report["verdicts"][key] = rep.covered
                run.report["witnesses"][key] = _witness(rep.witness)
                results.append(rep.to_json())
                if rep.covered is False:
                    worst = False
        run.report["result"] = {"reports": results}
        return _cover_exit(worst)
    if what == "corner":
        v = P.vertices[args.vertex]
        rep = check_corner_cover(P, v, args.l, **kw)
        run.report["verdicts"]["corner"] = rep.covered
        run.report["witnesses"]["corner"] = _witness(rep.witness)
        run.report["result"] = rep.to_json()
        return _cover_exit(rep.covered)
    if what == "ppd":
        cover, rep = simplex_ppd_cover(P, **kw)
        run.report["verdicts"]["ppd"] = rep.covered
        run.report["witnesses"]["ppd"] = _witness(rep.witness)
        run.report["result"] = {"box_count": len(cover.boxes), **cover.to_json(), "report": rep.to_json()}
        return _cover_exit(rep.covered)
    raise PolytopeError(f"unknown check {what!r}")


def cmd_gen(args, run: Run) -> int:
    kw = {k: getattr(args, k) for k in ("d", "c", "q", "l", "n", "box") if getattr(args, k, None) is not None}
    kw["seed"] = args.seed
    if args.kind == "skew":
        if not args.file:
            raise PolytopeError("skew needs --file")
        kw["fixture"] = read_fixture(args.file)
    fx = gen_fixture(args.kind, **kw)
    if args.out:
        write_fixture(fx, args.out)
    else:
        sys.stdout.write(dumps(fx.to_dict()))
    return EXIT_HOLDS


def cmd_bounds(args, run: Run) -> int:
    ds = args.d_list or list(range(1, 6))
    ks = args.k_list or [Fraction(2), Fraction(5, 2), Fraction(3), Fraction(4)]
    table = BoundTable.build(ds, ks)
    run.report["result"] = {"rows": table.rows(),
                            "metadata": {k: rat(v) for k, v in table.metadata.items()},
                            "note": "*_approx columns are decimal approximations"}
    return EXIT_HOLDS


CSV_HEADER = ["seed", "instance_hash", "E", "c", "verdict", "witness"]


def _instance_hash(P) -> str:
    return hashlib.sha256(json.dumps(polytope_to_dict(P)).encode()).hexdigest()[:12]


def _verdict_str(v):
    return {True: "holds", False: "fails", None: "unknown"}[v]


def cmd_fuzz(args, run: Run) -> int:
    rng = rng_for(args.seed)
    rows = []
    kw = _cover_kw(args)
    kw["budget"] = args.budget if args.budget is not None else 20_000
    n = args.instances
    campaign = args.campaign
    summary = {"campaign": campaign, "instances": n}
    try:
        if campaign == "cn_threshold":
            d, k = args.d or 2, args.k if args.k is not None else Fraction(2)
            for i in range(n):
                base = from_vertices([tuple(int(i == j) for j in range(d)) for i in range(d)] + [tuple(0 for _ in range(d))])
                base = unimodular_image(base, random_unimodular(d, rng))
                for m in range(1, args.max_e + 1):
                    P = dilate(base, m)
                    for c in sorted({Fraction(2), (2 + k) / 2, k}):
                        try:
                            r = check_cn_at(P, c, **kw)
                            rows.append([args.seed, _instance_hash(P), rat(min_edge_length(P)), rat(c),
                                         _verdict_str(r.covered), json.dumps(_witness(r.witness))])
                        except BudgetExceeded:
                            rows.append([args.seed, _instance_hash(P), rat(min_edge_length(P)), rat(c), "budget", "null"])
        elif campaign == "ic_threshold":
            d = args.d or 3
            for i in range(n):
                P = random_lattice_polytope(d, d + 2, args.box, rng)
                r = check_integrally_closed(P, args.max_degree)
                wit = None if r.witness is None else [r.witness[0], list(r.witness[1])]
                rows.append([args.seed, _instance_hash(P), rat(min_edge_length(P)), "",
                             _verdict_str(r.integrally_closed), json.dumps(wit)])
        elif campaign == "cn1_exact":
            k = args.k if args.k is not None else Fraction(3)
            grid = sorted({Fraction(2), (2 + k) / 2, k})
            den = args.max_e
            for num in range(1, 2 * den + 1):
                l = Fraction(num, den)
                P = from_vertices([(0,), (l,)])
                for c in grid:
                    r = check_cn_at(P, c, **kw)
                    rows.append([args.seed, _instance_hash(P), rat(l), rat(c),
                                 _verdict_str(r.covered), json.dumps(_witness(r.witness))])
            summary["lower_bound"] = rat(cn1_lower_bound(k))
            summary["upper_bound"] = "1"
        else:
            raise PolytopeError(f"unknown campaign {campaign!r}")
    finally:
        if args.csv:
            with open(args.csv, "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh)
                w.writerow(CSV_HEADER)
                w.writerows(rows)
    fails = [Fraction(r[2]) for r in rows if r[4] == "fails"]
    holds = [Fraction(r[2]) for r in rows if r[4] == "holds"]
    summary["largest_failing_E"] = rat(max(fails)) if fails else None
    summary["smallest_passing_E"] = rat(min(holds)) if holds else None
    if campaign == "cn1_exact":
        passing = [e for e in sorted({Fraction(r[2]) for r in rows})
                   if all(r[4] == "holds" for r in rows if Fraction(r[2]) >= e)]
        summary["empirical_threshold"] = rat(passing[0]) if passing else None
    summary["rows"] = len(rows)
    run.report["result"] = summary
    run.report["verdicts"]["failures"] = len(fails)
    return EXIT_HOLDS


# ---------------------------------------------------------------------------
# parser


def _rational_list(s: str) -> list:
    return [as_fraction(x) for x in s.split(",") if x.strip()]


def _int_list(s: str) -> list:
    return [int(x) for x in s.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="convnormal", description="exact checks for lattice polytopes")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    cover = argparse.ArgumentParser(add_help=False)
    cover.add_argument("--mode", choices=["exact", "mc"], default="exact")
    cover.add_argument("--budget", type=int, help="exact mode: region cap; mc mode: sample count")
    cover.add_argument("--workers", type=int, default=1)
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("info", parents=[common])
    s.add_argument("file")

    s = sub.add_parser("check", parents=[common, cover])
    s.add_argument("what", choices=["ic", "normal", "cn", "bcn", "corner", "ppd"])
    s.add_argument("file")
    s.add_argument("--c", type=as_fraction)
    s.add_argument("--k", type=as_fraction)
    s.add_argument("--c-grid", type=_rational_list)
    s.add_argument("--max-degree", type=int)
    s.add_argument("--facet", type=int, help="facet index for bcn")
    s.add_argument("--vertex", type=int, default=0, help="vertex index for corner")
    s.add_argument("--l", type=as_fraction, default=Fraction(1))

    s = sub.add_parser("gen", parents=[common])
    s.add_argument("kind", choices=["dilated_simplex", "reeve", "hollow3", "cube", "random", "skew"])
    s.add_argument("--d", type=int)
    s.add_argument("--c", type=as_fraction)
    s.add_argument("--q", type=int)
    s.add_argument("--l", type=as_fraction)
    s.add_argument("--n", type=int)
    s.add_argument("--box", type=int)
    s.add_argument("--file")

    s = sub.add_parser("fuzz", parents=[common, cover])
    s.add_argument("campaign", choices=["cn_threshold", "ic_threshold", "cn1_exact"])
    s.add_argument("--d", type=int)
    s.add_argument("--k", type=as_fraction)
    s.add_argument("--instances", type=int, default=3)
    s.add_argument("--max-e", type=int, default=6, help="largest dilation (or denominator for cn1_exact)")
    s.add_argument("--box", type=int, default=3)
    s.add_argument("--max-degree", type=int)
    s.add_argument("--csv")

    s = sub.add_parser("bounds", parents=[common])
    s.add_argument("--d-list", type=_int_list)
    s.add_argument("--k-list", type=_rational_list)
    return p


COMMANDS = {"info": cmd_info, "check": cmd_check, "gen": cmd_gen, "fuzz": cmd_fuzz, "bounds": cmd_bounds}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_HOLDS
    run = Run(argv, args.seed)
    try:
        code = COMMANDS[args.cmd](args, run)
    except BudgetExceeded as exc:
        run.report["error"] = f"budget exceeded: {exc}"
        if exc.report is not None:
            run.report["result"] = exc.report.to_json()
        code = EXIT_ERROR
    except (PolytopeError, OSError, ValueError) as exc:
        run.report["error"] = f"{type(exc).__name__}: {exc}"
        code = EXIT_ERROR
    run.report["exit_code"] = code
    if args.cmd != "gen":
        run.finish(args.out)
    elif code == EXIT_ERROR:
        sys.stderr.write(run.report["error"] + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 completed (plain data, or a consistent conclusion),
1 contradiction or violation found, 2 inconclusive (a budget ran out),
3 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from . import analyses as A
from . import geometry as geo
from .centralisers import replicate_claims, table2_verdict, witness_centraliser
from .factor import DEFAULT_BUDGET_MS
from .groups import InvalidGroup, order, parse_group
from .params import GQParams, solve, solve_power, theorem_bound_report
from .permgroups import DEFAULT_ENUM_BUDGET, EnumerationRefused, build_bsgs, embedded_group, read_generators

OK, FOUND, INCONCLUSIVE, USAGE = 0, 1, 2, 3
PSL2_DEFAULT_MAX = 10**4
# enumerating more group elements than this needs --long
LONG_ENUMERATION = 10**7

_EXIT = {A.CONSISTENT: OK, A.CONTRADICTION: FOUND, A.INCONCLUSIVE: INCONCLUSIVE}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class Config:
    budget_ms: int = DEFAULT_BUDGET_MS
    enum_budget: int = DEFAULT_ENUM_BUDGET
    bit_budget: int = A.DEFAULT_BIT_BUDGET
    long: bool = False
    jobs: int = 1
    fmt: str = "json"

    def __post_init__(self) -> None:
        for name in ("budget_ms", "enum_budget", "bit_budget", "jobs"):
            if getattr(self, name) <= 0:
                raise UsageError(f"{name.replace('_', '-')} must be positive")


# ------------------------------------------------------------------ output

def _plain(obj):
    """JSON-ready copy with every integer beyond 2^53 as a decimal string."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return obj if abs(obj) < 1 << 53 else str(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _rows(obj) -> list[dict]:
    if isinstance(obj, list) and all(isinstance(r, dict) for r in obj):
        return obj
    if isinstance(obj, dict) and "comparisons" in obj and "conclusion" in obj:
        return [dict(c, conclusion=obj["conclusion"]) for c in obj["comparisons"]] or \
            [{"conclusion": obj["conclusion"]}]
    if isinstance(obj, dict):
        return [{"key": k, "value": json.dumps(v) if isinstance(v, (dict, list)) else v} for k, v in obj.items()]
    return [{"value": obj}]


def render(obj, fmt: str) -> str:
    obj = _plain(obj)
    if fmt == "json":
        return json.dumps(obj, indent=2) + "\n"
    if fmt == "csv":
        rows = _rows(obj)
        fields: list[str] = []
        for r in rows:
            fields += [k for k in r if k not in fields]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (dict, list)) else v for k, v in r.items()})
        return buf.getvalue()
    lines = []
    for r in _rows(obj):
        lines.append("  ".join(f"{k}={v}" for k, v in r.items()))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- commands

def _group(text: str):
    try:
        return parse_group(text)
    except InvalidGroup as e:
        raise UsageError(str(e)) from None


def cmd_solve(a, cfg: Config):
    if (a.x is None) == (a.base is None):
        raise UsageError("give exactly one of --x or --base")
    if a.base is not None:
        res = solve_power(a.base, a.power, cfg.budget_ms)
    else:
        res = solve(a.x, cfg.budget_ms)
    recs = [dict(r, **GQParams(p.s, p.t).flags()) for r, p in zip(res.records(), res.solutions)]
    code = OK if res.complete else INCONCLUSIVE
    if not res.complete:
        return {"x": str(res.x), "solutions": recs, "complete": False,
                "unresolved_cofactor": str(res.unresolved_cofactor)}, code
    return recs, code


def cmd_order(a, cfg):
    g = _group(a.group)
    return {"group": str(g), "order": str(order(g))}, OK


def cmd_centraliser(a, cfg):
    g = _group(a.group)
    c, kind = A.max_centraliser(g)
    out = witness_centraliser(g).as_dict()
    out.update({"order": str(order(g)), "largest_known": str(c), "largest_kind": kind})
    return out, OK


def cmd_table2(a, cfg):
    g = _group(a.group)
    rs = [a.r] if a.r else [1, 2, 3]
    rows = []
    for r in rs:
        v = table2_verdict(g, r)
        rows.append({"group": str(g), "r": r, "member": v.member, "basis": v.basis})
    return rows, OK


def _report(rep: A.ScenarioReport):
    return rep.as_dict(), _EXIT[rep.conclusion]


def cmd_table3(a, cfg):
    return _report(A.reproduce_table3(extended=not a.rows_only, budget_ms=cfg.budget_ms))


def _geometry(a, cfg) -> geo.IncidenceGeometry:
    if a.load:
        with open(a.load, encoding="ascii") as fh:
            return geo.IncidenceGeometry.load(fh.read())
    if not a.build:
        raise UsageError("give --build KIND (with --q) or --load FILE")
    try:
        return geo.build_classical(a.build, a.q)
    except (geo.GeometryError, ValueError) as e:
        raise UsageError(str(e)) from None


def _profile(group, cfg) -> dict[int, int]:
    if group.order > LONG_ENUMERATION and not cfg.long:
        raise EnumerationRefused(f"profiling {group.order} elements needs --long")
    return geo.fixity_profile(group, cfg.enum_budget)


def cmd_geometry(a, cfg):
    g = _geometry(a, cfg)
    o = geo.verify_gq(g)
    out = {"name": g.name, "points": g.num_points, "lines": g.num_lines, "s": o.s, "t": o.t,
           "srg": list(geo.srg_params(g))}
    if a.dump:
        geo.write_dump(a.dump, g, o)
    if a.aut or a.fixity_profile or a.fixing is not None:
        aut = geo.automorphism_group(g)
        out["aut_order"] = str(aut.order)
        if a.fixity_profile:
            prof = _profile(aut, cfg)
            prof[g.num_points] -= 1  # drop the identity
            out["fixity_profile"] = {k: v for k, v in prof.items() if v}
        if a.fixing is not None:
            if aut.order > LONG_ENUMERATION and not cfg.long:
                raise EnumerationRefused("searching this group needs --long")
            p = geo.find_fixing(aut, a.fixing, cfg.enum_budget)
            if p is None:
                out["fixing"] = None
            else:
                sub = geo.fixed_substructure(g, geo.collineation(g, p), o)
                out["fixing"] = {"points": a.fixing, "case": sub.case.value,
                                 "fixed_lines": sub.fixed_lines,
                                 "sub_order": [sub.sub_order.s, sub.sub_order.t] if sub.sub_order else None,
                                 "bounds_hold": sub.bounds_hold}
    return out, OK


def cmd_fixity_profile(a, cfg):
    if a.generators:
        group = build_bsgs(read_generators(a.generators))
        name = a.generators
    elif a.group:
        group, name = embedded_group(a.group), a.group
    else:
        g = _geometry(a, cfg)
        group, name = geo.automorphism_group(g), g.name
    prof = _profile(group, cfg)
    return {"group": name, "degree": group.degree, "order": str(group.order), "profile": prof}, OK


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def cmd_partition(a, cfg):
    if a.sizes is not None:
        if a.target is None:
            raise UsageError("--sizes needs --target")
        found = A.partition_exists(_int_list(a.sizes), a.target, cfg.bit_budget)
        out = {"target": a.target, "exists": found}
        if a.enumerate:
            items = [(s, i) for i, s in enumerate(_int_list(a.sizes))]
            parts, trunc = A.enumerate_partitions(items, a.target, a.cap)
            out.update({"partitions": [list(p) for p in parts], "truncated": trunc})
        return out, OK
    if not a.group:
        raise UsageError("give --sizes and --target, or --group NAME --r R")
    return _report(A.partition_scenario(a.group, a.r, cfg.bit_budget, cfg.budget_ms))


def cmd_pds(a, cfg):
    if a.positive_control:
        v = A.positive_control()
        return v.as_dict(), OK if v.passed else FOUND
    if not a.group:
        raise UsageError("give --group NAME or --positive-control")
    try:
        rep = A.pds_scenario(a.group, a.r, long=cfg.long, cap=a.cap, method=a.method,
                             budget_ms=cfg.budget_ms, jobs=cfg.jobs)
    except ValueError as e:
        raise UsageError(str(e)) from None
    return _report(rep)


def cmd_sd_scenario(a, cfg):
    return _report(A.sd_scenario(_group(a.group), a.k, a.r, cfg.budget_ms))


def _witness(text: str) -> tuple[int, str]:
    f, _, desc = text.partition(":")
    if not f.isdigit():
        raise UsageError(f"witness must look like F or F:description, got {text!r}")
    return int(f), desc or "witness"


def cmd_fixity_scenario(a, cfg):
    if a.scenario:
        if a.scenario not in A.load_scenarios():
            raise UsageError(f"unknown scenario {a.scenario!r}; known: {sorted(A.load_scenarios())}")
        return _report(A.run_embedded_scenario(a.scenario, a.r, cfg.budget_ms))
    if a.omega is None or not a.witness:
        raise UsageError("give --scenario ID, or --omega N with at least one --witness")
    return _report(A.fixity_scenario(a.omega, a.r, [_witness(w) for w in a.witness], cfg.budget_ms))


def cmd_psl2_sweep(a, cfg):
    if a.q_max > PSL2_DEFAULT_MAX and not cfg.long:
        raise UsageError(f"q-max above {PSL2_DEFAULT_MAX} needs --long")
    return _report(A.psl2_sweep(a.q_max, cfg.budget_ms, cfg.jobs))


def cmd_replicate_claims(a, cfg):
    out = replicate_claims(a.q_max)
    return out, FOUND if out["violations"] else OK


def cmd_bounds(a, cfg):
    if a.desk_check is not None:
        return A.desk_check(a.desk_check), OK
    if a.s is None or a.t is None:
        raise UsageError("give --s and --t, or --desk-check S_MAX")
    try:
        return theorem_bound_report(a.s, a.t), OK
    except ValueError as e:
        raise UsageError(str(e)) from None


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    def common_options(suppress: bool) -> argparse.ArgumentParser:
        # subcommand copies must not overwrite values given before the subcommand
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        c = _Parser(add_help=False)
        c.add_argument("--budget-ms", type=int, default=d(DEFAULT_BUDGET_MS), help="factoring budget per number")
        c.add_argument("--enum-budget", type=int, default=d(DEFAULT_ENUM_BUDGET), help="max group elements to enumerate")
        c.add_argument("--bit-budget", type=int, default=d(A.DEFAULT_BIT_BUDGET), help="subset-sum bitset size")
        c.add_argument("--long", action="store_true", default=d(False), help="allow long-running computations")
        c.add_argument("--jobs", type=int, default=d(1), help="parallel workers for sweeps")
        c.add_argument("--format", choices=["json", "csv", "text"], default=d("json"))
        return c

    common = common_options(True)
    p = _Parser(prog="gqprim", description="Exact checks for point-primitive generalised quadrangles",
                parents=[common_options(False)])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.set_defaults(func=func)
        return sp

    sp = add("solve", cmd_solve, "orders (s,t) with (s+1)(st+1) = x")
    sp.add_argument("--x", type=int)
    sp.add_argument("--base", type=int, help="solve base**power")
    sp.add_argument("--power", type=int, default=1)

    add("order", cmd_order, "order of a simple group").add_argument("--group", required=True)
    add("centraliser", cmd_centraliser, "witness centraliser").add_argument("--group", required=True)

    sp = add("table2", cmd_table2, "centraliser-threshold membership")
    sp.add_argument("--group", required=True)
    sp.add_argument("--r", type=int, choices=[1, 2, 3])

    sp = add("table3", cmd_table3, "reproduce the alternating/sporadic solutions table")
    sp.add_argument("--rows-only", action="store_true", help="skip the no-solution checks")

    def geometry_args(sp):
        sp.add_argument("--build", choices=["W32", "Qminus5", "Qminus5q"])
        sp.add_argument("--q", type=int, default=2)
        sp.add_argument("--load", help="incidence dump file")

    sp = add("geometry", cmd_geometry, "build and verify a classical GQ")
    geometry_args(sp)
    sp.add_argument("--aut", action="store_true", help="compute the collineation group")
    sp.add_argument("--fixity-profile", action="store_true")
    sp.add_argument("--fixing", type=int, help="classify the substructure of a collineation fixing this many points")
    sp.add_argument("--dump", help="write the incidence dump here")

    sp = add("fixity-profile", cmd_fixity_profile, "fixed-point counts over a permutation group")
    geometry_args(sp)
    sp.add_argument("--generators", help="generator file: degree, then one permutation per line")
    sp.add_argument("--group", help="embedded group (M11, J1)")

    sp = add("partition", cmd_partition, "subset sums of class sizes")
    sp.add_argument("--sizes")
    sp.add_argument("--target", type=int)
    sp.add_argument("--enumerate", action="store_true")
    sp.add_argument("--cap", type=int, default=10**6)
    sp.add_argument("--group", help="Alt7, Alt8, J1, ...")
    sp.add_argument("--r", type=int, default=1)

    sp = add("pds", cmd_pds, "partial difference set elimination")
    sp.add_argument("--group", choices=["Alt6", "M11"])
    sp.add_argument("--r", type=int, default=2, choices=[1, 2])
    sp.add_argument("--method", choices=["fast", "direct"], default="fast")
    sp.add_argument("--cap", type=int, default=10**6)
    sp.add_argument("--positive-control", action="store_true")

    sp = add("sd-scenario", cmd_sd_scenario, "diagonal-type scenario")
    sp.add_argument("--group", required=True)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--r", type=int, required=True)

    sp = add("fixity-scenario", cmd_fixity_scenario, "product-action fixity scenario")
    sp.add_argument("--scenario", help="embedded scenario id (M23, B, Sym7)")
    sp.add_argument("--omega", type=int)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--witness", action="append", help="F or F:description; repeatable")

    sp = add("psl2-sweep", cmd_psl2_sweep, "solve |PSL2(q)| for all prime powers q")
    sp.add_argument("--q-max", type=int, default=PSL2_DEFAULT_MAX)

    sp = add("replicate-claims", cmd_replicate_claims, "check the embedded centraliser inequalities")
    sp.add_argument("--q-max", type=int, default=100)

    sp = add("bounds", cmd_bounds, "fixed-point bound verdicts for (s,t)")
    sp.add_argument("--s", type=int)
    sp.add_argument("--t", type=int)
    sp.add_argument("--desk-check", type=int, metavar="S_MAX")
    return p


def run(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = Config(a.budget_ms, a.enum_budget, a.bit_budget, a.long, a.jobs, a.format)
        obj, code = a.func(a, cfg)
    except (UsageError, ValueError) as e:
        print(f"gqprim {a.command}: {e}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return USAGE
    except (EnumerationRefused, A.BudgetExceeded) as e:
        print(f"gqprim {a.command}: {e}", file=sys.stderr)
        return INCONCLUSIVE
    out.write(render(obj, cfg.fmt))
    return code


def main(argv: list[str] | None = None) -> int:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()

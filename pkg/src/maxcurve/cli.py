"""Command line interface: ``maxcurve <group> <command> [options]``.

Exit status is 2 for usage errors, 1 when an applicable check fails and 0
otherwise.  A YAML file given with ``--config`` may supply any option; flags on
the command line take precedence.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Sequence

import yaml

from .curve import CurveError, KummerCurve
from .family import (
    admissible_congruences,
    make_family_curve,
    make_hermitian,
    match_reference_table,
    reproduce_table,
    table_csv,
    table_text,
)
from .places import DEFAULT_SMAX, count_rational_points, is_maximal, places_of_degree
from .rrspace import rr_basis, semigroup_at
from .sv import canonical_system, order_data, system_D
from .verify import CHECKS, Context, run_all

SCHEMA = 1


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    kind: str = "family"
    m: int | None = None
    q: int | None = None
    factors: list = field(default_factory=list)
    smax: int = DEFAULT_SMAX
    seed: int = 0
    format: str = "text"
    out: str | None = None
    gmax: int = 7
    system: str = "D"
    degree: int = 1

    def curve(self) -> KummerCurve:
        if self.q is None:
            raise UsageError("--q is required")
        if self.kind == "hermitian":
            return make_hermitian(self.q)
        if self.m is None:
            raise UsageError("--m is required")
        if self.kind == "family":
            return make_family_curve(self.m, self.q)
        if self.kind == "custom":
            if not self.factors:
                raise UsageError("--factors is required for custom curves")
            return KummerCurve(self.q, self.m, self.factors, kind="custom")
        raise UsageError(f"unknown curve kind {self.kind!r}")


def _parse_factors(text: str) -> list[tuple[int, int]]:
    out = []
    for part in text.split(","):
        a, _, e = part.partition(":")
        out.append((int(a), int(e or 1)))
    return out


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="YAML file with default option values")
    p.add_argument("--kind", choices=["family", "hermitian", "custom"], help="curve model")
    p.add_argument("--m", type=int, help="cover degree m")
    p.add_argument("--q", type=int, help="the curve is over F_{q^2}")
    p.add_argument("--factors", help="custom f as root:mult pairs, e.g. 0:1,4:2")
    p.add_argument("--smax", type=int, help=f"largest place degree scanned (default {DEFAULT_SMAX})")
    p.add_argument("--seed", type=int, help="seed for all sampling (default 0)")
    p.add_argument("--format", choices=["text", "json", "csv"], help="output format")
    p.add_argument("--out", help="write output to this file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="maxcurve", description="Maximal Kummer curves: places, gaps and Stohr-Voloch invariants.")
    groups = ap.add_subparsers(dest="group", required=True)

    curve = groups.add_parser("curve", help="basic curve data")
    cs = curve.add_subparsers(dest="command", required=True)
    for name, hlp in [("info", "model, genus and maximality"), ("points", "number of rational points"),
                      ("places", "places of a given degree"), ("gaps", "Weierstrass gaps")]:
        sp = cs.add_parser(name, help=hlp)
        _common(sp)
        if name == "places":
            sp.add_argument("--degree", type=int, help="place degree (default 1)")

    sv = groups.add_parser("sv", help="Stohr-Voloch data of the system D or K")
    ss = sv.add_subparsers(dest="command", required=True)
    for name, hlp in [("orders", "generic and Frobenius orders"), ("ram", "ramification divisor"),
                      ("frob", "Frobenius divisor")]:
        sp = ss.add_parser(name, help=hlp)
        _common(sp)
        sp.add_argument("--system", choices=["D", "K"], help="D = |(q+1)P0| (default), K = canonical")

    ver = groups.add_parser("verify", help="run structural checks")
    ver.add_argument("name", choices=sorted(CHECKS) + ["all"])
    _common(ver)

    fam = groups.add_parser("family", help="the genus/congruence table")
    fs = fam.add_subparsers(dest="command", required=True)
    t = fs.add_parser("table", help="reproduce the table up to a genus")
    _common(t)
    t.add_argument("--gmax", type=int, help="largest genus (default 7)")
    cg = fs.add_parser("congruence", help="admissible q mod m for a genus")
    _common(cg)
    cg.add_argument("--g", type=int, required=True)

    rep = groups.add_parser("report", help="full JSON report for one curve")
    _common(rep)
    return ap


def _config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        try:
            with open(args.config) as fh:
                data = yaml.safe_load(fh) or {}
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        if not isinstance(data, dict):
            raise UsageError("config file must hold a mapping")
        for k, v in data.items():
            if not hasattr(cfg, k):
                raise UsageError(f"unknown config key {k!r}")
            setattr(cfg, k, _parse_factors(v) if k == "factors" and isinstance(v, str) else v)
    for k in ("kind", "m", "q", "smax", "seed", "format", "out", "gmax", "system", "degree"):
        v = getattr(args, k, None)
        if v is not None:
            setattr(cfg, k, v)
    if getattr(args, "factors", None):
        cfg.factors = _parse_factors(args.factors)
    return cfg


def _place(P) -> dict:
    return {"center": "inf" if P.center is None else P.center, "branch_id": P.branch,
            "degree": P.degree, "e": P.ram_index}


def _curve_cmd(cmd: str, cfg: RunConfig) -> tuple[dict, str]:
    c = cfg.curve()
    if cmd == "points":
        n = count_rational_points(c)
        return {"points": n, "hasse_weil_bound": c.hasse_weil_max()}, str(n)
    if cmd == "info":
        maximal, rep = is_maximal(c)
        d = c.describe()
        d["branch_data"] = [["inf" if a is None else a, v, nb, e] for a, v, nb, e in c.branch_data()]
        d["base_place"] = _place(c.base_place())
        d["maximal"] = maximal
        d.update(rep)
        text = "\n".join(f"{k}: {v}" for k, v in d.items())
        return d, text
    if cmd == "places":
        pl = places_of_degree(c, cfg.degree)
        recs = [_place(P) for P in pl]
        text = "\n".join(f"{r['degree']} {r['center']} {r['branch_id']} {r['e']}" for r in recs)
        return {"degree": cfg.degree, "count": len(pl), "places": recs}, f"{len(pl)} places\n{text}"
    if cmd == "gaps":
        P0 = c.base_place()
        sg0 = semigroup_at(c, P0)
        hist: dict[str, int] = {}
        for P in places_of_degree(c, 1):
            key = ",".join(map(str, semigroup_at(c, P).gaps))
            hist[key] = hist.get(key, 0) + 1
        res = {"base_place": _place(P0), "base_gaps": sg0.gaps, "base_nongaps": sg0.nongaps,
               "pole_orders_L(q+1)P0": rr_basis(c, P0, c.q + 1).pole_orders,
               "rational_gap_sequences": dict(sorted(hist.items()))}
        text = [f"P0 gaps {sg0.gaps}  nongaps<= {sg0.bound}: {sg0.nongaps}"]
        text += [f"{n:4d} rational places with gaps [{k}]" for k, n in sorted(hist.items())]
        return res, "\n".join(text)
    raise UsageError(cmd)


def _sv_cmd(cmd: str, cfg: RunConfig) -> tuple[dict, str]:
    c = cfg.curve()
    L = system_D(c) if cfg.system == "D" else canonical_system(c)
    od = order_data(L, cfg.smax)
    if cmd == "orders":
        res = {"system": L.name, "epsilon": list(od.epsilon), "nu": list(od.nu), "N": L.N, "degree": L.degree}
        return res, f"epsilon = {list(od.epsilon)}\nnu = {list(od.nu)}"
    div, deg = (od.R, od.degR) if cmd == "ram" else (od.S, od.degS)
    res = {"system": L.name, "divisor": div.to_records(), "degree": deg}
    mult: dict[int, int] = {}
    for P, k in div.items():
        mult[k] = mult.get(k, 0) + 1
    text = f"deg = {deg}\n" + "\n".join(f"{n} places of weight {k}" for k, n in sorted(mult.items()))
    return res, text


def _family_cmd(cmd: str, cfg: RunConfig, args) -> tuple[dict, str, str | None]:
    if cmd == "table":
        rows = reproduce_table(cfg.gmax)
        matches = match_reference_table(rows)
        res = {"rows": [{"g": r.genus, "m": r.m, "residue": r.residue, "modulus": r.modulus,
                         "smallest_q": r.smallest_q, "certified": r.certified} for r in rows],
               "reference_rows_matched": sum(ok for _, ok in matches),
               "reference_rows": len(matches)}
        return res, table_text(rows), table_csv(rows)
    rows = []
    for m in range(2 * args.g + 1, 4 * args.g + 1):
        rows.extend(admissible_congruences(m, args.g))
    res = {"g": args.g, "rows": [{"m": r.m, "residue": r.residue, "modulus": r.modulus} for r in rows]}
    text = "\n".join(f"m = {r.m}: q = {r.residue} (mod {r.modulus})" for r in rows)
    csv = "m,residue,modulus\n" + "".join(f"{r.m},{r.residue},{r.modulus}\n" for r in rows)
    return res, text, csv


def _verify(cfg: RunConfig, names: list[str]) -> tuple[dict, str, int]:
    c = cfg.curve()
    ctx = Context(c, seed=cfg.seed, s_max=cfg.smax)
    reports = run_all(ctx, names)
    failed = [r for r in reports if r.status == "fail"]
    res = {"reports": [r.to_dict() for r in reports], "failed": len(failed)}
    text = "\n".join(f"{r.status:>12}  {r.name}" for r in reports)
    return res, text, 1 if failed else 0


def _emit(cfg: RunConfig, command: str, curve: KummerCurve | None, result: dict, text: str, csv: str | None = None) -> None:
    if cfg.format == "json":
        doc = {"schema": SCHEMA, "command": command, "seed": cfg.seed, "smax": cfg.smax, "result": result}
        if curve is not None:
            doc["curve"] = curve.describe()
        out = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    elif cfg.format == "csv":
        if csv is None:
            raise UsageError(f"csv output is not available for {command}")
        out = csv
    else:
        out = text + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def cli_main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
        status = 0
        curve = None
        csv = None
        if args.group == "curve":
            result, text = _curve_cmd(args.command, cfg)
            curve = cfg.curve()
            command = f"curve {args.command}"
        elif args.group == "sv":
            result, text = _sv_cmd(args.command, cfg)
            curve = cfg.curve()
            command = f"sv {args.command}"
        elif args.group == "family":
            result, text, csv = _family_cmd(args.command, cfg, args)
            command = f"family {args.command}"
        elif args.group == "verify":
            names = list(CHECKS) if args.name == "all" else [args.name]
            result, text, status = _verify(cfg, names)
            curve = cfg.curve()
            command = f"verify {args.name}"
        else:
            curve = cfg.curve()
            ver, _, status = _verify(cfg, list(CHECKS))
            result = {
                "points": count_rational_points(curve),
                "orders": {name: order_data(L, cfg.smax).to_dict()
                           for name, L in (("D", system_D(curve)), ("K", canonical_system(curve)))},
                "checks": ver["reports"],
            }
            if cfg.format == "text":
                cfg.format = "json"
            text = ""
            command = "report"
        _emit(cfg, command, curve, result, text, csv)
        return status
    except (UsageError, CurveError) as exc:
        print(f"maxcurve: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())

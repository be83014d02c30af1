"""Command-line front end.

Exit codes: 0 ok, 1 violations found, 2 usage error, 3 resource guard.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from . import classical_support as cs
from .cycle_types import CycleType, SplitPair, class_size_alt, class_size_sym, enumerate_cycle_types
from .errors import GuardExceeded, ParseError
from .group_oracle import (
    GroupSnapshot,
    bigclass_check,
    build_group,
    class_count_profile,
    covering_number,
    eta_exact,
    kfold_expansion_check,
    product_set,
    star_containment_check,
)
from .sym_expansion import (
    Epsilon,
    class_sizes,
    eta_sym,
    expansion_verdict,
    stirling_class_lower,
    support_threshold,
    sym_class_bounds,
)
from .verify import CRITERIA, pmap

SWEEP_CAPS = {"bounds": 40, "threshold": 64, "expansion": 16, "eta": 60}

EXIT_OK, EXIT_VIOLATIONS, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    params: dict[str, Any]
    output_format: str = "text"
    jobs: int = 1
    precision_bits: int = 64
    cache: str | None = None

    def __post_init__(self):
        if self.precision_bits < 16:
            raise ValueError("precision must be at least 16 bits")
        if self.jobs < 1:
            raise ValueError("--jobs must be positive")
        if self.output_format not in ("text", "jsonl", "csv"):
            raise ValueError(f"unknown format {self.output_format!r}")


@dataclass
class Report:
    records: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    violations: int = 0


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


def render(report: Report, fmt: str) -> str:
    records = [_jsonable(r) for r in report.records]
    summary = _jsonable(report.summary)
    if fmt == "jsonl":
        lines = [json.dumps(r) for r in records]
        if summary:
            lines.append(json.dumps({"summary": True, **summary}))
        return "".join(line + "\n" for line in lines)
    if fmt == "csv":
        buf = io.StringIO()
        cols: list[str] = []
        for r in records:
            cols.extend(k for k in r if k not in cols)
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in records:
            w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
        return buf.getvalue()
    out = []
    for r in records:
        out.append("  ".join(f"{k}={_text(v)}" for k, v in r.items()))
    if summary:
        out.append("summary: " + "  ".join(f"{k}={_text(v)}" for k, v in summary.items()))
    return "".join(line + "\n" for line in out)


def _text(v) -> str:
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return str(v)


def _parse_range(text: str) -> tuple[int, int]:
    if ".." in text:
        a, b = text.split("..", 1)
        lo, hi = int(a), int(b)
    else:
        lo = hi = int(text)
    if lo < 1 or hi < lo:
        raise ValueError(f"bad range {text!r}")
    return lo, hi


# -- class-size / star --------------------------------------------------------------------

def cmd_class_size(cfg: RunConfig) -> Report:
    p = cfg.params
    ct = CycleType.parse(p["type"], p["n"])
    rec: dict[str, Any] = {"n": ct.n, "type": str(ct), "group": p["group"], "support": ct.support}
    if p["group"] == "alt":
        r = class_size_alt(ct)
        if isinstance(r, SplitPair):
            rec.update(split=True, sizes=[r.first, r.second])
        else:
            rec.update(split=False, sizes=[r])
    else:
        rec["sizes"] = [class_size_sym(ct)]
    return Report([rec])


def cmd_star(cfg: RunConfig) -> Report:
    p = cfg.params
    n = p["n"]
    ct1, ct2 = CycleType.parse(p["type1"], n), CycleType.parse(p["type2"], n)
    v = expansion_verdict(n, ct1, ct2, p["eps"])
    rec = v.record()
    rec["star_type"] = str(v.star_type)
    return Report([rec])


# -- sweeps ---------------------------------------------------------------------------------

def _sweep_bounds(args) -> list[dict]:
    n, bits = args
    by_s: dict[int, list[int]] = {}
    for ct in enumerate_cycle_types(n):
        by_s.setdefault(ct.support, []).append(class_size_sym(ct))
    rows = []
    for s in sorted(by_s):
        sizes = by_s[s]
        b = sym_class_bounds(n, s)
        st = stirling_class_lower(n, s, bits)
        ok = b.lower <= min(sizes) and max(sizes) <= b.upper and st <= min(sizes)
        rows.append({"n": n, "s": s, "classes": len(sizes), "min_size": min(sizes), "max_size": max(sizes),
                     "lower": b.lower, "upper": b.upper, "stirling_lower": st, "ok": ok})
    return rows


def _sweep_threshold(args) -> list[dict]:
    n, alt = args
    bad = support_threshold(n, alternating=alt)
    return [{"n": n, "group": "alt" if alt else "sym", "violating_types": [str(t) for t in bad],
             "ok": not bad}]


def _sweep_expansion(args) -> list[dict]:
    n, eps = args
    types = [ct for ct in enumerate_cycle_types(n) if not ct.is_identity]
    rows = []
    for x, t1 in enumerate(types):
        for t2 in types[x:]:
            if t1.support + t2.support <= n:
                rows.append(expansion_verdict(n, t1, t2, eps).record())
    return rows


def _sweep_eta(args) -> list[dict]:
    n, s, alt, bits = args
    iv = eta_sym(n, s, alternating=alt, bits=bits)
    trivial = n == 1 or (alt and n == 2)
    ok = iv.lo >= 1 and (iv.lo > 1 or trivial) and (not trivial or iv.hi == 1)
    rec = {"n": n, "s": s, "group": "alt" if alt else "sym"}
    if iv.is_exact:
        rec["eta"] = iv.lo
    else:
        rec["eta_lo"], rec["eta_hi"] = iv.lo, iv.hi
    rec["ok"] = ok
    return [rec]


def cmd_sweep(cfg: RunConfig) -> Report:
    p = cfg.params
    mode = p["mode"]
    lo, hi = p["n"]
    if hi > SWEEP_CAPS[mode]:
        raise GuardExceeded(f"sweep --mode {mode} is capped at n <= {SWEEP_CAPS[mode]}")
    alt = p["group"] == "alt"
    ns = range(lo, hi + 1)
    if mode == "bounds":
        tasks, fn = [(n, cfg.precision_bits) for n in ns], _sweep_bounds
    elif mode == "threshold":
        tasks, fn = [(n, alt) for n in ns], _sweep_threshold
    elif mode == "expansion":
        tasks, fn = [(n, p["eps"]) for n in ns], _sweep_expansion
    else:
        tasks, fn = [(n, p["s"], alt, cfg.precision_bits) for n in ns], _sweep_eta
    records = [r for rows in pmap(fn, tasks, cfg.jobs) for r in rows]
    if mode == "expansion":
        failed = sum(1 for r in records if not r["verdict"])
        return Report(records, {"mode": mode, "records": len(records), "verdicts_false": failed})
    bad = sum(1 for r in records if not r["ok"])
    return Report(records, {"mode": mode, "records": len(records), "violations": bad}, bad)


# -- oracle ---------------------------------------------------------------------------------

def _select(g: GroupSnapshot, text: str):
    ids: set[int] = set()
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if item == "all":
            ids.update(range(len(g.classes)))
        elif item.startswith("#"):
            ids.add(int(item[1:]))
        else:
            if g.labels is None:
                raise ParseError(f"{g.name} classes must be selected as #index, got {item!r}")
            ct = CycleType.parse(item, g.meta["n"])
            found = g.classes_of_type(ct)
            if not found:
                raise ValueError(f"{g.name} has no class of type {ct}")
            ids.update(found)
    return g.normal_subset(ids)


def _need(p: dict, key: str, count: int = 1):
    vals = p.get(key) or []
    if len(vals) < count:
        raise ValueError(f"--{key} must be given at least {count} time(s)")
    return vals


def cmd_oracle(cfg: RunConfig) -> Report:
    p = cfg.params
    g = build_group(p["group"], cfg.cache)
    task = p["task"]
    head = {"group": g.name, "order": g.order}
    if task == "classes":
        records = []
        for cid, cls in enumerate(g.classes):
            rec = {"class": cid, "size": len(cls)}
            if g.labels is not None:
                rec["type"] = str(g.labels[cid])
            rec["rep"] = list(g.rep(cid))
            records.append(rec)
        eta = eta_exact(g, 1)
        return Report(records, {**head, "classes": len(g.classes),
                                "profile": class_count_profile(g), "eta_1": eta.lo})
    if task == "product":
        a1, a2 = (_select(g, t) for t in _need(p, "classes", 2)[:2])
        prod = product_set(g, a1, a2)
        return Report([{**head, "size1": a1.size, "size2": a2.size, "product_size": prod.size,
                        "product_classes": sorted(prod.class_ids)}])
    if task == "covering":
        a = _select(g, _need(p, "classes")[0])
        b = covering_number(g, a, p["cap"])
        return Report([{**head, "classes": sorted(a.class_ids), "size": a.size,
                        "covering_number": b if b is not None else f"not within cap {p['cap']}"}])
    if task == "bigclass":
        a = _select(g, _need(p, "classes")[0])
        v = bigclass_check(g, a, p["eps"])
        rec = {**head, "classes": sorted(a.class_ids), "subset_size": a.size,
               "largest_class": v.class_id, "largest_size": v.max_class_size,
               "epsilon": str(v.epsilon), "verdict": v.holds, "counting_step": v.counting_holds}
        return Report([rec], violations=int(not v.holds))
    if task == "kfold":
        subsets = [_select(g, t) for t in _need(p, "classes", 2)]
        v = kfold_expansion_check(g, subsets, p["eps"])
        return Report([{**head, "sizes": list(v.sizes), "product_size": v.product_size,
                        "epsilon": str(v.epsilon), "verdict": v.holds}])
    if task == "star-contain":
        n = g.meta.get("n")
        if g.meta.get("kind") != "S":
            raise ValueError("star-contain needs a symmetric group, e.g. --group S5")
        if not p.get("type1") or not p.get("type2"):
            raise ValueError("star-contain needs --type1 and --type2")
        r = star_containment_check(g, CycleType.parse(p["type1"], n), CycleType.parse(p["type2"], n))
        rec = {**head, "type1": str(r.type1), "type2": str(r.type2), "star_type": str(r.star_type),
               "contained": r.contained, "star_size_oracle": r.star_size_oracle,
               "star_size_formula": r.star_size_formula}
        return Report([rec], violations=int(not r.ok))
    raise ValueError(f"unknown oracle task {task!r}")


# -- classical ------------------------------------------------------------------------------

def cmd_classical(cfg: RunConfig) -> Report:
    p = cfg.params
    task = p["task"]
    if task == "exponents":
        if p.get("blocks") is not None:
            blocks = cs.parse_blocks(p["blocks"])
        elif p.get("desc"):
            blocks = dict(cs.JordanDescriptor.parse(p["desc"]).blocks)
        else:
            raise ValueError("exponents needs --blocks or --desc")
        g_lo, g_hi = cs.exponent_g_prime_range(blocks)
        h_lo, h_hi = cs.exponent_h_prime_range(blocks)
        return Report([{"blocks": " ".join(f"{i}^{c}" for i, c in sorted(blocks.items(), reverse=True)),
                        "f": cs.exponent_f(blocks), "g": cs.exponent_g(blocks), "h": cs.exponent_h(blocks),
                        "g_prime": [g_lo, g_hi], "h_prime": [h_lo, h_hi]}])
    if task in ("bounds", "dims"):
        if p.get("spec"):
            spec = cs.ClassicalGroupSpec.parse(p["spec"])
        elif p.get("desc"):
            spec = cs.JordanDescriptor.parse(p["desc"]).spec
        else:
            raise ValueError(f"{task} needs --spec")
        if p.get("s") is None:
            raise ValueError(f"{task} needs --s")
        s = int(p["s"])
        if task == "bounds":
            iv = cs.class_size_exponents(spec, s)
            rec = {"spec": str(spec), "a": spec.a, "s": s, "kind": "log_q class size", **iv.record()}
            if p.get("eps1") is not None:
                e = cs.eps_exponents(spec, s, Fraction(p["eps1"]))
                rec.update(eps1=p["eps1"], eps_lo=e.lo, eps_hi=e.hi, smallness_hypothesis="unverified")
            return Report([rec])
        iv = cs.algebraic_dim_bounds(spec.family, spec.n, s)
        rec = {"spec": str(spec), "a": spec.a, "s": s, "kind": "dimension", **iv.record()}
        if p.get("s2") is not None and p.get("eps") is not None:
            chk = cs.algebraic_expansion_check(spec.family, spec.n, s, int(p["s2"]), p["eps"])
            rec.update(s2=int(p["s2"]), star_dim_lower=chk.star_dim_lower,
                       factors_dim_upper=chk.factors_dim_upper, epsilon=str(p["eps"]), verdict=chk.holds)
        return Report([rec])
    if task == "star":
        if not p.get("desc") or not p.get("with_desc"):
            raise ValueError("star needs --desc and --with")
        x1 = cs.JordanDescriptor.parse(p["desc"])
        x2 = cs.JordanDescriptor.parse(p["with_desc"])
        if x1.spec != x2.spec:
            raise ValueError("descriptors belong to different groups")
        y = cs.star_classical(x1, x2, x1.spec.n)
        rec = {"x1": str(x1), "x2": str(x2), "y": str(y), "nu1": x1.support, "nu2": x2.support,
               "nu_y": y.support, "additive": y.support == x1.support + x2.support}
        if p.get("eps") is not None:
            v = cs.nextone_verdict(x1.spec, x1, x2, p["eps"],
                                   Fraction(p["eps1"]) if p.get("eps1") is not None else None)
            rec.update(v.record())
        return Report([rec], violations=int(not rec["additive"]))
    raise ValueError(f"unknown classical task {task!r}")


# -- verify ---------------------------------------------------------------------------------

def _parse_criteria(text: str) -> list[int]:
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    for k in out:
        if k not in CRITERIA:
            raise ValueError(f"no criterion {k}")
    return out


def cmd_verify(cfg: RunConfig) -> Report:
    records = []
    total_bad = 0
    per = {}
    for k in cfg.params["criteria"]:
        rep = CRITERIA[k](jobs=cfg.jobs)
        records.extend({"criterion": k, **r} for r in rep.records)
        records.append({"criterion": k, "summary": True, **rep.summary()})
        per[str(k)] = "pass" if rep.passed else "FAIL"
        total_bad += rep.violations
    return Report(records, {"criteria": per, "violations": total_bad}, total_bad)


COMMANDS = {
    "class-size": cmd_class_size,
    "star": cmd_star,
    "sweep": cmd_sweep,
    "oracle": cmd_oracle,
    "classical": cmd_classical,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "jsonl", "csv"], default="text")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    common.add_argument("--precision", type=int, default=64, help="enclosure precision in bits (>= 16)")
    common.add_argument("--cache", default=None, help="directory for oracle snapshot cache")

    parser = argparse.ArgumentParser(prog="classexpand", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("class-size", parents=[common], help="exact class size in S_n or A_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--type", required=True, help='cycle type, e.g. "2^2 1"')
    p.add_argument("--group", choices=["sym", "alt"], default="sym")

    p = sub.add_parser("star", parents=[common], help="star class of two S_n classes and its verdict")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--type1", required=True)
    p.add_argument("--type2", required=True)
    p.add_argument("--eps", default="1/2", help="epsilon as p/q")

    p = sub.add_parser("sweep", parents=[common], help="verification sweeps over a range of n")
    p.add_argument("--mode", choices=sorted(SWEEP_CAPS), required=True)
    p.add_argument("--n", required=True, help="degree or range lo..hi")
    p.add_argument("--eps", default="1/2")
    p.add_argument("--s", default="1", help="eta exponent (rational)")
    p.add_argument("--group", choices=["sym", "alt"], default="sym")

    p = sub.add_parser("oracle", parents=[common], help="brute-force group computations")
    p.add_argument("--group", required=True, help="S5, A6, PSL(3,2), SL(2,3), GL(3,2), Sp(2,5) ...")
    p.add_argument("--task", required=True,
                   choices=["classes", "product", "covering", "bigclass", "kfold", "star-contain"])
    p.add_argument("--classes", action="append",
                   help='normal subset: comma-separated cycle types, #index or "all"; repeat for several')
    p.add_argument("--eps", default="1/2")
    p.add_argument("--cap", type=int, default=20)
    p.add_argument("--type1")
    p.add_argument("--type2")

    p = sub.add_parser("classical", parents=[common], help="support calculus for classical groups")
    p.add_argument("--task", required=True, choices=["exponents", "bounds", "star", "dims"])
    p.add_argument("--spec", help='group, e.g. "L 3 2" or "Sp 8 3"')
    p.add_argument("--desc", help='descriptor, e.g. "Sp 8 3 | +1 | 2^1 1^6 | 0"')
    p.add_argument("--with", dest="with_desc", help="second descriptor for --task star")
    p.add_argument("--blocks", help='Jordan blocks, e.g. "2^1 1^1"')
    p.add_argument("--s", type=int)
    p.add_argument("--s2", type=int)
    p.add_argument("--eps")
    p.add_argument("--eps1")

    p = sub.add_parser("verify", parents=[common], help="run the acceptance sweeps")
    p.add_argument("--criteria", default="1-12", help='e.g. "1-12" or "1,2,7"')
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    params = {k: v for k, v in vars(args).items()
              if k not in ("command", "format", "jobs", "precision", "cache")}
    if args.command in ("star", "sweep", "oracle") or (args.command == "classical" and args.eps):
        params["eps"] = Epsilon.parse(args.eps)
    if args.command == "sweep":
        params["n"] = _parse_range(args.n)
        params["s"] = Fraction(args.s)
        if params["s"] <= 0:
            raise ValueError("--s must be positive")
    if args.command == "classical" and args.eps1 is not None:
        params["eps1"] = str(Fraction(args.eps1))
    if args.command == "verify":
        params["criteria"] = _parse_criteria(args.criteria)
    return RunConfig(args.command, params, args.format, args.jobs, args.precision, args.cache)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        report = COMMANDS[cfg.command](cfg)
    except GuardExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_GUARD
    except (ParseError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(render(report, cfg.output_format))
    return EXIT_VIOLATIONS if report.violations else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

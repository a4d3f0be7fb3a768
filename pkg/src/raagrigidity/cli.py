"""Command-line entry point.

Exit codes: 0 success or agreement, 1 validation failure or mismatch,
2 unreadable input.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import config as config_mod
from . import development as dev_mod
from .exact import format_length, parse_length
from .graph import validate
from .reconstruction import (
    CoverageError,
    MismatchReport,
    OracleError,
    ReconstructionError,
    build_isometry,
    comparison_words,
    format_table,
    geometric_oracle,
    minset_gap,
    parse_table,
    reconstruct_rectangle,
    table_oracle,
)
from .words import WordError, format_word, parse_word

log = logging.getLogger("raagrigidity")

OK, FAIL, IO = 0, 1, 2


class InputError(Exception):
    pass


def _load(path) -> config_mod.ExperimentConfig:
    if path is None:
        raise InputError("--config is required")
    try:
        return config_mod.load(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except (ValueError, KeyError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args) -> int:
    cfg = _load(args.config)
    report = validate(cfg.graph)
    if args.format == "json":
        _emit(json.dumps({"ok": report.ok, "violations": [str(v) for v in report.violations]}) + "\n", args.out)
    else:
        _emit(str(report) + "\n", args.out)
    return OK if report.ok else FAIL


def cmd_length(args) -> int:
    cfg = _load(args.config)
    X = cfg.model()
    words = [parse_word(w) for w in args.word] if args.word else cfg.words
    if not words:
        raise InputError("no words: pass --word or add a [words] section")
    rows = [(w, X.length(w)) for w in words]
    if args.format == "json":
        data = [{"word": format_word(w), "length": format_length(v)} for w, v in rows]
        _emit(json.dumps(data, indent=2) + "\n", args.out)
    elif args.format == "table":
        _emit(format_table(rows), args.out)
    elif len(rows) == 1 and args.word:
        _emit(format_length(rows[0][1]) + "\n", args.out)
    else:
        _emit("".join(f"{format_word(w)}\t{format_length(v)}\n" for w, v in rows), args.out)
    return OK


def _pair(cfg, args):
    specs = args.subgroups or list(cfg.subgroups)[:2]
    if len(specs) != 2:
        raise InputError("need two subgroups (--subgroups G H or a [subgroups] section)")
    return cfg.subgroup(specs[0]), cfg.subgroup(specs[1])


def cmd_gap(args) -> int:
    cfg = _load(args.config)
    X = cfg.model()
    G, H = _pair(cfg, args)
    budget = args.budget or cfg.budget
    d, _ = X.minset_distance(X.minset(G), X.minset(H))
    est = minset_gap(geometric_oracle(X), G, H, budget, target=d * 2)
    rows = [(n, b) for n, b in est.history]
    if args.format == "json":
        data = {
            "G": str(G), "H": str(H), "best": format_length(est.best), "best_float": float(est.best),
            "two_d": format_length(d * 2), "attained": est.attained, "intersecting": est.intersecting,
            "witness": [list(est.witnesses[0]), list(est.witnesses[1])],
            "history": [{"N": n, "best": format_length(b), "float": float(b)} for n, b in rows],
            "last_increments": est.increments(),
        }
        _emit(json.dumps(data, indent=2) + "\n", args.out)
    elif args.format == "csv":
        _emit("N,best,best_float\n" + "".join(f"{n},{format_length(b)},{float(b):.15g}\n" for n, b in rows), args.out)
    else:
        lines = [f"G = {G}", f"H = {H}", "N\tbest"]
        lines += [f"{n}\t{format_length(b)}  ({float(b):.12g})" for n, b in rows]
        lines.append(f"2d = {format_length(d * 2)}  attained: {est.attained}  intersecting: {est.intersecting}")
        if not est.attained and not est.intersecting:
            lines.append("last increments: " + " ".join(f"{x:.3g}" for x in est.increments()))
        _emit("\n".join(lines) + "\n", args.out)
    return OK


def cmd_reconstruct(args) -> int:
    cfg = _load(args.config)
    X = cfg.model()
    G, H = _pair(cfg, args)
    try:
        rep = reconstruct_rectangle(geometric_oracle(X), X.group, G, H, args.budget or 3)
    except ReconstructionError as exc:
        _emit(f"reconstruction failed: {exc}\n", args.out)
        return FAIL
    if args.format == "json":
        _emit(json.dumps(rep.to_dict(), indent=2) + "\n", args.out)
    else:
        lines = [f"kind: {rep.kind}"]
        for s in rep.sides:
            d = {1: "same", -1: "opposite", None: "-"}[s.direction]
            lines.append(f"side {s.length}: G{list(s.gridline_g)} <-> H{list(s.gridline_h)}  {d}")
        if rep.intersection:
            lines.append(f"G ∩ H generated by {format_word(rep.intersection)}")
        _emit("\n".join(lines) + "\n", args.out)
    return OK


def _read_table(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    if path.endswith(".json"):
        return {parse_word(r["word"]): parse_length(r["length"]) for r in json.loads(text)}
    return parse_table(text)


def cmd_rigidity(args) -> int:
    cfg = _load(args.config)
    XA = cfg.model()
    oa = geometric_oracle(XA)
    other = args.other
    if other.endswith((".tsv", ".txt", ".json")):
        table = _read_table(other)
        ob = table_oracle(XA.group, table)
        for w in table:
            if not oa.agrees(ob, w):
                _emit(str(MismatchReport(w, oa(w), ob(w))) + "\n", args.out)
                return FAIL
        _emit(f"length functions agree on {len(table)} table words\n", args.out)
        return OK
    cfgb = _load(other)
    ob = geometric_oracle(cfgb.model())
    family = [cfg.subgroup(name) for name in cfg.subgroups]
    words = comparison_words(XA.group) + list(cfg.words)
    try:
        res = build_isometry(oa, ob, XA.group, family, sample=args.sample or cfg.sample,
                             seed=args.seed if args.seed is not None else cfg.seed, words=words)
    except CoverageError as exc:
        _emit(f"coverage failure: {exc}\n", args.out)
        return FAIL
    if isinstance(res, MismatchReport):
        if args.format == "json":
            w = res.witness
            data = {"result": "mismatch", "reason": res.reason, "message": str(res)}
            if res.reason == "length":
                data["witness"] = format_word(w)
            _emit(json.dumps(data, indent=2) + "\n", args.out)
        else:
            _emit(f"mismatch: {res}\n", args.out)
        return FAIL
    checks = {k: v for k, v in res.checks.items() if k != "failures"}
    if args.format == "json":
        data = {"result": "isometry" if res.ok else "failed", "checks": checks,
                "failures": [str(f) for f in res.checks.get("failures", [])],
                "charts": [{"subgroup": str(c.subgroup), "reference": str(c.reference),
                            "anchor_a": [str(x) for x in c.anchor_a],
                            "anchor_b": [str(x) for x in c.anchor_b]} for c in res.charts]}
        _emit(json.dumps(data, indent=2) + "\n", args.out)
    else:
        lines = [f"{'equivariant isometry verified' if res.ok else 'verification failed'}: {checks}"]
        for c in res.charts:
            lines.append(f"  chart {c.subgroup}: anchored on {c.reference}")
        _emit("\n".join(lines) + "\n", args.out)
    return OK if res.ok else FAIL


def _development_from(args):
    spec = {}
    eps = Fraction(args.epsilon) if args.epsilon else None
    if args.config:
        cfg = _load(args.config)
        spec = cfg.development
        eps = eps or cfg.epsilon
    eps = eps or Fraction(1, 100)
    kind = args.fixture or spec.get("fixture", "bend")
    copies = int(spec.get("copies", 3))
    if kind == "staircase":
        lg, lh, d = (Fraction(spec.get(k, v)) for k, v in (("lg", 3), ("lh", 2), ("d", 1)))
        return dev_mod.staircase(lg, lh, d, copies=copies), eps
    if kind == "bend":
        return dev_mod.bend_fixture(eps, copies=copies), eps
    if kind == "custom":
        lengths = [Fraction(x) for x in spec["lengths"].split()]
        turns = [Fraction(x) for x in spec.get("turns", " ".join("0" * len(lengths))).split()]
        slits = {}
        for tok in spec.get("slits", "").split():
            i, side = tok.split(":")
            slits[int(i)] = {"up": 1, "down": -1}[side]
        return dev_mod.develop(lengths, turns, slits, copies), eps
    raise InputError(f"unknown fixture {kind!r}")


def cmd_develop(args) -> int:
    dev, eps = _development_from(args)
    st = dev_mod.straighten(dev)
    fmt = args.format
    if fmt == "csv":
        _emit(dev_mod.to_csv(dev, st), args.out)
    elif fmt == "svg":
        _emit(dev_mod.to_svg(dev, st), args.out)
    else:
        info = dev_mod.describe(dev, st, eps)
        if fmt == "json":
            _emit(json.dumps(info, indent=2) + "\n", args.out)
        else:
            _emit("".join(f"{k}: {v}\n" for k, v in info.items()), args.out)
    chk = dev_mod.length_bound_check(dev, st, eps)
    return OK if chk.ok else FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="raagrigidity", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats=("text", "json")):
        sp.add_argument("--config")
        sp.add_argument("--out")
        sp.add_argument("--format", choices=formats, default="text")
        return sp

    common(sub.add_parser("validate", help="check the defining graph"))
    sp = common(sub.add_parser("length", help="exact translation lengths"), ("text", "json", "table"))
    sp.add_argument("--word", action="append")
    for name, helptext, formats in (("gap", "minset gap search", ("text", "json", "csv")),
                                    ("reconstruct", "intersection rectangle from lengths", ("text", "json"))):
        sp = common(sub.add_parser(name, help=helptext), formats)
        sp.add_argument("--subgroups", nargs=2, metavar=("G", "H"))
        sp.add_argument("--budget", type=int)
    sp = common(sub.add_parser("rigidity", help="compare two models or a model and a length table"))
    sp.add_argument("other", help="second config, or a .tsv/.json length table")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--sample", type=int)
    sp = common(sub.add_parser("develop", help="planar development and straightening"),
                ("text", "json", "csv", "svg"))
    sp.add_argument("--fixture", choices=("staircase", "bend", "custom"))
    sp.add_argument("--epsilon")
    sp.add_argument("--seed", type=int, default=0)
    return p


COMMANDS = {
    "validate": cmd_validate,
    "length": cmd_length,
    "gap": cmd_gap,
    "reconstruct": cmd_reconstruct,
    "rigidity": cmd_rigidity,
    "develop": cmd_develop,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return IO
    except (config_mod.ConfigError, WordError, OracleError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAIL


if __name__ == "__main__":
    sys.exit(main())

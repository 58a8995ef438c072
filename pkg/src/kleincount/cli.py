"""Command-line front end: generate / count / fit / dim / probe.

Every output file gets a JSON sidecar (``<out>.json``) recording the
resolved configuration, a content digest of the inputs, and run metadata,
so re-running the same configuration reproduces identical bytes.

Exit codes: 0 success, 2 usage or precondition failure, 3 refusal because
the input enumeration cannot support the request.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys

from . import analysis, counting, packing, regions
from .mobius import Circle, Motion, circle_from_center_radius, line_from_normal_offset
from .packing import (
    CircleSet,
    EnumConfig,
    IncompleteEnumerationError,
    PackingSpec,
    enumerate_orbit,
    ideal_triangle_filter,
    period_extend,
    strip_apollonian_spec,
)
from .regions import Rect, parse_region

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INCOMPLETE = 3


def parse_ladder(expr: str) -> list:
    """Ladder grammar: ``pow2:lo:hi`` (2^lo .. 2^hi), ``pow2neg:lo:hi``
    (2^-lo .. 2^-hi), or ``list:v1,v2,...``."""
    head, _, body = expr.partition(":")
    if head == "pow2":
        lo, hi = (int(x) for x in body.split(":"))
        return [2.0 ** k for k in range(lo, hi + 1)]
    if head == "pow2neg":
        lo, hi = (int(x) for x in body.split(":"))
        return [2.0 ** -k for k in range(lo, hi + 1)]
    if head == "list":
        return [float(x) for x in body.split(",")]
    raise ValueError(f"cannot parse ladder expression {expr!r}")


def _read_config_file(path) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            if not _:
                raise ValueError(f"config line is not key=value: {raw!r}")
            out[key.strip().replace("-", "_")] = val.strip()
    return out


def _merge_config(args: argparse.Namespace, parser: argparse.ArgumentParser):
    """Config-file values fill in flags the user left at their defaults."""
    if not getattr(args, "config", None):
        return args
    file_vals = _read_config_file(args.config)
    defaults = {a.dest: a.default for a in parser._actions}
    for key, val in file_vals.items():
        if not hasattr(args, key):
            raise ValueError(f"unknown config key {key!r}")
        if getattr(args, key) == defaults.get(key):
            setattr(args, key, val)
    return args


def _digest(payload: dict) -> str:
    return hashlib.sha256(
        json.dumps(payload, sort_keys=True, default=str).encode()).hexdigest()


def _file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_sidecar(out_path, config: dict, extra: dict):
    payload = {"config": config, **extra}
    payload["digest"] = _digest(payload)
    with open(str(out_path) + ".json", "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2, default=str)
        fh.write("\n")


def _load_circleset(path) -> CircleSet:
    try:
        with open(str(path) + ".json", encoding="utf-8") as fh:
            meta = json.load(fh).get("set_meta", {})
    except FileNotFoundError:
        meta = {}
    return CircleSet.read_csv(path, meta)


def _load_generator_file(path) -> PackingSpec:
    """Custom packing description (JSON): seeds as circles/lines, generators
    as 2x2 complex matrices with a conjugation flag or as reflections."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)

    def build_circle(node) -> Circle:
        if node["kind"] == "circle":
            return circle_from_center_radius(tuple(node["center"]), node["radius"])
        return line_from_normal_offset(tuple(node["normal"]), node["offset"])

    seeds = [build_circle(n) for n in doc["seeds"]]
    gens = []
    for node in doc["generators"]:
        if "mirror" in node:
            gens.append(Motion.reflection(build_circle(node["mirror"])))
        else:
            a, b, c, d = (complex(*x) for x in node["matrix"])
            gens.append(Motion.from_matrix(a, b, c, d,
                                           conj=bool(node.get("conj", False))))
    period = None
    if "period" in doc:
        period = Motion.translation(tuple(doc["period"]))
    return PackingSpec(doc.get("name", "custom"), seeds, gens, period,
                       backend=doc.get("backend", "float"))


def _cmd_generate(args) -> int:
    if args.window is None:
        raise ValueError("--window is required (x0,y0,x1,y1)")
    x0, y0, x1, y1 = (float(v) for v in str(args.window).split(","))
    window = Rect(x0, y0, x1, y1)
    if args.packing == "strip-apollonian":
        spec = strip_apollonian_spec()
        if args.backend == "float":
            spec = PackingSpec(spec.name, [s.as_float() for s in spec.seeds],
                               spec.generators, spec.period, backend="float")
    elif args.packing == "custom":
        if not args.generators:
            raise ValueError("--generators FILE is required with --packing custom")
        spec = _load_generator_file(args.generators)
    else:
        raise ValueError(f"unknown packing {args.packing!r}")
    cfg = EnumConfig(max_curvature=float(args.max_curv), window=window,
                     max_word_length=int(args.max_word_length),
                     dedup_quantum=float(args.dedup_quantum))
    S = enumerate_orbit(spec, cfg)
    if args.triangle_filter:
        S = ideal_triangle_filter(S)
    if int(args.period_extend) > 0:
        prune = None if args.prune_area is None else float(args.prune_area)
        S = period_extend(S, int(args.period_extend), prune_below_area=prune)
        if args.triangle_filter:
            S = ideal_triangle_filter(S)
    S.write_csv(args.out)
    config = {k: str(v) for k, v in vars(args).items() if k != "func"}
    _write_sidecar(args.out, config, {
        "set_meta": S.meta,
        "count": len(S),
        "complete": S.complete,
        "content": S.content_digest(),
    })
    print(f"wrote {len(S)} circles to {args.out} (complete={S.complete})")
    return EXIT_OK


def _cmd_count(args) -> int:
    S = _load_circleset(args.input)
    if args.mode in ("curvature", "geodesic"):
        if args.ladder is None:
            raise ValueError("--ladder is required for curvature/geodesic counts")
        ladder = parse_ladder(args.ladder)
        E = parse_region(args.region)
        fn = counting.count_curvature if args.mode == "curvature" \
            else counting.count_geodesic
        series = fn(S, E, ladder)
    elif args.mode == "hyparea":
        if args.t_ladder is None:
            raise ValueError("--t-ladder is required for hyparea counts")
        series = counting.count_hyparea(S, parse_ladder(args.t_ladder))
    else:
        raise ValueError(f"unknown mode {args.mode!r}")
    series.write_csv(args.out)
    config = {k: str(v) for k, v in vars(args).items() if k != "func"}
    _write_sidecar(args.out, config, {
        "series_meta": series.meta,
        "input_digest": _file_digest(args.input),
    })
    print(f"wrote {len(series.values)} rows to {args.out}")
    return EXIT_OK


def _cmd_fit(args) -> int:
    series = counting.CountSeries.read_csv(args.input)
    if series.param == "t":
        fit = analysis.fit_area_law(series, float(args.drop_low))
    else:
        fit = analysis.fit_power_law(series, float(args.drop_low))
    report = fit.as_dict()
    report["input_digest"] = _file_digest(args.input)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(report, fh, sort_keys=True, indent=2)
        fh.write("\n")
    print(f"exponent={fit.exponent:.4f} stderr={fit.stderr_exponent:.4f} "
          f"r2={fit.r_squared:.6f}")
    return EXIT_OK


def _cmd_dim(args) -> int:
    S = _load_circleset(args.input)
    scales = parse_ladder(args.scales)
    window = None
    if args.window:
        window = Rect(*(float(v) for v in str(args.window).split(",")))
    est = analysis.box_count_dimension(S, scales, window)
    report = est.as_dict()
    report["input_digest"] = _file_digest(args.input)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(report, fh, sort_keys=True, indent=2)
        fh.write("\n")
    print(f"alpha_hat={est.alpha_hat:.4f}")
    return EXIT_OK


def _cmd_probe(args) -> int:
    S = _load_circleset(args.input)
    E = parse_region(args.region)
    eps = parse_ladder(args.eps_ladder)
    lo, hi = (float(v) for v in str(args.curv_band).split(","))
    fit = analysis.regularity_probe(S, E, eps, (lo, hi))
    report = fit.as_dict()
    report["input_digest"] = _file_digest(args.input)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(report, fh, sort_keys=True, indent=2)
        fh.write("\n")
    msg = fit.note or f"p_hat={fit.exponent:.4f} r2={fit.r_squared:.4f}"
    print(msg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="kleincount",
        description="Enumerate group-invariant circle packings and verify "
                    "their counting laws.")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp):
        sp.add_argument("--config", default=None,
                        help="key=value file; explicit flags override it")
        sp.add_argument("--threads", type=int, default=1,
                        help="worker count (results are independent of it)")
        sp.add_argument("--out", required=True, help="output path")

    g = sub.add_parser("generate", help="enumerate a packing into a CSV")
    common(g)
    g.add_argument("--packing", default="strip-apollonian",
                   choices=["strip-apollonian", "custom"])
    g.add_argument("--generators", default=None,
                   help="JSON spec file for --packing custom")
    g.add_argument("--max-curv", dest="max_curv", default=None, required=True)
    g.add_argument("--window", default=None, help="x0,y0,x1,y1")
    g.add_argument("--backend", default="exact", choices=["exact", "float"])
    g.add_argument("--max-word-length", dest="max_word_length", default=40)
    g.add_argument("--dedup-quantum", dest="dedup_quantum", default=1e-9)
    g.add_argument("--triangle-filter", dest="triangle_filter",
                   action="store_true")
    g.add_argument("--period-extend", dest="period_extend", default=0)
    g.add_argument("--prune-area", dest="prune_area", default=None)
    g.set_defaults(func=_cmd_generate)

    c = sub.add_parser("count", help="count circles from a CSV")
    common(c)
    c.add_argument("--input", required=True)
    c.add_argument("--mode", default="curvature",
                   choices=["curvature", "geodesic", "hyparea"])
    c.add_argument("--region", default=None)
    c.add_argument("--ladder", default=None)
    c.add_argument("--t-ladder", dest="t_ladder", default=None)
    c.add_argument("--eta", default=0.1, help="cusp exponent (library default)")
    c.set_defaults(func=_cmd_count)

    f = sub.add_parser("fit", help="fit a power law to a count series")
    common(f)
    f.add_argument("--input", required=True)
    f.add_argument("--drop-low", dest="drop_low", default=0.5)
    f.set_defaults(func=_cmd_fit)

    d = sub.add_parser("dim", help="box-counting dimension of a circle set")
    common(d)
    d.add_argument("--input", required=True)
    d.add_argument("--scales", required=True, help="e.g. pow2neg:4:9")
    d.add_argument("--window", default=None)
    d.set_defaults(func=_cmd_dim)

    r = sub.add_parser("probe", help="boundary-collar regularity probe")
    common(r)
    r.add_argument("--input", required=True)
    r.add_argument("--region", required=True)
    r.add_argument("--eps-ladder", dest="eps_ladder", required=True)
    r.add_argument("--curv-band", dest="curv_band", default="64,4096")
    r.set_defaults(func=_cmd_probe)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _merge_config(args, parser)
        if int(args.threads) < 1:
            raise ValueError("--threads must be at least 1")
        return args.func(args)
    except IncompleteEnumerationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCOMPLETE
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

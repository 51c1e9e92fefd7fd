"""Command-line surface: reproducible experiments over number systems.

Every invocation writes one artifact (JSON, CSV, PGM, or DOT) to stdout
or --out, plus a run manifest (sidecar file with --out, single stderr
line otherwise).  All floating output is fixed at 12 decimals and all
key orders are fixed, so identical invocations with identical seeds are
byte-identical.

Exit codes: 0 success, 1 domain error, 2 usage error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__, algebra, analysis, bulk, carry, numeration, tile
from .algebra import MinimalPolynomial
from .errors import CycleDetected, RadixionError, UsageError
from .numeration import NumberSystem

# ------------------------------------------------------- deterministic text


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return "%.12f" % x


def _write_json(obj, parts, indent, level):
    if obj is None:
        parts.append("null")
    elif obj is True or (isinstance(obj, np.bool_) and obj):
        parts.append("true")
    elif obj is False or isinstance(obj, np.bool_):
        parts.append("false")
    elif isinstance(obj, (int, np.integer)):
        parts.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        parts.append(_fmt_float(x) if math.isfinite(x) else json.dumps(_fmt_float(x)))
    elif isinstance(obj, str):
        parts.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            parts.append("{}")
            return
        parts.append("{")
        for j, (k, v) in enumerate(obj.items()):
            if j:
                parts.append(",")
            if indent:
                parts.append("\n" + " " * (indent * (level + 1)))
            parts.append(json.dumps(str(k)))
            parts.append(": " if indent else ":")
            _write_json(v, parts, indent, level + 1)
        if indent:
            parts.append("\n" + " " * (indent * level))
        parts.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            parts.append("[]")
            return
        parts.append("[")
        for j, v in enumerate(seq):
            if j:
                parts.append(",")
            if indent:
                parts.append("\n" + " " * (indent * (level + 1)))
            _write_json(v, parts, indent, level + 1)
        if indent:
            parts.append("\n" + " " * (indent * level))
        parts.append("]")
    else:
        raise TypeError("cannot serialize %r" % (obj,))


def _json_text(obj, indent=2) -> str:
    parts = []
    _write_json(obj, parts, indent, 0)
    return "".join(parts)


def _cell(v) -> str:
    if v is True or (isinstance(v, np.bool_) and v):
        return "true"
    if v is False or isinstance(v, np.bool_):
        return "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return _fmt_float(float(v))
    return str(v)


def _csv_bytes(csv_spec) -> bytes:
    header, rows = csv_spec
    lines = []
    if header:
        lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    return ("\n".join(lines) + "\n").encode("ascii")


def _pgm_bytes(raster: tile.Raster, system_label: str) -> bytes:
    occ = raster.occupancy
    if occ.ndim > 2:
        raise UsageError("PGM output needs a 1- or 2-dimensional raster")
    bbox_txt = " ".join(_fmt_float(v) for pair in raster.bbox for v in pair)
    grid = occ[None, :] if occ.ndim == 1 else occ.T[::-1]  # rows top-to-bottom
    img = np.where(grid, 0, 255).astype(np.uint8)
    header = "P5\n# bbox %s\n# system %s\n%d %d\n255\n" % (
        bbox_txt,
        system_label,
        img.shape[1],
        img.shape[0],
    )
    return header.encode("ascii") + img.tobytes()


def _dot_automaton(ns: NumberSystem, aut: carry.CarryAutomaton) -> str:
    lines = ["digraph carry {", "  rankdir=LR;"]
    states = aut.carry_set.states
    for i, s in enumerate(states):
        shape = " shape=doublecircle" if i == 0 else ""
        lines.append('  %d [label="%s"%s];' % (i, algebra.format_element(s), shape))
    for i in range(len(states)):
        for t, succ in enumerate(aut.next[i]):
            lines.append(
                '  %d -> %d [label="%s"];'
                % (i, succ, algebra.format_element(ns.digits[t]))
            )
    lines.append("}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------- artifacts


@dataclass
class _Artifact:
    payload: dict | None
    exit_code: int = 0
    note: str | None = None  # human line for nonzero exits
    csv: tuple | None = None  # (header tuple or None, row iterable)
    raster: tile.Raster | None = None
    system_label: str | None = None
    dot: str | None = None


def _render(fmt: str, art: _Artifact) -> bytes:
    if fmt == "json":
        if art.payload is None:
            raise UsageError("this invocation has no JSON form")
        return (_json_text(art.payload) + "\n").encode("ascii")
    if fmt == "csv":
        if art.csv is None:
            raise UsageError("this invocation has no CSV form")
        return _csv_bytes(art.csv)
    if fmt == "pgm":
        if art.raster is None:
            raise UsageError("this invocation has no PGM form")
        return _pgm_bytes(art.raster, art.system_label or "")
    if fmt == "dot":
        if art.dot is None:
            raise UsageError("this invocation has no DOT form")
        return art.dot.encode("ascii")
    raise UsageError("unknown format %r" % fmt)


def _require_format(args, allowed) -> None:
    if args.format not in allowed:
        raise UsageError(
            "%s supports formats %s, not %r"
            % (args.subcommand, "/".join(allowed), args.format)
        )


# ----------------------------------------------------------------- parsing


def _number_system(args) -> NumberSystem:
    return NumberSystem.parse(args.poly, args.digits)


def _parse_int_list(text: str) -> list:
    try:
        return [int(tok) for tok in str(text).split(",")]
    except ValueError:
        raise UsageError("expected comma-separated integers, got %r" % text) from None


def _parse_slice(text: str):
    toks = str(text).split(",")
    if len(toks) != 2:
        raise UsageError("--slice takes 'nu,mu' (mu may be 'inf')")
    nu = int(toks[0])
    mu = math.inf if toks[1].strip() == "inf" else int(toks[1])
    return nu, mu


def _parse_phase(args):
    """Exactly one of --alpha (scalar) / --form (trace linear form)."""
    if (args.alpha is None) == (args.form is None):
        raise UsageError("pass exactly one of --alpha or --form")
    if args.alpha is not None:
        return float(args.alpha)
    return analysis.LinearForm.parse(args.form)


# ------------------------------------------------------------- subcommands


def _cmd_expand(args) -> _Artifact:
    _require_format(args, ("json",))
    ns = _number_system(args)
    payload = {"system": ns.encode()}
    acted = False
    if args.element is not None:
        acted = True
        x = algebra.parse_element(args.element, ns.degree)
        payload["element"] = list(x)
        try:
            exp = numeration.expand(ns, x)
        except CycleDetected as exc:
            payload["error"] = "no finite expansion"
            payload["cycle"] = [list(s) for s in exc.cycle]
            return _Artifact(payload, exit_code=1, note="no finite expansion; cycle witness emitted")
        payload["digits"] = list(exp.digit_indices)
        payload["sum_of_digits"] = list(numeration.sum_of_digits(ns, x))
        if ns.is_binary:
            payload["adjacent_pairs"] = numeration.rudin_shapiro(ns, x)
        if args.slice is not None:
            nu, mu = _parse_slice(args.slice)
            val = numeration.digit_slice(ns, x, nu, mu)
            payload["slice"] = {
                "nu": nu,
                "mu": "inf" if mu == math.inf else mu,
                "value": list(val),
            }
    if args.box is not None:
        acted = True
        if args.box < 0:
            raise UsageError("--box takes a nonnegative radius")
        expanded = 0
        cycles = 0
        bad = 0
        axis = range(-args.box, args.box + 1)
        grid = [()]
        for _ in range(ns.degree):
            grid = [g + (v,) for g in grid for v in axis]
        for x in grid:
            try:
                exp = numeration.expand(ns, x)
            except CycleDetected:
                cycles += 1  # no finite expansion; nothing to round-trip
                continue
            expanded += 1
            if numeration.evaluate(ns, exp) != x:
                bad += 1
        payload["box"] = {
            "radius": args.box,
            "elements": len(grid),
            "expanded": expanded,
            "cycles": cycles,
            "roundtrip_failures": bad,
        }
    if args.enumerate is not None:
        acted = True
        elems = list(numeration.enumerate_N(ns, args.enumerate))
        payload["enumeration"] = {
            "lambda": args.enumerate,
            "count": len(elems),
            "distinct": len(set(elems)),
        }
    if not acted:
        raise UsageError("expand needs --element, --box, or --enumerate")
    return _Artifact(payload)


def _cmd_check_fns(args) -> _Artifact:
    _require_format(args, ("json",))
    ns = _number_system(args)
    verdict = numeration.is_fns(ns)
    cycle = verdict.witness_cycle
    payload = {
        "system": ns.encode(),
        "is_fns": verdict.is_fns,
        "witness_cycle": None if cycle is None else [list(s) for s in cycle],
        "candidates_examined": verdict.candidates_examined,
    }
    return _Artifact(payload)


def _cmd_carry(args) -> _Artifact:
    _require_format(args, ("json", "dot"))
    ns = _number_system(args)
    if args.format == "dot":
        aut = carry.build_automaton(ns)
        return _Artifact(None, dot=_dot_automaton(ns, aut))
    report = carry.carry_constant(ns)
    payload = {
        "states": report.automaton_size,
        "spectral_radius": report.spectral_radius,
        "eta2": report.eta2,
        "iterations": report.iterations,
    }
    return _Artifact(payload)


def _cmd_census(args) -> _Artifact:
    _require_format(args, ("json", "csv"))
    ns = _number_system(args)
    rows = []
    for rho in _parse_int_list(args.rho):
        count = carry.carry_census(ns, args.mu, args.nu, rho, threads=args.threads)
        rows.append({"rho": rho, "count": int(count)})
    payload = {"system": ns.encode(), "mu": args.mu, "nu": args.nu, "rows": rows}
    csv = (("rho", "count"), [(r["rho"], r["count"]) for r in rows])
    return _Artifact(payload, csv=csv)


def _cmd_cns_carry(args) -> _Artifact:
    _require_format(args, ("json",))
    if (args.m is None) == (args.poly is None):
        raise UsageError("cns-carry takes exactly one of --m or --poly")
    if args.m is not None:
        members = [(mv, carry.gaussian_family(mv)) for mv in _parse_int_list(args.m)]
    else:
        members = [(None, MinimalPolynomial.parse(args.poly))]
    rows = []
    for mv, poly in members:
        collapsed = carry.cns_collapsed(poly)
        row = {
            "m": mv,
            "poly": str(poly),
            "alphas": list(collapsed.alphas),
            "betas": list(collapsed.betas),
            "lambda": collapsed.lam,
            "eta_bound": collapsed.eta_bound,
        }
        if args.subset_graph:
            graph = carry.cns_subset_graph(poly)
            row["subset_states"] = len(graph.states)
            row["subset_dominant"] = graph.dominant_eigenvalue()
        rows.append(row)
    return _Artifact({"rows": rows})


def _cmd_tile(args) -> _Artifact:
    _require_format(args, ("json", "csv", "pgm"))
    ns = _number_system(args)
    cloud = tile.tile_points(ns, args.depth, args.space)
    raster = tile.rasterize(cloud, args.resolution)
    payload = {
        "system": ns.encode(),
        "depth": args.depth,
        "space": args.space,
        "resolution": args.resolution,
        "bbox": [[lo, hi] for lo, hi in raster.bbox],
        "occupied_cells": int(raster.occupancy.sum()),
        "area": tile.area_of(raster),
        "cover_fraction": tile.cover_fraction(
            raster, samples=args.cover_samples, seed=args.seed
        ),
        "boundary_cells": tile.boundary_cell_count(raster),
    }
    if args.space == "coordinate" and args.resolution >= 256:
        radii = tile.tile_radii(ns, raster)
        payload["r_plus"] = radii.r_plus_bound
        payload["r_minus"] = radii.r_minus_estimate
        payload["per_embedding_radii"] = list(radii.per_embedding)
    if args.boxdim is not None:
        report = tile.boundary_boxdim(ns, _parse_int_list(args.boxdim), args.depth)
        payload["boxdim"] = {
            "dimension": report.dimension,
            "residual": report.residual,
            "resolutions": list(report.resolutions),
            "counts": [int(c) for c in report.counts],
        }
    csv = (None, (tuple(float(v) for v in row) for row in cloud.points))
    return _Artifact(payload, csv=csv, raster=raster, system_label=ns.encode())


def _cmd_weyl(args) -> _Artifact:
    _require_format(args, ("json", "csv"))
    ns = _number_system(args)
    lams = _parse_int_list(args.lam)
    if args.identity_alphas is not None:
        if args.format != "json":
            raise UsageError("the identity check has no CSV form")
        if args.fn != "sod":
            raise UsageError("the factorization identity applies to fn=sod only")
        if args.alpha is not None or args.form is not None:
            raise UsageError("--identity-alphas draws its own coefficients")
        rng = np.random.default_rng(args.seed)
        alphas = rng.random(args.identity_alphas)
        worst = 0.0
        worst_scaled = 0.0
        for lam in range(1, max(lams) + 1):
            table = bulk.digit_table(ns, lam)
            for a in alphas:
                row = analysis.weyl_sum(
                    ns, "sod", float(a), args.h, lam,
                    threads=args.threads, granularity=args.granularity, table=table,
                )
                ref = analysis.sod_factorization_reference(ns, float(a), args.h, lam)
                err = abs(complex(row.re_sum, row.im_sum) - ref)
                worst = max(worst, err)
                worst_scaled = max(worst_scaled, err / float(ns.Q) ** lam)
        payload = {
            "system": ns.encode(),
            "identity": {
                "alphas": args.identity_alphas,
                "lam_max": max(lams),
                "h": args.h,
                "max_abs_error": worst,
                "max_scaled_error": worst_scaled,
            },
        }
        return _Artifact(payload)
    phase = _parse_phase(args)
    payload = {"system": ns.encode(), "fn": args.fn}
    if isinstance(phase, analysis.LinearForm):
        payload["form"] = {
            "values": [float(v) for v in phase.values],
            "rational_tags": [r is not None for r in phase.rationals],
        }
        payload["equidist_condition"] = analysis.equidist_condition(ns, phase)
    else:
        payload["alpha"] = phase
    payload["h"] = args.h
    payload["filter"] = args.filter
    payload["granularity"] = args.granularity
    rows = []
    for lam in lams:
        rows.append(
            analysis.weyl_sum(
                ns, args.fn, phase, args.h, lam, args.filter,
                threads=args.threads, granularity=args.granularity,
            )
        )
    payload["rows"] = [
        {
            "lambda": r.lam,
            "h": r.h,
            "filter": r.filter,
            "count": r.count,
            "re_sum": r.re_sum,
            "im_sum": r.im_sum,
            "normalized": r.normalized,
        }
        for r in rows
    ]
    csv = (
        ("lambda", "h", "filter", "count", "re_sum", "im_sum", "normalized"),
        [(r.lam, r.h, r.filter, r.count, r.re_sum, r.im_sum, r.normalized) for r in rows],
    )
    return _Artifact(payload, csv=csv)


def _cmd_fourier_decay(args) -> _Artifact:
    _require_format(args, ("json", "csv"))
    ns = _number_system(args)
    phase = _parse_phase(args)
    report = analysis.fourier_decay(
        ns, args.fn, phase, args.lam_max, args.t_samples, args.seed,
        threads=args.threads,
    )
    payload = {
        "system": ns.encode(),
        "fn": report.fn,
        "lam_max": report.lam_max,
        "t_samples": report.t_samples,
        "seed": report.seed,
        "kappa": report.kappa,
        "mu_q": report.mu_q,
        "big_m_q": report.big_m_q,
        "digit_norm_sum": report.digit_norm_sum,
        "rs_bound_slope": report.rs_bound_slope,
        "rows": [
            {
                "lambda": r.lam,
                "samples": r.samples,
                "max_logq": r.max_logq,
                "gamma_emp": r.gamma_emp,
            }
            for r in report.rows
        ],
    }
    csv = (
        ("lambda", "samples", "max_logq", "gamma_emp"),
        [(r.lam, r.samples, r.max_logq, r.gamma_emp) for r in report.rows],
    )
    return _Artifact(payload, csv=csv)


def _cmd_primes(args) -> _Artifact:
    _require_format(args, ("json", "csv"))
    ns = _number_system(args)
    table = bulk.digit_table(ns, args.lam)
    mask = analysis.prime_mask(ns, table.coords)
    payload = {"system": ns.encode(), "lambda": args.lam, "count": int(mask.sum())}
    csv = (None, (tuple(int(v) for v in row) for row in table.coords[mask]))
    return _Artifact(payload, csv=csv)


def _cmd_distortion(args) -> _Artifact:
    _require_format(args, ("json",))
    poly = MinimalPolynomial.parse(args.poly)
    report = algebra.distortion(poly)
    payload = {
        "poly": str(poly),
        "theta_max": report.theta_max,
        "theta_min": report.theta_min,
        "embedding_moduli": [float(v) for v in algebra.embeddings(poly).moduli],
    }
    return _Artifact(payload)


# ------------------------------------------------------------ parser setup


def _add_system_flags(p, required=True):
    p.add_argument("--poly", required=required, help="base polynomial c0,c1,...,cd")
    p.add_argument("--digits", required=required, help="digit set b;b;... (each b is d coordinates)")


def _conf_expand(p):
    _add_system_flags(p)
    p.add_argument("--element", help="element to expand, d comma-separated coordinates")
    p.add_argument("--slice", help="nu,mu digit window of --element (mu may be 'inf')")
    p.add_argument("--box", type=int, help="round-trip every element with coordinates in [-B,B]")
    p.add_argument("--enumerate", type=int, help="enumerate N_lambda and count distinct elements")


def _conf_check_fns(p):
    _add_system_flags(p)


def _conf_carry(p):
    _add_system_flags(p)


def _conf_census(p):
    _add_system_flags(p)
    p.add_argument("--mu", type=int, required=True, help="digit window length")
    p.add_argument("--nu", type=int, required=True, help="positions checked for change")
    p.add_argument("--rho", required=True, help="comma-separated perturbation depths")


def _conf_cns_carry(p):
    p.add_argument("--m", help="comma-separated members m of the Gaussian CNS family")
    p.add_argument("--poly", help="explicit CNS base polynomial c0,c1,...,cd")
    p.add_argument("--subset-graph", action="store_true",
                   help="also build the subset transducer and its dominant eigenvalue")


def _conf_tile(p):
    _add_system_flags(p)
    p.add_argument("--depth", type=int, required=True, help="IFS iteration depth")
    p.add_argument("--resolution", type=int, default=512, help="raster cells per axis")
    p.add_argument("--space", choices=tile.SPACE_TAGS, default="coordinate")
    p.add_argument("--boxdim", help="comma-separated resolutions for the boundary box-dimension fit")
    p.add_argument("--cover-samples", type=int, default=10**4,
                   help="random points for the translation-cover estimate")


def _conf_weyl(p):
    _add_system_flags(p)
    p.add_argument("--fn", choices=("sod", "rs"), required=True)
    p.add_argument("--alpha", type=float, help="scalar coefficient")
    p.add_argument("--form", help="linear form t0,...,t{d-1}; p/q and integers are rational-tagged")
    p.add_argument("--h", type=int, default=1, help="integer harmonic")
    p.add_argument("--lambda", dest="lam", required=True, help="comma-separated digit lengths")
    p.add_argument("--filter", choices=("all", "primes"), default="all")
    p.add_argument("--granularity", type=int, default=analysis.DEFAULT_GRANULARITY,
                   help="reduction blocks per sum (fixed => thread-count invariant)")
    p.add_argument("--identity-alphas", type=int,
                   help="check S_all against the digit-factorization identity for N seeded alphas")


def _conf_fourier_decay(p):
    _add_system_flags(p)
    p.add_argument("--fn", choices=("sod", "rs"), required=True)
    p.add_argument("--alpha", type=float, help="scalar coefficient")
    p.add_argument("--form", help="linear form t0,...,t{d-1}")
    p.add_argument("--lam-max", type=int, required=True, help="largest digit length")
    p.add_argument("--t-samples", type=int, default=1000, help="random t per digit length")


def _conf_primes(p):
    _add_system_flags(p)
    p.add_argument("--lambda", dest="lam", type=int, required=True)


def _conf_distortion(p):
    p.add_argument("--poly", required=True, help="base polynomial c0,c1,...,cd")


_SUBCOMMANDS = (
    ("expand", "digit expansions, round trips, and N_lambda counts", _conf_expand, _cmd_expand),
    ("check-fns", "decide the finiteness property", _conf_check_fns, _cmd_check_fns),
    ("carry", "carry automaton and carry constant eta2", _conf_carry, _cmd_carry),
    ("census", "exhaustive count of carry-affected digit windows", _conf_census, _cmd_census),
    ("cns-carry", "collapsed/subset carry bounds for CNS polynomials", _conf_cns_carry, _cmd_cns_carry),
    ("tile", "fundamental tile geometry: raster, area, radii, box dimension", _conf_tile, _cmd_tile),
    ("weyl", "exponential sums of digit functions over N_lambda", _conf_weyl, _cmd_weyl),
    ("fourier-decay", "empirical sup_t decay of twisted tile sums", _conf_fourier_decay, _cmd_fourier_decay),
    ("primes", "count prime elements of N_lambda", _conf_primes, _cmd_primes),
    ("distortion", "embedding moduli and distortion exponents", _conf_distortion, _cmd_distortion),
)


def _build_parser():
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker pool size (results are thread-count invariant)")
    parent.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    parent.add_argument("--out", help="artifact path (default stdout)")
    parent.add_argument("--format", choices=("json", "csv", "pgm", "dot"), default="json")
    parent.add_argument("--config", help="JSON file of flag values; command-line flags win")
    parser = argparse.ArgumentParser(prog="radixion", allow_abbrev=False,
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="command")
    specs = {}
    for name, help_text, configure, handler in _SUBCOMMANDS:
        p = sub.add_parser(name, help=help_text, parents=[parent], allow_abbrev=False)
        configure(p)
        p.set_defaults(handler=handler, subcommand=name)
        specs[name] = p
    return parser, specs


def _merge_config(argv, specs):
    """Fill flags from --config JSON; explicit command-line flags win."""
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    if path is None or not argv or argv[0] not in specs:
        return argv
    spec = specs[argv[0]]
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError("cannot read config %s: %s" % (path, exc)) from None
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object of flag values")
    extra = []
    for key, value in cfg.items():
        flag = "--" + str(key).replace("_", "-")
        if flag not in spec._option_string_actions:
            raise UsageError("unknown config key %r for %s" % (key, argv[0]))
        if any(tok == flag or tok.startswith(flag + "=") for tok in argv):
            continue
        if isinstance(value, bool):
            if value:
                extra.append(flag)
        elif isinstance(value, list):
            extra.extend([flag, ",".join(str(v) for v in value)])
        else:
            extra.extend([flag, str(value)])
    return list(argv) + extra


def _join_flag_values(argv, specs):
    """Rewrite "--flag value" as "--flag=value" so values may start with '-'."""
    if not argv or argv[0] not in specs:
        return argv
    actions = specs[argv[0]]._option_string_actions
    out = [argv[0]]
    i = 1
    while i < len(argv):
        tok = argv[i]
        action = actions.get(tok)
        if action is not None and action.nargs is None and i + 1 < len(argv):
            out.append(tok + "=" + argv[i + 1])
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def _manifest(args, elapsed: float, digest: str) -> dict:
    flags = {}
    for key in sorted(vars(args)):
        if key in ("handler", "subcommand", "config"):
            continue
        value = getattr(args, key)
        if value is None:
            continue
        flags[key] = value
    return {
        "tool": "radixion",
        "version": __version__,
        "subcommand": args.subcommand,
        "flags": flags,
        "seed": args.seed,
        "granularity": getattr(args, "granularity", None),
        "wall_time_s": elapsed,
        "result_digest": "sha256:" + digest,
    }


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    start = time.monotonic()
    try:
        parser, specs = _build_parser()
        argv = _join_flag_values(_merge_config(argv, specs), specs)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
        artifact = args.handler(args)
        data = _render(args.format, artifact)
    except RadixionError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return exc.exit_code
    digest = hashlib.sha256(data).hexdigest()
    manifest = _manifest(args, time.monotonic() - start, digest)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
        with open(args.out + ".manifest.json", "w", encoding="utf-8") as fh:
            fh.write(_json_text(manifest) + "\n")
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        print("manifest: %s" % _json_text(manifest, indent=0), file=sys.stderr)
    if artifact.exit_code:
        print("error: %s" % (artifact.note or "domain error"), file=sys.stderr)
    return artifact.exit_code


if __name__ == "__main__":
    sys.exit(main())

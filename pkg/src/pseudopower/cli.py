"""Command-line front end: ``pseudopower <command> [flags]``.

Every command writes plot-ready CSV (or JSON with ``--format json``) to
``--out`` or stdout.  CSV files start with ``#`` comment lines carrying the
provenance and, unless ``--no-timestamp`` is given, a generation time.

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 I/O failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Optional

from gmpy2 import mpq

from . import __version__
from .dynamics import (
    VectorChoice,
    default_fit_window,
    evolve_f,
    fit_log_abs,
    growth_rate_fit,
    norm_bounds_track,
)
from .errors import ConvergenceError, PrecisionError, SingularMatrixError, ValidationError
from .linalg import Vector
from .models import FAMILIES, ModelSpec, build_matrix, matrix_to_dict, propagator
from .precision import ENV_DEFAULT, Precision, default_precision, parse_rational_or_float
from .pseudospectrum import GridSpec, smin_map, symbol_curve
from .spectral import (
    closed_form_f,
    eigen_A,
    eigen_B,
    eigen_tilted_pauli,
    ehrenfest_spectrum,
    fourier_coefficients,
)

log = logging.getLogger("pseudopower")

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

COMMANDS = ("make", "evolve", "spectrum", "pseudospectrum", "fit", "bounds", "closed-form", "fourier")

# pseudospectrum maps default to 128 bits: enough below level -30, twice as fast as 256
PSEUDOSPECTRUM_BITS = 128

OVERLAYS = {"block-transfer": "circles-A", "toeplitz-b": "ellipse-B", "ehrenfest": "circle-ehrenfest"}


@dataclass(frozen=True)
class RunConfig:
    command: str
    model: Optional[ModelSpec]
    precision: Precision
    vectors: VectorChoice
    t_max: Optional[int]
    grid: Optional[GridSpec]
    fit_window: Optional[tuple]
    out: Optional[str]
    fmt: str
    threads: int
    timestamp: bool


# -- argument parsing -------------------------------------------------------------


def _common(p: argparse.ArgumentParser):
    g = p.add_argument_group("global options")
    g.add_argument("--precision", help=f"exact | big:<bits> | machine (default from ${ENV_DEFAULT} or big:256)")
    g.add_argument("--seed", type=int, default=0, help="seed for random vectors (unsigned 64-bit)")
    g.add_argument("--out", help="output file (default: stdout)")
    g.add_argument("--format", choices=("csv", "json"), default="csv")
    g.add_argument("--threads", type=int, default=None, help="worker processes (default: all cores)")
    g.add_argument("--no-timestamp", action="store_true", help="omit the generation time from outputs")
    g.add_argument("-v", "--verbose", action="store_true")


def _model_flags(p: argparse.ArgumentParser):
    g = p.add_argument_group("model")
    g.add_argument("--family", choices=FAMILIES)
    g.add_argument("--n", type=int, help="matrix size N (M for toeplitz-b)")
    g.add_argument("--g", help="asymmetry parameter; p/q stays exact")
    g.add_argument("--alpha", type=float, help="ehrenfest time step (default pi/(2N))")
    g.add_argument("--energy", help="tight-binding energy E")
    g.add_argument("--onsite-file", help="tight-binding on-site block (matrix JSON)")
    g.add_argument("--hop-file", help="tight-binding hopping block (matrix JSON)")
    g.add_argument("--matrix-file", help="use a matrix JSON file (family external-file)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pseudopower", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("make", help="write a model matrix as JSON")
    _model_flags(p)
    p.add_argument("--propagator", action="store_true", help="ehrenfest: write exp(i alpha H) instead of H")
    _common(p)

    p = sub.add_parser("evolve", help="time series f(t) = <w|A^t|v>")
    _model_flags(p)
    p.add_argument("--vectors", choices=("special", "random", "explicit"), default="special")
    p.add_argument("--w-file", help="explicit w: JSON list of numbers or [re, im] pairs")
    p.add_argument("--v-file", help="explicit v: JSON list of numbers or [re, im] pairs")
    p.add_argument("--t-max", type=int, help="last time step (default: two periods, or 100)")
    p.add_argument("--digits", type=int, default=30, help="significant digits for exact values")
    p.add_argument("--rational", action="store_true", help="add exact p/q columns (exact backend)")
    _common(p)

    p = sub.add_parser("spectrum", help="eigenvalues and condition numbers of an analytic family")
    _model_flags(p)
    p.add_argument("--kappa", action="store_true", help="include eigenvalue condition numbers")
    _common(p)

    p = sub.add_parser("pseudospectrum", help="log10 s_min(zI - A) on a grid plus symbol overlays")
    _model_flags(p)
    p.add_argument("--re-min", type=float, default=-3.0)
    p.add_argument("--re-max", type=float, default=3.0)
    p.add_argument("--im-min", type=float, default=-3.0)
    p.add_argument("--im-max", type=float, default=3.0)
    p.add_argument("--nx", type=int, default=241)
    p.add_argument("--ny", type=int, default=241)
    p.add_argument("--overlay-out", help="symbol curve CSV (default: <out>.symbol.csv)")
    p.add_argument("--samples", type=int, default=512, help="points per overlay curve")
    _common(p)

    p = sub.add_parser("fit", help="least-squares growth rate of ln|f(t)|")
    _model_flags(p)
    p.add_argument("--series", help="series CSV written by 'evolve' (else computed from the model)")
    p.add_argument("--vectors", choices=("special", "random"), default="random")
    p.add_argument("--t0", type=int)
    p.add_argument("--t1", type=int)
    p.add_argument("--exclude-zeros", action="store_true")
    _common(p)

    p = sub.add_parser("bounds", help="||A^t|| against rho^t, ||A||^t and kappa rho^t")
    _model_flags(p)
    p.add_argument("--t-max", type=int, help="last time step (default 2(N+2))")
    _common(p)

    p = sub.add_parser("closed-form", help="exact f(t) for the block-transfer matrix and special vectors")
    p.add_argument("--n", type=int, required=True, help="even matrix size N")
    p.add_argument("--g", default="2")
    p.add_argument("--t-max", type=int, help="last time step (default 2(N+2))")
    _common(p)

    p = sub.add_parser("fourier", help="Fourier coefficients c_k, k = -M..M")
    p.add_argument("--m", type=int, help="half size M")
    p.add_argument("--n", type=int, help="even matrix size N (M = N/2)")
    p.add_argument("--g", default="2")
    _common(p)
    return parser


# -- validation ---------------------------------------------------------------------


def _precision(args, command) -> Precision:
    if args.precision:
        return Precision.parse(args.precision)
    if command == "pseudospectrum" and not os.environ.get(ENV_DEFAULT):
        return Precision("big", PSEUDOSPECTRUM_BITS)
    return default_precision()


def _number(text, what):
    try:
        return parse_rational_or_float(text)
    except PrecisionError:
        raise ValidationError(f"--{what}: not a number: {text!r}") from None


def _model(args) -> Optional[ModelSpec]:
    family = getattr(args, "family", None)
    mfile = getattr(args, "matrix_file", None)
    if mfile:
        if family not in (None, "external-file"):
            raise ValidationError("--matrix-file cannot be combined with --family")
        return ModelSpec("external-file", path=mfile)
    if family is None:
        return None
    g = _number(args.g, "g") if args.g is not None else None
    energy = _number(args.energy, "energy") if args.energy is not None else 0
    return ModelSpec(
        family,
        n=args.n,
        g=g,
        alpha=args.alpha,
        energy=energy,
        onsite_path=args.onsite_file,
        hop_path=args.hop_file,
    )


def config_from_args(args) -> RunConfig:
    """Check every flag combination before any computation."""
    cmd = args.command
    prec = _precision(args, cmd)
    if not 0 <= args.seed < 2**64:
        raise ValidationError("--seed must be an unsigned 64-bit integer")
    if args.threads is not None and args.threads < 1:
        raise ValidationError("--threads must be positive")
    model = _model(args) if cmd not in ("closed-form", "fourier") else None
    if cmd in ("make", "evolve", "spectrum", "pseudospectrum", "bounds") and model is None:
        raise ValidationError(f"{cmd} needs --family or --matrix-file")
    if cmd == "fit" and model is None and not args.series:
        raise ValidationError("fit needs --series or a model")
    if model is not None:
        model.check_precision(prec)
        if model.family == "ehrenfest" and prec.is_exact and cmd not in ("make", "spectrum"):
            raise PrecisionError("ehrenfest dynamics uses exp(i alpha H); use a float backend")
        if cmd == "make" and args.propagator and model.family != "ehrenfest":
            raise ValidationError("--propagator applies to the ehrenfest family only")
        if cmd == "make" and args.propagator and prec.is_exact:
            raise PrecisionError("exp(i alpha H) is transcendental; use a float backend")
    if cmd in ("spectrum", "bounds") and not model.is_analytic:
        raise ValidationError(f"{cmd} needs an analytic family, not {model.family}")
    if cmd == "bounds" and model.family == "ehrenfest":
        raise ValidationError("bounds needs closed-form eigenvectors (block-transfer, toeplitz-b, tilted-pauli)")
    if cmd in ("spectrum", "bounds", "pseudospectrum", "fourier") and prec.is_exact:
        if not (cmd == "spectrum" and model.family in ("ehrenfest", "tilted-pauli") and not args.kappa):
            raise PrecisionError(f"{cmd} needs a float backend")
    if cmd == "fit" and model is not None and prec.is_exact and args.vectors == "random":
        raise PrecisionError("random vectors need a float backend")

    vectors = VectorChoice.special()
    if cmd in ("evolve", "fit"):
        kind = args.vectors
        if kind == "random":
            vectors = VectorChoice.random(args.seed)
        elif kind == "explicit":
            if not (args.w_file and args.v_file):
                raise ValidationError("--vectors explicit needs --w-file and --v-file")
            vectors = VectorChoice.explicit(_read_vector(args.w_file, prec), _read_vector(args.v_file, prec))

    t_max = getattr(args, "t_max", None)
    if t_max is not None and t_max < 1:
        raise ValidationError("--t-max must be at least 1")
    if cmd in ("closed-form",):
        if args.n < 2 or args.n % 2:
            raise ValidationError(f"closed-form needs even N >= 2, got {args.n}")
        if prec.is_exact:
            from .precision import is_rational

            if not is_rational(_number(args.g, "g")):
                raise PrecisionError("exact precision needs a rational --g")
    if cmd == "fourier":
        if (args.m is None) == (args.n is None):
            raise ValidationError("fourier needs exactly one of --m, --n")
        if args.n is not None and (args.n < 2 or args.n % 2):
            raise ValidationError(f"--n must be even, got {args.n}")

    grid = None
    if cmd == "pseudospectrum":
        grid = GridSpec(args.re_min, args.re_max, args.im_min, args.im_max, args.nx, args.ny)
        if model.family != "external-file" and model.family != "tight-binding-transfer" and args.samples < 1:
            raise ValidationError("--samples must be positive")

    window = None
    if cmd == "fit":
        if (args.t0 is None) != (args.t1 is None):
            raise ValidationError("give both --t0 and --t1 or neither")
        if args.t0 is not None:
            if args.t0 >= args.t1:
                raise ValidationError(f"fit window needs t0 < t1, got [{args.t0}, {args.t1}]")
            window = (args.t0, args.t1)
        elif model is None or model.family not in ("block-transfer", "toeplitz-b"):
            raise ValidationError("fit needs --t0/--t1 unless the model is block-transfer or toeplitz-b")

    return RunConfig(
        cmd, model, prec, vectors, t_max, grid, window, args.out, args.format,
        args.threads or (os.cpu_count() or 1), not args.no_timestamp,
    )


def _read_vector(path, prec) -> Vector:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON ({exc})") from None
    if isinstance(doc, dict):
        doc = doc.get("entries")
    if not isinstance(doc, list) or not doc:
        raise ValidationError(f"{path}: expected a non-empty JSON list")
    vals = []
    for e in doc:
        if isinstance(e, list):
            if len(e) != 2:
                raise ValidationError(f"{path}: complex entries must be [re, im] pairs")
            vals.append((e[0], e[1]))
        else:
            vals.append(e)
    return Vector.from_values(vals, prec)


# -- output -------------------------------------------------------------------------


def _header(cfg: RunConfig, extra=()) -> list[str]:
    lines = [f"pseudopower {__version__} {cfg.command}"]
    if cfg.model is not None:
        lines.append(cfg.model.describe())
    lines.append(f"precision={cfg.precision}")
    lines.extend(extra)
    if cfg.timestamp:
        lines.append("generated=" + datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"))
    return lines


def _provenance(cfg: RunConfig, extra=()) -> dict:
    d = {"command": cfg.command, "version": __version__, "precision": str(cfg.precision)}
    if cfg.model is not None:
        d["model"] = cfg.model.to_dict()
    for item in extra:
        k, _, v = item.partition("=")
        d[k] = v
    if cfg.timestamp:
        d["generated"] = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    return d


def _emit(cfg: RunConfig, body: str, path=None):
    path = path or cfg.out
    if path is None:
        sys.stdout.write(body)
        return
    with open(path, "w", newline="") as fh:
        fh.write(body)


def _csv_doc(cfg, body, extra=(), footer=()) -> str:
    head = "".join(f"# {line}\n" for line in _header(cfg, extra))
    foot = "".join(f"# {line}\n" for line in footer)
    return head + body + foot


def _json_doc(cfg, payload, extra=()) -> str:
    doc = {"provenance": _provenance(cfg, extra)}
    doc.update(payload)
    return json.dumps(doc, indent=1) + "\n"


def _csv_rows(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# -- commands -------------------------------------------------------------------------


def cmd_make(cfg: RunConfig, args):
    spec = cfg.model
    m = propagator(spec, cfg.precision) if args.propagator else build_matrix(spec, cfg.precision)
    log.info("%s -> %dx%d matrix", spec.describe(), m.n_rows, m.n_cols)
    sys.stderr.write(f"# {spec.describe()} precision={cfg.precision} shape={m.n_rows}x{m.n_cols}\n")
    if cfg.fmt == "csv":
        p = m.precision
        im = m.imag_or_zeros()
        rows = [
            [str(i), str(j), p.format(m.re[i, j]), p.format(im[i, j])]
            for i in range(m.n_rows)
            for j in range(m.n_cols)
        ]
        _emit(cfg, _csv_doc(cfg, _csv_rows(["row", "col", "re", "im"], rows)))
    else:
        _emit(cfg, _json_doc(cfg, matrix_to_dict(m)))


def _default_t_max(spec: ModelSpec) -> int:
    T = spec.period
    return 2 * T if T else 100


def cmd_evolve(cfg: RunConfig, args):
    spec = cfg.model
    a = propagator(spec, cfg.precision)
    t_max = cfg.t_max or _default_t_max(spec)
    series = evolve_f(a, cfg.vectors, t_max, model=spec)
    reference = None
    footer = []
    compare = (
        spec.family == "block-transfer" and cfg.vectors.kind == "special" and cfg.precision.is_exact
    )
    extra = [f"vectors={cfg.vectors.describe()}", f"t_max={t_max}"]
    if compare:
        n, g = int(spec.n), spec.g

        def reference(t):
            return closed_form_f(n, g, t, cfg.precision)

        dev = max(
            (abs(mpq(z.re) - reference(t)) if z.im == 0 else math.inf)
            for t, z in zip(series.times, series.values)
        )
        footer.append(f"max_deviation={dev}")
    if cfg.fmt == "csv":
        body = series.to_csv(digits=args.digits, rational_columns=args.rational, reference=reference)
        _emit(cfg, _csv_doc(cfg, body, extra, footer))
    else:
        payload = series.to_dict()
        if compare:
            payload["closed_form"] = [str(reference(t)) for t in series.times]
            payload["max_deviation"] = footer[0].split("=", 1)[1]
        _emit(cfg, _json_doc(cfg, payload, extra))


def cmd_spectrum(cfg: RunConfig, args):
    spec = cfg.model
    p = cfg.precision
    f = spec.family
    if f == "ehrenfest":
        vals = [(str(x), "0") for x in ehrenfest_spectrum(int(spec.n))]
        kappas = None
        if args.kappa:
            log.warning("ehrenfest: no closed-form eigenvectors; kappa column omitted")
    else:
        if f == "block-transfer":
            es = eigen_A(int(spec.n), spec.g, p)
        elif f == "toeplitz-b":
            es = eigen_B(int(spec.n), spec.g, p)
        else:
            es = eigen_tilted_pauli(spec.g, p)
        vals = [(p.format(z.re), p.format(z.im)) for z in es.eigenvalues]
        kappas = [str(k) for k in es.condition_numbers] if args.kappa else None
    extra = [f"count={len(vals)}"]
    if cfg.fmt == "csv":
        head = ["index", "re", "im"] + (["kappa"] if kappas else [])
        rows = [[str(i), re, im] + ([kappas[i]] if kappas else []) for i, (re, im) in enumerate(vals)]
        _emit(cfg, _csv_doc(cfg, _csv_rows(head, rows), extra))
    else:
        payload = {"eigenvalues": [list(v) for v in vals]}
        if kappas:
            payload["condition_numbers"] = kappas
        _emit(cfg, _json_doc(cfg, payload, extra))


def _overlay_path(cfg, args):
    if args.overlay_out:
        return args.overlay_out
    if cfg.out:
        root = cfg.out.rsplit(".", 1)[0] if "." in os.path.basename(cfg.out) else cfg.out
        return root + ".symbol.csv"
    return None


def cmd_pseudospectrum(cfg: RunConfig, args):
    spec = cfg.model
    a = propagator(spec, cfg.precision)
    pmap = smin_map(a, cfg.grid, workers=cfg.threads, matrix_id=spec.describe())
    overlay = None
    fam = OVERLAYS.get(spec.family)
    if fam is not None:
        if fam == "circle-ehrenfest":
            par = math.pi / 2 if spec.alpha is None else abs(spec.alpha) * int(spec.n)
        else:
            par = float(spec.g)
        overlay = symbol_curve(fam, par, args.samples)
    n_flag = int(pmap.flagged.sum())
    extra = [f"grid={cfg.grid.nx}x{cfg.grid.ny}", f"flagged={n_flag}"]
    if overlay is not None:
        extra.append(f"overlay={overlay.family}")
    if cfg.fmt == "csv":
        _emit(cfg, _csv_doc(cfg, pmap.to_csv(), extra))
        opath = _overlay_path(cfg, args)
        if overlay is not None and opath is not None:
            _emit(cfg, _csv_doc(cfg, overlay.to_csv(), [f"symbol={overlay.family}"]), opath)
    else:
        payload = {"map": pmap.to_dict()}
        if overlay is not None:
            payload["overlay"] = overlay.to_dict()
        _emit(cfg, _json_doc(cfg, payload, extra))


def _read_series_csv(path):
    pairs = []
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    if reader.fieldnames is None or not {"t", "log_abs"} <= set(reader.fieldnames):
        raise ValidationError(f"{path}: series CSV needs 't' and 'log_abs' columns")
    for row in reader:
        try:
            pairs.append((int(row["t"]), float(row["log_abs"])))
        except (TypeError, ValueError):
            raise ValidationError(f"{path}: malformed row {row}") from None
    if not pairs:
        raise ValidationError(f"{path}: no data rows")
    return pairs


def cmd_fit(cfg: RunConfig, args):
    spec = cfg.model
    window = cfg.fit_window
    if window is None:
        window = default_fit_window(spec.M)
    if args.series:
        fit = fit_log_abs(_read_series_csv(args.series), *window, exclude_zeros=args.exclude_zeros)
        source = f"series={args.series}"
    else:
        a = propagator(spec, cfg.precision)
        series = evolve_f(a, cfg.vectors, window[1], model=spec)
        fit = growth_rate_fit(series, *window, exclude_zeros=args.exclude_zeros)
        source = f"vectors={cfg.vectors.describe()}"
    keys = ("slope", "intercept", "residual", "t0", "t1", "n_points", "n_excluded")
    vals = fit.to_dict()
    if cfg.fmt == "csv":
        row = [repr(vals[k]) if isinstance(vals[k], float) else str(vals[k]) for k in keys]
        _emit(cfg, _csv_doc(cfg, _csv_rows(keys, [row]), [source]))
    else:
        _emit(cfg, _json_doc(cfg, {"fit": vals}, [source]))


def cmd_bounds(cfg: RunConfig, args):
    spec = cfg.model
    p = cfg.precision
    f = spec.family
    a = build_matrix(spec, p)
    if f == "block-transfer":
        es = eigen_A(int(spec.n), spec.g, p)
    elif f == "toeplitz-b":
        es = eigen_B(int(spec.n), spec.g, p)
    else:
        es = eigen_tilted_pauli(spec.g, p)
    t_max = cfg.t_max or (2 * spec.period if spec.period else 2 * (a.n_rows + 2))
    track = norm_bounds_track(a, es, t_max)
    bad = track.violations()
    extra = [f"kappa={track.kappa!r}", f"rho={track.rho!r}", f"norm_A={track.norm_a!r}"]
    footer = [f"violations={len(bad)}" + (" at t=" + ",".join(map(str, bad)) if bad else "")]
    if cfg.fmt == "csv":
        _emit(cfg, _csv_doc(cfg, track.to_csv(), extra, footer))
    else:
        payload = track.to_dict()
        payload["violations"] = bad
        _emit(cfg, _json_doc(cfg, payload, extra))


def cmd_closed_form(cfg: RunConfig, args):
    p = cfg.precision
    g = _number(args.g, "g")
    t_max = cfg.t_max or 2 * (args.n + 2)
    vals = [closed_form_f(args.n, g, t, p) for t in range(t_max + 1)]
    extra = [f"n={args.n}", f"g={g}"]
    if cfg.fmt == "csv":
        rows = [[str(t), p.format(v)] for t, v in enumerate(vals)]
        _emit(cfg, _csv_doc(cfg, _csv_rows(["t", "f"], rows), extra))
    else:
        _emit(cfg, _json_doc(cfg, {"t": list(range(t_max + 1)), "f": [p.format(v) for v in vals]}, extra))


def cmd_fourier(cfg: RunConfig, args):
    p = cfg.precision
    M = args.m if args.m is not None else args.n // 2
    g = _number(args.g, "g")
    fc = fourier_coefficients(M, g, p)
    extra = [f"M={M}", f"g={g}"]
    if cfg.fmt == "csv":
        rows = []
        with p.context():
            for k, z in zip(range(-M, M + 1), fc.c):
                rows.append([str(k), p.format(z.re), p.format(z.im), p.format(p.sqrt(z.abs2()))])
        _emit(cfg, _csv_doc(cfg, _csv_rows(["k", "re", "im", "abs"], rows), extra))
    else:
        _emit(cfg, _json_doc(cfg, fc.to_dict(), extra))


HANDLERS = {
    "make": cmd_make,
    "evolve": cmd_evolve,
    "spectrum": cmd_spectrum,
    "pseudospectrum": cmd_pseudospectrum,
    "fit": cmd_fit,
    "bounds": cmd_bounds,
    "closed-form": cmd_closed_form,
    "fourier": cmd_fourier,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = config_from_args(args)
        HANDLERS[cfg.command](cfg, args)
    except ValidationError as exc:
        print(f"pseudopower: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ConvergenceError, SingularMatrixError) as exc:
        print(f"pseudopower: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"pseudopower: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

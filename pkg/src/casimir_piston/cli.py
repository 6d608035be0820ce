"""Command-line interface: ``casimir-piston {spectrum,force,sweep,kernel-demo}``.

Forces are reported dimensionless by default: ``F l^2`` for zero and
finite temperature, ``F l / T`` for the classical regime, where ``l`` is
the shape's reference length (triangle side, circle radius, rectangle
width, polygon circumradius). ``--raw`` switches to natural units.

Exit codes: 0 success, 2 configuration error, 3 numerical error.
"""
import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from . import asymptotics, config, force, geometry, numerical, spectrum
from .errors import CasimirError, ConfigError, DomainError, InsufficientSpectrumError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

SWEEP_COLUMNS = ("L_over_a", "F_scaled", "method", "modes_used", "truncation_estimate",
                 "status")
FORCE_COLUMNS = ("L", "L_over_a", "method", "regime", "value", "F_scaled", "modes_used",
                 "matsubara_terms", "truncation_estimate", "status")
KERNEL_COLUMNS = ("Q", "net", "side_L", "side_Linf", "force_T0")
# methods that sum over the spectrum, repeated for each truncation in a sweep
_SUMS = ("quantum", "classical", "finiteT", "kernel")


# -- building blocks ---------------------------------------------------------

def build_spectrum(cfg, count=None):
    count = cfg.mode_count if count is None else count
    if cfg.spectrum_source == "file":
        try:
            with open(cfg.spectrum_file, newline="") as fh:
                ms = spectrum.read_csv(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read spectrum file: {exc}") from exc
        except ValueError as exc:
            raise ConfigError(f"bad spectrum file: {exc}") from exc
        return ms.truncate(min(count, ms.cutoff_count))
    if cfg.spectrum_source == "numerical":
        return numerical.spectrum_numerical(cfg.shape, cfg.grid_h, count, method=cfg.solver)
    try:
        return spectrum.spectrum_analytic(cfg.shape, count)
    except DomainError as exc:
        raise ConfigError(f"{exc} (set spectrum_source to 'numerical')") from exc


def _regime(cfg, method):
    if method in ("quantum", "kernel"):
        return "quantum"
    if method in ("classical", "finiteT"):
        return method
    if cfg.regime is not None:
        return cfg.regime
    return "quantum" if cfg.T == 0 else ("classical" if method == "far" else "finiteT")


def _scale(cfg, regime, value):
    if cfg.raw or value is None:
        return value
    ell = geometry.reference_length(cfg.shape)
    if regime == "classical":
        return value * ell / cfg.T
    return value * ell * ell


def evaluate(cfg, ms, method, L):
    """One force row as a dict; numerical failures become a status string."""
    regime = _regime(cfg, method)
    inv = geometry.invariants(cfg.shape)
    row = {"L": L, "L_over_a": L / geometry.reference_length(cfg.shape), "method": method,
           "regime": regime, "value": None, "modes_used": ms.cutoff_count,
           "matsubara_terms": 0, "truncation_estimate": 0.0, "status": "ok"}
    if regime in ("classical", "finiteT") and cfg.T <= 0:
        raise ConfigError(f"method {method} in the {regime} regime needs T > 0")
    try:
        if method == "quantum":
            res = force.force_T0(ms, L, cfg.tol, strict=cfg.strict, area=inv.A)
        elif method == "classical":
            res = force.force_classical(ms, L, cfg.T, cfg.tol, strict=cfg.strict, area=inv.A)
        elif method == "finiteT":
            res = force.force_finite_T(ms, force.ThermalState(L, cfg.T), cfg.tol,
                                       strict=cfg.strict, area=inv.A)
        else:
            res = None
        if res is not None:
            row.update(value=res.value, matsubara_terms=res.matsubara_terms,
                       truncation_estimate=res.truncation_estimate)
            if res.truncation_estimate > cfg.tol * abs(res.value):
                row["status"] = "truncated"
        elif method == "near":
            if regime == "quantum":
                row["value"] = asymptotics.near_T0(inv.A, inv.chi, L)
            elif regime == "classical":
                row["value"] = asymptotics.near_classical(inv.A, L, cfg.T)
            else:
                row["value"] = asymptotics.near_finite_T(inv.A, inv.chi, L, cfg.T)
            row["modes_used"] = 0
        elif method == "far":
            lam1, g1 = ms.lowest_level()
            if regime == "finiteT":
                raise ConfigError("far-field formula exists for quantum or classical regime only")
            row["value"] = asymptotics.far_force(lam1, g1, L, cfg.T, regime)
            row["modes_used"] = g1
        elif method == "dos-oracle":
            T = 0.0 if regime == "quantum" else cfg.T
            row["value"] = asymptotics.dos_oracle(inv.A, L, T, chi=inv.chi)
            row["modes_used"] = 0
        elif method == "kernel":
            kc = cfg.kernel
            k = force.kernel_force(ms, L, force.KernelSpec(kc.kernel, max(kc.Q), kc.L_inf),
                                   kc.nx_max)
            row.update(value=k.net, regime="quantum")
    except InsufficientSpectrumError as exc:
        row["status"] = f"insufficient-spectrum (need ~{exc.required_count} modes)"
        if cfg.strict:
            raise
    row["F_scaled"] = _scale(cfg, regime, row["value"])
    row["truncation_estimate_scaled"] = _scale(cfg, regime, row["truncation_estimate"])
    return row


def _rows(cfg, jobs):
    """Evaluate ``(ms, method, L)`` jobs, in input order."""
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(lambda j: evaluate(cfg, *j), jobs))
    return [evaluate(cfg, *j) for j in jobs]


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit(rows, columns, fmt, out):
    if fmt == "json":
        json.dump([{c: r.get(c) for c in columns} for r in rows], out, indent=1)
        out.write("\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])


# -- subcommands -------------------------------------------------------------

def cmd_spectrum(cfg, out):
    ms = build_spectrum(cfg)
    if cfg.output == "json":
        rows = [{"lambda2": float(l2), "multiplicity": int(m), "bc": b.value}
                for l2, m, b in zip(ms.lambda2, ms.mult, ms.bc)]
        json.dump(rows, out, indent=1)
        out.write("\n")
    else:
        spectrum.write_csv(ms, out)


def cmd_force(cfg, out):
    ms = build_spectrum(cfg)
    jobs = [(ms, m, L) for L in cfg.L_values for m in cfg.method]
    rows = _rows(cfg, jobs)
    for r in rows:
        if not cfg.raw:
            r["truncation_estimate"] = r.pop("truncation_estimate_scaled")
    emit(rows, FORCE_COLUMNS, cfg.output, out)


def cmd_sweep(cfg, out):
    full = build_spectrum(cfg)
    spectra = [full] + [full.truncate(n) for n in cfg.truncations if n < full.cutoff_count]
    jobs = [(ms, m, L) for m in cfg.method for ms in (spectra if m in _SUMS else spectra[:1])
            for L in cfg.L_values]
    rows = _rows(cfg, jobs)
    for r in rows:
        r["truncation_estimate"] = r.pop("truncation_estimate_scaled")
    emit(rows, SWEEP_COLUMNS, cfg.output, out)


def cmd_kernel_demo(cfg, out):
    if cfg.T != 0:
        raise ConfigError("kernel-demo runs at T = 0 only")
    ms = build_spectrum(cfg)
    kc = cfg.kernel
    L = cfg.L_values[0]
    ref = force.force_T0(ms, L, cfg.tol, strict=False).value
    results = force.kernel_scan(ms, L, kc.Q, kc.kernel, kc.L_inf, kc.nx_max)
    rows = [{"Q": k.Q, "net": _scale(cfg, "quantum", k.net),
             "side_L": _scale(cfg, "quantum", k.side_L),
             "side_Linf": _scale(cfg, "quantum", k.side_Linf),
             "force_T0": _scale(cfg, "quantum", ref)} for k in results]
    emit(rows, KERNEL_COLUMNS, cfg.output, out)


COMMANDS = {"spectrum": cmd_spectrum, "force": cmd_force, "sweep": cmd_sweep,
            "kernel-demo": cmd_kernel_demo}


# -- argument parsing --------------------------------------------------------

def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _ints(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def build_parser():
    parser = argparse.ArgumentParser(
        prog="casimir-piston",
        description="Casimir force on the plates of a piston from the 2D Laplacian spectrum.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--shape", help="inline shape, e.g. triangle:a=1 or circle:R=1")
    common.add_argument("--count", type=int, dest="mode_count",
                        help="number of modes (multiplicity-weighted)")
    common.add_argument("--source", dest="spectrum_source",
                        choices=config.SOURCES, help="spectrum source")
    common.add_argument("--spectrum-file", help="CSV spectrum (lambda2,multiplicity,bc)")
    common.add_argument("--grid-h", type=float, help="mesh spacing for the numerical source")
    common.add_argument("--solver", choices=("fd", "fem"), help="numerical eigensolver")
    common.add_argument("--format", dest="output", choices=("csv", "json"))
    common.add_argument("--out", help="write to this file instead of stdout")

    forces = argparse.ArgumentParser(add_help=False)
    forces.add_argument("--method", type=lambda s: s.split(","),
                        help=f"comma-separated subset of {','.join(config.METHODS)}")
    forces.add_argument("--regime", choices=config.REGIMES,
                        help="regime for near/far/dos-oracle (default from T)")
    forces.add_argument("--L", type=_floats, dest="L_values", help="separations, comma-separated")
    forces.add_argument("--T", type=float, help="temperature k_B T / hbar c")
    forces.add_argument("--tol", type=float)
    forces.add_argument("--strict", action="store_true", default=None,
                        help="fail instead of flagging rows whose spectrum is too short")
    forces.add_argument("--raw", action="store_true", default=None,
                        help="natural units instead of scaled output")
    forces.add_argument("--workers", type=int)

    sub.add_parser("spectrum", parents=[common], help="dump the mode spectrum as CSV")
    sub.add_parser("force", parents=[common, forces], help="force at given separations")
    p = sub.add_parser("sweep", parents=[common, forces], help="scaled force versus L/a")
    p.add_argument("--truncations", type=_ints, help="extra truncated spectra, e.g. 20,40")
    p = sub.add_parser("kernel-demo", parents=[common, forces],
                       help="cutoff-kernel regularization versus Q")
    p.add_argument("--Q", type=_floats, help="cutoff values, comma-separated")
    p.add_argument("--L-inf", type=float, dest="L_inf")
    p.add_argument("--kernel", choices=("exp", "gauss"))
    p.add_argument("--nx-max", type=int)
    return parser


def config_from_args(args):
    doc = config.load(args.config) if args.config else {}
    keys = ("shape", "mode_count", "spectrum_source", "spectrum_file", "grid_h", "solver",
            "output", "method", "regime", "L_values", "T", "tol", "strict", "raw", "workers",
            "truncations")
    doc = config.merge(doc, {k: getattr(args, k, None) for k in keys})
    if args.command == "kernel-demo":
        block = dict(doc.get("kernel") or {})
        for key in ("Q", "L_inf", "kernel", "nx_max"):
            val = getattr(args, key, None)
            if val is not None:
                block[key] = val
        doc["kernel"] = block
        doc.setdefault("method", ["kernel"])
    if args.command == "spectrum" and "mode_count" not in doc:
        doc["mode_count"] = 100
    return config.from_dict(doc)


def main(argv=None, stdout=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    stdout = sys.stdout if stdout is None else stdout
    try:
        cfg = config_from_args(args)
        buf = io.StringIO()
        COMMANDS[args.command](cfg, buf)
        if args.out:
            with open(args.out, "w", newline="") as fh:
                fh.write(buf.getvalue())
        else:
            stdout.write(buf.getvalue())
    except ConfigError as exc:
        print(f"casimir-piston: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (CasimirError, ArithmeticError, RuntimeError) as exc:
        print(f"casimir-piston: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: ``tomokit tomogram|invert|verify``.

Exit codes: 0 ok, 1 a check failed, 2 bad configuration, 3 a numerical
precondition failed (the message names the module error).
"""

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import config as cfgmod
from . import io
from .classical import QuadricSpec, deformed_radon_inverse
from .exceptions import ConfigError, TomographyError
from .grids import WignerField, relative_l2
from .quadric import (QuadraticHamiltonianSymbol, deformed_quantum_tomogram,
                      quantum_quadric_inverse, quantum_quadric_tomogram)
from .states import build_state, wigner, wigner_from_density
from .symplectic import (homodyne_invert_to_density, homodyne_tomogram, invert_to_density,
                         invert_to_wigner, symplectic_tomogram, symplectic_tomogram_from_density)
from .thick import (thick_invert_to_wigner, thick_quadric_inverse, thick_radon_deconvolve_invert,
                    thick_radon_tomogram, thick_symplectic_tomogram, thicken)
from .verify import SUITES, Check

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def thread_count(flag):
    if flag is not None:
        return max(1, flag)
    env = os.environ.get("TOMOKIT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ConfigError(f"TOMOKIT_THREADS must be an integer, got {env!r}") from exc
    return 1


def _symbol(cfg):
    q = cfg["quadric"]
    try:
        return QuadraticHamiltonianSymbol(QuadricSpec(B=q["B"], C=q.get("C"), shift=q.get("shift")))
    except (ValueError, TomographyError) as exc:
        raise ConfigError(f"invalid quadric: {exc}") from exc


def _tomogram_chunk(cfg, W, points):
    family, X, window = cfg["family"], cfg["X"], cfg["window"]
    if family == "symplectic":
        if cfg["source"] == "density":
            rho = build_state(cfg["state"], cfg["inversion"]["n_max"])
            t = symplectic_tomogram_from_density(rho.entries, points, X)
            return thicken(t, window) if window else t
        if window:
            return thick_symplectic_tomogram(W, window, points, X)
        return symplectic_tomogram(W, points, X)
    if family == "homodyne":
        if window:
            return thick_radon_tomogram(W, window, points[:, 0], X)
        return homodyne_tomogram(W, points[:, 0], X)
    if family == "quadric":
        return quantum_quadric_tomogram(W, _symbol(cfg), points, X, window=window)
    xi, nu = np.unique(points[:, 0]), np.unique(points[:, 1])
    full = deformed_quantum_tomogram(W, xi, nu, X)
    keep = [full.index_of(p) for p in points]
    return full._replace(full.values[keep], params=points)


def compute_tomogram(cfg, threads=1):
    """Tomogram for a resolved config; parameter points are split across threads."""
    points = cfg["points"]
    W = None
    if not (cfg["family"] == "symplectic" and cfg["source"] == "density"):
        W = wigner(cfg["state"], cfg["grid"])
    chunks = [c for c in np.array_split(points, min(threads, len(points))) if len(c)]
    if len(chunks) == 1:
        return _tomogram_chunk(cfg, W, points)
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        parts = list(pool.map(lambda c: _tomogram_chunk(cfg, W, c), chunks))
    first = parts[0]
    return first._replace(np.concatenate([p.values for p in parts]),
                          params=np.concatenate([p.params for p in parts]))


def tomogram_checks(t, tol):
    norm = t.normalization()
    norm_err = float(np.max(np.abs(norm - 1.0)))
    low = float(t.values.min())
    return [Check("X-normalization", norm_err, tol["normalization"],
                  norm_err <= tol["normalization"]),
            Check("nonnegativity (minimum value)", low, -tol["negativity"],
                  low >= -tol["negativity"])]


def invert(cfg, t):
    """Run the configured inverse; returns (artifact text, checks)."""
    inv, tol, state = cfg["inversion"], cfg["tolerances"], cfg["state"]
    family, target, out = t.family, inv["target"], cfg["out_grid"]
    eps, n_max = inv["eps"], inv["n_max"]
    window = t.window if t.is_thick else None
    mask = None
    checks = []
    if family == "symplectic" and target == "wigner":
        W = thick_invert_to_wigner(t, out, eps=eps) if window else invert_to_wigner(t, out, eps=eps)
    elif family == "symplectic":
        scaled = t * window.normalization_constant if window else t
        rho = invert_to_density(scaled, n_max, eps=eps)
    elif family == "homodyne":
        if window:
            rho = thick_radon_deconvolve_invert(t, n_max, r_max=inv["r_max"], dr=inv["dr"], eps=eps)
        else:
            rho = homodyne_invert_to_density(t, n_max, r_max=inv["r_max"], dr=inv["dr"], eps=eps)
        if target == "wigner":
            W = wigner_from_density(rho, out)
    elif family == "quadric":
        if target != "wigner":
            raise ConfigError("quadric tomograms invert to a Wigner function only")
        H = _symbol(cfg)
        W = thick_quadric_inverse(t, H, out, eps=eps) if window else \
            quantum_quadric_inverse(t, H, out, eps=eps)
    else:
        if target != "wigner":
            raise ConfigError("deformed tomograms invert to a Wigner function only")
        f = deformed_radon_inverse(t, out, eps=eps)
        W = WignerField(out, 2.0 * np.pi * f.values, residual=f.residual)
        mask = f.mask
    if target == "wigner":
        exact = wigner(state, out).values
        keep = np.ones(exact.shape, bool) if mask is None else ~mask
        err = relative_l2(W.values[keep], exact[keep])
        checks.append(Check("Wigner relative L2 error", err, tol["l2"], err < tol["l2"]))
        checks.append(Check("imaginary residual", W.residual, tol["residual"],
                            W.residual <= tol["residual"]))
        return io.wigner_to_csv(W), checks
    fid = rho.fidelity(build_state(state, n_max))
    checks.append(Check("fidelity", fid, tol["fidelity"], fid > tol["fidelity"]))
    return io.density_to_csv(rho), checks


def _report(out_dir, cfg, command, checks, timings, extra=None):
    env = {"command": command, "damping_eps": cfg["inversion"]["eps"] if cfg else None}
    if cfg:
        env.update({"phase_space_grid": list(cfg["grid"].shape), "X_points": int(cfg["X"].size),
                    "X_step": float(cfg["X"][1] - cfg["X"][0]),
                    "parameter_points": int(len(cfg["points"])),
                    "n_max": cfg["inversion"]["n_max"],
                    "window": io.window_token(cfg["window"])})
    env.update(extra or {})
    report = {"checks": [c.to_dict() for c in checks], "environment": env,
              "seconds": {k: round(v, 3) for k, v in timings.items()},
              "passed": all(c.passed for c in checks)}
    name = cfg["paths"]["report"] if cfg else "report.json"
    (out_dir / name).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return report


def _print_checks(checks):
    for c in checks:
        print(c.line())


def cmd_tomogram(args):
    cfg = cfgmod.load(args.config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    t = compute_tomogram(cfg, thread_count(args.threads))
    timings = {"tomogram": time.perf_counter() - start}
    (out_dir / cfg["paths"]["tomogram"]).write_text(io.tomogram_to_csv(t))
    if args.gnuplot:
        (out_dir / cfg["paths"]["gnuplot"]).write_text(io.tomogram_to_gnuplot(t))
    checks = tomogram_checks(t, cfg["tolerances"])
    _report(out_dir, cfg, "tomogram", checks, timings)
    _print_checks(checks)
    return EXIT_CHECK if args.strict and not all(c.passed for c in checks) else EXIT_OK


def cmd_invert(args):
    cfg = cfgmod.load(args.config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    timings = {}
    start = time.perf_counter()
    if args.tomogram:
        try:
            t = io.tomogram_from_csv(Path(args.tomogram).read_text())
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read tomogram {args.tomogram}: {exc}") from exc
        if t.family != cfg["family"]:
            raise ConfigError(f"tomogram family {t.family!r} does not match the configured "
                              f"{cfg['family']!r}")
    else:
        t = compute_tomogram(cfg, thread_count(args.threads))
        (out_dir / cfg["paths"]["tomogram"]).write_text(io.tomogram_to_csv(t))
    timings["tomogram"] = time.perf_counter() - start
    start = time.perf_counter()
    text, checks = invert(cfg, t)
    timings["inversion"] = time.perf_counter() - start
    (out_dir / cfg["paths"]["inversion"]).write_text(text)
    _report(out_dir, cfg, "invert", checks, timings, {"target": cfg["inversion"]["target"]})
    _print_checks(checks)
    return EXIT_CHECK if args.strict and not all(c.passed for c in checks) else EXIT_OK


def cmd_verify(args):
    start = time.perf_counter()
    checks = SUITES[args.suite]()
    timings = {args.suite: time.perf_counter() - start}
    _print_checks(checks)
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        _report(out_dir, None, f"verify {args.suite}", checks, timings)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_CHECK


def build_parser():
    parser = argparse.ArgumentParser(prog="tomokit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("--config", required=config_required, help="pipeline JSON config")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads (default: $TOMOKIT_THREADS or 1)")
        p.add_argument("--strict", action="store_true",
                       help="exit 1 when any reported check is out of tolerance")

    p = sub.add_parser("tomogram", help="compute a tomogram and write it as CSV")
    common(p)
    p.add_argument("--gnuplot", action="store_true", help="also write two-column X/value blocks")
    p.set_defaults(func=cmd_tomogram)
    p = sub.add_parser("invert", help="invert a tomogram (read with --tomogram or computed)")
    common(p)
    p.add_argument("--tomogram", help="tomogram CSV to invert")
    p.set_defaults(func=cmd_invert)
    p = sub.add_parser("verify", help="run a named self-check suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--out", default=None, help="directory for report.json")
    p.add_argument("--threads", type=int, default=None, help="accepted for symmetry; unused")
    p.add_argument("--strict", action="store_true", help="accepted for symmetry; verify is strict")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TomographyError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

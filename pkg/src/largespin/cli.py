"""Command-line interface: ``largespin <subcommand> [options]``.

Exit codes: 0 success, 1 invalid input (or a failed validation criterion),
2 solver error.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys

import numpy as np

from . import acceptance
from .cef_full import CALIBRATION_RATIO, degeneracy_pattern, full_spectrum
from .coherent_berry import equator_loop, latitude_loop, wilson_loop_phase
from .errors import ConfigParseError, ConfigValidationError, LargeSpinError, SolverError
from .estimates import harmonic_spacing, level_count, response_coefficients, wkb_exponent
from .linalg_core import BACKEND, cluster_levels
from .pipeline import (
    RunConfig,
    config_from_mapping,
    read_config,
    rows_to_csv,
    run_sweep,
    write_csv,
    zero_field_w,
)
from .planar_rotor import RotorBasis, levels_below_barrier, rotor_spectrum
from .spin_algebra import spin_operators
from .tight_binding import TbModel, peierls_alpha, tb_eigenvalues_numeric

log = logging.getLogger("largespin")


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="YAML run configuration")
    p.add_argument("--ion", choices=["Ho3+", "Dy3+"], help="ion preset (default Ho3+)")
    p.add_argument("--a", type=float, help="axial CEF constant a")
    p.add_argument("--b", type=float, help="in-plane quartic CEF constant b (default: b J^2/a = pi^2/8)")
    p.add_argument("--h", type=float, help="in-plane effective field")
    p.add_argument("--phi-h", type=float, dest="phi_h", help="in-plane field angle (rad)")
    p.add_argument("--hz", type=float, help="axial effective field")
    p.add_argument("--m-max", type=int, dest="m_max", help="rotor plane-wave truncation")
    p.add_argument("--model", choices=["full", "rotor", "tb"], help="restrict to one model")
    p.add_argument("--out", help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="largespin", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("operators", help="print spin matrices J_x, J_y, J_z")
    _common(p)
    p.add_argument("--two-j", type=int, dest="two_j", help="2J (overrides the ion)")

    p = sub.add_parser("spectrum", help="lowest levels of one or all models")
    _common(p)
    p.add_argument("--levels", type=int, default=8)

    p = sub.add_parser("sweep", help="field/parameter sweep to CSV")
    _common(p)

    p = sub.add_parser("berry", help="Wilson-loop phases of coherent states")
    _common(p)
    p.add_argument("--segments", type=int, default=10_000)
    p.add_argument("--theta", type=float, default=math.pi / 2, help="latitude of the loop")

    p = sub.add_parser("estimate", help="WKB exponent, level count, response coefficients")
    _common(p)

    p = sub.add_parser("validate", help="run the acceptance criteria")
    p.add_argument("--all", action="store_true", help="include the slow criteria")
    return parser


def resolve_config(args) -> RunConfig:
    if getattr(args, "config", None):
        cfg = read_config(args.config)
        data = None
    else:
        data = {"ion": "Ho3+", "a": 1.0}
        cfg = None
    if cfg is None or any(getattr(args, k, None) is not None for k in ("ion", "a", "b", "h", "phi_h", "hz", "m_max", "model")):
        base = {} if cfg is None else _as_mapping(cfg)
        if data:
            base.update(data)
        if args.ion is not None:
            base.pop("two_J", None)
            base.pop("g", None)
            base["ion"] = args.ion
        if args.a is not None:
            base["a"] = args.a
        if args.b is not None:
            base.pop("b_ratio", None)
            base["b"] = args.b
        elif "b" not in base:
            base["b_ratio"] = CALIBRATION_RATIO
        fld = dict(base.get("field", {}))
        for k in ("h", "phi_h", "hz"):
            if getattr(args, k) is not None:
                fld[k] = getattr(args, k)
        base["field"] = fld
        if args.m_max is not None:
            base["m_max"] = args.m_max
        if args.model is not None:
            base["models"] = [args.model]
            if base.get("sweep"):
                base["sweep"] = {**base["sweep"], "models": [args.model]}
        cfg = config_from_mapping(base)
    return cfg


def _as_mapping(cfg: RunConfig) -> dict:
    out = {
        "two_J": cfg.ion.two_J, "g": cfg.ion.g, "a": cfg.a, "b": cfg.b,
        "field": {"h": cfg.field.h, "phi_h": cfg.field.phi_h, "hz": cfg.field.hz},
        "models": list(cfg.models),
    }
    if cfg.ion.label in ("Ho3+", "Dy3+"):
        out.pop("two_J")
        out["ion"] = cfg.ion.label
    if cfg.w is not None:
        out["w"] = cfg.w
    if cfg.m_max is not None:
        out["m_max"] = cfg.m_max
    if cfg.sweep is not None:
        s = cfg.sweep
        out["sweep"] = {"variable": s.variable, "start": s.start, "stop": s.stop, "steps": s.steps, "models": list(s.models)}
    return out


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_operators(args) -> int:
    if args.two_j is not None:
        two_j = args.two_j
    else:
        two_j = resolve_config(args).ion.two_J
    lines = []
    with np.printoptions(precision=6, suppress=True, linewidth=200):
        for name, op in zip(("J_x", "J_y", "J_z"), spin_operators(two_j)):
            lines.append(f"{name} (2J={two_j})\n{op}\n")
    _emit("\n".join(lines), args.out)
    return 0


def cmd_spectrum(args) -> int:
    cfg = resolve_config(args)
    p, f = cfg.params, cfg.field
    n = args.levels
    lines = [f"# {cfg.ion.label} a={p.a:.12g} b={p.b:.12g} h={f.h:.6g} phi_h={f.phi_h:.6g} hz={f.hz:.6g}"]
    for model in cfg.models:
        if model == "full":
            s = full_spectrum(p, f)
            vals = s.values
            pattern = degeneracy_pattern(s, min(4, len(vals)))
        elif model == "rotor":
            basis = RotorBasis.for_params(p, cfg.m_max) if cfg.m_max else None
            s = rotor_spectrum(p, f, basis)
            vals = s.values
            pattern = degeneracy_pattern(s, 4)
        else:
            w = cfg.w if cfg.w is not None else zero_field_w(p, cfg.m_max)
            m = TbModel(w, peierls_alpha(cfg.ion.two_J, f.hz, p.a), f.h * p.J, f.phi_h)
            vals = tb_eigenvalues_numeric(m) - f.hz**2 / (2 * p.a)
            pattern = [mult for _, mult in cluster_levels(vals)]
        shown = " ".join(f"{v:.12g}" for v in vals[:n])
        lines.append(f"{model}: {shown}")
        lines.append(f"{model} lowest-quadruplet multiplicities: {pattern}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_sweep(args) -> int:
    cfg = resolve_config(args)
    if cfg.sweep is None:
        raise ConfigValidationError("sweep", "the sweep command needs a sweep block in --config")
    rows = run_sweep(cfg)
    for r in rows:
        if r.error:
            print(f"row {r.grid_var}={r.grid_value} {r.model}: {r.error}", file=sys.stderr)
    if args.out:
        write_csv(rows, args.out)
    else:
        sys.stdout.write(rows_to_csv(rows))
    return 0


def cmd_berry(args) -> int:
    cfg = resolve_config(args)
    tj = cfg.ion.two_J
    j = tj / 2
    lines = []
    for label, loop in (("equator", equator_loop(args.segments)), (f"latitude theta={args.theta:.6g}", latitude_loop(args.theta, args.segments))):
        ph = wilson_loop_phase(tj, loop)
        lines.append(f"{label}: W = {ph.real:+.12f} {ph.imag:+.12f}i  arg = {np.angle(ph):+.12f}")
    omega = 2 * math.pi * (1 - math.cos(args.theta))
    ref = complex(np.exp(-1j * j * omega))
    lines.append(f"expected for latitude loop exp(-i J Omega): {ref.real:+.12f} {ref.imag:+.12f}i (Omega={omega:.12g})")
    lines.append(f"equator expectation (-1)^(2J) = {(-1) ** tj:+d}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_estimate(args) -> int:
    cfg = resolve_config(args)
    p = cfg.params
    w = cfg.w if cfg.w is not None else zero_field_w(p, cfg.m_max)
    r = response_coefficients(p, w)
    n_below = levels_below_barrier(p, RotorBasis.for_params(p, cfg.m_max) if cfg.m_max else None)
    lines = [
        f"ion {cfg.ion.label}  2J={cfg.ion.two_J}  g={cfg.ion.g:.6g}  a={p.a:.12g}  b={p.b:.12g}  bJ^2/a={p.b * p.J**2 / p.a:.12g}",
        f"wkb_exponent        {wkb_exponent(p):.12g}",
        f"level_count         {level_count(p):.12g}  (rotor levels below barrier: {n_below})",
        f"harmonic_spacing    {harmonic_spacing(p):.12g}",
        f"w                   {w:.12g}  ({'given' if cfg.w is not None else 'extracted from rotor'})",
        f"omega / w           {harmonic_spacing(p) / w:.6g}",
        f"chi_plane           {'Curie (free moment)' if r.curie else f'{r.chi_plane:.12g}'}",
        f"chi_axis            {r.chi_axis:.12g}",
        f"moment_plane        {r.moment_plane:.12g}  (g mu_B units; {r.moment_plane * cfg.ion.g:.6g} mu_B)",
        f"moment_axis         {r.moment_axis:.12g}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_validate(args) -> int:
    results = acceptance.run_all(fast=not args.all)
    for c in results:
        print(c.line())
    failed = [c for c in results if not c.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed (backend: {BACKEND})")
    return 1 if failed else 0


COMMANDS = {
    "operators": cmd_operators,
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
    "berry": cmd_berry,
    "estimate": cmd_estimate,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ConfigParseError, ConfigValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 2
    except LargeSpinError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 1
    except ArithmeticError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

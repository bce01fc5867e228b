"""Run configuration, parameter sweeps across the three model levels, CSV output.

Configuration files are YAML mappings::

    ion: Ho3+              # preset, or give two_J (and optionally g) instead
    a: 1.0
    b_ratio: 1.2337        # b J^2 / a; alternatively b: <absolute value>
    field: {h: 0.0, phi_h: 0.0, hz: 0.0}
    models: [full, rotor, tb]
    w: extract             # tb hopping: a number, or "extract" (zero-field rotor)
    m_max: 64              # optional rotor truncation override
    sweep: {variable: h, start: 0.0, stop: 1.0e-4, steps: 11}

Unknown keys are rejected.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import yaml

from .cef_full import FieldConfig, ModelParams, full_spectrum
from .errors import ConfigParseError, ConfigValidationError, LargeSpinError, UnknownIon
from .estimates import extract_w
from .linalg_core import eigvals
from .planar_rotor import RotorBasis, choose_truncation, rotor_spectrum
from .spin_algebra import IonParams, ion_preset
from .tight_binding import TbModel, peierls_alpha, tb_hamiltonian

log = logging.getLogger(__name__)

MODELS = ("full", "rotor", "tb")
SWEEP_VARIABLES = ("h", "phi_h", "hz", "b")
CSV_HEADER = ["grid_var", "grid_value", "model", "E0", "E1", "E2", "E3",
              "moment_plane", "moment_z", "chi_plane", "chi_axis"]

_TOP_KEYS = {"ion", "two_J", "g", "a", "b", "b_ratio", "field", "models", "w", "m_max", "sweep"}
_FIELD_KEYS = {"h", "phi_h", "hz"}
_SWEEP_KEYS = {"variable", "start", "stop", "steps", "models"}

# second differences need wider steps than first ones to stay above roundoff
HBAR_STEP2 = 1e-2  # times w, on hbar = hJ
HZ_STEP2 = 1e-3  # times a


def first_derivative_step(w: float, a: float) -> float:
    """Field step for moments: min(1e-3 w, 1e-6 a)."""
    return min(1e-3 * w, 1e-6 * a)


@dataclass(frozen=True)
class SweepGrid:
    variable: str
    start: float
    stop: float
    steps: int
    models: tuple[str, ...] = MODELS

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ConfigValidationError("sweep.variable", f"must be one of {SWEEP_VARIABLES}")
        if int(self.steps) != self.steps or self.steps < 2:
            raise ConfigValidationError("sweep.steps", "must be an integer >= 2")
        if not self.start <= self.stop:
            raise ConfigValidationError("sweep.start", "start must not exceed stop")
        bad = set(self.models) - set(MODELS)
        if bad or not self.models:
            raise ConfigValidationError("models", f"unknown or empty model list {sorted(bad)}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, int(self.steps))


@dataclass(frozen=True)
class RunConfig:
    ion: IonParams
    a: float
    b: float
    field: FieldConfig = FieldConfig()
    models: tuple[str, ...] = MODELS
    w: float | None = None  # None: extract from a zero-field rotor solve
    m_max: int | None = None
    sweep: SweepGrid | None = None

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.ion, self.a, self.b)


@dataclass
class SweepRow:
    grid_var: str
    grid_value: float
    model: str
    energies: list[float] | None = None
    moment_plane: float | None = None
    moment_z: float | None = None
    chi_plane: float | None = None
    chi_axis: float | None = None
    error: str | None = field(default=None, compare=False)

    def cells(self) -> list[str]:
        e = self.energies or [None] * 4
        vals = [*e, self.moment_plane, self.moment_z, self.chi_plane, self.chi_axis]
        return [self.grid_var, _fmt(self.grid_value), self.model, *(_fmt(v) for v in vals)]


def _fmt(x) -> str:
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return ""
    return format(float(x), ".17g")


# --------------------------------------------------------------------------- config

def _number(raw, key, positive=False, nonneg=False):
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ConfigValidationError(key, f"expected a number, got {raw!r}")
    x = float(raw)
    if not math.isfinite(x):
        raise ConfigValidationError(key, "must be finite")
    if positive and not x > 0:
        raise ConfigValidationError(key, f"must be > 0, got {x}")
    if nonneg and x < 0:
        raise ConfigValidationError(key, f"must be >= 0, got {x}")
    return x


def _check_keys(block, allowed, prefix=""):
    if not isinstance(block, dict):
        raise ConfigValidationError(prefix.rstrip(".") or "<root>", "expected a mapping")
    for k in block:
        if k not in allowed:
            raise ConfigValidationError(f"{prefix}{k}", "unknown key")


def _models(raw, key):
    if isinstance(raw, str):
        raw = [raw]
    if not isinstance(raw, (list, tuple)) or not raw:
        raise ConfigValidationError(key, "expected a non-empty list of models")
    for m in raw:
        if m not in MODELS:
            raise ConfigValidationError(key, f"unknown model {m!r}; choose from {MODELS}")
    return tuple(dict.fromkeys(raw))


def config_from_mapping(data: dict) -> RunConfig:
    """Validate a parsed configuration mapping."""
    if data is None:
        data = {}
    _check_keys(data, _TOP_KEYS)

    if "ion" in data:
        if "two_J" in data:
            raise ConfigValidationError("two_J", "give either ion or two_J, not both")
        try:
            ion = ion_preset(str(data["ion"]))
        except UnknownIon as exc:
            raise ConfigValidationError("ion", str(exc)) from None
        if "g" in data:
            ion = replace(ion, g=_number(data["g"], "g", positive=True))
    elif "two_J" in data:
        tj = data["two_J"]
        if isinstance(tj, bool) or not isinstance(tj, int) or tj < 1:
            raise ConfigValidationError("two_J", f"must be a positive integer, got {tj!r}")
        g = _number(data.get("g", 1.0), "g", positive=True)
        ion = IonParams(tj, 0, 0, g, f"2J={tj}")
    else:
        raise ConfigValidationError("ion", "missing: give an ion preset or two_J")

    if "a" not in data:
        raise ConfigValidationError("a", "missing")
    a = _number(data["a"], "a", positive=True)
    if "b" in data and "b_ratio" in data:
        raise ConfigValidationError("b_ratio", "give either b or b_ratio, not both")
    if "b_ratio" in data:
        b = _number(data["b_ratio"], "b_ratio", nonneg=True) * a / ion.J**2
    elif "b" in data:
        b = _number(data["b"], "b", nonneg=True)
    else:
        raise ConfigValidationError("b", "missing: give b or b_ratio")

    fblock = data.get("field", {}) or {}
    _check_keys(fblock, _FIELD_KEYS, "field.")
    fc = FieldConfig(
        _number(fblock.get("h", 0.0), "field.h", nonneg=True),
        _number(fblock.get("phi_h", 0.0), "field.phi_h"),
        _number(fblock.get("hz", 0.0), "field.hz"),
    )

    models = _models(data["models"], "models") if "models" in data else MODELS

    w = None
    if "w" in data:
        if data["w"] == "extract":
            w = None
        else:
            w = _number(data["w"], "w", positive=True)

    m_max = None
    if data.get("m_max") is not None:
        mm = data["m_max"]
        if isinstance(mm, bool) or not isinstance(mm, int) or mm < 8:
            raise ConfigValidationError("m_max", f"must be an integer >= 8, got {mm!r}")
        m_max = mm

    sweep = None
    if data.get("sweep") is not None:
        s = data["sweep"]
        _check_keys(s, _SWEEP_KEYS, "sweep.")
        for k in ("variable", "start", "stop", "steps"):
            if k not in s:
                raise ConfigValidationError(f"sweep.{k}", "missing")
        steps = s["steps"]
        if isinstance(steps, bool) or not isinstance(steps, int):
            raise ConfigValidationError("sweep.steps", f"must be an integer, got {steps!r}")
        sweep = SweepGrid(
            str(s["variable"]),
            _number(s["start"], "sweep.start"),
            _number(s["stop"], "sweep.stop"),
            steps,
            _models(s["models"], "sweep.models") if "models" in s else models,
        )
        if sweep.variable == "h" and sweep.start < 0:
            raise ConfigValidationError("sweep.start", "in-plane field magnitude must be >= 0")
        if sweep.variable == "b" and sweep.start < 0:
            raise ConfigValidationError("sweep.start", "b must be >= 0")

    return RunConfig(ion, a, b, fc, models, w, m_max, sweep)


def read_config(path) -> RunConfig:
    text = Path(path).read_text()
    try:
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        line = mark.line + 1 if mark else None
        col = mark.column + 1 if mark else None
        raise ConfigParseError(f"{path}: {exc.problem or exc}", line, col) from None
    except yaml.YAMLError as exc:
        raise ConfigParseError(f"{path}: {exc}") from None
    if data is not None and not isinstance(data, dict):
        raise ConfigParseError(f"{path}: top level must be a mapping")
    return config_from_mapping(data)


# --------------------------------------------------------------------------- models

class _Evaluator:
    """Lowest-four energies of one model as a function of (h signed, hz) at fixed params."""

    def __init__(self, model, cfg: RunConfig, p: ModelParams, phi_h: float, w_ref: float):
        self.model = model
        self.p = p
        self.phi_h = phi_h
        self.w_ref = w_ref
        if model == "rotor":
            m_max = cfg.m_max or choose_truncation(p)
            self.basis = RotorBasis.for_params(p, m_max)
        elif model == "tb":
            self.w = cfg.w if cfg.w is not None else w_ref

    def _field(self, h, hz):
        # negative h means the opposite in-plane direction
        if h < 0:
            return FieldConfig(-h, self.phi_h + math.pi, hz)
        return FieldConfig(h, self.phi_h, hz)

    def levels(self, h, hz) -> np.ndarray:
        f = self._field(h, hz)
        p = self.p
        if self.model == "full":
            return full_spectrum(p, f).values[:4]
        if self.model == "rotor":
            return rotor_spectrum(p, f, self.basis, check=False).values[:4]
        alpha = peierls_alpha(p.ion.two_J, hz, p.a)
        m = TbModel(self.w, alpha, f.h * p.J, f.phi_h)
        return eigvals(tb_hamiltonian(m)) - hz**2 / (2 * p.a)


def _observables(ev: _Evaluator, h: float, hz: float, base: np.ndarray):
    p = ev.p
    d1 = first_derivative_step(ev.w_ref, p.a)
    dh2 = HBAR_STEP2 * ev.w_ref / p.J
    dz2 = HZ_STEP2 * p.a
    e0 = base[0]
    quad = max(base[3] - base[0], 1e-300)
    degenerate = (base[1] - base[0]) < 1e-6 * quad
    g = lambda hh, zz: ev.levels(hh, zz)[0]  # noqa: E731

    # Kramers ground states take one-sided differences at the level crossing
    if h < dh2 and p.ion.half_integer:
        moment_plane = -(g(h + d1, hz) - e0) / d1
        e1, e2 = g(h + dh2, hz), g(h + 2 * dh2, hz)
        chi_plane = -(e2 - 2 * e1 + e0) / dh2**2
    else:
        moment_plane = -(g(h + d1, hz) - g(h - d1, hz)) / (2 * d1)
        chi_plane = -(g(h + dh2, hz) - 2 * e0 + g(h - dh2, hz)) / dh2**2

    if degenerate:
        moment_z = -(g(h, hz + d1) - e0) / d1
        z1, z2 = g(h, hz + dz2), g(h, hz + 2 * dz2)
        chi_axis = -(z2 - 2 * z1 + e0) / dz2**2
    else:
        moment_z = -(g(h, hz + d1) - g(h, hz - d1)) / (2 * d1)
        chi_axis = -(g(h, hz + dz2) - 2 * e0 + g(h, hz - dz2)) / dz2**2
    return moment_plane, moment_z, chi_plane, chi_axis


def zero_field_w(p: ModelParams, m_max: int | None = None) -> float:
    """Tunnelling amplitude extracted from the zero-field rotor quadruplet."""
    basis = RotorBasis.for_params(p, m_max) if m_max else None
    s = rotor_spectrum(p, FieldConfig(), basis)
    return extract_w(s, p.ion.half_integer)


def evaluate_point(cfg: RunConfig, model: str, p: ModelParams, f: FieldConfig,
                   grid_var: str = "", grid_value: float = float("nan"), w_ref: float | None = None) -> SweepRow:
    row = SweepRow(grid_var, grid_value, model)
    try:
        if w_ref is None:
            w_ref = cfg.w if cfg.w is not None else zero_field_w(p, cfg.m_max)
        ev = _Evaluator(model, cfg, p, f.phi_h, w_ref)
        base = ev.levels(f.h, f.hz)
        row.energies = [float(x) for x in base]
        row.moment_plane, row.moment_z, row.chi_plane, row.chi_axis = _observables(ev, f.h, f.hz, base)
    except (LargeSpinError, ArithmeticError, ValueError) as exc:
        row.energies = None
        row.moment_plane = row.moment_z = row.chi_plane = row.chi_axis = None
        row.error = f"{type(exc).__name__}: {exc}"
        log.warning("%s=%s model=%s failed: %s", grid_var, grid_value, model, row.error)
    return row


def run_sweep(cfg: RunConfig) -> list[SweepRow]:
    """Evaluate every grid point for every requested model, in grid order."""
    if cfg.sweep is None:
        raise ConfigValidationError("sweep", "missing sweep block")
    grid = cfg.sweep
    rows = []
    w_cache: dict[float, float | Exception] = {}
    for x in grid.values():
        x = float(x)
        p = cfg.params
        f = cfg.field
        try:
            if grid.variable == "b":
                p = ModelParams(cfg.ion, cfg.a, x)
            elif grid.variable == "h":
                f = replace(f, h=x)
            elif grid.variable == "phi_h":
                f = replace(f, phi_h=x)
            else:
                f = replace(f, hz=x)
        except LargeSpinError as exc:
            for model in grid.models:
                rows.append(SweepRow(grid.variable, x, model, error=str(exc)))
            continue
        w_ref = cfg.w
        if w_ref is None:
            if p.b not in w_cache:
                try:
                    w_cache[p.b] = zero_field_w(p, cfg.m_max)
                except LargeSpinError as exc:
                    w_cache[p.b] = exc
            w_ref = w_cache[p.b]
        for model in grid.models:
            if isinstance(w_ref, Exception):
                rows.append(SweepRow(grid.variable, x, model, error=f"w extraction failed: {w_ref}"))
                continue
            rows.append(evaluate_point(cfg, model, p, f, grid.variable, x, w_ref))
    return rows


# --------------------------------------------------------------------------- csv

def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow(r.cells())
    return buf.getvalue()


def write_csv(rows, path) -> None:
    Path(path).write_bytes(rows_to_csv(rows).encode("ascii"))


def read_csv(path) -> list[dict]:
    """Parse a sweep CSV back into dicts (numbers as floats, empty fields as None)."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        out = []
        for rec in reader:
            parsed = {}
            for k, v in rec.items():
                if k in ("grid_var", "model"):
                    parsed[k] = v
                else:
                    parsed[k] = float(v) if v != "" else None
            out.append(parsed)
        return out

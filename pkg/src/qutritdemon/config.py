"""Run configuration: flat key/value or JSON documents, validated strictly.

The flat format is one ``key = value`` pair per line with ``#`` comments.
Sweep axes are declared as ``sweep = <parameter> <start> <stop> <step>`` (and
``sweep2`` for a second axis); every other key mirrors a device parameter.
Unknown and duplicate keys are rejected with their line number.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .device import DeviceSpec, Reservoir, SwapCouplings, preset


class ConfigError(ValueError):
    """Malformed or physically invalid run configuration."""


#: quantities a sweep may request, in their canonical order
QUANTITIES = (
    "QdotL",
    "QdotR",
    "QdotA",
    "QdotB",
    "Qdot_s",
    "Qdot_d",
    "Qdot_c",
    "S_LL",
    "S_RR",
    "S_LR",
    "S_AA",
    "S_BB",
    "S_AB",
    "etaF",
    "etaH",
    "etaAB",
    "eta0",
    "TUR",
    "pearson",
    "classification",
    "warm",
    "margin2ndlaw",
    "sigma",
    "residual_system",
    "residual_demon",
)

DEFAULT_QUANTITIES = (
    "QdotL",
    "QdotR",
    "QdotA",
    "QdotB",
    "Qdot_c",
    "S_LL",
    "S_RR",
    "S_LR",
    "S_AB",
    "etaF",
    "etaH",
    "etaAB",
    "eta0",
    "TUR",
    "pearson",
    "classification",
    "margin2ndlaw",
)

#: parameters a sweep axis may bind
SWEEPABLE = (
    "T",
    "dTs",
    "dTd",
    "T0",
    "Gamma",
    "GammaA",
    "GammaB",
    "GammaL",
    "GammaR",
    "lam",
    "lam02",
    "lam01",
    "lam12",
    "omega_s",
    "omega_d",
    "z_r",
    "z_c",
)

_FLOAT_KEYS = SWEEPABLE + ("dTs_sign",)
_STR_KEYS = ("preset", "quantities", "out")
_INT_KEYS = ("workers",)
_AXIS_KEYS = ("sweep", "sweep2")


@dataclass(frozen=True)
class SweepAxis:
    parameter: str
    start: float
    stop: float
    step: float

    def values(self) -> np.ndarray:
        n = int(round((self.stop - self.start) / self.step)) + 1
        grid = self.start + self.step * np.arange(n)
        return grid[grid <= self.stop + 1e-12 * max(1.0, abs(self.stop))]


@dataclass(frozen=True)
class Variant:
    """One member of a figure family: a label plus parameter overrides."""

    label: str
    overrides: tuple[tuple[str, float], ...] = ()


@dataclass(frozen=True)
class RunConfig:
    preset: str = "S02"
    T: float = 4.0
    dTs: float = 0.0
    dTd: float = 0.0
    T0: float | None = None
    Gamma: float = 0.01
    GammaA: float | None = None
    GammaB: float | None = None
    GammaL: float | None = None
    GammaR: float | None = None
    lam: float = 0.01
    lam02: float | None = None
    lam01: float | None = None
    lam12: float | None = None
    omega_s: float = 2.0
    omega_d: float | None = None
    z_r: float | None = None
    z_c: float | None = None
    dTs_sign: float = 1.0
    axes: tuple[SweepAxis, ...] = ()
    quantities: tuple[str, ...] = DEFAULT_QUANTITIES
    out: str | None = None
    workers: int = 1
    variants: tuple[Variant, ...] = ()


def device_from_config(config: RunConfig, overrides: dict | None = None) -> DeviceSpec:
    """Materialize the device for one evaluation point.

    ``overrides`` binds sweep-axis and variant values on top of the config;
    validation errors of the resulting point propagate as ValueError.
    """
    values = {key: getattr(config, key) for key in _FLOAT_KEYS}
    tag = config.preset
    if overrides:
        for key, val in overrides.items():
            if key == "preset":
                tag = val
            elif key in values:
                values[key] = val
            else:
                raise ConfigError(f"unknown override parameter {key!r}")

    spec = preset(
        tag,
        T=values["T"],
        dTs=values["dTs_sign"] * values["dTs"],
        dTd=values["dTd"],
        gamma=values["Gamma"],
        lam=values["lam"],
        omega_s=values["omega_s"],
        omega_d=values["omega_d"],
        z_r=values["z_r"],
        z_c=values["z_c"],
        t_ref=values["T0"],
    )

    explicit = {k: values[k] for k in ("lam02", "lam01", "lam12") if values[k] is not None}
    if explicit:
        if values["z_c"] is not None:
            raise ConfigError("explicit lam02/lam01/lam12 cannot be combined with z_c")
        swaps = SwapCouplings(
            lam02=explicit.get("lam02", 0.0),
            lam01=explicit.get("lam01", 0.0),
            lam12=explicit.get("lam12", 0.0),
        )
        spec = replace(spec, swaps=swaps)

    gamma_over = {
        name: values[f"Gamma{name}"]
        for name in ("A", "B", "L", "R")
        if values[f"Gamma{name}"] is not None
    }
    if gamma_over:
        reservoirs = tuple(
            replace(r, gamma=gamma_over.get(r.name, r.gamma)) for r in spec.reservoirs
        )
        spec = replace(spec, reservoirs=reservoirs)
    return spec


def _parse_axis(raw: str, where: str) -> SweepAxis:
    parts = raw.split()
    if len(parts) != 4:
        raise ConfigError(f"{where}: sweep needs '<parameter> <start> <stop> <step>', got {raw!r}")
    name = parts[0]
    if name not in SWEEPABLE:
        raise ConfigError(f"{where}: {name!r} is not a sweepable parameter")
    try:
        start, stop, step = (float(p) for p in parts[1:])
    except ValueError as exc:
        raise ConfigError(f"{where}: non-numeric axis bound in {raw!r}") from exc
    if step <= 0:
        raise ConfigError(f"{where}: step must be > 0, got {step:g}")
    if start >= stop:
        raise ConfigError(f"{where}: start must be below stop, got {start:g} >= {stop:g}")
    return SweepAxis(name, start, stop, step)


def _parse_quantities(raw: str, where: str) -> tuple[str, ...]:
    names = tuple(q.strip() for q in raw.replace(",", " ").split())
    for q in names:
        if q not in QUANTITIES:
            raise ConfigError(f"{where}: unknown quantity {q!r}; choose from {', '.join(QUANTITIES)}")
    if not names:
        raise ConfigError(f"{where}: empty quantity list")
    return names


def _coerce(key: str, raw: str, where: str):
    if key in _STR_KEYS:
        return raw
    if key in _INT_KEYS:
        try:
            return int(raw)
        except ValueError as exc:
            raise ConfigError(f"{where}: {key} must be an integer, got {raw!r}") from exc
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{where}: {key} must be a number, got {raw!r}") from exc


def _assemble(pairs: list[tuple[str, object, str]], source: str) -> RunConfig:
    seen = {}
    fields: dict = {}
    axes: dict[str, SweepAxis] = {}
    for key, value, where in pairs:
        if key in seen:
            raise ConfigError(f"{where}: duplicate key {key!r} (first set at {seen[key]})")
        seen[key] = where
        if key in _AXIS_KEYS:
            axes[key] = value
        elif key == "quantities":
            fields["quantities"] = value
        elif key in _FLOAT_KEYS or key in _STR_KEYS or key in _INT_KEYS:
            fields[key] = value
        else:
            raise ConfigError(f"{where}: unknown key {key!r}")
    if "sweep2" in axes and "sweep" not in axes:
        raise ConfigError(f"{source}: sweep2 given without sweep")
    axis_tuple = tuple(axes[k] for k in ("sweep", "sweep2") if k in axes)
    config = RunConfig(axes=axis_tuple, **fields)
    try:
        device_from_config(config)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{source}: invalid base configuration: {exc}") from exc
    return config


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    """Parse a flat key/value or JSON run configuration."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_json(text, source)
    pairs: list[tuple[str, object, str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in body.split("=", 1))
        where = f"{source}:{lineno}"
        if key in _AXIS_KEYS:
            pairs.append((key, _parse_axis(raw, where), where))
        elif key == "quantities":
            pairs.append((key, _parse_quantities(raw, where), where))
        else:
            pairs.append((key, _coerce(key, raw, where), where))
    return _assemble(pairs, source)


def _parse_json(text: str, source: str) -> RunConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{source}: top-level JSON value must be an object")
    pairs: list[tuple[str, object, str]] = []
    for key, value in doc.items():
        where = f"{source}:{key}"
        if key in _AXIS_KEYS:
            if not isinstance(value, (list, tuple)) or len(value) != 4:
                raise ConfigError(f"{where}: sweep must be [parameter, start, stop, step]")
            pairs.append((key, _parse_axis(" ".join(str(v) for v in value), where), where))
        elif key == "quantities":
            if isinstance(value, str):
                pairs.append((key, _parse_quantities(value, where), where))
            elif isinstance(value, list):
                pairs.append((key, _parse_quantities(" ".join(value), where), where))
            else:
                raise ConfigError(f"{where}: quantities must be a list or string")
        elif key in _STR_KEYS:
            if not isinstance(value, str):
                raise ConfigError(f"{where}: {key} must be a string")
            pairs.append((key, value, where))
        elif key in _INT_KEYS:
            if not isinstance(value, int):
                raise ConfigError(f"{where}: {key} must be an integer")
            pairs.append((key, value, where))
        elif key in _FLOAT_KEYS:
            if not isinstance(value, (int, float)):
                raise ConfigError(f"{where}: {key} must be a number")
            pairs.append((key, float(value), where))
        else:
            raise ConfigError(f"{where}: unknown key {key!r}")
    return _assemble(pairs, source)

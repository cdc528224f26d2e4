"""Point evaluation, 1D/2D sweeps, CSV emission and worker scheduling."""

from __future__ import annotations

import csv
import io
import itertools
import math
import multiprocessing
from dataclasses import asdict

import numpy as np

from . import fcs
from .config import ConfigError, RunConfig, device_from_config
from .device import RESERVOIRS
from .liouville import counting_channels, liouvillian
from .thermo import RESERVOIR_ORDER, TransportReport, transport_report

HBAR_SI = 1.054571817e-34  # J s
Q0_WATT = HBAR_SI * 1e18  # hbar GHz^2
S0_WATT2S = HBAR_SI**2 * 1e27  # hbar^2 GHz^3


def _quantity(report: TransportReport, name: str):
    q = report.heat_currents
    eff = report.efficiency
    table = {
        "QdotL": q["L"],
        "QdotR": q["R"],
        "QdotA": q["A"],
        "QdotB": q["B"],
        "Qdot_s": report.partition.q_system,
        "Qdot_d": report.partition.q_demon,
        "Qdot_c": report.partition.q_internal,
        "S_LL": report.noise_element("L", "L"),
        "S_RR": report.noise_element("R", "R"),
        "S_LR": report.noise_element("L", "R"),
        "S_AA": report.noise_element("A", "A"),
        "S_BB": report.noise_element("B", "B"),
        "S_AB": report.noise_element("A", "B"),
        "etaF": eff.eta_f,
        "etaH": eff.eta_h,
        "etaAB": eff.eta_ab,
        "eta0": eff.eta0_bound,
        "TUR": report.tur,
        "pearson": report.pearson,
        "classification": report.classification.tag,
        "warm": report.classification.warm_demon,
        "margin2ndlaw": report.margin_second_law,
        "sigma": eff.sigma_total,
        "residual_system": report.partition.residual_system,
        "residual_demon": report.partition.residual_demon,
    }
    return table[name]


def evaluate_point(config: RunConfig, overrides: dict | None = None) -> TransportReport:
    spec = device_from_config(config, overrides)
    return transport_report(spec)


def run_point(config: RunConfig) -> dict:
    """Full JSON-able transport report of a single configuration.

    Heat currents come out in units of Q0 = hbar GHz^2 and noise in units of
    S0 = hbar^2 GHz^3 (the natural-unit values themselves); the SI conversion
    factors ride along as metadata.
    """
    if config.axes:
        raise ConfigError("point evaluation does not accept sweep axes")
    spec = device_from_config(config)
    report = transport_report(spec)
    gen = liouvillian(spec)
    gap = fcs.spectral_gap(gen)
    channels = counting_channels(spec)
    steady = report.moments.steady
    return {
        "device": {
            "preset": spec.preset,
            "temperatures": {r.name: r.temperature for r in spec.reservoirs},
            "couplings": {r.name: r.gamma for r in spec.reservoirs},
            "filter_centers": {r.name: r.filter_center for r in spec.reservoirs},
            "filter_width": spec.reservoir("A").filter_width,
            "qutrit1_levels": spec.qutrit1.energies.tolist(),
            "qutrit2_levels": spec.qutrit2.energies.tolist(),
            "effective_swaps": list(spec.effective_swaps()),
            "reference_temperature": spec.t_ref,
        },
        "channels": [{"reservoir": c.reservoir, "frequency": c.frequency} for c in channels],
        "particle_currents": {
            f"{c.reservoir}@{c.frequency:g}": float(i)
            for c, i in zip(channels, report.moments.currents)
        },
        "heat_currents": report.heat_currents,
        "heat_noise": {
            a: {b: report.noise_element(a, b) for b in RESERVOIR_ORDER} for a in RESERVOIR_ORDER
        },
        "partition": asdict(report.partition),
        "entropy": {
            "total": report.efficiency.sigma_total,
            "system": report.efficiency.sigma_system,
            "demon": report.efficiency.sigma_demon,
        },
        "efficiencies": {
            "etaF": report.efficiency.eta_f,
            "etaH": report.efficiency.eta_h,
            "etaAB": report.efficiency.eta_ab,
            "eta0": report.efficiency.eta0_bound,
        },
        "TUR": report.tur,
        "pearson": report.pearson,
        "classification": {
            "tag": report.classification.tag,
            "warm_demon": report.classification.warm_demon,
        },
        "margin2ndlaw": report.margin_second_law,
        "diagnostics": {
            "steady_residual_max": steady.residual_max,
            "trace_error": steady.trace_error,
            "hermiticity_error": steady.hermiticity_error,
            "min_eigenvalue": steady.min_eigenvalue,
            "upsilon_residual_max": report.moments.upsilon_residual_max,
            "spectral_gap": gap,
            "sum_heat_residual": report.sum_heat_residual,
            "sum_noise_residual": report.sum_noise_residual,
        },
        "units": {
            "Qdot": "Q0 = hbar GHz^2",
            "S": "S0 = hbar^2 GHz^3",
            "Q0_in_W": Q0_WATT,
            "S0_in_W2s": S0_WATT2S,
        },
    }


def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)  # shortest round-trip decimal form
    return str(value)


def _grid(config: RunConfig) -> tuple[list[str], list[tuple]]:
    """Lexicographic evaluation grid: (axis column names, point tuples)."""
    columns: list[str] = []
    iterables: list[list] = []
    if config.variants:
        columns.append("variant")
        iterables.append(list(range(len(config.variants))))
    for axis in config.axes:
        columns.append(axis.parameter)
        iterables.append([float(v) for v in axis.values()])
    points = list(itertools.product(*iterables)) if iterables else [()]
    return columns, points


def _point_task(args):
    config, columns, point = args
    overrides: dict = {}
    labels = []
    for name, value in zip(columns, point):
        if name == "variant":
            variant = config.variants[int(value)]
            labels.append(variant.label)
            overrides.update(dict(variant.overrides))
        else:
            labels.append(value)
            overrides[name] = value
    try:
        report = evaluate_point(config, overrides)
        values = [_quantity(report, q) for q in config.quantities]
        return labels, values, None
    except Exception as exc:  # noqa: BLE001 - per-point isolation by design
        return labels, None, f"{type(exc).__name__}: {exc}"


def run_sweep(config: RunConfig, out_path: str, workers: int | None = None) -> dict:
    """Evaluate the sweep grid and write one CSV row per point.

    Points are computed independently (optionally across a worker pool) and
    always written in lexicographic axis order, so the output is byte-for-byte
    independent of the worker count.  Failing points leave their quantity
    cells empty and are recorded in ``<out>.errors.log``.
    """
    if not config.axes and not config.variants:
        raise ConfigError("sweep needs at least one sweep axis (or a variant family)")
    columns, points = _grid(config)
    workers = workers if workers is not None else config.workers
    tasks = [(config, columns, p) for p in points]
    if workers > 1 and len(tasks) > 1:
        with multiprocessing.Pool(workers) as pool:
            results = pool.map(_point_task, tasks, chunksize=max(1, len(tasks) // (8 * workers)))
    else:
        results = [_point_task(t) for t in tasks]

    errors = []
    buffer = io.StringIO()
    buffer.write("# qutritdemon sweep output\n")
    buffer.write(f"# units: Qdot columns in Q0 = hbar GHz^2 ({Q0_WATT:.6e} W), ")
    buffer.write(f"S columns in S0 = hbar^2 GHz^3 ({S0_WATT2S:.6e} W^2 s)\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns + list(config.quantities))
    for labels, values, error in results:
        if error is None:
            writer.writerow([_format_cell(v) for v in labels + values])
        else:
            writer.writerow([_format_cell(v) for v in labels] + [""] * len(config.quantities))
            errors.append((labels, error))

    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buffer.getvalue())
    if errors:
        with open(str(out_path) + ".errors.log", "w", encoding="utf-8") as fh:
            for labels, error in errors:
                fh.write(f"point {labels}: {error}\n")
    return {
        "points": len(points),
        "failures": len(errors),
        "columns": columns + list(config.quantities),
        "out": str(out_path),
    }


def read_csv(path: str) -> tuple[list[str], list[list[str]]]:
    """Read back a sweep CSV, skipping metadata comment lines."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = [row for row in csv.reader(line for line in fh if not line.startswith("#"))]
    return rows[0], rows[1:]

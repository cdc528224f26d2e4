"""Named data-grid presets for the standard result figures, plus rendering.

Each preset binds the device parameters of one published-style figure and a
documented grid (captions fix the physics, the grid steps are our choice).
``render_figure`` draws the companion PNG next to the CSV.
"""

from __future__ import annotations

import math

import numpy as np

from .config import RunConfig, SweepAxis, Variant

FIGURE_IDS = ("fig3a", "fig3b", "fig3cd", "fig4map", "fig4cuts", "fig5", "fig6", "fig8")

_BASE = dict(preset="S02", T=4.0, dTd=4.0, Gamma=0.01, lam=0.01, omega_s=2.0, omega_d=4.0)


def figure_preset(fig_id: str) -> RunConfig:
    """Fully bound run configuration reproducing one figure's data grid."""
    if fig_id == "fig3a":
        # noise-switch map: cooling power over (dTd, lam02) at fixed lam12
        return RunConfig(
            preset="S02",
            T=4.0,
            dTs=1.0,
            Gamma=0.01,
            lam12=0.01,
            lam02=0.0,
            axes=(SweepAxis("dTd", 0.0, 7.0, 0.1), SweepAxis("lam02", 0.0, 0.03, 0.0005)),
            quantities=("QdotR", "Qdot_c", "margin2ndlaw"),
        )
    if fig_id == "fig3b":
        # demon-side map of the same scan, normalized by kappa when rendered
        return RunConfig(
            preset="S02",
            T=4.0,
            dTs=1.0,
            Gamma=0.01,
            lam12=0.01,
            lam02=0.0,
            axes=(SweepAxis("dTd", 0.0, 7.0, 0.1), SweepAxis("lam02", 0.0, 0.03, 0.0005)),
            quantities=("QdotB", "S_BB"),
        )
    if fig_id == "fig3cd":
        # cuts of the maps for a family of lam02 values
        return RunConfig(
            preset="S02",
            T=4.0,
            dTs=1.0,
            Gamma=0.01,
            lam12=0.01,
            lam02=0.0,
            axes=(SweepAxis("dTd", 0.0, 7.0, 0.05),),
            quantities=("QdotR", "QdotB", "Qdot_c", "S_RR", "S_BB"),
            variants=tuple(
                Variant(f"lam02={v:g}", (("lam02", v),)) for v in (0.0, 0.001, 0.003, 0.01)
            ),
        )
    if fig_id == "fig4map":
        # ideal operation maps over both temperature biases
        return RunConfig(
            **_BASE,
            dTs=0.0,
            axes=(SweepAxis("dTs", 0.0, 8.0, 0.1), SweepAxis("dTd", 0.0, 8.0, 0.1)),
            quantities=("QdotR", "etaF", "S_RR", "TUR"),
        )
    if fig_id == "fig4cuts":
        return RunConfig(
            **_BASE,
            dTs=0.0,
            axes=(SweepAxis("dTs", 0.0, 8.0, 0.05),),
            quantities=("QdotR", "QdotB", "etaF", "etaH", "S_RR", "S_BB", "TUR"),
        )
    if fig_id == "fig5":
        # broadened swap resonance z_c family
        return RunConfig(
            **_BASE,
            dTs=0.0,
            axes=(SweepAxis("dTs", 0.0, 8.0, 0.05),),
            quantities=("QdotR", "Qdot_c", "etaF", "etaH", "S_RR", "TUR", "pearson"),
            variants=(
                Variant("z_c=0"),
                Variant("z_c=0.15", (("z_c", 0.15),)),
                Variant("z_c=0.3", (("z_c", 0.3),)),
            ),
        )
    if fig_id == "fig6":
        # leaky-filter Pearson and operation-region maps
        return RunConfig(
            **_BASE,
            dTs=0.0,
            axes=(SweepAxis("dTs", 0.0, 8.0, 0.2), SweepAxis("dTd", 0.0, 8.0, 0.2)),
            quantities=("pearson", "etaAB", "eta0", "QdotR", "classification"),
            variants=(
                Variant("z_r=0.01", (("z_r", 0.01),)),
                Variant("z_r=0.15", (("z_r", 0.15),)),
                Variant("z_r=0.3", (("z_r", 0.3),)),
            ),
        )
    if fig_id == "fig8":
        # three-configuration comparison; the S01 member runs at dTs = -dTs*
        return RunConfig(
            preset="S02",
            T=4.0,
            dTd=4.0,
            Gamma=0.01,
            lam=0.01,
            omega_s=2.0,
            axes=(SweepAxis("dTs", 0.0, 8.0, 0.05),),
            quantities=("QdotR", "QdotL", "Qdot_c", "etaF", "etaH", "S_RR", "S_LL", "TUR"),
            variants=(
                Variant("S02", (("preset", "S02"), ("omega_d", 4.0))),
                Variant("S01", (("preset", "S01"), ("omega_d", 6.0), ("dTs_sign", -1.0))),
                Variant("A02", (("preset", "A02"), ("omega_d", 4.0))),
            ),
        )
    raise KeyError(f"unknown figure id {fig_id!r}; choose from {', '.join(FIGURE_IDS)}")


# ---------------------------------------------------------------------------
# rendering


def _to_float(cell: str) -> float:
    return float(cell) if cell not in ("", None) else math.nan


def _column(header: list[str], rows: list[list[str]], name: str) -> np.ndarray:
    i = header.index(name)
    return np.array([_to_float(r[i]) for r in rows])


def _split_variants(header, rows):
    if header and header[0] == "variant":
        labels = []
        for r in rows:
            if r[0] not in labels:
                labels.append(r[0])
        return [(lab, [r for r in rows if r[0] == lab]) for lab in labels]
    return [(None, rows)]


def _map_panel(ax, x, y, z, title, fig):
    import matplotlib.pyplot as plt  # noqa: F401

    xs = np.unique(x)
    ys = np.unique(y)
    grid = np.full((len(ys), len(xs)), np.nan)
    ix = np.searchsorted(xs, x)
    iy = np.searchsorted(ys, y)
    grid[iy, ix] = z
    pcm = ax.pcolormesh(xs, ys, grid, shading="auto")
    fig.colorbar(pcm, ax=ax)
    ax.set_title(title, fontsize=9)


def render_figure(fig_id: str, header: list[str], rows: list[list[str]], out_png: str) -> None:
    """Draw the companion figure of a preset's CSV to ``out_png``."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    config = figure_preset(fig_id)
    axis_names = [a.parameter for a in config.axes]
    two_d = len(axis_names) == 2
    variants = _split_variants(header, rows)

    if two_d and fig_id != "fig6":
        quantities = [q for q in config.quantities if q not in ("classification",)]
        n = len(quantities)
        fig, axes = plt.subplots(1, n, figsize=(4.2 * n, 3.4), constrained_layout=True)
        axes = np.atleast_1d(axes)
        for ax, q in zip(axes, quantities):
            x = _column(header, rows, axis_names[0])
            y = _column(header, rows, axis_names[1])
            z = _column(header, rows, q)
            if q == "TUR":
                z = 2.0 / z
                q = "2/TUR"
            _map_panel(ax, x, y, z, q, fig)
            ax.set_xlabel(axis_names[0])
            ax.set_ylabel(axis_names[1])
    elif fig_id == "fig6":
        fig, axes = plt.subplots(1, len(variants), figsize=(4.6 * len(variants), 3.6), constrained_layout=True)
        axes = np.atleast_1d(axes)
        for ax, (label, vrows) in zip(axes, variants):
            x = _column(header, vrows, axis_names[0])
            y = _column(header, vrows, axis_names[1])
            z = _column(header, vrows, "pearson")
            _map_panel(ax, x, y, z, f"pearson, {label}", fig)
            ax.set_xlabel(axis_names[0])
            ax.set_ylabel(axis_names[1])
    else:
        quantities = [q for q in config.quantities if q not in ("classification", "warm")]
        n = len(quantities)
        ncols = min(4, n)
        nrows = (n + ncols - 1) // ncols
        fig, axes = plt.subplots(nrows, ncols, figsize=(4.0 * ncols, 3.0 * nrows), constrained_layout=True)
        axes = np.atleast_1d(axes).ravel()
        for ax, q in zip(axes, quantities):
            for label, vrows in variants:
                x = _column(header, vrows, axis_names[0])
                y = _column(header, vrows, q)
                if q == "TUR":
                    y = 2.0 / y
                ax.plot(x, y, lw=1.2, label=label)
            ax.set_xlabel(axis_names[0])
            ax.set_ylabel("2/TUR" if q == "TUR" else q)
            if variants[0][0] is not None:
                ax.legend(fontsize=7)
        for ax in axes[n:]:
            ax.set_visible(False)
    fig.suptitle(fig_id)
    fig.savefig(out_png, dpi=160)
    plt.close(fig)

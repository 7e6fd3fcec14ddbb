"""Data behind each figure, as CSV-ready panels."""

import csv
import io

import numpy as np

from entkit.geometric import GmeConfig, e_measures, lower_convex_envelope
from entkit.relent import (
    ErConfig,
    er_numeric,
    monotone_f,
    segment_epsilon,
    segment_f,
)
from entkit.state_zoo import make_dicke_mixture, make_w_superposition, two_component

FIGURES = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7")

PANELS = {
    "fig2": [(3, 0, 1), (3, 0, 2), (3, 1, 2)],
    "fig3": [(4, 0, 3)],
    "fig4": [(4, 0, 1), (4, 0, 2), (4, 1, 2), (4, 1, 3)],
}

ZOOM_RANGE = (0.0, 0.01)


def format_value(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.7g}"


def to_csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def numeric_indices(grid, count):
    """Evenly spread grid indices at which the expensive numerics run."""
    if count <= 0:
        return set()
    if count >= grid:
        return set(range(grid))
    return set(int(round(i)) for i in np.linspace(0, grid - 1, count))


def _envelope_on(f, s, envelope_grid, extra=None):
    xs = np.linspace(0.0, 1.0, envelope_grid)
    xs = np.union1d(xs, s)
    if extra is not None:
        xs = np.union1d(xs, extra)
    vals = np.array([f(x) for x in xs])
    env = lower_convex_envelope(xs, vals)
    return np.interp(s, xs, env), np.interp(s, xs, vals)


def _mixture_panel(n, k1, k2, s, envelope_grid, numeric_at, er_cfg, extra=None):
    co_f, f = _envelope_on(segment_f(n, k1, k2), s, envelope_grid, extra)
    rows = []
    for i, si in enumerate(s):
        er = None
        if i in numeric_at:
            er = er_numeric(make_dicke_mixture(two_component(n, k1, k2, si)), er_cfg).value
        rows.append((si, f[i], co_f[i], er))
    return ["s", "f", "co_f", "er_numeric"], rows


def figure_panels(
    fig,
    grid=101,
    envelope_grid=1001,
    numeric=True,
    numeric_points=11,
    er_cfg=ErConfig(),
    gme_cfg=GmeConfig(),
):
    """Return ``{panel_name: (header, rows)}`` for one figure id."""
    if fig not in FIGURES:
        raise ValueError(f"unknown figure {fig!r}; expected one of {FIGURES}")
    if grid < 2:
        raise ValueError("grid must have at least two points")
    s = np.linspace(0.0, 1.0, grid)
    numeric_at = numeric_indices(grid, numeric_points) if numeric else set()
    panels = {}

    if fig == "fig1":
        rows = []
        for i, si in enumerate(s):
            psi = make_w_superposition(si)
            er = er_numeric(psi, er_cfg).value if i in numeric_at else None
            rows.append((si, e_measures(psi, gme_cfg).e_log2, er))
        panels["fig1"] = (["s", "e_log2", "er_numeric"], rows)

    elif fig in PANELS:
        for n, k1, k2 in PANELS[fig]:
            name = f"{fig}_rho_{n}_{k1}_{k2}"
            panels[name] = _mixture_panel(n, k1, k2, s, envelope_grid, numeric_at, er_cfg)
        if fig == "fig3":
            zoom = np.linspace(*ZOOM_RANGE, grid)
            dense = np.linspace(*ZOOM_RANGE, envelope_grid)
            panels["fig3_rho_4_0_3_zoom"] = _mixture_panel(4, 0, 3, zoom, envelope_grid, numeric_at, er_cfg, dense)

    elif fig == "fig5":
        co_f, f = _envelope_on(segment_f(7, 2, 5), s, envelope_grid)
        panels["fig5_rho_7_2_5"] = (["s", "f", "co_f"], list(zip(s, f, co_f)))

    elif fig == "fig6":
        eps = segment_epsilon(11, 2, 6)
        f = segment_f(11, 2, 6)
        panels["fig6_rho_11_2_6"] = (["s", "epsilon", "f"], [(si, eps(si), f(si)) for si in s])

    elif fig == "fig7":
        panels["fig7"] = (["x", "f"], [(x, monotone_f(4, x)) for x in s])

    return panels

"""Invariant suites behind ``entkit verify``."""

from dataclasses import dataclass
from math import log2

import numpy as np

from entkit.geometric import lambda_dicke, lambda_det
from entkit.relent import (
    ErConfig,
    co_epsilon_at,
    co_f_at,
    er_numeric,
    monotone_f,
    plenio_vedral_check,
)
from entkit.state_zoo import (
    family_state,
    make_closest_separable,
    make_dicke,
    make_dicke_mixture,
    make_ghz,
    two_component,
)
from entkit.tensor_core import relative_entropy

SUITES = ("saturation", "sandwich", "monotone", "plenio_vedral")


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


def saturation_cases(max_n=6):
    """``(label, rho, sigma, target)`` for every closest-separable family."""
    out = []
    for n in range(1, max_n + 1):
        for k in range(n + 1):
            target = -2 * log2(lambda_dicke(n, k))
            out.append((f"dicke({n},{k})", make_dicke(n, k), make_closest_separable("dicke", n, k), target))
    for n in (2, 3):
        out.append((f"det({n})", family_state("det", n), make_closest_separable("det", n), -2 * log2(lambda_det(n))))
    out.append(("ghz(3)", make_ghz(3), make_closest_separable("ghz"), 1.0))
    for fam in ("w_continuous", "w_discrete"):
        out.append((fam, family_state(fam), make_closest_separable(fam), log2(9 / 4)))
    return out


def run_saturation(tol=1e-9):
    checks = []
    for label, psi, sigma, target in saturation_cases():
        gap = abs(relative_entropy(psi.density(), sigma) - target)
        checks.append(Check(label, gap <= tol, f"|S - target| = {gap:.2e}"))
    return checks


SANDWICH_FAMILIES = [(3, 0, 1), (3, 0, 2), (3, 1, 2), (4, 0, 1), (4, 0, 2), (4, 0, 3), (4, 1, 2), (4, 1, 3)]


def run_sandwich(er_cfg=ErConfig(starts=2), points=(0.25, 0.5, 0.75), tol=1e-3):
    checks = []
    for n, k1, k2 in SANDWICH_FAMILIES:
        for s in points:
            er = er_numeric(make_dicke_mixture(two_component(n, k1, k2, s)), er_cfg).value
            lo = float(co_epsilon_at(n, k1, k2, s))
            hi = float(co_f_at(n, k1, k2, s))
            ok = lo <= er + tol and er <= hi + tol
            checks.append(Check(f"rho_{n};{k1},{k2}({s})", ok, f"coE={lo:.6f} er={er:.6f} coF={hi:.6f}"))
    return checks


def run_monotone(points=1001):
    x = np.linspace(0.0, 1.0, points)
    f4 = monotone_f(4, x)
    f2 = monotone_f(2, x)
    return [
        Check("min f(4,x) < 0", f4.min() < 0, f"min = {f4.min():.6f} at x = {x[f4.argmin()]:.4f}"),
        Check("min f(2,x) >= 0", f2.min() >= -1e-12, f"min = {f2.min():.3e}"),
    ]


def run_plenio_vedral(max_n=6, tol=1e-4):
    checks = []
    for n in range(2, max_n + 1):
        for k in range(n + 1):
            lhs, rhs = plenio_vedral_check(make_dicke(n, k))
            gap = abs(lhs - rhs)
            checks.append(Check(f"dicke({n},{k})", gap <= tol, f"lhs={lhs:.6f} rhs={rhs:.6f}"))
    lhs, rhs = plenio_vedral_check(make_ghz(3), er_cfg=ErConfig(starts=2))
    checks.append(Check("ghz(3)", abs(lhs - rhs) <= tol, f"lhs={lhs:.6f} rhs={rhs:.6f}"))
    return checks


def run_suite(name, er_cfg=None):
    if name == "saturation":
        return run_saturation()
    if name == "sandwich":
        return run_sandwich(er_cfg) if er_cfg is not None else run_sandwich()
    if name == "monotone":
        return run_monotone()
    if name == "plenio_vedral":
        return run_plenio_vedral()
    raise ValueError(f"unknown suite {name!r}; expected one of {SUITES}")

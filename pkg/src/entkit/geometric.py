"""Entanglement eigenvalue, geometric measures and segment convexification."""

from dataclasses import dataclass, field
from math import comb, factorial, prod

import numpy as np

from entkit.tensor_core import ProductState, PureState

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class GmeConfig:
    starts: int = 32
    max_sweeps: int = 500
    tol: float = 1e-12
    seed: int = 0

    def __post_init__(self):
        if self.starts < 1:
            raise ValueError("need at least one start")
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")


@dataclass
class GmeResult:
    """Best product-state overlap found by the alternating solver.

    ``trace`` holds the per-sweep overlaps of the winning start.
    """

    lambda_max: float
    closest: ProductState
    e_sin2: float
    e_log2: float
    converged: bool
    sweeps_used: int
    trace: list = field(default_factory=list, repr=False)


# closed forms

def lambda_dicke(n, k):
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in [0, {n}]")
    return lambda_generalized(n, (k, n - k))


def lambda_generalized(n, counts):
    counts = [int(c) for c in counts]
    if any(c < 0 for c in counts) or sum(counts) != n:
        raise ValueError(f"level counts {counts} do not sum to n={n}")
    multinomial = factorial(n) / prod(factorial(c) for c in counts)
    # 0**0 == 1 takes care of empty levels
    return float(np.sqrt(multinomial) * prod((c / n) ** (c / 2) for c in counts))


def lambda_det(n):
    if n < 2:
        raise ValueError("determinant states need n >= 2")
    return 1.0 / np.sqrt(factorial(n))


def lambda_det_general(d, p):
    if d < 2 or p < 1:
        raise ValueError("need d >= 2 and p >= 1")
    return 1.0 / np.sqrt(factorial(d**p))


def lambda_max_closed_form(family, *params):
    """Entanglement eigenvalue of a named family.

    ``family`` is ``dicke`` (``n, k``), ``generalized`` (``n, counts``),
    ``det`` (``n``) or ``det_general`` (``d, p``).
    """
    table = {
        "dicke": lambda_dicke,
        "generalized": lambda_generalized,
        "det": lambda_det,
        "det_general": lambda_det_general,
    }
    try:
        fn = table[family.lower()]
    except KeyError:
        raise ValueError(f"no closed form for family {family!r}") from None
    return fn(*params)


# alternating solver

def _kron_all(vecs):
    out = np.ones(1, dtype=complex)
    for v in vecs:
        out = np.kron(out, v)
    return out


def _party_contraction(tensor, locals_, i):
    """Contract ``tensor`` with conj(locals) on every party except ``i``."""
    n = tensor.ndim
    moved = np.moveaxis(tensor, i, 0).reshape(tensor.shape[i], -1)
    others = [locals_[j].conj() for j in range(n) if j != i]
    return moved @ _kron_all(others)


def update_sweep(tensor, locals_):
    """One pass of local updates; returns the new locals and the overlap."""
    locals_ = list(locals_)
    overlap = 0.0
    for i in range(tensor.ndim):
        v = _party_contraction(tensor, locals_, i)
        overlap = np.linalg.norm(v)
        if overlap == 0.0:
            # orthogonal start; any direction is as good as another
            v = np.zeros(tensor.shape[i], dtype=complex)
            v[0] = 1.0
        else:
            v = v / overlap
        locals_[i] = v
    return locals_, float(overlap)


def overlap(tensor, locals_):
    return float(abs(np.vdot(_kron_all(locals_), tensor.reshape(-1))))


def _initial_locals(psi, start, rng):
    dims = psi.structure.dims
    if start == 0:
        j = int(np.argmax(np.abs(psi.amplitudes)))
        levels = np.unravel_index(j, dims)
        out = []
        for d, lv in zip(dims, levels):
            c = np.zeros(d, dtype=complex)
            c[lv] = 1.0
            out.append(c)
        return out
    if start == 1:
        return [np.full(d, 1 / np.sqrt(d), dtype=complex) for d in dims]
    out = []
    for d in dims:
        c = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        out.append(c / np.linalg.norm(c))
    return out


def _run_start(tensor, locals_, cfg):
    lam = overlap(tensor, locals_)
    trace = [lam]
    converged = False
    sweeps = 0
    for sweeps in range(1, cfg.max_sweeps + 1):
        locals_, new = update_sweep(tensor, locals_)
        trace.append(new)
        if abs(new - lam) < cfg.tol:
            lam = new
            converged = True
            break
        lam = new
    return lam, locals_, converged, sweeps, trace


def lambda_max_numeric(psi, cfg=GmeConfig()):
    """Maximal product-state overlap by multi-start alternating updates.

    Start 0 is the largest-amplitude basis state, start 1 the uniform
    product state, the rest are random complex product states drawn from a
    per-start stream of ``cfg.seed``.
    """
    tensor = psi.tensor
    best = None
    for start in range(cfg.starts):
        rng = np.random.default_rng([cfg.seed, start])
        res = _run_start(tensor, _initial_locals(psi, start, rng), cfg)
        if best is None or res[0] > best[0] + 1e-15:
            best = res
    lam, locals_, converged, sweeps, trace = best
    lam = min(lam, 1.0)
    closest = ProductState.normalized(psi.structure, locals_)
    return _result(lam, closest, converged, sweeps, trace)


def _result(lam, closest, converged, sweeps, trace):
    return GmeResult(
        lambda_max=lam,
        closest=closest,
        e_sin2=1.0 - lam**2,
        e_log2=max(0.0, -2.0 * np.log2(lam)),
        converged=converged,
        sweeps_used=sweeps,
        trace=trace,
    )


def e_measures(psi, cfg=GmeConfig()):
    return lambda_max_numeric(psi, cfg)


def stationarity_residual(psi, closest):
    """Largest change of a local vector under one more update step."""
    tensor = psi.tensor
    locals_ = list(closest.locals)
    worst = 0.0
    for i in range(tensor.ndim):
        v = _party_contraction(tensor, locals_, i)
        v = v / np.linalg.norm(v)
        worst = max(worst, float(np.linalg.norm(v - locals_[i])))
    return worst


# symmetric-sector function

def symmetric_overlap(n, q, theta):
    """``sum_k sqrt(q_k C(n,k)) cos^k theta sin^(n-k) theta``."""
    q = np.asarray(q, dtype=float)
    k = np.arange(n + 1)
    amp = np.sqrt(q * np.array([comb(n, j) for j in k]))
    theta = np.asarray(theta, dtype=float)[..., None]
    return np.sum(amp * np.cos(theta) ** k * np.sin(theta) ** (n - k), axis=-1)


def maximize_1d(f, lo, hi, points=256, tol=1e-12):
    """Global maximum of a smooth 1-D function by scan plus golden section."""
    xs = np.linspace(lo, hi, points)
    ys = f(xs)
    j = int(np.argmax(ys))
    a = xs[max(j - 1, 0)]
    b = xs[min(j + 1, points - 1)]
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    candidates = [(float(f(x)), x), (float(ys[j]), float(xs[j]))]
    return max(candidates)


def _check_distribution(n, q):
    q = np.asarray(q, dtype=float)
    if q.shape != (n + 1,) or q.min() < 0 or abs(q.sum() - 1) > 1e-10:
        raise ValueError(f"expected a probability vector over k = 0..{n}")
    return q


def lambda_symmetric(n, q):
    """Entanglement eigenvalue of ``sum_k sqrt(q_k)|S(n,k)>``, and its angle."""
    q = _check_distribution(n, q)
    return maximize_1d(lambda t: symmetric_overlap(n, q, t), 0.0, np.pi / 2)


def epsilon_symmetric(n, q):
    lam, _ = lambda_symmetric(n, q)
    return max(0.0, -2.0 * np.log2(lam))


# convex envelopes

def lower_convex_envelope(xs, ys):
    """Lower convex envelope of the samples, evaluated back at ``xs``.

    Monotone-chain lower hull followed by linear interpolation.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    order = np.argsort(xs, kind="stable")
    px, py = xs[order], ys[order]
    hull = []
    for i in range(px.size):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            cross = (px[b] - px[a]) * (py[i] - py[a]) - (py[b] - py[a]) * (px[i] - px[a])
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    env = np.interp(px, px[hull], py[hull])
    out = np.empty_like(env)
    out[order] = env
    return np.minimum(out, ys)


def convex_roof_segment(f, grid=1001, points=None):
    """Sample ``f`` on [0, 1] and return ``(s, co_f)``.

    ``points`` adds extra abscissae (e.g. a dense patch near an endpoint).
    """
    if grid < 3:
        raise ValueError("need at least three grid points")
    s = np.linspace(0.0, 1.0, grid)
    if points is not None:
        s = np.union1d(s, np.asarray(points, dtype=float))
    vals = np.array([f(x) for x in s])
    return s, lower_convex_envelope(s, vals)

"""Relative entropy of entanglement: bounds, closed forms and minimization."""

from dataclasses import dataclass, field
from math import comb, log2

import numpy as np
from scipy.optimize import minimize

from entkit.geometric import (
    GmeConfig,
    convex_roof_segment,
    e_measures,
    epsilon_symmetric,
    lambda_dicke,
    lower_convex_envelope,
)
from entkit.state_zoo import (
    dicke_vector,
    dicke_weights,
    sigma_theta_ensemble,
    sigma_theta_weights,
    two_component,
)
from entkit.tensor_core import (
    PartyStructure,
    ProductState,
    PureState,
    SeparableEnsemble,
    partial_trace,
    relative_entropy,
    von_neumann_entropy,
)

LN2 = np.log(2.0)
EIG_FLOOR = 1e-30
FULL_RANK_WEIGHT = 1e-3
PENALTY = 1e6


@dataclass(frozen=True)
class ErConfig:
    """Controls for the numerical minimization of ``S(rho||sigma)``.

    ``ensemble_size=None`` means ``D**2`` product terms.  ``restrict="dicke"``
    searches only mixtures of phase-twirled symmetric product states.
    """

    ensemble_size: int = None
    starts: int = 16
    max_iters: int = 3000
    tol: float = 1e-9
    seed: int = 0
    restrict: str = "none"

    def __post_init__(self):
        if self.ensemble_size is not None and self.ensemble_size < 1:
            raise ValueError("ensemble_size must be >= 1")
        if self.starts < 1:
            raise ValueError("need at least one start")
        if self.restrict not in ("none", "dicke"):
            raise ValueError(f"unknown restriction {self.restrict!r}")


@dataclass
class ErResult:
    value: float
    sigma: SeparableEnsemble
    converged: bool
    trace: list = field(default_factory=list, repr=False)
    thetas: np.ndarray = None
    t: np.ndarray = None


def er_lower_bound(psi, cfg=GmeConfig()):
    """``-2 log2 Lambda_max(psi)``, a lower bound on the RE of a pure state."""
    return e_measures(psi, cfg).e_log2


# ---------------------------------------------------------------------------
# unrestricted search over product ensembles


def _log_derivative(w, v, r):
    """Adjoint Frechet derivative of the natural log at ``V diag(w) V^dag``, applied to ``r``."""
    lw = np.log(w)
    dw = w[:, None] - w[None, :]
    dl = lw[:, None] - lw[None, :]
    same = np.abs(dw) <= 1e-14 * np.maximum(w[:, None], w[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        gamma = np.where(same, 1.0 / np.maximum(w[:, None], w[None, :]), dl / np.where(same, 1.0, dw))
    rt = v.conj().T @ r @ v
    return v @ (gamma * rt) @ v.conj().T


class _EnsembleObjective:
    """``S(rho||sigma)`` with ``sigma = sum_m w_m |phi_m><phi_m|``.

    Parameters are packed as ``[a (M), Re/Im of local vectors party by party]``
    with ``w = a^2 / sum a^2`` and every local vector normalized on the fly.
    """

    def __init__(self, rho, m):
        self.rho = 0.5 * (rho.matrix + rho.matrix.conj().T)
        self.dims = rho.structure.dims
        self.m = m
        self.neg_entropy = -von_neumann_entropy(rho)
        self.sizes = [m * d for d in self.dims]

    def unpack(self, x):
        m = self.m
        a = x[:m]
        locals_ = []
        pos = m
        for d in self.dims:
            re = x[pos:pos + m * d].reshape(m, d)
            im = x[pos + m * d:pos + 2 * m * d].reshape(m, d)
            locals_.append(re + 1j * im)
            pos += 2 * m * d
        return a, locals_

    def pack(self, a, locals_):
        parts = [np.asarray(a, dtype=float)]
        for u in locals_:
            parts += [u.real.reshape(-1), u.imag.reshape(-1)]
        return np.concatenate(parts)

    def sigma_parts(self, x):
        a, us = self.unpack(x)
        norms = [np.linalg.norm(u, axis=1) for u in us]
        with np.errstate(divide="ignore", invalid="ignore"):
            cs = [u / nu[:, None] for u, nu in zip(us, norms)]
        phi = cs[0]
        for c in cs[1:]:
            phi = (phi[:, :, None] * c[:, None, :]).reshape(self.m, -1)
        total = np.dot(a, a)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = a * a / total
        sigma = (phi.T * w) @ phi.conj()
        sigma = 0.5 * (sigma + sigma.conj().T)
        return a, us, norms, cs, phi, w, total, sigma

    def value(self, x):
        return self(x)[0]

    def __call__(self, x):
        a, us, norms, cs, phi, w, total, sigma = self.sigma_parts(x)
        if not np.isfinite(sigma).all() or min(nu.min() for nu in norms) < 1e-100:
            # degenerate trial point from an overlong line-search step
            return PENALTY, np.zeros_like(x)
        ev, vecs = np.linalg.eigh(sigma)
        ev = np.maximum(ev, EIG_FLOOR)
        rdiag = np.einsum("ij,ik,kj->j", vecs.conj(), self.rho, vecs).real
        f = self.neg_entropy - float(np.dot(rdiag, np.log2(ev)))

        grad_sigma = -_log_derivative(ev, vecs, self.rho) / LN2
        y = phi @ grad_sigma.T
        g_w = np.einsum("mi,mi->m", phi.conj(), y).real
        g_a = (2 * a / total) * (g_w - np.dot(w, g_w))

        n = len(self.dims)
        y_t = y.reshape((self.m,) + self.dims)
        grads = [g_a]
        m_ax = n
        for i in range(n):
            operands = [y_t, [m_ax] + list(range(n))]
            for j in range(n):
                if j != i:
                    operands += [cs[j].conj(), [m_ax, j]]
            h = np.einsum(*operands, [m_ax, i])
            g = w[:, None] * h
            c = cs[i]
            proj = np.einsum("mk,mk->m", c.conj(), g).real
            gu = (g - c * proj[:, None]) / norms[i][:, None]
            grads += [2 * gu.real.reshape(-1), 2 * gu.imag.reshape(-1)]
        grad = np.concatenate(grads)
        if not (np.isfinite(f) and np.isfinite(grad).all()):
            return PENALTY, np.zeros_like(x)
        return f, grad

    def ensemble(self, x):
        a, us = self.unpack(x)
        w = a * a / np.dot(a, a)
        keep = w > 0
        structure = PartyStructure(self.dims)
        members = [
            ProductState.normalized(structure, [u[m] for u in us])
            for m in np.flatnonzero(keep)
        ]
        return SeparableEnsemble(w[keep] / w[keep].sum(), members)


def _basis_members(dims):
    total = int(np.prod(dims))
    out = []
    for j in range(total):
        levels = np.unravel_index(j, dims)
        out.append([np.eye(d, dtype=complex)[lv] for d, lv in zip(dims, levels)])
    return out


def _symmetric_members(n, count):
    """Phase-twirled symmetric product states on an even grid of angles."""
    out = []
    per = n + 1
    n_theta = max(1, count // per)
    for theta in np.linspace(0.0, np.pi / 2, n_theta + 2)[1:-1]:
        for member in sigma_theta_ensemble(n, theta).members:
            out.append(list(member.locals))
    return out[:count]


def _initial_point(obj, start, rng):
    """Initial ensemble: D basis states carrying total weight 1e-3, the rest random.

    On qubit registers start 0 fills the remainder with twirled symmetric
    product states instead of random ones.
    """
    dims = obj.dims
    m = obj.m
    basis = _basis_members(dims)[:m]
    nb = len(basis)
    rest = m - nb
    fill = []
    if start == 0 and all(d == 2 for d in dims) and rest > 0:
        fill = _symmetric_members(len(dims), rest)
    while len(fill) < rest:
        fill.append([
            (lambda z: z / np.linalg.norm(z))(rng.standard_normal(d) + 1j * rng.standard_normal(d))
            for d in dims
        ])
    members = basis + fill
    w = np.empty(m)
    if rest > 0:
        w[:nb] = FULL_RANK_WEIGHT / nb
        w[nb:] = (1 - FULL_RANK_WEIGHT) * rng.uniform(0.5, 1.5, rest)
        w[nb:] *= (1 - FULL_RANK_WEIGHT) / w[nb:].sum()
    else:
        w[:] = 1.0 / m
    a = np.sqrt(w)
    locals_ = [np.array([mem[i] for mem in members]) for i in range(len(dims))]
    return obj.pack(a, locals_)


def _lbfgs(fun, x0, cfg, bounds=None):
    trace = []

    def record(intermediate_result):
        trace.append(float(intermediate_result.fun))

    res = minimize(
        fun,
        x0,
        jac=True,
        method="L-BFGS-B",
        bounds=bounds,
        callback=record,
        options={"maxiter": cfg.max_iters, "maxcor": 30, "ftol": cfg.tol * 1e-3, "gtol": 1e-10},
    )
    stalled = len(trace) >= 50 and trace[-50] - trace[-1] < cfg.tol
    return res, trace, bool(res.success or stalled)


def _er_unrestricted(rho, cfg):
    dim = rho.structure.total_dim
    m = cfg.ensemble_size or dim * dim
    obj = _EnsembleObjective(rho, m)
    best = None
    for start in range(cfg.starts):
        rng = np.random.default_rng([cfg.seed, start])
        x0 = _initial_point(obj, start, rng)
        res, trace, ok = _lbfgs(obj, x0, cfg)
        if best is None or res.fun < best[0].fun:
            best = (res, trace, ok)
    res, trace, ok = best
    sigma = obj.ensemble(res.x)
    value = relative_entropy(rho, sigma.as_density())
    return ErResult(value=float(value), sigma=sigma, converged=ok, trace=trace)


# ---------------------------------------------------------------------------
# search restricted to mixtures of sigma(theta)


def _b_and_db(n, theta):
    """Binomial weights of ``sigma(theta)`` and their theta-derivatives."""
    k = np.arange(n + 1)
    c, s = np.cos(theta)[:, None], np.sin(theta)[:, None]
    binom = np.array([comb(n, j) for j in k], dtype=float)
    b = binom * c ** (2 * k) * s ** (2 * (n - k))
    with np.errstate(invalid="ignore"):
        left = np.where(k > 0, 2 * k * c ** np.maximum(2 * k - 1, 0) * (-s) * s ** (2 * (n - k)), 0.0)
        right = np.where(
            n - k > 0, 2 * (n - k) * c ** (2 * k) * s ** np.maximum(2 * (n - k) - 1, 0) * c, 0.0
        )
    return b, binom * (left + right)


def _er_dicke_restricted(rho, cfg):
    dims = rho.structure.dims
    if any(d != 2 for d in dims):
        raise ValueError("the Dicke-diagonal restriction needs a qubit register")
    n = len(dims)
    proj = np.array([np.vdot(dicke_vector(n, k), rho.matrix @ dicke_vector(n, k)).real for k in range(n + 1)])
    neg_entropy = -von_neumann_entropy(rho)
    if proj.sum() < 1 - 1e-10:
        # rho leaks out of the symmetric subspace every restricted sigma lives on
        ens = sigma_theta_ensemble(n, np.pi / 4)
        return ErResult(value=np.inf, sigma=ens, converged=True, trace=[])
    proj = np.clip(proj, 0.0, None)
    terms = cfg.ensemble_size or 2 * (n + 1)

    def fun(x):
        a, theta = x[:terms], x[terms:]
        total = np.dot(a, a)
        w = a * a / total
        b, db = _b_and_db(n, theta)
        r = np.maximum(w @ b, EIG_FLOOR)
        live = proj > 0
        f = neg_entropy - float(np.dot(proj[live], np.log2(r[live])))
        dr = np.where(live, -proj / (r * LN2), 0.0)
        g_w = b @ dr
        g_a = (2 * a / total) * (g_w - np.dot(w, g_w))
        g_theta = w * (db @ dr)
        return f, np.concatenate([g_a, g_theta])

    best = None
    for start in range(cfg.starts):
        rng = np.random.default_rng([cfg.seed, start])
        theta0 = rng.uniform(0, np.pi / 2, terms)
        if start == 0:
            theta0 = np.linspace(0, np.pi / 2, terms)
        x0 = np.concatenate([np.full(terms, 1 / np.sqrt(terms)), theta0])
        res, trace, ok = _lbfgs(fun, x0, cfg)
        if best is None or res.fun < best[0].fun:
            best = (res, trace, ok)
    res, trace, ok = best
    a, theta = res.x[:terms], res.x[terms:]
    w = a * a / np.dot(a, a)
    theta = np.mod(theta, np.pi)
    sigma = _theta_mixture_ensemble(n, w, theta)
    value = relative_entropy(rho, sigma.as_density())
    return ErResult(value=float(value), sigma=sigma, converged=ok, trace=trace, thetas=theta, t=w)


def _theta_mixture_ensemble(n, t, thetas):
    weights, members = [], []
    for ti, th in zip(t, thetas):
        if ti <= 0:
            continue
        ens = sigma_theta_ensemble(n, th)
        weights += list(ti * ens.weights)
        members += list(ens.members)
    weights = np.array(weights)
    return SeparableEnsemble(weights / weights.sum(), members)


def er_numeric(rho, cfg=ErConfig()):
    """Upper bound on the RE from an explicit separable ``sigma``.

    The reported value is ``S(rho||sigma)`` recomputed from the returned
    ensemble, so it is a certified upper bound on the true minimum.
    """
    if isinstance(rho, PureState):
        rho = rho.density()
    if cfg.restrict == "dicke":
        return _er_dicke_restricted(rho, cfg)
    return _er_unrestricted(rho, cfg)


# ---------------------------------------------------------------------------
# symmetric-mixture upper bound


def _check_probs(n, p):
    p = np.asarray(p, dtype=float)
    if p.shape != (n + 1,) or p.min() < 0 or abs(p.sum() - 1) > 1e-10:
        raise ValueError(f"expected a probability vector over k = 0..{n}")
    return p


def theta_star(n, p):
    """Angle minimizing ``S(rho({p}) || sigma(theta))``."""
    p = _check_probs(n, p)
    k = np.arange(n + 1)
    ones = float(np.dot(p, n - k))
    zeros = float(np.dot(p, k))
    if zeros <= 0:
        return np.pi / 2
    if ones <= 0:
        return 0.0
    return float(np.arctan(np.sqrt(ones / zeros)))


def f_upper(n, p):
    """``min_theta S(rho({p}) || sigma(theta))`` in closed form, in bits."""
    p = _check_probs(n, p)
    alpha = float(np.dot(p, np.arange(n + 1)))
    total = 0.0
    for k, pk in enumerate(p):
        if pk <= 0:
            continue
        term = log2(pk) + n * log2(n) - log2(comb(n, k))
        if k:
            term -= k * log2(alpha)
        if n - k:
            term -= (n - k) * log2(n - alpha)
        total += pk * term
    return total


def s_sigma_theta(n, p, theta):
    """``S(rho({p}) || sigma(theta))`` evaluated directly from the binomial weights."""
    p = _check_probs(n, p)
    r = sigma_theta_weights(n, theta)
    live = p > 0
    if np.any(r[live] <= 0):
        return np.inf
    return float(np.sum(p[live] * np.log2(p[live] / r[live])))


def segment_f(n, k1, k2):
    return lambda s: f_upper(n, two_component(n, k1, k2, s).probs)


def segment_epsilon(n, k1, k2):
    return lambda s: epsilon_symmetric(n, two_component(n, k1, k2, s).probs)


def co_f_two_component(n, k1, k2, grid=1001, points=None):
    """Samples ``(s, coF(s))`` of the convexified upper bound along a segment."""
    if k1 == k2:
        raise ValueError("the two Dicke components must differ")
    return convex_roof_segment(segment_f(n, k1, k2), grid, points)


def co_epsilon_two_component(n, k1, k2, grid=1001, points=None):
    if k1 == k2:
        raise ValueError("the two Dicke components must differ")
    return convex_roof_segment(segment_epsilon(n, k1, k2), grid, points)


def _envelope_at(f, s, grid):
    xs = np.union1d(np.linspace(0, 1, grid), np.atleast_1d(np.asarray(s, dtype=float)))
    env = lower_convex_envelope(xs, np.array([f(x) for x in xs]))
    return np.interp(s, xs, env)


def co_f_at(n, k1, k2, s, grid=1001):
    """coF of ``rho_{n;k1,k2}`` at ``s`` (scalar or array), grid plus the query points."""
    return _envelope_at(segment_f(n, k1, k2), s, grid)


def co_epsilon_at(n, k1, k2, s, grid=1001):
    return _envelope_at(segment_epsilon(n, k1, k2), s, grid)


# closed forms for the two-component families, s weighting the first label

def _xlog(s, arg):
    return 0.0 if s == 0 else s * log2(arg)


def _closed_2_0_1(s):
    return _xlog(s, 4 * s / (1 + s) ** 2) + _xlog(1 - s, 2 / (1 + s))


def _closed_3_2_1(s):
    return _xlog(s, 9 * s / ((1 + s) ** 2 * (2 - s))) + _xlog(1 - s, 9 * (1 - s) / ((2 - s) ** 2 * (1 + s)))


def _closed_3_0_1(s):
    return _xlog(s, 27 * s / (2 + s) ** 3) + _xlog(1 - s, 9 / (2 + s) ** 2)


def _closed_4_0_1(s):
    return _xlog(s, 256 * s / (3 + s) ** 4) + _xlog(1 - s, 64 / (3 + s) ** 3)


def _closed_4_1_2(s):
    return _xlog(s, 64 * s / ((2 - s) * (2 + s) ** 3)) + _xlog(
        1 - s, 128 * (1 - s) / (3 * (2 - s) ** 2 * (2 + s) ** 2)
    )


def _closed_4_1_3(s):
    return _xlog(s, 64 * s / ((3 - 2 * s) * (1 + 2 * s) ** 3)) + _xlog(
        1 - s, 64 * (1 - s) / ((3 - 2 * s) ** 3 * (1 + 2 * s))
    )


CLOSED_FORMS = {
    (2, 0, 1): _closed_2_0_1,
    (3, 2, 1): _closed_3_2_1,
    (3, 0, 1): _closed_3_0_1,
    (4, 0, 1): _closed_4_0_1,
    (4, 1, 2): _closed_4_1_2,
    (4, 1, 3): _closed_4_1_3,
}


def conjectured_er_closed(n, k1, k2, s):
    """Closed-form RE suggested for ``rho_{n;k1,k2}(s)`` (relabelings included)."""
    if not 0.0 <= s <= 1.0:
        raise ValueError("s must lie in [0, 1]")
    for (kk1, kk2, ss) in ((k1, k2, s), (k2, k1, 1 - s), (n - k1, n - k2, s), (n - k2, n - k1, 1 - s)):
        fn = CLOSED_FORMS.get((n, kk1, kk2))
        if fn is not None:
            return fn(ss)
    raise ValueError(f"no closed form for rho_{{{n};{k1},{k2}}}")


# ---------------------------------------------------------------------------
# reductions and monotonicity


def _reduced_er(reduced, er_cfg, grid):
    """RE of a reduced state: coF on Dicke segments, numerics otherwise."""
    probs = dicke_weights(reduced)
    if probs is not None:
        n = reduced.structure.n_parties
        support = [k for k, p in enumerate(probs) if p > 1e-14]
        if len(support) == 1:
            return f_upper(n, probs)
        if len(support) == 2:
            k1, k2 = support
            return float(co_f_at(n, k1, k2, probs[k1], grid))
    return er_numeric(reduced, er_cfg).value


def plenio_vedral_check(psi, er_cfg=ErConfig(), gme_cfg=GmeConfig(), grid=1001):
    """Both sides of ``max_i [E_R + S](rho_{without i}) <= E_R(psi)``.

    For Dicke inputs the right-hand side is the exact ``-2 log2 Lambda_max``;
    otherwise it is the overlap lower bound, which coincides with E_R on the
    states that saturate it.
    """
    rho = psi.density()
    n = psi.structure.n_parties
    probs = dicke_weights(rho)
    support = [] if probs is None else [k for k, p in enumerate(probs) if p > 1e-14]
    if len(support) == 1:
        rhs = -2 * log2(lambda_dicke(n, support[0]))
    else:
        rhs = er_lower_bound(psi, gme_cfg)
    lhs = -np.inf
    for i in range(n):
        reduced = partial_trace(rho, [j for j in range(n) if j != i])
        lhs = max(lhs, _reduced_er(reduced, er_cfg, grid) + von_neumann_entropy(reduced))
    return float(lhs), float(max(rhs, 0.0))


def monotone_f(N, x):
    """``log2(1 + N x^2) - N x^2 / (1 + N x^2) log2 N``; negative values break monotonicity."""
    x = np.asarray(x, dtype=float)
    u = N * x * x
    out = np.log2(1 + u) - u / (1 + u) * np.log2(N)
    return float(out) if out.ndim == 0 else out

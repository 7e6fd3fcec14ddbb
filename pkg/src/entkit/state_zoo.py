"""Constructors for the named states and their closest separable partners.

Dicke states ``|S(n,k)>`` are indexed by the number ``k`` of |0> factors.
"""

from dataclasses import dataclass
from itertools import permutations, product
from math import comb, factorial

import numpy as np

from entkit.tensor_core import (
    DensityMatrix,
    PartyStructure,
    ProductState,
    PureState,
    SeparableEnsemble,
    hamming_weights,
)

MAX_QUBITS = 14
MAX_DIM = 2**14
MAX_DET_PARTIES = 6


def _levi_civita(perm):
    """Sign of a permutation given as a tuple of 0-based images."""
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def dicke_vector(n, k):
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must lie in [1, {MAX_QUBITS}]")
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in [0, {n}], got {k}")
    # k zeros <=> n - k ones
    mask = hamming_weights(n) == n - k
    v = np.zeros(2**n, dtype=complex)
    v[mask] = 1.0 / np.sqrt(comb(n, k))
    return v


def make_dicke(n, k):
    return PureState(PartyStructure.qubits(n), dicke_vector(n, k))


def make_generalized_symmetric(n, counts):
    """Symmetric state with ``counts[i]`` parties in level ``i``.

    The local dimension is ``len(counts)``.
    """
    counts = [int(c) for c in counts]
    if any(c < 0 for c in counts) or sum(counts) != n:
        raise ValueError(f"level counts {counts} do not sum to n={n}")
    d = len(counts)
    if d < 2:
        raise ValueError("need at least two levels")
    if d**n > MAX_DIM:
        raise ValueError(f"total dimension {d}^{n} exceeds {MAX_DIM}")
    dims = (d,) * n
    levels = np.array(list(product(range(d), repeat=n)))
    occupation = np.stack([(levels == i).sum(axis=1) for i in range(d)], axis=1)
    mask = (occupation == np.array(counts)).all(axis=1)
    v = np.zeros(d**n, dtype=complex)
    v[mask] = 1.0
    return PureState.from_unnormalized(PartyStructure(dims), v)


def make_determinant(n):
    """Totally antisymmetric state of ``n`` parties with ``n`` levels each."""
    if not 2 <= n <= MAX_DET_PARTIES:
        raise ValueError(f"determinant states need 2 <= n <= {MAX_DET_PARTIES}")
    dims = (n,) * n
    v = np.zeros(n**n, dtype=complex)
    for perm in permutations(range(n)):
        v[np.ravel_multi_index(perm, dims)] = _levi_civita(perm)
    return PureState(PartyStructure(dims), v / np.sqrt(factorial(n)))


def det_level_tuples(d, p):
    """The ``d**p`` level tuples in lexicographic base-``d`` order."""
    return list(product(range(d), repeat=p))


def make_determinant_general(d, p, split=True):
    """Antisymmetric state built on ``d**p`` blocks of ``p`` digits each.

    With ``split=True`` every digit is its own ``d``-level party, giving a
    register of ``p * d**p`` parties.  With ``split=False`` each block is one
    party of dimension ``d**p`` and the state is a relabeled ``|Det_{d^p}>``.
    """
    m = d**p
    if d < 2 or p < 1 or m > MAX_DET_PARTIES:
        raise ValueError(f"need d >= 2, p >= 1 and d**p <= {MAX_DET_PARTIES}")
    if not split or p == 1:
        return make_determinant(m)
    if d ** (p * m) > MAX_DIM:
        raise ValueError("register too large for a dense vector")
    tuples = det_level_tuples(d, p)
    dims = (d,) * (p * m)
    v = np.zeros(d ** (p * m), dtype=complex)
    for perm in permutations(range(m)):
        digits = [digit for i in perm for digit in tuples[i]]
        v[np.ravel_multi_index(digits, dims)] = _levi_civita(perm)
    return PureState(PartyStructure(dims), v / np.sqrt(factorial(m)))


def make_ghz(n):
    if n < 2:
        raise ValueError("GHZ needs at least two parties")
    v = np.zeros(2**n, dtype=complex)
    v[0] = v[-1] = 1 / np.sqrt(2)
    return PureState(PartyStructure.qubits(n), v)


def make_w_superposition(s):
    """``sqrt(s)|W> + sqrt(1-s)|W~>`` on three qubits."""
    if not 0.0 <= s <= 1.0:
        raise ValueError("s must lie in [0, 1]")
    v = np.sqrt(s) * dicke_vector(3, 2) + np.sqrt(1 - s) * dicke_vector(3, 1)
    return PureState.from_unnormalized(PartyStructure.qubits(3), v)


@dataclass(frozen=True)
class DickeMixture:
    """Weights ``probs[k]`` on ``|S(n,k)><S(n,k)|`` for ``k = 0..n``."""

    n: int
    probs: tuple

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        if len(probs) != self.n + 1:
            raise ValueError(f"need n+1 = {self.n + 1} weights, got {len(probs)}")
        if min(probs) < 0 or abs(sum(probs) - 1.0) > 1e-10:
            raise ValueError("Dicke weights must form a probability vector")
        object.__setattr__(self, "probs", probs)

    @property
    def support(self):
        return [k for k, p in enumerate(self.probs) if p > 0]


def two_component(n, k1, k2, s):
    """``s |S(n,k1)><..| + (1-s) |S(n,k2)><..|``."""
    if k1 == k2:
        raise ValueError("the two Dicke components must differ")
    if not (0 <= k1 <= n and 0 <= k2 <= n):
        raise ValueError("component index out of range")
    probs = [0.0] * (n + 1)
    probs[k1] = s
    probs[k2] = 1.0 - s
    return DickeMixture(n, probs)


def dicke_diagonal(n, weights):
    """``sum_k weights[k] |S(n,k)><S(n,k)|`` as a raw matrix."""
    w = hamming_weights(n)
    diag_block = np.zeros((2**n, 2**n))
    for k, r in enumerate(weights):
        if r == 0:
            continue
        mask = (w == n - k).astype(float)
        diag_block += (r / comb(n, k)) * np.outer(mask, mask)
    return diag_block


def make_dicke_mixture(m):
    mat = dicke_diagonal(m.n, m.probs)
    return DensityMatrix(PartyStructure.qubits(m.n), mat)


def dicke_weights(rho, atol=1e-10):
    """Return the Dicke weights of ``rho`` if it is Dicke-diagonal, else None."""
    dims = rho.structure.dims
    if any(d != 2 for d in dims):
        return None
    n = len(dims)
    probs = np.array([np.vdot(dicke_vector(n, k), rho.matrix @ dicke_vector(n, k)).real for k in range(n + 1)])
    if np.abs(dicke_diagonal(n, probs) - rho.matrix).max() > atol:
        return None
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def sigma_theta_weights(n, theta):
    """Binomial Dicke weights ``C(n,k) cos^2k sin^2(n-k)`` of the twirled ansatz."""
    c2, s2 = np.cos(theta) ** 2, np.sin(theta) ** 2
    return np.array([comb(n, k) * c2**k * s2 ** (n - k) for k in range(n + 1)])


def make_product_ansatz(n, theta, phi=0.0):
    """``(cos theta |0> + e^{i phi} sin theta |1>)^{(x)n}``."""
    local = np.array([np.cos(theta), np.exp(1j * phi) * np.sin(theta)])
    return ProductState(PartyStructure.qubits(n), (local,) * n)


def make_sigma_theta(n, theta):
    return DensityMatrix(PartyStructure.qubits(n), dicke_diagonal(n, sigma_theta_weights(n, theta)))


def sigma_theta_ensemble(n, theta):
    """Finite separable decomposition of ``sigma(theta)``.

    ``n + 1`` equally spaced phases suffice: coherences between Hamming
    weights differ by at most ``n`` and the discrete phase average kills
    every nonzero difference below ``n + 1``.
    """
    members = [make_product_ansatz(n, theta, 2 * np.pi * j / (n + 1)) for j in range(n + 1)]
    return SeparableEnsemble(np.full(n + 1, 1.0 / (n + 1)), members)


# closest separable constructions

def closest_separable_dicke(n, k):
    p = k / n
    return make_dicke_mixture(DickeMixture(n, [comb(n, j) * p**j * (1 - p) ** (n - j) for j in range(n + 1)]))


def closest_separable_det(n):
    """Uniform mixture of the ``n!`` basis states in the antisymmetric support."""
    dims = (n,) * n
    diag = np.zeros(n**n)
    for perm in permutations(range(n)):
        diag[np.ravel_multi_index(perm, dims)] = 1.0 / factorial(n)
    return DensityMatrix(PartyStructure(dims), np.diag(diag))


def closest_separable_ghz(n=3):
    diag = np.zeros(2**n)
    diag[0] = diag[-1] = 0.5
    return DensityMatrix(PartyStructure.qubits(n), np.diag(diag))


def closest_separable_w_continuous():
    """Phase-averaged ``(sqrt(2/3)|0> + e^{i phi} sqrt(1/3)|1>)^{(x)3}``."""
    mat = dicke_diagonal(3, [1 / 27, 2 / 9, 4 / 9, 8 / 27])
    return DensityMatrix(PartyStructure.qubits(3), mat)


def closest_separable_w_discrete():
    """Three-phase average: ``4/9 W + 2/9 W~ + 1/3 |xi><xi|``."""
    xi = np.zeros(8, dtype=complex)
    xi[0] = 2 * np.sqrt(2) / 3
    xi[7] = 1 / 3
    mat = dicke_diagonal(3, [0, 2 / 9, 4 / 9, 0]) + np.outer(xi, xi.conj()) / 3
    return DensityMatrix(PartyStructure.qubits(3), mat)


def w_discrete_ensemble():
    theta = np.arccos(np.sqrt(2 / 3))
    members = [make_product_ansatz(3, theta, 2 * np.pi * j / 3) for j in range(3)]
    return SeparableEnsemble(np.full(3, 1 / 3), members)


CLOSEST_FAMILIES = ("dicke", "det", "ghz", "w_continuous", "w_discrete")


def make_closest_separable(family, *params):
    """Separable state saturating the overlap bound for a named family.

    ``family`` is one of ``dicke`` (params ``n, k``), ``det`` (``n``),
    ``ghz``, ``w_continuous`` or ``w_discrete``.
    """
    family = family.lower()
    if family == "dicke":
        return closest_separable_dicke(*params)
    if family == "det":
        return closest_separable_det(*params)
    if family == "ghz":
        return closest_separable_ghz(*params)
    if family == "w_continuous":
        return closest_separable_w_continuous()
    if family == "w_discrete":
        return closest_separable_w_discrete()
    raise ValueError(f"unknown family {family!r}; expected one of {CLOSEST_FAMILIES}")


def family_state(family, *params):
    """The pure state a closest-separable family is paired with."""
    family = family.lower()
    if family == "dicke":
        return make_dicke(*params)
    if family == "det":
        return make_determinant(*params)
    if family == "ghz":
        return make_ghz(*(params or (3,)))
    if family in ("w_continuous", "w_discrete"):
        return make_dicke(3, 2)
    raise ValueError(f"unknown family {family!r}")


# JSON descriptors

def from_descriptor(desc):
    """Build a PureState or DensityMatrix from a JSON-style dict."""
    kind = desc.get("type")
    try:
        if kind == "dicke":
            return make_dicke(int(desc["n"]), int(desc["k"]))
        if kind == "generalized":
            return make_generalized_symmetric(int(desc["n"]), desc["counts"])
        if kind == "dicke_mixture":
            return make_dicke_mixture(DickeMixture(int(desc["n"]), desc["probs"]))
        if kind == "two_component":
            return make_dicke_mixture(two_component(int(desc["n"]), int(desc["k1"]), int(desc["k2"]), float(desc["s"])))
        if kind == "ghz":
            return make_ghz(int(desc.get("n", 3)))
        if kind == "det":
            return make_determinant(int(desc["n"]))
        if kind == "det_general":
            return make_determinant_general(int(desc["d"]), int(desc["p"]), bool(desc.get("split", True)))
        if kind == "w_superposition":
            return make_w_superposition(float(desc["s"]))
        if kind == "sigma_theta":
            return make_sigma_theta(int(desc["n"]), float(desc["theta"]))
        if kind == "product":
            return make_product_ansatz(int(desc["n"]), float(desc["theta"]), float(desc.get("phi", 0.0))).as_pure()
    except KeyError as exc:
        raise ValueError(f"descriptor {desc!r} is missing field {exc}") from None
    raise ValueError(f"unknown state type {kind!r}")

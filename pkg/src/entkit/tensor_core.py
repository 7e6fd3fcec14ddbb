"""Dense linear algebra and quantum-information primitives.

States are stored as flat complex arrays in row-major party order, so
party 0 is the slowest-varying tensor index.  All logarithms are base 2.
"""

from dataclasses import dataclass
from itertools import permutations
from math import prod

import numpy as np

from entkit.jacobi import jacobi_eigh

SUPPORT_TOL = 1e-10
ENTROPY_ZERO = 1e-12
MAX_PERMUTATION_PARTIES = 8


@dataclass(frozen=True)
class PartyStructure:
    """Local Hilbert-space dimensions, one entry per party."""

    dims: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ValueError("a party structure needs at least one party")
        if any(d < 2 for d in dims):
            raise ValueError(f"every local dimension must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def qubits(cls, n):
        return cls((2,) * n)

    @property
    def n_parties(self):
        return len(self.dims)

    @property
    def total_dim(self):
        return prod(self.dims)

    def restrict(self, keep):
        return PartyStructure(tuple(self.dims[i] for i in sorted(keep)))


@dataclass(frozen=True, eq=False)
class PureState:
    structure: PartyStructure
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.structure.total_dim:
            raise ValueError(
                f"expected {self.structure.total_dim} amplitudes, got {amps.size}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state is not normalized (norm {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_unnormalized(cls, structure, amplitudes):
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(structure, amps / np.linalg.norm(amps))

    @property
    def tensor(self):
        return self.amplitudes.reshape(self.structure.dims)

    def density(self):
        return DensityMatrix(self.structure, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    structure: PartyStructure
    matrix: np.ndarray
    check: bool = True

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        dim = self.structure.total_dim
        if m.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix, got {m.shape}")
        if self.check:
            if np.abs(m - m.conj().T).max() > 1e-12:
                raise ValueError("density matrix is not Hermitian")
            if abs(np.trace(m).real - 1.0) > 1e-12:
                raise ValueError(f"density matrix trace is {np.trace(m).real!r}")
            if np.linalg.eigvalsh(m).min() < -1e-10:
                raise ValueError("density matrix has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def allclose(self, other, atol=1e-12):
        return self.structure == other.structure and np.abs(self.matrix - other.matrix).max() <= atol


@dataclass(frozen=True, eq=False)
class ProductState:
    """One normalized local vector per party."""

    structure: PartyStructure
    locals: tuple

    def __post_init__(self):
        vecs = tuple(np.asarray(c, dtype=complex).reshape(-1) for c in self.locals)
        if len(vecs) != self.structure.n_parties:
            raise ValueError("need one local vector per party")
        for d, c in zip(self.structure.dims, vecs):
            if c.size != d:
                raise ValueError(f"local vector of size {c.size} for a {d}-level party")
            if abs(np.linalg.norm(c) - 1.0) > 1e-12:
                raise ValueError("local vectors must be normalized")
        object.__setattr__(self, "locals", vecs)

    @classmethod
    def normalized(cls, structure, vecs):
        return cls(structure, tuple(np.asarray(c) / np.linalg.norm(c) for c in vecs))

    def vector(self):
        out = np.ones(1, dtype=complex)
        for c in self.locals:
            out = np.kron(out, c)
        return out

    def as_pure(self):
        return PureState.from_unnormalized(self.structure, self.vector())


@dataclass(frozen=True, eq=False)
class SeparableEnsemble:
    """Probability mixture of product pure states."""

    weights: np.ndarray
    members: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if len(self.members) != w.size or w.size == 0:
            raise ValueError("need one weight per ensemble member")
        if w.min() < 0 or abs(w.sum() - 1.0) > 1e-10:
            raise ValueError("ensemble weights must form a probability vector")
        structures = {m.structure for m in self.members}
        if len(structures) != 1:
            raise ValueError("ensemble members must share a party structure")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "members", tuple(self.members))

    @property
    def structure(self):
        return self.members[0].structure

    def as_density(self):
        vecs = np.array([m.vector() for m in self.members])
        mat = (vecs.T * self.weights) @ vecs.conj()
        mat = 0.5 * (mat + mat.conj().T)
        return DensityMatrix(self.structure, mat / np.trace(mat).real)


def kron(a, b):
    return np.kron(np.asarray(a), np.asarray(b))


def ket(levels, dims):
    """Computational basis vector ``|levels>`` for the given local dimensions."""
    index = np.ravel_multi_index(tuple(levels), tuple(dims))
    v = np.zeros(prod(dims), dtype=complex)
    v[index] = 1.0
    return v


def hermitian_eig(m, method="lapack"):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    ``method="jacobi"`` uses the in-house cyclic Jacobi solver; the default
    goes through LAPACK, which the optimizers call in their inner loops.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    if m.size and np.abs(m - m.conj().T).max() > 1e-10:
        raise ValueError("matrix is not Hermitian")
    m = 0.5 * (m + m.conj().T)
    if method == "jacobi":
        w, v, _ = jacobi_eigh(m)
        return w, v
    if method == "lapack":
        return np.linalg.eigh(m)
    raise ValueError(f"unknown eigensolver {method!r}")


def _as_matrix(rho):
    return rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


def log2m(m, support_tol=SUPPORT_TOL):
    """Base-2 matrix logarithm restricted to the support of a PSD matrix.

    Eigenvalues at or below ``support_tol`` are dropped; the returned
    operator acts as zero on the kernel.
    """
    w, v = hermitian_eig(_as_matrix(m))
    keep = w > support_tol
    vk = v[:, keep]
    return (vk * np.log2(w[keep])) @ vk.conj().T


def _entropy_of_spectrum(w):
    w = w[w > ENTROPY_ZERO]
    return float(-np.sum(w * np.log2(w)))


def von_neumann_entropy(rho):
    """``-Tr rho log2 rho`` in bits, with ``0 log 0 = 0``."""
    w = np.linalg.eigvalsh(0.5 * (_as_matrix(rho) + _as_matrix(rho).conj().T))
    return max(0.0, _entropy_of_spectrum(w))


def relative_entropy(rho, sigma, support_tol=SUPPORT_TOL):
    """Quantum relative entropy ``S(rho||sigma)`` in bits.

    Returns ``math.inf`` when the support of ``rho`` is not contained in the
    support of ``sigma``.
    """
    if isinstance(rho, DensityMatrix) and isinstance(sigma, DensityMatrix):
        if rho.structure != sigma.structure:
            raise ValueError("rho and sigma live on different party structures")
    r = _as_matrix(rho)
    s = _as_matrix(sigma)
    if r.shape != s.shape:
        raise ValueError(f"dimension mismatch: {r.shape} vs {s.shape}")
    r = 0.5 * (r + r.conj().T)
    s = 0.5 * (s + s.conj().T)
    ws, vs = np.linalg.eigh(s)
    # diagonal of rho in sigma's eigenbasis
    rdiag = np.einsum("ij,ik,kj->j", vs.conj(), r, vs).real
    keep = ws > support_tol
    if rdiag[~keep].sum() > support_tol:
        return np.inf
    cross = float(np.dot(rdiag[keep], np.log2(ws[keep])))
    return -_entropy_of_spectrum(np.linalg.eigvalsh(r)) - cross


def partial_trace(rho, keep):
    """Reduce ``rho`` onto the parties in ``keep`` (kept in ascending order)."""
    structure = rho.structure
    n = structure.n_parties
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("must keep at least one party")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"party indices must lie in [0, {n})")
    dims = structure.dims
    t = rho.matrix.reshape(dims + dims)
    row = list(range(n))
    col = [i if i not in keep else n + i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    reduced = np.einsum(t, row + col, out)
    sub = structure.restrict(keep)
    return DensityMatrix(sub, reduced.reshape(sub.total_dim, sub.total_dim), check=False)


def hamming_weights(n):
    """Number of |1> factors of every n-qubit computational basis index."""
    idx = np.arange(2**n)
    return np.array([bin(i).count("1") for i in idx])


def phase_twirl(rho):
    """Average over the collective phase rotation ``U(phi)^{(x)n}``.

    The average removes exactly the coherences between basis states of
    different Hamming weight, so it is applied as that dephasing.
    """
    dims = rho.structure.dims
    if any(d != 2 for d in dims):
        raise ValueError("phase twirl is defined for qubit registers only")
    w = hamming_weights(len(dims))
    mask = w[:, None] == w[None, :]
    return DensityMatrix(rho.structure, np.where(mask, rho.matrix, 0.0), check=False)


def permute_parties(rho, perm):
    """Relabel parties: party ``perm[i]`` of the input becomes party ``i``."""
    dims = rho.structure.dims
    n = len(dims)
    t = rho.matrix.reshape(dims + dims)
    t = np.transpose(t, list(perm) + [n + p for p in perm])
    new = PartyStructure(tuple(dims[p] for p in perm))
    return DensityMatrix(new, t.reshape(rho.matrix.shape), check=False)


def permutation_twirl(rho):
    """Average ``rho`` over all ``n!`` relabelings of its parties."""
    dims = rho.structure.dims
    n = len(dims)
    if len(set(dims)) != 1:
        raise ValueError("permutation twirl needs identical local dimensions")
    if n > MAX_PERMUTATION_PARTIES:
        raise ValueError(f"permutation twirl enumerates n! terms; n <= {MAX_PERMUTATION_PARTIES}")
    t = rho.matrix.reshape(dims + dims)
    acc = np.zeros_like(t)
    count = 0
    for perm in permutations(range(n)):
        acc += np.transpose(t, list(perm) + [n + p for p in perm])
        count += 1
    return DensityMatrix(rho.structure, (acc / count).reshape(rho.matrix.shape), check=False)

"""Cyclic Jacobi eigensolver for dense complex Hermitian matrices."""

import numpy as np


def jacobi_eigh(a, tol=1e-13, max_sweeps=100):
    """Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies the real symmetric Jacobi rotation that annihilates it.

    Parameters
    ----------
    a : array_like
        Hermitian matrix of shape ``(n, n)``.
    tol : float
        Sweeps stop once the off-diagonal Frobenius mass drops below
        ``tol * max(1, ||a||_F)``.
    max_sweeps : int
        Hard cap on the number of full cyclic sweeps.

    Returns
    -------
    w : ndarray
        Eigenvalues in ascending order.
    v : ndarray
        Unitary matrix whose columns are the matching eigenvectors.
    sweeps : int
        Number of sweeps performed.
    """
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(1.0, np.linalg.norm(a))
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off < tol * scale:
            sweeps -= 1
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                mag = abs(b)
                if mag < 1e-300:
                    continue
                phase = b / mag
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                u = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ u
                a[idx, :] = u.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ u
    else:
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off >= tol * scale:
            raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = np.real(np.diag(a))
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order], sweeps

"""Pure-Python backend for the hot numerical loops.

Provides the same two entry points as the compiled extension
(``bewitness._core``): a cyclic Jacobi eigensolver for complex Hermitian
matrices and the alternating product-state optimization loop.  The Jacobi
solver mirrors the compiled rotation schedule exactly; the optimization loop
uses ``numpy.linalg.eigh`` for its small half-step eigenproblems, which is
the natural vectorized choice at this matrix size.
"""

from __future__ import annotations

import math

import numpy as np

MAX_SWEEPS = 60


def jacobi_eigh(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Full eigensystem of a complex Hermitian matrix by cyclic Jacobi rotations.

    Returns eigenvalues in ascending order and the matching orthonormal
    eigenvectors as columns.  The input is assumed Hermitian; callers are
    responsible for symmetrizing noisy inputs.
    """
    h = np.array(matrix, dtype=np.complex128)
    n = h.shape[0]
    v = np.eye(n, dtype=np.complex128)
    if n > 1:
        scale = max(1.0, np.linalg.norm(h))
        stop = 1e-15 * scale
        for _ in range(MAX_SWEEPS):
            off = math.sqrt(max(_offdiag_sq(h, n), 0.0))
            if off <= stop:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    _rotate(h, v, p, q)
    w = np.real(np.diagonal(h)).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def _offdiag_sq(h: np.ndarray, n: int) -> float:
    total = 0.0
    for p in range(n - 1):
        row = h[p, p + 1:]
        total += float(np.real(row @ row.conj()))
    return 2.0 * total


def _rotate(h: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    hpq = h[p, q]
    habs = abs(hpq)
    if habs == 0.0:
        return
    phase = hpq / habs
    tau = (np.real(h[q, q]) - np.real(h[p, p])) / (2.0 * habs)
    if tau >= 0.0:
        t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
    else:
        t = 1.0 / (tau - math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c

    col_p = h[:, p].copy()
    col_q = h[:, q].copy()
    h[:, p] = c * col_p - s * np.conj(phase) * col_q
    h[:, q] = s * phase * col_p + c * col_q
    row_p = h[p, :].copy()
    row_q = h[q, :].copy()
    h[p, :] = c * row_p - s * phase * row_q
    h[q, :] = s * np.conj(phase) * row_p + c * row_q
    h[p, q] = 0.0
    h[q, p] = 0.0
    h[p, p] = np.real(h[p, p])
    h[q, q] = np.real(h[q, q])

    vec_p = v[:, p].copy()
    vec_q = v[:, q].copy()
    v[:, p] = c * vec_p - s * np.conj(phase) * vec_q
    v[:, q] = s * phase * vec_p + c * vec_q


DEGENERACY_TOL = 1e-12


def _extreme_update(m: np.ndarray, current: np.ndarray,
                    find_max: bool) -> tuple[np.ndarray, float]:
    """Extreme eigenvector of a small Hermitian matrix, degeneracy-aware.

    With a simple extreme eigenvalue this is the usual eigenvector pick.  When
    the extreme eigenspace is degenerate (subspaces holding a continuum of
    product states produce this), the current iterate is projected onto the
    eigenspace instead: the objective value is identical for any choice, but
    projecting keeps the run near its starting point, so independent restarts
    keep sampling distinct optima instead of collapsing onto one.
    """
    vals, vecs = np.linalg.eigh(m)
    idx = len(vals) - 1 if find_max else 0
    star = float(vals[idx])
    degenerate = np.abs(vals - star) <= DEGENERACY_TOL * max(1.0, abs(star))
    if np.sum(degenerate) > 1:
        basis = vecs[:, degenerate]
        projected = basis @ (basis.conj().T @ current)
        norm = np.linalg.norm(projected)
        if norm > 1e-12:
            return projected / norm, star
    return vecs[:, idx], star


def seesaw_extremize(
    p_matrix: np.ndarray,
    d_a: int,
    d_b: int,
    psi0: np.ndarray,
    phi0: np.ndarray,
    find_max: bool,
    tol: float,
    max_alternations: int,
) -> tuple[float, np.ndarray, np.ndarray, int]:
    """One run of the alternating product-state optimization.

    Extremizes ``<psi x phi| P |psi x phi>`` over unit vectors ``psi`` and
    ``phi`` by closed-form eigenvector updates: with one factor held fixed the
    objective is a quadratic form in the other, whose extremum is the extreme
    eigenvector of the contracted matrix.  Stops once the objective improves
    by less than ``tol`` or after ``max_alternations`` update pairs.

    Returns ``(value, psi, phi, alternations)``.
    """
    p4 = np.ascontiguousarray(p_matrix, dtype=np.complex128).reshape(d_a, d_b, d_a, d_b)
    psi = np.asarray(psi0, dtype=np.complex128)
    psi = psi / np.linalg.norm(psi)
    phi = np.asarray(phi0, dtype=np.complex128)
    phi = phi / np.linalg.norm(phi)

    value = float(np.real(
        np.einsum("i,k,ikjl,j,l->", psi.conj(), phi.conj(), p4, psi, phi)
    ))
    alternations = 0
    for _ in range(max_alternations):
        alternations += 1
        m_a = np.einsum("k,ikjl,l->ij", phi.conj(), p4, phi)
        psi, _ = _extreme_update(m_a, psi, find_max)
        m_b = np.einsum("i,ikjl,j->kl", psi.conj(), p4, psi)
        phi, new_value = _extreme_update(m_b, phi, find_max)
        if abs(new_value - value) < tol:
            value = new_value
            break
        value = new_value
    return value, psi, phi, alternations

# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled core: cyclic Jacobi eigensolver and the product-state seesaw loop.

Mirrors ``bewitness._core_py``; see that module for the algorithm notes.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()

cdef Py_ssize_t MAX_SWEEPS = 60
cdef double DEGENERACY_TOL = 1e-12


cdef double _offdiag_sq(double complex[:, ::1] h, Py_ssize_t n) nogil:
    cdef Py_ssize_t p, q
    cdef double total = 0.0
    cdef double complex z
    for p in range(n - 1):
        for q in range(p + 1, n):
            z = h[p, q]
            total += z.real * z.real + z.imag * z.imag
    return 2.0 * total


cdef void _rotate(double complex[:, ::1] h, double complex[:, ::1] v,
                  Py_ssize_t p, Py_ssize_t q, Py_ssize_t n) nogil:
    cdef double complex hpq = h[p, q]
    cdef double habs = sqrt(hpq.real * hpq.real + hpq.imag * hpq.imag)
    if habs == 0.0:
        return
    cdef double complex phase = hpq / habs
    cdef double complex phase_c = phase.conjugate()
    cdef double tau = (h[q, q].real - h[p, p].real) / (2.0 * habs)
    cdef double t
    if tau >= 0.0:
        t = 1.0 / (tau + sqrt(1.0 + tau * tau))
    else:
        t = 1.0 / (tau - sqrt(1.0 + tau * tau))
    cdef double c = 1.0 / sqrt(1.0 + t * t)
    cdef double s = t * c
    cdef Py_ssize_t i
    cdef double complex ap, aq

    for i in range(n):
        ap = h[i, p]
        aq = h[i, q]
        h[i, p] = c * ap - s * phase_c * aq
        h[i, q] = s * phase * ap + c * aq
    for i in range(n):
        ap = h[p, i]
        aq = h[q, i]
        h[p, i] = c * ap - s * phase * aq
        h[q, i] = s * phase_c * ap + c * aq
    h[p, q] = 0.0
    h[q, p] = 0.0
    h[p, p] = h[p, p].real
    h[q, q] = h[q, q].real

    for i in range(n):
        ap = v[i, p]
        aq = v[i, q]
        v[i, p] = c * ap - s * phase_c * aq
        v[i, q] = s * phase * ap + c * aq


cdef void _jacobi_inplace(double complex[:, ::1] h, double complex[:, ::1] v,
                          Py_ssize_t n) nogil:
    cdef Py_ssize_t i, p, q, sweep
    cdef double scale = 0.0, stop, off
    cdef double complex z
    for p in range(n):
        for q in range(n):
            z = h[p, q]
            scale += z.real * z.real + z.imag * z.imag
    scale = sqrt(scale)
    if scale < 1.0:
        scale = 1.0
    stop = 1e-15 * scale
    for i in range(n):
        for p in range(n):
            v[i, p] = 1.0 if i == p else 0.0
    if n <= 1:
        return
    for sweep in range(MAX_SWEEPS):
        off = sqrt(_offdiag_sq(h, n))
        if off <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(h, v, p, q, n)


def jacobi_eigh(matrix):
    """Full eigensystem of a complex Hermitian matrix by cyclic Jacobi rotations.

    Returns eigenvalues in ascending order and the matching orthonormal
    eigenvectors as columns.  The input is assumed Hermitian.
    """
    h = np.array(matrix, dtype=np.complex128, order="C")
    cdef Py_ssize_t n = h.shape[0]
    v = np.empty((n, n), dtype=np.complex128, order="C")
    cdef double complex[:, ::1] hv = h
    cdef double complex[:, ::1] vv = v
    with nogil:
        _jacobi_inplace(hv, vv, n)
    w = np.real(np.diagonal(h)).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


cdef void _normalize(double complex[::1] x, Py_ssize_t n) nogil:
    cdef Py_ssize_t i
    cdef double nrm = 0.0
    for i in range(n):
        nrm += x[i].real * x[i].real + x[i].imag * x[i].imag
    nrm = sqrt(nrm)
    if nrm > 0.0:
        for i in range(n):
            x[i] = x[i] / nrm


cdef void _contract_a(const double complex[:, ::1] p_flat, double complex[::1] phi,
                      double complex[:, ::1] out, Py_ssize_t d_a,
                      Py_ssize_t d_b) nogil:
    # out[i, j] = sum_{k,l} conj(phi[k]) phi[l] P[(i,k),(j,l)]
    cdef Py_ssize_t i, j, k, l
    cdef double complex acc
    for i in range(d_a):
        for j in range(d_a):
            acc = 0.0
            for k in range(d_b):
                for l in range(d_b):
                    acc += phi[k].conjugate() * phi[l] * p_flat[i * d_b + k, j * d_b + l]
            out[i, j] = acc


cdef void _contract_b(const double complex[:, ::1] p_flat, double complex[::1] psi,
                      double complex[:, ::1] out, Py_ssize_t d_a,
                      Py_ssize_t d_b) nogil:
    # out[k, l] = sum_{i,j} conj(psi[i]) psi[j] P[(i,k),(j,l)]
    cdef Py_ssize_t i, j, k, l
    cdef double complex acc
    for k in range(d_b):
        for l in range(d_b):
            acc = 0.0
            for i in range(d_a):
                for j in range(d_a):
                    acc += psi[i].conjugate() * psi[j] * p_flat[i * d_b + k, j * d_b + l]
            out[k, l] = acc


cdef Py_ssize_t _extreme_index(double complex[:, ::1] m, Py_ssize_t n,
                               bint find_max) nogil:
    cdef Py_ssize_t i, best = 0
    cdef double x, best_val = m[0, 0].real
    for i in range(1, n):
        x = m[i, i].real
        if (find_max and x > best_val) or ((not find_max) and x < best_val):
            best_val = x
            best = i
    return best


cdef double _extreme_update(double complex[:, ::1] diag_m,
                            double complex[:, ::1] vecs,
                            double complex[::1] current,
                            double complex[::1] stash, Py_ssize_t n,
                            bint find_max) nogil:
    # Degeneracy-aware eigenvector pick after an in-place Jacobi solve: with
    # a simple extreme eigenvalue take its eigenvector; with a degenerate
    # extreme eigenspace project the current iterate onto it so independent
    # restarts keep sampling distinct optima instead of collapsing onto one.
    cdef Py_ssize_t idx = _extreme_index(diag_m, n, find_max)
    cdef double star = diag_m[idx, idx].real
    cdef double scale = star if star > 0.0 else -star
    if scale < 1.0:
        scale = 1.0
    cdef double gap_tol = DEGENERACY_TOL * scale
    cdef Py_ssize_t i, j, count = 0
    cdef double gap, nrm
    cdef double complex acc
    for j in range(n):
        gap = diag_m[j, j].real - star
        if fabs(gap) <= gap_tol:
            count += 1
    if count > 1:
        for i in range(n):
            stash[i] = current[i]
            current[i] = 0.0
        for j in range(n):
            gap = diag_m[j, j].real - star
            if fabs(gap) > gap_tol:
                continue
            acc = 0.0
            for i in range(n):
                acc = acc + vecs[i, j].conjugate() * stash[i]
            for i in range(n):
                current[i] = current[i] + vecs[i, j] * acc
        nrm = 0.0
        for i in range(n):
            nrm += current[i].real * current[i].real + current[i].imag * current[i].imag
        nrm = sqrt(nrm)
        if nrm > 1e-12:
            for i in range(n):
                current[i] = current[i] / nrm
            return star
    for i in range(n):
        current[i] = vecs[i, idx]
    return star


def seesaw_extremize(p_matrix, Py_ssize_t d_a, Py_ssize_t d_b, psi0, phi0,
                     bint find_max, double tol, int max_alternations):
    """One run of the alternating product-state optimization.

    Same contract as ``bewitness._core_py.seesaw_extremize``; the half-step
    eigenproblems are solved with the in-module Jacobi routine.
    """
    p = np.ascontiguousarray(p_matrix, dtype=np.complex128)
    psi = np.array(psi0, dtype=np.complex128)
    phi = np.array(phi0, dtype=np.complex128)
    m_a = np.empty((d_a, d_a), dtype=np.complex128, order="C")
    v_a = np.empty((d_a, d_a), dtype=np.complex128, order="C")
    stash_a = np.empty(d_a, dtype=np.complex128)
    m_b = np.empty((d_b, d_b), dtype=np.complex128, order="C")
    v_b = np.empty((d_b, d_b), dtype=np.complex128, order="C")
    stash_b = np.empty(d_b, dtype=np.complex128)

    cdef const double complex[:, ::1] pv = p
    cdef double complex[::1] psiv = psi
    cdef double complex[::1] phiv = phi
    cdef double complex[:, ::1] mav = m_a
    cdef double complex[:, ::1] vav = v_a
    cdef double complex[::1] sav = stash_a
    cdef double complex[:, ::1] mbv = m_b
    cdef double complex[:, ::1] vbv = v_b
    cdef double complex[::1] sbv = stash_b

    cdef Py_ssize_t i, j
    cdef int alternations = 0
    cdef double value, new_value
    cdef double complex acc

    with nogil:
        _normalize(psiv, d_a)
        _normalize(phiv, d_b)
        # initial objective value psi^dag M_A(phi) psi
        _contract_a(pv, phiv, mav, d_a, d_b)
        acc = 0.0
        for i in range(d_a):
            for j in range(d_a):
                acc += psiv[i].conjugate() * mav[i, j] * psiv[j]
        value = acc.real

        while alternations < max_alternations:
            alternations += 1
            _contract_a(pv, phiv, mav, d_a, d_b)
            _jacobi_inplace(mav, vav, d_a)
            _extreme_update(mav, vav, psiv, sav, d_a, find_max)

            _contract_b(pv, psiv, mbv, d_a, d_b)
            _jacobi_inplace(mbv, vbv, d_b)
            new_value = _extreme_update(mbv, vbv, phiv, sbv, d_b, find_max)

            if fabs(new_value - value) < tol:
                value = new_value
                break
            value = new_value

    return value, psi, phi, alternations

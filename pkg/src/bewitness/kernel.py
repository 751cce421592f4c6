"""Dense complex linear algebra shared by every other module.

Conventions fixed here once and used everywhere:

* matrices are row-major ``numpy.complex128`` arrays;
* the composite index of ``|i>_A |j>_B`` is ``i * d_b + j``;
* Hermitian eigensystems come from cyclic Jacobi rotations (via
  :mod:`bewitness.backends`), with eigenvalues reported in descending order.

Also defines the JSON encoding for complex vectors and matrices used by all
file formats: a complex scalar is a ``[re, im]`` pair, a matrix is
``{"rows": n, "cols": m, "data": [[re, im], ...]}`` with row-major data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from bewitness import backends

HERMITICITY_TOL = 1e-12
RANK_TOL = 1e-10


class KernelError(ValueError):
    """Raised when an operand violates a documented precondition."""


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.array(array)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class BipartiteDims:
    """Local dimensions of a bipartite system; total dimension is ``d_a * d_b``."""

    d_a: int
    d_b: int

    def __post_init__(self):
        if self.d_a < 1 or self.d_b < 1:
            raise KernelError(f"local dimensions must be positive, got {self.d_a}x{self.d_b}")

    @classmethod
    def square(cls, d: int) -> "BipartiteDims":
        return cls(d, d)

    @property
    def total(self) -> int:
        return self.d_a * self.d_b

    def composite_index(self, i: int, j: int) -> int:
        return i * self.d_b + j

    def as_list(self) -> list[int]:
        return [self.d_a, self.d_b]


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues in descending order with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", _frozen(self.eigenvalues))
        object.__setattr__(self, "eigenvectors", _frozen(self.eigenvectors))


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal vectors (columns) spanning a subspace, e.g. a state's range."""

    vectors: np.ndarray
    dims: "BipartiteDims | None" = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "vectors", _frozen(self.vectors))

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    def projector(self) -> np.ndarray:
        return self.vectors @ self.vectors.conj().T


def hermiticity_defect(matrix: np.ndarray) -> float:
    """Largest entry-wise deviation of a square matrix from its adjoint."""
    m = np.asarray(matrix)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def hermitian_eig(matrix: np.ndarray, herm_tol: float = HERMITICITY_TOL) -> EigenSystem:
    """Full spectrum and eigenbasis of a Hermitian matrix, descending.

    The input is symmetrized as ``(M + M^dag)/2`` before solving so that
    round-off accumulated while assembling projectors cannot leak into the
    rotations.  Rejects non-square and non-Hermitian input, reporting the
    offending deviation.
    """
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise KernelError(f"expected a square matrix, got shape {m.shape}")
    defect = hermiticity_defect(m)
    if defect >= herm_tol:
        raise KernelError(f"matrix is not Hermitian: max|M - M^dag| = {defect:.3e}")
    sym = (m + m.conj().T) / 2.0
    values, vectors = backends.jacobi_eigh(sym)
    return EigenSystem(values[::-1].copy(), vectors[:, ::-1].copy())


def partial_transpose(rho: np.ndarray, dims: BipartiteDims) -> np.ndarray:
    """Transpose the second-subsystem indices of a bipartite operator.

    Entry rule: ``PT(rho)[(i,j),(k,l)] = rho[(i,l),(k,j)]``.  An exact entry
    permutation, so applying it twice restores the input bit for bit.
    """
    rho = np.asarray(rho)
    total = dims.total
    if rho.shape != (total, total):
        raise KernelError(f"operator shape {rho.shape} does not match dims {dims.d_a}x{dims.d_b}")
    four = rho.reshape(dims.d_a, dims.d_b, dims.d_a, dims.d_b)
    return four.transpose(0, 3, 2, 1).reshape(total, total).copy()


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the composite-index convention ``i * d_b + j``."""
    return np.kron(np.asarray(a), np.asarray(b))


def orthonormal_range(matrix: np.ndarray, rank_tol: float = RANK_TOL,
                      dims: BipartiteDims | None = None) -> SubspaceBasis:
    """Orthonormal basis of the span of eigenvectors with non-negligible eigenvalue.

    Keeps eigenvectors whose eigenvalue exceeds ``rank_tol`` times the largest
    one; the basis size is the numerical rank.  A zero matrix yields an empty
    basis.  Intended for Hermitian positive-semidefinite input.
    """
    system = hermitian_eig(matrix)
    values = system.eigenvalues
    if values.size == 0 or values[0] <= 0.0:
        return SubspaceBasis(np.zeros((np.asarray(matrix).shape[0], 0), dtype=np.complex128), dims)
    keep = values > rank_tol * values[0]
    return SubspaceBasis(system.eigenvectors[:, keep].copy(), dims)


class NnlsResult(NamedTuple):
    x: np.ndarray
    residual: float
    converged: bool


def nnls(a: np.ndarray, b: np.ndarray, max_iter: int | None = None) -> NnlsResult:
    """Least squares ``min |A x - b|`` subject to ``x >= 0``.

    Lawson-Hanson active-set iteration: move the most violated coordinate
    into the passive set, solve the free least-squares problem there, and
    clip back to the boundary whenever the free solution leaves the cone.
    Returns the solution, the Euclidean residual, and a convergence flag
    (``False`` only if the iteration cap was exhausted).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float).ravel()
    if a.ndim != 2 or a.shape[0] != b.size:
        raise KernelError(f"incompatible nnls shapes {a.shape} and {b.shape}")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise KernelError("nnls operands must be finite")
    m, n = a.shape
    if max_iter is None:
        max_iter = 3 * max(n, 10)

    x = np.zeros(n)
    passive = np.zeros(n, dtype=bool)
    resid = b.copy()
    grad = a.T @ resid
    tol = 10.0 * np.finfo(float).eps * max(m, n) * max(1.0, float(np.max(np.abs(b), initial=0.0)))

    def _free_solution() -> np.ndarray:
        z = np.zeros(n)
        if passive.any():
            z[passive] = np.linalg.lstsq(a[:, passive], b, rcond=None)[0]
        return z

    iterations = 0
    while not passive.all() and np.max(grad[~passive], initial=-np.inf) > tol:
        iterations += 1
        if iterations > max_iter:
            return NnlsResult(x, float(np.linalg.norm(b - a @ x)), False)
        candidates = np.where(~passive)[0]
        passive[candidates[np.argmax(grad[candidates])]] = True
        z = _free_solution()
        while passive.any() and np.min(z[passive]) <= 0.0:
            iterations += 1
            if iterations > max_iter:
                return NnlsResult(x, float(np.linalg.norm(b - a @ x)), False)
            # step toward z until the first passive coordinate hits zero
            blocking = passive & (z <= 0.0)
            gap = x[blocking] - z[blocking]
            ratios = np.where(x[blocking] > 0.0, x[blocking] / np.where(gap > 0.0, gap, 1.0), 0.0)
            alpha = float(np.min(ratios))
            x = x + alpha * (z - x)
            passive = passive & (x > tol)
            x[~passive] = 0.0
            z = _free_solution()
        x = z
        resid = b - a @ x
        grad = a.T @ resid
    return NnlsResult(x, float(np.linalg.norm(resid)), True)


# ---------------------------------------------------------------------------
# JSON encoding shared by all file formats


def complex_vector_to_json(vector: np.ndarray) -> list[list[float]]:
    v = np.asarray(vector, dtype=np.complex128).ravel()
    return [[float(z.real), float(z.imag)] for z in v]


def complex_vector_from_json(data: Sequence[Sequence[float]]) -> np.ndarray:
    return np.array([complex(re, im) for re, im in data], dtype=np.complex128)


def matrix_to_json(matrix: np.ndarray) -> dict:
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2:
        raise KernelError(f"expected a matrix, got ndim={m.ndim}")
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": complex_vector_to_json(m.ravel()),
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    flat = complex_vector_from_json(obj["data"])
    if flat.size != rows * cols:
        raise KernelError(f"matrix data length {flat.size} does not match {rows}x{cols}")
    return flat.reshape(rows, cols)

"""Unextendible product bases: constructions and numerical certificates.

An unextendible product basis (UPB) is a set of pairwise-orthogonal product
vectors whose orthocomplement contains no product vector.  The smallest total
overlap of any product state with the spanned subspace is then strictly
positive; this module estimates that constant by a seeded multi-start seesaw
search and turns it into a (heuristic, clearly labelled) unextendibility
certificate.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from bewitness import seesaw
from bewitness.kernel import (
    BipartiteDims,
    KernelError,
    complex_vector_from_json,
    complex_vector_to_json,
    kron,
)

UNIT_NORM_TOL = 1e-12
ORTHOGONALITY_TOL = 1e-12
REALNESS_TOL = 1e-14
PROJECTOR_INPUT_TOL = 1e-10
CERTIFICATE_THRESHOLD = 1e-6


@dataclass(frozen=True)
class ProductVector:
    """A product state, stored as its two local unit factors."""

    psi_a: np.ndarray
    phi_b: np.ndarray

    def __post_init__(self):
        psi = np.asarray(self.psi_a, dtype=np.complex128).ravel()
        phi = np.asarray(self.phi_b, dtype=np.complex128).ravel()
        for name, v in (("psi_a", psi), ("phi_b", phi)):
            if abs(np.linalg.norm(v) - 1.0) > UNIT_NORM_TOL:
                raise ValueError(f"{name} is not a unit vector (norm {np.linalg.norm(v):.12f})")
            v.setflags(write=False)
        object.__setattr__(self, "psi_a", psi)
        object.__setattr__(self, "phi_b", phi)

    @property
    def dims(self) -> BipartiteDims:
        return BipartiteDims(self.psi_a.size, self.phi_b.size)

    def composite(self) -> np.ndarray:
        return kron(self.psi_a, self.phi_b)

    def conjugated_composite(self) -> np.ndarray:
        """``psi_a (x) conj(phi_b)``, the partner entering partial-transpose ranges."""
        return kron(self.psi_a, self.phi_b.conj())

    def is_real(self, tol: float = REALNESS_TOL) -> bool:
        return (np.max(np.abs(self.psi_a.imag)) < tol
                and np.max(np.abs(self.phi_b.imag)) < tol)


@dataclass(frozen=True)
class UpbSet:
    """Ordered pairwise-orthogonal product vectors with dimension metadata."""

    members: tuple[ProductVector, ...]
    dims: BipartiteDims
    is_real: bool

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        n = len(self.members)
        if n > self.dims.total:
            raise ValueError(f"{n} members cannot be orthogonal in dimension {self.dims.total}")
        comp = self.composite_matrix()
        gram = comp.conj() @ comp.T
        off = np.max(np.abs(gram - np.eye(n))) if n else 0.0
        if off >= ORTHOGONALITY_TOL:
            raise ValueError(f"members are not pairwise orthonormal: max Gram deviation {off:.3e}")
        if self.is_real and any(not m.is_real() for m in self.members):
            raise ValueError("set is flagged real but has a member with complex coefficients")

    @property
    def size(self) -> int:
        return len(self.members)

    def composite_matrix(self) -> np.ndarray:
        """Member composites stacked as rows, shape ``(n, total_dim)``."""
        if not self.members:
            return np.zeros((0, self.dims.total), dtype=np.complex128)
        return np.array([m.composite() for m in self.members])

    def subspace_projector(self) -> "SubspaceProjector":
        return projector([m.composite() for m in self.members], self.dims)


@dataclass(frozen=True)
class SubspaceProjector:
    """Hermitian idempotent acting on a bipartite space."""

    matrix: np.ndarray
    dims: BipartiteDims

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def complement(self) -> "SubspaceProjector":
        eye = np.eye(self.dims.total, dtype=np.complex128)
        return SubspaceProjector(eye - self.matrix, self.dims)


def _ket(i: int, d: int) -> np.ndarray:
    v = np.zeros(d, dtype=np.complex128)
    v[i] = 1.0
    return v


def tiles_upb() -> UpbSet:
    """The five-member Tiles UPB in a 3x3 bipartite space.

    Four members tile the edges of the 3x3 grid with two-level superpositions
    and the fifth is the uniform "stopper" state; all coefficients are real.
    """
    s2 = 1.0 / np.sqrt(2.0)
    s3 = 1.0 / np.sqrt(3.0)
    uniform = s3 * (_ket(0, 3) + _ket(1, 3) + _ket(2, 3))
    members = (
        ProductVector(_ket(2, 3), s2 * (_ket(1, 3) - _ket(2, 3))),
        ProductVector(_ket(0, 3), s2 * (_ket(0, 3) - _ket(1, 3))),
        ProductVector(s2 * (_ket(0, 3) - _ket(1, 3)), _ket(2, 3)),
        ProductVector(s2 * (_ket(1, 3) - _ket(2, 3)), _ket(0, 3)),
        ProductVector(uniform, uniform),
    )
    return UpbSet(members, BipartiteDims.square(3), is_real=True)


def padded_real_upb(d: int) -> UpbSet:
    """Real UPB of cardinality ``d**2 - 4`` in any ``d x d``, ``d >= 3``.

    The Tiles UPB occupies the top-left 3x3 block of each factor; every
    computational product state ``|i> (x) |j>`` with ``max(i, j) >= 3`` is
    appended.  Any product state orthogonal to the padding must live in the
    3x3 block, where the embedded Tiles set leaves no room, so the whole set
    stays unextendible.
    """
    if d < 3:
        raise ValueError(f"local dimension must be at least 3, got {d}")
    dims = BipartiteDims.square(d)
    members = [
        ProductVector(_embed(m.psi_a, d), _embed(m.phi_b, d))
        for m in tiles_upb().members
    ]
    for m in range(3, d):
        for i in range(m + 1):
            members.append(ProductVector(_ket(i, d), _ket(m, d)))
        for j in range(m):
            members.append(ProductVector(_ket(m, d), _ket(j, d)))
    return UpbSet(tuple(members), dims, is_real=True)


def _embed(vector: np.ndarray, d: int) -> np.ndarray:
    out = np.zeros(d, dtype=np.complex128)
    out[: vector.size] = vector
    return out


def projector(vectors: Sequence[np.ndarray], dims: BipartiteDims) -> SubspaceProjector:
    """Sum of rank-1 projectors onto mutually orthogonal composite vectors."""
    total = dims.total
    mat = np.zeros((total, total), dtype=np.complex128)
    vs = [np.asarray(v, dtype=np.complex128).ravel() for v in vectors]
    for v in vs:
        if v.size != total:
            raise KernelError(f"vector length {v.size} does not match dimension {total}")
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            overlap = abs(np.vdot(vs[i], vs[j]))
            if overlap >= PROJECTOR_INPUT_TOL:
                raise ValueError(f"vectors {i} and {j} are not orthogonal (|overlap| = {overlap:.3e})")
    for v in vs:
        mat += np.outer(v, v.conj())
    return SubspaceProjector(mat, dims)


def min_product_overlap(
    p: SubspaceProjector,
    starts: int = seesaw.DEFAULT_STARTS,
    tol: float = seesaw.DEFAULT_TOL,
    seed: int = 42,
) -> tuple[float, ProductVector]:
    """Smallest found value of ``<psi x phi| P |psi x phi>`` over product states.

    Multi-start seesaw minimization; the reported value is the running minimum
    over all restarts and is an upper bound on the true minimum.
    """
    runs = seesaw.product_overlap_search(
        p.matrix, p.dims, starts=starts, tol=tol, find_max=False, seed=seed
    )
    best = seesaw.best_run(runs, find_max=False)
    return best.value, ProductVector(best.psi, best.phi)


class UnextendibilityCertificate(NamedTuple):
    is_upb_evidence: bool
    lambda_hat: float
    argmin: ProductVector


def unextendibility_certificate(
    s: UpbSet,
    starts: int = seesaw.DEFAULT_STARTS,
    tol: float = seesaw.DEFAULT_TOL,
    seed: int = 42,
    threshold: float = CERTIFICATE_THRESHOLD,
) -> UnextendibilityCertificate:
    """Numerical evidence that a pairwise-orthogonal product set is a UPB.

    ``lambda_hat`` is the multi-start minimum of the subspace overlap.  The
    evidence flag is true when it clears ``threshold``.  This is evidence,
    not proof: the seesaw only upper-bounds the true minimum, so a positive
    value is strong but heuristic, while a (numerically) zero value exhibits
    an explicit product state orthogonal to the whole set and is conclusive
    of extendibility.
    """
    value, argmin = min_product_overlap(s.subspace_projector(), starts=starts, tol=tol, seed=seed)
    return UnextendibilityCertificate(bool(value > threshold), value, argmin)


def real_grid_overlap_minimum(p: SubspaceProjector, step: float = 0.01) -> float:
    """Grid oracle for the minimal product overlap of a real 3x3 projector.

    Real product states are parametrized by two sphere angles per factor.
    The first factor sweeps a uniform ``step``-spaced grid; for each grid
    point the second factor is optimized exactly, as the bottom eigenvector
    of the contracted 3x3 matrix (real symmetric for real projectors, so the
    optimum stays inside the real family).  Independent of the seesaw path:
    no alternation, LAPACK eigensolver, exhaustive first factor.
    """
    if p.dims.d_a != 3 or p.dims.d_b != 3:
        raise ValueError("the grid oracle is implemented for 3x3 only")
    imag_max = float(np.max(np.abs(p.matrix.imag)))
    if imag_max > 1e-12:
        warnings.warn(f"projector has complex entries (max imag {imag_max:.3e}); "
                      "the real-restricted grid value may exceed the complex minimum")
    thetas = np.arange(0.0, np.pi + step / 2.0, step)
    azimuths = np.arange(0.0, 2.0 * np.pi, step)
    theta, azim = np.meshgrid(thetas, azimuths, indexing="ij")
    grid = np.stack(
        [np.sin(theta) * np.cos(azim), np.sin(theta) * np.sin(azim), np.cos(theta)],
        axis=-1,
    ).reshape(-1, 3)
    p4 = p.matrix.reshape(3, 3, 3, 3)
    contracted = np.einsum("gi,gj,ikjl->gkl", grid, grid, p4.real)
    return float(np.linalg.eigvalsh(contracted)[:, 0].min())


# ---------------------------------------------------------------------------
# Catalog file format


def upb_to_json(s: UpbSet) -> dict:
    return {
        "dims": s.dims.as_list(),
        "real": bool(s.is_real),
        "members": [
            {"psiA": complex_vector_to_json(m.psi_a), "phiB": complex_vector_to_json(m.phi_b)}
            for m in s.members
        ],
    }


def upb_from_json(obj: dict) -> UpbSet:
    dims = BipartiteDims(int(obj["dims"][0]), int(obj["dims"][1]))
    members = tuple(
        ProductVector(complex_vector_from_json(m["psiA"]), complex_vector_from_json(m["phiB"]))
        for m in obj["members"]
    )
    return UpbSet(members, dims, bool(obj["real"]))

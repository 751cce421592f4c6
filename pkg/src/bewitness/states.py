"""Density operators mixing UPB subsets with the complement state.

The base state is the normalized projector onto the orthocomplement of a UPB;
mixing it with the normalized projector onto a chosen subset of the UPB gives
a one-parameter family whose rank, partial-transpose invariance, and
(in)separability windows are what this package reproduces and checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from bewitness.kernel import (
    BipartiteDims,
    KernelError,
    hermitian_eig,
    hermiticity_defect,
    matrix_from_json,
    matrix_to_json,
    partial_transpose,
)
from bewitness.upb import UpbSet, projector

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
PPT_TOL = 1e-10
RANK_TOL = 1e-10


@dataclass(frozen=True)
class DensityOperator:
    """Unit-trace positive-semidefinite operator on a bipartite space."""

    matrix: np.ndarray
    dims: BipartiteDims

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        total = self.dims.total
        if m.shape != (total, total):
            raise KernelError(f"matrix shape {m.shape} does not match dims {total}x{total}")
        defect = hermiticity_defect(m)
        if defect >= HERMITICITY_TOL:
            raise ValueError(f"density matrix is not Hermitian (defect {defect:.3e})")
        trace = np.trace(m)
        if abs(trace - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace is {trace:.15f}, not 1")
        spectrum = hermitian_eig(m).eigenvalues
        if spectrum[-1] < -PSD_TOL:
            raise ValueError(f"density matrix has negative eigenvalue {spectrum[-1]:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class PptReport:
    """Spectrum of the partial transpose and the positivity verdict."""

    min_pt_eigenvalue: float
    is_ppt: bool
    spectrum: np.ndarray


def rho_be(s: UpbSet) -> DensityOperator:
    """Normalized projector onto the orthocomplement of the UPB's span.

    Rank is ``total - n`` with all nonzero eigenvalues equal to
    ``1 / (total - n)``; with no product state in its range, it is the
    standard UPB-generated PPT entangled state.
    """
    total, n = s.dims.total, s.size
    if n >= total:
        raise ValueError("the UPB spans the whole space; the complement state is empty")
    comp = s.subspace_projector().complement()
    return DensityOperator(comp.matrix / (total - n), s.dims)


def rho_g(s: UpbSet, g_indices, omega: float) -> DensityOperator:
    """Mix the normalized projector onto a UPB subset with the complement state.

    ``g_indices`` selects members by 1-based position; ``omega`` in [0, 1] is
    the mixing weight of the subset term.  The result is
    ``(omega/|G|) P_G + ((1-omega)/(total-n)) (I - P_S)`` with rank
    ``(total - n) + |G|`` for interior mixing weights.
    """
    g = sorted(set(int(i) for i in g_indices))
    if not g:
        raise ValueError("the subset of UPB members must be nonempty")
    if g[0] < 1 or g[-1] > s.size:
        raise ValueError(f"subset indices must lie in 1..{s.size}, got {g}")
    if not 0.0 <= omega <= 1.0:
        raise ValueError(f"mixing weight must lie in [0, 1], got {omega}")
    total, n = s.dims.total, s.size
    p_g = projector([s.members[i - 1].composite() for i in g], s.dims)
    complement = s.subspace_projector().complement()
    mat = (omega / len(g)) * p_g.matrix + ((1.0 - omega) / (total - n)) * complement.matrix
    return DensityOperator(mat, s.dims)


def ppt_report(rho: DensityOperator, ppt_tol: float = PPT_TOL) -> PptReport:
    """Eigenvalues of the partially transposed state and the PPT verdict."""
    pt = partial_transpose(rho.matrix, rho.dims)
    spectrum = hermitian_eig(pt).eigenvalues
    minimum = float(spectrum[-1])
    return PptReport(minimum, bool(minimum >= -ppt_tol), spectrum)


def spectrum_and_rank(rho: DensityOperator, rank_tol: float = RANK_TOL) -> tuple[np.ndarray, int]:
    """Descending spectrum and the numerical rank at a relative threshold."""
    spectrum = hermitian_eig(rho.matrix).eigenvalues
    top = spectrum[0]
    rank = int(np.sum(spectrum > rank_tol * top)) if top > 0.0 else 0
    return spectrum, rank


# ---------------------------------------------------------------------------
# State file format


def state_to_json(rho: DensityOperator, provenance: dict | None = None) -> dict:
    return {
        "dims": rho.dims.as_list(),
        "matrix": matrix_to_json(rho.matrix),
        "provenance": provenance or {},
    }


def state_from_json(obj: dict) -> tuple[DensityOperator, dict]:
    dims = BipartiteDims(int(obj["dims"][0]), int(obj["dims"][1]))
    rho = DensityOperator(matrix_from_json(obj["matrix"]), dims)
    return rho, obj.get("provenance", {})

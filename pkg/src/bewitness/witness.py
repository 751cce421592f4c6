"""Entanglement witnesses built from a UPB's subspace projector.

Two families.  The basic witness subtracts ``lambda_hat`` times the identity
from the UPB projector, so its expectation on the subset-mixture states is
the mixing weight minus ``lambda_hat``.  The projector witness instead
subtracts a rank-1 term along a pure entangled state of the orthocomplement,
scaled by the inverse of its largest squared Schmidt coefficient; that
coefficient bounds the overlap of any product state with the chosen state,
which keeps the witness nonnegative on separable states while widening the
detected mixing-weight interval whenever the coefficient is small enough.

``lambda_hat`` is injected by the caller (one certified constant flows
through every evaluation) rather than recomputed per witness; the searches
that produce it are stochastic, and reproducibility wins.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from bewitness.kernel import (
    BipartiteDims,
    KernelError,
    complex_vector_from_json,
    complex_vector_to_json,
    hermiticity_defect,
    matrix_from_json,
    matrix_to_json,
)
from bewitness.states import DensityOperator
from bewitness.upb import UpbSet

UNIT_NORM_TOL = 1e-12
SCHMIDT_RANK_TOL = 1e-10
COMPLEMENT_TOL = 1e-10
FAMILIES = ("basic", "projector")


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Nonincreasing Schmidt coefficients of a bipartite pure state."""

    coefficients: np.ndarray
    rank: int

    @property
    def gamma_sq(self) -> float:
        """Square of the largest coefficient: the product-overlap bound."""
        return float(self.coefficients[0] ** 2)


@dataclass(frozen=True)
class WitnessSpec:
    """Hermitian witness operator plus the data it was assembled from."""

    operator: np.ndarray
    family: str
    lambda_hat: float
    detection_threshold: float
    dims: BipartiteDims
    phi: np.ndarray | None = field(default=None)
    gamma_sq: float | None = field(default=None)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown witness family {self.family!r}")
        op = np.asarray(self.operator, dtype=np.complex128)
        defect = hermiticity_defect(op)
        if defect >= 1e-12:
            raise ValueError(f"witness operator is not Hermitian (defect {defect:.3e})")
        op.setflags(write=False)
        object.__setattr__(self, "operator", op)


def schmidt(psi: np.ndarray, dims: BipartiteDims,
            rank_tol: float = SCHMIDT_RANK_TOL) -> SchmidtSpectrum:
    """Schmidt coefficients of a composite unit vector.

    Singular values of the ``d_a x d_b`` coefficient matrix obtained by
    reshaping the vector; their squares sum to 1 and the count above
    ``rank_tol`` is the Schmidt rank.
    """
    v = np.asarray(psi, dtype=np.complex128).ravel()
    if v.size != dims.total:
        raise KernelError(f"vector length {v.size} does not match dims {dims.total}")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > UNIT_NORM_TOL:
        raise ValueError(f"input must be a unit vector (norm {norm:.12f})")
    coeffs = np.linalg.svd(v.reshape(dims.d_a, dims.d_b), compute_uv=False)
    rank = int(np.sum(coeffs > rank_tol))
    return SchmidtSpectrum(coeffs, rank)


def basic_witness(s: UpbSet, lambda_hat: float) -> WitnessSpec:
    """UPB projector minus ``lambda_hat`` times the identity.

    Nonnegative on every separable state when ``lambda_hat`` does not exceed
    the true minimal product overlap; detects the subset mixtures for mixing
    weights below ``lambda_hat``.
    """
    if lambda_hat <= 0.0:
        raise ValueError(f"lambda_hat must be positive, got {lambda_hat}")
    op = s.subspace_projector().matrix - lambda_hat * np.eye(s.dims.total)
    return WitnessSpec(op, "basic", float(lambda_hat), float(lambda_hat), s.dims)


def witness_value(w: WitnessSpec, rho: DensityOperator) -> float:
    """Real expectation value ``Tr(W rho)``."""
    if w.dims != rho.dims:
        raise KernelError(f"witness dims {w.dims} do not match state dims {rho.dims}")
    value = np.trace(w.operator @ rho.matrix)
    if abs(value.imag) > 1e-12:
        raise ValueError(f"expectation has imaginary part {value.imag:.3e}")
    return float(value.real)


def maximally_entangled_complement_state(s: UpbSet) -> np.ndarray:
    """Default rank-1 direction: the maximally entangled vector pushed into
    the UPB's orthocomplement and renormalized."""
    d = min(s.dims.d_a, s.dims.d_b)
    phi = np.zeros(s.dims.total, dtype=np.complex128)
    for i in range(d):
        phi[s.dims.composite_index(i, i)] = 1.0 / np.sqrt(d)
    complement = s.subspace_projector().complement()
    projected = complement.matrix @ phi
    norm = np.linalg.norm(projected)
    if norm < 1e-12:
        raise ValueError("the maximally entangled vector is orthogonal to the complement")
    return projected / norm


def projector_witness(s: UpbSet, lambda_hat: float,
                      phi: np.ndarray | None = None) -> WitnessSpec:
    """UPB projector minus a scaled rank-1 term along a complement state.

    ``phi`` must lie in the orthocomplement of the UPB's span (default: the
    renormalized projection of the maximally entangled vector).  The rank-1
    scale is ``lambda_hat`` over the largest squared Schmidt coefficient, and
    the detected mixing-weight interval is
    ``[0, lambda_hat / (gamma_sq * (total - n) + lambda_hat))``.
    """
    if lambda_hat <= 0.0:
        raise ValueError(f"lambda_hat must be positive, got {lambda_hat}")
    if phi is None:
        phi = maximally_entangled_complement_state(s)
    phi = np.asarray(phi, dtype=np.complex128).ravel()
    norm = np.linalg.norm(phi)
    if abs(norm - 1.0) > UNIT_NORM_TOL:
        raise ValueError(f"phi must be a unit vector (norm {norm:.12f})")
    p_s = s.subspace_projector()
    leakage = float(np.linalg.norm(p_s.matrix @ phi))
    if leakage >= COMPLEMENT_TOL:
        raise ValueError(f"phi is not in the UPB's orthocomplement (|P phi| = {leakage:.3e})")
    spectrum = schmidt(phi, s.dims)
    if spectrum.rank < 2:
        warnings.warn("phi is a product state; the resulting witness is weaker "
                      "than the basic one (gamma_sq = 1)")
    gamma_sq = spectrum.gamma_sq
    total, n = s.dims.total, s.size
    op = p_s.matrix - (lambda_hat / gamma_sq) * np.outer(phi, phi.conj())
    threshold = lambda_hat / (gamma_sq * (total - n) + lambda_hat)
    return WitnessSpec(op, "projector", float(lambda_hat), float(threshold),
                       s.dims, phi=phi, gamma_sq=gamma_sq)


def better_witness_condition(gamma_sq: float, lambda_hat: float,
                             total_dim: int, upb_size: int) -> bool:
    """Whether the projector witness detects a strictly larger interval.

    True exactly when ``gamma_sq < (1 - lambda_hat) / (total_dim - upb_size)``
    (strict inequality, matching the direct comparison of the thresholds).
    """
    if gamma_sq <= 0.0 or lambda_hat <= 0.0:
        raise ValueError("gamma_sq and lambda_hat must be positive")
    if upb_size >= total_dim:
        raise ValueError("the UPB must span a proper subspace")
    return bool(gamma_sq < (1.0 - lambda_hat) / (total_dim - upb_size))


# ---------------------------------------------------------------------------
# Witness file format


def witness_to_json(w: WitnessSpec, upb_ref: str | None = None) -> dict:
    return {
        "family": w.family,
        "lambda_hat": w.lambda_hat,
        "detection_threshold": w.detection_threshold,
        "gamma_sq": w.gamma_sq,
        "dims": w.dims.as_list(),
        "operator": matrix_to_json(w.operator),
        "phi": None if w.phi is None else complex_vector_to_json(w.phi),
        "upb": upb_ref,
    }


def witness_from_json(obj: dict) -> WitnessSpec:
    dims = BipartiteDims(int(obj["dims"][0]), int(obj["dims"][1]))
    phi = obj.get("phi")
    return WitnessSpec(
        matrix_from_json(obj["operator"]),
        obj["family"],
        float(obj["lambda_hat"]),
        float(obj["detection_threshold"]),
        dims,
        phi=None if phi is None else complex_vector_from_json(phi),
        gamma_sq=None if obj.get("gamma_sq") is None else float(obj["gamma_sq"]),
    )

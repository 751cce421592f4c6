"""Range-criterion checks and product states inside subspaces.

A separable state's range must be spanned by product vectors whose
B-conjugated partners span the range of the partial transpose; violating
that is a proof of entanglement.  This module enumerates product states in a
subspace by multi-start seesaw maximization of the subspace fidelity, runs
the spanning checks, and tests separability head-on by asking a nonnegative
least-squares solver for a convex decomposition of the state over a pool of
product states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from bewitness import seesaw
from bewitness.kernel import (
    BipartiteDims,
    KernelError,
    SubspaceBasis,
    nnls,
    orthonormal_range,
    partial_transpose,
)
from bewitness.states import DensityOperator
from bewitness.upb import ProductVector, SubspaceProjector, tiles_upb

FIDELITY_TOL = 1e-9
CLUSTER_TOL = 1e-6
IN_RANGE_TOL = 1e-9
SPAN_RANK_TOL = 1e-10
RESIDUAL_TOL = 1e-8
INFEASIBILITY_FLOOR = 1e-4
WEIGHT_SUM_TOL = 1e-8
FIND_STARTS = 2000


@dataclass(frozen=True)
class ProductStateFindings:
    """Distinct product states located inside a subspace."""

    states: tuple[ProductVector, ...]
    overlaps: tuple[float, ...]
    cluster_count: int


@dataclass(frozen=True)
class RcVerdict:
    """Outcome of the range-criterion spanning checks."""

    passed: bool
    range_dim: int
    product_span_rank: int
    pt_range_dim: int
    conjugated_span_rank: int


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of the convex-decomposition least-squares test."""

    verdict: str  # "feasible" | "infeasible" | "inconclusive"
    weights: np.ndarray
    residual: float
    weight_sum: float

    @property
    def feasible(self) -> bool:
        return self.verdict == "feasible"


def tiles_range_product_basis() -> list[ProductVector]:
    """Orthonormal product basis of the orthocomplement of Tiles members 2-5.

    Together with the first Tiles member these five states exhaust the
    product states of that five-dimensional subspace, which is the range of
    every state mixing member 1 with the complement state.
    """
    s2, s3, s6 = 1 / np.sqrt(2.0), 1 / np.sqrt(3.0), 1 / np.sqrt(6.0)
    e = [np.eye(3, dtype=np.complex128)[i] for i in range(3)]
    return [
        ProductVector(s2 * (e[1] - e[2]), e[1]),
        ProductVector(s2 * (e[1] + e[2]), s2 * (e[0] - e[1])),
        ProductVector(s6 * (2 * e[0] - e[1] - e[2]), s2 * (e[0] + e[1])),
        ProductVector(s3 * (e[0] + e[1] + e[2]), s6 * (e[0] + e[1] - 2 * e[2])),
        ProductVector(s6 * (e[0] + e[1] - 2 * e[2]), e[2]),
    ]


def computational_product_basis(dims: BipartiteDims) -> list[ProductVector]:
    """All ``|i> (x) |j>`` states; a full product basis of the space."""
    eye_a = np.eye(dims.d_a, dtype=np.complex128)
    eye_b = np.eye(dims.d_b, dtype=np.complex128)
    return [ProductVector(eye_a[i], eye_b[j])
            for i in range(dims.d_a) for j in range(dims.d_b)]


def _canonical_phase(v: np.ndarray) -> np.ndarray:
    """Rotate a global phase so the largest-magnitude entry is real positive."""
    pivot = v[int(np.argmax(np.abs(v)))]
    if abs(pivot) == 0.0:
        return v
    return v * (pivot.conj() / abs(pivot))


def find_product_states(
    p: SubspaceProjector,
    starts: int = FIND_STARTS,
    tol: float = seesaw.DEFAULT_TOL,
    seed: int = 42,
    fidelity_tol: float = FIDELITY_TOL,
    cluster_tol: float = CLUSTER_TOL,
) -> ProductStateFindings:
    """Distinct product states with subspace fidelity ``> 1 - fidelity_tol``.

    Multi-start seesaw maximization of ``<psi x phi| P |psi x phi>``.
    Converged endpoints above the fidelity bar are clustered by their
    phase-invariant composite overlap (same cluster when it exceeds
    ``1 - cluster_tol``); representatives are collected in a deterministic
    sweep ordered by fidelity, then restart index.  Enumeration completeness
    is evidence from restart count, not proof.
    """
    total = p.dims.total
    if p.trace >= total - 0.5:
        raise ValueError("the projector covers the whole space; every product "
                         "state is trivially inside")
    runs = seesaw.product_overlap_search(
        p.matrix, p.dims, starts=starts, tol=tol, find_max=True, seed=seed
    )
    hits = [r for r in runs if r.value > 1.0 - fidelity_tol]
    hits.sort(key=lambda r: (-r.value, r.restart_index))
    reps: list[ProductVector] = []
    rep_rows = np.empty((len(hits), total), dtype=np.complex128)
    overlaps: list[float] = []
    for run in hits:
        composite = np.kron(run.psi, run.phi)
        k = len(reps)
        if k and np.max(np.abs(rep_rows[:k] @ composite)) > 1.0 - cluster_tol:
            continue
        reps.append(ProductVector(_canonical_phase(run.psi), _canonical_phase(run.phi)))
        rep_rows[k] = composite.conj()
        overlaps.append(run.value)
    return ProductStateFindings(tuple(reps), tuple(overlaps), len(reps))


def _span_rank(vectors: list[np.ndarray], rank_tol: float = SPAN_RANK_TOL) -> int:
    if not vectors:
        return 0
    singular = np.linalg.svd(np.array(vectors), compute_uv=False)
    if singular.size == 0 or singular[0] == 0.0:
        return 0
    return int(np.sum(singular > rank_tol * singular[0]))


def _all_in_range(vectors: list[np.ndarray], basis: SubspaceBasis, tol: float) -> bool:
    if not vectors:
        return False
    proj = basis.projector()
    eye = np.eye(proj.shape[0])
    return all(np.linalg.norm((eye - proj) @ v) < tol for v in vectors)


def range_criterion_check(
    rho: DensityOperator,
    candidates: list[ProductVector],
    in_range_tol: float = IN_RANGE_TOL,
    rank_tol: float = SPAN_RANK_TOL,
) -> RcVerdict:
    """Spanning checks of the range criterion for a candidate product family.

    Passes when every candidate composite lies in the state's range and the
    family spans it, and the B-conjugated composites do the same for the
    range of the partial transpose.  An empty candidate list cannot span
    anything and yields a failed verdict.
    """
    for c in candidates:
        if c.dims != rho.dims:
            raise KernelError(f"candidate dims {c.dims} do not match state dims {rho.dims}")
    range_basis = orthonormal_range(rho.matrix, dims=rho.dims)
    pt_basis = orthonormal_range(partial_transpose(rho.matrix, rho.dims), dims=rho.dims)
    plain = [c.composite() for c in candidates]
    conjugated = [c.conjugated_composite() for c in candidates]
    plain_rank = _span_rank(plain, rank_tol)
    conj_rank = _span_rank(conjugated, rank_tol)
    passed = (
        bool(candidates)
        and plain_rank == range_basis.dimension
        and conj_rank == pt_basis.dimension
        and _all_in_range(plain, range_basis, in_range_tol)
        and _all_in_range(conjugated, pt_basis, in_range_tol)
    )
    return RcVerdict(passed, range_basis.dimension, plain_rank,
                     pt_basis.dimension, conj_rank)


def hermitian_frobenius_vector(matrix: np.ndarray) -> np.ndarray:
    """Real coordinates of a Hermitian matrix preserving the Frobenius norm.

    Diagonal entries, then ``sqrt(2)``-scaled real and imaginary parts of the
    upper triangle; Euclidean distances of these vectors equal Frobenius
    distances of the matrices, so least-squares residuals keep their meaning.
    """
    m = np.asarray(matrix, dtype=np.complex128)
    d = m.shape[0]
    upper = np.triu_indices(d, k=1)
    root2 = np.sqrt(2.0)
    return np.concatenate([
        np.real(np.diagonal(m)),
        root2 * np.real(m[upper]),
        root2 * np.imag(m[upper]),
    ])


def convex_decomposition_feasibility(
    rho: DensityOperator,
    pool: list[ProductVector],
    residual_tol: float = RESIDUAL_TOL,
    infeasibility_floor: float = INFEASIBILITY_FLOOR,
    weight_sum_tol: float = WEIGHT_SUM_TOL,
) -> FeasibilityResult:
    """Best nonnegative mixture of pool projectors approximating a state.

    Solves ``min |sum_i x_i |s_i><s_i| - rho|_F`` over ``x >= 0`` and grades
    the residual with a two-sided deadband: feasible below ``residual_tol``
    (with weights summing to 1), infeasible above ``infeasibility_floor``,
    inconclusive in between.  A macroscopic residual certifies that no convex
    decomposition over the pool exists.
    """
    if not pool:
        raise ValueError("the product-state pool must be nonempty")
    for s in pool:
        if s.dims != rho.dims:
            raise KernelError(f"pool state dims {s.dims} do not match state dims {rho.dims}")
    columns = []
    for s in pool:
        v = s.composite()
        columns.append(hermitian_frobenius_vector(np.outer(v, v.conj())))
    a = np.column_stack(columns)
    b = hermitian_frobenius_vector(rho.matrix)
    solution = nnls(a, b)
    weight_sum = float(np.sum(solution.x))
    if solution.residual < residual_tol and abs(weight_sum - 1.0) < weight_sum_tol:
        verdict = "feasible"
    elif solution.residual > infeasibility_floor:
        verdict = "infeasible"
    else:
        verdict = "inconclusive"
    return FeasibilityResult(verdict, solution.x, solution.residual, weight_sum)


def six_state_pool() -> list[ProductVector]:
    """The five-state product basis plus the first Tiles member.

    Exactly the product states living in the range of the member-1 mixtures;
    the natural pool for their convex-decomposition test.
    """
    return tiles_range_product_basis() + [tiles_upb().members[0]]


# ---------------------------------------------------------------------------
# Findings file format


def findings_to_json(findings: ProductStateFindings, projector_trace: float) -> dict:
    from bewitness.kernel import complex_vector_to_json

    return {
        "projector_trace": float(projector_trace),
        "clusters": [
            {
                "psiA": complex_vector_to_json(state.psi_a),
                "phiB": complex_vector_to_json(state.phi_b),
                "fidelity": float(fidelity),
            }
            for state, fidelity in zip(findings.states, findings.overlaps)
        ],
    }


def findings_from_json(obj: dict) -> ProductStateFindings:
    from bewitness.kernel import complex_vector_from_json

    states = tuple(
        ProductVector(complex_vector_from_json(c["psiA"]), complex_vector_from_json(c["phiB"]))
        for c in obj["clusters"]
    )
    overlaps = tuple(float(c["fidelity"]) for c in obj["clusters"])
    return ProductStateFindings(states, overlaps, len(states))

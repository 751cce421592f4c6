"""Multi-start alternating optimization over product states.

The objective ``f(psi, phi) = <psi x phi| P |psi x phi>`` is extremized by
alternating closed-form eigenvector updates (one factor fixed, the other set
to the extreme eigenvector of the contracted matrix).  Each half-step is
monotone, so a run converges; the landscape is multimodal, so many seeded
restarts are taken and reduced by a running extremum.  Restart starting
points come from the uniform distribution on complex unit vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from bewitness import backends
from bewitness.kernel import BipartiteDims

DEFAULT_STARTS = 200
DEFAULT_TOL = 1e-12
MAX_ALTERNATIONS = 500


def random_unit_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    """One unit vector uniform on the complex sphere (normalized Gaussian)."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_product_states(dims: BipartiteDims, count: int,
                          rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Batch of product-state factors, shapes ``(count, d_a)`` and ``(count, d_b)``."""
    psis = rng.standard_normal((count, dims.d_a)) + 1j * rng.standard_normal((count, dims.d_a))
    phis = rng.standard_normal((count, dims.d_b)) + 1j * rng.standard_normal((count, dims.d_b))
    psis /= np.linalg.norm(psis, axis=1, keepdims=True)
    phis /= np.linalg.norm(phis, axis=1, keepdims=True)
    return psis, phis


@dataclass(frozen=True)
class SeesawRun:
    """Converged endpoint of one restart."""

    value: float
    psi: np.ndarray
    phi: np.ndarray
    alternations: int
    restart_index: int


def product_overlap_search(
    p_matrix: np.ndarray,
    dims: BipartiteDims,
    *,
    starts: int = DEFAULT_STARTS,
    tol: float = DEFAULT_TOL,
    find_max: bool = False,
    seed: int = 42,
    max_alternations: int = MAX_ALTERNATIONS,
) -> list[SeesawRun]:
    """Run ``starts`` independent restarts and return every converged endpoint.

    Restarts are independent, so results do not depend on any execution
    schedule; reductions (running minimum, clustering) are done by callers.
    With a fixed seed the first ``k`` restarts of a longer search coincide
    with a ``starts=k`` search, which makes the reduced extremum monotone in
    ``starts``.
    """
    if starts < 1:
        raise ValueError("at least one restart is required")
    p = np.ascontiguousarray(p_matrix, dtype=np.complex128)
    rng = np.random.default_rng(seed)
    runs: list[SeesawRun] = []
    for index in range(starts):
        psi0 = random_unit_vector(rng, dims.d_a)
        phi0 = random_unit_vector(rng, dims.d_b)
        value, psi, phi, alternations = backends.seesaw_extremize(
            p, dims.d_a, dims.d_b, psi0, phi0, find_max, tol, max_alternations
        )
        runs.append(SeesawRun(float(value), psi, phi, int(alternations), index))
    return runs


def best_run(runs: list[SeesawRun], find_max: bool = False) -> SeesawRun:
    """Extremal run; ties resolved toward the lowest restart index."""
    if find_max:
        return max(runs, key=lambda r: (r.value, -r.restart_index))
    return min(runs, key=lambda r: (r.value, r.restart_index))

"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they
stream; the whole suite is designed to stay well under ten minutes on a
laptop with either backend.
"""

import contextlib

import numpy as np
import pytest

from bewitness import (
    basic_witness,
    better_witness_condition,
    computational_product_basis,
    convex_decomposition_feasibility,
    find_product_states,
    min_product_overlap,
    padded_real_upb,
    partial_transpose,
    projector_witness,
    range_criterion_check,
    real_grid_overlap_minimum,
    rho_be,
    rho_g,
    schmidt,
    six_state_pool,
    spectrum_and_rank,
    tiles_range_product_basis,
    tiles_upb,
    witness_value,
)
from bewitness.seesaw import random_product_states, random_unit_vector
from bewitness.upb import SubspaceProjector, projector
from bewitness.witness import maximally_entangled_complement_state

from test_rangecrit import member5_product_states


@contextlib.contextmanager
def criterion(number: int, description: str):
    try:
        yield
    except Exception:
        print(f"[FAIL] criterion {number:2d}: {description}")
        raise
    print(f"[PASS] criterion {number:2d}: {description}")


@pytest.fixture(scope="module")
def padded5():
    return padded_real_upb(5)


@pytest.fixture(scope="module")
def lambda_tiles(tiles):
    value, _ = min_product_overlap(tiles.subspace_projector(), starts=200, seed=42)
    return value


@pytest.fixture(scope="module")
def lambda_padded4(padded4):
    value, _ = min_product_overlap(padded4.subspace_projector(), starts=200, seed=42)
    return value


def _subset_sizes(upb_size: int) -> list[int]:
    return sorted({1, upb_size - 4, upb_size})


def _member_range_projector(tiles, member_index: int) -> SubspaceProjector:
    rest = [tiles.members[i].composite() for i in range(5) if i != member_index]
    return projector(rest, tiles.dims).complement()


def test_criterion_1_tiles_construction_fidelity(tiles):
    with criterion(1, "Tiles Gram, product-basis orthonormality, projector identity"):
        comp = tiles.composite_matrix()
        assert np.max(np.abs(comp.conj() @ comp.T - np.eye(5))) < 1e-12

        basis = np.array([s.composite() for s in tiles_range_product_basis()])
        assert np.max(np.abs(basis.conj() @ basis.T - np.eye(5))) < 1e-12

        lhs = np.eye(9, dtype=complex)
        for m in tiles.members[1:]:
            v = m.composite()
            lhs -= np.outer(v, v.conj())
        rhs = sum(np.outer(s.composite(), s.composite().conj())
                  for s in tiles_range_product_basis())
        assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_criterion_2_separability_boundary(tiles):
    with criterion(2, "NNLS feasibility flips at mixing weight 1/5"):
        pool = six_state_pool()
        for k in range(81):
            omega = 0.005 * k
            result = convex_decomposition_feasibility(rho_g(tiles, [1], omega), pool)
            if omega <= 0.195 + 1e-12:
                assert result.residual > 1e-4, f"expected infeasible at omega={omega}"
                assert result.verdict == "infeasible"
            else:
                assert result.residual < 1e-8, f"expected feasible at omega={omega}"
                assert result.feasible
        result = convex_decomposition_feasibility(rho_g(tiles, [1], 0.5), pool)
        np.testing.assert_allclose(result.weights[:5], 0.125, atol=1e-8)
        assert abs(result.weights[5] - 0.375) < 1e-8


def test_criterion_3_ppt_invariance(tiles, padded4):
    with criterion(3, "subset mixtures invariant under partial transposition"):
        for upb_set in (tiles, padded4):
            for size in _subset_sizes(upb_set.size):
                g = list(range(1, size + 1))
                for k in range(11):
                    omega = 0.1 * k
                    rho = rho_g(upb_set, g, omega)
                    pt = partial_transpose(rho.matrix, rho.dims)
                    assert np.max(np.abs(pt - rho.matrix)) < 1e-12


def test_criterion_4_witness_trace_identity_and_lambda_stability(
        tiles, padded4, lambda_tiles, lambda_padded4):
    with criterion(4, "trace identity on the weight grid; overlap minimum stable"):
        for upb_set, lam in ((tiles, lambda_tiles), (padded4, lambda_padded4)):
            spec = basic_witness(upb_set, lam)
            for size in _subset_sizes(upb_set.size):
                g = list(range(1, size + 1))
                for k in range(11):
                    omega = 0.1 * k
                    value = witness_value(spec, rho_g(upb_set, g, omega))
                    assert abs(value - (omega - lam)) < 1e-10

        p = tiles.subspace_projector()
        values = [min_product_overlap(p, starts=200, seed=seed)[0]
                  for seed in (41, 42, 43, 44, 45)]
        assert max(values) - min(values) < 1e-6

        grid_value = real_grid_overlap_minimum(p, step=0.01)
        assert abs(grid_value - lambda_tiles) < 1e-4


def test_criterion_5_witness_positivity_on_product_states(
        tiles, padded4, lambda_tiles, lambda_padded4):
    with criterion(5, "both witness families nonnegative on 10^4 product states"):
        for upb_set, lam, seed in ((tiles, lambda_tiles, 101), (padded4, lambda_padded4, 102)):
            specs = (basic_witness(upb_set, lam), projector_witness(upb_set, lam))
            psis, phis = random_product_states(upb_set.dims, 10_000,
                                               np.random.default_rng(seed))
            composites = np.einsum("ni,nj->nij", psis, phis).reshape(10_000, -1)
            for spec in specs:
                values = np.einsum("ni,ij,nj->n", composites.conj(),
                                   spec.operator, composites).real
                assert float(values.min()) >= -1e-8


def test_criterion_6_product_state_enumeration(tiles):
    with criterion(6, "exactly six, zero, and six product-state clusters"):
        findings = find_product_states(_member_range_projector(tiles, 0),
                                       starts=2000, seed=42)
        assert findings.cluster_count == 6
        targets = [s.composite() for s in six_state_pool()]
        matched = set()
        for state in findings.states:
            fids = [abs(np.vdot(state.composite(), t)) ** 2 for t in targets]
            best = int(np.argmax(fids))
            assert fids[best] > 1.0 - 1e-8
            matched.add(best)
        assert matched == set(range(6))

        empty = find_product_states(tiles.subspace_projector().complement(),
                                    starts=2000, seed=42)
        assert empty.cluster_count == 0

        findings5 = find_product_states(_member_range_projector(tiles, 4),
                                        starts=2000, seed=42)
        assert findings5.cluster_count == 6
        targets5 = [s.composite() for s in member5_product_states()]
        matched5 = set()
        for state in findings5.states:
            fids = [abs(np.vdot(state.composite(), t)) ** 2 for t in targets5]
            best = int(np.argmax(fids))
            assert fids[best] > 1.0 - 1e-8
            matched5.add(best)
        assert matched5 == set(range(6))


def test_criterion_7_range_criterion(tiles, padded4):
    with criterion(7, "range criterion passes and fails where it must"):
        basis = tiles_range_product_basis()
        for omega in (0.05, 0.15, 0.5):
            verdict = range_criterion_check(rho_g(tiles, [1], omega), basis)
            assert verdict.passed, f"expected pass at omega={omega}"

        # eight-member subset: the leftover members span |3> (x) C^4, whose
        # orthocomplement the search must fill with spanning product states
        g8 = list(range(1, 9))
        rest = [padded4.members[i - 1].composite() for i in range(9, 13)]
        generic_range = projector(rest, padded4.dims).complement()
        candidates8 = list(find_product_states(generic_range, starts=2000, seed=42).states)
        verdict8 = range_criterion_check(rho_g(padded4, g8, 0.01), candidates8)
        assert verdict8.passed
        assert verdict8.range_dim == 12

        g12 = list(range(1, 13))
        verdict12 = range_criterion_check(rho_g(padded4, g12, 0.01),
                                          computational_product_basis(padded4.dims))
        assert verdict12.passed
        assert verdict12.range_dim == 16

        for upb_set in (tiles, padded4):
            rho = rho_be(upb_set)
            from bewitness.kernel import orthonormal_range
            range_basis = orthonormal_range(rho.matrix, dims=rho.dims)
            p = SubspaceProjector(range_basis.projector(), rho.dims)
            found = find_product_states(p, starts=800, seed=42)
            verdict = range_criterion_check(rho, list(found.states))
            assert not verdict.passed
            assert verdict.product_span_rank < verdict.range_dim


def test_criterion_8_rank_formula(tiles, padded4):
    with criterion(8, "rank equals complement dimension plus subset size"):
        for upb_set in (tiles, padded4):
            total, n = upb_set.dims.total, upb_set.size
            for size in _subset_sizes(n):
                g = list(range(1, size + 1))
                for omega in (0.01, 0.1):
                    _, rank = spectrum_and_rank(rho_g(upb_set, g, omega))
                    assert rank == (total - n) + size
            _, full_rank = spectrum_and_rank(rho_g(upb_set, list(range(1, n + 1)), 0.1))
            assert full_rank == total


def test_criterion_9_padded_upb(padded4, padded5):
    with criterion(9, "padded catalogs: cardinality, certificates, verbatim padding"):
        from bewitness import unextendibility_certificate

        for d, upb_set in ((3, tiles_upb()), (4, padded4), (5, padded5)):
            assert upb_set.size == d * d - 4
            cert = unextendibility_certificate(upb_set, starts=200, seed=42)
            assert cert.is_upb_evidence
            assert cert.lambda_hat > 1e-3

        expected = [(0, 3), (1, 3), (2, 3), (3, 3), (3, 0), (3, 1), (3, 2)]
        for member, (i, j) in zip(padded4.members[5:], expected):
            psi = np.zeros(4, dtype=complex)
            psi[i] = 1.0
            phi = np.zeros(4, dtype=complex)
            phi[j] = 1.0
            np.testing.assert_array_equal(member.psi_a, psi)
            np.testing.assert_array_equal(member.phi_b, phi)


def test_criterion_10_projector_witness(tiles, lambda_tiles):
    with criterion(10, "projector-witness threshold, comparison flag, overlap bound"):
        complement = tiles.subspace_projector().complement()
        rng = np.random.default_rng(314)
        total, n = 9, 5

        spec = projector_witness(tiles, lambda_tiles)
        expected = lambda_tiles / (spec.gamma_sq * (total - n) + lambda_tiles)
        assert abs(spec.detection_threshold - expected) < 1e-12

        for _ in range(100):
            phi = complement.matrix @ random_unit_vector(rng, total)
            phi = phi / np.linalg.norm(phi)
            spec = projector_witness(tiles, lambda_tiles, phi=phi)
            expected = lambda_tiles / (spec.gamma_sq * (total - n) + lambda_tiles)
            assert abs(spec.detection_threshold - expected) < 1e-12
            flag = better_witness_condition(spec.gamma_sq, lambda_tiles, total, n)
            assert flag == (spec.detection_threshold > lambda_tiles)

        for _ in range(1000):
            psi = random_unit_vector(rng, total)
            gamma_sq = schmidt(psi, tiles.dims).gamma_sq
            a = random_unit_vector(rng, 3)
            b = random_unit_vector(rng, 3)
            overlap = abs(np.vdot(psi, np.kron(a, b))) ** 2
            assert overlap <= gamma_sq + 1e-12

        # the default complement direction stays entangled, as required
        phi = maximally_entangled_complement_state(tiles)
        assert schmidt(phi, tiles.dims).rank >= 2

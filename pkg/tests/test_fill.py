import math

import numpy as np
import pytest

from tetrafill import (
    FourSpinState,
    InvalidGeometry,
    NoConvergence,
    SigmaSet,
    Spin,
    bipartition_entropies,
    entropic_fill,
    equation_residual,
    fill_from_entropies,
    solve_sigmas,
    tetrahedron_volume,
)
from tetrafill.entanglement import BipartitionEntropies

from conftest import ghz_state, random_state, singlet_pair_state

HALF = Spin(1)


def entropies_from(one_to_other, two_to_two):
    return BipartitionEntropies(
        one_to_other=np.asarray(one_to_other, dtype=float),
        two_to_two=np.asarray(two_to_two, dtype=float),
        raw_one_to_other=np.asarray(one_to_other, dtype=float),
        raw_two_to_two=np.asarray(two_to_two, dtype=float),
    )


class TestSolveSigmas:
    def test_equal_entropies_give_regular_solution(self):
        ent = entropies_from([1, 1, 1, 1], [0.5, 0.5, 0.5])
        sigmas = solve_sigmas(ent)
        assert np.allclose(sigmas.sigma, 1 / 3, atol=1e-12)
        assert equation_residual(ent, sigmas) <= 1e-10

    def test_all_zero_entropies_short_circuit(self):
        ent = entropies_from([0, 0, 0, 0], [0, 0, 0])
        sigmas = solve_sigmas(ent)
        assert np.allclose(sigmas.sigma, 0.0)
        assert sigmas.lam == 0.0

    def test_singlet_pattern_closed_form(self):
        # symmetric ansatz a = sigma_12 = sigma_34, b = sigma_13 = sigma_24,
        # c = sigma_14 = sigma_23: the face equations give a + b + c = 1, the
        # vanishing pairing gives a = b + c, the equal pair forces b = c
        ent = entropies_from([1, 1, 1, 1], [0.0, 1.0, 1.0])
        sigmas = solve_sigmas(ent)
        assert np.allclose(sigmas.sigma, [0.5, 0.25, 0.25, 0.25, 0.25, 0.5], atol=1e-8)
        assert sigmas.lam == pytest.approx(0.5, abs=1e-8)

    def test_nonneg_tolerance_validated(self):
        with pytest.raises(ValueError):
            solve_sigmas(entropies_from([1, 1, 1, 1], [0.5, 0.5, 0.5]), tolerance=0.0)

    def test_unsolvable_pattern_raises_no_convergence(self):
        # all pairing entropies zero with non-zero faces cannot be satisfied
        ent = entropies_from([1, 1, 1, 1], [0.0, 0.0, 0.0])
        with pytest.raises(NoConvergence) as err:
            solve_sigmas(ent, max_restarts=2)
        assert err.value.best_residual > 0

    def test_solutions_are_non_negative(self):
        rng = np.random.default_rng(77)
        for _ in range(100):
            ent = bipartition_entropies(random_state(HALF, rng))
            sigmas = solve_sigmas(ent, rng=rng)
            assert np.all(sigmas.sigma >= 0)
            assert sigmas.lam >= 0


class TestTetrahedronVolume:
    def test_regular_sigma_volume(self):
        sigmas = SigmaSet(np.full(6, 1 / 3), 1.0)
        expected = (2 * math.sqrt(2) / 3) * 27 ** (-1 / 4)
        assert tetrahedron_volume(sigmas) == pytest.approx(expected, rel=1e-14)
        fill = (3 ** (7 / 6) / 2) * tetrahedron_volume(sigmas) ** (2 / 3)
        assert fill == pytest.approx(1.0, abs=1e-12)

    def test_flat_tetrahedron_has_zero_volume(self):
        sigmas = SigmaSet(np.array([0.5, 0.25, 0.25, 0.25, 0.25, 0.5]), 0.5)
        assert tetrahedron_volume(sigmas) == pytest.approx(0.0, abs=1e-15)

    def test_homogeneity(self):
        rng = np.random.default_rng(3)
        base = rng.uniform(0.05, 0.4, size=6)
        # sorted values keep the opposite-edge area combinations non-negative
        base = np.sort(base)
        v0 = tetrahedron_volume(SigmaSet(base, 1.0))
        for c in (0.5, 2.0):
            vc = tetrahedron_volume(SigmaSet(c * base, 1.0))
            assert vc == pytest.approx(c**1.5 * v0, rel=1e-12)

    def test_invalid_geometry_rejected(self):
        sigmas = SigmaSet(np.array([1.0, 1e-4, 1e-4, 1e-4, 1e-4, 1.0]), 1.0)
        with pytest.raises(InvalidGeometry):
            tetrahedron_volume(sigmas)


class TestEntropicFill:
    def test_ghz_reaches_maximal_fill(self):
        result = entropic_fill(ghz_state())
        assert result.fill == pytest.approx(1.0, abs=1e-6)
        assert result.residual <= 1e-10

    def test_product_state_has_zero_fill(self):
        amps = np.zeros((2, 2, 2, 2), dtype=complex)
        amps[0, 1, 1, 0] = 1.0
        result = entropic_fill(FourSpinState((HALF,) * 4, amps))
        assert result.fill == 0.0

    def test_singlet_pair_is_biseparable(self):
        result = entropic_fill(singlet_pair_state())
        assert result.fill == pytest.approx(0.0, abs=1e-6)
        assert np.allclose(
            result.sigmas.sigma, [0.5, 0.25, 0.25, 0.25, 0.25, 0.5], atol=1e-8
        )
        assert result.sigmas.lam == pytest.approx(0.5, abs=1e-8)

    def test_fill_stays_in_unit_interval(self):
        rng = np.random.default_rng(50)
        for _ in range(200):
            result = entropic_fill(random_state(HALF, rng), rng=rng)
            assert -1e-12 <= result.fill <= 1 + 1e-9

    def test_residuals_near_machine_precision(self):
        rng = np.random.default_rng(51)
        for _ in range(300):
            result = entropic_fill(random_state(HALF, rng), rng=rng)
            assert result.residual <= 1e-10

    def test_slot_permutation_leaves_fill_unchanged(self):
        rng = np.random.default_rng(52)
        for _ in range(20):
            state = random_state(HALF, rng)
            f0 = entropic_fill(state, rng=rng).fill
            perm = rng.permutation(4)
            permuted = FourSpinState(state.spins, np.transpose(state.amplitudes, perm))
            f1 = entropic_fill(permuted, rng=rng).fill
            assert f1 == pytest.approx(f0, abs=1e-8)

    def test_local_unitaries_leave_fill_unchanged(self):
        rng = np.random.default_rng(53)
        state = random_state(Spin(2), rng)
        f0 = entropic_fill(state, rng=rng).fill
        ds = []
        for _ in range(4):
            a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
            q, _ = np.linalg.qr(a)
            ds.append(q)
        rotated = np.einsum("ae,bf,cg,dh,efgh->abcd", *ds, state.amplitudes)
        f1 = entropic_fill(FourSpinState(state.spins, rotated), rng=rng).fill
        assert f1 == pytest.approx(f0, abs=1e-8)

    def test_invariant_states_give_equifacial_tetrahedra(self):
        from tetrafill import InvariantState, build_basis, embed

        rng = np.random.default_rng(54)
        for twice_j in (1, 2, 3):
            basis = build_basis((Spin(twice_j),) * 4)
            for _ in range(10):
                coeff = rng.normal(size=len(basis)) + 1j * rng.normal(size=len(basis))
                coeff /= np.linalg.norm(coeff)
                result = entropic_fill(embed(InvariantState(basis, coeff)), rng=rng)
                e1 = result.entropies.one_to_other
                assert np.ptp(e1) <= 1e-9
                # equal faces force three equal face sums of sigma
                faces = [
                    result.sigmas.sigma[[0, 1, 2]].sum(),
                    result.sigmas.sigma[[0, 3, 4]].sum(),
                    result.sigmas.sigma[[1, 3, 5]].sum(),
                    result.sigmas.sigma[[2, 4, 5]].sum(),
                ]
                assert np.ptp(faces) <= 1e-8

    def test_result_reports_entropies_and_diagnostics(self):
        result = fill_from_entropies(
            entropies_from([1, 1, 1, 1], [0.5, 0.5, 0.5])
        )
        assert result.restarts_used == 0
        assert result.volume > 0
        assert equation_residual(result.entropies, result.sigmas) == pytest.approx(
            result.residual, abs=1e-12
        )

import numpy as np
import pytest

from entcap import (
    ProjectiveQubitBasis,
    PureState,
    SchmidtSpectrum,
    all_bipartitions,
    apply_local_unitary,
    bipartite_capacities,
    chi,
    cluster,
    ggm,
    ghz_from_beta2,
    gm,
    haar_random_unitary,
    measure_party,
    random_pure_state,
    rvb_ferro,
    schmidt_spectrum,
    singlet,
    two_singlets,
    von_neumann_entropy,
    w,
    w2,
)
from oracles import (
    best_single_vs_rest_overlap2,
    random_product_state_overlap,
    reduced_density_eigvals,
)

# frozen from direct evaluation of -(3/4 log2 3/4 + 1/4 log2 1/4)
ENTROPY_3_4 = 0.8112781244591328


def rvb_ggm_closed_form(mu):
    """1 - max squared Schmidt coefficient of the RVB family.

    The two-vs-two splits carry the extreme coefficients (1 + mu)^2 and 4
    over the common denominator 4 + 2 mu^2, while every single-party split
    sits at 1/2; the overall maximum is max(2, 1 + mu)^2 / (4 + 2 mu^2).
    """
    return 1.0 - max(2.0, 1.0 + mu) ** 2 / (4.0 + 2.0 * mu * mu)


def extend_measured_party(post, party, ket):
    """Tensor the outcome ket back onto the measured slot (trivial extension)."""
    lifted = np.tensordot(np.asarray(ket), post.tensor(), axes=0)
    lifted = np.moveaxis(lifted, 0, party)
    return PureState(lifted.reshape(-1), (2,) * (post.n_parties + 1))


class TestVonNeumannEntropy:
    def test_maximally_mixed_qubit(self):
        assert von_neumann_entropy([0.5, 0.5]) == pytest.approx(1.0, abs=1e-12)

    def test_pure_spectrum(self):
        assert von_neumann_entropy([1.0, 0.0]) == pytest.approx(0.0, abs=1e-15)
        assert von_neumann_entropy(SchmidtSpectrum([1.0])) == 0.0

    def test_three_quarters(self):
        assert von_neumann_entropy([0.75, 0.25]) == pytest.approx(ENTROPY_3_4, abs=1e-14)

    def test_bounded_by_log_rank(self, rng):
        for _ in range(10):
            probs = rng.dirichlet(np.ones(4))
            s = von_neumann_entropy(probs)
            assert -1e-12 <= s <= np.log2(4) + 1e-12

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            von_neumann_entropy([0.3, 0.3])
        with pytest.raises(ValueError):
            von_neumann_entropy([1.2, -0.2])


class TestBipartiteCapacities:
    def test_singlet(self):
        caps = bipartite_capacities(singlet())
        assert caps.classical == pytest.approx(2.0, abs=1e-12)
        assert caps.quantum == pytest.approx(1.0, abs=1e-12)
        assert caps.entanglement == pytest.approx(1.0, abs=1e-12)

    def test_product(self):
        caps = bipartite_capacities(PureState([1, 0, 0, 0], (2, 2)))
        assert caps == pytest.approx((1.0, 0.0, 0.0), abs=1e-12)

    def test_partially_entangled(self):
        state = PureState([np.sqrt(3) / 2, 0, 0, 0.5], (2, 2))
        caps = bipartite_capacities(state)
        assert caps.classical == pytest.approx(1 + ENTROPY_3_4, abs=1e-12)
        assert caps.quantum == pytest.approx(ENTROPY_3_4, abs=1e-12)
        assert caps.entanglement == pytest.approx(ENTROPY_3_4, abs=1e-12)

    def test_rejects_wrong_party_count(self):
        with pytest.raises(ValueError, match="2 parties"):
            bipartite_capacities(w2())

    def test_rejects_unequal_dimensions(self, rng):
        with pytest.raises(ValueError, match="equal"):
            bipartite_capacities(random_pure_state((2, 3), rng))


class TestGgmClosedForm:
    def test_ghz_family(self, rng):
        for beta2 in rng.uniform(0.01, 0.5, size=10):
            assert ggm(ghz_from_beta2(beta2)) == pytest.approx(beta2, abs=1e-12)

    def test_named_states(self):
        assert ggm(w()) == pytest.approx(0.25, abs=1e-12)
        assert ggm(w2()) == pytest.approx(1 / 3, abs=1e-12)
        assert ggm(cluster()) == pytest.approx(0.5, abs=1e-12)
        assert ggm(chi()) == pytest.approx(0.5, abs=1e-12)

    def test_two_singlets_vanishes(self):
        for pairing in ("AB|CD", "AC|BD", "AD|BC"):
            assert ggm(two_singlets(pairing)) == pytest.approx(0.0, abs=1e-12)

    def test_generalized_w_is_smallest_weight(self, rng):
        for _ in range(5):
            a, b, c, d = sorted(rng.uniform(0.1, 1.0, size=4), reverse=True)
            norm = np.sqrt(a * a + b * b + c * c + d * d)
            assert ggm(w(a, b, c, d)) == pytest.approx((d / norm) ** 2, abs=1e-12)

    def test_rvb_family_closed_form(self, rng):
        for mu in list(rng.uniform(0.0, 100.0, size=12)) + [0.0, 0.5, 1.0, 2.0]:
            assert ggm(rvb_ferro(mu)) == pytest.approx(rvb_ggm_closed_form(mu), abs=1e-12)

    def test_rvb_against_density_matrix_oracle(self):
        for mu in (0.0, 0.7, 2.0, 9.0):
            state = rvb_ferro(mu)
            largest = max(
                reduced_density_eigvals(state, split.side_a)[0]
                for split in all_bipartitions(4)
            )
            assert ggm(state) == pytest.approx(1 - largest, abs=1e-10)

    def test_product_state_returns_zero(self):
        assert ggm(PureState([1] + [0] * 15, (2, 2, 2, 2))) == 0.0

    def test_range_bound(self, rng):
        for _ in range(20):
            value = ggm(random_pure_state((2, 2, 2, 2), rng))
            assert 0.0 <= value <= 0.5 + 1e-12

    def test_permutation_invariance(self, rng):
        for _ in range(10):
            state = random_pure_state((2, 2, 2, 2), rng)
            perm = rng.permutation(4)
            relabeled = PureState(
                np.transpose(state.tensor(), perm).reshape(-1), (2, 2, 2, 2)
            )
            assert ggm(relabeled) == pytest.approx(ggm(state), abs=1e-12)

    def test_three_qubit_brute_force_oracle(self, rng):
        for _ in range(10):
            state = random_pure_state((2, 2, 2), rng)
            brute = 1.0 - best_single_vs_rest_overlap2(state.amplitudes, 3)
            assert ggm(state) == pytest.approx(brute, abs=1e-6)

    def test_rejects_single_party(self):
        with pytest.raises(ValueError):
            ggm(PureState([1, 0], (2,)))


class TestGmOptimizer:
    def test_regression_values(self):
        cases = [
            (w(), 37 / 64),
            (cluster(), 0.75),
            (w2(), 0.625),
            (two_singlets(), 0.75),
            (rvb_ferro(2), 2 / 3),
            (chi(), 0.75),
        ]
        for state, expected in cases:
            result = gm(state, restarts=50, seed=99)
            assert result.value == pytest.approx(expected, abs=1e-6)
            assert result.converged

    def test_ghz_family(self, rng):
        for beta2 in (0.05, 0.3, 0.5):
            result = gm(ghz_from_beta2(beta2), restarts=50, seed=1)
            assert result.value == pytest.approx(beta2, abs=1e-6)

    def test_product_state(self):
        result = gm(PureState([1] + [0] * 15, (2, 2, 2, 2)), restarts=5, seed=0)
        assert result.value == pytest.approx(0.0, abs=1e-10)
        assert result.best_overlap == pytest.approx(1.0, abs=1e-10)

    def test_result_invariants(self, rng):
        state = random_pure_state((2, 2, 2, 2), rng)
        result = gm(state, restarts=10, seed=5)
        assert result.value == pytest.approx(1 - result.best_overlap**2, abs=1e-12)
        recomputed = random_product_state_overlap(state.amplitudes, result.product_vectors)
        assert recomputed == pytest.approx(result.best_overlap, abs=1e-10)
        assert result.restarts_used == 10
        for vec in result.product_vectors:
            assert np.linalg.norm(vec) == pytest.approx(1.0, abs=1e-12)

    def test_seed_reproducibility(self, rng):
        state = random_pure_state((2, 2, 2, 2), rng)
        a = gm(state, restarts=5, seed=123)
        b = gm(state, restarts=5, seed=123)
        assert a.value == b.value
        assert a.iterations == b.iterations

    def test_iteration_cap_reports_nonconvergence(self, rng):
        state = random_pure_state((2, 2, 2, 2), rng)
        result = gm(state, restarts=2, seed=3, max_iterations=1)
        assert not result.converged
        assert 0.0 <= result.best_overlap <= 1.0

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            gm(w2(), restarts=0)
        with pytest.raises(ValueError):
            gm(w2(), tol=0.0)

    def test_warns_on_large_states(self, rng):
        state = random_pure_state((2,) * 9, rng)
        with pytest.warns(UserWarning, match="slow"):
            gm(state, restarts=1, seed=0, max_iterations=2)

    def test_ggm_never_exceeds_gm(self, rng):
        for _ in range(15):
            state = random_pure_state((2, 2, 2, 2), rng)
            assert ggm(state) <= gm(state, restarts=8, seed=11).value + 1e-8


class TestLocalUnitaryInvariance:
    def test_ggm_and_gm_invariant(self, rng):
        for state in (w2(), rvb_ferro(2), random_pure_state((2, 2, 2, 2), rng)):
            base_ggm = ggm(state)
            base_gm = gm(state, restarts=10, seed=2).value
            for _ in range(10):
                rotated = state
                for party in range(4):
                    rotated = apply_local_unitary(rotated, party, haar_random_unitary(2, rng))
                assert ggm(rotated) == pytest.approx(base_ggm, abs=1e-8)
                assert gm(rotated, restarts=10, seed=2).value == pytest.approx(
                    base_gm, abs=1e-8
                )


class TestMeasurementMonotonicity:
    def test_ensemble_ggm_never_increases(self, rng):
        for _ in range(20):
            state = random_pure_state((2, 2, 2, 2), rng)
            party = int(rng.integers(4))
            basis = ProjectiveQubitBasis(rng.uniform(0, np.pi / 2), rng.uniform(0, 2 * np.pi))
            kets = basis.vectors()
            ensemble = 0.0
            for m, (p, post) in enumerate(measure_party(state, party, basis)):
                if post is None:
                    continue
                ensemble += p * ggm(extend_measured_party(post, party, kets[m]))
            assert ensemble <= ggm(state) + 1e-9

    def test_split_max_coefficients_increase_on_average(self, rng):
        # the closed form's ingredients are themselves monotone: for every
        # split, the measured ensemble average of the largest squared
        # coefficient is at least the pre-measurement value
        for _ in range(20):
            state = random_pure_state((2, 2, 2, 2), rng)
            party = int(rng.integers(4))
            basis = ProjectiveQubitBasis(rng.uniform(0, np.pi / 2), rng.uniform(0, 2 * np.pi))
            kets = basis.vectors()
            outcomes = measure_party(state, party, basis)
            for split in all_bipartitions(4):
                before = schmidt_spectrum(state, split).max_squared
                average = sum(
                    p * schmidt_spectrum(extend_measured_party(post, party, kets[m]), split).max_squared
                    for m, (p, post) in enumerate(outcomes)
                    if post is not None
                )
                assert average >= before - 1e-9

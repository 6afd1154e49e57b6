import numpy as np
import pytest

from efmonogamy import measures, roof, states
from efmonogamy.discord import eof_via_koashi_winter
from efmonogamy.indicators import tau1_ghzw_closed_form, tau1_pure
from efmonogamy.linalg import ContractError, DensityMatrix, PureState, tensor_product
from efmonogamy.roof import Decomposition, RoofConfig, decomposition_from_isometry, minimize_roof

FAST = RoofConfig(restarts=4)


def entropy_cost(side):
    return lambda t: measures.batch_entanglement_entropy(t, side)


class TestDecompositionFromIsometry:
    def test_identity_gives_spectral_decomposition(self):
        rho = states.ghzw_mixture(0.3)
        dec = decomposition_from_isometry(rho, np.eye(2))
        assert np.allclose(sorted(dec.probabilities), [0.3, 0.7])
        assert dec.reassembly_error(rho) < 1e-12

    def test_hadamard_mixing_equal_weights(self):
        rho = states.ghzw_mixture(0.5)
        w = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
        dec = decomposition_from_isometry(rho, w)
        assert np.allclose(dec.probabilities, [0.5, 0.5])
        assert dec.reassembly_error(rho) < 1e-12

    def test_pure_input_repeats_the_state(self):
        psi = states.w3()
        w = np.linalg.qr(np.random.default_rng(0).standard_normal((3, 1)))[0]
        dec = decomposition_from_isometry(psi.dm(), w)
        for c in dec.components:
            assert abs(abs(np.vdot(c.vector, psi.vector)) - 1) < 1e-12

    def test_rejects_non_isometry(self):
        with pytest.raises(ContractError):
            decomposition_from_isometry(states.ghzw_mixture(0.5), np.ones((2, 2)))


class TestMinimizeRoof:
    def test_pure_state_exact(self):
        psi = states.haar_random_pure((2, 2, 2), 3)
        res = minimize_roof(psi, entropy_cost([0]), FAST)
        assert res.value == pytest.approx(measures.eof_pure_bipartite(psi, [0]), abs=1e-12)
        assert len(res.decomposition.components) == 1

    @pytest.mark.parametrize("seed", range(6))
    def test_two_qubit_matches_wootters(self, seed):
        rho = states.random_mixed((2, 2), 2 + seed % 3, seed)
        res = minimize_roof(rho, entropy_cost([0]), FAST)
        assert res.value == pytest.approx(measures.eof_two_qubit(rho), abs=1e-3)
        assert res.decomposition.reassembly_error(rho) < 1e-8
        assert np.all(res.decomposition.probabilities >= 0)

    def test_separable_diagonal(self):
        rho = DensityMatrix(np.diag([0.4, 0.3, 0.2, 0.1]).astype(complex), (2, 2))
        assert roof.eof_mixed(rho, [0], FAST) == pytest.approx(0, abs=1e-6)

    def test_value_is_upper_bound(self):
        rho = states.random_mixed((2, 2), 3, 42)
        assert roof.eof_mixed(rho, [0], RoofConfig(restarts=2)) >= measures.eof_two_qubit(rho) - 1e-9

    def test_deterministic_given_seed(self):
        rho = states.random_mixed((2, 2), 4, 9)
        cfg = RoofConfig(restarts=3, seed=77)
        assert roof.eof_mixed(rho, [0], cfg) == roof.eof_mixed(rho, [0], cfg)

    def test_ensemble_below_rank_rejected(self):
        with pytest.raises(ContractError):
            roof.eof_mixed(states.random_mixed((2, 2), 3, 1), [0], RoofConfig(ensemble_size=2))

    def test_config_validation(self):
        with pytest.raises(ContractError):
            RoofConfig(restarts=0)
        with pytest.raises(ContractError):
            RoofConfig(tolerance=0)


class TestConcreteRoofs:
    def test_eof_mixed_pure_input(self):
        assert roof.eof_mixed(states.w3(), [0]) == pytest.approx(measures.eof_pure_bipartite(states.w3(), [0]))

    def test_eof_mixed_vs_koashi_winter(self):
        rho = states.ghzw_mixture(0.4)
        assert roof.eof_mixed(rho, [0], RoofConfig(restarts=8)) == pytest.approx(eof_via_koashi_winter(rho, 0), abs=2e-3)

    def test_tau1_mixed_pure_examples(self):
        assert roof.tau1_mixed(states.ghz3()) == pytest.approx(1)
        assert roof.tau1_mixed(states.w3()) == pytest.approx(0.238162, abs=1e-6)

    def test_tau1_mixed_ghzw_bounded_by_closed_form(self):
        p = 0.3
        val = roof.tau1_mixed(states.ghzw_mixture(p), 0, RoofConfig(restarts=16))
        assert val <= tau1_ghzw_closed_form(p) + 2e-3

    def test_tau1_global(self):
        assert roof.tau1_global(states.ghz3()) == pytest.approx(1)
        bb = tensor_product(states.bell(), states.bell())
        assert roof.tau1_global(bb) == pytest.approx(0, abs=1e-6)

    def test_tau1_global_wn_ones_feasible_value(self):
        # an explicit decomposition bounds the roof from above; the optimizer must reach at least that
        val = roof.tau1_global(states.wn_ones_mixture(3), RoofConfig(restarts=8))
        assert val <= 0.1786 + 1e-3

    def test_three_tangle_mixed(self):
        assert roof.three_tangle_mixed(states.ghz3()) == pytest.approx(1)
        assert roof.three_tangle_mixed(states.w3()) == pytest.approx(0, abs=1e-9)
        assert roof.three_tangle_mixed(states.ghzw_mixture(0.5), RoofConfig(restarts=8)) <= 1e-3

    def test_qubit_only_roofs(self):
        with pytest.raises(ContractError):
            roof.tau1_mixed(states.random_mixed((2, 3), 2, 0))


class TestFindP0:
    def test_root(self):
        p0 = roof.find_p0()
        assert p0 == pytest.approx(0.627, abs=1e-3)
        assert measures.three_tangle_pure(states.psi_j_p(0, p0)) < 1e-8
        assert tau1_pure(states.psi_j_p(0, p0)) == pytest.approx(0.217061, abs=1e-4)

    def test_root_has_closed_form(self):
        # vanishing hyperdeterminant of sqrt(p) GHZ - sqrt(1-p) W solves to this value
        c = 4 * 2 ** (1 / 3)
        assert roof.find_p0() == pytest.approx(c / (3 + c), abs=1e-9)

    def test_bad_bracket(self):
        with pytest.raises(ContractError):
            roof.find_p0(0.1, 0.2)

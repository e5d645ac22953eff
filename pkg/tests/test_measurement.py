import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from dissension.errors import ArityError, SubsystemError
from dissension.linalg import partial_trace, tensor
from dissension.measurement import (
    embed,
    measure,
    one_particle_basis,
    post_measurement_state,
    two_particle_basis,
)
from dissension.states import DensityMatrix, basis_state, maximally_mixed, purity, to_density

angles = st.floats(-10.0, 10.0, allow_nan=False)
BELL = np.array([[1, 0, 0, 1], [1, 0, 0, -1], [0, 1, 1, 0], [0, 1, -1, 0]]) / np.sqrt(2)


def _check_basis(basis):
    projs = basis.projectors
    d = projs[0].shape[0]
    assert np.abs(sum(projs) - np.eye(d)).max() < 1e-12
    for i, p in enumerate(projs):
        assert abs(np.trace(p) - 1) < 1e-12
        for j, q in enumerate(projs):
            assert np.abs(p @ q - (p if i == j else 0)).max() < 1e-12


class TestBases:
    @pytest.mark.parametrize("theta", np.linspace(0, 2 * np.pi, 100))
    def test_projector_invariants(self, theta):
        _check_basis(one_particle_basis(theta))
        _check_basis(two_particle_basis(theta))

    @settings(max_examples=100, deadline=None)
    @given(angles)
    def test_invariants_any_angle(self, theta):
        _check_basis(one_particle_basis(theta))
        _check_basis(two_particle_basis(theta))

    @settings(max_examples=100, deadline=None)
    @given(angles)
    def test_pi_shift_gives_same_projectors(self, theta):
        for make in (one_particle_basis, two_particle_basis):
            for a, b in zip(make(theta).projectors, make(theta + np.pi).projectors):
                assert np.abs(a - b).max() < 1e-12

    def test_zero_angle_is_computational(self):
        kets = one_particle_basis(0).kets
        assert_allclose(np.abs(kets), np.eye(2))

    def test_bell_basis_at_quarter_turn(self):
        assert_allclose(np.array(two_particle_basis(np.pi / 4).kets), BELL, atol=1e-15)


class TestEmbed:
    def test_single_qubit_positions(self):
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        assert_allclose(embed(x, [0]), tensor(x, np.eye(2), np.eye(2)))
        assert_allclose(embed(x, [1]), tensor(np.eye(2), x, np.eye(2)))
        assert_allclose(embed(x, [2]), tensor(np.eye(2), np.eye(2), x))

    def test_target_order(self):
        rng = np.random.default_rng(0)
        a, b = rng.normal(size=(2, 2)), rng.normal(size=(2, 2))
        assert_allclose(embed(tensor(a, b), [2, 0]), tensor(b, np.eye(2), a))

    def test_errors(self):
        with pytest.raises(SubsystemError):
            embed(np.eye(2), [3])
        with pytest.raises(SubsystemError):
            embed(np.eye(4), [1, 1])
        with pytest.raises(ArityError):
            embed(np.eye(4), [0])


class TestMeasure:
    def test_ghz_one_particle_computational(self, ghz):
        ens = measure(ghz, one_particle_basis(0), [1])
        assert_allclose(ens.probabilities, [0.5, 0.5])
        assert_allclose(ens.outcomes[0].state.matrix, to_density(basis_state("000")).matrix)
        assert_allclose(ens.outcomes[1].state.matrix, to_density(basis_state("111")).matrix)

    def test_ghz_bell_outcomes(self, ghz):
        # (|00>|0> + |11>|1>)/sqrt2 in the Bell basis on AB
        ens = measure(ghz, two_particle_basis(np.pi / 4), [0, 1])
        assert [o.index for o in ens.outcomes] == [0, 1]
        assert_allclose(ens.probabilities, [0.5, 0.5])
        assert ens.total_probability == pytest.approx(1.0)
        for o in ens.outcomes:
            rc = partial_trace(o.state.matrix, [2, 2, 2], [2])
            assert_allclose(rc, np.full((2, 2), 0.5) * [[1, (-1) ** o.index], [(-1) ** o.index, 1]], atol=1e-15)

    def test_w_one_particle(self, w):
        ens = measure(w, one_particle_basis(0), [1])
        assert_allclose(ens.probabilities, [2 / 3, 1 / 3])

    def test_drops_zero_probability(self):
        rho = to_density(basis_state("000"))
        ens = measure(rho, one_particle_basis(0), [1])
        assert len(ens.outcomes) == 1
        assert ens.total_probability == pytest.approx(1.0)

    def test_conditional_states_are_valid(self, mixed_states):
        for rho in mixed_states:
            for basis, targets in ((one_particle_basis(0.3), [1]), (two_particle_basis(1.1), [0, 1])):
                ens = measure(rho, basis, targets)
                assert ens.total_probability == pytest.approx(1.0, abs=1e-12)
                for o in ens.outcomes:
                    DensityMatrix(o.state.matrix)

    def test_arity_mismatch(self, ghz):
        with pytest.raises(ArityError):
            measure(ghz, one_particle_basis(0), [0, 1])
        with pytest.raises(ArityError):
            measure(ghz, two_particle_basis(0), [1])

    def test_bad_targets(self, ghz):
        with pytest.raises(SubsystemError):
            measure(ghz, one_particle_basis(0), [3])
        with pytest.raises(SubsystemError):
            measure(ghz, two_particle_basis(0), [0, 0])

    def test_pi_shift_same_ensemble_up_to_sign(self, mixed_states):
        rho = mixed_states[0]
        a = measure(rho, two_particle_basis(0.4), [0, 1])
        b = measure(rho, two_particle_basis(0.4 + np.pi), [0, 1])
        assert_allclose(a.probabilities, b.probabilities, atol=1e-14)
        for x, y in zip(a.outcomes, b.outcomes):
            assert_allclose(x.state.matrix, y.state.matrix, atol=1e-14)


class TestPostMeasurement:
    def test_ghz_computational_on_b(self, ghz):
        post = post_measurement_state(measure(ghz, one_particle_basis(0), [1]))
        assert_allclose(post.matrix, np.diag([0.5, 0, 0, 0, 0, 0, 0, 0.5]), atol=1e-15)

    def test_eigenstate_unchanged(self):
        rho = to_density(basis_state("010"))
        post = post_measurement_state(measure(rho, one_particle_basis(0), [1]))
        assert_allclose(post.matrix, rho.matrix)

    def test_dephases_maximally_mixed_fixed_point(self):
        rho = maximally_mixed()
        post = post_measurement_state(measure(rho, two_particle_basis(0.7), [0, 1]))
        assert_allclose(post.matrix, rho.matrix, atol=1e-15)

    def test_purity_does_not_increase(self, mixed_states, ghz, w):
        for rho in mixed_states + [ghz, w]:
            for t in np.linspace(0, np.pi, 7):
                p1 = post_measurement_state(measure(rho, one_particle_basis(t), [1]))
                p2 = post_measurement_state(measure(rho, two_particle_basis(t), [0, 1]))
                assert purity(p1) <= purity(rho) + 1e-12
                assert purity(p2) <= purity(rho) + 1e-12

    def test_matches_cnot_ancilla_circuit(self, mixed_states):
        # copying B onto a fresh ancilla with a CNOT and then discarding the
        # ancilla is the same as a computational-basis measurement of B
        cnot = np.eye(4)[[0, 1, 3, 2]]
        for rho in mixed_states:
            big = tensor(rho.matrix, np.diag([1.0, 0.0]))
            u = embed(cnot, [1, 3], num_qubits=4)
            out = partial_trace(u @ big @ u.conj().T, [2, 2, 2, 2], {0, 1, 2})
            post = post_measurement_state(measure(rho, one_particle_basis(0), [1]))
            assert np.abs(out - post.matrix).max() < 1e-12

    def test_marginal_of_unmeasured_qubits_unchanged(self, mixed_states):
        for rho in mixed_states:
            post = post_measurement_state(measure(rho, one_particle_basis(0.9), [1]))
            assert_allclose(
                partial_trace(post.matrix, [2, 2, 2], {0, 2}),
                partial_trace(rho.matrix, [2, 2, 2], {0, 2}),
                atol=1e-14,
            )

    def test_reduced_projection_consistency(self, mixed_states):
        # measuring B on the AB marginal gives the AB marginal of the measured state
        for rho in mixed_states:
            ens = measure(rho, one_particle_basis(0.5), [1])
            rab = partial_trace(rho.matrix, [2, 2, 2], {0, 1})
            for o, u in zip(ens.outcomes, one_particle_basis(0.5).projectors):
                proj = np.kron(np.eye(2), u)
                m = proj @ rab @ proj
                p = np.trace(m).real
                assert p == pytest.approx(o.probability, abs=1e-14)
                assert_allclose(m / p, partial_trace(o.state.matrix, [2, 2, 2], {0, 1}), atol=1e-13)

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import all_digit_vectors, dense_expectations, expm_hermitian, pauli_matrix, X2
from paulibound import quantum_core as qc
from paulibound.errors import ArgumentError, ConstructionError, NumericalError, SizeError
from paulibound.feature_map import config_grid, encode


def random_state(rng, n):
    psi = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return qc.Statevector(psi / np.linalg.norm(psi), n)


class TestPauliString:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_digit_round_trip(self, n):
        for digits in all_digit_vectors(n):
            assert qc.decode_code(qc.encode_digits(digits), n) == digits

    def test_code_bounds(self):
        with pytest.raises(ArgumentError):
            qc.PauliString(16, 2)
        with pytest.raises(ArgumentError):
            qc.PauliString(-1, 2)

    def test_identity_iff_zero(self):
        assert qc.PauliString(0, 3).is_identity
        assert not any(qc.PauliString(c, 3).is_identity for c in range(1, 64))

    def test_labels_and_masks(self):
        p = qc.PauliString.from_label("XYZI")
        assert p.digits == (1, 2, 3, 0)
        assert p.label == "XYZI"
        assert p.xmask == 0b0011
        assert p.zmask == 0b0110
        assert p.support == (0, 1, 2)

    def test_bad_label(self):
        with pytest.raises(ArgumentError):
            qc.PauliString.from_label("XQ")

    def test_tables_invert(self):
        xm, zm, code_of = qc.pauli_tables(3)
        assert (code_of[xm, zm] == np.arange(64)).all()


class TestStates:
    def test_zero_state(self):
        assert np.array_equal(qc.zero_state(1).amplitudes, [1, 0])
        assert np.array_equal(qc.zero_state(2).amplitudes, [1, 0, 0, 0])
        s = qc.zero_state(4)
        assert s.amplitudes.shape == (16,) and s.norm == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("n", [0, 13, 2.5])
    def test_zero_state_size_error(self, n):
        with pytest.raises(SizeError):
            qc.zero_state(n)

    def test_amplitudes_read_only(self):
        with pytest.raises(ValueError):
            qc.zero_state(1).amplitudes[0] = 0

    def test_hadamard(self, each_backend):
        plus = qc.apply_hadamard_all(qc.zero_state(1))
        assert np.allclose(plus.amplitudes, [1 / math.sqrt(2)] * 2, atol=1e-15)
        uni = qc.apply_hadamard_all(qc.zero_state(4))
        assert np.allclose(uni.amplitudes, 0.25, atol=1e-15)

    def test_hadamard_involution(self, each_backend, rng):
        s = random_state(rng, 3)
        back = qc.apply_hadamard_all(qc.apply_hadamard_all(s))
        assert np.allclose(back.amplitudes, s.amplitudes, atol=1e-12)


class TestPauliAction:
    def test_identity(self, each_backend, rng):
        s = random_state(rng, 2)
        assert np.allclose(qc.apply_pauli(s, qc.PauliString(0, 2)).amplitudes, s.amplitudes)

    def test_x_and_y_on_zero(self, each_backend):
        z = qc.zero_state(1)
        assert np.allclose(qc.apply_pauli(z, qc.PauliString.from_label("X")).amplitudes, [0, 1])
        assert np.allclose(qc.apply_pauli(z, qc.PauliString.from_label("Y")).amplitudes, [0, 1j])

    def test_matches_dense_matrices(self, each_backend, rng):
        s = random_state(rng, 3)
        for code in range(64):
            got = qc.apply_pauli(s, qc.PauliString(code, 3)).amplitudes
            assert np.allclose(got, pauli_matrix(code, 3) @ s.amplitudes, atol=1e-13)

    def test_involution(self, each_backend, rng):
        s = random_state(rng, 3)
        for code in range(64):
            p = qc.PauliString(code, 3)
            twice = qc.apply_pauli(qc.apply_pauli(s, p), p)
            assert np.allclose(twice.amplitudes, s.amplitudes, atol=1e-12)

    def test_size_mismatch(self):
        with pytest.raises(ArgumentError):
            qc.apply_pauli(qc.zero_state(2), qc.PauliString(1, 3))


class TestExponential:
    def test_zero_angle(self, each_backend, rng):
        s = random_state(rng, 2)
        out = qc.apply_pauli_exponential(s, qc.PauliString.from_label("XZ"), 0.0)
        assert np.allclose(out.amplitudes, s.amplitudes, atol=1e-15)

    def test_z_is_global_phase_on_zero(self, each_backend):
        out = qc.apply_pauli_exponential(qc.zero_state(1), qc.PauliString.from_label("Z"), math.pi / 2)
        assert np.allclose(out.amplitudes, [1j, 0], atol=1e-15)
        assert qc.fidelity(out, qc.zero_state(1)) == pytest.approx(1.0, abs=1e-15)

    def test_x_quarter_turn_matches_matrix_exponential(self, each_backend):
        expected = expm_hermitian(math.pi / 4, X2) @ np.array([1, 0], dtype=complex)
        out = qc.apply_pauli_exponential(qc.zero_state(1), qc.PauliString.from_label("X"), math.pi / 4)
        assert np.allclose(out.amplitudes, expected, atol=1e-14)
        assert np.allclose(expected, [math.cos(math.pi / 4), 1j * math.sin(math.pi / 4)])

    def test_all_strings_match_dense(self, each_backend, rng):
        s = random_state(rng, 3)
        for code in range(1, 64):
            theta = rng.uniform(-3, 3)
            got = qc.apply_pauli_exponential(s, qc.PauliString(code, 3), theta)
            want = expm_hermitian(theta, pauli_matrix(code, 3)) @ s.amplitudes
            assert np.allclose(got.amplitudes, want, atol=1e-12)
            assert got.norm == pytest.approx(1.0, abs=1e-10)

    def test_identity_rejected(self):
        with pytest.raises(ConstructionError):
            qc.apply_pauli_exponential(qc.zero_state(2), qc.PauliString(0, 2), 0.3)


class TestExpectations:
    def test_simple_values(self, each_backend):
        z = qc.zero_state(1)
        plus = qc.apply_hadamard_all(z)
        assert qc.expectation(z, qc.PauliString(0, 1)) == pytest.approx(1.0)
        assert qc.expectation(z, qc.PauliString.from_label("Z")) == pytest.approx(1.0)
        assert qc.expectation(plus, qc.PauliString.from_label("X")) == pytest.approx(1.0)

    def test_computational_basis_state(self, each_backend):
        a = qc.all_expectations(qc.zero_state(4))
        for code in range(256):
            digits = qc.decode_code(code, 4)
            z_only = all(d in (0, 3) for d in digits)
            assert a[code] == pytest.approx(1.0 if z_only else 0.0, abs=1e-14)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_dense_oracle(self, each_backend, rng, n):
        for _ in range(5):
            s = random_state(rng, n)
            assert np.allclose(qc.all_expectations(s), dense_expectations(s.amplitudes, n), atol=1e-10)

    def test_single_expectation_agrees_with_batch(self, each_backend, rng):
        s = random_state(rng, 2)
        a = qc.all_expectations(s)
        for code in range(16):
            assert qc.expectation(s, qc.PauliString(code, 2)) == pytest.approx(a[code], abs=1e-13)

    def test_y_expectation(self, each_backend):
        amps = np.array([[1.0, 1j]]) / math.sqrt(2)
        vals = qc.batch_expectations(amps, 1)
        assert vals[0, 2] == pytest.approx(1.0)  # <Y> of (|0> + i|1>)/sqrt2

    def test_imag_tolerance_raises(self, monkeypatch):
        class Bad:
            NAME = "bad"

            @staticmethod
            def pauli_expectations(states, n, code_of):
                return np.zeros((len(states), 4**n)), 1e-6

        monkeypatch.setattr(qc.backend, "kernels", lambda: Bad)
        with pytest.raises(NumericalError):
            qc.all_expectations(qc.zero_state(1))


class TestFidelity:
    def test_basic(self):
        z = qc.zero_state(1)
        one = qc.Statevector([0, 1], 1)
        plus = qc.apply_hadamard_all(z)
        assert qc.fidelity(z, z) == 1.0
        assert qc.fidelity(z, one) == 0.0
        assert qc.fidelity(z, plus) == pytest.approx(0.5, abs=1e-15)


prepared_states = st.builds(
    lambda idx, xs: (config_grid(3)[idx], xs),
    st.integers(0, 107),
    st.lists(st.floats(-2, 2, allow_nan=False), min_size=3, max_size=3),
)


@settings(max_examples=60, deadline=None)
@given(prepared_states)
def test_purity_of_feature_map_states(case):
    config, x = case
    state = encode(np.array(x), config)
    a = qc.all_expectations(state)
    assert state.norm == pytest.approx(1.0, abs=1e-10)
    assert np.sum(a**2) / 2**3 == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_kernel_decomposition(each_backend, rng, n):
    configs = config_grid(n)
    for _ in range(10):
        cfg = configs[rng.integers(len(configs))]
        a = encode(rng.normal(size=n), cfg)
        b = encode(rng.normal(size=n), cfg)
        lhs = qc.fidelity(a, b)
        rhs = qc.all_expectations(a) @ qc.all_expectations(b) / 2**n
        assert lhs == pytest.approx(rhs, abs=1e-8)


def test_kernel_decomposition_single_qubit(rng):
    # no n=1 feature map exists, so use random states
    for _ in range(10):
        a, b = random_state(rng, 1), random_state(rng, 1)
        rhs = qc.all_expectations(a) @ qc.all_expectations(b) / 2
        assert qc.fidelity(a, b) == pytest.approx(rhs, abs=1e-8)

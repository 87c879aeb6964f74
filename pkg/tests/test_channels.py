import numpy as np
import pytest

from causalgame.channels import (
    CjOperator,
    Instrument,
    apply_cj,
    choi_from_kraus,
    instrument_valid,
    is_cp,
    is_tp,
)
from causalgame.game import alice_cj, saturating_strategies
from conftest import random_density_matrix, random_kraus_channel

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


class TestChoiFromKraus:
    def test_identity_channel(self):
        op = choi_from_kraus([I2], 2, 2)
        phi = np.zeros(4, dtype=complex)
        phi[0] = phi[3] = 1.0
        expected = np.outer(phi, phi.conj()).T
        assert np.allclose(op.matrix, expected)
        assert abs(np.trace(op.matrix) - 2.0) < 1e-12
        assert np.linalg.matrix_rank(op.matrix) == 1
        assert is_cp(op) and is_tp(op)

    def test_phase_flip(self):
        # hand computation: (Id (x) Z)|phi+> = |00> - |11>
        op = choi_from_kraus([Z], 2, 2)
        expected = np.zeros((4, 4), dtype=complex)
        expected[0, 0] = expected[3, 3] = 1.0
        expected[0, 3] = expected[3, 0] = -1.0
        assert np.allclose(op.matrix, expected)
        assert abs(np.trace(op.matrix) - 2.0) < 1e-12
        assert is_cp(op) and is_tp(op)

    def test_empty_kraus_list(self):
        op = choi_from_kraus([], 2, 2)
        assert np.allclose(op.matrix, np.zeros((4, 4)))
        assert is_cp(op)
        assert not is_tp(op)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="Kraus operator shape"):
            choi_from_kraus([np.eye(3)], 2, 2)

    def test_trace_rule(self, rng):
        for _ in range(20):
            kraus = [
                rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(3)
            ]
            op = choi_from_kraus(kraus, 2, 2)
            expected = sum(np.trace(k.conj().T @ k) for k in kraus)
            assert abs(np.trace(op.matrix) - expected) < 1e-10


class TestApplyCj:
    def test_identity_channel(self, rng):
        op = choi_from_kraus([I2], 2, 2)
        rho = random_density_matrix(rng)
        assert np.allclose(apply_cj(op, rho), rho)

    def test_depolarise_to_maximally_mixed(self):
        # CJ of rho -> Tr(rho) Id/2 is Id/2 on in (x) out
        op = CjOperator(matrix=np.eye(4, dtype=complex) / 2.0, in_dim=2, out_dim=2)
        ket0 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
        assert np.allclose(apply_cj(op, ket0), I2 / 2.0)
        assert is_tp(op)

    def test_bit_flip(self):
        op = choi_from_kraus([X], 2, 2)
        ket0 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
        ket1 = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
        assert np.allclose(apply_cj(op, ket0), ket1)

    def test_round_trip_random_channels(self, rng):
        # module invariant: 200 random Kraus sets against direct application
        for _ in range(200):
            kraus = random_kraus_channel(rng, n_ops=int(rng.integers(1, 4)))
            op = choi_from_kraus(kraus, 2, 2)
            rho = random_density_matrix(rng)
            direct = sum(k @ rho @ k.conj().T for k in kraus)
            assert np.abs(apply_cj(op, rho) - direct).max() < 1e-10
            assert is_cp(op) and is_tp(op)
            assert abs(np.trace(op.matrix) - 2.0) < 1e-9

    def test_shape_mismatch(self):
        op = choi_from_kraus([I2], 2, 2)
        with pytest.raises(ValueError, match="does not match input dimension"):
            apply_cj(op, np.eye(3, dtype=complex))


class TestValidity:
    def test_restricted_maps_are_instruments(self, rng):
        # every constructed strategy map must be CP with a TP outcome sum
        from conftest import random_strategy_pair
        from causalgame.game import alice_instrument, bob_instrument

        for _ in range(25):
            pair = random_strategy_pair(rng)
            for a in range(2):
                assert instrument_valid(alice_instrument(pair.alice, a))
            for b in range(2):
                for bprime in range(2):
                    assert instrument_valid(bob_instrument(pair.bob, b, bprime))

    def test_saturating_alice_instrument(self):
        pair = saturating_strategies()
        ops = [alice_cj(pair.alice, x, 0) for x in range(2)]
        inst = Instrument(outcomes=tuple(enumerate(ops)))
        assert instrument_valid(inst)

    def test_single_cp_non_tp_element(self):
        half = CjOperator(matrix=0.5 * choi_from_kraus([I2], 2, 2).matrix, in_dim=2, out_dim=2)
        assert is_cp(half)
        assert not is_tp(half)
        assert not instrument_valid(Instrument(outcomes=((0, half),)))

    def test_classical_coin(self):
        half = CjOperator(matrix=0.5 * choi_from_kraus([I2], 2, 2).matrix, in_dim=2, out_dim=2)
        coin = Instrument(outcomes=((0, half), (1, half)))
        assert instrument_valid(coin)

    def test_empty_instrument(self):
        assert not instrument_valid(Instrument(outcomes=()))


class TestTransposeConvention:
    def test_measure_reprepare_matches_kraus_route(self):
        # Alice's z-basis measure/reprepare map equals its Kraus-built CJ
        pair = saturating_strategies()
        for x in range(2):
            for a in range(2):
                basis = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
                kraus = [np.outer(basis[a], basis[x].conj())]
                expected = choi_from_kraus(kraus, 2, 2)
                got = alice_cj(pair.alice, x, a)
                assert np.abs(got.matrix - expected.matrix).max() < 1e-12

    def test_y_axis_measurement_transpose_sensitive(self):
        # measuring along y exposes the transpose in the storage convention
        from causalgame.game import measure_reprepare_alice

        strategy = measure_reprepare_alice(
            measure_axis=(0.0, 1.0, 0.0), encode_axis=(0.0, 0.0, 1.0), encode_table=[0, 1, 0, 1]
        )
        plus_y = np.array([1.0, 1.0j]) / np.sqrt(2.0)
        kets = [plus_y, np.array([1.0, -1.0j]) / np.sqrt(2.0)]
        zbasis = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
        for x in range(2):
            for a in range(2):
                kraus = [np.outer(zbasis[a], kets[x].conj())]
                expected = choi_from_kraus(kraus, 2, 2)
                got = alice_cj(strategy, x, a)
                assert np.abs(got.matrix - expected.matrix).max() < 1e-12

import numpy as np
import pytest

from causalgame.game import saturating_strategies, success_probability
from causalgame.optimize import (
    CAUSAL_BOUND,
    QUANTUM_BOUND,
    OptimizerConfig,
    certify_quantum_bound,
    maximize_success,
    proof_vectors,
)
from causalgame.processes import (
    WernerParams,
    make_causal_channel,
    make_noise,
    make_ocb,
    make_werner,
    random_valid_process,
)
from conftest import random_strategy_pair

INV_SQRT2 = 1.0 / np.sqrt(2.0)

FAST = OptimizerConfig(restarts=8, max_iterations=600, tol=1e-10, seed=5)
LIGHT = OptimizerConfig(restarts=4, max_iterations=300, tol=1e-8, seed=5)


class TestConfig:
    def test_defaults(self):
        cfg = OptimizerConfig()
        assert cfg.restarts == 64
        assert cfg.max_iterations == 2000
        assert cfg.tol == 1e-10
        assert cfg.seed == 42

    def test_validation(self):
        with pytest.raises(ValueError, match="positive"):
            OptimizerConfig(restarts=0)
        with pytest.raises(ValueError, match="positive"):
            OptimizerConfig(tol=-1.0)


class TestMaximize:
    def test_saturating_process_reaches_bound(self):
        result = maximize_success(make_ocb(), FAST)
        assert result.best_value >= QUANTUM_BOUND - 1e-6
        assert result.best_value <= QUANTUM_BOUND + 1e-9
        assert result.branch == "corr/state"

    def test_noise_is_a_coin_flip(self):
        result = maximize_success(make_noise(), FAST)
        assert abs(result.best_value - 0.5) < 1e-6

    def test_causal_channels_reach_three_quarters(self):
        for direction in ("a-to-b", "b-to-a"):
            result = maximize_success(make_causal_channel(direction, +1), FAST)
            assert abs(result.best_value - CAUSAL_BOUND) < 1e-6

    def test_family_linear_optimum(self):
        # optimum over the class is 1/2 + (|eta1| + |eta2|)/4
        for e1, e2 in [(0.9, 0.1), (0.3, -0.4), (-0.6, -0.6)]:
            result = maximize_success(make_werner(WernerParams(e1, e2)), FAST)
            assert abs(result.best_value - (0.5 + (abs(e1) + abs(e2)) / 4.0)) < 1e-6

    def test_reported_strategies_reproduce_value(self):
        result = maximize_success(make_ocb(), FAST)
        replay = success_probability(make_ocb(), result.best_pair)
        assert abs(replay - result.best_value) < 1e-9

    def test_determinism(self):
        r1 = maximize_success(make_ocb(), FAST)
        r2 = maximize_success(make_ocb(), FAST)
        assert r1.best_value == r2.best_value
        assert r1.branch == r2.branch
        assert r1.restart_trace == r2.restart_trace

    def test_restart_trace_shape(self):
        result = maximize_success(make_ocb(), FAST)
        assert len(result.restart_trace) == FAST.restarts
        assert max(result.restart_trace) <= result.best_value + 1e-12
        assert min(result.restart_trace) >= 0.5 - 1e-9

    def test_invalid_process_rejected(self):
        with pytest.raises(ValueError, match="invalid process"):
            maximize_success(make_werner(WernerParams(0.9, 0.9)), FAST)

    def test_universal_bound_sample(self, rng):
        # light version of the 1000-process acceptance sweep
        for k in range(30):
            w = random_valid_process(rng, "generic" if k % 2 else "werner")
            result = maximize_success(w, LIGHT)
            assert result.best_value <= QUANTUM_BOUND + 1e-6
            assert result.best_value >= 0.5 - 1e-9

    def test_general_tensor_flag(self):
        cfg = OptimizerConfig(restarts=6, max_iterations=400, tol=1e-9, seed=3, allow_general_tensors=True)
        result = maximize_success(make_ocb(), cfg)
        assert result.best_value >= QUANTUM_BOUND - 1e-5
        assert result.best_value <= QUANTUM_BOUND + 1e-6


class TestCertify:
    def test_saturating_process(self):
        report = certify_quantum_bound(make_ocb(), FAST)
        assert abs(report.max_found - QUANTUM_BOUND) < 1e-6
        assert abs(report.bound - 0.8535533905932737) < 1e-15
        assert not report.violated

    def test_tilted_family_point(self):
        report = certify_quantum_bound(make_werner(WernerParams(0.9, 0.1)), FAST)
        assert abs(report.max_found - 0.75) < 1e-6
        assert not report.violated


class TestProofGeometry:
    def test_unit_norms_and_orthogonality(self, rng):
        # light version of the 200-pair acceptance sweep
        for _ in range(40):
            w = random_valid_process(rng, "generic" if rng.uniform() < 0.5 else "werner")
            pair = random_strategy_pair(rng)
            geom = proof_vectors(w, pair)
            assert abs(geom.norm_a - 1.0) < 1e-9
            assert abs(geom.norm_b - 1.0) < 1e-9
            assert abs(geom.norm_i - 1.0) < 1e-9
            assert abs(geom.ab_inner) < 1e-9
            assert geom.ai_inner**2 + geom.bi_inner**2 <= 1.0 + 1e-9

    def test_saturating_pair_overlaps(self):
        geom = proof_vectors(make_ocb(), saturating_strategies())
        assert abs(geom.ai_inner - INV_SQRT2) < 1e-6
        assert abs(geom.bi_inner - INV_SQRT2) < 1e-6
        assert abs(geom.ab_inner) < 1e-9

    def test_overlaps_match_coefficient_contractions(self, rng):
        from causalgame.game import process_coefficients

        for _ in range(10):
            w = random_valid_process(rng, "generic")
            pair = random_strategy_pair(rng)
            geom = proof_vectors(w, pair)
            co = process_coefficients(w)
            expected_ai = float(
                np.einsum("i,ij,j->", pair.alice.encode_axis[0], co.a2_b1, pair.bob.guess_axis)
            )
            expected_bi = float(
                np.einsum(
                    "i,ijk,jk->",
                    pair.alice.measure_axis[0],
                    co.a1_b1_b2,
                    pair.bob.send_corr_tensor,
                )
            )
            assert abs(geom.ai_inner - expected_ai) < 1e-9
            assert abs(geom.bi_inner - expected_bi) < 1e-9

    def test_invalid_process_rejected(self):
        with pytest.raises(ValueError, match="valid process"):
            proof_vectors(make_werner(WernerParams(0.9, 0.9)), saturating_strategies())

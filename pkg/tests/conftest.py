import numpy as np
import pytest

from causalgame import (
    StrategyPair,
    measure_reprepare_alice,
    measure_reprepare_bob,
)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_unit(rng, n=1):
    v = rng.normal(size=(n, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return v[0] if n == 1 else v


def random_strategy_pair(rng) -> StrategyPair:
    """A random measurement-repreparation pair with random encoding tables."""
    m, n, t, o, r = random_unit(rng, 5)
    bloch = rng.normal(size=3)
    norm = np.linalg.norm(bloch)
    bloch *= rng.uniform(0.0, 1.0) / max(norm, 1e-12)
    alice = measure_reprepare_alice(
        measure_axis=m, encode_axis=n, encode_table=rng.integers(0, 2, size=4)
    )
    bob = measure_reprepare_bob(
        guess_axis=r,
        send_measure_axis=t,
        send_encode_axis=o,
        send_encode_table=rng.integers(0, 2, size=4),
        guess_reprep_bloch=bloch,
    )
    return StrategyPair(alice=alice, bob=bob)


def random_kraus_channel(rng, in_dim=2, out_dim=2, n_ops=3):
    """A random trace-preserving Kraus set via Gaussian operators whitened
    so that sum_k K^dag K = Id.
    """
    raw = rng.normal(size=(n_ops, out_dim, in_dim)) + 1j * rng.normal(size=(n_ops, out_dim, in_dim))
    gram = sum(k.conj().T @ k for k in raw)
    vals, vecs = np.linalg.eigh(gram)
    whiten = (vecs / np.sqrt(vals)) @ vecs.conj().T
    return [k @ whiten for k in raw]


def random_density_matrix(rng, dim=2):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real

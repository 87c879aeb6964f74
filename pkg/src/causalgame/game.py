"""The "guess your partner's input" game over a bipartite process.

Alice receives a bit ``a``, Bob a bit ``b`` plus a role bit ``b'``:
``b' = 0`` asks Alice to output Bob's bit (her guess is ``x``), ``b' = 1``
asks Bob to output Alice's bit (his guess is ``y``).  The score is

    p_succ = 1/2 [ P(x = b | b' = 0) + P(y = a | b' = 1) ]

with all hidden bits uniform.  Local operations are restricted to the
binary-observable class: each party measures a dichotomic axis on the
incoming qubit, conditions a one-bit encoding function on their input,
and sends out a state along an encoding axis -- optionally with a
correlation tensor linking the incoming and outgoing sides.  Probabilities
come from the trace pairing of the process with the two Choi-form maps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from pathlib import Path

import numpy as np

from .channels import CjOperator, Instrument, is_tp
from .linalg import PAULI_X, PAULI_Y, PAULI_Z, hs_coefficients, is_psd
from .processes import ProcessMatrix, _require_canonical

_PAULI_VEC = np.stack([PAULI_X, PAULI_Y, PAULI_Z])
_PAULI_PAIRS = np.einsum("iab,jcd->ijacbd", _PAULI_VEC, _PAULI_VEC).reshape(3, 3, 4, 4)

MODE_MEASURE_REPREPARE = "measure-reprepare"
MODE_CORRELATED = "correlated"

_CP_TOL = 1e-9
_UNIT_TOL = 1e-9


def axis_observable(v: np.ndarray) -> np.ndarray:
    """The dichotomic observable v . (X, Y, Z)."""
    return np.einsum("i,iab->ab", np.asarray(v, dtype=float), _PAULI_VEC)


def correlation_observable(t: np.ndarray) -> np.ndarray:
    """The two-qubit observable sum_ij T_ij sigma_i (x) sigma_j."""
    return np.einsum("ij,ijab->ab", np.asarray(t, dtype=float), _PAULI_PAIRS)


def _per_input_vectors(v, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.shape == (3,):
        arr = np.stack([arr, arr])
    if arr.shape != (2, 3):
        raise ValueError(f"{name} must be a 3-vector or one per input bit, got shape {arr.shape}")
    norms = np.linalg.norm(arr, axis=1)
    if np.abs(norms - 1.0).max() > _UNIT_TOL:
        raise ValueError(f"{name} must be unit vectors, got norms {norms}")
    arr.setflags(write=False)
    return arr


def _per_input_tensors(t, name: str) -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    if arr.shape == (3, 3):
        arr = np.stack([arr, arr])
    if arr.shape != (2, 3, 3):
        raise ValueError(f"{name} must be 3x3 or one per input bit, got shape {arr.shape}")
    norms = np.sqrt((arr**2).sum(axis=(1, 2)))
    if np.abs(norms - 1.0).max() > _UNIT_TOL:
        raise ValueError(f"{name} must have unit Frobenius norm, got {norms}")
    arr.setflags(write=False)
    return arr


def _truth_table(bits, name: str) -> np.ndarray:
    arr = np.asarray(bits, dtype=int)
    if arr.shape == (4,):
        arr = arr.reshape(2, 2)
    if arr.shape != (2, 2) or not np.isin(arr, (0, 1)).all():
        raise ValueError(f"{name} must be four bits (outcome-major), got {bits}")
    arr.setflags(write=False)
    return arr


def _unit(v, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"{name} must be a 3-vector")
    if abs(np.linalg.norm(arr) - 1.0) > _UNIT_TOL:
        raise ValueError(f"{name} must be a unit vector, got norm {np.linalg.norm(arr)}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class AliceStrategy:
    """Alice's single map: measure ``measure_axis`` on the incoming qubit
    (outcome is her guess ``x``), encode ``encode_table[x, a]`` along
    ``encode_axis`` on the outgoing qubit, with ``corr_tensor`` coupling
    the two sides.  All of these may depend on her input bit ``a``.
    """

    mode: str
    measure_axis: np.ndarray  # (2, 3), indexed by a
    encode_axis: np.ndarray  # (2, 3)
    corr_tensor: np.ndarray  # (2, 3, 3)
    encode_table: np.ndarray  # (2, 2), indexed [x, a]


@dataclass(frozen=True, eq=False)
class BobStrategy:
    """Bob's two conditional maps.  When asked to guess (b' = 1) he
    measures ``guess_axis`` and re-prepares the fixed state with Bloch
    vector ``guess_reprep_bloch``; when asked to send (b' = 0) he measures
    ``send_measure_axis`` and encodes ``send_encode_table[y, b]`` along
    ``send_encode_axis``, with ``send_corr_tensor`` coupling the sides.
    """

    mode: str
    guess_axis: np.ndarray  # (3,)
    guess_reprep_bloch: np.ndarray  # (3,), |.| <= 1
    send_measure_axis: np.ndarray  # (3,)
    send_encode_axis: np.ndarray  # (3,)
    send_corr_tensor: np.ndarray  # (3, 3)
    send_encode_table: np.ndarray  # (2, 2), indexed [y, b]


@dataclass(frozen=True, eq=False)
class StrategyPair:
    alice: AliceStrategy
    bob: BobStrategy


def _check_alice(strategy: AliceStrategy) -> None:
    for a in range(2):
        for x in range(2):
            op = alice_cj(strategy, x, a)
            if not is_psd(op.matrix, _CP_TOL):
                raise ValueError(
                    f"rejected: Alice's map for (x={x}, a={a}) is not completely positive"
                )
        if not is_tp(alice_instrument(strategy, a).summed(), _CP_TOL):
            raise ValueError(f"rejected: Alice's instrument for a={a} is not trace preserving")


def _check_bob(strategy: BobStrategy) -> None:
    if np.linalg.norm(strategy.guess_reprep_bloch) > 1.0 + _UNIT_TOL:
        raise ValueError("rejected: Bob's re-prepared state is outside the Bloch ball")
    for bprime in range(2):
        for b in range(2):
            for y in range(2):
                op = bob_cj(strategy, y, b, bprime)
                if not is_psd(op.matrix, _CP_TOL):
                    raise ValueError(
                        f"rejected: Bob's map for (y={y}, b={b}, b'={bprime}) is not completely positive"
                    )
            if not is_tp(bob_instrument(strategy, b, bprime).summed(), _CP_TOL):
                raise ValueError(f"rejected: Bob's instrument for (b={b}, b'={bprime}) is not trace preserving")


def measure_reprepare_alice(measure_axis, encode_axis, encode_table) -> AliceStrategy:
    """Alice's map in product form; the correlation tensor is forced to the
    outer product of the measurement and encoding axes, so the map is CP
    for any pair of unit vectors.
    """
    m = _per_input_vectors(measure_axis, "measure_axis")
    n = _per_input_vectors(encode_axis, "encode_axis")
    corr = np.einsum("ai,aj->aij", m, n)
    corr.setflags(write=False)
    strategy = AliceStrategy(
        mode=MODE_MEASURE_REPREPARE,
        measure_axis=m,
        encode_axis=n,
        corr_tensor=corr,
        encode_table=_truth_table(encode_table, "encode_table"),
    )
    _check_alice(strategy)
    return strategy


def correlated_alice(measure_axis, encode_axis, corr_tensor, encode_table) -> AliceStrategy:
    """Alice's map with a free correlation tensor; rejected at construction
    unless every resulting map is completely positive.
    """
    strategy = AliceStrategy(
        mode=MODE_CORRELATED,
        measure_axis=_per_input_vectors(measure_axis, "measure_axis"),
        encode_axis=_per_input_vectors(encode_axis, "encode_axis"),
        corr_tensor=_per_input_tensors(corr_tensor, "corr_tensor"),
        encode_table=_truth_table(encode_table, "encode_table"),
    )
    _check_alice(strategy)
    return strategy


def measure_reprepare_bob(
    guess_axis,
    send_measure_axis,
    send_encode_axis,
    send_encode_table,
    guess_reprep_bloch=(0.0, 0.0, 0.0),
) -> BobStrategy:
    t = _unit(send_measure_axis, "send_measure_axis")
    o = _unit(send_encode_axis, "send_encode_axis")
    corr = np.outer(t, o)
    corr.setflags(write=False)
    bloch = np.asarray(guess_reprep_bloch, dtype=float)
    bloch.setflags(write=False)
    strategy = BobStrategy(
        mode=MODE_MEASURE_REPREPARE,
        guess_axis=_unit(guess_axis, "guess_axis"),
        guess_reprep_bloch=bloch,
        send_measure_axis=t,
        send_encode_axis=o,
        send_corr_tensor=corr,
        send_encode_table=_truth_table(send_encode_table, "send_encode_table"),
    )
    _check_bob(strategy)
    return strategy


def correlated_bob(
    guess_axis,
    send_measure_axis,
    send_encode_axis,
    send_corr_tensor,
    send_encode_table,
    guess_reprep_bloch=(0.0, 0.0, 0.0),
) -> BobStrategy:
    corr = np.asarray(send_corr_tensor, dtype=float)
    if corr.shape != (3, 3):
        raise ValueError("send_corr_tensor must be 3x3")
    if abs(np.sqrt((corr**2).sum()) - 1.0) > _UNIT_TOL:
        raise ValueError("send_corr_tensor must have unit Frobenius norm")
    corr.setflags(write=False)
    bloch = np.asarray(guess_reprep_bloch, dtype=float)
    bloch.setflags(write=False)
    strategy = BobStrategy(
        mode=MODE_CORRELATED,
        guess_axis=_unit(guess_axis, "guess_axis"),
        guess_reprep_bloch=bloch,
        send_measure_axis=_unit(send_measure_axis, "send_measure_axis"),
        send_encode_axis=_unit(send_encode_axis, "send_encode_axis"),
        send_corr_tensor=corr,
        send_encode_table=_truth_table(send_encode_table, "send_encode_table"),
    )
    _check_bob(strategy)
    return strategy


def alice_cj(strategy: AliceStrategy, x: int, a: int) -> CjOperator:
    """Choi form of Alice's map for guess ``x`` and input ``a`` (A1 -> A2)."""
    f = int(strategy.encode_table[x, a])
    mat = 0.25 * (
        np.eye(4, dtype=complex)
        + (-1.0) ** x * np.kron(axis_observable(strategy.measure_axis[a]), np.eye(2))
        + (-1.0) ** f * np.kron(np.eye(2), axis_observable(strategy.encode_axis[a]))
        + (-1.0) ** (f ^ x) * correlation_observable(strategy.corr_tensor[a])
    )
    return CjOperator(matrix=mat, in_dim=2, out_dim=2, in_label="A1", out_label="A2")


def bob_cj(strategy: BobStrategy, y: int, b: int, bprime: int) -> CjOperator:
    """Choi form of Bob's map for guess ``y``, input ``b``, role ``b'``
    (B1 -> B2).
    """
    if bprime == 1:
        reprep = 0.5 * (np.eye(2, dtype=complex) + axis_observable(strategy.guess_reprep_bloch))
        mat = np.kron(
            0.5 * (np.eye(2, dtype=complex) + (-1.0) ** y * axis_observable(strategy.guess_axis)),
            reprep,
        )
    else:
        g = int(strategy.send_encode_table[y, b])
        mat = 0.25 * (
            np.eye(4, dtype=complex)
            + (-1.0) ** y * np.kron(axis_observable(strategy.send_measure_axis), np.eye(2))
            + (-1.0) ** g * np.kron(np.eye(2), axis_observable(strategy.send_encode_axis))
            + (-1.0) ** (g ^ y) * correlation_observable(strategy.send_corr_tensor)
        )
    return CjOperator(matrix=mat, in_dim=2, out_dim=2, in_label="B1", out_label="B2")


def alice_instrument(strategy: AliceStrategy, a: int) -> Instrument:
    return Instrument(outcomes=tuple((x, alice_cj(strategy, x, a)) for x in range(2)))


def bob_instrument(strategy: BobStrategy, b: int, bprime: int) -> Instrument:
    return Instrument(outcomes=tuple((y, bob_cj(strategy, y, b, bprime)) for y in range(2)))


def joint_probability(w: ProcessMatrix, a_op: CjOperator, b_op: CjOperator) -> float:
    """Trace pairing Tr[W (M_A (x) M_B)] of the process with two Choi maps."""
    if (a_op.in_label, a_op.out_label) != ("A1", "A2"):
        raise ValueError(f"Alice operator on legs {(a_op.in_label, a_op.out_label)}, expected ('A1', 'A2')")
    if (b_op.in_label, b_op.out_label) != ("B1", "B2"):
        raise ValueError(f"Bob operator on legs {(b_op.in_label, b_op.out_label)}, expected ('B1', 'B2')")
    if a_op.in_dim != w.layout.dim_of("A1") or b_op.in_dim != w.layout.dim_of("B1"):
        raise ValueError("operator dimensions do not match the process layout")
    val = np.einsum("ij,ji->", w.matrix, np.kron(a_op.matrix, b_op.matrix))
    if abs(val.imag) > 1e-9:
        raise ValueError(f"probability has imaginary part {val.imag:.3e}")
    return float(val.real)


def joint_distribution(w: ProcessMatrix, pair: StrategyPair) -> np.ndarray:
    """P(x, y | a, b, b') as an array indexed [x, y, a, b, bprime]."""
    dist = np.empty((2, 2, 2, 2, 2))
    for a, b, bprime in product(range(2), repeat=3):
        for x, y in product(range(2), repeat=2):
            dist[x, y, a, b, bprime] = joint_probability(
                w, alice_cj(pair.alice, x, a), bob_cj(pair.bob, y, b, bprime)
            )
    return dist


def success_probability(w: ProcessMatrix, pair: StrategyPair) -> float:
    """The game score: both role conditionals averaged over uniform a, b."""
    dist = joint_distribution(w, pair)
    p_alice = 0.0  # x = b given b' = 0
    p_bob = 0.0  # y = a given b' = 1
    for a, b in product(range(2), repeat=2):
        p_alice += dist[b, :, a, b, 0].sum()
        p_bob += dist[:, a, a, b, 1].sum()
    return 0.5 * (p_alice / 4.0 + p_bob / 4.0)


@dataclass(frozen=True)
class ProcessCoefficients:
    """The real coefficient tensors of a process, grouped by leg support
    and rescaled so the identity term has weight one.  Index order inside
    each tensor follows the leg order of its name.
    """

    a1: np.ndarray  # (3,)
    b1: np.ndarray  # (3,)
    a1_b2: np.ndarray  # (3, 3)
    a1_b1_b2: np.ndarray  # (3, 3, 3)
    a2_b1: np.ndarray  # (3, 3)
    a1_a2_b1: np.ndarray  # (3, 3, 3)
    a1_b1: np.ndarray  # (3, 3)


def process_coefficients(w: ProcessMatrix) -> ProcessCoefficients:
    _require_canonical(w.layout)
    if not w.layout.all_qubits():
        raise ValueError("coefficient extraction requires qubit legs")
    full = hs_coefficients(w.matrix, w.layout).real * 4.0
    return ProcessCoefficients(
        a1=full[1:, 0, 0, 0].copy(),
        b1=full[0, 0, 1:, 0].copy(),
        a1_b2=full[1:, 0, 0, 1:].copy(),
        a1_b1_b2=full[1:, 0, 1:, 1:].copy(),
        a2_b1=full[0, 1:, 1:, 0].copy(),
        a1_a2_b1=full[1:, 1:, 1:, 0].copy(),
        a1_b1=full[1:, 0, 1:, 0].copy(),
    )


def table_weights(table: np.ndarray) -> tuple[float, float]:
    """Weights with which an encoding table routes the signal.

    For a table ``T[outcome, input]`` the returned pair is the input-
    averaged weight on the plain encoding axis and on the correlation
    tensor; each lies in [-1, 1] and their magnitudes sum to at most one.
    """
    signs = (-1.0) ** np.asarray(table, dtype=float)
    plus = 0.5 * (signs[0] + signs[1])  # per input bit
    minus = 0.5 * (signs[0] - signs[1])
    w_state = 0.5 * (plus[0] - plus[1])
    w_corr = 0.5 * (minus[0] - minus[1])
    return float(w_state), float(w_corr)


def analytic_probabilities(w: ProcessMatrix, pair: StrategyPair) -> tuple[float, float]:
    """Closed forms for the two success conditionals.

    Both are linear in the process coefficients: Alice's guess reads
    Bob's encoding through the A1B2 or A1B1B2 tensor (depending on his
    encoding table), Bob's guess reads Alice's through A2B1 or A1A2B1.
    Agrees with the marginalised trace-rule values to float precision.
    """
    co = process_coefficients(w)
    alice, bob = pair.alice, pair.bob

    g_state, g_corr = table_weights(bob.send_encode_table)
    m_mean = alice.measure_axis.mean(axis=0)
    p_alice = 0.5 * (
        1.0
        + g_state * float(np.einsum("i,ij,j->", m_mean, co.a1_b2, bob.send_encode_axis))
        + g_corr * float(np.einsum("i,ijk,jk->", m_mean, co.a1_b1_b2, bob.send_corr_tensor))
    )

    signs = (-1.0) ** np.asarray(alice.encode_table, dtype=float)  # [x, a]
    p_bob = 0.5
    for a in range(2):
        nu_state = 0.5 * (signs[0, a] + signs[1, a])
        nu_corr = 0.5 * (signs[0, a] - signs[1, a])
        weight = 0.5 * (-1.0) ** a
        p_bob += weight * nu_state * 0.5 * float(
            np.einsum("i,ij,j->", alice.encode_axis[a], co.a2_b1, bob.guess_axis)
        )
        p_bob += weight * nu_corr * 0.5 * float(
            np.einsum("ij,ijk,k->", alice.corr_tensor[a], co.a1_a2_b1, bob.guess_axis)
        )
    return float(p_alice), float(p_bob)


def saturating_strategies() -> StrategyPair:
    """The measurement-repreparation pair reaching (2 + sqrt 2)/4 on the
    maximally causally non-separable process: both parties work in the
    z-basis except Bob's sending measurement, which uses x.
    """
    z = (0.0, 0.0, 1.0)
    alice = measure_reprepare_alice(
        measure_axis=z, encode_axis=z, encode_table=[0, 1, 0, 1]  # encodes a
    )
    bob = measure_reprepare_bob(
        guess_axis=z,
        send_measure_axis=(1.0, 0.0, 0.0),
        send_encode_axis=z,
        send_encode_table=[0, 1, 1, 0],  # encodes y xor b
    )
    return StrategyPair(alice=alice, bob=bob)


# --- file format -----------------------------------------------------------
#
# A strategy document is JSON: unit vectors are 3-element arrays (or one
# per input bit), tensors are 3x3 arrays, encoding functions are 4-bit
# truth tables flattened outcome-major (index 2*outcome + input), and the
# mode is a string.


def _vector_out(arr: np.ndarray) -> list:
    if arr.ndim == 2 and np.allclose(arr[0], arr[1]):
        return [float(v) for v in arr[0]]
    return arr.tolist()


def strategy_pair_to_dict(pair: StrategyPair) -> dict:
    alice: dict = {
        "mode": pair.alice.mode,
        "measure_axis": _vector_out(pair.alice.measure_axis),
        "encode_axis": _vector_out(pair.alice.encode_axis),
        "encode_table": [int(v) for v in pair.alice.encode_table.reshape(-1)],
    }
    if pair.alice.mode == MODE_CORRELATED:
        alice["corr_tensor"] = pair.alice.corr_tensor.tolist()
    bob: dict = {
        "mode": pair.bob.mode,
        "guess_axis": [float(v) for v in pair.bob.guess_axis],
        "guess_reprep_bloch": [float(v) for v in pair.bob.guess_reprep_bloch],
        "send_measure_axis": [float(v) for v in pair.bob.send_measure_axis],
        "send_encode_axis": [float(v) for v in pair.bob.send_encode_axis],
        "send_encode_table": [int(v) for v in pair.bob.send_encode_table.reshape(-1)],
    }
    if pair.bob.mode == MODE_CORRELATED:
        bob["send_corr_tensor"] = pair.bob.send_corr_tensor.tolist()
    return {"alice": alice, "bob": bob}


def strategy_pair_from_dict(doc: dict) -> StrategyPair:
    a = doc["alice"]
    mode = a.get("mode", MODE_MEASURE_REPREPARE)
    if mode == MODE_CORRELATED:
        alice = correlated_alice(a["measure_axis"], a["encode_axis"], a["corr_tensor"], a["encode_table"])
    elif mode == MODE_MEASURE_REPREPARE:
        alice = measure_reprepare_alice(a["measure_axis"], a["encode_axis"], a["encode_table"])
    else:
        raise ValueError(f"unknown Alice mode {mode!r}")
    b = doc["bob"]
    mode = b.get("mode", MODE_MEASURE_REPREPARE)
    bloch = b.get("guess_reprep_bloch", (0.0, 0.0, 0.0))
    if mode == MODE_CORRELATED:
        bob = correlated_bob(
            b["guess_axis"],
            b["send_measure_axis"],
            b["send_encode_axis"],
            b["send_corr_tensor"],
            b["send_encode_table"],
            guess_reprep_bloch=bloch,
        )
    elif mode == MODE_MEASURE_REPREPARE:
        bob = measure_reprepare_bob(
            b["guess_axis"],
            b["send_measure_axis"],
            b["send_encode_axis"],
            b["send_encode_table"],
            guess_reprep_bloch=bloch,
        )
    else:
        raise ValueError(f"unknown Bob mode {mode!r}")
    return StrategyPair(alice=alice, bob=bob)


def save_strategy_pair(pair: StrategyPair, path: str | Path) -> None:
    Path(path).write_text(json.dumps(strategy_pair_to_dict(pair), indent=2, sort_keys=True) + "\n")


def load_strategy_pair(path: str | Path) -> StrategyPair:
    return strategy_pair_from_dict(json.loads(Path(path).read_text()))

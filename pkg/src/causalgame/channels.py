"""Completely positive maps in Choi form, and instruments built from them.

A linear map ``M`` from operators on the input space to operators on the
output space is stored as the matrix ``[(Id (x) M)(|phi+><phi+|)]^T`` with
the unnormalised maximally entangled vector ``|phi+> = sum_j |jj>``.  The
overall transpose is taken in the computational basis and applied exactly
once; the input factor always comes first.  Under this convention a map
is completely positive iff the matrix is PSD, and trace preserving iff
the partial trace over the output factor is the identity on the input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import is_psd


@dataclass(frozen=True, eq=False)
class CjOperator:
    """A CP map represented as an operator on input (x) output."""

    matrix: np.ndarray
    in_dim: int
    out_dim: int
    in_label: str = "in"
    out_label: str = "out"

    def __post_init__(self) -> None:
        d = self.in_dim * self.out_dim
        if self.matrix.shape != (d, d):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match in_dim*out_dim = {d}"
            )


@dataclass(frozen=True, eq=False)
class Instrument:
    """Outcome-labelled CP maps that should sum to a trace-preserving map."""

    outcomes: tuple[tuple[object, CjOperator], ...]

    def summed(self) -> CjOperator:
        first = self.outcomes[0][1]
        total = sum(op.matrix for _, op in self.outcomes)
        return CjOperator(
            matrix=total,
            in_dim=first.in_dim,
            out_dim=first.out_dim,
            in_label=first.in_label,
            out_label=first.out_label,
        )


def choi_from_kraus(
    kraus: list[np.ndarray] | tuple[np.ndarray, ...],
    in_dim: int,
    out_dim: int,
    *,
    in_label: str = "in",
    out_label: str = "out",
) -> CjOperator:
    """Build the Choi-form operator of the map ``rho -> sum_k K rho K^dag``.

    Each Kraus operator must be ``out_dim x in_dim``.  An empty list gives
    the zero operator (CP but not trace preserving).
    """
    d = in_dim * out_dim
    acc = np.zeros((d, d), dtype=complex)
    for k in kraus:
        k = np.asarray(k, dtype=complex)
        if k.shape != (out_dim, in_dim):
            raise ValueError(f"Kraus operator shape {k.shape} is not ({out_dim}, {in_dim})")
        # (Id (x) K)|phi+> has components v[j*out + mu] = K[mu, j].
        v = k.T.reshape(-1)
        acc += np.outer(v, v.conj())
    return CjOperator(matrix=acc.T, in_dim=in_dim, out_dim=out_dim, in_label=in_label, out_label=out_label)


def apply_cj(op: CjOperator, rho: np.ndarray) -> np.ndarray:
    """Apply the represented map to a state on the input space."""
    if rho.shape != (op.in_dim, op.in_dim):
        raise ValueError(f"state shape {rho.shape} does not match input dimension {op.in_dim}")
    # Undo the storage transpose, then contract the input factor with rho.
    choi = op.matrix.T.reshape(op.in_dim, op.out_dim, op.in_dim, op.out_dim)
    return np.einsum("kj,kajb->ab", np.asarray(rho, dtype=complex), choi)


def is_cp(op: CjOperator, tol: float = 1e-9) -> bool:
    """Complete positivity = positive semidefiniteness of the stored matrix."""
    return is_psd(op.matrix, tol)


def is_tp(op: CjOperator, tol: float = 1e-9) -> bool:
    """Trace preservation: tracing out the output factor leaves the identity."""
    reduced = np.einsum(
        "iaja->ij", op.matrix.reshape(op.in_dim, op.out_dim, op.in_dim, op.out_dim)
    )
    return bool(np.abs(reduced - np.eye(op.in_dim)).max() <= tol)


def instrument_valid(inst: Instrument, tol: float = 1e-9) -> bool:
    """Every outcome CP, and the outcome sum trace preserving."""
    if not inst.outcomes:
        return False
    return all(is_cp(op, tol) for _, op in inst.outcomes) and is_tp(inst.summed(), tol)

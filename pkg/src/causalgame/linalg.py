"""Dense complex linear algebra over labelled tensor-product spaces.

All operators live in plain ``numpy`` arrays; this module owns the
conventions every other module relies on:

* legs are labelled subsystems stored in a fixed order (canonically
  ``A1, A2, B1, B2``),
* each leg of dimension ``d`` carries a Hermitian operator basis
  ``{s_0 = Id, s_1, ...}`` with ``Tr[s_i s_j] = d * delta_ij`` and
  ``Tr[s_j] = 0`` for ``j > 0`` (the single-qubit case is the Pauli
  basis in the order I, X, Y, Z),
* expansion coefficients are normalised as ``Tr[M * B] / D`` where
  ``B`` is a product-basis element and ``D`` the total dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

CANONICAL_LABELS = ("A1", "A2", "B1", "B2")

PAULI_LABELS = "IXYZ"

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass(frozen=True)
class SpaceLayout:
    """Ordered list of labelled subsystems ("legs") with their dimensions."""

    legs: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        labels = [lab for lab, _ in self.legs]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate leg labels: {labels}")
        for lab, dim in self.legs:
            if dim <= 0 or dim % 2 != 0:
                raise ValueError(f"leg {lab!r} needs a positive even dimension, got {dim}")

    @classmethod
    def qubits(cls, labels: tuple[str, ...] = CANONICAL_LABELS) -> "SpaceLayout":
        return cls(tuple((lab, 2) for lab in labels))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lab for lab, _ in self.legs)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self.legs)

    @property
    def total_dim(self) -> int:
        out = 1
        for _, dim in self.legs:
            out *= dim
        return out

    def index(self, label: str) -> int:
        for pos, (lab, _) in enumerate(self.legs):
            if lab == label:
                return pos
        raise ValueError(f"unknown leg label {label!r}; layout has {self.labels}")

    def dim_of(self, label: str) -> int:
        return self.legs[self.index(label)][1]

    def all_qubits(self) -> bool:
        return all(dim == 2 for _, dim in self.legs)


@dataclass(frozen=True)
class HsTerm:
    """One product-basis component: a per-leg basis index and a real weight.

    Index 0 on a leg is the identity; the coefficient is normalised so
    that ``hs_compose`` is the plain linear combination of basis products.
    """

    indices: tuple[int, ...]
    coeff: float


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two operators."""
    return np.kron(a, b)


def kron_all(*mats: np.ndarray) -> np.ndarray:
    """Kronecker product of several operators, left to right."""
    out = np.array([[1.0 + 0.0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


@lru_cache(maxsize=None)
def leg_basis(dim: int) -> tuple[np.ndarray, ...]:
    """Hermitian basis of a single leg with ``Tr[b_i b_j] = dim * delta_ij``.

    For ``dim == 2`` this is exactly (I, X, Y, Z).  For larger even
    dimensions a generalised Gell-Mann construction is rescaled to the
    same normalisation.
    """
    if dim == 2:
        basis = [PAULI_I, PAULI_X, PAULI_Y, PAULI_Z]
    else:
        scale = np.sqrt(dim / 2.0)
        basis = [np.eye(dim, dtype=complex)]
        for k in range(dim):
            for j in range(k):
                sym = np.zeros((dim, dim), dtype=complex)
                sym[j, k] = sym[k, j] = 1.0
                asym = np.zeros((dim, dim), dtype=complex)
                asym[j, k] = -1.0j
                asym[k, j] = 1.0j
                basis.append(scale * sym)
                basis.append(scale * asym)
        for l in range(1, dim):
            diag = np.zeros((dim, dim), dtype=complex)
            for m in range(l):
                diag[m, m] = 1.0
            diag[l, l] = -float(l)
            basis.append(scale * np.sqrt(2.0 / (l * (l + 1))) * diag)
    for mat in basis:
        mat.setflags(write=False)
    return tuple(basis)


@lru_cache(maxsize=None)
def product_basis(layout: SpaceLayout) -> np.ndarray:
    """All product-basis elements of a layout, stacked as ``(N, D, D)``.

    Ordering is row-major over the per-leg indices, i.e. the last leg's
    index varies fastest.
    """
    per_leg = [leg_basis(dim) for dim in layout.dims]
    total = layout.total_dim
    n_terms = int(np.prod([dim * dim for dim in layout.dims]))
    out = np.empty((n_terms, total, total), dtype=complex)
    for k, combo in enumerate(product(*[range(dim * dim) for dim in layout.dims])):
        out[k] = kron_all(*[per_leg[leg][idx] for leg, idx in enumerate(combo)])
    out.setflags(write=False)
    return out


def embed(op: np.ndarray, target_legs: list[str] | tuple[str, ...], layout: SpaceLayout) -> np.ndarray:
    """Tensor ``op`` (given on ``target_legs``, in that order) with identity
    on every other leg, returning the operator in the layout's leg order.
    """
    positions = [layout.index(lab) for lab in target_legs]
    target_dims = [layout.dims[p] for p in positions]
    expected = int(np.prod(target_dims))
    if op.shape != (expected, expected):
        raise ValueError(
            f"operator shape {op.shape} does not match target legs {tuple(target_legs)} "
            f"of total dimension {expected}"
        )
    rest = [p for p in range(len(layout.legs)) if p not in positions]
    rest_dim = int(np.prod([layout.dims[p] for p in rest], initial=1))
    full = np.kron(op, np.eye(rest_dim, dtype=complex))
    # Current leg order is target_legs + rest; permute axes back to layout order.
    current = positions + rest
    cur_dims = [layout.dims[p] for p in current]
    perm = [current.index(p) for p in range(len(layout.legs))]
    n = len(current)
    tensor = full.reshape(cur_dims + cur_dims)
    tensor = tensor.transpose(perm + [n + p for p in perm])
    return np.ascontiguousarray(tensor.reshape(layout.total_dim, layout.total_dim))


def partial_trace(m: np.ndarray, layout: SpaceLayout, traced_legs: list[str] | tuple[str, ...]) -> np.ndarray:
    """Trace out the given legs; the remaining legs keep the layout order."""
    positions = sorted(layout.index(lab) for lab in traced_legs)
    dims = list(layout.dims)
    tensor = m.reshape(dims + dims)
    n = len(dims)
    for pos in reversed(positions):
        tensor = np.trace(tensor, axis1=pos, axis2=pos + n)
        n -= 1
    remaining = int(np.prod([d for p, d in enumerate(dims) if p not in positions], initial=1))
    return tensor.reshape(remaining, remaining)


def hs_coefficients(m: np.ndarray, layout: SpaceLayout) -> np.ndarray:
    """Expansion coefficients ``Tr[m * B_k] / D`` for every product-basis
    element, shaped ``(d_0^2, d_1^2, ...)`` over the legs.  Complex output;
    Hermitian inputs give coefficients that are real up to rounding.
    """
    basis = product_basis(layout)
    coeffs = np.einsum("kij,ji->k", basis, m) / layout.total_dim
    return coeffs.reshape([dim * dim for dim in layout.dims])


def hs_decompose(
    m: np.ndarray,
    layout: SpaceLayout,
    *,
    drop_tol: float = 1e-12,
    imag_tol: float = 1e-9,
) -> list[HsTerm]:
    """Decompose a Hermitian operator into product-basis terms.

    Terms with |coefficient| <= ``drop_tol`` are omitted.  Raises if any
    coefficient has an imaginary part above ``imag_tol`` (non-Hermitian
    input).
    """
    if m.shape != (layout.total_dim, layout.total_dim):
        raise ValueError(f"operator shape {m.shape} does not match layout dimension {layout.total_dim}")
    coeffs = hs_coefficients(m, layout)
    worst = np.abs(coeffs.imag).max()
    if worst > imag_tol:
        raise ValueError(f"coefficients are not real (max imaginary part {worst:.3e}); input not Hermitian?")
    terms = []
    for combo in product(*[range(dim * dim) for dim in layout.dims]):
        c = float(coeffs[combo].real)
        if abs(c) > drop_tol:
            terms.append(HsTerm(indices=combo, coeff=c))
    return terms


def hs_compose(terms: list[HsTerm] | tuple[HsTerm, ...], layout: SpaceLayout) -> np.ndarray:
    """Linear combination of product-basis elements; inverse of hs_decompose."""
    shape = tuple(dim * dim for dim in layout.dims)
    for term in terms:
        if len(term.indices) != len(layout.legs):
            raise ValueError(f"term {term.indices} does not match {len(layout.legs)} legs")
        for leg, idx in enumerate(term.indices):
            if not 0 <= idx < shape[leg]:
                raise ValueError(f"basis index {idx} out of range for leg {layout.labels[leg]}")
    total = layout.total_dim
    if len(terms) >= 64:
        # Dense accumulation against the cached basis stack.
        weights = np.zeros(int(np.prod(shape)), dtype=float)
        for term in terms:
            weights[np.ravel_multi_index(term.indices, shape)] += term.coeff
        return np.einsum("k,kij->ij", weights, product_basis(layout))
    per_leg = [leg_basis(dim) for dim in layout.dims]
    out = np.zeros((total, total), dtype=complex)
    for term in terms:
        out += term.coeff * kron_all(*[per_leg[leg][idx] for leg, idx in enumerate(term.indices)])
    return out


def hermitian_eigensystem(m: np.ndarray, *, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.

    Raises if the input deviates from Hermiticity by more than ``tol``.
    """
    dev = np.abs(m - m.conj().T).max()
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    vals, vecs = np.linalg.eigh(m)
    return vals, vecs


def psd_sqrt(m: np.ndarray, *, clamp_tol: float = 1e-10) -> np.ndarray:
    """Positive square root of a PSD Hermitian matrix.

    Eigenvalues in ``[-clamp_tol, 0)`` are treated as solver noise and
    clamped to zero; anything more negative is an error.
    """
    vals, vecs = hermitian_eigensystem(m, tol=max(clamp_tol, 1e-10))
    if vals.min() < -clamp_tol:
        raise ValueError(f"matrix has negative eigenvalue {vals.min():.3e} beyond tolerance {clamp_tol:.1e}")
    vals = np.clip(vals, 0.0, None)
    root = (vecs * np.sqrt(vals)) @ vecs.conj().T
    return 0.5 * (root + root.conj().T)


def is_psd(m: np.ndarray, tol: float = 1e-9) -> bool:
    """True when the smallest eigenvalue is >= -tol."""
    herm = 0.5 * (m + m.conj().T)
    return bool(np.linalg.eigvalsh(herm).min() >= -tol)


def is_hermitian(m: np.ndarray, tol: float = 1e-12) -> bool:
    return bool(np.abs(m - m.conj().T).max() <= tol)

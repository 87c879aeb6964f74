"""Bipartite process matrices: construction, validity, and separability.

A process matrix W is a PSD operator over A1 (x) A2 (x) B1 (x) B2 with
``Tr W = d_A2 * d_B2`` whose basis expansion only touches a fixed set of
term types (identified by which legs carry a non-identity basis element).
The allowed types split into three groups: signalling from B to A
(``A1B2``, ``A1B1B2``), signalling from A to B (``A2B1``, ``A1A2B1``),
and no-signalling terms (``A1``, ``B1``, ``A1B1``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .linalg import (
    CANONICAL_LABELS,
    PAULI_LABELS,
    HsTerm,
    SpaceLayout,
    hs_coefficients,
    hs_compose,
    is_psd,
    kron_all,
    leg_basis,
)

ALLOWED_TERM_TYPES = frozenset(
    {
        frozenset(),
        frozenset({"A1", "B2"}),
        frozenset({"A1", "B1", "B2"}),
        frozenset({"A2", "B1"}),
        frozenset({"A1", "A2", "B1"}),
        frozenset({"A1"}),
        frozenset({"B1"}),
        frozenset({"A1", "B1"}),
    }
)


def canonical_layout() -> SpaceLayout:
    return SpaceLayout.qubits()


@dataclass(frozen=True, eq=False)
class ProcessMatrix:
    matrix: np.ndarray
    layout: SpaceLayout

    def __post_init__(self) -> None:
        d = self.layout.total_dim
        if self.matrix.shape != (d, d):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match layout dimension {d}")

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


@dataclass
class ValidityReport:
    psd: bool
    trace_ok: bool
    forbidden_terms: list[tuple[tuple[str, ...], float]] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.psd and self.trace_ok and not self.forbidden_terms

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "psd": self.psd,
            "trace_ok": self.trace_ok,
            "forbidden_terms": [
                {"legs": list(legs), "coeff": coeff} for legs, coeff in self.forbidden_terms
            ],
        }


@dataclass(frozen=True)
class WernerParams:
    eta1: float
    eta2: float

    def is_valid(self, tol: float = 1e-9) -> bool:
        return self.eta1**2 + self.eta2**2 <= 1.0 + tol


def _require_canonical(layout: SpaceLayout) -> None:
    if layout.labels != CANONICAL_LABELS:
        raise ValueError(f"expected legs in order {CANONICAL_LABELS}, got {layout.labels}")


def validate_process(
    w: ProcessMatrix,
    *,
    psd_tol: float = 1e-9,
    trace_tol: float = 1e-9,
    term_tol: float = 1e-9,
) -> ValidityReport:
    """Check positivity, trace normalisation, and the allowed term types.

    Every basis coefficient on a forbidden term type whose magnitude
    exceeds ``term_tol`` is listed in the report.
    """
    _require_canonical(w.layout)
    psd = is_psd(w.matrix, psd_tol)
    expected_trace = w.layout.dim_of("A2") * w.layout.dim_of("B2")
    trace_ok = bool(abs(np.trace(w.matrix).real - expected_trace) <= trace_tol)
    coeffs = hs_coefficients(w.matrix, w.layout)
    forbidden: list[tuple[tuple[str, ...], float]] = []
    for combo in np.ndindex(coeffs.shape):
        c = coeffs[combo]
        if abs(c) <= term_tol:
            continue
        term_type = frozenset(lab for lab, idx in zip(w.layout.labels, combo) if idx > 0)
        if term_type not in ALLOWED_TERM_TYPES:
            forbidden.append((tuple(sorted(term_type)), float(c.real)))
    return ValidityReport(psd=psd, trace_ok=trace_ok, forbidden_terms=forbidden)


def _signal_terms() -> tuple[np.ndarray, np.ndarray]:
    """The two Pauli products carrying the A->B and B->A signals."""
    identity, x, _, z = leg_basis(2)
    a_to_b = kron_all(identity, z, z, identity)  # A2 (x) B1 correlation
    b_to_a = kron_all(z, identity, x, z)  # A1 (x) B1 (x) B2 correlation
    return a_to_b, b_to_a


def make_werner(params: WernerParams) -> ProcessMatrix:
    """Two-parameter family interpolating noise, fixed-order channels, and
    the maximally causally non-separable process.  PSD iff
    ``eta1^2 + eta2^2 <= 1`` (not enforced here; see validate_process).
    """
    layout = canonical_layout()
    a_to_b, b_to_a = _signal_terms()
    w = 0.25 * (np.eye(16, dtype=complex) + params.eta1 * a_to_b + params.eta2 * b_to_a)
    return ProcessMatrix(matrix=w, layout=layout)


def make_ocb() -> ProcessMatrix:
    """The qubit process saturating the quantum bound of the causal game;
    equals the two-parameter family at eta1 = eta2 = 1/sqrt(2).
    """
    s = 1.0 / np.sqrt(2.0)
    return make_werner(WernerParams(eta1=s, eta2=s))


def make_noise() -> ProcessMatrix:
    """The totally noisy process Id/4: no signal in either direction."""
    return make_werner(WernerParams(eta1=0.0, eta2=0.0))


def make_causal_channel(direction: str, sign: int = +1) -> ProcessMatrix:
    """A fixed-order channel process: ``a-to-b`` puts the signal on the
    A2B1 correlation, ``b-to-a`` on the A1B1B2 correlation.
    """
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    if direction == "a-to-b":
        return make_werner(WernerParams(eta1=float(sign), eta2=0.0))
    if direction == "b-to-a":
        return make_werner(WernerParams(eta1=0.0, eta2=float(sign)))
    raise ValueError(f"unknown direction {direction!r}; use 'a-to-b' or 'b-to-a'")


def _separable_grid_min(
    eta1: float,
    eta2: float,
    lam_range: tuple[float, float],
    e_range: tuple[float, float],
    d_range: tuple[float, float],
    points: int,
) -> tuple[float, float, float, float]:
    """Minimum of |(lam*e, (1-lam)*d) - (eta1, eta2)|^2 over a grid.

    The objective splits into independent e- and d-parts for fixed lam,
    so the full grid minimum costs points^2 instead of points^3.
    """
    lam = np.linspace(*lam_range, points)
    e = np.linspace(*e_range, points)
    d = np.linspace(*d_range, points)
    term_e = (lam[:, None] * e[None, :] - eta1) ** 2
    term_d = ((1.0 - lam[:, None]) * d[None, :] - eta2) ** 2
    idx_e = np.argmin(term_e, axis=1)
    idx_d = np.argmin(term_d, axis=1)
    totals = term_e[np.arange(points), idx_e] + term_d[np.arange(points), idx_d]
    k = int(np.argmin(totals))
    return float(totals[k]), float(lam[k]), float(e[idx_e[k]]), float(d[idx_d[k]])


def geometric_distance_werner(
    params: WernerParams,
    *,
    coarse_points: int = 101,
    refine_rounds: int = 14,
    refine_points: int = 21,
) -> float:
    """Squared distance from the (eta1, eta2) point to the causally
    separable region, in the reduced two-coordinate problem.

    Minimises ``|(lam*e, (1-lam)*d) - (eta1, eta2)|^2`` over
    ``lam in [0, 1]`` and ``|e|, |d| <= 1`` by a coarse grid followed by
    deterministic shrinking-grid refinement.  Zero (up to refinement
    accuracy) exactly when ``|eta1| + |eta2| <= 1``.
    """
    if not params.is_valid():
        raise ValueError(
            f"invalid parameters: eta1^2 + eta2^2 = {params.eta1**2 + params.eta2**2:.6f} > 1"
        )
    best, lam, e, d = _separable_grid_min(
        params.eta1, params.eta2, (0.0, 1.0), (-1.0, 1.0), (-1.0, 1.0), coarse_points
    )
    span_lam, span_e, span_d = 1.0, 2.0, 2.0
    for _ in range(refine_rounds):
        span_lam /= 5.0
        span_e /= 5.0
        span_d /= 5.0
        lam_rng = (max(0.0, lam - span_lam), min(1.0, lam + span_lam))
        e_rng = (max(-1.0, e - span_e), min(1.0, e + span_e))
        d_rng = (max(-1.0, d - span_d), min(1.0, d + span_d))
        best, lam, e, d = _separable_grid_min(
            params.eta1, params.eta2, lam_rng, e_rng, d_rng, refine_points
        )
    return best


def is_causally_separable_werner(params: WernerParams, tol: float = 1e-12) -> bool:
    """Separable iff |eta1| + |eta2| <= 1 (the distance above is zero)."""
    if not params.is_valid():
        raise ValueError("invalid parameters: point lies outside the PSD disk")
    return abs(params.eta1) + abs(params.eta2) <= 1.0 + tol


def random_valid_process(rng: np.random.Generator, kind: str = "generic") -> ProcessMatrix:
    """Sample a valid process for property tests and bound sweeps.

    ``werner`` draws uniformly from the PSD disk of the two-parameter
    family; ``generic`` puts Gaussian coefficients on every allowed
    non-identity term type and rescales the traceless part into the PSD
    cone.
    """
    layout = canonical_layout()
    if kind == "werner":
        while True:
            e1, e2 = rng.uniform(-1.0, 1.0, size=2)
            if e1 * e1 + e2 * e2 <= 1.0:
                return make_werner(WernerParams(eta1=float(e1), eta2=float(e2)))
    if kind != "generic":
        raise ValueError(f"unknown kind {kind!r}; use 'werner' or 'generic'")
    per_leg = [leg_basis(2)] * 4
    traceless = np.zeros((16, 16), dtype=complex)
    for combo in np.ndindex(4, 4, 4, 4):
        term_type = frozenset(lab for lab, idx in zip(CANONICAL_LABELS, combo) if idx > 0)
        if not term_type or term_type not in ALLOWED_TERM_TYPES:
            continue
        traceless += rng.normal() * kron_all(*[per_leg[leg][idx] for leg, idx in enumerate(combo)])
    low = np.linalg.eigvalsh(0.5 * (traceless + traceless.conj().T)).min()
    if low < -1e-12:
        traceless *= rng.uniform(0.0, 1.0) / abs(low)
    w = 0.25 * (np.eye(16, dtype=complex) + traceless)
    return ProcessMatrix(matrix=0.5 * (w + w.conj().T), layout=layout)


# --- file format -----------------------------------------------------------
#
# A process document is JSON with "dims" (four positive integers in the
# canonical leg order) and either "pauli_terms" (each a four-letter label
# over I/X/Y/Z plus a real coefficient, the Tr[W*B]/16 expansion weight)
# or "dense" (row-major [re, im] pairs).  Writers emit "pauli_terms"
# whenever every leg is a qubit.


def process_to_dict(w: ProcessMatrix, *, drop_tol: float = 1e-12) -> dict:
    _require_canonical(w.layout)
    doc: dict = {"dims": list(w.layout.dims)}
    if w.layout.all_qubits():
        coeffs = hs_coefficients(w.matrix, w.layout)
        terms = []
        for combo in np.ndindex(coeffs.shape):
            c = coeffs[combo]
            if abs(c) > drop_tol:
                terms.append(
                    {"labels": [PAULI_LABELS[idx] for idx in combo], "coeff": float(c.real)}
                )
        doc["pauli_terms"] = terms
    else:
        flat = w.matrix.reshape(-1)
        doc["dense"] = [[float(z.real), float(z.imag)] for z in flat]
    return doc


def process_from_dict(doc: dict) -> ProcessMatrix:
    dims = doc.get("dims")
    if not isinstance(dims, list) or len(dims) != 4:
        raise ValueError("process document needs 'dims' with four entries")
    layout = SpaceLayout(tuple(zip(CANONICAL_LABELS, (int(d) for d in dims))))
    if "pauli_terms" in doc:
        if not layout.all_qubits():
            raise ValueError("'pauli_terms' form requires all legs to be qubits")
        terms = []
        for entry in doc["pauli_terms"]:
            labels = entry["labels"]
            if len(labels) != 4 or any(lab not in PAULI_LABELS for lab in labels):
                raise ValueError(f"bad term labels {labels}")
            indices = tuple(PAULI_LABELS.index(lab) for lab in labels)
            terms.append(HsTerm(indices=indices, coeff=float(entry["coeff"])))
        matrix = hs_compose(terms, layout)
    elif "dense" in doc:
        d = layout.total_dim
        flat = np.array([complex(re, im) for re, im in doc["dense"]])
        if flat.size != d * d:
            raise ValueError(f"dense data has {flat.size} entries, expected {d * d}")
        matrix = flat.reshape(d, d)
    else:
        raise ValueError("process document needs 'pauli_terms' or 'dense'")
    return ProcessMatrix(matrix=matrix, layout=layout)


def save_process(w: ProcessMatrix, path: str | Path) -> None:
    Path(path).write_text(json.dumps(process_to_dict(w), indent=2, sort_keys=True) + "\n")


def load_process(path: str | Path) -> ProcessMatrix:
    return process_from_dict(json.loads(Path(path).read_text()))

"""Sweep of the two-parameter process family over the [-1, 1]^2 plane.

Each grid point is classified (PSD or not, causally separable or not),
its distance to the separable region is computed, and the game score of
the fixed bound-saturating strategies is evaluated through the trace
rule.  The score is linear in the process, so the strategy side is
contracted into a single effective operator once per sweep.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .game import StrategyPair, alice_cj, bob_cj, saturating_strategies
from .linalg import is_psd
from .processes import (
    WernerParams,
    geometric_distance_werner,
    is_causally_separable_werner,
    make_werner,
)

SCAN_HEADER = ("eta1", "eta2", "psd", "separable", "distance", "p_succ_paper_strategies")


@dataclass
class ScanRow:
    eta1: float
    eta2: float
    psd: bool
    separable: bool | None
    distance: float | None
    p_succ: float | None

    def as_csv(self) -> list[str]:
        if not self.psd:
            return [repr(self.eta1), repr(self.eta2), "0", "", "", ""]
        return [
            repr(self.eta1),
            repr(self.eta2),
            "1",
            "1" if self.separable else "0",
            repr(self.distance),
            repr(self.p_succ),
        ]


def score_operator(pair: StrategyPair) -> np.ndarray:
    """The operator M with Tr[W M] = game score of ``pair`` on W.

    Averages the success projections of both roles over the uniform
    hidden bits, using the same Choi-form maps as the full trace rule.
    """
    acc = np.zeros((16, 16), dtype=complex)
    for a, b in product(range(2), repeat=2):
        for y in range(2):
            acc += np.kron(alice_cj(pair.alice, b, a).matrix, bob_cj(pair.bob, y, b, 0).matrix)
        for x in range(2):
            acc += np.kron(alice_cj(pair.alice, x, a).matrix, bob_cj(pair.bob, a, b, 1).matrix)
    return acc / 8.0


def werner_scan(grid: int, pair: StrategyPair | None = None) -> list[ScanRow]:
    """Classify an equispaced grid of the parameter plane.

    Rows are emitted in row-major order (eta1 outer, eta2 inner).  Points
    outside the PSD disk keep only the first three columns.
    """
    if grid < 2:
        raise ValueError("grid must be at least 2")
    pair = pair or saturating_strategies()
    effective = score_operator(pair)
    values = np.linspace(-1.0, 1.0, grid)
    rows: list[ScanRow] = []
    for eta1 in values:
        for eta2 in values:
            params = WernerParams(eta1=float(eta1), eta2=float(eta2))
            w = make_werner(params)
            if not is_psd(w.matrix, 1e-9):
                rows.append(ScanRow(params.eta1, params.eta2, False, None, None, None))
                continue
            rows.append(
                ScanRow(
                    eta1=params.eta1,
                    eta2=params.eta2,
                    psd=True,
                    separable=is_causally_separable_werner(params),
                    distance=geometric_distance_werner(params),
                    p_succ=float(np.einsum("ij,ji->", w.matrix, effective).real),
                )
            )
    return rows

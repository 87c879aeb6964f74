import numpy as np
import pytest

from causalgame.game import saturating_strategies, success_probability
from causalgame.processes import WernerParams, make_werner
from causalgame.scan import SCAN_HEADER, score_operator, werner_scan


class TestScoreOperator:
    def test_linear_form_matches_trace_rule(self, rng):
        pair = saturating_strategies()
        effective = score_operator(pair)
        for _ in range(10):
            while True:
                e1, e2 = rng.uniform(-1.0, 1.0, size=2)
                if e1 * e1 + e2 * e2 <= 1.0:
                    break
            w = make_werner(WernerParams(e1, e2))
            fast = float(np.einsum("ij,ji->", w.matrix, effective).real)
            assert abs(fast - success_probability(w, pair)) < 1e-12


class TestWernerScan:
    def test_header(self):
        assert SCAN_HEADER == ("eta1", "eta2", "psd", "separable", "distance", "p_succ_paper_strategies")

    def test_grid_too_small(self):
        with pytest.raises(ValueError, match="at least 2"):
            werner_scan(1)

    def test_origin_row(self):
        rows = {(r.eta1, r.eta2): r for r in werner_scan(3)}
        origin = rows[(0.0, 0.0)]
        assert origin.psd and origin.separable
        assert origin.distance < 1e-9
        assert abs(origin.p_succ - 0.5) < 1e-12

    def test_corners_invalid(self):
        rows = {(r.eta1, r.eta2): r for r in werner_scan(3)}
        corner = rows[(1.0, 1.0)]
        assert not corner.psd
        assert corner.separable is None and corner.distance is None and corner.p_succ is None

    def test_region_structure(self):
        # psd = l2 disk, separable = l1 ball, score threshold at eta1+eta2 = 1
        rows = werner_scan(41)
        assert len(rows) == 41 * 41
        for row in rows:
            inside_disk = row.eta1**2 + row.eta2**2 <= 1.0 + 1e-9
            assert row.psd == inside_disk
            if not row.psd:
                continue
            inside_l1 = abs(row.eta1) + abs(row.eta2) <= 1.0 + 1e-9
            assert row.separable == inside_l1
            assert (row.distance > 1e-6) == (abs(row.eta1) + abs(row.eta2) > 1.0 + 1e-6)
            assert abs(row.p_succ - (0.5 + (row.eta1 + row.eta2) / 4.0)) < 1e-12

    def test_row_order_is_row_major(self):
        rows = werner_scan(3)
        coords = [(r.eta1, r.eta2) for r in rows]
        values = [-1.0, 0.0, 1.0]
        assert coords == [(e1, e2) for e1 in values for e2 in values]

    def test_csv_cells(self):
        rows = {(r.eta1, r.eta2): r for r in werner_scan(3)}
        assert rows[(0.0, 0.0)].as_csv()[:4] == ["0.0", "0.0", "1", "1"]
        assert rows[(1.0, 1.0)].as_csv() == ["1.0", "1.0", "0", "", "", ""]

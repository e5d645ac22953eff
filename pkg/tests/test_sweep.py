import numpy as np
import pytest
from numpy.testing import assert_allclose

from dissension.correlation import dissension_drc
from dissension.errors import RankError
from dissension.merging import merging_report
from dissension.states import random_density
from dissension.sweep import (
    SWEEP_HEADER,
    Witness,
    _seeds,
    load_witness,
    replay_witness,
    save_witness,
    search_negative_witness,
    sweep_random,
    theta_grid,
)


def _read(path):
    lines = path.read_text().splitlines()
    return lines[0], [ln.split(",") for ln in lines[1:]]


class TestThetaGrid:
    def test_half_open(self):
        g = theta_grid(4)
        assert_allclose(g, [0, np.pi / 2, np.pi, 3 * np.pi / 2])

    def test_inclusive(self):
        assert theta_grid(3, endpoint=True)[-1] == 2 * np.pi

    def test_empty(self):
        with pytest.raises(ValueError):
            theta_grid(0)


class TestSweep:
    def test_rows_and_values(self, tmp_path):
        out = tmp_path / "s.csv"
        summary = sweep_random(out, 3, rank=8, theta_steps=6, seed0=5)
        header, rows = _read(out)
        assert header == SWEEP_HEADER
        assert len(rows) == summary.rows == 18
        assert [int(r[0]) for r in rows[::6]] == [5, 6, 7]
        seed, _, theta, drc, d1, d2 = rows[8]
        rho = random_density(3, 8, int(seed))
        assert float(drc) == pytest.approx(dissension_drc(rho, float(theta)), abs=1e-10)
        rep = merging_report(rho, float(theta))
        assert float(d1) == pytest.approx(rep.delta1, abs=1e-10)
        assert float(d2) == pytest.approx(rep.delta2, abs=1e-10)
        assert summary.negative_rows == 0
        assert summary.max_echo_error < 1e-12

    def test_jobs_do_not_change_output(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        sweep_random(a, 4100, theta_steps=3, seed0=1, jobs=1)
        sweep_random(b, 4100, theta_steps=3, seed0=1, jobs=3)
        assert a.read_bytes() == b.read_bytes()

    def test_seed_wraps(self):
        assert [int(s) for s in _seeds(2**64 - 1, 0, 3)] == [2**64 - 1, 0, 1]

    def test_rank_validated(self, tmp_path):
        with pytest.raises(RankError):
            sweep_random(tmp_path / "x.csv", 1, rank=9)


class TestWitness:
    def test_round_trip_and_replay(self, tmp_path):
        w = Witness(seed=11, rank=4, theta=0.5, drc=0.0)
        path = tmp_path / "w.json"
        save_witness(w, path)
        assert load_witness(path) == w
        assert replay_witness(w) == pytest.approx(dissension_drc(random_density(3, 4, 11), 0.5))

    def test_search_reports_minimum(self):
        res = search_negative_witness(300, theta_steps=12, seed0=0)
        assert res.states_scanned == 300
        assert res.witness is None
        rho = random_density(3, 8, res.argmin_seed)
        assert res.min_drc == pytest.approx(dissension_drc(rho, res.argmin_theta), abs=1e-10)

    def test_search_stops_at_threshold(self):
        # every state clears a threshold above the largest possible D_RC
        res = search_negative_witness(5000, theta_steps=4, threshold=100.0)
        assert res.witness is not None and res.states_scanned == 2000

import math
import os
from pathlib import Path

import numpy as np
import pytest

import vortexeq

DATA = Path(os.environ.get("VORTEXEQ_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def pair_quadratic():
    return {"name": "pq", "gammas": [1, 1], "pre_normalized": True, "m": 2, "W_coeffs": [[1, 0]]}


def test_solve_quadratic_pair():
    out = vortexeq.solve(pair_quadratic())
    assert out["summary"] == "3/6/6"
    assert len(out["equilibria"]) == 6
    assert all(e["admissible"] for e in out["equilibria"])


def test_two_vortex_closed_form():
    out = vortexeq.solve({"gammas": [1, 2], "pre_normalized": True, "m": 1, "W_coeffs": [[0, 0]]})
    got = sorted((round(e["z"][0][0], 9), round(e["z"][1][0], 9)) for e in out["equilibria"])
    r = 1 / math.sqrt(3)
    assert got == sorted([(round(-2 * r, 9), round(r, 9)), (round(2 * r, 9), round(-r, 9))])


def test_problem_file_and_summary():
    cell, code = vortexeq.summary(DATA / "problems" / "three_vortex_triple.json")
    assert cell == "1/2/6"
    assert code == 0


def test_nongeneric_exit_code():
    cell, code = vortexeq.summary(DATA / "problems" / "two_vortex_g1m1_c0.json")
    assert (cell, code) == ("0/0/0", 2)


def test_certify_and_classify():
    cert = vortexeq.certify(pair_quadratic())
    assert cert["certificate"]["status"] == "ok"
    cls = vortexeq.classify(pair_quadratic())
    assert cls["classification"]["class_count"] == 3
    assert cls["classification"]["attained"] is True


def test_field_superposition():
    total = vortexeq.field(pair_quadratic(), grid="-2,2,-2,2,11")
    vort = vortexeq.field(pair_quadratic(), grid="-2,2,-2,2,11", part="vortices")
    bg = vortexeq.field(pair_quadratic(), grid="-2,2,-2,2,11", part="background")
    assert total["values"].shape == (11, 11)
    free = ~total["mask"]
    assert np.array_equal(total["values"][free], (vort["values"] + bg["values"])[free])
    assert np.all(total["values"][total["mask"]] == 0)


def test_bounds():
    assert vortexeq.bounds(2, 2) == (9, 6)
    assert vortexeq.config_bound(2, [2]) == 3
    assert vortexeq.config_bound(30, [30]) == math.comb(59, 30)


def test_table():
    text = vortexeq.table(DATA / "tables" / "three_vortex.json")
    assert "| 1/2/2 | 1/2/6 |" in text


def test_bad_problem():
    with pytest.raises(Exception):
        vortexeq.solve({"gammas": [1, 0], "pre_normalized": True, "m": 1})

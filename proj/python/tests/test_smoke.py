import json
import math

import pytest

import hypersurf as hs

FLAT = json.dumps({"curvature": {"family": "linear", "epsilon": 0}, "grid": {"I": 6, "u_max": 0.5}})


def test_constant_closure_reflects_minus_n0():
    t = 0.2
    out = hs.quad_update(
        (0, 0, 0), (0, 1, 0), (1, 0, 0),
        (0, 0, 1), (math.sin(t), 0, math.cos(t)), (0, math.sin(t), math.cos(t)),
        constant=True,
    )
    n12 = out["n12"]
    assert math.isclose(sum(x * x for x in n12), 1.0, rel_tol=0, abs_tol=1e-14)
    assert out["c"] > 0


def test_variable_matches_closed_form():
    cz = math.cos(0.1)
    out = hs.quad_update(
        (0, 0, 0), (0, 0, 0), (0, 0, 0),
        (0, 0, 1), (math.sin(0.1), 0, cz), (0, math.sin(0.1), cz),
        rho=(1, 1, 1, 0.9),
    )
    ww, d = 2 + 2 * cz * cz, 2 * cz
    assert out["c"] == pytest.approx((d + math.sqrt(d * d + ww * (0.9 - 1))) / ww, abs=1e-14)


def test_curvature_and_schedule():
    assert hs.eval_curvature("LINEAR", 2.0, 0.5) == -2.0
    assert hs.eval_curvature("ring", 2.0, 0.6) == pytest.approx(-9.0)
    assert hs.geometric_schedule(8.0) == [1.0, 2.0, 4.0, 8.0]
    with pytest.raises(hs.ConfigError):
        hs.eval_curvature("cubic", 1.0, 0.0)


def test_fast_march_on_a_flat_square():
    n = 6
    verts = [(i / n, j / n, 0.0) for i in range(n + 1) for j in range(n + 1)]
    tris = []
    for i in range(n):
        for j in range(n):
            a, b, c, d = i * (n + 1) + j, (i + 1) * (n + 1) + j, (i + 1) * (n + 1) + j + 1, i * (n + 1) + j + 1
            tris += [(a, b, c), (a, c, d)]
    dist = hs.fast_march(verts, tris)
    for (x, y, _), dv in zip(verts, dist):
        assert dv == pytest.approx(math.hypot(x, y), abs=1e-9)
    assert hs.unfold_candidate(1.0, 1.0, 1.0, 1.0, 1.0)[0] == pytest.approx(math.sqrt(3), abs=1e-15)


def test_generate_round_trip_and_report(tmp_path):
    m = hs.generate(FLAT)
    assert m.sectors == 4 and m.valid()
    report = json.loads(m.report())
    assert report["quads"] == 4 * 36
    assert max(report["quad_residuals"].values()) < 1e-10
    back = hs.parse(m.obj(), m.csv())
    assert back.obj() == m.obj() and back.csv() == m.csv()
    m.save(str(tmp_path / "m.obj"), str(tmp_path / "m.csv"))
    assert hs.load(str(tmp_path / "m.obj"), str(tmp_path / "m.csv")).obj() == m.obj()
    verts, tris = m.triangles()
    assert len(tris) == 2 * 4 * 36


def test_surgery_adds_branch_point():
    cfg = {"curvature": {"family": "linear", "epsilon": 1}, "grid": {"I": 10, "u_max": 0.5},
           "surgery": [{"sector": 0, "b": 5, "m": 3}]}
    m = hs.surgery(hs.generate(json.dumps(cfg)), json.dumps(cfg))
    report = json.loads(m.report())
    assert m.sectors == 7
    assert report["validation"]["branch_vertices"][0]["incident_quads"] == 6


def test_errors_and_cli(tmp_path):
    with pytest.raises(hs.ConfigError, match=r"surgery\[0\]\.m"):
        hs.generate(json.dumps({"surgery": [{"sector": 0, "b": 3, "m": 4}]}))
    with pytest.raises(hs.NumericalError, match="stage 0"):
        hs.generate(json.dumps({"curvature": {"family": "linear", "epsilon": 50, "schedule": [50]}}))
    cfg = tmp_path / "c.json"
    cfg.write_text(FLAT)
    code, err = hs.run("generate", config=str(cfg), out=str(tmp_path))
    assert code == 0, err
    assert (tmp_path / "mesh.obj").exists() and (tmp_path / "report.json").exists()
    assert hs.run("generate", out=str(tmp_path))[0] == 1

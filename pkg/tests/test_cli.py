import io
import json
import math

import numpy as np
import pytest

from packcell.cli import main, shrink_scales
from packcell.io import InputError, dump_packing, parse_packing
from packcell.packing import HEX_RATIO


def run(argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], stdout=out)
    return code, out.getvalue()


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return path


def test_validate_exit_codes(tmp_path):
    ok = write_json(tmp_path / "ok.json", {"discs": [{"x": 0, "y": 0, "r": 1}, {"x": 2, "y": 0, "r": 1}]})
    code, text = run(["validate", ok])
    assert code == 0 and json.loads(text)["summary"]["valid"]

    bad = write_json(tmp_path / "bad.json", {"discs": [{"x": 0, "y": 0, "r": 1}, {"x": 1.5, "y": 0, "r": 1}]})
    code, text = run(["validate", bad])
    rep = json.loads(text)
    assert code == 1
    assert [(v["i"], v["j"]) for v in rep["results"]] == [(0, 1), (1, 0)]

    trunc = tmp_path / "trunc.json"
    trunc.write_text('{"discs": [{"x": 0, "y": 0, "r": 1}')
    assert run(["validate", trunc])[0] == 2


@pytest.mark.parametrize("doc", [
    {"disks": []},
    {"discs": []},
    {"discs": [{"x": 0, "y": 0}]},
    {"discs": [{"x": "a", "y": 0, "r": 1}]},
    {"discs": [{"x": 0, "y": 0, "r": -1}]},
    {"discs": [{"x": 0, "y": 0, "r": 1}], "window": {"kind": "hex"}},
])
def test_malformed_packing_files(tmp_path, doc):
    assert run(["validate", write_json(tmp_path / "f.json", doc)])[0] == 2


def test_missing_file_and_bad_flags(tmp_path):
    assert run(["validate", tmp_path / "nope.json"])[0] == 2
    assert run(["random", "--window", "rect:1,2"])[0] == 2
    assert run(["frobnicate"])[0] == 2


def test_seed_always_recorded(tmp_path):
    ok = write_json(tmp_path / "ok.json", {"discs": [{"x": 0, "y": 0, "r": 1}]})
    rep = json.loads(run(["validate", ok])[1])
    assert rep["seed"] == 0 and rep["command"]["name"] == "validate"


def test_random_deterministic_and_valid(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["random", "--n", 50, "--seed", 7, "--out", a])[0] == 0
    assert run(["random", "--n", 50, "--seed", 7, "--out", b])[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert run(["validate", a])[0] == 0
    assert a.read_bytes() != run(["random", "--n", 50, "--seed", 8])[1].encode()


def test_random_two_discs_are_critical():
    p, _ = parse_packing(run(["random", "--n", 2, "--seed", 1])[1])
    d = math.dist(p.centers[0], p.centers[1])
    assert p.radii.tolist() == pytest.approx([0.5 * d, 0.5 * d], rel=1e-15)


def test_random_200_pipeline(tmp_path):
    f = tmp_path / "p.json"
    run(["random", "--n", 200, "--seed", 3, "--window", "rect:0,0,10,10", "--out", f])
    assert run(["validate", f])[0] == 0
    code, text = run(["density", f, "--window", "rect:2,2,8,8"])
    assert code == 0
    assert json.loads(text)["results"][0]["density"] <= HEX_RATIO + 0.01
    code, text = run(["cells", f])
    summary = json.loads(text)["summary"]
    assert code == 0 and summary["max_interior_ratio"] <= HEX_RATIO + 1e-9


def test_packing_roundtrip_is_field_exact(tmp_path):
    f = tmp_path / "p.json"
    run(["random", "--n", 80, "--seed", 11, "--out", f])
    p, w = parse_packing(f.read_text())
    q, w2 = parse_packing(dump_packing(p, w))
    assert np.array_equal(p.centers, q.centers) and np.array_equal(p.radii, q.radii) and w == w2
    assert dump_packing(q, w2) == f.read_text()


def test_cells_hexagonal(tmp_path):
    f = tmp_path / "hex.json"
    run(["random", "--kind", "hex", "--window", "rect:-12,-12,12,12", "--out", f])
    code, text = run(["cells", f, "--window", "rect:-8,-8,8,8"])
    summary = json.loads(text)["summary"]
    assert code == 0
    assert summary["max_interior_ratio"] == pytest.approx(0.906900, abs=1e-6)
    assert summary["max_interior_ratio"] == pytest.approx(HEX_RATIO, abs=1e-9)
    assert summary["bound"] == HEX_RATIO


def test_cells_single_disc_is_window(tmp_path):
    f = write_json(tmp_path / "one.json", {"discs": [{"x": 0, "y": 0, "r": 1}],
                                          "window": {"kind": "rect", "xmin": -3, "ymin": -3, "xmax": 3, "ymax": 3}})
    code, text = run(["cells", f])
    (res,) = json.loads(text)["results"]
    assert code == 0 and res["area"] == 36.0 and res["artificially_bounded"]


def test_cells_and_density_reject_invalid(tmp_path):
    bad = write_json(tmp_path / "bad.json", {"discs": [{"x": 0, "y": 0, "r": 1}, {"x": 1.5, "y": 0, "r": 1}]})
    assert run(["cells", bad, "--window", "rect:-3,-3,3,3"])[0] == 1
    assert run(["density", bad, "--window", "rect:-3,-3,3,3"])[0] == 1


def test_density_nested_windows(tmp_path):
    f = tmp_path / "hex.json"
    run(["random", "--kind", "hex", "--window", "rect:-30,-30,30,30", "--out", f])
    csv_path = tmp_path / "d.csv"
    code, text = run(["density", f, "--window", "rect:-20,-20,20,20", "--shrink", 3, "--csv", csv_path])
    rows = json.loads(text)["results"]
    assert code == 0 and [r["size"] for r in rows] == [20.0, 30.0, 40.0]
    errs = [abs(r["density"] - HEX_RATIO) for r in rows]
    assert errs == sorted(errs, reverse=True)
    assert csv_path.read_text().splitlines()[0] == "scale,size,area,density"


def test_density_empty_and_single(tmp_path):
    f = write_json(tmp_path / "one.json", {"discs": [{"x": 0, "y": 0, "r": 1}]})
    assert json.loads(run(["density", f, "--window", "rect:5,5,15,15"])[1])["results"][0]["density"] == 0.0
    val = json.loads(run(["density", f, "--window", "rect:-5,-5,5,5"])[1])["results"][0]["density"]
    assert val == pytest.approx(math.pi / 100, abs=1e-15)


def test_shrink_scales():
    assert shrink_scales(3) == [0.5, 0.75, 1.0]
    assert shrink_scales(1) == [1.0]
    with pytest.raises(InputError):
        shrink_scales(0)


def read_table(text):
    lines = text.strip().splitlines()
    header = lines[0].split(",")
    return header, [dict(zip(header, line.split(","))) for line in lines[1:]]


def test_entropy_hexagonal_table():
    code, text = run(["entropy", "--generate", "hexagonal", "--schedule", "100,400,1600,6400", "--no-partition"])
    header, rows = read_table(text)
    assert code == 0
    assert header == ["N", "estimator", "partition_entropy", "exact_entropy", "gap"]
    est = [abs(float(r["estimator"])) for r in rows]
    assert est == sorted(est, reverse=True) and est[-1] < 0.02


def test_entropy_square_grid_table():
    code, text = run(["entropy", "--generate", "square-grid", "--schedule", "400,1600,6400", "--no-partition"])
    _, rows = read_table(text)
    for r in rows:
        assert float(r["estimator"]) == pytest.approx(math.log(2 / math.sqrt(3)), abs=1e-12)
        assert r["partition_entropy"] == ""


def test_entropy_two_point_csv(tmp_path):
    f = tmp_path / "two.csv"
    f.write_text("x,y\n0.5,1.0\n2.5,1.0\n")
    code, text = run(["entropy", f, "--domain", "rect:0,0,3,3"])
    _, (row,) = read_table(text)
    assert code == 0 and row["N"] == "2"
    assert float(row["estimator"]) == pytest.approx(-math.log(4 * math.sqrt(3)), abs=1e-15)
    assert float(row["exact_entropy"]) == pytest.approx(-math.log(9), abs=1e-15)


def test_entropy_input_errors(tmp_path):
    one = tmp_path / "one.csv"
    one.write_text("x,y\n0.5,0.5\n")
    assert run(["entropy", one])[0] == 1
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n0.5,0.5\n")
    assert run(["entropy", bad])[0] == 2
    outside = tmp_path / "out.csv"
    outside.write_text("x,y\n0.5,0.5\n5,5\n")
    assert run(["entropy", outside])[0] == 2
    assert run(["entropy", "--generate", "hexagonal"])[0] == 2


def test_entropy_levels_and_report(tmp_path):
    table, report = tmp_path / "t.csv", tmp_path / "r.json"
    argv = ["entropy", "--generate", "iid", "--schedule", "500,1000", "--seed", 4, "--levels", "1.5,0.5",
            "--out", table, "--report", report]
    assert run(argv)[0] == 0
    first = (table.read_bytes(), report.read_bytes())
    run(argv)
    assert (table.read_bytes(), report.read_bytes()) == first
    rep = json.loads(report.read_text())
    assert rep["seed"] == 4 and rep["results"][0]["n_target"] == 500
    assert rep["summary"]["exact_entropy"] == pytest.approx(0.5 * (1.5 * math.log(1.5) + 0.5 * math.log(0.5)))


def test_prove_cos2_and_alpha():
    code, text = run(["prove", "--check", "cos2"])
    (res,) = json.loads(text)["results"]
    assert code == 0 and res["min_margin"] >= -1e-12
    code, text = run(["prove", "--check", "alpha"])
    (res,) = json.loads(text)["results"]
    assert code == 0
    assert res["cos_first"] == pytest.approx(0.85547, abs=1e-5)
    assert res["cos_second"] == pytest.approx(0.85804, abs=1e-5)


def test_prove_regime_violation_is_informational():
    code, text = run(["prove", "--check", "g", "--regime-violation", "--grid", 100])
    (res,) = json.loads(text)["results"]
    assert code == 0 and res["negative_count"] > 0 and not res["ok"]


def test_prove_all_passes_and_is_reproducible():
    code, text = run(["prove", "--seed", 3])
    assert code == 0
    rep = json.loads(text)
    assert rep["summary"]["failed"] == 0 and rep["seed"] == 3
    assert {r["check"] for r in rep["results"]} == {"g", "claim1", "alpha", "cos2", "oa2", "p3"}
    assert run(["prove", "--seed", 3])[1] == text

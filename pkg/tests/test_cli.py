import io
import json
import math
from fractions import Fraction

import pytest

from conftest import DATA
from toricflip.catalog import orthant_fan
from toricflip.cli import run
from toricflip.fan import Fan

PRISM = str(DATA / "prism.json")
WEIGHTS = str(DATA / "prism_weights.json")
SIGMA7 = str(DATA / "sigma7.json")


def call(*argv):
    buf = io.StringIO()
    status = run(list(argv), stdout=buf)
    return status, buf.getvalue()


def ok(*argv):
    status, text = call(*argv)
    assert status == 0, text
    return json.loads(text)


def area(poly):
    pts = [tuple(Fraction(c) for c in v) for v in poly["vertices"]]
    return sum(a[0] * b[1] - a[1] * b[0] for a, b in zip(pts, pts[1:] + pts[:1])) / 2


def test_check():
    out = ok("check", PRISM)
    assert out["validation"]["valid"] and out["complete"] and not out["simplicial"]


def test_subdivide_emits_reloadable_fans():
    out = ok("subdivide", PRISM)
    assert out["count"] == 8
    fans = [Fan.from_json(f) for f in out["fans"]]
    assert all(f.valid and f.simplicial and f.complete for f in fans)
    assert len({frozenset(f.max_cones) for f in fans}) == 8
    assert all(len(w) == 3 for w in out["added_walls"])


def test_gale_computed_and_supplied():
    assert ok("gale", PRISM)["source"] == "computed"
    out = ok("gale", PRISM, "--weights", WEIGHTS)
    assert out["Q"] == [[1, 1, 0, 0, 1, 0], [0, 1, 1, 1, 0, 0], [0, 0, 0, 1, 1, 1]]
    assert out["torsion_free"]


def test_chambers():
    out = ok("chambers", PRISM, "--weights", WEIGHTS)
    assert out["count"] == 6 and len(out["walls"]) == 6


def test_nef_and_projective():
    assert not ok("projective", SIGMA7, "--weights", WEIGHTS)["projective"]
    out = ok("nef", SIGMA7, "--weights", WEIGHTS)
    assert out["nef"]["generators"] == [[1, 1, 1]] and not out["full_dimensional"]


def test_flip():
    out = ok("flip", SIGMA7, "--weights", WEIGHTS)
    assert out["verification"]["ok"]
    assert out["class"] == ["4", "6", "8"]


def test_projectivize():
    out = ok("projectivize", PRISM, "--weights", WEIGHTS)
    assert out["final"]["max_cones"]
    pref = ok("projectivize", PRISM, "--weights", WEIGHTS, "--prefer-projective-subdivision")
    assert pref["flip"] is None


def test_section_values():
    out = ok("section", PRISM, "--weights", WEIGHTS)
    polys = {p["label"]: p for p in out["polygons"]}
    assert out["points"] == [{"label": "anticanonical", "coords": ["1/3", "1/3"]}]
    assert sorted(map(tuple, polys["Eff"]["vertices"])) == [("0", "0"), ("0", "1"), ("1", "0")]
    assert sorted(map(tuple, polys["Mov"]["vertices"])) == [("0", "1/2"), ("1/2", "0"), ("1/2", "1/2")]
    chambers = [p for k, p in polys.items() if k.startswith("chamber-")]
    assert len(chambers) == 6
    assert all(area(p) > 0 for p in polys.values())
    assert sum(area(p) for p in chambers) == area(polys["Mov"])


def test_section_other_rank_falls_back(tmp_path, capsys):
    f = tmp_path / "square.json"
    f.write_text(json.dumps({"rays": [[1, 0], [0, 1], [-1, 0], [0, -1]],
                             "max_cones": [[0, 1], [1, 2], [2, 3], [3, 0]]}))
    out = ok("section", str(f))
    assert out["plane"] is None and "warning" in out
    assert "warning" in capsys.readouterr().err


def test_output_is_deterministic():
    a = call("flip", SIGMA7, "--weights", WEIGHTS)[1]
    b = call("flip", SIGMA7, "--weights", WEIGHTS)[1]
    assert a == b
    assert a == json.dumps(json.loads(a), sort_keys=True, indent=2) + "\n"


def test_output_dir(tmp_path):
    status, text = call("gale", PRISM, "-o", str(tmp_path))
    assert status == 0
    assert (tmp_path / "prism.gale.json").read_text() == text


def test_domain_error_exit_1(capsys):
    status, text = call("flip", PRISM, "--weights", WEIGHTS)
    assert status == 1
    assert json.loads(text)["error"]["code"] == "precondition"
    assert "error:" in capsys.readouterr().err


def test_bad_weights_exit_1(tmp_path):
    w = tmp_path / "w.json"
    w.write_text(json.dumps({"Q": [[2, 2, 0, 0, 2, 0], [0, 1, 1, 1, 0, 0], [0, 0, 0, 1, 1, 1]]}))
    status, text = call("gale", PRISM, "--weights", str(w))
    assert status == 1 and json.loads(text)["error"]["code"] == "gale-duality"


def test_invalid_fan_exit_1(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps({"rays": [[1, 0], [1, 1], [0, 1]], "max_cones": [[0, 1], [0, 2]]}))
    assert call("check", str(f))[0] == 0
    assert call("nef", str(f))[0] == 1


@pytest.mark.parametrize("payload", [
    {"rays": [[1, 0]]},
    {"rays": [[1, "x"]], "max_cones": [[0]]},
    {"dim": 3, "rays": [[1, 0], [0, 1]], "max_cones": [[0, 1]]},
])
def test_schema_errors_exit_2(tmp_path, payload):
    f = tmp_path / "f.json"
    f.write_text(json.dumps(payload))
    status, text = call("check", str(f))
    assert status == 2 and json.loads(text)["error"]["code"] == "schema"


def test_missing_and_malformed_files(tmp_path):
    assert call("check", str(tmp_path / "nope.json"))[0] == 2
    f = tmp_path / "broken.json"
    f.write_text("{not json")
    assert call("check", str(f))[0] == 2


def test_unknown_verb():
    with pytest.raises(SystemExit) as exc:
        call("frobnicate", PRISM)
    assert exc.value.code == 2


def test_section_vertices_recover_chamber_rays():
    chambers = ok("chambers", PRISM, "--weights", WEIGHTS)["chambers"]
    polys = ok("section", PRISM, "--weights", WEIGHTS)["polygons"]
    for ch, poly in zip(chambers, polys):
        back = set()
        for x, y in poly["vertices"]:
            x, y = Fraction(x), Fraction(y)
            v = (x, y, 1 - x - y)
            den = 1
            for a in v:
                den = den * a.denominator // math.gcd(den, a.denominator)
            ints = [int(a * den) for a in v]
            g = math.gcd(*ints)
            back.add(tuple(a // g for a in ints))
        assert back == {tuple(r) for r in ch["cone"]["generators"]}


def test_section_single_chamber(tmp_path):
    f = tmp_path / "cube.json"
    f.write_text(json.dumps(orthant_fan(3).to_json()))
    polys = ok("section", str(f))["polygons"]
    assert [p["label"] for p in polys if p["label"].startswith("chamber-")] == ["chamber-1"]


def test_projectivize_with_computed_weights():
    out = ok("projectivize", PRISM)
    final = Fan.from_json(out["final"])
    assert final.simplicial and final.complete
    assert out["weights"]["source"] == "computed"

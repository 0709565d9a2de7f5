import csv
import io
import json

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from geocurrents.cli import main
from geocurrents.fuchsian import builtin_group
from geocurrents.currents import Current
from geocurrents.hyp_geom import INF, Geodesic
from geocurrents.schema import SCHEMA_NAMES, load_schema

REGISTRY = Registry().with_resources(
    (s["$id"], Resource.from_contents(s)) for s in (load_schema(n) for n in SCHEMA_NAMES)
)


def validate(doc, name):
    Draft202012Validator(load_schema(name), registry=REGISTRY).validate(doc)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_schemas_are_valid():
    for n in SCHEMA_NAMES:
        Draft202012Validator.check_schema(load_schema(n))


def test_group_current_geodesic_schemas(torus):
    validate(torus.to_json(), "group")
    validate(builtin_group("triangle(3,3,4)").to_json(), "group")
    validate(Current.discrete(torus, [("A", 1), ("B", "1/2")]).to_json(), "current")
    validate(Current.liouville(torus).to_json(), "current")
    validate(Geodesic(0, INF).to_json(), "geodesic")


def test_intersect(capsys):
    code, out, _ = run(capsys, "intersect", "--group", "punctured_torus", "--c", "A", "--c2", "B")
    doc = json.loads(out)
    assert code == 0
    assert (doc["value"], doc["converged"]) == (1, True)
    assert doc["provenance"]["seed"] == 0 and doc["provenance"]["budgets"]["max_word_len"] == 8
    validate(doc, "intersection")


def test_intersect_currents(capsys):
    mu = json.dumps({"kind": "discrete", "atoms": [{"word": "A", "weight": 2}]})
    nu = json.dumps({"kind": "discrete", "atoms": [{"word": "B", "weight": 3}]})
    code, out, _ = run(capsys, "intersect", "--mu", mu, "--nu", nu)
    assert code == 0 and json.loads(out)["value"] == 6


def test_deterministic_output(capsys):
    args = ("intersect", "--c", "AB", "--c2", "Ab", "--seed", "7")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_invalid_input_exit_2(capsys):
    assert run(capsys, "intersect", "--group", "nope", "--c", "A", "--c2", "B")[0] == 2
    assert run(capsys, "intersect", "--c", "A")[0] == 2
    assert run(capsys, "intersect", "--c", "A", "--c2", "B", "--max-word-len", "0")[0] == 2
    assert run(capsys, "pseudo-dist", "--current", "{}", "--x", "1j", "--y", "2j")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_strict_nonconverged_exit_3(capsys):
    args = ("intersect", "--c", "A", "--c2", "ABaBBB", "--max-word-len", "2")
    assert run(capsys, *args)[0] == 0
    assert run(capsys, *args, "--strict")[0] == 3


def test_pseudo_dist(capsys):
    cur = json.dumps({"kind": "discrete", "atoms": [{"word": "A", "weight": 1}]})
    code, out, _ = run(capsys, "pseudo-dist", "--current", cur, "--x", "0.3+1j", "--y", "2+0.5j")
    assert code == 0 and json.loads(out)["value"] == 1


def test_systole(capsys, tmp_path):
    path = tmp_path / "mu.json"
    path.write_text(json.dumps({"kind": "discrete", "atoms": [{"word": "A"}, {"word": "B"}]}))
    code, out, _ = run(capsys, "systole", "--current", str(path), "--census-max-word-len", "6")
    doc = json.loads(out)
    assert code == 0 and doc["value"] == 1
    validate(doc, "systole")


def test_decompose(capsys):
    cur = json.dumps({"kind": "discrete", "atoms": [{"word": "A"}]})
    code, out, _ = run(capsys, "decompose", "--current", cur, "--census-max-word-len", "6", "--probes", "50")
    doc = json.loads(out)
    assert code == 0 and doc["E_mu"] == ["A"] and doc["probe_check"]["ok"]
    validate(doc, "decomposition")


def test_degenerate_csv(capsys):
    code, out, _ = run(capsys, "degenerate", "--rep", "334", "--max-word-len", "4", "--format", "csv")
    assert code == 0
    lines = [l for l in out.splitlines() if not l.startswith("#")]
    rows = list(csv.DictReader(io.StringIO("\n".join(lines))))
    ab = next(r for r in rows if r["word"] == "Ab")
    assert ab["trace"] == "2X^2-3X+6"
    # 12 significant digits
    assert all(len(x.lstrip("-").replace(".", "").split("e")[0].lstrip("0")) <= 12 for x in ab["hyp_length"].split())
    assert "# seed: 0" in out


def test_degenerate_json(capsys):
    code, out, _ = run(capsys, "degenerate", "--rep", "pqr:3,3,5", "--max-word-len", "3")
    doc = json.loads(out)
    assert code == 0 and doc["orders"] == [3, 5, 3]
    validate(doc, "degenerate")


def test_check(capsys):
    code, out, _ = run(capsys, "check")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]

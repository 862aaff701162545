import json
import math
import os
import pathlib

import numpy as np
import pytest

import ctxlab

ROOT = pathlib.Path(__file__).resolve().parents[2]
DATA = pathlib.Path(os.environ.get("CTXLAB_DATA_DIR", ROOT / "data"))
DOCS = pathlib.Path(os.environ.get("CTXLAB_DOCS_DIR", ROOT / "docs"))
FIXTURES = ["three-path-VH.json", "three-path-DA.json", "hardy.json"]


def same_up_to_phase(a, b, tol=1e-12):
    overlap = np.vdot(b, a)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return np.max(np.abs(a - phase * b)) <= tol


def test_merged_da_povm():
    p = ctxlab.three_path_povm("DA", merge_a=True)
    assert p.labels == ["D,1", "D,2", "D,3", "A"]
    assert p.completeness_residual() <= 1e-12
    assert same_up_to_phase(p.vector("D,1"), np.array([2, -1, 1]) / 3)
    assert same_up_to_phase(p.vector("A"), np.array([1, 1, -1]) / math.sqrt(3))
    graph = p.context_graph()
    assert {frozenset((a, b)) for a, b, _ in graph["edges"]} == {frozenset(("A", f"D,{i}")) for i in (1, 2, 3)}


def test_hardy_probabilities():
    r2 = 1 / math.sqrt(2)
    psi = ctxlab.hardy_state([0, r2, -r2], [r2, 0, -r2])
    assert np.allclose(psi, np.ones(3) / math.sqrt(3), atol=1e-15)
    p = ctxlab.three_path_povm("DA", merge_a=True)
    assert abs(p.probability(psi, "A") - 1 / 9) <= 1e-12


def test_max_violation_constant():
    r2, r3 = 1 / math.sqrt(2), 1 / math.sqrt(3)
    value, state = ctxlab.max_violation([r3, r3, -r3], [0, r2, -r2], [r2, 0, -r2])
    assert abs(value - (math.sqrt(33) - 3) / 12) <= 1e-12
    assert abs(np.linalg.norm(state) - 1) <= 1e-12


def test_naimark_round_trip():
    rng = np.random.default_rng(5)
    z = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    q, _ = np.linalg.qr(z)
    vectors = [(f"m{i}", q[i, :3].conj()) for i in range(6)]
    p = ctxlab.Povm(vectors)
    outcomes, phi, env_dim = ctxlab.naimark_dilate(p)
    assert env_dim == 6
    joint = np.array([v for _, v in outcomes])
    assert np.allclose(joint.conj() @ joint.T, np.eye(6), atol=1e-12)
    for (label, v), (_, lam) in zip(outcomes, vectors):
        derived = np.kron(phi.conj(), np.eye(3)) @ v
        assert same_up_to_phase(derived, lam, 1e-9), label


def test_typed_errors():
    with pytest.raises(ctxlab.InvariantError):
        ctxlab.Povm([("a", [2, 0]), ("b", [0, 1])])
    with pytest.raises(ctxlab.LabelError):
        ctxlab.three_path_povm("VH").weight("nope")
    with pytest.raises(ctxlab.InputError):
        ctxlab.load_povm(DATA / "missing.json")
    assert issubclass(ctxlab.InvariantError, ctxlab.Error)


@pytest.mark.parametrize("name", FIXTURES)
def test_fixtures_load_and_check(name):
    p = ctxlab.load_povm(DATA / name)
    assert p.completeness_residual() <= 1e-9
    code, out, _ = ctxlab.run_cli(["povm", "check", str(DATA / name), "--strict", "--json"])
    assert code == 0
    assert json.loads(out)["complete"] is True


@pytest.mark.parametrize("name", FIXTURES)
def test_fixtures_match_schema(name):
    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads((DOCS / "scenario.schema.json").read_text())
    jsonschema.validate(json.loads((DATA / name).read_text()), schema)


def test_cli_exit_codes():
    assert ctxlab.run_cli(["max-violation", str(DATA / "hardy.json")])[0] == 0
    assert ctxlab.run_cli(["povm", "check", str(DATA / "missing.json")])[0] == 2
    assert ctxlab.run_cli(["scenario", "run", "bogus"])[0] == 2

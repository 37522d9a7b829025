"""CLI verbs: exit codes, JSON payloads, schema validation, determinism,
serialization round trips and the fixture corpus."""

import json
import os

import jsonschema
import pytest

from ranklab import cli, fixtures, serialize
from ranklab.cli import main, run, SCHEMA_FILE
from ranklab.fields import make_tower


@pytest.fixture(scope="module")
def schema():
    with open(SCHEMA_FILE) as fh:
        return json.load(fh)


def run_json(argv):
    report, _ = run(argv + ["--json"])
    # round-trip through the canonical dump so tests see what users see
    return json.loads(serialize.dumps(report))


def test_gabidulin_verb_and_schema(schema):
    rep = run_json(["gabidulin", "--N", "4", "--k", "2", "--s", "1", "--mrd-check"])
    jsonschema.validate(rep, schema)
    assert rep["results"]["mrd"] is True
    assert (rep["results"]["m"], rep["results"]["n"], rep["results"]["d"]) == (4, 4, 3)


def test_cug_pseudoregulus_report(schema):
    rep = run_json(["cug", "--pseudoregulus", "2,4,1", "--mrd-check"])
    jsonschema.validate(rep, schema)
    res = rep["results"]
    assert res["is_mrd"] is True
    assert (res["m"], res["n"], res["q"], res["d"]) == (4, 4, 2, 3)


def test_hyperplane_spectrum_verb(schema):
    rep = run_json(["hyperplane-spectrum", "--pseudoregulus", "2,4,1"])
    jsonschema.validate(rep, schema)
    assert rep["results"]["spectrum"] == {"0": 2, "1": 15}
    assert rep["results"]["matches_formula"] is True


def test_exit_codes(tmp_path, capsys):
    # usage error: unknown verb
    assert main(["no-such-verb"]) == 1
    # gate error: gcd violation, exit 2
    assert main(["gabidulin", "--N", "4", "--k", "2", "--s", "2"]) == 2
    # budget exhaustion: exit 3
    assert main(["hyperplane-spectrum", "--pseudoregulus", "2,4,1",
                 "--subspace-budget", "3"]) == 3
    # success: exit 0
    assert main(["gabidulin", "--N", "4", "--k", "2", "--s", "1"]) == 0
    capsys.readouterr()


def test_scattered_check_verb(schema):
    rep = run_json(["scattered-check", "--pseudoregulus", "2,4,1", "--h", "1"])
    jsonschema.validate(rep, schema)
    assert rep["results"]["scattered"] is True
    assert rep["results"]["iota"] == 1


def test_dualize_verbs(tmp_path, schema):
    sub_file = tmp_path / "u.json"
    U = fixtures.pseudoregulus(2, 4, 1)
    serialize.dump_file(str(sub_file), serialize.subspace_to_json(U))
    rep = run_json(["dualize", "--subspace", str(sub_file), "--ordinary"])
    jsonschema.validate(rep, schema)
    assert rep["results"]["k"] == 4 and rep["results"]["involution_ok"] is True
    dual = serialize.subspace_from_json(rep["results"]["artifact"])
    assert dual.k == 4
    rep = run_json(["dualize", "--subspace", str(sub_file), "--delsarte"])
    assert rep["results"]["double_dual_equals_input"] is True
    out = tmp_path / "dual.json"
    report, _ = run(["dualize", "--subspace", str(sub_file), "--delsarte",
                     "--out", str(out)])
    assert serialize.subspace_from_json(serialize.load_file(str(out))).k == 4


def test_code_verbs_round_trip(tmp_path, schema):
    code_file = tmp_path / "gab.json"
    serialize.dump_file(str(code_file),
                        serialize.rankcode_to_json(fixtures.gabidulin_4_2_1()))
    rep = run_json(["mrd-check", "--code", str(code_file)])
    assert rep["results"]["mrd"] is True
    rep = run_json(["rank-dist", "--code", str(code_file)])
    assert rep["results"]["A"] == [1, 0, 0, 225, 30]
    rep = run_json(["idealiser", "--code", str(code_file), "--right"])
    assert rep["results"]["order"] == 16 and rep["results"]["is_field"] is True
    rep = run_json(["dualize-code", "--code", str(code_file)])
    assert rep["results"]["K"] == 8
    rep = run_json(["extract-subspace", "--code", str(code_file)])
    jsonschema.validate(rep, schema)
    assert rep["results"]["k"] == 4 and rep["results"]["iota"] == 1
    assert rep["results"]["reconstruction_equal"] is True


def test_certify_verb(tmp_path):
    f1, f2 = tmp_path / "c1.json", tmp_path / "c2.json"
    serialize.dump_file(str(f1),
                        serialize.rankcode_to_json(fixtures.gabidulin_4_2_1()))
    serialize.dump_file(str(f2), serialize.rankcode_to_json(
        fixtures.cug_pseudoregulus()))
    rep = run_json(["certify-inequivalent", "--code", str(f1), "--code2", str(f2)])
    assert rep["results"]["status"] in ("certified-inequivalent", "inconclusive")


def test_puncture_verb(tmp_path):
    code_file = tmp_path / "gab.json"
    serialize.dump_file(str(code_file),
                        serialize.rankcode_to_json(fixtures.gabidulin_4_2_1()))
    mat_file = tmp_path / "a.json"
    serialize.dump_file(str(mat_file), {
        "level": "base", "rows": 3, "cols": 4,
        "entries": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1]]})
    rep = run_json(["puncture", "--code", str(code_file), "--matrix", str(mat_file)])
    assert (rep["results"]["m"], rep["results"]["d"]) == (3, 2)
    assert rep["results"]["mrd"] is True


def test_search_verb_determinism(schema):
    argv = ["search-scattered", "--r", "2", "--n", "4", "--h", "1", "--k", "4",
            "--seed", "9", "--budget", "120"]
    rep1, rep2 = run_json(argv), run_json(argv)
    jsonschema.validate(rep1, schema)
    assert serialize.dumps(rep1["results"]) == serialize.dumps(rep2["results"])


def test_search_requires_seed():
    assert main(["search-scattered", "--r", "2", "--n", "4", "--h", "1",
                 "--k", "4"]) == 1


def test_projsys_and_qsystem_verbs(schema):
    rep = run_json(["projsys-code", "--pseudoregulus", "2,4,1", "--enumerator"])
    jsonschema.validate(rep, schema)
    assert (rep["results"]["N"], rep["results"]["k"], rep["results"]["d"]) == (15, 2, 14)
    assert rep["results"]["enumerator"] == {"14": 15, "15": 2}
    rep = run_json(["projsys-code", "--pseudoregulus", "2,4,1", "--enumerator",
                    "--codeword-count"])
    assert rep["results"]["enumerator"] == {"14": 225, "15": 30}
    rep = run_json(["qsystem-code", "--pseudoregulus", "2,4,1"])
    assert (rep["results"]["N"], rep["results"]["k"], rep["results"]["d"]) == (4, 2, 3)


def test_twisted_verb_eta_gate():
    assert main(["twisted-gabidulin", "--N", "4", "--k", "2", "--s", "1",
                 "--eta", "3", "--q", "2"]) == 2
    rep = run_json(["twisted-gabidulin", "--N", "4", "--k", "2", "--s", "1",
                    "--eta-nonsquare", "--q", "3", "--mrd-check"])
    assert rep["results"]["mrd"] is True and rep["results"]["d"] == 3


def test_linset_points_verb():
    rep = run_json(["linset-points", "--pseudoregulus", "2,4,1"])
    assert rep["results"]["size"] == 15
    assert rep["results"]["weights"] == {"1": 15}


def test_fixture_corpus_round_trip(tmp_path):
    rep = run_json(["fixtures", "--dir", str(tmp_path)])
    files = rep["results"]["files"]
    assert any("pseudoregulus_2_4_1" in f for f in files)
    for rel in files:
        obj = serialize.load_file(os.path.join(str(tmp_path), rel))
        if rel.endswith(".subspace.json"):
            U = serialize.subspace_from_json(obj)
            assert serialize.subspace_to_json(U) == obj
        elif rel.endswith(".code.json"):
            C = serialize.rankcode_from_json(obj)
            assert serialize.rankcode_to_json(C) == obj
        elif rel.endswith(".tower.json"):
            t = serialize.tower_from_json(obj)
            assert serialize.tower_to_json(t) == obj


def test_artifact_out_file(tmp_path):
    out = tmp_path / "gab.code.json"
    report, _ = run(["gabidulin", "--N", "4", "--k", "2", "--s", "1",
                     "--out", str(out)])
    obj = serialize.load_file(str(out))
    C = serialize.rankcode_from_json(obj)
    assert C == fixtures.gabidulin_4_2_1()


def test_deserialized_code_interoperates(tmp_path):
    # field interning: a deserialized code compares equal to a built one
    obj = serialize.rankcode_to_json(fixtures.gabidulin_4_2_1())
    C = serialize.rankcode_from_json(json.loads(serialize.dumps(obj)))
    assert C == fixtures.gabidulin_4_2_1()


def test_tower_json_rejects_tampered_moduli():
    obj = serialize.tower_to_json(make_tower(2, 1, 4, 1))
    obj["modulus_mid"] = [[1], [0], [1], [1], [1]]
    from ranklab.errors import UsageError

    with pytest.raises(UsageError):
        serialize.tower_from_json(obj)


def test_code_json_rejects_out_of_range_entries():
    obj = serialize.rankcode_to_json(fixtures.gabidulin_4_2_1())
    obj["basis"][0][0][0] = 7  # not a GF(2) code
    from ranklab.errors import UsageError

    with pytest.raises(UsageError):
        serialize.rankcode_from_json(obj)

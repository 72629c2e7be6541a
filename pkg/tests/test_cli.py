import json

import pytest

from tautilt.cli import main


@pytest.fixture()
def group_files(tmp_path):
    def write(name, degree, generators):
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps({"degree": degree, "generators": generators}))
        return str(path)

    return {
        "A4": write("A4", 4, [[[1, 2, 3]], [[1, 2], [3, 4]]]),
        "S4": write("S4", 4, [[[1, 2]], [[1, 2, 3, 4]]]),
        "S3": write("S3", 3, [[[1, 2]], [[1, 2, 3]]]),
        "C3": write("C3", 3, [[[1, 2, 3]]]),
        "C2deg3": write("C2deg3", 3, [[[1, 2]]]),
        "C2": write("C2", 2, [[[1, 2]]]),
        "bad": str((tmp_path / "bad.json").resolve()),
        "tmp": tmp_path,
    }


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_blocks_a4(group_files, capsys):
    code, out, _ = run(capsys, ["blocks", group_files["A4"], "--p", "2", "--no-cache"])
    assert code == 0
    data = json.loads(out)
    assert data["count"] == 1
    assert data["field"] == {"p": 2, "m": 2, "modulus": [1, 1, 1]}
    assert data["blocks"][0]["principal"]


def test_blocks_s3_p3(group_files, capsys):
    code, out, _ = run(capsys, ["blocks", group_files["S3"], "--p", "3", "--no-cache"])
    assert code == 0
    assert json.loads(out)["count"] == 1


def test_blocks_c2(group_files, capsys):
    code, out, _ = run(capsys, ["blocks", group_files["C2"], "--p", "2", "--no-cache"])
    assert code == 0
    assert json.loads(out)["count"] == 1


def test_blocks_parse_error(group_files, capsys, tmp_path):
    bad = tmp_path / "nope.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, ["blocks", str(bad), "--p", "2", "--no-cache"])
    assert code == 2
    assert "error" in err


def test_blocks_missing_file(group_files, capsys):
    code, _, _ = run(capsys, ["blocks", group_files["bad"], "--p", "2", "--no-cache"])
    assert code == 2


def test_blocks_nonprime(group_files, capsys):
    code, _, _ = run(capsys, ["blocks", group_files["C2"], "--p", "6", "--no-cache"])
    assert code == 2


def test_stt_s4(group_files, capsys, tmp_path):
    dot = tmp_path / "s4.dot"
    js = tmp_path / "s4.json"
    code, out, _ = run(
        capsys,
        [
            "stt",
            group_files["S4"],
            "--p",
            "2",
            "--dot",
            str(dot),
            "--json",
            str(js),
            "--no-cache",
        ],
    )
    assert code == 0
    assert out.strip() == "8 nodes, 8 edges"
    data = json.loads(js.read_text())
    assert data["n_nodes"] == 8 and data["n_edges"] == 8
    text = dot.read_text()
    assert text.startswith("digraph") and text.count("->") == 8


def test_stt_c2(group_files, capsys):
    code, out, _ = run(capsys, ["stt", group_files["C2"], "--p", "2", "--no-cache"])
    assert code == 0
    assert out.strip() == "2 nodes, 1 edge"


def test_stt_node_cap(group_files, capsys):
    code, _, err = run(
        capsys,
        ["stt", group_files["S4"], "--p", "2", "--node-cap", "3", "--no-cache"],
    )
    assert code == 3
    assert "cap" in err


def test_stt_cap_leaves_no_files(group_files, capsys, tmp_path):
    dot = tmp_path / "never.dot"
    code, _, _ = run(
        capsys,
        [
            "stt",
            group_files["S4"],
            "--p",
            "2",
            "--node-cap",
            "3",
            "--dot",
            str(dot),
            "--no-cache",
        ],
    )
    assert code == 3
    assert not dot.exists()


def test_stt_determinism_and_cache(group_files, capsys, tmp_path, monkeypatch):
    cache_dir = tmp_path / "cache"
    monkeypatch.setenv("TAUTILT_CACHE", str(cache_dir))
    outs = []
    for run_idx in range(2):
        dot = tmp_path / f"a4_{run_idx}.dot"
        js = tmp_path / f"a4_{run_idx}.json"
        code, out, _ = run(
            capsys,
            [
                "stt",
                group_files["A4"],
                "--p",
                "2",
                "--dot",
                str(dot),
                "--json",
                str(js),
            ],
        )
        assert code == 0
        outs.append((out, dot.read_bytes(), js.read_bytes()))
    assert outs[0] == outs[1]
    assert cache_dir.exists() and list(cache_dir.glob("*.json"))
    # cache-off rerun must also be byte-identical
    dot = tmp_path / "a4_nc.dot"
    js = tmp_path / "a4_nc.json"
    code, out, _ = run(
        capsys,
        [
            "stt",
            group_files["A4"],
            "--p",
            "2",
            "--dot",
            str(dot),
            "--json",
            str(js),
            "--no-cache",
        ],
    )
    assert (out, dot.read_bytes(), js.read_bytes()) == outs[0]


def test_verify_c3_in_s3_p3(group_files, capsys):
    code, out, _ = run(
        capsys,
        ["verify", group_files["C3"], group_files["S3"], "--p", "3", "--no-cache"],
    )
    assert code == 0
    data = json.loads(out)
    assert data["passed"]
    assert data["blocks"][0]["poset"]["nodes"] == 2
    counts = {
        c["name"]: c["details"]
        for c in data["blocks"][0]["pipeline"]["clauses"]
    }
    assert counts["invariant_nodes_found"]["count"] == 2


def test_verify_same_group(group_files, capsys):
    code, out, _ = run(
        capsys,
        ["verify", group_files["S3"], group_files["S3"], "--p", "3", "--no-cache"],
    )
    assert code == 0
    data = json.loads(out)
    assert data["passed"]
    assert data["index"] == 1
    # the induced map is the identity on the whole poset
    info = [
        c
        for c in data["blocks"][0]["pipeline"]["clauses"]
        if c["name"] == "induced_map_image"
    ][0]
    assert info["details"]["onto_target_poset"]


def test_verify_not_normal(group_files, capsys):
    code, _, err = run(
        capsys,
        ["verify", group_files["C2deg3"], group_files["S3"], "--p", "3", "--no-cache"],
    )
    assert code == 4
    assert "normal" in err


def test_verify_not_subgroup(group_files, capsys):
    code, _, _ = run(
        capsys,
        ["verify", group_files["C2"], group_files["S3"], "--p", "3", "--no-cache"],
    )
    assert code == 4


def test_verify_theorem_subset(group_files, capsys):
    code, out, _ = run(
        capsys,
        [
            "verify",
            group_files["C3"],
            group_files["S3"],
            "--p",
            "3",
            "--theorems",
            "L3.1",
            "--no-cache",
        ],
    )
    assert code == 0
    data = json.loads(out)
    assert "L3.1" in data["blocks"][0]
    assert "pipeline" not in data["blocks"][0]


def test_induce_roundtrip(group_files, capsys, tmp_path):
    # build a module file: the trivial module over C3 at p=3
    from tautilt.algebra import GroupAlgebra
    from tautilt.ff import field_create
    from tautilt.groups import group_from_json
    from tautilt.modules import ModuleRegistry, module_to_json, trivial_module

    c3 = group_from_json(json.loads(open(group_files["C3"]).read()), name="C3")
    alg = GroupAlgebra(c3, field_create(3, 1))
    ModuleRegistry(alg)
    mod_file = tmp_path / "k.json"
    mod_file.write_text(json.dumps(module_to_json(trivial_module(alg))))
    out_file = tmp_path / "ind.json"
    code, _, _ = run(
        capsys,
        [
            "induce",
            group_files["C3"],
            group_files["S3"],
            "--p",
            "3",
            "--module",
            str(mod_file),
            "--out",
            str(out_file),
            "--no-cache",
        ],
    )
    assert code == 0
    data = json.loads(out_file.read_text())
    assert data["dim"] == 2


def test_mackey_cli(group_files, capsys, tmp_path):
    from tautilt.algebra import GroupAlgebra
    from tautilt.ff import field_create
    from tautilt.groups import group_from_json
    from tautilt.modules import ModuleRegistry, module_to_json, regular_module

    c3 = group_from_json(json.loads(open(group_files["C3"]).read()), name="C3")
    alg = GroupAlgebra(c3, field_create(3, 1))
    ModuleRegistry(alg)
    mod_file = tmp_path / "reg.json"
    mod_file.write_text(json.dumps(module_to_json(regular_module(alg))))
    code, out, _ = run(
        capsys,
        [
            "mackey",
            group_files["C3"],
            group_files["S3"],
            "--p",
            "3",
            "--module",
            str(mod_file),
            "--no-cache",
        ],
    )
    assert code == 0
    data = json.loads(out)
    assert data["ok"] and data["left_dim"] == data["right_dim"] == 6


def test_verify_a4_in_s4_all(group_files, capsys, tmp_path, monkeypatch):
    """The flagship pipeline via the CLI: everything passes and the
    invariant-node map is onto the overgroup poset."""
    monkeypatch.setenv("TAUTILT_CACHE", str(tmp_path / "cache"))
    code, out, _ = run(
        capsys,
        ["verify", group_files["A4"], group_files["S4"], "--p", "2"],
    )
    assert code == 0
    data = json.loads(out)
    assert data["passed"]
    assert data["field"]["m"] == 2
    block = data["blocks"][0]
    assert block["poset"]["nodes"] == 32
    clauses = {c["name"]: c for c in block["pipeline"]["clauses"]}
    assert clauses["invariant_nodes_found"]["details"]["count"] == 8
    assert clauses["induced_map_image"]["details"]["onto_target_poset"]
    assert block["L3.1"]["passed"]
    assert len(block["L3.1"]["reports"]) == 8
    # cached second run is byte-identical
    code2, out2, _ = run(
        capsys,
        ["verify", group_files["A4"], group_files["S4"], "--p", "2"],
    )
    assert code2 == 0 and out2 == out

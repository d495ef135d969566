import json

import pytest

from seqcolor.cli import run

UCG8 = {
    "vertices": [f"v{i}" for i in range(1, 9)],
    "edges": [[f"v{a}", f"v{b}"] for a, b in [
        (1, 2), (2, 4), (4, 3), (3, 2), (1, 3), (3, 8), (8, 7), (7, 5), (5, 6), (6, 8), (7, 6), (6, 4), (1, 5)]],
    "ordering": {f"v{i}": i for i in range(1, 9)},
    "coloring": {"v1": 1, "v2": 2, "v3": 3, "v4": 1, "v5": 2, "v6": 3, "v7": 1, "v8": 2},
}


@pytest.fixture
def write(tmp_path):
    def _write(name, doc):
        p = tmp_path / name
        p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(p)

    return _write


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def call_json(capsys, *argv):
    code, out, _ = call(capsys, *argv)
    return code, json.loads(out)


@pytest.fixture
def chain(tmp_path, capsys):
    path = tmp_path / "d2.json"
    assert run(["gadget", "D", "--k", "2", "--json-out", str(path)]) == 0
    capsys.readouterr()
    return str(path)


class TestColor:
    def test_ucg8(self, capsys, write):
        code, doc = call_json(capsys, "color", write("f.json", UCG8), "--seeds", "v1,v2,v3,v4", "--trace")
        assert code == 0 and doc["done"] and doc["rounds"] == 2
        assert doc["lists"]["v8"] == [2]
        first = {c["vertex"]: c["new"] for c in doc["trace"][0]["changes"]}
        assert first["v7"] == [1]

    def test_stable_exit_one(self, capsys, write):
        code, doc = call_json(capsys, "color", write("f.json", UCG8))
        assert code == 1 and doc["status"] == "stable"

    def test_greedy_colors_everything(self, capsys, write):
        code, doc = call_json(capsys, "color", write("f.json", UCG8), "--rulebase", "RG")
        assert code == 0 and doc["done"]

    def test_rounds_cap_and_audit(self, capsys, chain):
        code, doc = call_json(capsys, "color", chain, "--seeds", "u,v", "--rounds-cap", "1", "--audit")
        assert code == 1 and doc["status"] == "capped"

    def test_dot(self, capsys, write, tmp_path):
        dot = tmp_path / "out.dot"
        code, _, _ = call(capsys, "color", write("f.json", UCG8), "--seeds", "v1,v2,v3,v4", "--dot-out", str(dot))
        text = dot.read_text()
        assert code == 0 and text.startswith("graph") and "v8 (8)" in text


class TestSds:
    def test_numbers(self, capsys, chain):
        code, doc = call_json(capsys, "sds", "wsdn", chain, "--k", "2")
        assert code == 0 and doc["number"] == 2 and doc["witness"]["set"] == ["u", "v"]
        code, doc = call_json(capsys, "sds", "ssdn", chain, "--k", "2", "--threads", "2")
        assert code == 0 and doc["number"] == 3 and doc["witness"]["set"] == ["u", "v", "x_1"]

    def test_verify(self, capsys, chain):
        code, doc = call_json(capsys, "sds", "verify", chain, "--seeds", "u,v", "--k", "2")
        assert code == 0 and doc["witness"]["rounds"] == 2
        code, doc = call_json(capsys, "sds", "verify", chain, "--seeds", "u,v", "--k", "1")
        assert code == 1 and not doc["valid"]

    def test_budget_exit_two(self, capsys, chain):
        code, doc = call_json(capsys, "sds", "wsdn", chain, "--budget", "2")
        assert code == 2 and doc["status"] == "exceeded"

    def test_colwds(self, capsys, write):
        k3 = {"vertices": [1, 2, 3], "edges": [[1, 2], [2, 3], [1, 3]]}
        code, doc = call_json(capsys, "sds", "colwds", write("k3.json", k3), "--k", "1", "--xi", "2")
        assert code == 0 and doc["answer"] == "yes"
        code, doc = call_json(capsys, "sds", "colwds", write("k3.json", k3), "--k", "1", "--xi", "1")
        assert code == 1 and doc["answer"] == "no"


class TestGadgetAndReduce:
    def test_byte_identical(self, capsys):
        _, a, _ = call(capsys, "gadget", "F", "--k", "3")
        _, b, _ = call(capsys, "gadget", "F", "--k", "3")
        assert a == b and json.loads(a)["interface"] == ["u", "v", "x", "y"]

    def test_dot_to_stdout(self, capsys):
        code, out, _ = call(capsys, "gadget", "H", "--n", "2", "--dot-out")
        assert code == 0 and out.startswith("graph")

    def test_reduce_3col(self, capsys, write):
        k3 = {"vertices": [1, 2, 3], "edges": [[1, 2], [2, 3], [1, 3]]}
        wit = write("w.json", {"coloring": {"1": 1, "2": 2, "3": 3}})
        code, doc = call_json(capsys, "reduce", "3col", write("k3.json", k3), "--k", "1", "--witness", wit)
        assert code == 0 and len(doc["vertices"]) == 12 and doc["bound"] == 3
        assert doc["certificate_rounds"] == 1

    def test_reduce_vertex_cover(self, capsys, write):
        p3 = {"vertices": [1, 2, 3], "edges": [[1, 2], [2, 3]]}
        wit = write("w.json", {"cover": [2]})
        code, doc = call_json(capsys, "reduce", "vc-rulebase", write("p3.json", p3), "--t", "1", "--witness", wit)
        assert code == 0 and doc["bound"] == 2 and doc["certificate_rounds"] == 1
        bad = write("bad.json", {"cover": [1]})
        code, _, err = call(capsys, "reduce", "vc-rulebase", write("p3.json", p3), "--witness", bad)
        assert code == 3 and "cover" in err


class TestOracle:
    def test_enumerate_and_ucg(self, capsys, write):
        f = write("f.json", UCG8)
        code, doc = call_json(capsys, "oracle", "enumerate", f)
        assert code == 0 and doc["count"] == 6
        code, doc = call_json(capsys, "oracle", "enumerate", f, "--max-solutions", "2")
        assert code == 2 and doc["overflow"]
        code, doc = call_json(capsys, "oracle", "ucg", f)
        assert code == 0 and doc["ucg"]

    def test_chromatic(self, capsys, write):
        code, doc = call_json(capsys, "oracle", "chromatic", write("f.json", UCG8))
        assert doc == {"chromatic_number": 3, "clique_number": 3}

    def test_cap_exit_two(self, capsys, write):
        big = {"vertices": list(range(20)), "edges": []}
        code, _, _ = call(capsys, "oracle", "enumerate", write("b.json", big), "--cap", "10")
        assert code == 2

    def test_transverse(self, capsys, write):
        k2 = {"vertices": ["a", "b"], "edges": [["a", "b"]]}
        sys_path = write("s.json", [[1, ["a", "b"]]])
        code, doc = call_json(capsys, "oracle", "transverse-check", write("k2.json", k2), "--system", sys_path)
        assert code == 0 and doc["transverse"]
        code, doc = call_json(capsys, "oracle", "transverse-build", write("k2.json", k2), "--system", sys_path)
        assert code == 0 and len(doc["vertices"]) == 3


class TestAudit:
    def test_rule_audit(self, capsys):
        code, doc = call_json(capsys, "audit", "--rulebase", "RT")
        assert code == 0 and doc["ok"] and len(doc["rules"]) == 4

    def test_run_audit(self, capsys, write):
        code, doc = call_json(capsys, "audit", write("f.json", UCG8), "--seeds", "v1,v2,v3,v4")
        assert code == 0 and doc["run"]["audited"] and doc["run"]["violation"] is None


class TestInputErrors:
    @pytest.mark.parametrize("doc", [
        "{not json",
        {"vertices": [1, 2]},
        {"vertices": [1, 2], "edges": [[1, 3]]},
        {"vertices": [1, 2], "edges": [[1, 2]], "ordering": {"1": 1, "2": 1}},
        {"vertices": [1], "edges": [], "coloring": {"1": 7}},
    ])
    def test_bad_documents(self, capsys, write, doc):
        code, _, err = call(capsys, "color", write("bad.json", doc))
        assert code == 3 and err.startswith("error:")

    def test_missing_file_and_bad_args(self, capsys):
        assert call(capsys, "color", "/nonexistent.json")[0] == 3
        assert call(capsys, "frobnicate")[0] == 3
        assert call(capsys, "gadget", "D", "--k", "0")[0] == 3

    def test_improper_target(self, capsys, write):
        doc = dict(UCG8, coloring=dict(UCG8["coloring"], v2=1))
        assert call(capsys, "sds", "wsdn", write("f.json", doc))[0] == 3

    def test_unknown_seed(self, capsys, write):
        assert call(capsys, "color", write("f.json", UCG8), "--seeds", "v99")[0] == 3

    def test_missing_ordering_warns(self, capsys, caplog, write):
        doc = {k: v for k, v in UCG8.items() if k != "ordering"}
        code, _, _ = call(capsys, "-v", "color", write("f.json", doc), "--seeds", "v1,v2,v3,v4")
        assert code == 0 and "no ordering given" in caplog.text

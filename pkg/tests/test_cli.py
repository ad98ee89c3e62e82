"""Command line interface: exit codes, stdout/stderr split, determinism
and parallel equivalence.  All invocations run in-process via main()."""

import json
from fractions import Fraction

import pytest

from treedissim import (
    DissimTensor,
    DistanceMatrix,
    ValuationCertificate,
    distance_matrix,
    parse_newick,
    random_tree,
    same_tree,
    serialize_newick,
    triple_dissimilarity,
    verify_certificate,
)
from treedissim.cli import main

F = Fraction

QUARTET = "((1:1,2:1):1,3:1,4:1);\n"


@pytest.fixture
def quartet_file(tmp_path):
    p = tmp_path / "quartet.nwk"
    p.write_text(QUARTET)
    return str(p)


@pytest.fixture
def tree6_file(tmp_path):
    p = tmp_path / "t6.nwk"
    p.write_text(serialize_newick(random_tree(6, seed=3)) + "\n")
    return str(p)


def write_json(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


@pytest.fixture
def metric6_file(tmp_path):
    d = distance_matrix(random_tree(6, seed=3))
    return write_json(tmp_path, "d6.json", d.to_json_obj())


@pytest.fixture
def tensor6_file(tmp_path):
    w = triple_dissimilarity(distance_matrix(random_tree(6, seed=3)))
    return write_json(tmp_path, "w6.json", w.to_json_obj())


@pytest.fixture
def bumped5_file(tmp_path, bumped5):
    return write_json(tmp_path, "bump5.json", bumped5.to_json_obj())


class TestDissim:
    def test_quartet_tensor_on_stdout(self, quartet_file, capsys):
        assert main(["dissim", "--tree", quartet_file, "--m", "3"]) == 0
        out = capsys.readouterr().out
        obj = json.loads(out)
        assert obj["m"] == 3
        assert obj["entries"]["1,2,3"] == "4"

    def test_out_file(self, quartet_file, tmp_path, capsys):
        target = tmp_path / "w.json"
        assert main(["dissim", "--tree", quartet_file, "--m", "4", "--out", str(target)]) == 0
        assert capsys.readouterr().out == ""
        assert json.loads(target.read_text())["entries"]["1,2,3,4"] == "5"

    def test_oracle_agreement_reported(self, tree6_file, capsys):
        assert main(["dissim", "--tree", tree6_file, "--m", "3", "--oracle"]) == 0
        captured = capsys.readouterr()
        assert "oracle agreement" in captured.err
        json.loads(captured.out)

    def test_method_dp_matches_tours(self, tree6_file, capsys):
        assert main(["dissim", "--tree", tree6_file, "--m", "4", "--method", "dp"]) == 0
        dp_out = capsys.readouterr().out
        assert main(["dissim", "--tree", tree6_file, "--m", "4", "--method", "tours"]) == 0
        assert capsys.readouterr().out == dp_out

    def test_deterministic_output(self, tree6_file, capsys):
        main(["dissim", "--tree", tree6_file, "--m", "3"])
        first = capsys.readouterr().out
        main(["dissim", "--tree", tree6_file, "--m", "3"])
        assert capsys.readouterr().out == first

    def test_jobs_byte_identical(self, tree6_file, capsys):
        main(["dissim", "--tree", tree6_file, "--m", "3"])
        serial = capsys.readouterr().out
        assert main(["dissim", "--tree", tree6_file, "--m", "3", "--jobs", "3"]) == 0
        assert capsys.readouterr().out == serial

    def test_bad_m_is_usage_error(self, quartet_file, capsys):
        assert main(["dissim", "--tree", quartet_file, "--m", "9"]) == 2
        assert "error" in capsys.readouterr().err


class TestCheck:
    def test_metric_pass(self, metric6_file, capsys):
        assert main(["check", metric6_file, "--metric"]) == 0
        captured = capsys.readouterr()
        assert "PASS" in captured.err
        assert json.loads(captured.out)["pass"] is True

    def test_metric_fail_witness(self, bumped5_file, capsys):
        assert main(["check", bumped5_file, "--metric"]) == 1
        captured = capsys.readouterr()
        obj = json.loads(captured.out)
        assert obj["pass"] is False
        assert obj["witness"] == [1, 2, 4, 5]
        assert obj["values"] == ["3", "2", "2"]
        assert "FAIL" in captured.err

    def test_strict_flag_changes_verdict(self, tmp_path, ones5, capsys):
        shifted = DistanceMatrix(5, {p: v - 5 for p, v in ones5.entries.items()})
        path = write_json(tmp_path, "neg.json", shifted.to_json_obj())
        assert main(["check", path, "--metric"]) == 1
        capsys.readouterr()
        assert main(["check", path, "--metric", "--strict"]) == 0

    def test_ultra(self, tmp_path, ones5, capsys):
        path = write_json(tmp_path, "ones.json", ones5.to_json_obj())
        assert main(["check", path, "--ultra"]) == 0

    def test_tmn(self, tensor6_file, capsys):
        assert main(["check", tensor6_file, "--tmn", "3"]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["pass"] is True

    def test_tmn_wrong_m_is_usage_error(self, tensor6_file, capsys):
        assert main(["check", tensor6_file, "--tmn", "4"]) == 2

    def test_m4(self, bumped5_file, capsys):
        assert main(["check", bumped5_file, "--m4"]) == 1
        obj = json.loads(capsys.readouterr().out)
        assert obj["witness"] == [1, 2, 4, 5]

    def test_jobs_same_verdict(self, metric6_file, capsys):
        main(["check", metric6_file, "--metric"])
        serial = capsys.readouterr().out
        assert main(["check", metric6_file, "--metric", "--jobs", "2"]) == 0
        assert capsys.readouterr().out == serial

    def test_jobs_same_witness_on_failure(self, bumped5_file, capsys):
        main(["check", bumped5_file, "--metric"])
        serial = capsys.readouterr().out
        assert main(["check", bumped5_file, "--metric", "--jobs", "2"]) == 1
        assert capsys.readouterr().out == serial

    def test_missing_file_is_usage_error(self, capsys):
        assert main(["check", "no-such-file.json", "--metric"]) == 2

    def test_malformed_json_is_usage_error(self, tmp_path, capsys):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        assert main(["check", str(p), "--metric"]) == 2


class TestMembership3:
    def test_member_payload(self, tensor6_file, capsys):
        assert main(["membership3", tensor6_file]) == 0
        captured = capsys.readouterr()
        obj = json.loads(captured.out)
        assert obj["member"] is True
        assert obj["stage"] == "ok"
        tree = parse_newick(obj["newick"])
        assert same_tree(tree, random_tree(6, seed=3))
        assert "member: yes" in captured.err

    def test_four_point_failure(self, tmp_path, bumped5, capsys):
        w = triple_dissimilarity(bumped5)
        path = write_json(tmp_path, "w.json", w.to_json_obj())
        assert main(["membership3", path]) == 1
        obj = json.loads(capsys.readouterr().out)
        assert obj["member"] is False
        assert obj["stage"] == "four_point"
        assert obj["witness"] == [1, 2, 4, 5]

    def test_inverse_failure(self, tmp_path, capsys):
        w = triple_dissimilarity(distance_matrix(random_tree(6, seed=3)))
        entries = dict(w.entries)
        entries[(1, 2, 3)] += 1
        path = write_json(tmp_path, "w.json", DissimTensor(6, 3, entries).to_json_obj())
        assert main(["membership3", path]) == 1
        obj = json.loads(capsys.readouterr().out)
        assert obj["stage"] == "inverse"

    def test_small_n_usage_error(self, tmp_path, quartet_dm, capsys):
        w = triple_dissimilarity(quartet_dm)
        path = write_json(tmp_path, "w.json", w.to_json_obj())
        assert main(["membership3", path]) == 2


class TestCertify3:
    def test_certificate_verifies(self, quartet_file, tmp_path, capsys):
        target = tmp_path / "cert.json"
        assert main(["certify3", "--tree", quartet_file, "--out", str(target)]) == 0
        captured = capsys.readouterr()
        assert "PASS" in captured.err
        cert = ValuationCertificate.from_json(target.read_text())
        w = triple_dissimilarity(distance_matrix(parse_newick(QUARTET)))
        assert verify_certificate(cert, w)

    def test_jobs_byte_identical(self, tree6_file, tmp_path, capsys):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        assert main(["certify3", "--tree", tree6_file, "--out", str(a)]) == 0
        assert main(["certify3", "--tree", tree6_file, "--out", str(b), "--jobs", "3"]) == 0
        assert a.read_text() == b.read_text()


class TestGenerators:
    def test_random_tree_deterministic(self, capsys):
        assert main(["random-tree", "--n", "6", "--seed", "11"]) == 0
        first = capsys.readouterr().out
        assert main(["random-tree", "--n", "6", "--seed", "11"]) == 0
        assert capsys.readouterr().out == first
        t = parse_newick(first.strip())
        assert t.n == 6

    def test_random_tree_caterpillar(self, capsys):
        assert main(["random-tree", "--n", "5", "--seed", "0", "--shape", "caterpillar"]) == 0
        parse_newick(capsys.readouterr().out.strip())

    def test_count_topologies(self, capsys):
        assert main(["count-topologies", "--n", "5"]) == 0
        assert capsys.readouterr().out.strip() == "15"


class TestReconstruct:
    def test_roundtrip(self, metric6_file, capsys):
        assert main(["reconstruct", metric6_file]) == 0
        text = capsys.readouterr().out.strip()
        assert same_tree(parse_newick(text), random_tree(6, seed=3))

    def test_failure_verdict(self, bumped5_file, capsys):
        assert main(["reconstruct", bumped5_file]) == 1
        obj = json.loads(capsys.readouterr().out)
        assert obj["witness"] == [1, 2, 4, 5]


class TestUsage:
    def test_no_arguments(self, capsys):
        assert main([]) == 2

    def test_unknown_subcommand(self, capsys):
        assert main(["frobnicate"]) == 2

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0

    def test_malformed_newick(self, tmp_path, capsys):
        p = tmp_path / "bad.nwk"
        p.write_text("((1:1,2:1):1,3:1")
        assert main(["dissim", "--tree", str(p), "--m", "3"]) == 2
        assert "error" in capsys.readouterr().err

import json

import pytest

from densub.cli import main
from densub.graphs import complete, cycle, write_edge_list


@pytest.fixture
def k5_file(tmp_path):
    p = tmp_path / "k5.el"
    p.write_text(write_edge_list(complete(5)), encoding="utf-8")
    return str(p)


@pytest.fixture
def c20_file(tmp_path):
    p = tmp_path / "c20.el"
    p.write_text(write_edge_list(cycle(20)), encoding="utf-8")
    return str(p)


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


class TestCli:
    def test_exact_k5(self, capsys, k5_file):
        code, payload = run_json(capsys, ["exact", "--in", k5_file])
        assert code == 0
        assert payload["result"]["D"] == "2/1"
        assert payload["result"]["witness"] == [0, 1, 2, 3, 4]

    def test_exact_brute(self, capsys, k5_file):
        code, payload = run_json(capsys, ["exact", "--in", k5_file, "--brute"])
        assert code == 0
        assert payload["result"]["D"] == "2/1"

    def test_gen_roundtrip(self, capsys, tmp_path):
        out = tmp_path / "c6.el"
        code = main(
            ["gen", "--kind", "cycle", "--params", "n=6", "--out", str(out)]
        )
        assert code == 0
        assert out.read_text().startswith("6 6\n")

    def test_gen_lowerbound_pair(self, capsys, tmp_path):
        stem = tmp_path / "lb"
        code = main(
            [
                "gen",
                "--kind",
                "lowerbound_pair",
                "--params",
                "eps=1/10",
                "--out",
                str(stem),
            ]
        )
        assert code == 0
        assert (tmp_path / "lb.cycle").exists()
        assert (tmp_path / "lb.path").exists()

    def test_detect_local_c20(self, capsys, c20_file):
        code, payload = run_json(
            capsys,
            ["detect-local", "--in", c20_file, "--dtilde", "1/1", "--eps", "1/5"],
        )
        assert code == 0
        assert payload["result"]["density"] == "1/1"
        assert payload["result"]["marked"] == list(range(20))
        assert payload["check"]["pass"] is True

    def test_detect_congest(self, capsys, k5_file):
        code, payload = run_json(
            capsys,
            [
                "detect-congest",
                "--in",
                k5_file,
                "--dtilde",
                "2/1",
                "--eps",
                "1/8",
                "--seed",
                "3",
            ],
        )
        assert code == 0
        assert payload["check"]["pass"] is True

    def test_dual_and_primal(self, capsys, k5_file):
        code, payload = run_json(
            capsys,
            ["dual", "--in", k5_file, "--z", "2/1", "--eps", "1/8", "--T", "64"],
        )
        assert code == 0
        assert payload["result"]["feasible"] is True
        code, payload = run_json(
            capsys,
            ["primal", "--in", k5_file, "--z", "1/1", "--eps", "1/8", "--T", "64"],
        )
        assert code == 0
        assert payload["result"]["found"] is True
        assert payload["check"]["pass"] is True

    def test_orient(self, capsys, tmp_path):
        p = tmp_path / "k129.el"
        p.write_text(write_edge_list(complete(129)), encoding="utf-8")
        ofile = tmp_path / "orientation.txt"
        code, payload = run_json(
            capsys,
            [
                "orient",
                "--in",
                str(p),
                "--dtilde",
                "128",
                "--eps",
                "1/4",
                "--T",
                "64",
                "--orient-out",
                str(ofile),
            ],
        )
        assert code == 0
        assert payload["result"]["max_outdeg"] <= 160
        assert payload["check"]["pass"] is True
        lines = ofile.read_text().strip().splitlines()
        assert len(lines) == complete(129).m

    def test_split_and_weak(self, capsys, k5_file):
        code, payload = run_json(
            capsys, ["split", "--in", k5_file, "--eps", "1/4"]
        )
        assert code == 0 and payload["check"]["pass"] is True
        code, payload = run_json(capsys, ["weak-orient", "--in", k5_file])
        assert code == 0 and payload["check"]["pass"] is True

    def test_ldd(self, capsys, tmp_path):
        p = tmp_path / "g.el"
        from densub.graphs import erdos_renyi

        p.write_text(write_edge_list(erdos_renyi(32, 0.2, 5)), encoding="utf-8")
        code, payload = run_json(
            capsys, ["ldd", "--in", str(p), "--eps", "1/4", "--seed", "7"]
        )
        assert code == 0
        assert payload["check"]["pass"] is True

    def test_approx(self, capsys, k5_file):
        code, payload = run_json(
            capsys, ["approx", "--in", k5_file, "--eps", "1/8", "--seed", "1"]
        )
        assert code == 0
        assert payload["check"]["pass"] is True

    def test_bench_csv(self, capsys, tmp_path):
        out = tmp_path / "bench.csv"
        code = main(["bench", "--suite", "ldd", "--out", str(out)])
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0].startswith("algorithm,n,eps,seed,rounds")
        assert len(lines) == 1 + 3 * 2 * 3

    def test_error_is_structured(self, capsys, k5_file):
        code, payload = run_json(
            capsys,
            ["orient", "--in", k5_file, "--dtilde", "4", "--eps", "1/4"],
        )
        assert code == 2
        assert "error" in payload

    def test_parse_error_reports_line(self, capsys, tmp_path):
        p = tmp_path / "bad.el"
        p.write_text("2 1\n0 0\n", encoding="utf-8")
        code, payload = run_json(capsys, ["exact", "--in", str(p)])
        assert code == 2
        assert "line 2" in payload["message"]

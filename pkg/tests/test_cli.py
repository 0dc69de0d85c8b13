import json
import shutil
import subprocess
import sys

import pytest

from trsbench.cli import main
from trsbench.encodings import build_wcr_trs, tm_to_trs
from trsbench.formats import format_tm, format_trs, parse_trs
from trsbench.machines import empty_machine, rel_succ_machine, right_mover
from trsbench.turing import TuringMachine

HALTER = TuringMachine(["q0", "q1", "h"], ("B", "a"), "B", "q0", {
    ("q0", "B"): ("q1", "a", "R"),
    ("q1", "B"): ("h", "a", "L"),
})


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, "--json", *argv)
    report = json.loads(out)
    assert report["exit_code"] == code
    return code, report


class TestTm:
    def test_run_halts(self, capsys, files):
        code, out, _ = run(capsys, "tm", "run", files("h.tm", format_tm(HALTER)))
        assert code == 0 and out.startswith("halted after 2 steps")

    def test_run_with_config(self, capsys, files):
        path = files("h.tm", format_tm(HALTER))
        code, report = run_json(capsys, "tm", "run", path, "--config", "a [q1] a")
        assert code == 0 and report["steps"] == 0

    def test_run_out_of_fuel(self, capsys, files):
        code, report = run_json(capsys, "tm", "run", files("r.tm", format_tm(right_mover())), "--fuel", "10")
        assert code == 2 and report["halted"] is False

    def test_compile_dp_designated_term(self, capsys, files, tmp_path):
        out = tmp_path / "out.trs"
        code, _, _ = run(capsys, "tm", "compile", files("m.tm", format_tm(rel_succ_machine())),
                         "--encoding", "dp", "-o", str(out))
        assert code == 0
        assert "# TERM: run(T,pickn,pickn)" in out.read_text(encoding="utf-8").splitlines()

    @pytest.mark.parametrize("encoding", ["tmtrs", "confluence", "cr-single", "wcr", "grwcr", "pebbled", "dp"])
    def test_compile_round_trip(self, capsys, files, encoding):
        path = files("m.tm", format_tm(rel_succ_machine()))
        code, text, _ = run(capsys, "tm", "compile", path, "--encoding", encoding)
        assert code == 0
        assert format_trs(parse_trs(text)) == text

    def test_unknown_encoding(self, capsys, files):
        with pytest.raises(SystemExit) as e:
            main(["tm", "compile", files("m.tm", format_tm(HALTER)), "--encoding", "nope"])
        assert e.value.code == 3
        assert "tmtrs" in capsys.readouterr().err

    def test_missing_designated_symbols(self, capsys, files):
        code, _, err = run(capsys, "tm", "compile", files("h.tm", format_tm(HALTER)), "--encoding", "dp")
        assert code == 3 and err.startswith("error:")


class TestTrs:
    def test_sn_bound_matches_run(self, capsys, files):
        path = files("h.trs", format_trs(tm_to_trs(HALTER)))
        code, out, _ = run(capsys, "trs", "check", "sn", path, "--term", "q0(t,t)", "--fuel", "100")
        assert code == 0 and out.startswith("Confirmed (bound 2)")

    def test_sn_unknown(self, capsys, files):
        path = files("r.trs", format_trs(tm_to_trs(right_mover())))
        code, report = run_json(capsys, "trs", "check", "sn", path, "--term", "q0(t,t)", "--fuel", "10")
        assert code == 2 and report["verdict"] == "Unknown" and report["fuel_used"] == 10

    def test_wn_json_schema(self, capsys, files):
        path = files("p.trs", "(VAR x)\n(RULES\n pickn -> c(pickn)\n pickn -> ok(0(t))\n c(ok(x)) -> ok(S(x))\n)\n")
        code, report = run_json(capsys, "trs", "check", "wn", path, "--term", "pickn")
        assert code == 0
        assert set(report) >= {"command", "exit_code", "verdict", "fuel_used", "bound", "term",
                               "witnesses", "transcript", "detail", "term_bounds"}
        (w,) = report["witnesses"]
        assert w["start"] == "pickn"
        assert w["steps"] == [{"source": "pickn", "target": "ok(0(t))", "position": [], "rule": 1,
                               "substitution": {}}]

    def test_cr_refuted(self, capsys, files):
        code, report = run_json(capsys, "trs", "check", "cr", files("f.trs", "(RULES\n a -> b\n a -> c\n)\n"),
                                "--term", "a")
        assert code == 1 and report["verdict"] == "Refuted"

    def test_designated_term_used(self, capsys, files):
        path = files("w.trs", format_trs(build_wcr_trs(empty_machine())))
        code, report = run_json(capsys, "trs", "check", "cr", path)
        assert report["term"] == "run" and code == 0

    def test_wcr_ground_only(self, capsys, files):
        path = files("f.trs", "(RULES\n a -> b\n a -> c\n)\n")
        code, _, _ = run(capsys, "trs", "check", "wcr", path, "--ground-only")
        assert code == 1

    def test_reduce(self, capsys, files):
        path = files("h.trs", format_trs(tm_to_trs(HALTER)))
        code, report = run_json(capsys, "trs", "reduce", path, "--term", "q0(t,t)")
        assert code == 0 and report["normal_form"] and len(report["reduction"]["steps"]) == 2

    def test_reduce_stops(self, capsys, files):
        code, out, _ = run(capsys, "trs", "reduce", files("l.trs", "(RULES\n a -> a\n)\n"), "--term", "a",
                           "--max-steps", "3")
        assert code == 2 and out.count("rule 0") == 3

    def test_critical_pairs_of_wcr_gadget(self, capsys, files):
        path = files("w.trs", format_trs(build_wcr_trs(right_mover())))
        code, out, _ = run(capsys, "trs", "critical-pairs", path)
        assert code == 0
        assert out.splitlines()[-1] == "1 critical pairs"
        assert out.startswith("<T, q0(t,t)>")
        code, report = run_json(capsys, "trs", "critical-pairs", path, "--ordered")
        assert len(report["critical_pairs"]) == 2

    def test_parse_error_has_position(self, capsys, files):
        code, _, err = run(capsys, "trs", "check", "sn", files("bad.trs", "(RULES\n f(a,, b) -> a\n)\n"))
        assert code == 3 and "line 2, column 6" in err

    def test_missing_file_json(self, capsys, tmp_path):
        code, report = run_json(capsys, "trs", "check", "sn", str(tmp_path / "nope.trs"))
        assert code == 3 and "error" in report

    def test_bad_fuel(self, capsys, files):
        with pytest.raises(SystemExit) as e:
            main(["trs", "check", "sn", files("l.trs", "(RULES\n a -> a\n)\n"), "--fuel", "-1"])
        assert e.value.code == 3


class TestDp:
    def test_pairs(self, capsys, files):
        code, report = run_json(capsys, "dp", "pairs", files("l.trs", "(RULES\n a -> a\n)\n"))
        assert code == 0 and report["pairs"] == 1

    def test_min_refutes_loop(self, capsys, files):
        top = files("top.trs", "(RULES\n a♯ -> a♯\n)\n")
        base = files("base.trs", "(RULES\n a -> a\n)\n")
        code, report = run_json(capsys, "dp", "check", top, base, "--term", "a♯", "--min")
        assert code == 1 and report["witnesses"]

    def test_chain_on_gadget(self, capsys, files, tmp_path):
        gadget = tmp_path / "g.trs"
        run(capsys, "tm", "compile", files("m.tm", format_tm(rel_succ_machine())), "--encoding", "dp",
            "-o", str(gadget))
        code, report = run_json(capsys, "dp", "check", str(gadget), str(gadget), "--fuel", "200",
                                "--max-states", "500000")
        assert code == 1 and report["bound"] >= 3


class TestVerify:
    def test_suite(self, capsys):
        code, report = run_json(capsys, "verify", "classifier", "--cases", "10")
        assert code == 0 and report["passed"] and report["seed"] == 0

    def test_unknown_suite(self, capsys):
        code, _, err = run(capsys, "verify", "nope")
        assert code == 3 and "simulation" in err


@pytest.mark.skipif(shutil.which("trsbench") is None, reason="console script not installed")
def test_console_script(tmp_path):
    path = tmp_path / "h.tm"
    path.write_text(format_tm(HALTER), encoding="utf-8")
    res = subprocess.run(["trsbench", "--json", "tm", "run", str(path)], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["steps"] == 2


def test_module_entry_point(tmp_path):
    path = tmp_path / "h.tm"
    path.write_text(format_tm(HALTER), encoding="utf-8")
    res = subprocess.run([sys.executable, "-m", "trsbench.cli", "tm", "run", str(path)],
                         capture_output=True, text=True)
    assert res.returncode == 0

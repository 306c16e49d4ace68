import io
import json
import subprocess
import sys

import pytest

from mbtd import graph as gc
from mbtd.cli import main, play_session
from mbtd.hypergraph import open_neighborhood_hypergraph
from mbtd.solver import Player, Position, best_move


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_solve_cycle4(capsys):
    data = run_json(capsys, "solve", "cycle:4", "--first", "both")
    assert data["class"] == "D"
    assert data["d_game"] == data["s_game"] == "Dominator"
    assert set(data) >= {"graph", "game", "d_game", "s_game", "class", "pv", "nodes"}
    assert all(isinstance(v, int) for v in data["pv"])


def test_solve_petersen(capsys):
    assert run_json(capsys, "solve", "petersen")["class"] == "S"


def test_solve_k1_from_file(capsys, tmp_path):
    f = tmp_path / "k1.txt"
    f.write_text("1 0\n")
    data = run_json(capsys, "solve", f"file:{f}", "--first", "staller")
    assert data["s_game"] == "Staller"
    assert data["d_game"] is None and data["class"] is None


def test_solve_domination_variant(capsys):
    assert run_json(capsys, "solve", "path:3", "--game", "mbd")["class"] == "N"


def test_seed_and_budget_round_trip(capsys):
    data = run_json(capsys, "solve", "cycle:5", "--seed", "7", "--budget", "100000")
    assert (data["seed"], data["budget"]) == (7, 100000)
    data = run_json(capsys, "classify", "grid:2x2", "--seed", "3")
    assert data["seed"] == 3


def test_output_keys_sorted(capsys):
    code, out, _ = run(capsys, "solve", "cycle:3")
    keys = list(json.loads(out))
    assert keys == sorted(keys)


def test_pv_named_uses_coordinates(capsys):
    data = run_json(capsys, "solve", "grid:2x2", "--first", "dominator")
    assert data["pv_named"][0].startswith("(1,1)#")


def test_budget_exceeded_exit_3(capsys):
    code, out, err = run(capsys, "solve", "petersen", "--budget", "5")
    assert code == 3 and out == "" and "error" in err


def test_size_cap_exit_3(capsys):
    code, out, _ = run(capsys, "solve", "grid:5x5")
    assert code == 3 and out == ""


def test_cap_env_override(capsys, monkeypatch):
    monkeypatch.setenv("MBTD_MAX_VERTICES", "4")
    assert run(capsys, "solve", "cycle:5")[0] == 3


def test_bad_spec_exit_2(capsys):
    code, out, err = run(capsys, "solve", "banana:3")
    assert code == 2 and out == "" and "banana" in err


def test_unknown_flag_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["solve", "cycle:4", "--frobnicate"])
    assert exc.value.code == 2


def test_classify_methods(capsys):
    data = run_json(capsys, "classify", "grid:3x5")
    assert (data["class"], data["method"]) == ("S", "thm-grids")
    data = run_json(capsys, "classify", "prism:2,7")
    assert (data["class"], data["method"]) == ("D", "thm-prism-even")
    data = run_json(capsys, "classify", "prism:3,5")
    assert data["class"] is None
    assert (data["d_game"], data["s_game"]) == ("unknown", "Staller")
    assert run_json(capsys, "classify", "petersen")["method"] == "exhaustive"
    assert run_json(capsys, "classify", "kbip:2,3")["class"] == "D"
    assert run_json(capsys, "classify", "cycle:3")["class"] == "N"


def test_classify_cactus_file_witness(capsys, tmp_path):
    # C4 hanging off a triangle
    f = tmp_path / "ex.txt"
    f.write_text("7 8\n0 1\n1 2\n2 3\n0 3\n0 4\n4 5\n5 6\n4 6\n")
    data = run_json(capsys, "classify", f"cactus-file:{f}")
    assert data["class"] == "N" and data["method"] == "thm-cactus"
    assert data["witness"] == [[0, 1, 2, 3]]
    assert data["remainder"] == [4, 5, 6]


def test_cactus_file_rejects_non_cactus(capsys, tmp_path):
    f = tmp_path / "k4.txt"
    f.write_text(gc.format_graph_text(gc.complete(4)))
    assert run(capsys, "classify", f"cactus-file:{f}")[0] == 2


def test_classify_over_cap_exit_3(capsys):
    assert run(capsys, "classify", "cartesian(cycle:5,cycle:5)")[0] == 3


def test_family_outputs(capsys):
    data = run_json(capsys, "family", "gnk:3,1")
    assert (data["n"], data["m"]) == (6, 3)
    code, out, _ = run(capsys, "family", "cycle:4", "--text")
    assert code == 0 and gc.parse_graph_text(out).num_edges == 4


def test_tdom_and_gammat(capsys):
    assert run_json(capsys, "tdom", "petersen")["tdom"] == 2
    data = run_json(capsys, "gammat", "gnk:4,2")
    assert data["gamma_t"] == 5 and len(data["witness"]) == 5
    assert run(capsys, "tdom", "path:1")[0] == 2


def test_dmin(capsys):
    assert run_json(capsys, "dmin", "kbip:2,3")["d_minimal"] is True
    assert run_json(capsys, "dmin", "cycle:5")["d_minimal"] is False


def test_reduce(capsys, tmp_path):
    f = tmp_path / "f.cnf"
    f.write_text("3 2\n1 2 0\n2 3 0\n")
    data = run_json(capsys, "reduce", str(f))
    assert data["equivalent"] is True and len(data["cases"]) == 4
    code, out, _ = run(capsys, "reduce", str(f), "--emit", "bipartite")
    assert code == 0 and gc.parse_graph_text(out).n == 4 + 2 + 2
    f.write_text("3 1\n-1 0\n")
    assert run(capsys, "reduce", str(f))[0] == 2


def test_verify_suites(capsys):
    code, out, _ = run(capsys, "verify", "table1")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 9 and all(l.startswith("PASS") for l in lines)
    code, out, _ = run(capsys, "verify", "strategies")
    assert code == 0 and "FAIL" not in out


def test_verify_failure_exit_1(capsys, monkeypatch):
    from mbtd import cli, suites

    def broken(seed):
        yield suites.Check("always wrong", False)

    monkeypatch.setitem(cli.SUITES, "table1", broken)
    code, out, _ = run(capsys, "verify", "table1")
    assert code == 1 and out.startswith("FAIL")


def test_play_engine_dominator_wins_c4_against_any_line():
    g = gc.cycle(4)
    for first_pick in range(4):
        out = io.StringIO()
        moves = io.StringIO("\n".join(str(v) for v in [first_pick, 0, 1, 2, 3] * 2) + "\n")
        winner = play_session(g, Player.STALLER, Player.STALLER, moves, out)
        assert winner is Player.DOMINATOR
        assert "Dominator wins" in out.getvalue()


def test_play_rejects_illegal_input_and_reprompts():
    out = io.StringIO()
    winner = play_session(gc.cycle(4), Player.STALLER, Player.DOMINATOR,
                          io.StringIO("x\n99\n0\n1\n2\n3\n"), out)
    text = out.getvalue()
    assert "illegal move 'x'" in text and "illegal move '99'" in text
    assert winner is Player.DOMINATOR


def test_play_eof_ends_session():
    assert play_session(gc.cycle(6), Player.STALLER, Player.DOMINATOR, io.StringIO(""),
                        io.StringIO()) is None


def _claimed(braced):
    inner = braced.strip()[1:-1]
    return gc.mask_of(int(x.split("#")[-1]) for x in inner.split(",") if x.strip())


class SolverStaller(io.StringIO):
    """Fake stdin that answers each prompt with the solver's Staller move,
    reading the current position back from the session transcript."""

    def __init__(self, g, transcript):
        super().__init__()
        self.board = open_neighborhood_hypergraph(g)
        self.transcript = transcript

    def readline(self, *args):
        last = [l for l in self.transcript.getvalue().splitlines() if l.startswith("Dominator: {")][-1]
        dom_part, sta_part = last[len("Dominator: "):].split("  Staller: ")
        pos = Position(self.board, _claimed(dom_part), _claimed(sta_part), Player.STALLER)
        return f"{best_move(pos)}\n"


def test_play_human_can_win_c6_with_solver_moves():
    g = gc.cycle(6)
    out = io.StringIO()
    winner = play_session(g, Player.STALLER, Player.DOMINATOR, SolverStaller(g, out), out)
    assert winner is Player.STALLER
    assert "Staller wins" in out.getvalue()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mbtd", "solve", "cycle:4"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["class"] == "D"

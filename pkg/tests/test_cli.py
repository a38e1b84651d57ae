import json

import pytest

from stringy.cli import main

A1 = {"group": {"mu": 2}, "weights": [1, 1]}
GM = {"group": "Gm", "weights": [1, -1]}

MATRIX = {
    "field": {"Fp": 5}, "ell": 2, "precision": 8,
    "row_degrees": [1, 1], "col_degrees": [0, 1],
    "entries": [[[0, 1], [0, 0, 1]], [[0, 0, 0, 1], [0, 0, 1]]],
}


@pytest.fixture
def a1_file(tmp_path):
    p = tmp_path / "a1.json"
    p.write_text(json.dumps(A1))
    return str(p)


@pytest.fixture
def gm_file(tmp_path):
    p = tmp_path / "gm.json"
    p.write_text(json.dumps(GM))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


class TestSubcommands:
    def test_sectors(self, capsys, a1_file):
        code, out = run(capsys, "sectors", "--stack", a1_file, "--json")
        assert code == 0
        assert [s["ell"] for s in out["sectors"]] == [1, 2]

    def test_wt_gm(self, capsys, gm_file):
        code, out = run(capsys, "wt", "--stack", gm_file, "--ell", "2",
                        "--ell", "5", "--json")
        assert code == 0
        assert all(r["wt"] == "1" for r in out["reports"])

    def test_integrate_with_counts(self, capsys, a1_file):
        code, out = run(capsys, "integrate", "--stack", a1_file, "--q", "3,7",
                        "--json")
        assert code == 0
        assert out["specializations"] == [{"q": 3, "value": "12"},
                                          {"q": 7, "value": "56"}]

    def test_oracle(self, capsys, a1_file):
        code, out = run(capsys, "oracle", "--stack", a1_file, "--ell", "2",
                        "--a", "1", "--n", "1", "--q", "3", "--json")
        assert code == 0 and out == {"count": "81"}

    def test_batyrev_builtin(self, capsys, a1_file):
        code, out = run(capsys, "batyrev", "--stack", a1_file, "--json")
        assert code == 0
        assert out["value"]["terms"] == [{"u": 0, "v": 0, "num": [0, 1, 1],
                                          "den": [1]}]

    def test_batyrev_from_file(self, capsys, tmp_path):
        res = {
            "m": 1, "discrepancies": ["0"],
            "strata": [
                {"divisors": [], "e_polynomial": {
                    "m": 1, "terms": [{"u": 0, "v": 0, "num": [-1, 0, 1],
                                       "den": [1]}]}},
                {"divisors": [0], "e_polynomial": {
                    "m": 1, "terms": [{"u": 0, "v": 0, "num": [1, 1],
                                       "den": [1]}]}}],
        }
        p = tmp_path / "res.json"
        p.write_text(json.dumps(res))
        code, out = run(capsys, "batyrev", "--resolution", str(p), "--json")
        assert code == 0
        assert out["value"]["terms"] == [{"u": 0, "v": 0, "num": [0, 1, 1],
                                          "den": [1]}]

    def test_gorenstein_oracle(self, capsys, a1_file):
        code, out = run(capsys, "gorenstein-oracle", "--stack", a1_file,
                        "--q", "3", "--level", "3", "--emax", "3", "--json")
        assert code == 0
        assert out["partial_sum"] == "320/243"

    def test_gsnf(self, capsys, tmp_path):
        p = tmp_path / "mat.json"
        p.write_text(json.dumps(MATRIX))
        code, out = run(capsys, "gsnf", str(p), "--decompose", "--json")
        assert code == 0
        assert out["certified"] is True
        assert out["cokernel"]["torsion"] == [[1, 1], [2, 1]]

    def test_compare_exit_code(self, capsys, a1_file):
        code, out = run(capsys, "compare", "--stack", a1_file, "--q", "3",
                        "--json")
        assert code == 0 and out["all_ok"] is True

    def test_verify_exit_code(self, capsys, a1_file):
        code, out = run(capsys, "verify", "--stack", a1_file, "--samples", "3",
                        "--seed", "5", "--precision", "12", "--json")
        assert code == 0 and out["all_equal"] is True

    def test_input_error_exit_code(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"group": {"mu": 4}, "weights": [2, 2]}))
        with pytest.raises(SystemExit) as exc:
            main(["sectors", "--stack", str(bad), "--json"])
        assert exc.value.code == 2


class TestHttpRoundTrip:
    def test_cli_against_live_server(self, capsys, a1_file):
        # run uvicorn on a private port and point the thin client at it
        import socket
        import threading
        import time

        import uvicorn

        from stringy.service import app

        with socket.socket() as s:
            s.bind(("127.0.0.1", 0))
            port = s.getsockname()[1]
        config = uvicorn.Config(app, host="127.0.0.1", port=port,
                                log_level="error")
        server = uvicorn.Server(config)
        thread = threading.Thread(target=server.run, daemon=True)
        thread.start()
        try:
            for _ in range(100):
                if server.started:
                    break
                time.sleep(0.05)
            assert server.started
            code, out = run(capsys, "integrate", "--stack", a1_file,
                            "--q", "5", "--url", f"http://127.0.0.1:{port}",
                            "--json")
            assert code == 0
            assert out["specializations"] == [{"q": 5, "value": "30"}]
        finally:
            server.should_exit = True
            thread.join(timeout=5)

import csv
import math
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmmlearn import cli
from gmmlearn.cli import (
    BENCH_HEADER,
    EXIT_CRASH,
    EXIT_INVALID,
    EXIT_NO_WINNER,
    EXIT_OK,
    REPORT_HEADER,
    ParseError,
    format_params,
    format_samples,
    main,
    parse_params,
    parse_samples,
)
from gmmlearn.distributions import Mixture

from .helpers import ecdf_kolmogorov


def write(path, text):
    path.write_text(text)
    return str(path)


@pytest.fixture
def params_file(tmp_path):
    return write(tmp_path / "truth.txt", format_params((0.5, -2.0, 1.0, 2.0, 1.0)))


class TestParamFiles:
    @settings(max_examples=200)
    @given(st.floats(0, 1), st.floats(-1e6, 1e6), st.floats(1e-6, 1e6), st.floats(-1e6, 1e6), st.floats(1e-6, 1e6))
    def test_round_trip(self, w, mu1, sigma1, mu2, sigma2):
        params = (w, mu1, sigma1, mu2, sigma2)
        assert parse_params(format_params(params)) == params

    def test_comments_and_order(self):
        text = "# truth\nsigma2 = 2\nmu2=4\n\nw = 0.3  # weight\nmu1 = 0\nsigma1 = 1\n"
        assert parse_params(text) == (0.3, 0.0, 1.0, 4.0, 2.0)

    @pytest.mark.parametrize(
        "text, needle",
        [
            ("w = 0.5\nmu1 = 0\nsigma1 = 0\nmu2 = 1\nsigma2 = 1\n", "sigma1"),
            ("w = 0.5\nmu1 = 0\nsigma1 = 1\nmu2 = 1\nsigma2 = -2\n", "sigma2"),
            ("w = 1.5\nmu1 = 0\nsigma1 = 1\nmu2 = 1\nsigma2 = 1\n", "'w'"),
            ("w = 0.5\nmu1 = x\nsigma1 = 1\nmu2 = 1\nsigma2 = 1\n", "mu1"),
            ("w = 0.5\nmu1 = 0\nsigma1 = 1\nmu2 = 1\n", "sigma2"),
            ("w = 0.5\nw = 0.5\n", "duplicate"),
            ("w = 0.5\nmu3 = 1\n", "unknown key"),
            ("w 0.5\n", "expected"),
            ("w = nan\n", "finite"),
        ],
    )
    def test_errors(self, text, needle):
        with pytest.raises(ParseError, match=needle):
            parse_params(text, "f")

    def test_error_names_line(self):
        with pytest.raises(ParseError, match=r"f:3: field 'sigma1'"):
            parse_params("w = 0.5\nmu1 = 0\nsigma1 = 0\n", "f")


class TestSampleFiles:
    def test_round_trip(self):
        xs = np.random.default_rng(0).normal(size=100)
        assert np.array_equal(parse_samples(format_samples(xs)), xs)

    def test_errors(self):
        with pytest.raises(ParseError, match="s:2"):
            parse_samples("1.0\nabc\n", "s")
        with pytest.raises(ParseError, match="finite"):
            parse_samples("inf\n", "s")


class TestGenerate:
    def test_deterministic(self, tmp_path, params_file):
        outs = []
        for name in ("a.txt", "b.txt"):
            out = str(tmp_path / name)
            assert main(["generate", params_file, "-n", "3", "--seed", "7", "--out", out]) == EXIT_OK
            outs.append(open(out).read())
        assert outs[0] == outs[1] and len(outs[0].splitlines()) == 3

    def test_seed_changes_output(self, tmp_path, params_file):
        a, b = str(tmp_path / "a"), str(tmp_path / "b")
        main(["generate", params_file, "-n", "5", "--seed", "1", "--out", a])
        main(["generate", params_file, "-n", "5", "--seed", "2", "--out", b])
        assert open(a).read() != open(b).read()

    def test_degenerate_weight(self, tmp_path):
        pf = write(tmp_path / "p", format_params((1.0, 3.0, 2.0, -50.0, 1.0)))
        out = str(tmp_path / "s")
        main(["generate", pf, "-n", "20000", "--seed", "0", "--out", out])
        xs = parse_samples(open(out).read())
        n = xs.size
        # DKW at failure probability 1e-3
        assert ecdf_kolmogorov(xs, Mixture.single(3.0, 2.0).cdf) <= math.sqrt(math.log(2 / 1e-3) / (2 * n))

    def test_bad_sigma(self, tmp_path, capsys):
        pf = write(tmp_path / "p", "w = 0.5\nmu1 = 0\nsigma1 = -1\nmu2 = 1\nsigma2 = 1\n")
        assert main(["generate", pf, "-n", "3"]) == EXIT_INVALID
        assert "sigma1" in capsys.readouterr().err

    def test_bad_n(self, params_file):
        assert main(["generate", params_file, "-n", "0"]) == EXIT_INVALID

    def test_missing_file(self, tmp_path):
        assert main(["generate", str(tmp_path / "nope"), "-n", "3"]) == EXIT_INVALID


LEARN_FAST = ["--eps", "0.125", "--delta", "0.5"]


@pytest.fixture
def coarse(monkeypatch):
    """Coarser candidate grids so CLI runs stay short."""
    real = cli.GenerationBudget
    from gmmlearn import learner

    def budget(eps, delta, **kw):
        return real(eps, delta, mean_eps_factor=80.0, sigma_eps_factor=24.0, **kw)

    monkeypatch.setattr(cli, "GenerationBudget", budget)
    monkeypatch.setattr(learner, "GenerationBudget", budget)


class TestLearn:
    def test_rejects_large_eps(self, params_file, capsys):
        assert main(["learn", "--params", params_file, "--eps", "0.3"]) == EXIT_INVALID
        assert "1/8" in capsys.readouterr().err

    @pytest.mark.parametrize("extra", [[], ["--threads", "0"], ["--engine", "warp"], ["--engine", "recursive"]])
    def test_invalid_args(self, params_file, extra):
        argv = ["learn", *LEARN_FAST, *extra]
        if extra:
            argv += ["--params", params_file]
        assert main(argv) == EXIT_INVALID

    def test_runs_needs_generator(self, tmp_path):
        sf = write(tmp_path / "s", "1.0\n")
        assert main(["learn", "--samples", sf, "--runs", "2", *LEARN_FAST]) == EXIT_INVALID

    def test_shortfall_names_count(self, tmp_path, capsys):
        sf = write(tmp_path / "s", "1.0\n2.0\n")
        assert main(["learn", "--samples", sf, *LEARN_FAST]) == EXIT_INVALID
        assert "needed" in capsys.readouterr().err

    def test_generate_then_learn(self, tmp_path, params_file, coarse):
        sf = str(tmp_path / "samples.txt")
        assert main(["generate", params_file, "-n", "30000", "--seed", "3", "--out", sf]) == EXIT_OK
        out = str(tmp_path / "learned.txt")
        assert main(["learn", "--samples", sf, *LEARN_FAST, "--out", out]) == EXIT_OK
        w, m1, s1, m2, s2 = parse_params(open(out).read())
        assert 0 <= w <= 1 and s1 > 0 and s2 > 0

    def test_report_replay(self, tmp_path, params_file, coarse):
        rows = []
        for name in ("r1.csv", "r2.csv"):
            rep = str(tmp_path / name)
            assert main(["learn", "--params", params_file, *LEARN_FAST, "--seed", "4", "--runs", "2", "--report", rep]) == EXIT_OK
            with open(rep) as fh:
                rows.append(list(csv.DictReader(fh)))
        with open(rep) as fh:
            assert fh.readline().strip() == ",".join(REPORT_HEADER)
        timing = {"generate_s", "select_s"}
        strip = lambda rs: [{k: v for k, v in r.items() if k not in timing} for r in rs]
        assert strip(rows[0]) == strip(rows[1])
        assert [r["seed"] for r in rows[0]] == ["4", "5"]
        for r in rows[0]:
            assert r["status"] == "ok" and 0 <= float(r["oracle_tv"]) <= 1
            assert float(r["oracle_k"]) <= float(r["oracle_tv"]) + 1e-9

    def test_candidates_only(self, tmp_path, params_file, capsys):
        assert main(["learn", "--params", params_file, "--eps", "0.1", "--candidates-only", "--quiet"]) == EXIT_OK
        line = capsys.readouterr().out.strip().split(",")
        row = dict(zip(REPORT_HEADER, line))
        assert row["status"] == "candidates" and float(row["best_candidate_tv"]) <= 0.1

    def test_no_winner_exit(self, params_file, coarse, monkeypatch):
        from gmmlearn import learner
        from gmmlearn.selection import TournamentResult, TournamentStats

        monkeypatch.setattr(learner, "select", lambda *a, **k: TournamentResult(None, None, TournamentStats(x_samples=0)))
        assert main(["learn", "--params", params_file, *LEARN_FAST]) == EXIT_NO_WINNER

    def test_crash_exit(self, params_file, monkeypatch):
        monkeypatch.setattr(cli, "learn_row", lambda *a, **k: 1 / 0)
        assert main(["learn", "--params", params_file, *LEARN_FAST]) == EXIT_CRASH


class TestEvaluate:
    def values(self, out):
        return {line.split(" = ")[0]: float(line.split(" = ")[1].split()[0]) for line in out.strip().splitlines()}

    def test_identical(self, params_file, capsys):
        assert main(["evaluate", params_file, params_file]) == EXIT_OK
        v = self.values(capsys.readouterr().out)
        assert v["tv_numeric"] == pytest.approx(0, abs=1e-6)
        assert v["kolmogorov_numeric"] == pytest.approx(0, abs=1e-6)

    def test_unit_shift(self, tmp_path, capsys):
        a = write(tmp_path / "a", format_params((1.0, 0.0, 1.0, 0.0, 1.0)))
        b = write(tmp_path / "b", format_params((1.0, 1.0, 1.0, 1.0, 1.0)))
        main(["evaluate", a, b])
        out = capsys.readouterr().out
        v = self.values(out)
        assert v["tv_numeric"] == pytest.approx(math.erf(0.5 / math.sqrt(2)), abs=1e-6)
        assert v["tv_numeric"] == pytest.approx(0.382925, abs=1e-6)
        assert "+-" in out

    def test_bound_dominates(self, tmp_path, capsys):
        rng = np.random.default_rng(0)
        for i in range(20):
            pa = (rng.uniform(), rng.normal(), rng.uniform(0.3, 2), rng.normal(), rng.uniform(0.3, 2))
            pb = (rng.uniform(), rng.normal(), rng.uniform(0.3, 2), rng.normal(), rng.uniform(0.3, 2))
            a, b = write(tmp_path / f"a{i}", format_params(pa)), write(tmp_path / f"b{i}", format_params(pb))
            main(["evaluate", a, b])
            v = self.values(capsys.readouterr().out)
            assert v["tv_bound"] >= v["tv_numeric"] - 1e-9


class TestBench:
    def test_header_and_rows(self, capsys):
        assert main(["bench", "--sizes", "16,32", "--engines", "slow,fast", "--seed", "1"]) == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "engine,N,ops,ms,winner_tv" == ",".join(BENCH_HEADER)
        rows = list(csv.DictReader(lines))
        assert [(r["engine"], r["N"]) for r in rows] == [("slow", "16"), ("fast", "16"), ("slow", "32"), ("fast", "32")]
        for r in rows:
            assert int(r["ops"]) > 0 and float(r["winner_tv"]) <= 512 * 0.05

    def test_deterministic_counts(self, tmp_path):
        outs = []
        for name in ("a", "b"):
            p = str(tmp_path / name)
            main(["bench", "--sizes", "20", "--seed", "2", "--out", p])
            outs.append([(r["engine"], r["ops"], r["winner_tv"]) for r in csv.DictReader(open(p))])
        assert outs[0] == outs[1]

    @pytest.mark.parametrize("extra", [["--sizes", "1"], ["--engines", "nope"], ["--delta", "2"]])
    def test_invalid(self, extra):
        assert main(["bench", *extra]) == EXIT_INVALID


def test_console_script_module():
    r = subprocess.run([sys.executable, "-m", "gmmlearn", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "generate" in r.stdout and "bench" in r.stdout


def test_log_env(params_file, monkeypatch, capsys):
    monkeypatch.setenv("GMM_LOG", "debug")
    assert main(["generate", params_file, "-n", "2"]) == EXIT_OK

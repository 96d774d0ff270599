import csv
import io
import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

from spinobs import ObservableReport, default_grid, full_report, make_coupled_state
from spinobs.cli import RunConfig, InputError, csv_header, main
from spinobs.statespec import SpecError, parse_state

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestStateSpec:
    def test_token_ket(self):
        s = parse_state("1 0 0 up")
        assert [(t.n, t.l, t.m, t.spin) for t in s.terms] == [(1, 0, 0, "up")]

    def test_token_coupled(self):
        assert parse_state("2 1 0.5 0.5") == make_coupled_state(2, 1, 0.5, 0.5)

    def test_token_superposition(self):
        s = parse_state("2 1 1 up; 2 1 -1 up")
        assert [abs(t.coeff) ** 2 for t in s.terms] == pytest.approx([0.5, 0.5])

    def test_nuclear_charge(self):
        assert parse_state("1 0 0 up", Z=3.0).Z == 3.0

    def test_json_terms(self):
        s = parse_state('{"Z": 2.0, "terms": [{"n":1,"l":0,"m":0,"spin":"up","re":1.0,"im":0.0}]}')
        assert s.Z == 2.0 and s.terms[0].coeff == 1.0

    def test_json_gaussian(self):
        g = parse_state('{"gaussian": {"sigma":1.0,"center":[0,0,0],"momentum":[0,0,0],"spinor":[[1,0],[0,0]]}}')
        assert g.kind == "gaussian" and g.spinor == (1.0, 0.0)

    @pytest.mark.parametrize("text,token", [
        ("1 0 0 sideways", "sideways"),
        ("1 x 0 up", "x"),
        ("1 0 0", "1 0 0"),
        ("2 2 0 up", "l=2"),
        ('{"terms": [{"n":1,"l":0,"m":0,"spin":"up","phase":1}]}', "phase"),
        ('{"Z": 1}', "exactly one"),
        ("", "empty"),
    ])
    def test_malformed(self, text, token):
        with pytest.raises(SpecError, match=token):
            parse_state(text)


class TestRunConfig:
    def test_unknown_key_rejected(self):
        with pytest.raises(InputError):
            RunConfig.from_mapping({"state_specs": ("1 0 0 up",), "nthreads": 4})

    @pytest.mark.parametrize("key", ["r_max", "n_r", "n_theta", "n_phi"])
    def test_overrides_positive(self, key):
        with pytest.raises(InputError):
            RunConfig(**{key: 0})

    def test_grid_overrides(self):
        cfg = RunConfig(n_r=40, r_max=30.0)
        g = cfg.grid_for(parse_state("1 0 0 up"))
        assert (g.r_max, g.n_r, g.n_theta, g.n_phi) == (30.0, 40, 16, 16)


class TestReport:
    def test_table_ground_state(self, capsys):
        code, out, _ = run(capsys, "report", "--state", "1 0 0 up")
        assert code == 0
        assert "J_momentum_z = 0.500000000" in out
        assert "J_bowman_z = 1.000000000" in out
        assert "mu_z = -1.000000000" in out

    def test_table_golden(self, capsys):
        _, out, _ = run(capsys, "report", "--state", "1 0 0 up")
        # the last two lines hold rounding-level numbers
        body = out.splitlines()[:-2]
        assert body == (GOLDEN / "report_1s_up.txt").read_text(encoding="utf-8").splitlines()

    def test_json_state_file(self, capsys, tmp_path):
        spec = {"Z": 1.0, "terms": [
            {"n": 2, "l": 1, "m": 0, "spin": "up", "re": -(1 / 3) ** 0.5, "im": 0.0},
            {"n": 2, "l": 1, "m": 1, "spin": "down", "re": (2 / 3) ** 0.5, "im": 0.0},
        ]}
        path = tmp_path / "coupled.json"
        path.write_text(json.dumps(spec), encoding="utf-8")
        code, out, _ = run(capsys, "report", "--state-file", str(path), "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert list(doc) == ["state", "units", "L", "S_momentum", "S_massflow", "J_momentum", "J_bowman",
                             "mu", "g_spin", "oracle", "max_discrepancy", "convergence_estimate"]
        assert doc["state"] == spec
        assert doc["units"] == {"J": "hbar", "mu": "bohr_magneton"}
        assert doc["J_bowman"][2] == pytest.approx(1 / 3, abs=1e-9)

    def test_json_round_trip(self, capsys):
        _, out, _ = run(capsys, "report", "--state", "2 1 0.5 0.5", "--format", "json")
        parsed = ObservableReport.from_dict(json.loads(out))
        state = make_coupled_state(2, 1, 0.5, 0.5)
        assert parsed == full_report(state, default_grid(state), label="2 1 0.5 0.5")

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "report", "--state", "1 0 0 up", "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0 and rows[0] == csv_header() and len(rows) == 2
        row = dict(zip(rows[0], rows[1]))
        assert row["J_bowman_z"] == "1.000000000" and row["g_spin"] == "2"

    def test_out_file(self, capsys, tmp_path):
        dest = tmp_path / "r.json"
        code, out, _ = run(capsys, "report", "--state", "1 0 0 up", "--format", "json", "--out", str(dest))
        assert code == 0 and out == ""
        assert json.loads(dest.read_text(encoding="utf-8"))["mu"][2] == pytest.approx(-1.0)

    def test_coarse_grid_exit_2(self, capsys):
        code, _, err = run(capsys, "report", "--state", "1 0 0 up", "--nr", "4")
        assert code == 2 and "not converged" in err

    @pytest.mark.parametrize("argv,needle", [
        (["report", "--state", "1 0 0 sideways"], "sideways"),
        (["report", "--state", "1 0 0 up", "--nr", "0"], "--nr"),
        (["report", "--state-file", "/nonexistent/state.json"], "state.json"),
        (["report"], "exactly one"),
        (["report", "--state", "1 0 0 up", "--bogus"], ""),
        (["report", "--state", "1 0 0 up", "--simulate-bug", "everything"], "everything"),
    ])
    def test_input_errors_exit_1(self, capsys, argv, needle):
        code, _, err = run(capsys, *argv)
        assert code == 1 and needle in err

    def test_simulated_bug(self, capsys):
        _, out, _ = run(capsys, "report", "--state", "1 0 0 up", "--simulate-bug", "spin-coeff")
        assert "J_momentum_z = 1.000000000" in out

    def test_help_hides_test_hook(self, capsys):
        code, out, _ = run(capsys, "report", "--help")
        assert code == 0 and "simulate" not in out


class TestCompare:
    def test_difference_column(self, capsys):
        code, out, _ = run(capsys, "compare", "--state", "1 0 0 up", "--state", "2 0 0 up", "--state", "2 1 1 up",
                           "--state", "2 1 0.5 0.5")
        assert code == 0
        assert out == (GOLDEN / "compare.txt").read_text(encoding="utf-8")
        diffs = [re.split(r"\s{2,}", line)[3] for line in out.splitlines()[1:]]
        assert diffs == ["(0.000000000, 0.000000000, 0.500000000)"] * 3 + ["(0.000000000, 0.000000000, -0.166666667)"]

    def test_json_list(self, capsys):
        code, out, _ = run(capsys, "compare", "--state", "1 0 0 up", "--state", "1 0 0 down", "--format", "json")
        docs = json.loads(out)
        assert code == 0 and [d["mu"][2] for d in docs] == pytest.approx([-1.0, 1.0])

    def test_empty_exit_1(self, capsys):
        code, _, err = run(capsys, "compare")
        assert code == 1 and "usage" in err


class TestCheck:
    def test_default_passes(self, capsys):
        code, out, _ = run(capsys, "check")
        assert code == 0 and "FAIL" not in out and "7/7 checks passed" in out

    def test_seeded_runs_identical(self, capsys):
        _, a, _ = run(capsys, "check", "--seed", "7")
        _, b, _ = run(capsys, "check", "--seed", "7")
        assert a == b

    def test_mutation_exit_3(self, capsys):
        code, out, _ = run(capsys, "check", "--simulate-bug", "spin-coeff")
        assert code == 3 and "FAIL  factor_of_two_pointwise" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "spinobs", "report", "--state", "1 0 0 up", "--format", "json"],
                         capture_output=True, text=True, encoding="utf-8", check=False)
    assert res.returncode == 0 and res.stderr == ""
    assert json.loads(res.stdout)["J_momentum"][2] == pytest.approx(0.5, abs=1e-9)

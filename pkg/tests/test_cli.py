import os

from dgsim.cli import main

ZERO_DYNAMICS = """
model = engagement_perfect
t1 = 0.5
dt = 0.001
tau = 0.01
R_0 = 150
Vr_0 = 0
z_0 = 0
w_0 = 0
rho_Mr = 0
rho_Mn = 0
rho_Tr = 0
rho_Tn = 0
"""

SMALL_GAME = """
model = example2
t1 = 1
dt = 0.001
x1_0 = 3
x2_0 = 0.5
kappa = 1
rho1 = 4
opponent.kind = pow_sine
opponent.amp = 1
opponent.omega = 5
opponent.p = 2
"""

AFFINE_MASTER = """
model = example1
t1 = 2
dt = 0.01
x0 = 1
a = 0
b = 0
c = 1
sigma = -1
n = 1
"""

SMALL_ENGAGEMENT = """
model = engagement_imperfect
t1 = 0.5
dt = 0.001
tau = 0.01
R_0 = 200
Vr_0 = 10
z_0 = 60
w_0 = 40
kappa1 = 0.001
kappa2 = 0.001
rho_Mr = 20
rho_Mn = 20
rho_Tr = 20
rho_Tn = 20
target_r.kind = pow_sine
target_r.amp = 20
target_r.omega = 50
target_r.p = 2
beta1.kind = pow_sine
beta1.amp = 20
beta1.omega = 50
beta1.p = 2
"""


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_help_lists_subcommands(capsys):
    import pytest

    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for name in ("run", "master", "sweep", "compare"):
        assert name in out


def read_summary(capsys):
    out = capsys.readouterr().out
    summary = {}
    for line in out.strip().splitlines():
        if "=" in line:
            key, val = line.split("=", 1)
            summary[key] = val
    return summary


class TestRun:
    def test_zero_dynamics_miss_equals_initial_range(self, tmp_path, capsys):
        scn = write(tmp_path, "zero.scn", ZERO_DYNAMICS)
        out = str(tmp_path / "zero.csv")
        assert main(["run", scn, "--out", out]) == 0
        summary = read_summary(capsys)
        assert float(summary["miss"]) == 150.0
        assert summary["capture_time"] == "none"

    def test_csv_schema(self, tmp_path, capsys):
        scn = write(tmp_path, "eng.scn", SMALL_ENGAGEMENT)
        out = tmp_path / "eng.csv"
        assert main(["run", scn, "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == ("t,R,Vr,z,w,sigma_dot_a,sigma_dot_b,"
                            "aMr,aMn,aTr,aTn,beta1,beta2,beta3,beta4")
        assert len(lines) == 1 + 501
        first = lines[1].split(",")
        assert float(first[1]) == 200.0
        assert float(first[5]) == 0.2  # w/R
        assert float(first[6]) == 0.3  # z/R

    def test_game_csv_schema(self, tmp_path, capsys):
        scn = write(tmp_path, "game.scn", SMALL_GAME)
        out = tmp_path / "game.csv"
        assert main(["run", scn, "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "t,x1,x2,alpha1,alpha2"
        assert len(lines) == 1 + 1001

    def test_unknown_key_exits_2_and_writes_nothing(self, tmp_path, capsys):
        scn = write(tmp_path, "bad.scn", ZERO_DYNAMICS + "foo = 1\n")
        out = tmp_path / "bad.csv"
        assert main(["run", scn, "--out", str(out)]) == 2
        assert "foo" in capsys.readouterr().err
        assert not out.exists()

    def test_missing_scenario_exits_2(self, tmp_path, capsys):
        assert main(["run", str(tmp_path / "nope.scn"),
                     "--out", str(tmp_path / "o.csv")]) == 2

    def test_byte_identical_reruns(self, tmp_path, capsys):
        scn = write(tmp_path, "eng.scn", SMALL_ENGAGEMENT)
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["run", scn, "--out", str(out1)]) == 0
        assert main(["run", scn, "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_shipped_scenario_by_name(self, tmp_path, capsys):
        out = tmp_path / "e5.csv"
        assert main(["run", "example5", "--out", str(out)]) == 0
        assert out.exists()

    def test_runtime_error_exits_3(self, tmp_path, capsys):
        crash = ZERO_DYNAMICS.replace("Vr_0 = 0", "Vr_0 = -400").replace(
            "R_stop", "ignored") + "R_stop = 0\n"
        scn = write(tmp_path, "crash.scn", crash)
        assert main(["run", scn, "--out", str(tmp_path / "c.csv")]) == 3
        assert "simulation error" in capsys.readouterr().err

    def test_plots_written(self, tmp_path, capsys):
        scn = write(tmp_path, "eng.scn", SMALL_ENGAGEMENT)
        plots = tmp_path / "figs"
        assert main(["run", scn, "--out", str(tmp_path / "o.csv"),
                     "--plots", str(plots)]) == 0
        pngs = sorted(p.name for p in plots.glob("*.png"))
        assert any("range" in n for n in pngs)
        assert any("jamming" in n for n in pngs)
        assert all((plots / n).stat().st_size > 0 for n in pngs)


class TestMaster:
    def test_affine_override_tracks_exactly(self, tmp_path, capsys):
        scn = write(tmp_path, "affine.scn", AFFINE_MASTER)
        out = tmp_path / "m.csv"
        assert main(["master", scn, "--out", str(out)]) == 0
        summary = read_summary(capsys)
        assert float(summary["sup_rel_err"]) <= 1e-6
        lines = out.read_text().splitlines()
        assert lines[0] == "t,lambda,x_ode,rel_err"
        assert len(lines) == 1 + 201

    def test_zero_span_grid_single_row(self, tmp_path, capsys):
        scn = write(tmp_path, "t0.scn", AFFINE_MASTER.replace("t1 = 2", "t1 = 0"))
        out = tmp_path / "m0.csv"
        assert main(["master", scn, "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 2
        row = lines[1].split(",")
        assert float(row[1]) == 1.0  # lambda = x0
        assert float(row[3]) == 0.0

    def test_requires_example1(self, tmp_path, capsys):
        scn = write(tmp_path, "game.scn", SMALL_GAME)
        assert main(["master", scn, "--out", str(tmp_path / "m.csv")]) == 2

    def test_plots_written(self, tmp_path, capsys):
        scn = write(tmp_path, "affine.scn", AFFINE_MASTER)
        plots = tmp_path / "figs"
        assert main(["master", scn, "--out", str(tmp_path / "m.csv"),
                     "--plots", str(plots)]) == 0
        assert len(list(plots.glob("*.png"))) == 2

    def test_no_root_rows_flagged_with_warning_count(self, tmp_path, capsys,
                                                     monkeypatch):
        import dgsim.cli as cli_mod
        from dgsim.master import LambdaPath, NoRootError, solve_lambda_path

        def truncated(drift, x0, grid, cfg=None, **kw):
            path = solve_lambda_path(drift, x0, grid, cfg, **kw)
            cut = max(1, path.lam.size - 3)
            path.lam[cut:] = float("nan")
            path.failed_at = cut
            path.failure = NoRootError(cut, float(path.t[cut]), 0.0, 1.0)
            return path

        monkeypatch.setattr(cli_mod, "solve_lambda_path", truncated)
        scn = write(tmp_path, "affine.scn", AFFINE_MASTER)
        out = tmp_path / "m.csv"
        assert main(["master", scn, "--out", str(out)]) == 0
        summary = read_summary(capsys)
        assert summary["no_root_nodes"] == "3"
        last = out.read_text().splitlines()[-1].split(",")
        assert last[1] == "nan" and last[3] == "nan"


class TestSweep:
    def test_rows_in_input_order(self, tmp_path, capsys):
        scn = write(tmp_path, "eng.scn", SMALL_ENGAGEMENT)
        out = tmp_path / "sweep.csv"
        assert main(["sweep", scn, "--key", "rho_Mr", "--values", "20,40,80",
                     "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "value,miss,payoff,capture_time"
        values = [float(l.split(",")[0]) for l in lines[1:]]
        assert values == [20.0, 40.0, 80.0]

    def test_empty_values_exit_2(self, tmp_path, capsys):
        scn = write(tmp_path, "eng.scn", SMALL_ENGAGEMENT)
        assert main(["sweep", scn, "--key", "rho_Mr", "--values", " ",
                     "--out", str(tmp_path / "s.csv")]) == 2

    def test_bad_key_exits_2(self, tmp_path, capsys):
        scn = write(tmp_path, "eng.scn", SMALL_ENGAGEMENT)
        assert main(["sweep", scn, "--key", "warp", "--values", "1,2",
                     "--out", str(tmp_path / "s.csv")]) == 2

    def test_order_independent_of_thread_count(self, tmp_path, capsys):
        scn = write(tmp_path, "eng.scn", SMALL_ENGAGEMENT)
        outs = []
        for threads in ("1", "4"):
            out = tmp_path / f"s{threads}.csv"
            os.environ["SIM_THREADS"] = threads
            try:
                assert main(["sweep", scn, "--key", "rho_Mr",
                             "--values", "10,20,40,80",
                             "--out", str(out)]) == 0
            finally:
                del os.environ["SIM_THREADS"]
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_row_failure_recorded_not_fatal(self, tmp_path, capsys):
        # Vr_0 = -400 with capture disabled crashes; other rows succeed
        crash_capable = SMALL_ENGAGEMENT + "R_stop = 0.001\n"
        scn = write(tmp_path, "eng.scn", crash_capable)
        out = tmp_path / "s.csv"
        assert main(["sweep", scn, "--key", "Vr_0", "--values", "10,-4000",
                     "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 3
        assert "nan" in lines[2]


class TestCompare:
    def test_zero_dynamics_identical_laws(self, tmp_path, capsys):
        scn = write(tmp_path, "zero.scn", ZERO_DYNAMICS)
        out = tmp_path / "cmp.csv"
        assert main(["compare", scn, "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "law,miss,payoff,capture_time"
        theta_row = lines[1].split(",")
        fixed_row = lines[2].split(",")
        assert theta_row[0] == "theta" and fixed_row[0] == "fixed"
        assert theta_row[1:] == fixed_row[1:]

    def test_engagement_compare_two_summaries(self, tmp_path, capsys):
        scn = write(tmp_path, "eng.scn", SMALL_ENGAGEMENT)
        assert main(["compare", scn, "--out", str(tmp_path / "c.csv")]) == 0
        summary = read_summary(capsys)
        assert "miss_theta" in summary and "miss_fixed" in summary
        assert "payoff_theta" in summary and "payoff_fixed" in summary

    def test_example1_not_comparable(self, tmp_path, capsys):
        scn = write(tmp_path, "e1.scn", AFFINE_MASTER)
        assert main(["compare", scn, "--out", str(tmp_path / "c.csv")]) == 2

    def test_both_laws_intercept_on_perfect_scenario(self, tmp_path, capsys):
        out = tmp_path / "cmp.csv"
        assert main(["compare", "example4_1", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()[1:]
        misses = {row.split(",")[0]: float(row.split(",")[1]) for row in lines}
        assert misses["theta"] <= 0.2
        assert misses["fixed"] <= 0.2

    def test_compare_and_sweep_plots(self, tmp_path, capsys):
        scn = write(tmp_path, "eng.scn", SMALL_ENGAGEMENT)
        cmp_figs = tmp_path / "cf"
        assert main(["compare", scn, "--out", str(tmp_path / "c.csv"),
                     "--plots", str(cmp_figs)]) == 0
        assert len(list(cmp_figs.glob("*.png"))) == 1
        sweep_figs = tmp_path / "sf"
        assert main(["sweep", scn, "--key", "rho_Mr", "--values", "10,20",
                     "--out", str(tmp_path / "s.csv"),
                     "--plots", str(sweep_figs)]) == 0
        assert len(list(sweep_figs.glob("*.png"))) == 1

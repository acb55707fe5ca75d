#=======================================================================================================================
#
#   HelmDAT - Command line tests
#   License: MIT
#
#=======================================================================================================================

''' --------------------------------------------------------------------------------------------------------------------
Imports
---------------------------------------------------------------------------------------------------------------------'''

''' Internal '''
from HelmDAT import helmdat
from HelmDAT.common import InvalidInput, NotFound
from HelmDAT.pipeline import DatSolver, FdmSolver
from HelmDAT.stages.analysis import REPORT_COLUMNS, discrete_norms
from HelmDAT.stages.problem_library import AnnulusProblem, AnnulusSolution, example_catalog
from HelmDAT.user import UserInput, load_definition

''' External '''
import json
import sys
import numpy as np
import pandas as pd
import pytest

''' --------------------------------------------------------------------------------------------------------------------
Global Variables
---------------------------------------------------------------------------------------------------------------------'''

LAYERED = """
[domain]
interval = 0, 1
breakpoints = 0.5

[fields]
a = 1 | 0.5
kappa2 = 100 | 400
f = 10*exp(x) | -5*exp(-2*x)

[boundary]
left = 1, 0, 0
right = -20*i, 0.5

[diracs]
0.25 = 1

[grid]
counts = 2, 2
"""

''' --------------------------------------------------------------------------------------------------------------------
Functions
---------------------------------------------------------------------------------------------------------------------'''


def definition(tmp_path, text=LAYERED, name="layers"):
    path = tmp_path / (name + ".ini")
    path.write_text(text)
    return str(path)


def run_cli(monkeypatch, *args):
    monkeypatch.setattr(sys, "argv", ["HelmDAT"] + [str(a) for a in args])
    return helmdat.run()


def exit_status(monkeypatch, *args):
    with pytest.raises(SystemExit) as raised:
        run_cli(monkeypatch, *args)
    return raised.value.code


def test_definition_files_describe_a_problem(tmp_path, layered):
    entry = load_definition(definition(tmp_path))
    assert entry.name == "layers" and entry.reference == "none"
    assert entry.grid(8).N == 32
    problem = entry.problem
    assert list(problem.breakpoints) == [0.5]
    assert problem.diracs == [(0.25, 1.0)]
    assert problem.bc_right.lambda0 == -20j and problem.bc_right.lambda1 == 0.5

    # same problem as the layered fixture, so its oracle applies
    _, exact = layered
    solution = FdmSolver(order=6).solve(problem, entry.grid(32))
    error = discrete_norms(solution.values, exact.sample(solution.grid).values, solution.grid, relative=True)[0]
    assert error < 1e-4


@pytest.mark.parametrize("broken", [
    LAYERED.replace("[fields]", "[field]"),
    LAYERED.replace("1 | 0.5", "1 | 0.5 | 2"),
    LAYERED.replace("10*exp(x)", "10*exp(y)"),
    LAYERED.replace("right = -20*i, 0.5", "right = 0, 0"),
    LAYERED.replace("left = 1, 0, 0", "left = 1"),
    LAYERED.replace("left = 1, 0, 0", "left = x, 0"),
    LAYERED.replace("counts = 2, 2", "counts = 2"),
    LAYERED.replace("0.25 = 1", "1.5 = 1"),
    LAYERED.replace("interval = 0, 1", "interval = 1, 0"),
    "not an ini file",
])
def test_malformed_definitions_are_invalid_input(tmp_path, broken):
    with pytest.raises(InvalidInput):
        load_definition(definition(tmp_path, broken))


def test_missing_definition_file(tmp_path):
    with pytest.raises(InvalidInput):
        load_definition(str(tmp_path / "absent.ini"))


def test_user_input_defaults(tmp_path):
    ui = UserInput(["--problem", "ex4.4", "--size", "7", "--threads", "2"])
    assert ui.mode == "solve" and ui.format == "csv" and ui.destination == "."
    assert ui.threads == 2 and ui.preset is None and ui.entry.name == "ex4.4"
    ui = UserInput(["--definition", definition(tmp_path), "-N", "4", "--method", "fdm", "-M", "8"])
    assert ui.entry.name == "layers" and ui.method == "fdm" and ui.order == 8


def test_table_presets_select_their_example():
    ui = UserInput(["--mode", "convergence", "--table", "2"])
    assert ui.entry.name == "ex4.1" and ui.preset.orders == (6, 8)


@pytest.mark.parametrize("args", [
    ["--size", "7"],
    ["--problem", "ex4.4"],
    ["--problem", "ex4.4", "--definition", "x.ini", "--size", "7"],
    ["--problem", "ex4.4", "--size", "7", "--order", "5"],
    ["--problem", "ex4.4", "--size", "7", "--level", "0"],
    ["--problem", "ex4.4", "--size", "7", "--sizes", "7", "15"],
    ["--mode", "convergence", "--problem", "ex4.4", "--size", "7"],
    ["--mode", "convergence", "--problem", "ex4.4"],
    ["--mode", "convergence", "--problem", "ex4.4", "--sizes"],
    ["--mode", "convergence", "--table", "2", "--sizes"],
])
def test_inconsistent_arguments_are_rejected(args):
    with pytest.raises(InvalidInput):
        UserInput(args)


def test_unknown_names_are_rejected():
    with pytest.raises(NotFound):
        UserInput(["--problem", "ex5.5", "--size", "7"])
    with pytest.raises(NotFound):
        UserInput(["--mode", "convergence", "--table", "9"])


def test_no_arguments_prints_help(capsys):
    with pytest.raises(SystemExit) as raised:
        UserInput([])
    assert raised.value.code == 0
    assert "--help" in capsys.readouterr().out


def test_preset_rows():
    rows = helmdat.convergence_rows(UserInput(["--mode", "convergence", "--table", "2"]))
    assert len(rows) == 27
    M, series, N, solver = rows[0]
    assert (M, series, N) == (6, "fdm", 2 ** 15) and isinstance(solver, FdmSolver)
    dat = [(series, N, solver.level) for M, series, N, solver in rows if M == 6 and series != "fdm"]
    assert dat[0] == ("dat0", 2 ** 15, 7) and dat[5] == ("dat1", 2 ** 15, 10)
    assert all(isinstance(solver, DatSolver) for M, series, N, solver in rows if series != "fdm")

    rows = helmdat.convergence_rows(UserInput(["--mode", "convergence", "--table", "2", "--order", "6",
                                               "--method", "fdm"]))
    assert [N for _, _, N, _ in rows] == [2 ** k for k in range(15, 20)]


def test_solve_writes_samples_and_report(tmp_path, monkeypatch):
    written = run_cli(monkeypatch, "--problem", "ex4.4", "--size", "31", "--method", "fdm", "--threads", "1",
                      "--destination", tmp_path)
    assert written == [str(tmp_path / "ex4.4_fdm_M6_N31_solution.csv"), str(tmp_path / "ex4.4_fdm_M6_N31_report.csv")]
    samples = pd.read_csv(written[0])
    assert list(samples.columns) == helmdat.SAMPLE_COLUMNS and len(samples) == 33
    assert samples["x"].iloc[-1] == 1.0
    report = pd.read_csv(written[1])
    assert list(report.columns) == REPORT_COLUMNS
    assert report.loc[0, "N"] == 31 and report.loc[0, "level"] == 0 and report.loc[0, "rel_inf"] < 1e-2


@pytest.mark.parametrize("solver", [FdmSolver(order=8), DatSolver(order=8, initial_partition=16, level=1)])
def test_elliptic_example_error_at_the_smallest_size(solver):
    # 8 intervals per piece
    _, errors = helmdat.solve_entry(solver, example_catalog("ex4.4"), 31)
    assert errors.rel_inf == pytest.approx(4.5909e-4, rel=0.05)


def test_four_piece_example_with_sampled_coefficients():
    # 2 ** 13 intervals per piece, jets fitted from point values
    _, errors = helmdat.solve_entry(FdmSolver(order=6, value_only=True), example_catalog("ex4.2"), 2 ** 15)
    assert errors.rel_inf == pytest.approx(4.7473e-2, rel=0.05)


def test_csv_and_json_carry_the_same_numbers(tmp_path, monkeypatch):
    common = ["--problem", "ex4.4", "--size", "31", "--threads", "1", "--destination", tmp_path]
    csv_paths = run_cli(monkeypatch, *common, "--format", "csv")
    json_paths = run_cli(monkeypatch, *common, "--format", "json")
    for csv_path, json_path in zip(csv_paths, json_paths):
        frame = pd.read_csv(csv_path, float_precision="round_trip")
        with open(json_path) as handle:
            records = json.load(handle)
        assert len(records) == len(frame)
        for column in frame.columns.drop("wall_ms", errors="ignore"):
            from_json = [np.nan if r[column] is None else r[column] for r in records]
            assert np.array_equal(frame[column].to_numpy(dtype=float), np.array(from_json, dtype=float),
                                  equal_nan=True)


def test_definition_runs_write_no_report(tmp_path, monkeypatch):
    written = run_cli(monkeypatch, "--definition", definition(tmp_path), "--size", "4", "--threads", "1",
                      "--format", "gnuplot", "--destination", tmp_path / "out")
    assert written == [str(tmp_path / "out" / "layers_dat_M6_N4_solution.dat")]
    lines = open(written[0]).read().splitlines()
    assert lines[0] == "# " + " ".join(helmdat.SAMPLE_COLUMNS)
    assert len(lines) == 1 + 17 and len(lines[1].split()) == 5


def test_convergence_table(tmp_path, monkeypatch):
    written = run_cli(monkeypatch, "--mode", "convergence", "--problem", "ex4.4", "--sizes", "31", "63",
                      "--order", "4", "--threads", "1", "--destination", tmp_path)
    assert written == [str(tmp_path / "ex4.4_convergence.csv")]
    table = pd.read_csv(written[0])
    assert list(table.columns) == REPORT_COLUMNS + ["order_inf"]
    assert list(table["N"]) == [31, 63] and list(table["M"]) == [4, 4]
    assert np.isnan(table.loc[0, "order_inf"]) and table.loc[1, "order_inf"] > 2.0


@pytest.mark.parametrize("args", [
    ["--mode", "convergence", "--problem", "ex4.4", "--sizes"],
    ["--problem", "ex4.4", "--size", "7", "--order", "3"],
    ["--problem", "ex4.1", "--size", "100"],
])
def test_input_errors_exit_with_status_two(tmp_path, monkeypatch, capsys, args):
    out = tmp_path / "out"
    assert exit_status(monkeypatch, *args, "--destination", out) == 2
    assert capsys.readouterr().err.startswith("Error: ")
    assert not out.exists()


def test_definitions_have_no_convergence_table(tmp_path, monkeypatch):
    out = tmp_path / "out"
    status = exit_status(monkeypatch, "--mode", "convergence", "--definition", definition(tmp_path),
                         "--sizes", "4", "8", "--threads", "1", "--destination", out)
    assert status == 2 and not out.exists()


def test_malformed_definition_exits_with_status_two(tmp_path, monkeypatch):
    out = tmp_path / "out"
    path = definition(tmp_path, LAYERED.replace("[boundary]", "[edges]"))
    assert exit_status(monkeypatch, "--definition", path, "--size", "4", "--destination", out) == 2
    assert not out.exists()


def test_annulus_fields_are_written_in_blocks(tmp_path):
    grid = AnnulusProblem().radial_grid(5)
    theta = np.linspace(0.0, 2.0 * np.pi, 3)
    solution = AnnulusSolution(grid, theta, np.arange(2), np.ones((2, grid.N + 1), dtype=complex), order=6)
    frame = helmdat.field_frame(solution)
    assert list(frame.columns) == helmdat.FIELD_COLUMNS and len(frame) == 5 * 3
    assert np.allclose(frame["re_u"].iloc[:3], [2.0, 0.0, 2.0])

    path = helmdat.write_frame(frame, str(tmp_path / "field"), "gnuplot", block=theta.size)
    blocks = open(path).read().split("\n\n")
    assert len(blocks) == 5
    assert all(len(block.strip().splitlines()) in (3, 4) for block in blocks)

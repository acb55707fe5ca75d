# ======================================================================================================================
#
#     _   _      _           ____    _  _____
#    | | | | ___| |_ __ ___ |  _ \  / \|_   _|
#    | |_| |/ _ \ | '_ ` _ \| | | |/ _ \ | |
#    |  _  |  __/ | | | | | | |_| / ___ \| |
#    |_| |_|\___|_|_| |_| |_|____/_/   \_\_|
#
#   License: MIT
#
# ======================================================================================================================

""" --------------------------------------------------------------------------------------------------------------------
Imports
---------------------------------------------------------------------------------------------------------------------"""

''' External '''
import sys
import json
import math
import numpy as np
import pandas as pd
from sklearn.base import clone

'''  Internal '''
from HelmDAT.common import message, create_dir, HelmDATError, InvalidInput
from HelmDAT.user import UserInput
from HelmDAT.pipeline import FdmSolver, DatSolver
from HelmDAT.stages.analysis import annulus_errors, compare_solutions, report_frame
from HelmDAT.stages.problem_library import annulus_reference

''' --------------------------------------------------------------------------------------------------------------------
Global Variables
---------------------------------------------------------------------------------------------------------------------'''

helmdat_asci = """
    _   _      _           ____    _  _____
   | | | | ___| |_ __ ___ |  _ \\  / \\|_   _|
   | |_| |/ _ \\ | '_ ` _ \\| | | |/ _ \\ | |
   |  _  |  __/ | | | | | | |_| / ___ \\| |
   |_| |_|\\___|_|_| |_| |_|____/_/   \\_\\_|
    """

DEFAULT_ORDER = 6
DEFAULT_METHOD = "dat"
FLOAT_FORMAT = "%.16g"
EXTENSIONS = {"csv": "csv", "json": "json", "gnuplot": "dat"}
SAMPLE_COLUMNS = ["x", "re_u", "im_u", "re_du", "im_du"]
FIELD_COLUMNS = ["r", "theta", "re_u", "im_u"]

''' --------------------------------------------------------------------------------------------------------------------
Functions
---------------------------------------------------------------------------------------------------------------------'''

def run(ui=False):

    """
    Solve a problem or run a convergence study as requested on the command line.

    ...

    Parameters
    __________
    ui : User Input Class
        Carries all information required to execute HelmDAT, see UserInput class for further information.

    Output
    __________
    Result files in ui.destination. Errors are reported on standard error and end the process with the exit status
    of the error class; no result file is written in that case.
    """

    try:
        if not ui:
            ui = UserInput()
        if ui.verbose:
            message(helmdat_asci)

        if ui.mode == "convergence":
            written = cmd_convergence(ui)
        else:
            written = cmd_solve(ui)

    except HelmDATError as error:
        message("Error: " + str(error), level="e")
        sys.exit(error.exit_status)

    if ui.verbose:
        message("Results saved to: " + ", ".join(written), important=True)
    return written

def make_solver(ui, entry, N, method=None, order=None, value_only=False):

    """
    The solver a run asks for, with catalog defaults for everything the command line left open.
    """

    method = method or ui.method or DEFAULT_METHOD
    order = order or ui.order or DEFAULT_ORDER
    value_only = value_only or ui.value_only
    if method == "fdm":
        return FdmSolver(order=order, value_only=value_only, condition=ui.condition, n_jobs=ui.threads,
                         verbose=ui.verbose)
    return DatSolver(order=order, initial_partition=ui.initial_partition or entry.N0,
                     level=ui.level or max(1, entry.level(N)), split=ui.split or entry.s, value_only=value_only,
                     condition=ui.condition, n_jobs=ui.threads, verbose=ui.verbose)

def solve_entry(solver, entry, N, series=None):

    """
    Solve a catalog entry at size N and compare it with the entry's reference.

    ...

    Parameters
    __________
    solver : FdmSolver or DatSolver
    entry : CatalogEntry
    N : int
        Size label; the grid follows entry.grid_rule.
    series : str
        Block label for the convergence table.

    Returns
    __________
    tuple
        (solution, ErrorReport or None). The reference is the closed form or oracle, the same solver on the refined
        grid restricted to the knots of N, or the refined annulus solve; definition files have none.
    """

    level, split = solver.tree_parameters()

    if entry.reference == "annulus":
        solution = solver.solve_annulus(entry.problem, N)
        wall_ms = solver.wall_ms_
        reference = annulus_reference(entry.problem, N, solver.order, n_jobs=solver.n_jobs)
        return solution, annulus_errors(solution, reference, level, split, wall_ms, N, series)

    grid = entry.grid(N)
    solution = solver.solve(entry.problem, grid)
    wall_ms = solver.wall_ms_

    if entry.reference in ("closed-form", "oracle"):
        reference = entry.exact.sample(grid, solver.order)
    elif entry.reference == "refinement":
        fine = entry.grid(entry.refine_rule(N))
        reference = clone(solver).solve(entry.problem, fine).restrict(grid)
    else:
        return solution, None

    return solution, compare_solutions(solution, reference, entry.problem, level, split, wall_ms, N, series)

def cmd_solve(ui):

    """
    Solve one problem at one size; write the solution samples and, when a reference exists, the error report.

    ...

    Returns
    __________
    list
        Paths written.
    """

    entry, N = ui.entry, ui.size
    solver = make_solver(ui, entry, N)
    if ui.verbose:
        message("Solving " + entry.name + " at N = " + str(N), level=2)

    solution, report = solve_entry(solver, entry, N, series=solver.method)
    if entry.reference == "annulus":
        samples, block = field_frame(solution), solution.theta.size
    else:
        samples, block = sample_frame(solution), None

    stem = ui.destination + "/" + entry.name + "_" + solver.method + "_M" + str(solver.order) + "_N" + str(N)
    create_dir(ui.destination)
    written = [write_frame(samples, stem + "_solution", ui.format, block)]
    if report is not None:
        if ui.verbose:
            message("Relative max error: " + FLOAT_FORMAT % report.rel_inf)
        written.append(write_frame(report_frame([report]), stem + "_report", ui.format))
    return written

def convergence_rows(ui):

    """
    The (order, series, size, solver) rows of a convergence study: either the rows of a table preset or one block
    for the requested method and sizes.
    """

    entry, preset = ui.entry, ui.preset
    if preset is None:
        orders, methods, trees = [ui.order or DEFAULT_ORDER], [ui.method or DEFAULT_METHOD], [(entry.level, None)]
        sizes = {orders[0]: ui.sizes}
        value_only = False
    else:
        orders = [ui.order] if ui.order else list(preset.orders)
        methods = [ui.method] if ui.method else list(preset.methods)
        trees = preset.trees if ui.level is None else [(entry.level, None)]
        sizes = {M: ui.sizes if ui.sizes else preset.sizes.get(M, []) for M in orders}
        value_only = preset.value_only

    rows = []
    for M in orders:
        if not sizes[M]:
            raise InvalidInput("no sizes to run for order " + str(M))
        for method in methods:
            base = make_solver(ui, entry, sizes[M][0], method=method, order=M, value_only=value_only)
            if method == "fdm":
                rows += [(M, "fdm", N, clone(base)) for N in sizes[M]]
                continue
            for k, (rule, split) in enumerate(trees):
                for N in sizes[M]:
                    level = ui.level or max(1, int(rule(N)))
                    solver = clone(base).set_params(level=level, split=ui.split or split or entry.s)
                    rows.append((M, "dat" + str(k), N, solver))
    return rows

def cmd_convergence(ui):

    """
    Run every row of a convergence study and write the table with the observed orders.

    ...

    Returns
    __________
    list
        Paths written.
    """

    entry = ui.entry
    reports = []
    for M, series, N, solver in convergence_rows(ui):
        if ui.verbose:
            message("Order " + str(M) + ", " + series + ", N = " + str(N), level=2)
        _, report = solve_entry(solver, entry, N, series=series)
        if report is None:
            raise InvalidInput(entry.name + " has no reference solution, so it has no convergence table")
        reports.append(report)

    name = "table" + str(ui.table) if ui.preset is not None else entry.name + "_convergence"
    create_dir(ui.destination)
    return [write_frame(report_frame(reports, orders=True), ui.destination + "/" + name, ui.format)]

def sample_frame(solution):
    derivative = solution.derivative
    return pd.DataFrame({"x": solution.grid.knots, "re_u": solution.values.real, "im_u": solution.values.imag,
                         "re_du": derivative.real, "im_du": derivative.imag}, columns=SAMPLE_COLUMNS)

def field_frame(solution):

    """
    The annulus field in long format, one row per (r, theta), theta running fastest.
    """

    field = solution.field()
    r = np.repeat(solution.grid.knots, solution.theta.size)
    theta = np.tile(solution.theta, solution.grid.N + 1)
    return pd.DataFrame({"r": r, "theta": theta, "re_u": field.real.ravel(), "im_u": field.imag.ravel()},
                        columns=FIELD_COLUMNS)

def _json_value(value):
    if value is None or isinstance(value, (bool, np.bool_)):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    value = float(value)
    if math.isnan(value):
        return None
    return float(FLOAT_FORMAT % value) if math.isfinite(value) else value

def write_frame(frame, stem, fmt, block=None):

    """
    Write a frame as CSV, JSON records or gnuplot whitespace columns.

    Floats go out with 16 significant digits in every format, so CSV and JSON parse to the same numbers; missing
    values are empty in CSV, null in JSON and nan for gnuplot.

    ...

    Parameters
    __________
    frame : DataFrame
    stem : str
        Path without extension.
    fmt : str
        "csv", "json" or "gnuplot".
    block : int
        Rows per gnuplot block; blocks are separated by a blank line.

    Returns
    __________
    str
        The path written.
    """

    if fmt not in EXTENSIONS:
        raise InvalidInput("unknown output format " + repr(fmt))
    path = stem + "." + EXTENSIONS[fmt]

    if fmt == "csv":
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    elif fmt == "json":
        records = [{column: _json_value(value) for column, value in zip(frame.columns, row)}
                   for row in frame.itertuples(index=False, name=None)]
        with open(path, "w") as handle:
            json.dump(records, handle, indent=1)
    else:
        with open(path, "w") as handle:
            handle.write("# " + " ".join(frame.columns) + "\n")
            step = block or max(len(frame), 1)
            for start in range(0, len(frame), step):
                if start:
                    handle.write("\n")
                frame.iloc[start:start + step].to_csv(handle, sep=" ", header=False, index=False,
                                                      float_format=FLOAT_FORMAT, na_rep="nan")
    return path

#=======================================================================================================================
#
#   HelmDAT - Command Line Interface
#   License: MIT
#
#   Parse user arguments and problem definition files
#
#=======================================================================================================================

''' --------------------------------------------------------------------------------------------------------------------
Imports
---------------------------------------------------------------------------------------------------------------------'''

''' Internal '''
from HelmDAT.common import message, resolve_threads, InvalidInput
from HelmDAT.stages.fields import PiecewiseField, parse_expression
from HelmDAT.stages.helmholtz_fdm import BoundaryCondition, Grid, HelmholtzProblem
from HelmDAT.stages.problem_library import CatalogEntry, example_catalog, table_preset

''' External '''
import sys, argparse
import configparser
from pathlib import Path
import numpy as np

''' --------------------------------------------------------------------------------------------------------------------
Global Variables
---------------------------------------------------------------------------------------------------------------------'''

MODES = ("solve", "convergence")
METHODS = ("dat", "fdm")
FORMATS = ("csv", "json", "gnuplot")

''' --------------------------------------------------------------------------------------------------------------------
Classes
---------------------------------------------------------------------------------------------------------------------'''

class UserInput:

    """
    Everything one HelmDAT run needs, read from the command line.

    ...

    Attributes
    __________
    mode : str
        "solve" or "convergence".
    entry : CatalogEntry
        The catalog problem, or the problem of a definition file.
    preset : TablePreset or None
        Row structure of a benchmark table (convergence mode with --table).
    method, order, size, sizes, level, split, initial_partition : run parameters; None where the catalog default
        applies.
    threads : int
        Resolved thread count (-1 for all cores).
    """

    def __init__(self, args=None):
        argv = sys.argv[1:] if args is None else list(args)
        if self._is_cli(argv):
            self.cli = True
            self.input = self._get_args(argv)

            ''' Mode '''
            self.mode = self.input.mode if self.input.mode else 'solve'

            ''' Problem '''
            self.problem = self.input.problem
            self.definition = self.input.definition
            self.table = self.input.table

            ''' Solver '''
            self.method = self.input.method
            self.order = self.input.order
            self.level = self.input.level
            self.split = self.input.split
            self.initial_partition = self.input.initial_partition
            self.value_only = self.input.value_only
            self.condition = self.input.condition

            ''' Sizes '''
            self.size = self.input.size
            self.sizes = self.input.sizes

            ''' Output '''
            self.format = self.input.format if self.input.format else 'csv'
            self.destination = self.input.destination if self.input.destination else '.'
            self.verbose = self.input.verbose

            '''Misc'''
            self._input_checks()
            self.threads = resolve_threads(self.input.threads)
            self._load_problem()

        else:
            message("No arguments supplied. Please use HelmDAT --help for further information about input.")
            sys.exit(0)

    def _is_cli(self, argv):
        return len(argv) > 0

    def _get_args(self, argv):

        ''' Get arguments and options from CLI '''

        cli = argparse.ArgumentParser(description="HelmDAT CLI")

        cli.add_argument('--mode', '-m',
                         required=False, choices=MODES,
                         help=("""'solve' (default): solve one problem at one size and write the samples and the error
                               report. 'convergence': run a range of sizes and write the convergence table."""))

        cli.add_argument('--problem', '-p',
                         required=False,
                         help=("""Catalog problem: ex1.1, ex4.1, ex4.2, ex4.3, ex4.4 or ex2D."""))

        cli.add_argument('--definition',
                         required=False,
                         help=("""Path to a problem definition file (INI sections [domain], [fields], [boundary],
                               optional [diracs] and [grid])."""))

        cli.add_argument('--method',
                         required=False, choices=METHODS,
                         help=("""'dat' (default): Dirac assisted tree. 'fdm': one global compact system."""))

        cli.add_argument('--order', '-M',
                         required=False, type=int,
                         help=("""Even accuracy order of the compact stencils. Defaults to 6."""))

        cli.add_argument('--size', '-N',
                         required=False, type=int,
                         help=("""Problem size N (solve mode); its meaning follows the grid rule of the problem."""))

        cli.add_argument('--sizes',
                         required=False, type=int, nargs='*',
                         help=("""Problem sizes for the convergence mode, coarse to fine."""))

        cli.add_argument('--table', '-t',
                         required=False, type=int,
                         help=("""Convergence preset 1-7 reproducing the rows of a benchmark table."""))

        cli.add_argument('--level', '-L',
                         required=False, type=int,
                         help=("""Tree levels L. Defaults to the level rule of the problem."""))

        cli.add_argument('--split', '-s',
                         required=False, type=int,
                         help=("""Split exponent s: every interval splits into 2^s per level."""))

        cli.add_argument('--initial-partition', '--N0',
                         required=False, type=int,
                         help=("""Number of level-1 intervals N0."""))

        cli.add_argument('--value-only',
                         required=False, action='store_true',
                         help=("""Build coefficient jets from point values only."""))

        cli.add_argument('--condition',
                         required=False, action='store_true',
                         help=("""Estimate the local and link condition numbers."""))

        cli.add_argument('--format', '-f',
                         required=False, choices=FORMATS,
                         help=("""Output format: csv (default), json or gnuplot whitespace columns."""))

        cli.add_argument('--destination', '-d',
                         required=False,
                         help=("""Directory the results are written to. Defaults to the current directory."""))

        cli.add_argument('--threads',
                         required=False,
                         help=("""Worker threads. Defaults to HELMHOLTZ_DAT_THREADS, then to every core."""))

        cli.add_argument('--verbose', '-v',
                         required=False, action='store_true',
                         help=("""Report progress."""))

        user_input = cli.parse_args(argv)
        return user_input

    def _input_checks(self):

        if bool(self.problem) == bool(self.definition) and not (self.mode == 'convergence' and self.table):
            raise InvalidInput("supply exactly one of --problem and --definition")

        if self.order is not None and (self.order < 2 or self.order % 2):
            raise InvalidInput("--order must be an even integer >= 2, got " + str(self.order))

        for name in ("level", "split", "initial_partition"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise InvalidInput("--" + name.replace("_", "-") + " must be positive, got " + str(value))

        if self.mode == 'solve':
            if self.size is None:
                raise InvalidInput("solve mode needs --size")
            if self.sizes is not None or self.table is not None:
                raise InvalidInput("--sizes and --table belong to the convergence mode. Did you forget "
                                   "'--mode convergence'?")
        elif self.mode == 'convergence':
            if self.size is not None:
                raise InvalidInput("convergence mode takes --sizes, not --size")
            if self.table is None and not self.sizes:
                raise InvalidInput("convergence mode needs a non-empty --sizes list or a --table preset")
            if self.table is not None and self.sizes is not None and not self.sizes:
                raise InvalidInput("the --sizes list is empty")

    def _load_problem(self):
        self.preset = table_preset(self.table) if self.table is not None else None
        if self.definition:
            self.entry = load_definition(self.definition)
        elif self.problem:
            self.entry = example_catalog(self.problem)
        else:
            self.entry = example_catalog(self.preset.example)

''' --------------------------------------------------------------------------------------------------------------------
Functions
---------------------------------------------------------------------------------------------------------------------'''

def _constant(text, what):
    expression = parse_expression(text)
    values = [complex(np.asarray(expression(x))) for x in (0.0, 1.0)]
    if values[0] != values[1]:
        raise InvalidInput(what + " must be a constant, got " + repr(text))
    return values[0].real if values[0].imag == 0 else values[0]

def _list(text):
    return [item.strip() for item in text.split(",") if item.strip()] if text else []

def _floats(text, what):
    try:
        return [float(item) for item in _list(text)]
    except ValueError:
        raise InvalidInput(what + " must be a list of real numbers, got " + repr(text))

def _field(section, name, edges):
    if name not in section:
        raise InvalidInput("[fields] needs an entry for " + name)
    texts = [t.strip() for t in section[name].split("|")]
    n_pieces = len(edges) - 1
    if len(texts) == 1:
        texts = texts * n_pieces
    if len(texts) != n_pieces:
        raise InvalidInput(name + " has " + str(len(texts)) + " pieces, the domain has " + str(n_pieces))
    return PiecewiseField(edges, [parse_expression(t) for t in texts])

def _boundary(section, side):
    if side not in section:
        raise InvalidInput("[boundary] needs an entry for " + side)
    items = _list(section[side])
    if len(items) not in (2, 3):
        raise InvalidInput(side + " boundary needs lambda0, lambda1 and optionally g, got " + repr(section[side]))
    values = [_constant(item, side + " boundary value") for item in items]
    return BoundaryCondition(*values)

def load_definition(path):

    """
    Read a problem definition file.

    ...

    Parameters
    __________
    path : str
        INI file with the sections [domain] (interval, breakpoints), [fields] (a, kappa2, f with pieces separated
        by |), [boundary] (left, right as lambda0, lambda1, g), optionally [diracs] (location = weight) and [grid]
        (counts: intervals per piece at N = 1).

    Returns
    __________
    CatalogEntry
        A catalog-like entry without a reference; its grid at size N has counts[k] * N intervals on piece k.
    """

    parser = configparser.ConfigParser(interpolation=None)
    try:
        found = parser.read(path)
    except (configparser.Error, UnicodeDecodeError) as error:
        raise InvalidInput("malformed definition file " + str(path) + ": " + str(error))
    if not found:
        raise InvalidInput("cannot read definition file " + str(path))

    for section in ("domain", "fields", "boundary"):
        if not parser.has_section(section):
            raise InvalidInput("definition file " + str(path) + " has no [" + section + "] section")

    interval = _floats(parser["domain"].get("interval"), "interval")
    if len(interval) != 2 or not interval[0] < interval[1]:
        raise InvalidInput("interval must read 'lo, hi' with lo < hi")
    edges = [interval[0]] + _floats(parser["domain"].get("breakpoints", ""), "breakpoints") + [interval[1]]

    a, kappa2, f = (_field(parser["fields"], name, edges) for name in ("a", "kappa2", "f"))

    diracs = []
    if parser.has_section("diracs"):
        for location, weight in parser["diracs"].items():
            try:
                diracs.append((float(location), _constant(weight, "Dirac weight")))
            except ValueError:
                raise InvalidInput("Dirac location must be a real number, got " + repr(location))

    counts = [1] * (len(edges) - 1)
    if parser.has_section("grid") and "counts" in parser["grid"]:
        try:
            counts = [int(c) for c in _list(parser["grid"]["counts"])]
        except ValueError:
            raise InvalidInput("grid counts must be integers, got " + repr(parser["grid"]["counts"]))
        if len(counts) != len(edges) - 1 or min(counts) < 1:
            raise InvalidInput("one positive grid count per piece is needed")

    name = Path(path).stem
    problem = HelmholtzProblem(a, kappa2, f, _boundary(parser["boundary"], "left"),
                               _boundary(parser["boundary"], "right"), diracs, name=name)

    def grid_rule(N):
        if N < 1:
            raise InvalidInput("size must be positive, got " + str(N))
        return Grid.piecewise_uniform(edges, [c * N for c in counts])

    return CatalogEntry(name, problem, grid_rule, lambda N: 1, 4, 1, "none",
                        description="definition file " + str(path))

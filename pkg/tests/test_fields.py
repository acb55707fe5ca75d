#=======================================================================================================================
#
#   HelmDAT - Field tests
#   License: MIT
#
#=======================================================================================================================

''' --------------------------------------------------------------------------------------------------------------------
Imports
---------------------------------------------------------------------------------------------------------------------'''

''' Internal '''
from HelmDAT.common import InvalidInput
from HelmDAT.stages import jet_engine as je
from HelmDAT.stages.fields import ClosedForm, PiecewiseField, jets_from_values, parse_expression

''' External '''
import numpy as np
import pytest

''' --------------------------------------------------------------------------------------------------------------------
Functions
---------------------------------------------------------------------------------------------------------------------'''


def test_expressions_evaluate_on_arrays():
    x = np.linspace(0.0, 1.0, 5)
    assert np.allclose(parse_expression("1 + x**2")(x), 1 + x ** 2)
    assert np.allclose(parse_expression("exp(-x) * cosh(2*x)")(x), np.exp(-x) * np.cosh(2 * x))
    assert np.allclose(parse_expression("-1e4 * x**6")(x), -1e4 * x ** 6)
    assert parse_expression("2j + i")(0.0) == 3j
    assert parse_expression("pi")(0.3) == pytest.approx(np.pi)


def test_expressions_differentiate_exactly_on_jets():
    jet = parse_expression("sin(40*pi*x) + 1.1").__call__(je.identity_jet(np.array([0.1, 0.2]), 3))
    w = 40 * np.pi
    x = np.array([0.1, 0.2])
    assert np.allclose(jet.derivatives()[1], w * np.cos(w * x))
    assert np.allclose(jet.derivatives()[3], -w ** 3 * np.cos(w * x))


@pytest.mark.parametrize("text", ["x + y", "abs(x)", "x if x else 1", "sin(x, 2)", "__import__('os')", "1 +",
                                  "'text'", "x % 2", "True"])
def test_expressions_outside_the_grammar_are_rejected(text):
    with pytest.raises(InvalidInput):
        parse_expression(text)


def test_piecewise_field_takes_the_requested_side():
    field = PiecewiseField([0.0, 0.5, 1.0], [1.0, lambda x: 2.0 + x])
    assert field([0.5], "left")[0] == 1.0
    assert field([0.5], "right")[0] == 2.5
    assert np.allclose(field(np.array([0.1, 0.9])), [1.0, 2.9])
    assert list(field.breakpoints) == [0.5]
    assert not field.is_constant()


def test_piecewise_field_jets():
    field = PiecewiseField([0.0, 0.5, 1.0], [3.0, lambda x: x ** 2])
    jet = field.jets(np.array([0.25, 0.5, 0.75]), 2, "right")
    assert np.allclose(jet.coeffs[:, 0], [3.0, 0.0, 0.0])
    assert np.allclose(jet.coeffs[:, 1], [0.25, 1.0, 1.0])
    assert np.allclose(jet.coeffs[:, 2], [0.5625, 1.5, 1.0])
    left = field.jets(np.array([0.5]), 2, "left")
    assert np.allclose(left.coeffs[:, 0], [3.0, 0.0, 0.0])


def test_piecewise_field_validates_its_pieces():
    with pytest.raises(InvalidInput):
        PiecewiseField([0.0, 0.5, 1.0], [1.0])
    with pytest.raises(InvalidInput):
        PiecewiseField([0.0, 0.5, 0.5, 1.0], [1.0, 2.0, 3.0])


def test_closed_form_evaluates_exponentials_and_polynomials():
    source = ClosedForm([(2.0, 1.0), (1.0, -2.0)], [1.0, 0.0, 3.0])
    x = np.array([0.0, 0.5])
    assert np.allclose(source(x), 2 * np.exp(x) + np.exp(-2 * x) + 1 + 3 * x ** 2)
    jet = source(je.identity_jet(x, 1))
    assert np.allclose(jet.derivatives()[1], 2 * np.exp(x) - 2 * np.exp(-2 * x) + 6 * x)
    assert np.allclose(source.scaled(2.0)(x), 2 * source(x))


def test_value_only_jets_are_exact_on_polynomials():
    points = np.array([0.2, 0.5])
    jet = jets_from_values(lambda x: x ** 3 - x, points, 0.1, 4)
    assert np.allclose(jet.coeffs[0], points ** 3 - points)
    assert np.allclose(jet.coeffs[1], 3 * points ** 2 - 1)
    assert np.allclose(jet.coeffs[2], 3 * points)
    assert np.allclose(jet.coeffs[3], 1.0)
    assert np.allclose(jet.coeffs[4], 0.0, atol=1e-6)


def test_value_only_jets_stay_inside_the_piece():
    # at the piece ends the window slides inward, so the other side of the jump is never sampled
    sampler = lambda x: np.where(x <= 0.5, np.exp(x), 100.0)
    jet = jets_from_values(sampler, np.array([0.5]), 0.05, 4, bounds=(0.0, 0.5))
    assert np.allclose(jet.derivatives()[:3, 0], np.exp(0.5), rtol=1e-4)


def test_value_only_jets_converge_for_smooth_pieces():
    f = lambda x: np.sin(3 * x)
    errors = [abs(jets_from_values(f, np.array([0.4]), h, 6).derivatives()[2, 0] + 9 * np.sin(1.2))
              for h in (0.1, 0.05)]
    assert errors[1] < errors[0] / 20


def test_value_only_fields_need_steps():
    field = PiecewiseField([0.0, 1.0], [lambda x: je.exp(x)], value_only=True)
    with pytest.raises(InvalidInput):
        field.jets(np.array([0.3]), 2)
    jet = field.jets(np.array([0.3]), 2, steps=np.array([0.01]))
    assert np.allclose(jet.derivatives()[:, 0], np.exp(0.3), rtol=1e-4)


def test_value_only_jets_take_the_piece_from_bounds():
    # continuous kink at 0.5, the slope is 1 on the left and 2 on the right
    sampler = lambda x: np.where(x < 0.5, np.exp(x - 0.5), 2.0 * x)
    point = np.array([0.5])
    left = jets_from_values(sampler, point, 0.05, 4, (0.0, 0.5)).derivatives()[:2, 0]
    right = jets_from_values(sampler, point, 0.05, 4, (0.5, 1.0)).derivatives()[:2, 0]
    assert np.allclose(left, [1.0, 1.0], rtol=1e-4)
    assert np.allclose(right, [1.0, 2.0], rtol=1e-8)


def test_value_only_jets_reject_short_pieces():
    with pytest.raises(InvalidInput):
        jets_from_values(np.exp, np.array([0.5]), 0.5, 6, bounds=(0.5, 0.6))

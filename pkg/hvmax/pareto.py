"""Two-objective toy problem with a slightly concave Pareto frontier.

On ``x in [0, 1]`` the objectives are ``f1(x) = x`` and ``f2(x) = (1 - x) ** exponent``. For
``exponent < 1`` the frontier bends away from the origin, so every weighted sum of the
objectives is minimized at an endpoint, while the log-hypervolume with equal Nadir components
is maximized at a balanced interior point.
"""

import numpy
from numpy import ndarray
from typing import NamedTuple

from hvmax import type_checking

if type_checking.TYPE_CHECKING:
    from typing import List  # NOQA
    from typing import Tuple  # NOQA

DEFAULT_GRID_STEP = 1e-4
_MAX_GRID_STEP = 1e-4


class ToyProblem(NamedTuple('_ToyProblem', [('exponent', float)])):
    """Concave toy problem on ``[0, 1]``.

    Attributes:
        exponent:
            Exponent of the second objective, strictly between 0 and 1. Values closer to 1
            give an almost linear frontier.
    """

    def __new__(cls, exponent=0.9):
        # type: (float) -> ToyProblem

        if not 0.0 < exponent < 1.0:
            raise ValueError('Exponent must be in (0, 1) but got {}.'.format(exponent))
        return super(ToyProblem, cls).__new__(cls, float(exponent))


class GridRow(
        NamedTuple('_GridRow', [
            ('x', float),
            ('f1', float),
            ('f2', float),
            ('linear', float),
            ('log_hypervolume', float),
        ])):
    pass


def toy_objectives(x, problem):
    # type: (float, ToyProblem) -> Tuple[float, float]
    """Evaluate both objectives at ``x``."""

    if not 0.0 <= x <= 1.0:
        raise ValueError('x must be in [0, 1] but got {}.'.format(x))
    f1, f2 = _objectives_on(problem, numpy.array([x], dtype=numpy.float64))
    return float(f1[0]), float(f2[0])


def grid(grid_step=DEFAULT_GRID_STEP):
    # type: (float) -> ndarray
    """Evenly spaced points of ``[0, 1]`` including both endpoints."""

    if not 0.0 < grid_step <= _MAX_GRID_STEP:
        raise ValueError('Grid step must be in (0, {}] but got {}.'.format(
            _MAX_GRID_STEP, grid_step))
    n = int(round(1.0 / grid_step))
    return numpy.arange(n + 1) / float(n)


def _objectives_on(problem, xs):
    # type: (ToyProblem, ndarray) -> Tuple[ndarray, ndarray]

    return xs, (1.0 - xs) ** problem.exponent


def grid_log_hypervolume(f1, f2, z1, z2):
    # type: (ndarray, ndarray, float, float) -> ndarray
    """Log-hypervolume of every grid point, ``-inf`` where the Nadir point is not dominating."""

    with numpy.errstate(divide='ignore', invalid='ignore'):
        values = numpy.log(z1 - f1) + numpy.log(z2 - f2)
    values[(z1 <= f1) | (z2 <= f2)] = -numpy.inf
    return values


def linear_argmin(problem, w1, w2, grid_step=DEFAULT_GRID_STEP):
    # type: (ToyProblem, float, float, float) -> float
    """Minimize ``w1 * f1 + w2 * f2`` over the grid.

    Ties are broken toward the smaller ``x``.
    """

    if w1 < 0 or w2 < 0 or (w1 == 0 and w2 == 0):
        raise ValueError('Weights must be non-negative and not both zero but got {}, {}.'.format(
            w1, w2))
    xs = grid(grid_step)
    f1, f2 = _objectives_on(problem, xs)
    return float(xs[numpy.argmin(w1 * f1 + w2 * f2)])


def hv_argmax(problem, z1, z2, grid_step=DEFAULT_GRID_STEP):
    # type: (ToyProblem, float, float, float) -> float
    """Maximize ``log(z1 - f1) + log(z2 - f2)`` over the grid.

    Ties are broken toward the smaller ``x``.
    """

    if not (z1 > 1.0 and z2 > 1.0):
        raise ValueError('Nadir components must exceed 1 but got {}, {}.'.format(z1, z2))
    xs = grid(grid_step)
    f1, f2 = _objectives_on(problem, xs)
    return float(xs[numpy.argmax(grid_log_hypervolume(f1, f2, z1, z2))])


def is_grid_efficient(problem, x, grid_step=DEFAULT_GRID_STEP):
    # type: (ToyProblem, float, float) -> bool
    """Check that no grid point dominates ``x`` in both objectives.

    ``x`` is evaluated in the same array as the grid, so a grid point equal to ``x`` never
    dominates it by a rounding difference.
    """

    if not 0.0 <= x <= 1.0:
        raise ValueError('x must be in [0, 1] but got {}.'.format(x))
    f1, f2 = _objectives_on(problem, numpy.append(grid(grid_step), x))
    f1_x, f2_x = f1[-1], f2[-1]
    f1, f2 = f1[:-1], f2[:-1]
    dominating = (f1 <= f1_x) & (f2 <= f2_x) & ((f1 < f1_x) | (f2 < f2_x))
    return not bool(numpy.any(dominating))


def weight_sweep(problem, n_ratios=99, grid_step=DEFAULT_GRID_STEP):
    # type: (ToyProblem, int, float) -> List[Tuple[float, float, float]]
    """Minimize weighted sums for evenly spread strictly positive weight pairs.

    Returns:
        ``(w1, w2, x*)`` triples with ``w1 = k / (n_ratios + 1)`` and ``w2 = 1 - w1``.
    """

    results = []
    for k in range(1, n_ratios + 1):
        w1 = k / float(n_ratios + 1)
        w2 = 1.0 - w1
        results.append((w1, w2, linear_argmin(problem, w1, w2, grid_step)))
    return results


def pareto_grid(problem, z1, z2, w1=0.5, w2=0.5, grid_step=DEFAULT_GRID_STEP):
    # type: (ToyProblem, float, float, float, float, float) -> List[GridRow]
    """Tabulate both scalarizations over the grid for plotting."""

    xs = grid(grid_step)
    f1, f2 = _objectives_on(problem, xs)
    linear = w1 * f1 + w2 * f2
    log_hv = grid_log_hypervolume(f1, f2, z1, z2)
    return [GridRow(*map(float, row)) for row in zip(xs, f1, f2, linear, log_hv)]


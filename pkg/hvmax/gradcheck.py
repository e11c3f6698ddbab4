"""Finite-difference checks of the autoencoder gradients."""

import numpy
from numpy import ndarray
from typing import NamedTuple

from hvmax import data
from hvmax import net
from hvmax.net import AutoencoderParams
from hvmax.net import Batch
from hvmax import scalarize
from hvmax import type_checking

if type_checking.TYPE_CHECKING:
    from typing import Callable  # NOQA
    from typing import List  # NOQA
    from typing import Tuple  # NOQA

DEFAULT_STEP = 1e-6
DEFAULT_THRESHOLD = 1e-5
MAX_INPUT_DIM = 16
MAX_HIDDEN_DIM = 8

# Entries smaller than this are compared in absolute rather than relative terms.
_ERROR_FLOOR = 1e-3
_BATCH_SIZE = 5


class CheckResult(
        NamedTuple('_CheckResult', [
            ('name', str),
            ('trial', int),
            ('max_relative_error', float),
            ('passed', bool),
        ])):
    pass


def relative_error(analytic, numeric):
    # type: (ndarray, ndarray) -> ndarray
    """Entrywise ``|a - n| / max(|a|, |n|, 1e-3)``."""

    scale = numpy.maximum(numpy.maximum(numpy.abs(analytic), numpy.abs(numeric)), _ERROR_FLOOR)
    return numpy.abs(analytic - numeric) / scale


def numerical_gradient(f, params, step=DEFAULT_STEP):
    # type: (Callable[[AutoencoderParams], float], AutoencoderParams, float) -> ndarray
    """Central differences of ``f`` with respect to every parameter entry, flattened."""

    theta = params.flatten()
    gradient = numpy.empty_like(theta)
    for i in range(theta.size):
        original = theta[i]
        theta[i] = original + step
        upper = f(AutoencoderParams.unflatten(theta, params))
        theta[i] = original - step
        lower = f(AutoencoderParams.unflatten(theta, params))
        theta[i] = original
        gradient[i] = (upper - lower) / (2.0 * step)
    return gradient


def _random_problem(rng, input_dim, hidden_dim):
    # type: (numpy.random.RandomState, int, int) -> Tuple[AutoencoderParams, Batch]

    params = AutoencoderParams(
        rng.uniform(-1.0, 1.0, size=(hidden_dim, input_dim)),
        rng.uniform(-1.0, 1.0, size=hidden_dim),
        rng.uniform(-1.0, 1.0, size=(input_dim, hidden_dim)),
        rng.uniform(-1.0, 1.0, size=input_dim))
    clean = rng.uniform(0.0, 1.0, size=(_BATCH_SIZE, input_dim))
    corrupted = data.salt_pepper(clean, 0.3, rng)
    return params, Batch(clean, corrupted)


def _batch_losses(params, batch):
    # type: (AutoencoderParams, Batch) -> ndarray

    return net.per_sample_loss(net.forward(params, batch.corrupted), batch.clean)


def check_weighted_loss(rng, input_dim, hidden_dim, step=DEFAULT_STEP, perturbation=0.0):
    # type: (numpy.random.RandomState, int, int, float, float) -> float
    """Compare :func:`~hvmax.net.weighted_backward` with differences of ``sum(w_i * l_i)``.

    Returns:
        Maximum relative error over all parameter entries.
    """

    params, batch = _random_problem(rng, input_dim, hidden_dim)
    weights = rng.uniform(0.1, 1.0, size=_BATCH_SIZE)

    analytic = net.weighted_backward(params, batch, weights).flatten() + perturbation
    numeric = numerical_gradient(
        lambda p: float(numpy.dot(weights, _batch_losses(p, batch))), params, step)
    return float(numpy.max(relative_error(analytic, numeric)))


def check_hypervolume(rng, input_dim, hidden_dim, step=DEFAULT_STEP, perturbation=0.0):
    # type: (numpy.random.RandomState, int, int, float, float) -> float
    """Compare the self-adjusting weighted gradient with differences of ``-log H_mu``.

    The Nadir value is placed above the losses of the initial parameters and held fixed.

    Returns:
        Maximum relative error over all parameter entries.
    """

    params, batch = _random_problem(rng, input_dim, hidden_dim)
    losses = _batch_losses(params, batch)
    mu = scalarize.mu_for_batch(losses, rng.uniform(0.5, 2.0))
    weights = scalarize.hv_weights(losses, mu)

    analytic = net.weighted_backward(params, batch, weights).flatten() + perturbation
    numeric = numerical_gradient(
        lambda p: -scalarize.log_hypervolume_mu(_batch_losses(p, batch), mu), params, step)
    return float(numpy.max(relative_error(analytic, numeric)))


_CHECKS = (
    ('weighted_loss', check_weighted_loss),
    ('hypervolume', check_hypervolume),
)


def run_gradcheck(
        seed=0,  # type: int
        input_dim=6,  # type: int
        hidden_dim=4,  # type: int
        trials=10,  # type: int
        threshold=DEFAULT_THRESHOLD,  # type: float
        perturbation=0.0,  # type: float
):
    # type: (...) -> List[CheckResult]
    """Run every gradient check on ``trials`` random networks.

    Args:
        seed:
            Seed of the random networks and batches.
        input_dim:
            Number of inputs and outputs, at most 16.
        hidden_dim:
            Number of hidden units, at most 8.
        trials:
            Number of random configurations per check.
        threshold:
            Largest accepted relative error.
        perturbation:
            Offset added to every analytic gradient entry. Any noticeable offset must make
            the checks fail.

    Returns:
        One :class:`CheckResult` per check and trial.
    """

    if not (1 <= input_dim <= MAX_INPUT_DIM and 1 <= hidden_dim <= MAX_HIDDEN_DIM):
        raise ValueError('Gradient checks are limited to {}->{}->{} networks but got '
                         '{}->{}->{}.'.format(MAX_INPUT_DIM, MAX_HIDDEN_DIM, MAX_INPUT_DIM,
                                              input_dim, hidden_dim, input_dim))

    results = []
    for check_index, (name, check) in enumerate(_CHECKS):
        for trial in range(trials):
            rng = numpy.random.RandomState([seed, check_index, trial])
            error = check(rng, input_dim, hidden_dim, perturbation=perturbation)
            results.append(CheckResult(name, trial, error, error < threshold))
    return results

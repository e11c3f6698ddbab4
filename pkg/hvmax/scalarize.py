"""Scalarizations of per-sample losses.

Every function takes the per-sample losses of a batch (or any vector of objective values) and
turns them into a single number or into the weights of a weighted mean of the per-sample
gradients. All arithmetic is carried out in double precision and nothing is ever
exponentiated back out of log space.
"""

import numpy
from numpy import ndarray
from typing import NamedTuple

from hvmax.exceptions import DominanceViolation
from hvmax.exceptions import NonPositiveSlack
from hvmax import type_checking

if type_checking.TYPE_CHECKING:
    from typing import Sequence  # NOQA
    from typing import Union  # NOQA

    from hvmax.structs import NadirSchedule  # NOQA

    VectorLike = Union[ndarray, Sequence[float]]


class Mu(NamedTuple('_Mu', [('value', float)])):
    """Nadir value shared by every per-sample objective.

    A ``Mu`` is only meaningful together with the losses it was derived from: it must be
    strictly larger than all of them.
    """

    pass


class WeightVector(NamedTuple('_WeightVector', [('values', ndarray), ('normalized', bool)])):
    """Per-sample weights of a weighted mean loss.

    Attributes:
        values:
            Strictly positive weights, one per sample.
        normalized:
            Whether :attr:`values` sum to one.
    """

    pass


def _as_vector(values, name):
    # type: (VectorLike, str) -> ndarray

    array = numpy.asarray(values, dtype=numpy.float64)
    if array.ndim != 1 or array.size == 0:
        raise ValueError('{} must be a non-empty vector but got shape {}.'.format(
            name, array.shape))
    if not numpy.all(numpy.isfinite(array)):
        raise ValueError('{} must be finite but got {}.'.format(name, array))
    return array


def _mu_value(mu):
    # type: (Union[Mu, float]) -> float

    return float(mu.value if isinstance(mu, Mu) else mu)


def _gaps(objectives, nadir):
    # type: (ndarray, ndarray) -> ndarray

    gaps = nadir - objectives
    violated = numpy.flatnonzero(gaps <= 0)
    if violated.size > 0:
        i = int(violated[0])
        raise DominanceViolation(
            'The Nadir point must strictly dominate the objectives but component {} has '
            'z={!r} <= f={!r} ({} violation(s)).'.format(
                i, nadir[i], objectives[i], violated.size))
    return gaps


def linear_scalarize(losses, weights):
    # type: (VectorLike, VectorLike) -> float
    """Combine objectives linearly.

    Args:
        losses:
            Objective values.
        weights:
            Non-negative importances, at least one of them positive.

    Returns:
        The weighted sum of the objectives.
    """

    losses = _as_vector(losses, 'Losses')
    weights = _as_vector(weights, 'Weights')
    if losses.shape != weights.shape:
        raise ValueError('Got {} losses but {} weights.'.format(losses.size, weights.size))
    if numpy.any(weights < 0) or not numpy.any(weights > 0):
        raise ValueError(
            'Weights must be non-negative with at least one positive but got {}.'.format(weights))

    return float(numpy.dot(weights, losses))


def log_hypervolume(objectives, nadir):
    # type: (VectorLike, VectorLike) -> float
    """Compute the logarithm of the hypervolume dominated by a single solution.

    The hypervolume of a single point is the volume of the box between the point and the
    Nadir point, so its logarithm is the sum of the log-gaps.

    Args:
        objectives:
            Objective values of the solution.
        nadir:
            Nadir point, one component per objective.

    Returns:
        ``sum(log(nadir - objectives))``.

    Raises:
        :exc:`~hvmax.exceptions.DominanceViolation`:
            If some component of ``nadir`` is not strictly larger than the objective.
    """

    objectives = _as_vector(objectives, 'Objectives')
    nadir = _as_vector(nadir, 'Nadir point')
    if objectives.shape != nadir.shape:
        raise ValueError('Got {} objectives but a Nadir point of length {}.'.format(
            objectives.size, nadir.size))

    return float(numpy.sum(numpy.log(_gaps(objectives, nadir))))


def log_hypervolume_mu(losses, mu):
    # type: (VectorLike, Union[Mu, float]) -> float
    """Compute the log-hypervolume of the losses with the same Nadir value for every sample.

    This is :func:`log_hypervolume` with ``z_i = mu`` for all ``i``.
    """

    losses = _as_vector(losses, 'Losses')
    return log_hypervolume(losses, numpy.full_like(losses, _mu_value(mu)))


def hv_weights(losses, mu):
    # type: (VectorLike, Union[Mu, float]) -> WeightVector
    """Compute the self-adjusting weights induced by the log-hypervolume gradient.

    The gradient of :func:`log_hypervolume_mu` with respect to the model parameters is
    ``-sum(w_i * dl_i)`` with ``w_i = 1 / (mu - l_i)``. Larger losses get larger weights, and
    equal losses get equal weights.

    Args:
        losses:
            Per-sample losses at the current parameters.
        mu:
            Shared Nadir value, strictly larger than every loss.

    Returns:
        Unnormalized :class:`WeightVector`.
    """

    losses = _as_vector(losses, 'Losses')
    gaps = _gaps(losses, numpy.full_like(losses, _mu_value(mu)))
    return WeightVector(1.0 / gaps, False)


def hv_weights_nadir(objectives, nadir):
    # type: (VectorLike, VectorLike) -> WeightVector
    """Compute the gradient weights of :func:`log_hypervolume` for a general Nadir point.

    With distinct ``z_i`` the Nadir point acts as a prior inverse importance of each
    objective: the closer an objective is to its reference, the more it weighs.
    """

    objectives = _as_vector(objectives, 'Objectives')
    nadir = _as_vector(nadir, 'Nadir point')
    if objectives.shape != nadir.shape:
        raise ValueError('Got {} objectives but a Nadir point of length {}.'.format(
            objectives.size, nadir.size))
    return WeightVector(1.0 / _gaps(objectives, nadir), False)


def normalize_weights(w):
    # type: (WeightVector) -> WeightVector
    """Divide the weights by their sum.

    Normalized weights put a hypervolume step on the same scale as a mean loss step, so both
    objectives can share a learning rate.
    """

    values = numpy.asarray(w.values, dtype=numpy.float64)
    if values.ndim != 1 or values.size == 0 or not numpy.all(values > 0):
        raise ValueError('Weights must be a non-empty vector of positive values.')
    return WeightVector(values / numpy.sum(values), True)


def epsilon_at(schedule, epoch):
    # type: (NadirSchedule, int) -> float
    """Return the slack of the given epoch, counting from zero."""

    if epoch < 0:
        raise ValueError('Epoch must be non-negative but got {}.'.format(epoch))
    return schedule.epsilon0 + schedule.kappa * epoch


def mu_for_batch(losses, epsilon):
    # type: (VectorLike, float) -> Mu
    """Place the shared Nadir value ``epsilon`` above the worst loss of the batch.

    Raises:
        :exc:`~hvmax.exceptions.NonPositiveSlack`:
            If ``epsilon`` is not positive, or so small relative to the losses that it
            vanishes in the addition.
    """

    losses = _as_vector(losses, 'Losses')
    if not epsilon > 0:
        raise NonPositiveSlack('Slack must be positive but got {}.'.format(epsilon))

    worst = float(numpy.max(losses))
    value = worst + float(epsilon)
    if not value > worst:
        raise NonPositiveSlack(
            'Slack {} is lost to rounding on top of the worst loss {}.'.format(epsilon, worst))
    return Mu(value)


def log_hypervolume_gradient(losses, loss_gradients, mu):
    # type: (VectorLike, ndarray, Union[Mu, float]) -> ndarray
    """Gradient of :func:`log_hypervolume_mu` with respect to the parameters.

    Args:
        losses:
            Per-sample losses, shape ``(N,)``.
        loss_gradients:
            Per-sample loss gradients, shape ``(N, P)``.
        mu:
            Shared Nadir value, held fixed.

    Returns:
        ``-sum_i w_i * loss_gradients[i]`` with the weights of :func:`hv_weights`.
    """

    w = hv_weights(losses, mu).values
    loss_gradients = numpy.asarray(loss_gradients, dtype=numpy.float64)
    if loss_gradients.ndim != 2 or loss_gradients.shape[0] != w.size:
        raise ValueError('Expected per-sample gradients of shape ({}, P) but got {}.'.format(
            w.size, loss_gradients.shape))
    return -numpy.dot(w, loss_gradients)

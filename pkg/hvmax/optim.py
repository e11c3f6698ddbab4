"""Mini-batch gradient descent for the mean loss and the hypervolume objectives."""

import numpy
from numpy import ndarray
from typing import NamedTuple

from hvmax import data
from hvmax.exceptions import UnpairedRunsError
from hvmax import logging
from hvmax import net
from hvmax.net import AutoencoderParams
from hvmax.net import Batch
from hvmax.objectives import create_objective
from hvmax.scalarize import epsilon_at
from hvmax import structs
from hvmax.structs import EpochMetrics
from hvmax.structs import Objective
from hvmax.structs import RunRecord
from hvmax import type_checking

if type_checking.TYPE_CHECKING:
    from typing import List  # NOQA
    from typing import Optional  # NOQA
    from typing import Tuple  # NOQA

    from hvmax.data import Dataset  # NOQA
    from hvmax.objectives import BaseObjective  # NOQA
    from hvmax.structs import TrainConfig  # NOQA

logger = logging.get_logger(__name__)

# Seed stream tags. Both members of a pair derive the same streams.
_NOISE_STREAM = 1
_SHUFFLE_STREAM = 2


class EpochData(NamedTuple('_EpochData', [('corrupted', ndarray), ('order', ndarray)])):
    """Corrupted training inputs and mini-batch order of an epoch.

    Attributes:
        corrupted:
            Salt-and-pepper corrupted copy of the training split.
        order:
            Permutation of the training samples; consecutive chunks form the mini-batches.
    """

    pass


def sgd_step(params, gradient, learning_rate):
    # type: (AutoencoderParams, AutoencoderParams, float) -> AutoencoderParams
    """Take a gradient descent step ``theta - learning_rate * gradient``."""

    if not learning_rate > 0:
        raise ValueError('Learning rate must be positive but got {}.'.format(learning_rate))
    for name, p, g in zip(params._fields, params, gradient):
        if p.shape != g.shape:
            raise ValueError('Gradient of {} has shape {} but the parameter has {}.'.format(
                name, g.shape, p.shape))
    return AutoencoderParams(*(p - learning_rate * g for p, g in zip(params, gradient)))


def evaluate(params, split):
    # type: (AutoencoderParams, ndarray) -> Tuple[float, float]
    """Mean and maximum reconstruction loss of noiseless inputs."""

    losses = net.per_sample_loss(net.forward(params, split), split)
    return float(numpy.mean(losses)), float(numpy.max(losses))


def _evaluate_splits(params, dataset, epoch):
    # type: (AutoencoderParams, Dataset, int) -> EpochMetrics

    values = []  # type: List[float]
    for split in dataset:
        values.extend(evaluate(params, split))
    return EpochMetrics(epoch, *values)


def prepare_epoch(dataset, config, epoch_index):
    # type: (Dataset, TrainConfig, int) -> EpochData
    """Draw the corruption noise and the mini-batch order of an epoch.

    Both are pure functions of the seed, the corruption probability and the epoch index, so
    runs that only differ in their objective see byte-identical batches.
    """

    noise_stream = numpy.random.RandomState([config.seed, _NOISE_STREAM, epoch_index])
    corrupted = data.salt_pepper(dataset.train, config.corruption_p, noise_stream)
    shuffle_stream = numpy.random.RandomState([config.seed, _SHUFFLE_STREAM, epoch_index])
    order = shuffle_stream.permutation(dataset.train.shape[0])
    return EpochData(corrupted, order)


def train_epoch(
        params,  # type: AutoencoderParams
        dataset,  # type: Dataset
        config,  # type: TrainConfig
        epoch_index,  # type: int
        epoch_data=None,  # type: Optional[EpochData]
        objective=None,  # type: Optional[BaseObjective]
):
    # type: (...) -> Tuple[AutoencoderParams, EpochMetrics]
    """Run one pass of mini-batch gradient descent over the training split.

    For every mini-batch the per-sample losses of the corrupted inputs against the clean
    targets are computed at the current parameters, turned into normalized weights by the
    objective, and a step is taken along the weighted gradient. The slack of the hypervolume
    objective is the one of ``epoch_index`` for the whole epoch.

    Args:
        params:
            Parameters at the start of the epoch.
        dataset:
            Dataset to train and evaluate on.
        config:
            :class:`~hvmax.structs.TrainConfig` of the run.
        epoch_index:
            Zero-based index of the epoch.
        epoch_data:
            Corrupted inputs and batch order. Drawn with :func:`prepare_epoch` if omitted.
        objective:
            Objective to follow. Created from ``config`` if omitted.

    Returns:
        The updated parameters and the noiseless metrics of all splits after the epoch,
        labeled ``epoch_index + 1``.
    """

    n_train = dataset.train.shape[0]
    if config.batch_size > n_train:
        raise ValueError('Batch size {} exceeds the {} training samples.'.format(
            config.batch_size, n_train))
    if epoch_data is None:
        epoch_data = prepare_epoch(dataset, config, epoch_index)
    if objective is None:
        objective = create_objective(config)

    objective.start_epoch(params, Batch(dataset.train, epoch_data.corrupted), epoch_index)
    for start in range(0, n_train, config.batch_size):
        indices = epoch_data.order[start:start + config.batch_size]
        batch = Batch(dataset.train[indices], epoch_data.corrupted[indices])
        losses = net.per_sample_loss(net.forward(params, batch.corrupted), batch.clean)
        weights = objective.weights(losses, epoch_index, indices)
        gradient = net.weighted_backward(params, batch, weights)
        params = sgd_step(params, gradient, config.learning_rate)
        last_mu = getattr(objective, 'last_mu', None)
        if last_mu is not None:
            logger.debug('Batch at {}: mu={:.6g}, worst loss {:.6g}.'.format(
                start, last_mu.value, numpy.max(losses)))

    metrics = _evaluate_splits(params, dataset, epoch_index + 1)
    slack = ''
    if config.objective == Objective.HYPERVOLUME:
        slack = ' eps={:.6g}'.format(epsilon_at(config.schedule, epoch_index))
    logger.info('[{}] epoch {}:{} train={:.6f} valid={:.6f} test={:.6f}'.format(
        config.objective.value, epoch_index + 1, slack, metrics.train_mean, metrics.valid_mean,
        metrics.test_mean))
    return params, metrics


def run(config, dataset, objective=None):
    # type: (TrainConfig, Dataset, Optional[BaseObjective]) -> RunRecord
    """Train an autoencoder from scratch and record the metrics of every epoch.

    Args:
        config:
            :class:`~hvmax.structs.TrainConfig` of the run.
        dataset:
            Dataset to train and evaluate on.
        objective:
            Objective to follow. Created from ``config`` if omitted.

    Returns:
        :class:`~hvmax.structs.RunRecord` whose first entry holds the metrics of the
        initial parameters.
    """

    if objective is None:
        objective = create_objective(config)

    params = net.init_params(config.seed, dataset.d, config.hidden_dim)
    metrics = [_evaluate_splits(params, dataset, 0)]
    for epoch_index in range(config.epochs):
        params, epoch_metrics = train_epoch(
            params, dataset, config, epoch_index, objective=objective)
        metrics.append(epoch_metrics)

    record = RunRecord(config.seed, config.objective, config.corruption_p, metrics)
    record._validate()
    return record


def check_pair(config_pair):
    # type: (Tuple[TrainConfig, TrainConfig]) -> None
    """Check that two configs only differ in their objective."""

    first, second = config_pair
    if first._replace(objective=second.objective) != second:
        raise UnpairedRunsError('Paired configs must only differ in the objective but got '
                                '{} and {}.'.format(first, second))


def paired_run(config_pair, dataset):
    # type: (Tuple[TrainConfig, TrainConfig], Dataset) -> Tuple[RunRecord, RunRecord]
    """Train both members of a pair from the same initial parameters and noise.

    Args:
        config_pair:
            Two configs that differ only in the objective, usually the mean loss baseline
            followed by the hypervolume.
        dataset:
            Dataset to train and evaluate on.

    Returns:
        The :class:`~hvmax.structs.RunRecord` of each config, in the same order.
    """

    check_pair(config_pair)
    first, second = config_pair
    return run(first, dataset), run(second, dataset)


def pair_configs(config):
    # type: (TrainConfig) -> Tuple[TrainConfig, TrainConfig]
    """Return the mean loss baseline and the hypervolume variant of a config."""

    return (config._replace(objective=structs.Objective.MEAN_LOSS),
            config._replace(objective=structs.Objective.HYPERVOLUME))

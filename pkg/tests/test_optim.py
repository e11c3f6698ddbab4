import numpy
import pytest
import scipy.special

from hvmax.exceptions import UnpairedRunsError
from hvmax import net
from hvmax.net import AutoencoderParams
from hvmax.objectives import HypervolumeObjective
from hvmax.objectives import MeanLossObjective
from hvmax import optim
from hvmax.structs import NadirSchedule
from hvmax.structs import Objective
from hvmax.structs import TrainConfig
from hvmax.testing.data import create_tiny_dataset
from hvmax.testing.objectives import UniformHypervolumeObjective
from hvmax import type_checking

if type_checking.TYPE_CHECKING:
    from typing import List  # NOQA

    from hvmax.data import Dataset  # NOQA
    from hvmax.scalarize import WeightVector  # NOQA


def _config(**kwargs):
    # type: (...) -> TrainConfig

    defaults = dict(learning_rate=0.1, batch_size=3, epochs=2, seed=7, corruption_p=0.2,
                    hidden_dim=3)
    defaults.update(kwargs)
    return TrainConfig(**defaults)


def _assert_params_equal(a, b, atol=0.0):
    # type: (AutoencoderParams, AutoencoderParams, float) -> None

    for x, y in zip(a, b):
        numpy.testing.assert_allclose(x, y, rtol=0, atol=atol)


class _RecordingObjective(HypervolumeObjective):
    def __init__(self, *args, **kwargs):
        # type: (list, dict) -> None

        super(_RecordingObjective, self).__init__(*args, **kwargs)
        self.history = []  # type: List[WeightVector]
        self.mus = []  # type: List[float]
        self.batch_max = []  # type: List[float]

    def weights(self, losses, epoch, indices=None):
        # type: (numpy.ndarray, int, numpy.ndarray) -> WeightVector

        w = super(_RecordingObjective, self).weights(losses, epoch, indices)
        self.history.append(w)
        self.mus.append(self.last_mu.value)
        self.batch_max.append(float(numpy.max(losses)))
        return w


def test_sgd_step():
    # type: () -> None

    rng = numpy.random.RandomState(0)
    params = net.init_params(0, 6, 4)
    zero = AutoencoderParams(*(numpy.zeros_like(p) for p in params))
    _assert_params_equal(optim.sgd_step(params, zero, 0.5), params)

    _assert_params_equal(optim.sgd_step(params, params, 1.0), zero)

    gradient = AutoencoderParams(*(rng.normal(size=p.shape) for p in params))
    stepped = optim.sgd_step(params, gradient, 0.1)
    for p, g, s in zip(params, gradient, stepped):
        for index in numpy.ndindex(p.shape):
            assert s[index] == p[index] - 0.1 * g[index]


def test_sgd_step_invalid():
    # type: () -> None

    params = net.init_params(0, 6, 4)
    other = net.init_params(0, 5, 4)
    with pytest.raises(ValueError):
        optim.sgd_step(params, other, 0.1)
    with pytest.raises(ValueError):
        optim.sgd_step(params, params, 0.0)


def test_evaluate():
    # type: () -> None

    rng = numpy.random.RandomState(1)
    params = net.init_params(1, 4, 3)
    split = rng.uniform(size=(5, 4))

    mean, worst = optim.evaluate(params, split[:1])
    assert mean == worst

    mean, worst = optim.evaluate(params, split)
    doubled = optim.evaluate(params, numpy.vstack([split, split]))
    assert doubled[0] == pytest.approx(mean, rel=1e-15)
    assert doubled[1] == worst

    losses = []
    for row in split:
        hidden = scipy.special.expit(params.enc_weights.dot(row) + params.enc_bias)
        output = scipy.special.expit(params.dec_weights.dot(hidden) + params.dec_bias)
        losses.append(-numpy.sum(row * numpy.log(output) + (1 - row) * numpy.log(1 - output)))
    assert mean == pytest.approx(numpy.mean(losses), rel=1e-12)
    assert worst == pytest.approx(numpy.max(losses), rel=1e-12)


def test_prepare_epoch_is_pure():
    # type: () -> None

    dataset = create_tiny_dataset()
    config = _config()
    first = optim.prepare_epoch(dataset, config, 0)
    second = optim.prepare_epoch(dataset, config._replace(objective=Objective.HYPERVOLUME), 0)
    assert first.corrupted.tobytes() == second.corrupted.tobytes()
    numpy.testing.assert_array_equal(first.order, second.order)
    assert sorted(first.order) == list(range(10))

    later = optim.prepare_epoch(dataset, config, 1)
    assert later.corrupted.tobytes() != first.corrupted.tobytes()


def _reference_epoch(params, dataset, config, epoch_index):
    # type: (AutoencoderParams, Dataset, TrainConfig, int) -> AutoencoderParams

    epoch_data = optim.prepare_epoch(dataset, config, epoch_index)
    w1, b1, w2, b2 = (numpy.array(p) for p in params)
    n = dataset.train.shape[0]
    for start in range(0, n, config.batch_size):
        indices = epoch_data.order[start:start + config.batch_size]
        grads = [numpy.zeros_like(w1), numpy.zeros_like(b1), numpy.zeros_like(w2),
                 numpy.zeros_like(b2)]
        for i in indices:
            x = epoch_data.corrupted[i]
            t = dataset.train[i]
            h = 1.0 / (1.0 + numpy.exp(-(w1.dot(x) + b1)))
            y = 1.0 / (1.0 + numpy.exp(-(w2.dot(h) + b2)))
            d_out = (y - t) / len(indices)
            d_hid = w2.T.dot(d_out) * h * (1 - h)
            grads[0] += numpy.outer(d_hid, x)
            grads[1] += d_hid
            grads[2] += numpy.outer(d_out, h)
            grads[3] += d_out
        w1 = w1 - config.learning_rate * grads[0]
        b1 = b1 - config.learning_rate * grads[1]
        w2 = w2 - config.learning_rate * grads[2]
        b2 = b2 - config.learning_rate * grads[3]
    return AutoencoderParams(w1, b1, w2, b2)


def test_train_epoch_matches_reference_loop():
    # type: () -> None

    dataset = create_tiny_dataset()
    config = _config()
    params = net.init_params(config.seed, dataset.d, config.hidden_dim)

    trained, metrics = optim.train_epoch(params, dataset, config, 0)
    _assert_params_equal(trained, _reference_epoch(params, dataset, config, 0), atol=1e-12)
    assert metrics.epoch == 1
    for split in ('train', 'valid', 'test'):
        assert metrics.get(split, 'max') >= metrics.get(split, 'mean')


def test_train_epoch_determinism():
    # type: () -> None

    dataset = create_tiny_dataset()
    config = _config(objective=Objective.HYPERVOLUME)
    params = net.init_params(config.seed, dataset.d, config.hidden_dim)

    first = optim.train_epoch(params, dataset, config, 0)
    second = optim.train_epoch(params, dataset, config, 0)
    _assert_params_equal(first[0], second[0])
    assert first[1] == second[1]


def test_train_epoch_batch_larger_than_dataset():
    # type: () -> None

    dataset = create_tiny_dataset()
    config = _config(batch_size=11)
    params = net.init_params(0, dataset.d, config.hidden_dim)
    with pytest.raises(ValueError):
        optim.train_epoch(params, dataset, config, 0)


def test_hypervolume_steps_use_normalized_weights_above_batch_max():
    # type: () -> None

    dataset = create_tiny_dataset()
    config = _config(objective=Objective.HYPERVOLUME, epochs=3,
                     schedule=NadirSchedule(0.5, 0.25))
    objective = _RecordingObjective(config.schedule)
    optim.run(config, dataset, objective=objective)

    assert len(objective.history) == 3 * 4
    for w, mu, worst in zip(objective.history, objective.mus, objective.batch_max):
        assert w.normalized
        assert abs(numpy.sum(w.values) - 1.0) <= 1e-12
        assert mu > worst

    # The slack stays constant within an epoch and grows between epochs.
    slacks = numpy.subtract(objective.mus, objective.batch_max).reshape(3, 4)
    numpy.testing.assert_allclose(slacks, [[0.5] * 4, [0.75] * 4, [1.0] * 4], atol=1e-12)


def test_dataset_scope_places_mu_above_all_training_losses():
    # type: () -> None

    dataset = create_tiny_dataset()
    config = _config(objective=Objective.HYPERVOLUME, mu_scope='dataset')
    objective = _RecordingObjective(config.schedule, mu_scope='dataset')
    optim.run(config, dataset, objective=objective)

    for mu, worst in zip(objective.mus, objective.batch_max):
        assert mu >= worst + 1.0

    # The first step still sees the initial parameters, so its Nadir value sits above the
    # worst loss of the whole corrupted training split.
    params = net.init_params(config.seed, dataset.d, config.hidden_dim)
    corrupted = optim.prepare_epoch(dataset, config, 0).corrupted
    losses = net.per_sample_loss(net.forward(params, corrupted), dataset.train)
    assert objective.mus[0] == pytest.approx(numpy.max(losses) + 1.0, rel=1e-12)


def test_huge_slack_tracks_mean_loss():
    # type: () -> None

    dataset = create_tiny_dataset()
    baseline = _config(objective=Objective.MEAN_LOSS)
    hypervolume = baseline._replace(objective=Objective.HYPERVOLUME,
                                    schedule=NadirSchedule(1e12, 0.0))
    params = net.init_params(baseline.seed, dataset.d, baseline.hidden_dim)

    mean_params, hv_params = params, params
    for epoch_index in range(2):
        mean_params, _ = optim.train_epoch(mean_params, dataset, baseline, epoch_index)
        hv_params, _ = optim.train_epoch(hv_params, dataset, hypervolume, epoch_index)
        _assert_params_equal(mean_params, hv_params, atol=1e-6)


def test_uniform_weights_equivalence():
    # type: () -> None

    dataset = create_tiny_dataset()
    config = _config()
    mean_record = optim.run(config, dataset, objective=MeanLossObjective())
    uniform_record = optim.run(config._replace(objective=Objective.HYPERVOLUME), dataset,
                               objective=UniformHypervolumeObjective(config.schedule))
    assert mean_record.metrics == uniform_record.metrics


def test_run():
    # type: () -> None

    dataset = create_tiny_dataset()
    config = _config(epochs=3)
    record = optim.run(config, dataset)

    assert record.seed == config.seed
    assert record.objective == Objective.MEAN_LOSS
    assert record.corruption_p == config.corruption_p
    assert record.epochs == [0, 1, 2, 3]
    assert record == optim.run(config, dataset)


def test_paired_run():
    # type: () -> None

    dataset = create_tiny_dataset()
    baseline, hypervolume = optim.paired_run(optim.pair_configs(_config(epochs=3)), dataset)

    assert baseline.objective == Objective.MEAN_LOSS
    assert hypervolume.objective == Objective.HYPERVOLUME
    assert baseline.metrics[0] == hypervolume.metrics[0]
    assert baseline.epochs == hypervolume.epochs
    for split in ('train', 'valid', 'test'):
        differences = numpy.subtract(baseline.series(split, 'mean'),
                                     hypervolume.series(split, 'mean'))
        assert differences.shape == (4, )
        assert numpy.all(numpy.isfinite(differences))


def test_paired_run_rejects_mismatched_configs():
    # type: () -> None

    dataset = create_tiny_dataset()
    config = _config()
    with pytest.raises(UnpairedRunsError):
        optim.paired_run((config, config._replace(seed=8)), dataset)
    with pytest.raises(UnpairedRunsError):
        optim.check_pair((config, config._replace(learning_rate=0.2)))

    optim.check_pair(optim.pair_configs(config))


@pytest.mark.parametrize('kwargs', [
    {'learning_rate': 0.0},
    {'batch_size': 0},
    {'epochs': 0},
    {'corruption_p': 1.5},
    {'hidden_dim': 0},
    {'seed': -1},
    {'mu_scope': 'epoch'},
])
def test_train_config_invalid(kwargs):
    # type: (dict) -> None

    with pytest.raises(ValueError):
        _config(**kwargs)

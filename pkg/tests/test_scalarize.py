import math

import numpy
import pytest

from hvmax.exceptions import DominanceViolation
from hvmax.exceptions import NonPositiveSlack
from hvmax import scalarize
from hvmax.scalarize import Mu
from hvmax.scalarize import WeightVector
from hvmax.structs import NadirSchedule

# Per-sample cross-entropies of two classifiers on the same two samples, where the first one
# is very confident on one sample and the second one is fairly confident on both.
CONFIDENT_LOSSES = [-math.log(0.99), -math.log(0.49)]
BALANCED_LOSSES = [-math.log(0.90), -math.log(0.53)]


def test_linear_scalarize():
    # type: () -> None

    assert scalarize.linear_scalarize([1.0, 3.0], [0.5, 0.5]) == 2.0
    assert scalarize.linear_scalarize([0.0, 0.0], [0.3, 0.1]) == 0.0
    assert scalarize.linear_scalarize([2.0], [1.0]) == 2.0


@pytest.mark.parametrize('losses,weights', [
    ([1.0, 2.0], [1.0]),
    ([1.0, float('nan')], [0.5, 0.5]),
    ([1.0, float('inf')], [0.5, 0.5]),
    ([1.0, 2.0], [-0.5, 1.5]),
    ([1.0, 2.0], [0.0, 0.0]),
    ([], []),
])
def test_linear_scalarize_invalid(losses, weights):
    # type: (list, list) -> None

    with pytest.raises(ValueError):
        scalarize.linear_scalarize(losses, weights)


def test_log_hypervolume():
    # type: () -> None

    assert scalarize.log_hypervolume([1.0, 1.0], [2.0, 3.0]) == pytest.approx(math.log(2.0))
    assert scalarize.log_hypervolume([0.0], [1.0]) == 0.0
    assert scalarize.log_hypervolume([0.5, 1.5], [2.0, 2.0]) == pytest.approx(
        -0.287682, abs=1e-6)


@pytest.mark.parametrize('objectives,nadir', [
    ([1.0, 1.0], [1.0, 3.0]),
    ([1.0, 1.0], [2.0, 0.5]),
    ([0.0], [-1.0]),
])
def test_log_hypervolume_dominance_violation(objectives, nadir):
    # type: (list, list) -> None

    with pytest.raises(DominanceViolation):
        scalarize.log_hypervolume(objectives, nadir)


def test_log_hypervolume_length_mismatch():
    # type: () -> None

    with pytest.raises(ValueError):
        scalarize.log_hypervolume([1.0, 1.0], [2.0])


def test_log_hypervolume_mu():
    # type: () -> None

    assert scalarize.log_hypervolume_mu([0.5, 1.5], 2.0) == pytest.approx(-0.287682, abs=1e-6)
    assert scalarize.log_hypervolume_mu([0.5, 1.5], Mu(2.0)) == pytest.approx(
        -0.287682, abs=1e-6)
    assert scalarize.log_hypervolume_mu([0.0, 0.0], Mu(1.0)) == 0.0

    with pytest.raises(DominanceViolation):
        scalarize.log_hypervolume_mu([0.5, 1.5], Mu(1.5))


def test_log_hypervolume_mu_equals_shared_nadir():
    # type: () -> None

    rng = numpy.random.RandomState(0)
    for _ in range(100):
        losses = rng.uniform(0.0, 10.0, size=rng.randint(1, 20))
        mu = float(losses.max()) + rng.uniform(0.01, 5.0)
        expected = scalarize.log_hypervolume(losses, [mu] * len(losses))
        assert scalarize.log_hypervolume_mu(losses, Mu(mu)) == expected


def test_mean_loss_and_hypervolume_disagree_on_preference():
    # type: () -> None

    mean_confident = scalarize.linear_scalarize(CONFIDENT_LOSSES, [0.5, 0.5])
    mean_balanced = scalarize.linear_scalarize(BALANCED_LOSSES, [0.5, 0.5])
    assert mean_confident == pytest.approx(0.361700, abs=1e-6)
    assert mean_balanced == pytest.approx(0.370120, abs=1e-6)
    assert mean_confident < mean_balanced

    hv_confident = scalarize.log_hypervolume_mu(CONFIDENT_LOSSES, Mu(1.0))
    hv_balanced = scalarize.log_hypervolume_mu(BALANCED_LOSSES, Mu(1.0))
    assert hv_confident == pytest.approx(-1.259594, abs=1e-6)
    assert hv_balanced == pytest.approx(-1.118859, abs=1e-6)
    assert hv_balanced > hv_confident


def test_hv_weights():
    # type: () -> None

    w = scalarize.hv_weights([0.5, 1.5], Mu(2.0))
    assert not w.normalized
    numpy.testing.assert_allclose(w.values, [2.0 / 3.0, 2.0], rtol=1e-15)

    w = scalarize.hv_weights([0.7, 0.7, 0.7], Mu(3.0))
    assert w.values[0] == w.values[1] == w.values[2]

    with pytest.raises(DominanceViolation):
        scalarize.hv_weights([0.5, 1.5], Mu(1.0))


def test_hv_weights_order_consistency():
    # type: () -> None

    rng = numpy.random.RandomState(1)
    for _ in range(10000):
        losses = rng.uniform(0.0, 1.0, size=10)
        w = scalarize.hv_weights(losses, Mu(float(losses.max()) + 1.0))
        assert numpy.all(w.values > 0)
        numpy.testing.assert_array_equal(numpy.argsort(w.values), numpy.argsort(losses))


def test_hv_weights_ties():
    # type: () -> None

    w = scalarize.hv_weights([1.0, 2.0, 1.0, 2.0], Mu(2.5))
    assert w.values[0] == w.values[2]
    assert w.values[1] == w.values[3]
    assert w.values[1] > w.values[0]


def test_hv_weights_nadir():
    # type: () -> None

    w = scalarize.hv_weights_nadir([1.0, 1.0], [2.0, 5.0])
    numpy.testing.assert_allclose(w.values, [1.0, 0.25])

    with pytest.raises(DominanceViolation):
        scalarize.hv_weights_nadir([1.0, 1.0], [2.0, 1.0])


def test_normalize_weights():
    # type: () -> None

    w = scalarize.normalize_weights(WeightVector(numpy.array([2.0 / 3.0, 2.0]), False))
    assert w.normalized
    numpy.testing.assert_allclose(w.values, [0.25, 0.75], rtol=1e-15)

    w = scalarize.normalize_weights(WeightVector(numpy.array([5.0]), False))
    numpy.testing.assert_array_equal(w.values, [1.0])

    rng = numpy.random.RandomState(2)
    for _ in range(100):
        raw = rng.uniform(1e-3, 1e3, size=rng.randint(1, 50))
        w = scalarize.normalize_weights(WeightVector(raw, False))
        assert abs(numpy.sum(w.values) - 1.0) <= 1e-12
        numpy.testing.assert_array_equal(numpy.argsort(w.values), numpy.argsort(raw))


@pytest.mark.parametrize('values', [[], [1.0, 0.0], [1.0, -1.0]])
def test_normalize_weights_invalid(values):
    # type: (list) -> None

    with pytest.raises(ValueError):
        scalarize.normalize_weights(WeightVector(numpy.array(values), False))


def test_epsilon_at():
    # type: () -> None

    assert scalarize.epsilon_at(NadirSchedule(1.0, 1.0), 0) == 1.0
    assert scalarize.epsilon_at(NadirSchedule(1.0, 1.0), 3) == 4.0
    assert scalarize.epsilon_at(NadirSchedule(0.5, 0.0), 100) == 0.5

    schedule = NadirSchedule(0.2, 0.3)
    values = [scalarize.epsilon_at(schedule, t) for t in range(20)]
    assert all(a <= b for a, b in zip(values, values[1:]))

    with pytest.raises(ValueError):
        scalarize.epsilon_at(schedule, -1)


@pytest.mark.parametrize('epsilon0,kappa', [(-1.0, 1.0), (1.0, -0.1), (float('nan'), 1.0)])
def test_nadir_schedule_invalid(epsilon0, kappa):
    # type: (float, float) -> None

    with pytest.raises(ValueError):
        NadirSchedule(epsilon0, kappa)


def test_mu_for_batch():
    # type: () -> None

    assert scalarize.mu_for_batch([0.5, 1.5], 1.0) == Mu(2.5)
    assert scalarize.mu_for_batch([7.0], 0.1).value == pytest.approx(7.1)

    rng = numpy.random.RandomState(3)
    losses = rng.uniform(0.0, 100.0, size=500)
    mu = scalarize.mu_for_batch(losses, 1e-3)
    assert mu.value > losses.max()
    w = scalarize.hv_weights(losses, mu).values
    assert numpy.all(numpy.isfinite(w))
    assert numpy.all(w > 0)


@pytest.mark.parametrize('epsilon', [0.0, -1.0])
def test_mu_for_batch_non_positive_slack(epsilon):
    # type: (float) -> None

    with pytest.raises(NonPositiveSlack):
        scalarize.mu_for_batch([0.5, 1.5], epsilon)


def test_mu_for_batch_slack_lost_to_rounding():
    # type: () -> None

    with pytest.raises(NonPositiveSlack):
        scalarize.mu_for_batch([1e20], 1e-3)


def test_weights_approach_uniform_for_large_mu():
    # type: () -> None

    rng = numpy.random.RandomState(4)
    for _ in range(100):
        losses = rng.uniform(0.0, 10.0, size=rng.randint(2, 100))
        spread = losses.max() - losses.min()
        mu = Mu(losses.max() + 1e6 * spread)
        w = scalarize.normalize_weights(scalarize.hv_weights(losses, mu))
        assert numpy.max(numpy.abs(w.values - 1.0 / len(losses))) < 1e-6


def test_worst_sample_dominates_for_small_slack():
    # type: () -> None

    losses = numpy.linspace(0.0, 1.0, 10)
    epsilon = 1e-4 * (losses.max() - losses.min())
    w = scalarize.normalize_weights(
        scalarize.hv_weights(losses, scalarize.mu_for_batch(losses, epsilon)))
    assert w.values[-1] > 0.99

    rng = numpy.random.RandomState(5)
    for _ in range(100):
        losses = numpy.sort(rng.uniform(0.0, 1.0, size=10))
        losses[-1] = losses[-2] + 0.2
        epsilon = 1e-4 * (losses.max() - losses.min())
        w = scalarize.normalize_weights(
            scalarize.hv_weights(losses, scalarize.mu_for_batch(losses, epsilon)))
        assert w.values[-1] > 0.99


def test_log_hypervolume_midpoint_concavity():
    # type: () -> None

    rng = numpy.random.RandomState(6)
    centers = rng.uniform(-1.0, 1.0, size=5)
    mu = Mu(5.0)

    def log_hv(x):
        # type: (float) -> float

        return scalarize.log_hypervolume_mu((x - centers) ** 2, mu)

    for _ in range(1000):
        a, b = rng.uniform(-1.0, 1.0, size=2)
        assert log_hv(0.5 * (a + b)) >= 0.5 * (log_hv(a) + log_hv(b)) - 1e-12


def test_log_hypervolume_gradient_matches_finite_differences():
    # type: () -> None

    rng = numpy.random.RandomState(7)
    step = 1e-6
    for _ in range(20):
        centers = rng.uniform(-1.0, 1.0, size=6)
        theta = rng.uniform(-1.0, 1.0)
        losses = (theta - centers) ** 2
        mu = scalarize.mu_for_batch(losses, 1.0)

        analytic = scalarize.log_hypervolume_gradient(
            losses, (2.0 * (theta - centers))[:, None], mu)
        numeric = (scalarize.log_hypervolume_mu((theta + step - centers) ** 2, mu) -
                   scalarize.log_hypervolume_mu((theta - step - centers) ** 2, mu)) / (2 * step)
        assert analytic.shape == (1, )
        assert analytic[0] == pytest.approx(numeric, rel=1e-6, abs=1e-9)


def test_log_hypervolume_gradient_invalid_shape():
    # type: () -> None

    with pytest.raises(ValueError):
        scalarize.log_hypervolume_gradient([0.1, 0.2], numpy.zeros((3, 4)), Mu(1.0))

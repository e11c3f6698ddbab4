import numpy
import pytest

import hvmax
from hvmax.structs import Objective
from hvmax.testing.data import create_tiny_dataset


def test_fixed_weight_objective():
    # type: () -> None

    objective = hvmax.objectives.FixedWeightObjective([1.0, 2.0, 3.0, 4.0])
    w = objective.weights(numpy.zeros(2), epoch=0, indices=numpy.array([3, 0]))
    assert w.normalized
    numpy.testing.assert_allclose(w.values, [0.8, 0.2], rtol=1e-15)


def test_fixed_weight_objective_needs_indices():
    # type: () -> None

    objective = hvmax.objectives.FixedWeightObjective([1.0, 2.0])
    with pytest.raises(ValueError):
        objective.weights(numpy.zeros(2), epoch=0)
    with pytest.raises(ValueError):
        objective.weights(numpy.zeros(2), epoch=0, indices=numpy.array([0]))


@pytest.mark.parametrize('importances', [[1.0, 0.0], [-1.0, 2.0], [[1.0], [2.0]]])
def test_fixed_weight_objective_invalid(importances):
    # type: (list) -> None

    with pytest.raises(ValueError):
        hvmax.objectives.FixedWeightObjective(importances)


def test_equal_importances_follow_mean_loss():
    # type: () -> None

    dataset = create_tiny_dataset()
    config = hvmax.TrainConfig(batch_size=5, epochs=2, hidden_dim=3, corruption_p=0.1)
    fixed = hvmax.objectives.FixedWeightObjective(numpy.full(dataset.sizes[0], 7.0))
    assert fixed.objective == Objective.MEAN_LOSS

    baseline = hvmax.run(config, dataset)
    weighted = hvmax.run(config, dataset, objective=fixed)
    for a, b in zip(baseline.metrics, weighted.metrics):
        numpy.testing.assert_allclose(a, b, rtol=1e-12)

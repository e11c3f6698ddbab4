import numpy

from hvmax.objectives.base import BaseObjective
from hvmax.scalarize import normalize_weights
from hvmax.scalarize import WeightVector
from hvmax.structs import Objective
from hvmax import type_checking

if type_checking.TYPE_CHECKING:
    from numpy import ndarray  # NOQA
    from typing import Optional  # NOQA
    from typing import Sequence  # NOQA


class FixedWeightObjective(BaseObjective):
    """Objective minimizing a weighted mean loss with importances chosen a priori.

    Example:

        .. code::

            >>> from hvmax.objectives import FixedWeightObjective
            >>>
            >>> importances = numpy.ones(len(dataset.train))
            >>> importances[hard_samples] = 5.0
            >>> run(config, dataset, objective=FixedWeightObjective(importances))

    Args:
        importances:
            Positive importance of every sample of the training split. The importances of a
            mini-batch are normalized to sum to one.
    """

    objective = Objective.MEAN_LOSS

    def __init__(self, importances):
        # type: (Sequence[float]) -> None

        importances = numpy.asarray(importances, dtype=numpy.float64)
        if importances.ndim != 1 or not numpy.all(importances > 0):
            raise ValueError('Importances must be a vector of positive values.')
        self.importances = importances

    def weights(self, losses, epoch, indices=None):
        # type: (ndarray, int, Optional[ndarray]) -> WeightVector
        """Please consult the documentation for :func:`BaseObjective.weights`."""

        if indices is None:
            raise ValueError('Fixed importances need the sample indices of the batch.')
        if len(indices) != len(losses):
            raise ValueError('Got {} losses but {} indices.'.format(len(losses), len(indices)))
        return normalize_weights(WeightVector(self.importances[indices], False))

import numpy

from hvmax.objectives.base import BaseObjective
from hvmax.scalarize import WeightVector
from hvmax.structs import Objective
from hvmax import type_checking

if type_checking.TYPE_CHECKING:
    from numpy import ndarray  # NOQA
    from typing import Optional  # NOQA


class MeanLossObjective(BaseObjective):
    """Objective minimizing the uniform mean loss.

    Every sample of a mini-batch gets the weight ``1 / B``.
    """

    objective = Objective.MEAN_LOSS

    def weights(self, losses, epoch, indices=None):
        # type: (ndarray, int, Optional[ndarray]) -> WeightVector
        """Please consult the documentation for :func:`BaseObjective.weights`."""

        n = len(losses)
        return WeightVector(numpy.full(n, 1.0 / n), True)

from hvmax.objectives.base import BaseObjective  # NOQA
from hvmax.objectives.fixed import FixedWeightObjective  # NOQA
from hvmax.objectives.hypervolume import HypervolumeObjective  # NOQA
from hvmax.objectives.mean import MeanLossObjective  # NOQA
from hvmax.structs import Objective
from hvmax import type_checking

if type_checking.TYPE_CHECKING:
    from hvmax.structs import TrainConfig  # NOQA


def create_objective(config):
    # type: (TrainConfig) -> BaseObjective
    """Create a fresh objective for a run.

    Objectives may keep per-epoch state, so every run needs its own instance.
    """

    if config.objective == Objective.HYPERVOLUME:
        return HypervolumeObjective(config.schedule, mu_scope=config.mu_scope)
    if config.objective == Objective.MEAN_LOSS:
        return MeanLossObjective()
    raise ValueError('Unknown objective {!r}.'.format(config.objective))

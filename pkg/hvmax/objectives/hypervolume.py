import numpy

from hvmax import logging
from hvmax import net
from hvmax.objectives.base import BaseObjective
from hvmax.scalarize import epsilon_at
from hvmax.scalarize import hv_weights
from hvmax.scalarize import mu_for_batch
from hvmax.scalarize import Mu
from hvmax.scalarize import normalize_weights
from hvmax.structs import NadirSchedule
from hvmax.structs import Objective
from hvmax import type_checking

if type_checking.TYPE_CHECKING:
    from numpy import ndarray  # NOQA
    from typing import Optional  # NOQA

    from hvmax.net import AutoencoderParams  # NOQA
    from hvmax.net import Batch  # NOQA
    from hvmax.scalarize import WeightVector  # NOQA

logger = logging.get_logger(__name__)

_NORMALIZATION_TOL = 1e-12


class HypervolumeObjective(BaseObjective):
    """Objective maximizing the log-hypervolume of the per-sample losses.

    The Nadir value of a step is ``max_i l_i + epsilon_t``, where the maximum is taken over the
    losses at the current parameters and ``epsilon_t`` comes from the
    :class:`~hvmax.structs.NadirSchedule`. Samples with larger losses receive larger weights;
    a small slack makes the step focus on the worst samples, a large slack makes it approach
    the uniform mean loss.

    Example:

        .. code::

            >>> from hvmax.objectives import HypervolumeObjective
            >>> from hvmax.structs import NadirSchedule
            >>>
            >>> objective = HypervolumeObjective(NadirSchedule(epsilon0=1.0, kappa=1.0))
            >>> run(config, dataset, objective=objective)

    Args:
        schedule:
            Slack schedule.
        mu_scope:
            ``'batch'`` to take the worst loss of the mini-batch only. ``'dataset'`` to also
            consider the worst loss over the whole corrupted training split, evaluated once at
            the start of each epoch.
    """

    objective = Objective.HYPERVOLUME

    def __init__(self, schedule=NadirSchedule(), mu_scope='batch'):
        # type: (NadirSchedule, str) -> None

        if mu_scope not in ('batch', 'dataset'):
            raise ValueError(
                "Nadir scope must be 'batch' or 'dataset' but got {!r}.".format(mu_scope))

        self.schedule = schedule
        self.mu_scope = mu_scope
        self.last_mu = None  # type: Optional[Mu]
        self._epoch_worst = None  # type: Optional[float]

    def start_epoch(self, params, batch, epoch):
        # type: (AutoencoderParams, Batch, int) -> None
        """Please consult the documentation for :func:`BaseObjective.start_epoch`."""

        if self.mu_scope != 'dataset':
            return
        losses = net.per_sample_loss(net.forward(params, batch.corrupted), batch.clean)
        self._epoch_worst = float(numpy.max(losses))
        logger.debug('Epoch {}: worst training loss {:.6g}.'.format(epoch, self._epoch_worst))

    def weights(self, losses, epoch, indices=None):
        # type: (ndarray, int, Optional[ndarray]) -> WeightVector
        """Please consult the documentation for :func:`BaseObjective.weights`."""

        epsilon = epsilon_at(self.schedule, epoch)
        mu = mu_for_batch(losses, epsilon)
        if self._epoch_worst is not None:
            mu = Mu(max(mu.value, self._epoch_worst + epsilon))
        assert mu.value > numpy.max(losses)
        self.last_mu = mu

        w = normalize_weights(self._raw_weights(losses, mu))
        assert abs(numpy.sum(w.values) - 1.0) <= _NORMALIZATION_TOL
        return w

    def _raw_weights(self, losses, mu):
        # type: (ndarray, Mu) -> WeightVector

        return hv_weights(losses, mu)

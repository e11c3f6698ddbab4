import abc
import six

from hvmax.type_checking import TYPE_CHECKING

if TYPE_CHECKING:
    from numpy import ndarray  # NOQA
    from typing import Optional  # NOQA

    from hvmax.net import AutoencoderParams  # NOQA
    from hvmax.net import Batch  # NOQA
    from hvmax.scalarize import WeightVector  # NOQA
    from hvmax.structs import Objective  # NOQA


@six.add_metaclass(abc.ABCMeta)
class BaseObjective(object):
    """Base class for training objectives.

    An objective turns the per-sample losses of a mini-batch into the normalized weights of
    the step. Every objective is thus followed with the same gradient descent, only the
    weighting of the per-sample gradients differs.
    """

    objective = None  # type: Optional[Objective]

    def start_epoch(self, params, batch, epoch):
        # type: (AutoencoderParams, Batch, int) -> None
        """Prepare an epoch before its first step.

        Args:
            params:
                Parameters at the start of the epoch.
            batch:
                The whole training split of the epoch, clean and corrupted.
            epoch:
                Zero-based epoch index.
        """

        pass

    @abc.abstractmethod
    def weights(self, losses, epoch, indices=None):
        # type: (ndarray, int, Optional[ndarray]) -> WeightVector
        """Compute the weights of a step.

        Note that this method is not supposed to be called by library users. It is called by
        :func:`~hvmax.optim.train_epoch` once per mini-batch, with the losses at the current
        parameters, and the weights are held fixed during the step.

        Args:
            losses:
                Per-sample losses of the mini-batch.
            epoch:
                Zero-based epoch index.
            indices:
                Positions of the mini-batch samples in the training split.

        Returns:
            Normalized :class:`~hvmax.scalarize.WeightVector`.
        """

        raise NotImplementedError

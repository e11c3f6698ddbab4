import enum
import math

from typing import List
from typing import NamedTuple

from hvmax import type_checking

if type_checking.TYPE_CHECKING:
    from typing import Any  # NOQA
    from typing import Dict  # NOQA


SPLITS = ('train', 'valid', 'test')
METRICS = ('mean', 'max')


class Objective(enum.Enum):
    """Training objective of a run.

    Attributes:
        MEAN_LOSS:
            Minimize the uniform mean of the per-sample losses.
        HYPERVOLUME:
            Maximize the logarithm of the single-solution hypervolume of the per-sample losses.
    """

    MEAN_LOSS = 'mean'
    HYPERVOLUME = 'hypervolume'

    def __repr__(self):
        # type: () -> str

        return str(self)

    @classmethod
    def from_name(cls, name):
        # type: (str) -> Objective

        for member in cls:
            if member.value == name:
                return member
        raise ValueError('Unknown objective {!r}. Expected one of {}.'.format(
            name, ', '.join(m.value for m in cls)))


class NadirSchedule(
        NamedTuple('_NadirSchedule', [('epsilon0', float), ('kappa', float)])):
    """Slack added on top of the worst loss to place the shared Nadir value.

    The slack at epoch ``t`` is ``epsilon0 + kappa * t``. It is constant within an epoch and
    only grows once the epoch has been completed, so that the objective drifts towards the
    uniform mean loss as training progresses.

    Attributes:
        epsilon0:
            Initial slack, in loss units.
        kappa:
            Slack growth per epoch.
    """

    def __new__(cls, epsilon0=1.0, kappa=1.0):
        # type: (float, float) -> NadirSchedule

        if not (epsilon0 >= 0 and math.isfinite(epsilon0)):
            raise ValueError(
                'Initial slack must be finite and non-negative but got {}.'.format(epsilon0))
        if not (kappa >= 0 and math.isfinite(kappa)):
            raise ValueError(
                'Slack growth must be finite and non-negative but got {}.'.format(kappa))
        return super(NadirSchedule, cls).__new__(cls, float(epsilon0), float(kappa))


class TrainConfig(
        NamedTuple('_TrainConfig', [
            ('objective', Objective),
            ('learning_rate', float),
            ('batch_size', int),
            ('epochs', int),
            ('schedule', NadirSchedule),
            ('seed', int),
            ('corruption_p', float),
            ('hidden_dim', int),
            ('mu_scope', str),
        ])):
    """Hyperparameters of a single training run.

    Two configs that only differ in :attr:`objective` describe a paired run: they start from
    the same parameters and see the same noise and the same mini-batch order.

    Attributes:
        objective:
            :class:`Objective` to optimize.
        learning_rate:
            Step size of gradient descent.
        batch_size:
            Number of samples per mini-batch.
        epochs:
            Number of passes over the training split.
        schedule:
            :class:`NadirSchedule` used by the hypervolume objective.
        seed:
            Seed of the parameter initialization, the corruption noise and the shuffling.
        corruption_p:
            Probability of salt-and-pepper corruption of each training pixel.
        hidden_dim:
            Number of hidden units of the autoencoder.
        mu_scope:
            ``'batch'`` to take the worst loss over each mini-batch, ``'dataset'`` to also
            include the worst loss over the whole corrupted training split of the epoch.
    """

    def __new__(
            cls,
            objective=Objective.MEAN_LOSS,  # type: Objective
            learning_rate=0.1,  # type: float
            batch_size=500,  # type: int
            epochs=100,  # type: int
            schedule=NadirSchedule(),  # type: NadirSchedule
            seed=0,  # type: int
            corruption_p=0.0,  # type: float
            hidden_dim=500,  # type: int
            mu_scope='batch',  # type: str
    ):
        # type: (...) -> TrainConfig

        if not learning_rate > 0:
            raise ValueError('Learning rate must be positive but got {}.'.format(learning_rate))
        if batch_size < 1:
            raise ValueError('Batch size must be at least 1 but got {}.'.format(batch_size))
        if epochs < 1:
            raise ValueError('Number of epochs must be at least 1 but got {}.'.format(epochs))
        if not 0.0 <= corruption_p <= 1.0:
            raise ValueError(
                'Corruption probability must be in [0, 1] but got {}.'.format(corruption_p))
        if hidden_dim < 1:
            raise ValueError('Hidden dimension must be at least 1 but got {}.'.format(hidden_dim))
        if not 0 <= seed < 2 ** 32:
            raise ValueError('Seed must be in [0, 2**32) but got {}.'.format(seed))
        if mu_scope not in ('batch', 'dataset'):
            raise ValueError(
                "Nadir scope must be 'batch' or 'dataset' but got {!r}.".format(mu_scope))
        return super(TrainConfig, cls).__new__(
            cls, objective, float(learning_rate), int(batch_size), int(epochs), schedule,
            int(seed), float(corruption_p), int(hidden_dim), mu_scope)


class EpochMetrics(
        NamedTuple('_EpochMetrics', [
            ('epoch', int),
            ('train_mean', float),
            ('train_max', float),
            ('valid_mean', float),
            ('valid_max', float),
            ('test_mean', float),
            ('test_max', float),
        ])):
    """Noiseless mean and maximum losses of every split after an epoch.

    Epoch ``0`` holds the losses of the initial parameters, epoch ``t`` those after ``t``
    passes over the training split.
    """

    def get(self, split, metric):
        # type: (str, str) -> float

        if split not in SPLITS:
            raise ValueError('Unknown split {!r}.'.format(split))
        if metric not in METRICS:
            raise ValueError('Unknown metric {!r}.'.format(metric))
        return getattr(self, '{}_{}'.format(split, metric))


class RunRecord(
        NamedTuple('_RunRecord', [
            ('seed', int),
            ('objective', Objective),
            ('corruption_p', float),
            ('metrics', List[EpochMetrics]),
        ])):
    """Per-epoch metrics of one run.

    Attributes:
        seed:
            Seed of the run.
        objective:
            :class:`Objective` that was optimized.
        corruption_p:
            Salt-and-pepper probability used on the training inputs.
        metrics:
            :class:`EpochMetrics` in increasing epoch order, starting with the initial
            parameters.
    """

    def _validate(self):
        # type: () -> None

        epochs = [m.epoch for m in self.metrics]
        if len(epochs) == 0:
            raise ValueError('A run record needs at least one epoch.')
        if any(b <= a for a, b in zip(epochs, epochs[1:])):
            raise ValueError('Epochs must be strictly increasing but got {}.'.format(epochs))
        for m in self.metrics:
            if not all(math.isfinite(v) for v in m[1:]):
                raise ValueError('Metrics of epoch {} are not finite: {}.'.format(m.epoch, m))

    @property
    def epochs(self):
        # type: () -> List[int]

        return [m.epoch for m in self.metrics]

    def series(self, split, metric):
        # type: (str, str) -> List[float]

        return [m.get(split, metric) for m in self.metrics]

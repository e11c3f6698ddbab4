"""Experiment configuration stored as flat ``key = value`` files.

Example:

    .. code::

        # Desk-scale comparison on synthetic digits.
        objective = both
        seeds = 0, 1, 2
        corruption_levels = 0.1, 0.3
        epochs = 20
        synthetic = true

Keys that are not given take the defaults of :data:`DEFAULTS`. Presets shipped with the
package (``desk`` and ``mnist-full``) can be loaded by name.
"""

import os

from typing import NamedTuple
from typing import Optional
from typing import Tuple

from hvmax.exceptions import CLIUsageError
from hvmax.structs import NadirSchedule
from hvmax.structs import Objective
from hvmax.structs import TrainConfig
from hvmax import type_checking

if type_checking.TYPE_CHECKING:
    from typing import Any  # NOQA
    from typing import Callable  # NOQA
    from typing import Dict  # NOQA
    from typing import List  # NOQA

PRESET_DIR = os.path.join(os.path.dirname(__file__), 'configs')
OBJECTIVE_CHOICES = ('mean', 'hypervolume', 'both')


class ExperimentConfig(
        NamedTuple('_ExperimentConfig', [
            ('objective', str),
            ('seeds', Tuple[int, ...]),
            ('corruption_levels', Tuple[float, ...]),
            ('epochs', int),
            ('learning_rate', float),
            ('batch_size', int),
            ('epsilon0', float),
            ('kappa', float),
            ('hidden', int),
            ('mu_scope', str),
            ('synthetic', bool),
            ('synthetic_seed', int),
            ('train_images', Optional[str]),
            ('test_images', Optional[str]),
            ('downsample', int),
            ('train_size', int),
            ('valid_size', int),
            ('test_size', int),
            ('out', str),
        ])):
    """Everything needed to reproduce a set of runs.

    Attributes:
        objective:
            ``'mean'``, ``'hypervolume'`` or ``'both'``.
        seeds:
            Distinct run seeds.
        corruption_levels:
            Salt-and-pepper probabilities of the training inputs.
        synthetic:
            Use procedurally generated digits instead of the IDX files.
        downsample:
            Side of the pixel blocks averaged together.
        out:
            Output directory.
    """

    pass


DEFAULTS = ExperimentConfig(
    objective='both',
    seeds=tuple(range(10)),
    corruption_levels=(0.1, 0.3),
    epochs=20,
    learning_rate=0.1,
    batch_size=100,
    epsilon0=1.0,
    kappa=1.0,
    hidden=100,
    mu_scope='batch',
    synthetic=True,
    synthetic_seed=0,
    train_images=None,
    test_images=None,
    downsample=2,
    train_size=1000,
    valid_size=500,
    test_size=500,
    out='results',
)


def _parse_bool(text):
    # type: (str) -> bool

    lowered = text.strip().lower()
    if lowered in ('1', 'true', 'yes', 'on'):
        return True
    if lowered in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError('{!r} is not a boolean.'.format(text))


def _parse_optional_str(text):
    # type: (str) -> Optional[str]

    text = text.strip()
    return text if text else None


def _parse_int_list(text):
    # type: (str) -> Tuple[int, ...]

    return tuple(int(v) for v in text.split(',') if v.strip())


def _parse_float_list(text):
    # type: (str) -> Tuple[float, ...]

    return tuple(float(v) for v in text.split(',') if v.strip())


def _format_value(value):
    # type: (Any) -> str

    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, tuple):
        return ', '.join(_format_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


_PARSERS = {
    'objective': str.strip,
    'seeds': _parse_int_list,
    'corruption_levels': _parse_float_list,
    'epochs': int,
    'learning_rate': float,
    'batch_size': int,
    'epsilon0': float,
    'kappa': float,
    'hidden': int,
    'mu_scope': str.strip,
    'synthetic': _parse_bool,
    'synthetic_seed': int,
    'train_images': _parse_optional_str,
    'test_images': _parse_optional_str,
    'downsample': int,
    'train_size': int,
    'valid_size': int,
    'test_size': int,
    'out': str.strip,
}  # type: Dict[str, Callable[[str], Any]]


def parse_config(text, base=DEFAULTS):
    # type: (str, ExperimentConfig) -> ExperimentConfig
    """Parse the contents of a configuration file on top of ``base``."""

    values = {}  # type: Dict[str, Any]
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise CLIUsageError('Line {}: expected `key = value` but got {!r}.'.format(
                lineno, raw))
        key, value = (s.strip() for s in line.split('=', 1))
        if key not in _PARSERS:
            raise CLIUsageError('Line {}: unknown key {!r}.'.format(lineno, key))
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as e:
            raise CLIUsageError('Line {}: invalid value for {}: {}'.format(lineno, key, e))
    return base._replace(**values)


def dump_config(config):
    # type: (ExperimentConfig) -> str
    """Serialize a config so that :func:`parse_config` gives it back unchanged."""

    return ''.join('{} = {}\n'.format(key, _format_value(getattr(config, key)))
                   for key in ExperimentConfig._fields)


def load_config(path_or_preset):
    # type: (str) -> ExperimentConfig
    """Load a configuration file, or a preset shipped with the package by name."""

    path = path_or_preset
    if not os.path.exists(path):
        preset = os.path.join(PRESET_DIR, '{}.cfg'.format(path_or_preset))
        if not os.path.exists(preset):
            raise CLIUsageError('No configuration file or preset named {!r}.'.format(
                path_or_preset))
        path = preset
    with open(path) as f:
        return parse_config(f.read())


def apply_overrides(config, **overrides):
    # type: (ExperimentConfig, Any) -> ExperimentConfig
    """Replace the fields given on the command line, ignoring ``None`` values."""

    return config._replace(**{k: v for k, v in overrides.items() if v is not None})


def validate_config(config):
    # type: (ExperimentConfig) -> None
    """Check a config before launching runs.

    Raises:
        :exc:`~hvmax.exceptions.CLIUsageError`:
            If a value is out of range, seeds repeat, an input file does not exist, or the
            Nadir slack of a hypervolume run starts at zero.
    """

    if config.objective not in OBJECTIVE_CHOICES:
        raise CLIUsageError('Objective must be one of {} but got {!r}.'.format(
            ', '.join(OBJECTIVE_CHOICES), config.objective))
    if len(config.seeds) == 0:
        raise CLIUsageError('At least one seed is needed.')
    if len(set(config.seeds)) != len(config.seeds):
        raise CLIUsageError('Seeds must be distinct but got {}.'.format(config.seeds))
    if len(config.corruption_levels) == 0:
        raise CLIUsageError('At least one corruption level is needed.')
    if config.batch_size > config.train_size:
        raise CLIUsageError('Batch size {} exceeds the {} training samples.'.format(
            config.batch_size, config.train_size))
    if not config.synthetic:
        for key in ('train_images', 'test_images'):
            path = getattr(config, key)
            if path is None or not os.path.exists(path):
                raise CLIUsageError('{} {!r} does not exist. Use synthetic digits or point '
                                    'to the MNIST IDX files.'.format(key, path))
    try:
        for p in config.corruption_levels:
            train_config(config, Objective.MEAN_LOSS, config.seeds[0], p)
        for seed in config.seeds:
            train_config(config, Objective.MEAN_LOSS, seed, config.corruption_levels[0])
        NadirSchedule(config.epsilon0, config.kappa)
    except ValueError as e:
        raise CLIUsageError(str(e))
    # The first epoch of a hypervolume run sets the Nadir point epsilon0 above the worst loss.
    if Objective.HYPERVOLUME in objectives_of(config) and config.epsilon0 <= 0.0:
        raise CLIUsageError('Hypervolume runs need epsilon0 > 0 but got {}.'.format(
            config.epsilon0))


def objectives_of(config):
    # type: (ExperimentConfig) -> List[Objective]

    if config.objective == 'both':
        return [Objective.MEAN_LOSS, Objective.HYPERVOLUME]
    return [Objective.from_name(config.objective)]


def train_config(config, objective, seed, corruption_p):
    # type: (ExperimentConfig, Objective, int, float) -> TrainConfig
    """Build the :class:`~hvmax.structs.TrainConfig` of one run."""

    return TrainConfig(
        objective=objective,
        learning_rate=config.learning_rate,
        batch_size=config.batch_size,
        epochs=config.epochs,
        schedule=NadirSchedule(config.epsilon0, config.kappa),
        seed=seed,
        corruption_p=corruption_p,
        hidden_dim=config.hidden,
        mu_scope=config.mu_scope)

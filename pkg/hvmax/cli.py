from __future__ import absolute_import

from argparse import ArgumentParser  # NOQA
from argparse import ArgumentTypeError
from argparse import Namespace  # NOQA
from cliff.app import App
from cliff.command import Command
from cliff.commandmanager import CommandManager
from cliff.lister import Lister
import csv
import logging
import math
import multiprocessing
import multiprocessing.pool
import os
import sys

import tqdm

import hvmax
from hvmax import config as config_module
from hvmax.config import ExperimentConfig  # NOQA
from hvmax import data
from hvmax.exceptions import CLIUsageError
from hvmax import gradcheck
from hvmax import optim
from hvmax import pareto
from hvmax import stats
from hvmax.structs import METRICS
from hvmax.structs import SPLITS
from hvmax import type_checking

if type_checking.TYPE_CHECKING:
    from typing import Any  # NOQA
    from typing import Dict  # NOQA
    from typing import IO  # NOQA
    from typing import List  # NOQA
    from typing import Optional  # NOQA
    from typing import Sequence  # NOQA
    from typing import Tuple  # NOQA

    from hvmax.data import Dataset  # NOQA
    from hvmax.structs import Objective  # NOQA
    from hvmax.structs import RunRecord  # NOQA
    from hvmax.structs import TrainConfig  # NOQA

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CHECK_FAILED = 2

_logger = hvmax.logging.get_logger(__name__)


def _int_list(text):
    # type: (str) -> Tuple[int, ...]

    try:
        return tuple(int(v) for v in text.split(',') if v.strip())
    except ValueError:
        raise ArgumentTypeError('expected comma-separated integers but got {!r}'.format(text))


def _float_list(text):
    # type: (str) -> Tuple[float, ...]

    try:
        return tuple(float(v) for v in text.split(',') if v.strip())
    except ValueError:
        raise ArgumentTypeError('expected comma-separated numbers but got {!r}'.format(text))


def run_file_name(objective, corruption_p, seed):
    # type: (Objective, float, int) -> str

    return 'run-{}-p{:g}-seed{}.csv'.format(objective.value, corruption_p, seed)


def load_experiment_data(config):
    # type: (ExperimentConfig) -> Dataset

    sizes = (config.train_size, config.valid_size, config.test_size)
    if config.synthetic:
        return data.load_dataset(None, None, sizes, config.downsample, config.synthetic_seed)
    return data.load_dataset(config.train_images, config.test_images, sizes, config.downsample)


def _n_workers(n_jobs):
    # type: (int) -> int

    if n_jobs == -1:
        return multiprocessing.cpu_count()
    if n_jobs < 1:
        raise CLIUsageError('Number of jobs must be positive or -1 but got {}.'.format(n_jobs))
    return n_jobs


def _run_many(train_configs, dataset, out, n_jobs=1):
    # type: (Sequence[TrainConfig], Dataset, str, int) -> List[RunRecord]

    # Each run file is written when its run ends.
    n_workers = _n_workers(n_jobs)
    pbar = tqdm.tqdm(total=len(train_configs), ascii=True)
    records = []
    try:
        if n_workers == 1:
            for train_config in train_configs:
                records.append(_write_record(optim.run(train_config, dataset), out))
                pbar.update(1)
        else:
            # Results come back in submission order.
            pool = multiprocessing.pool.ThreadPool(n_workers)  # type: ignore
            try:
                for record in pool.imap(lambda c: optim.run(c, dataset), train_configs):
                    records.append(_write_record(record, out))
                    pbar.update(1)
            finally:
                pool.close()
                pool.join()
    finally:
        pbar.close()
    return records


def _record_path(record, out):
    # type: (RunRecord, str) -> str

    return os.path.join(out, run_file_name(record.objective, record.corruption_p, record.seed))


def _write_record(record, out):
    # type: (RunRecord, str) -> RunRecord

    stats.write_run_csv(record, _record_path(record, out))
    return record


def cmd_train(config, n_jobs=1):
    # type: (ExperimentConfig, int) -> List[str]
    """Train every (corruption level, seed, objective) run and write one CSV per run.

    Returns:
        Paths of the written run files.
    """

    config_module.validate_config(config)
    dataset = load_experiment_data(config)
    if not os.path.isdir(config.out):
        os.makedirs(config.out)

    train_configs = [
        config_module.train_config(config, objective, seed, p)
        for p in config.corruption_levels for seed in config.seeds
        for objective in config_module.objectives_of(config)
    ]
    records = _run_many(train_configs, dataset, config.out, n_jobs)
    paths = [_record_path(r, config.out) for r in records]
    _logger.info('Wrote {} run files to {}.'.format(len(paths), config.out))
    return paths


def cmd_compare(config, n_jobs=1):
    # type: (ExperimentConfig, int) -> List[stats.SummaryRow]
    """Run paired experiments and aggregate them.

    With ``objective = both`` the mean loss baseline is compared against the hypervolume.
    With a single objective, the runs are compared against themselves, which only makes sense
    as a sanity check of the pipeline.

    Writes the run files, one difference series per (metric, split, corruption level) and
    ``summary.csv`` with one row per corruption level.

    Returns:
        The rows of ``summary.csv``.
    """

    config_module.validate_config(config)
    dataset = load_experiment_data(config)
    if not os.path.isdir(config.out):
        os.makedirs(config.out)

    objectives = config_module.objectives_of(config)
    baseline, contender = objectives[0], objectives[-1]
    train_configs = []
    for p in config.corruption_levels:
        for seed in config.seeds:
            pair = tuple(config_module.train_config(config, o, seed, p) for o in objectives)
            if len(pair) == 2:
                optim.check_pair(pair)  # type: ignore
            train_configs.extend(pair)
    records = _run_many(train_configs, dataset, config.out, n_jobs)

    by_key = {(r.objective, r.corruption_p, r.seed): r for r in records}
    rows = []
    for p in config.corruption_levels:
        base_runs = [by_key[(baseline, p, s)] for s in config.seeds]
        other_runs = [by_key[(contender, p, s)] for s in config.seeds]
        for metric in METRICS:
            for split in SPLITS:
                series = stats.difference_series(base_runs, other_runs, split, metric)
                name = 'diff-{}-{}-p{:g}.csv'.format(metric, split, p)
                stats.write_difference_csv(series, os.path.join(config.out, name))

        row = stats.summarize(base_runs, other_runs, p)
        if math.isnan(row.t):
            _logger.warning('p={:g}: no paired t-test, the test losses of {} and {} do not '
                            'differ in spread (ZeroVariance) or there are fewer than two '
                            'seeds.'.format(p, baseline.value, contender.value))
        rows.append(row)

    summary_path = os.path.join(config.out, 'summary.csv')
    stats.write_summary_csv(rows, summary_path)
    _logger.info('Wrote summary to {}.'.format(summary_path))
    return rows


def cmd_pareto_demo(
        exponent=0.9,  # type: float
        z1=2.0,  # type: float
        z2=2.0,  # type: float
        grid_step=pareto.DEFAULT_GRID_STEP,  # type: float
        w1=0.5,  # type: float
        w2=0.5,  # type: float
        stream=None,  # type: Optional[IO[str]]
):
    # type: (...) -> Tuple[float, float]
    """Tabulate the toy problem and locate both optima.

    Writes ``x,f1,f2,linear,log_hypervolume`` rows to ``stream``.

    Returns:
        The minimizer of the weighted sum and the maximizer of the log-hypervolume.
    """

    try:
        problem = pareto.ToyProblem(exponent)
        rows = pareto.pareto_grid(problem, z1, z2, w1, w2, grid_step)
        x_linear = pareto.linear_argmin(problem, w1, w2, grid_step)
        x_hv = pareto.hv_argmax(problem, z1, z2, grid_step)
    except ValueError as e:
        raise CLIUsageError(str(e))

    writer = csv.writer(stream or sys.stdout, lineterminator='\n')
    writer.writerow(pareto.GridRow._fields)
    for row in rows:
        writer.writerow([stats.format_number(v) for v in row])

    _logger.info('Weighted sum ({:g}, {:g}) is minimized at x={:g}; log-hypervolume with '
                 'z=({:g}, {:g}) is maximized at x={:g}.'.format(w1, w2, x_linear, z1, z2, x_hv))
    return x_linear, x_hv


def cmd_gradcheck(
        seed=0,  # type: int
        input_dim=6,  # type: int
        hidden_dim=4,  # type: int
        trials=10,  # type: int
        threshold=gradcheck.DEFAULT_THRESHOLD,  # type: float
        perturbation=0.0,  # type: float
        stream=None,  # type: Optional[IO[str]]
):
    # type: (...) -> int
    """Run the finite-difference checks and print one line per check.

    Returns:
        :data:`EXIT_OK` if every check passed, :data:`EXIT_CHECK_FAILED` otherwise.
    """

    try:
        results = gradcheck.run_gradcheck(
            seed, input_dim, hidden_dim, trials, threshold, perturbation)
    except ValueError as e:
        raise CLIUsageError(str(e))

    stream = stream or sys.stdout
    for r in results:
        stream.write('{:<14} trial={:<3d} max_rel_error={:.3e} {}\n'.format(
            r.name, r.trial, r.max_relative_error, 'ok' if r.passed else 'FAIL'))
    worst = max(r.max_relative_error for r in results)
    passed = all(r.passed for r in results)
    stream.write('max relative error: {:.3e} (threshold {:.1e}) {}\n'.format(
        worst, threshold, 'PASSED' if passed else 'FAILED'))
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def _add_experiment_arguments(parser):
    # type: (ArgumentParser) -> None

    parser.add_argument(
        '--config', default=None,
        help='Configuration file, or the name of a shipped preset (desk, mnist-full).')
    parser.add_argument(
        '--objective', choices=config_module.OBJECTIVE_CHOICES, default=None,
        help='Objective(s) to train.')
    parser.add_argument(
        '--seed', dest='seeds', type=_int_list, default=None,
        help='Comma-separated run seeds.')
    parser.add_argument(
        '--p', dest='corruption_levels', type=_float_list, default=None,
        help='Comma-separated salt-and-pepper probabilities.')
    parser.add_argument('--epochs', type=int, default=None, help='Number of epochs.')
    parser.add_argument('--lr', dest='learning_rate', type=float, default=None,
                        help='Learning rate.')
    parser.add_argument('--batch', dest='batch_size', type=int, default=None,
                        help='Mini-batch size.')
    parser.add_argument('--epsilon0', type=float, default=None,
                        help='Initial slack of the Nadir value.')
    parser.add_argument('--kappa', type=float, default=None,
                        help='Slack growth per epoch.')
    parser.add_argument('--hidden', type=int, default=None, help='Number of hidden units.')
    parser.add_argument(
        '--mu-scope', dest='mu_scope', choices=('batch', 'dataset'), default=None,
        help='Take the worst loss over the mini-batch or over the whole training split.')
    parser.add_argument('--out', default=None, help='Output directory.')
    parser.add_argument(
        '--synthetic', action='store_const', const=True, default=None,
        help='Use synthetic digits instead of the MNIST IDX files.')
    parser.add_argument('--train-images', dest='train_images', default=None,
                        help='MNIST training images IDX file.')
    parser.add_argument('--test-images', dest='test_images', default=None,
                        help='MNIST test images IDX file.')
    parser.add_argument('--downsample', type=int, default=None,
                        help='Side of the pixel blocks averaged together.')
    parser.add_argument('--train-size', dest='train_size', type=int, default=None)
    parser.add_argument('--valid-size', dest='valid_size', type=int, default=None)
    parser.add_argument('--test-size', dest='test_size', type=int, default=None)
    parser.add_argument(
        '--n-jobs', type=int, default=1,
        help='The number of runs trained in parallel. If this argument is set to -1, the '
        'number is set to CPU counts.')


def resolve_config(parsed_args):
    # type: (Namespace) -> ExperimentConfig
    """Build the config of a command from ``--config`` and the override flags."""

    if parsed_args.config is not None:
        config = config_module.load_config(parsed_args.config)
    else:
        config = config_module.DEFAULTS

    synthetic = parsed_args.synthetic
    if synthetic is None and parsed_args.train_images is not None:
        synthetic = False
    overrides = {
        key: getattr(parsed_args, key)
        for key in ExperimentConfig._fields if key != 'synthetic' and hasattr(parsed_args, key)
    }  # type: Dict[str, Any]
    return config_module.apply_overrides(config, synthetic=synthetic, **overrides)


class _BaseCommand(Command):
    def __init__(self, *args, **kwargs):
        # type: (List[Any], Dict[str, Any]) -> None

        super(_BaseCommand, self).__init__(*args, **kwargs)
        self.logger = hvmax.logging.get_logger(__name__)


class _Train(_BaseCommand):
    def get_parser(self, prog_name):
        # type: (str) -> ArgumentParser

        parser = super(_Train, self).get_parser(prog_name)
        _add_experiment_arguments(parser)
        return parser

    def take_action(self, parsed_args):
        # type: (Namespace) -> int

        cmd_train(resolve_config(parsed_args), parsed_args.n_jobs)
        return EXIT_OK


class _Compare(Lister):
    def get_parser(self, prog_name):
        # type: (str) -> ArgumentParser

        parser = super(_Compare, self).get_parser(prog_name)
        _add_experiment_arguments(parser)
        return parser

    def take_action(self, parsed_args):
        # type: (Namespace) -> Tuple[Tuple, Tuple[Tuple, ...]]

        rows = cmd_compare(resolve_config(parsed_args), parsed_args.n_jobs)
        return (stats.SUMMARY_CSV_HEADER,
                tuple(tuple(stats.format_number(v) for v in row) for row in rows))


class _ParetoDemo(_BaseCommand):
    def get_parser(self, prog_name):
        # type: (str) -> ArgumentParser

        parser = super(_ParetoDemo, self).get_parser(prog_name)
        parser.add_argument('--exponent', type=float, default=0.9,
                            help='Exponent of the second objective, in (0, 1).')
        parser.add_argument('--z', type=_float_list, default=(2.0, 2.0),
                            help='Nadir point as `z1,z2`.')
        parser.add_argument('--weights', type=_float_list, default=(0.5, 0.5),
                            help='Weights of the linear combination as `w1,w2`.')
        parser.add_argument('--grid-step', dest='grid_step', type=float,
                            default=pareto.DEFAULT_GRID_STEP, help='Grid resolution.')
        parser.add_argument('--out', '-o', default=None,
                            help='Output CSV file. Written to stdout if not given.')
        return parser

    def take_action(self, parsed_args):
        # type: (Namespace) -> int

        if len(parsed_args.z) != 2 or len(parsed_args.weights) != 2:
            raise CLIUsageError('--z and --weights take exactly two values each.')
        z1, z2 = parsed_args.z
        w1, w2 = parsed_args.weights
        if parsed_args.out is None:
            cmd_pareto_demo(parsed_args.exponent, z1, z2, parsed_args.grid_step, w1, w2,
                            self.app.stdout)
        else:
            with open(parsed_args.out, 'w', newline='') as f:
                cmd_pareto_demo(parsed_args.exponent, z1, z2, parsed_args.grid_step, w1, w2, f)
            self.logger.info('Grid successfully written to: {}'.format(parsed_args.out))
        return EXIT_OK


class _Gradcheck(_BaseCommand):
    def get_parser(self, prog_name):
        # type: (str) -> ArgumentParser

        parser = super(_Gradcheck, self).get_parser(prog_name)
        parser.add_argument('--seed', type=int, default=0, help='Seed of the random networks.')
        parser.add_argument('--dims', type=_int_list, default=(6, 4, 6),
                            help='Network shape as `input,hidden,output`, at most 16,8,16.')
        parser.add_argument('--trials', type=int, default=10,
                            help='Random networks per check.')
        parser.add_argument('--threshold', type=float, default=gradcheck.DEFAULT_THRESHOLD,
                            help='Largest accepted relative error.')
        parser.add_argument('--perturb', type=float, default=0.0,
                            help='Offset added to the analytic gradients (negative control).')
        return parser

    def take_action(self, parsed_args):
        # type: (Namespace) -> int

        dims = parsed_args.dims
        if len(dims) != 3 or dims[0] != dims[2]:
            raise CLIUsageError(
                '--dims must be `input,hidden,output` with equal input and output but got '
                '{}.'.format(dims))
        return cmd_gradcheck(parsed_args.seed, dims[0], dims[1], parsed_args.trials,
                             parsed_args.threshold, parsed_args.perturb, self.app.stdout)


class _ConfigShow(_BaseCommand):
    def get_parser(self, prog_name):
        # type: (str) -> ArgumentParser

        parser = super(_ConfigShow, self).get_parser(prog_name)
        _add_experiment_arguments(parser)
        return parser

    def take_action(self, parsed_args):
        # type: (Namespace) -> int

        self.app.stdout.write(config_module.dump_config(resolve_config(parsed_args)))
        return EXIT_OK


_COMMANDS = {
    'train': _Train,
    'compare': _Compare,
    'pareto-demo': _ParetoDemo,
    'gradcheck': _Gradcheck,
    'config show': _ConfigShow,
}


class _HvmaxApp(App):
    def __init__(self):
        # type: () -> None

        command_manager = CommandManager('hvmax.command')
        super(_HvmaxApp, self).__init__(
            description='Hypervolume maximization as a training objective.',
            version=hvmax.__version__,
            command_manager=command_manager)
        for name, cls in _COMMANDS.items():
            command_manager.add_command(name, cls)

    def configure_logging(self):
        # type: () -> None

        super(_HvmaxApp, self).configure_logging()

        # Find the StreamHandler that is configured by super's configure_logging,
        # and replace its formatter with our colored one.
        root_logger = logging.getLogger()
        stream_handlers = [
            handler for handler in root_logger.handlers
            if isinstance(handler, logging.StreamHandler)
        ]
        assert len(stream_handlers) == 1
        stream_handler = stream_handlers[0]
        stream_handler.setFormatter(hvmax.logging.create_default_formatter())

    def clean_up(self, cmd, result, err):
        # type: (Command, int, Optional[Exception]) -> None

        if isinstance(err, CLIUsageError):
            self.parser.print_help()


def main():
    # type: () -> int

    argv = sys.argv[1:] if len(sys.argv) > 1 else ['help']
    return _HvmaxApp().run(argv)

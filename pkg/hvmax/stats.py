"""Aggregation of paired runs."""

import csv
import math

import numpy
from numpy import ndarray
import scipy.special
from typing import NamedTuple

from hvmax.exceptions import UnpairedRunsError
from hvmax.exceptions import ZeroVariance
from hvmax.structs import EpochMetrics
from hvmax.structs import METRICS
from hvmax.structs import Objective
from hvmax.structs import RunRecord
from hvmax.structs import SPLITS
from hvmax import type_checking

if type_checking.TYPE_CHECKING:
    from typing import List  # NOQA
    from typing import Sequence  # NOQA
    from typing import Tuple  # NOQA

RUN_CSV_HEADER = ('epoch', ) + EpochMetrics._fields[1:]
DIFFERENCE_CSV_HEADER = ('epoch', 'median', 'lower', 'upper')
SUMMARY_CSV_HEADER = ('corruption_p', 'mean_loss_baseline', 'sd_baseline', 'mean_loss_hv',
                      'sd_hv', 't', 'p')

_RELATIVE_SPREAD_TOLERANCE = 1e-12


class DifferenceSeries(
        NamedTuple('_DifferenceSeries', [
            ('epochs', ndarray),
            ('median', ndarray),
            ('lower', ndarray),
            ('upper', ndarray),
        ])):
    """Per-epoch summary of ``baseline - hypervolume`` over seeds.

    Positive values mean that the hypervolume runs reached a lower loss. The bounds are the
    minimum and the maximum over the seeds.
    """

    pass


class SummaryRow(
        NamedTuple('_SummaryRow', [
            ('corruption_p', float),
            ('mean_loss_baseline', float),
            ('sd_baseline', float),
            ('mean_loss_hv', float),
            ('sd_hv', float),
            ('t', float),
            ('p', float),
        ])):
    """Test mean losses at the best validation epoch for one corruption level.

    ``t`` and ``p`` come from :func:`paired_t_test` of the baseline against the hypervolume
    losses, and are ``nan`` when the differences have no spread.
    """

    pass


def _pair_by_seed(baseline, hypervolume):
    # type: (Sequence[RunRecord], Sequence[RunRecord]) -> List[Tuple[RunRecord, RunRecord]]

    by_seed = {r.seed: r for r in hypervolume}
    if len(by_seed) != len(hypervolume) or len({r.seed for r in baseline}) != len(baseline):
        raise UnpairedRunsError('Seeds must be distinct within each group of runs.')
    if set(by_seed) != {r.seed for r in baseline}:
        raise UnpairedRunsError('Baseline seeds {} and hypervolume seeds {} differ.'.format(
            sorted(r.seed for r in baseline), sorted(by_seed)))
    if len(baseline) == 0:
        raise UnpairedRunsError('No runs to compare.')

    pairs = []
    for b in sorted(baseline, key=lambda r: r.seed):
        h = by_seed[b.seed]
        if b.epochs != h.epochs:
            raise UnpairedRunsError('Runs of seed {} have different epochs.'.format(b.seed))
        pairs.append((b, h))
    return pairs


def difference_series(baseline, hypervolume, split, metric='mean'):
    # type: (Sequence[RunRecord], Sequence[RunRecord], str, str) -> DifferenceSeries
    """Summarize the per-epoch differences ``baseline - hypervolume`` over seeds.

    Args:
        baseline:
            Runs of the mean loss objective.
        hypervolume:
            Runs of the hypervolume objective, with the same seeds and epochs.
        split:
            One of ``'train'``, ``'valid'`` and ``'test'``.
        metric:
            ``'mean'`` or ``'max'`` loss over the split.

    Returns:
        :class:`DifferenceSeries` with the median, minimum and maximum over seeds.
    """

    if split not in SPLITS:
        raise ValueError('Unknown split {!r}.'.format(split))
    if metric not in METRICS:
        raise ValueError('Unknown metric {!r}.'.format(metric))

    pairs = _pair_by_seed(baseline, hypervolume)
    differences = numpy.array([
        numpy.subtract(b.series(split, metric), h.series(split, metric)) for b, h in pairs
    ])
    return DifferenceSeries(
        numpy.array(pairs[0][0].epochs),
        numpy.median(differences, axis=0),
        numpy.min(differences, axis=0),
        numpy.max(differences, axis=0))


def best_validation_epoch(record):
    # type: (RunRecord) -> int
    """Return the epoch with the smallest validation mean loss, the earliest one on ties."""

    if len(record.metrics) == 0:
        raise ValueError('Cannot select an epoch of an empty record.')
    best = min(record.metrics, key=lambda m: m.valid_mean)
    return best.epoch


def _metrics_at(record, epoch):
    # type: (RunRecord, int) -> EpochMetrics

    for m in record.metrics:
        if m.epoch == epoch:
            return m
    raise ValueError('Run of seed {} has no epoch {}.'.format(record.seed, epoch))


def student_t_cdf(t, df):
    # type: (float, float) -> float
    """Cumulative distribution function of Student's t distribution.

    Computed from the regularized incomplete beta function,
    ``P(|T| > |t|) = I(df / (df + t^2); df / 2, 1 / 2)``.
    """

    if not df > 0:
        raise ValueError('Degrees of freedom must be positive but got {}.'.format(df))
    if math.isinf(t):
        return 1.0 if t > 0 else 0.0
    tail = 0.5 * float(scipy.special.betainc(0.5 * df, 0.5, df / (df + t * t)))
    return 1.0 - tail if t > 0 else tail


def paired_t_test(a, b):
    # type: (Sequence[float], Sequence[float]) -> Tuple[float, float]
    """Paired t-test of ``a`` against ``b``.

    Returns:
        The t statistic of the differences ``a - b`` and its two-sided p-value with
        ``n - 1`` degrees of freedom.

    Raises:
        :exc:`~hvmax.exceptions.ZeroVariance`:
            If all differences are equal up to rounding.
    """

    a = numpy.asarray(a, dtype=numpy.float64)
    b = numpy.asarray(b, dtype=numpy.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError('Paired samples must be vectors of the same length.')
    n = a.size
    if n < 2:
        raise ValueError('A paired t-test needs at least 2 pairs but got {}.'.format(n))

    d = a - b
    sd = float(numpy.std(d, ddof=1))
    # Differences equal up to rounding of the subtraction.
    scale = max(float(numpy.max(numpy.abs(a))), float(numpy.max(numpy.abs(b))))
    if sd <= _RELATIVE_SPREAD_TOLERANCE * scale:
        raise ZeroVariance('All {} paired differences are equal to {}.'.format(n, d[0]))

    t = float(numpy.mean(d)) * math.sqrt(n) / sd
    df = n - 1
    p = float(scipy.special.betainc(0.5 * df, 0.5, df / (df + t * t)))
    return t, p


def summarize(baseline, hypervolume, corruption_p):
    # type: (Sequence[RunRecord], Sequence[RunRecord], float) -> SummaryRow
    """Compare test mean losses at the best validation epoch of every run."""

    pairs = _pair_by_seed(baseline, hypervolume)
    losses_b = [_metrics_at(b, best_validation_epoch(b)).test_mean for b, _ in pairs]
    losses_h = [_metrics_at(h, best_validation_epoch(h)).test_mean for _, h in pairs]

    ddof = 1 if len(pairs) > 1 else 0
    t, p = float('nan'), float('nan')
    if len(pairs) > 1:
        try:
            t, p = paired_t_test(losses_b, losses_h)
        except ZeroVariance:
            pass
    return SummaryRow(
        float(corruption_p),
        float(numpy.mean(losses_b)), float(numpy.std(losses_b, ddof=ddof)),
        float(numpy.mean(losses_h)), float(numpy.std(losses_h, ddof=ddof)),
        t, p)


def format_number(value):
    # type: (float) -> str

    return '{:.9g}'.format(value)


def write_run_csv(record, path):
    # type: (RunRecord, str) -> None
    """Write the per-epoch metrics of a run."""

    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(RUN_CSV_HEADER)
        for m in record.metrics:
            writer.writerow([m.epoch] + [format_number(v) for v in m[1:]])


def read_run_csv(path, seed, objective, corruption_p):
    # type: (str, int, Objective, float) -> RunRecord
    """Read a file written by :func:`write_run_csv`."""

    with open(path, newline='') as f:
        reader = csv.reader(f)
        header = tuple(next(reader))
        if header != RUN_CSV_HEADER:
            raise ValueError('{}: unexpected header {}.'.format(path, header))
        metrics = [
            EpochMetrics(int(row[0]), *(float(v) for v in row[1:])) for row in reader if row
        ]
    record = RunRecord(seed, objective, corruption_p, metrics)
    record._validate()
    return record


def write_difference_csv(series, path):
    # type: (DifferenceSeries, str) -> None

    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(DIFFERENCE_CSV_HEADER)
        for epoch, median, lower, upper in zip(*series):
            writer.writerow([int(epoch)] + [format_number(v) for v in (median, lower, upper)])


def write_summary_csv(rows, path):
    # type: (Sequence[SummaryRow], str) -> None

    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(SUMMARY_CSV_HEADER)
        for row in rows:
            writer.writerow([format_number(v) for v in row])

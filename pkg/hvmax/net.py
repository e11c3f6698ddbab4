"""Dense denoising autoencoder with a single sigmoid hidden layer.

The network maps ``x`` to ``sigmoid(W2 . sigmoid(W1 . x + b1) + b2)`` with untied encoder and
decoder weights. Reconstructions are scored with the binary cross-entropy summed over the
input dimensions, one loss per sample.
"""

import numpy
from numpy import ndarray
import scipy.special
from typing import NamedTuple

from hvmax.exceptions import NumericalInstability
from hvmax import type_checking

if type_checking.TYPE_CHECKING:
    from typing import Tuple  # NOQA
    from typing import Union  # NOQA

    from hvmax.scalarize import WeightVector  # NOQA

_LOSS_CLIP = 1e-12


class AutoencoderParams(
        NamedTuple('_AutoencoderParams', [
            ('enc_weights', ndarray),
            ('enc_bias', ndarray),
            ('dec_weights', ndarray),
            ('dec_bias', ndarray),
        ])):
    """Weights and biases of the autoencoder.

    The same structure also holds gradients, so that :func:`~hvmax.optim.sgd_step` can work
    field by field.

    Attributes:
        enc_weights:
            Encoder weights, shape ``(hidden_dim, input_dim)``.
        enc_bias:
            Encoder bias, shape ``(hidden_dim,)``.
        dec_weights:
            Decoder weights, shape ``(input_dim, hidden_dim)``.
        dec_bias:
            Decoder bias, shape ``(input_dim,)``.
    """

    @property
    def input_dim(self):
        # type: () -> int

        return self.enc_weights.shape[1]

    @property
    def hidden_dim(self):
        # type: () -> int

        return self.enc_weights.shape[0]

    def _validate(self):
        # type: () -> None

        hidden_dim, input_dim = self.enc_weights.shape
        expected = ((hidden_dim, input_dim), (hidden_dim, ), (input_dim, hidden_dim),
                    (input_dim, ))
        actual = tuple(a.shape for a in self)
        if actual != expected:
            raise ValueError(
                'Inconsistent autoencoder shapes {}, expected {}.'.format(actual, expected))

    def flatten(self):
        # type: () -> ndarray

        return numpy.concatenate([a.ravel() for a in self])

    @classmethod
    def unflatten(cls, vector, like):
        # type: (ndarray, AutoencoderParams) -> AutoencoderParams

        arrays = []
        offset = 0
        for a in like:
            arrays.append(numpy.asarray(vector[offset:offset + a.size]).reshape(a.shape))
            offset += a.size
        if offset != len(vector):
            raise ValueError('Expected {} entries but got {}.'.format(offset, len(vector)))
        return cls(*arrays)


class Batch(NamedTuple('_Batch', [('clean', ndarray), ('corrupted', ndarray)])):
    """Clean targets and the corrupted inputs fed to the network."""

    pass


def init_params(seed, input_dim, hidden_dim):
    # type: (int, int, int) -> AutoencoderParams
    """Initialize the autoencoder.

    Weights are drawn uniformly from ``+-4 * sqrt(6 / (fan_in + fan_out))``, the range suited
    to sigmoid units, and biases start at zero.

    Args:
        seed:
            Seed of the initialization. The same seed always gives bit-identical parameters.
        input_dim:
            Number of inputs, which is also the number of outputs.
        hidden_dim:
            Number of hidden units.
    """

    if input_dim < 1 or hidden_dim < 1:
        raise ValueError('Dimensions must be at least 1 but got input_dim={}, '
                         'hidden_dim={}.'.format(input_dim, hidden_dim))

    rng = numpy.random.RandomState(seed)
    bound = 4.0 * numpy.sqrt(6.0 / (input_dim + hidden_dim))
    enc_weights = rng.uniform(-bound, bound, size=(hidden_dim, input_dim))
    dec_weights = rng.uniform(-bound, bound, size=(input_dim, hidden_dim))
    return AutoencoderParams(
        enc_weights, numpy.zeros(hidden_dim), dec_weights, numpy.zeros(input_dim))


def _check_inputs(params, inputs):
    # type: (AutoencoderParams, ndarray) -> ndarray

    inputs = numpy.asarray(inputs, dtype=numpy.float64)
    if inputs.ndim != 2 or inputs.shape[1] != params.input_dim:
        raise ValueError('Expected inputs of shape (B, {}) but got {}.'.format(
            params.input_dim, inputs.shape))
    return inputs


def _forward(params, inputs):
    # type: (AutoencoderParams, ndarray) -> Tuple[ndarray, ndarray]

    hidden = scipy.special.expit(numpy.dot(inputs, params.enc_weights.T) + params.enc_bias)
    output = scipy.special.expit(numpy.dot(hidden, params.dec_weights.T) + params.dec_bias)
    return hidden, output


def forward(params, inputs):
    # type: (AutoencoderParams, ndarray) -> ndarray
    """Reconstruct a batch of inputs.

    Args:
        params:
            Autoencoder parameters.
        inputs:
            Inputs of shape ``(B, input_dim)``, one sample per row.

    Returns:
        Reconstructions of shape ``(B, input_dim)`` with every entry in ``(0, 1)``.
    """

    return _forward(params, _check_inputs(params, inputs))[1]


def per_sample_loss(reconstruction, target):
    # type: (ndarray, ndarray) -> ndarray
    """Binary cross-entropy of each reconstruction, summed over the dimensions.

    Reconstructions are clipped to ``[1e-12, 1 - 1e-12]`` before taking logarithms.

    Raises:
        :exc:`~hvmax.exceptions.NumericalInstability`:
            If a loss is not finite.
    """

    reconstruction = numpy.asarray(reconstruction, dtype=numpy.float64)
    target = numpy.asarray(target, dtype=numpy.float64)
    if reconstruction.shape != target.shape or reconstruction.ndim != 2:
        raise ValueError('Reconstruction {} and target {} must be matrices of the same '
                         'shape.'.format(reconstruction.shape, target.shape))

    r = numpy.clip(reconstruction, _LOSS_CLIP, 1.0 - _LOSS_CLIP)
    losses = -numpy.sum(target * numpy.log(r) + (1.0 - target) * numpy.log1p(-r), axis=1)
    if not numpy.all(numpy.isfinite(losses)):
        raise NumericalInstability('Non-finite cross-entropy loss.')
    return losses


def weighted_backward(params, batch, weights):
    # type: (AutoencoderParams, Batch, Union[WeightVector, ndarray]) -> AutoencoderParams
    """Gradient of the weighted sum of the per-sample losses.

    The corrupted inputs are fed to the network and the clean inputs are the targets. With
    uniform weights ``1 / B`` this is the gradient of the mean loss; with the weights of
    :func:`~hvmax.scalarize.hv_weights` it is the negative gradient of the log-hypervolume.

    Args:
        params:
            Autoencoder parameters.
        batch:
            :class:`Batch` of clean targets and corrupted inputs.
        weights:
            One weight per row of the batch.

    Returns:
        :class:`AutoencoderParams` holding the gradient of every parameter.
    """

    clean = _check_inputs(params, batch.clean)
    corrupted = _check_inputs(params, batch.corrupted)
    if clean.shape != corrupted.shape:
        raise ValueError('Clean {} and corrupted {} batches differ in shape.'.format(
            clean.shape, corrupted.shape))
    w = numpy.asarray(getattr(weights, 'values', weights), dtype=numpy.float64)
    if w.shape != (clean.shape[0], ):
        raise ValueError('Expected {} weights but got shape {}.'.format(
            clean.shape[0], w.shape))

    hidden, output = _forward(params, corrupted)

    # Sigmoid outputs with cross-entropy give dl/dz = y - t at the output pre-activation.
    delta_out = w[:, None] * (output - clean)
    delta_hidden = numpy.dot(delta_out, params.dec_weights) * hidden * (1.0 - hidden)

    gradient = AutoencoderParams(
        enc_weights=numpy.dot(delta_hidden.T, corrupted),
        enc_bias=numpy.sum(delta_hidden, axis=0),
        dec_weights=numpy.dot(delta_out.T, hidden),
        dec_bias=numpy.sum(delta_out, axis=0))
    if not all(numpy.all(numpy.isfinite(g)) for g in gradient):
        raise NumericalInstability('Non-finite gradient.')
    return gradient

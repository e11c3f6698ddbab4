"""Images for the denoising experiments.

Images are flattened row-major into rows of a ``float64`` matrix with values in ``[0, 1]``.
They are read from MNIST IDX files when available, and generated procedurally otherwise.
"""

import math
import struct

import numpy
from numpy import ndarray
import scipy.ndimage
from typing import NamedTuple

from hvmax.exceptions import BadMagic
from hvmax.exceptions import TruncatedFile
from hvmax import logging
from hvmax import type_checking

if type_checking.TYPE_CHECKING:
    from typing import Optional  # NOQA
    from typing import Sequence  # NOQA
    from typing import Tuple  # NOQA
    from typing import Union  # NOQA

    SplitSizes = Union[int, Sequence[int]]

IDX_IMAGE_MAGIC = 0x00000803
_IDX_HEADER = struct.Struct('>IIII')

MNIST_TRAIN_ROWS = 60000
MNIST_TEST_ROWS = 10000
MNIST_VALID_ROWS = 10000

logger = logging.get_logger(__name__)


class Dataset(
        NamedTuple('_Dataset', [('train', ndarray), ('valid', ndarray), ('test', ndarray)])):
    """Training, validation and test images.

    Attributes:
        train:
            Training images, shape ``(N_train, d)``.
        valid:
            Validation images, shape ``(N_valid, d)``.
        test:
            Test images, shape ``(N_test, d)``.
    """

    @property
    def d(self):
        # type: () -> int

        return self.train.shape[1]

    @property
    def sizes(self):
        # type: () -> Tuple[int, int, int]

        return self.train.shape[0], self.valid.shape[0], self.test.shape[0]


def load_idx_images(path):
    # type: (str) -> ndarray
    """Read an IDX file of unsigned-byte images.

    The file starts with the big-endian magic ``0x00000803`` followed by the number of images,
    rows and columns as big-endian 32-bit integers, then the pixels.

    Returns:
        Matrix of shape ``(N, rows * cols)`` with pixels divided by 255.

    Raises:
        :exc:`~hvmax.exceptions.BadMagic`:
            If the file is not an unsigned-byte 3D tensor.
        :exc:`~hvmax.exceptions.TruncatedFile`:
            If the file is shorter than its header announces.
    """

    with open(path, 'rb') as f:
        content = f.read()

    if len(content) < _IDX_HEADER.size:
        raise TruncatedFile('{}: {} bytes is shorter than the IDX header.'.format(
            path, len(content)))
    magic, count, rows, cols = _IDX_HEADER.unpack_from(content)
    if magic != IDX_IMAGE_MAGIC:
        raise BadMagic('{}: magic number 0x{:08x} is not 0x{:08x}.'.format(
            path, magic, IDX_IMAGE_MAGIC))

    n_pixels = count * rows * cols
    body = content[_IDX_HEADER.size:]
    if len(body) < n_pixels:
        raise TruncatedFile('{}: expected {} pixels but got {}.'.format(
            path, n_pixels, len(body)))

    pixels = numpy.frombuffer(body, dtype=numpy.uint8, count=n_pixels)
    return pixels.reshape(count, rows * cols).astype(numpy.float64) / 255.0


def write_idx_images(path, images):
    # type: (str, ndarray) -> None
    """Write unsigned-byte images of shape ``(N, rows, cols)`` as an IDX file."""

    images = numpy.asarray(images)
    if images.ndim != 3 or images.dtype != numpy.uint8:
        raise ValueError('Expected a uint8 array of shape (N, rows, cols) but got {} {}.'.format(
            images.dtype, images.shape))
    with open(path, 'wb') as f:
        f.write(_IDX_HEADER.pack(IDX_IMAGE_MAGIC, *images.shape))
        f.write(images.tobytes(order='C'))


def split_mnist(images, test_images):
    # type: (ndarray, ndarray) -> Dataset
    """Split the MNIST images into the usual 50000/10000/10000 sets.

    The first 50000 rows of the training file are used for training and the last 10000 for
    validation. The split is fixed, so every run sees the same sets.
    """

    if images.shape[0] != MNIST_TRAIN_ROWS:
        raise ValueError('Expected {} training images but got {}.'.format(
            MNIST_TRAIN_ROWS, images.shape[0]))
    if test_images.shape[0] != MNIST_TEST_ROWS:
        raise ValueError('Expected {} test images but got {}.'.format(
            MNIST_TEST_ROWS, test_images.shape[0]))

    n_train = MNIST_TRAIN_ROWS - MNIST_VALID_ROWS
    return Dataset(images[:n_train], images[n_train:], test_images)


def _as_split_sizes(sizes):
    # type: (SplitSizes) -> Tuple[int, int, int]

    if isinstance(sizes, int):
        return sizes, sizes, sizes
    sizes = tuple(int(s) for s in sizes)
    if len(sizes) != 3:
        raise ValueError('Expected sizes for train, valid and test but got {}.'.format(sizes))
    return sizes  # type: ignore


def _image_side(d):
    # type: (int) -> int

    side = int(round(math.sqrt(d)))
    if side * side != d:
        raise ValueError('Dimension {} is not a perfect square.'.format(d))
    return side


def downsample(dataset, sample_counts, image_factor):
    # type: (Dataset, SplitSizes, int) -> Dataset
    """Shrink a dataset for quick experiments.

    Args:
        dataset:
            Dataset of square images.
        sample_counts:
            Number of leading samples to keep per split, either one count for all splits or
            a ``(train, valid, test)`` triple.
        image_factor:
            Side of the square blocks averaged into a single pixel. ``1`` keeps the images.

    Returns:
        The reduced :class:`Dataset`.
    """

    side = _image_side(dataset.d)
    if image_factor < 1 or side % image_factor != 0:
        raise ValueError('Downsampling factor {} does not divide the image side {}.'.format(
            image_factor, side))
    counts = _as_split_sizes(sample_counts)
    for name, count, available in zip(('train', 'valid', 'test'), counts, dataset.sizes):
        if not 0 < count <= available:
            raise ValueError('Cannot keep {} {} samples out of {}.'.format(
                count, name, available))

    reduced = side // image_factor

    def _reduce(images, count):
        # type: (ndarray, int) -> ndarray

        blocks = images[:count].reshape(count, reduced, image_factor, reduced, image_factor)
        return blocks.mean(axis=(2, 4)).reshape(count, reduced * reduced)

    return Dataset(*(_reduce(images, count) for images, count in zip(dataset, counts)))


# Segments of a seven-segment display, named clockwise from the top with 'g' in the middle.
_DIGIT_SEGMENTS = {
    0: 'abcdef',
    1: 'bc',
    2: 'abdeg',
    3: 'abcdg',
    4: 'bcfg',
    5: 'acdfg',
    6: 'acdefg',
    7: 'abc',
    8: 'abcdefg',
    9: 'abcdfg',
}

# Smoothed intensities mapped to 0 and 1 by the contrast stretch of synthetic digits.
_INK_FLOOR = 0.15
_INK_SATURATION = 0.6


def _render_glyph(digit, side, rng):
    # type: (int, int, numpy.random.RandomState) -> ndarray

    image = numpy.zeros((side, side))
    thickness = max(1, int(round(side * rng.uniform(0.07, 0.14))))
    width = min(side, max(thickness + 1, int(round(side * rng.uniform(0.35, 0.55)))))
    height = min(side, max(2 * thickness + 1, int(round(side * rng.uniform(0.6, 0.8)))))
    left = rng.randint(0, side - width + 1)
    top = rng.randint(0, side - height + 1)
    right = left + width
    bottom = top + height
    middle = top + height // 2
    bar = middle - thickness // 2

    boxes = {
        'a': (slice(top, top + thickness), slice(left, right)),
        'b': (slice(top, middle), slice(right - thickness, right)),
        'c': (slice(middle, bottom), slice(right - thickness, right)),
        'd': (slice(bottom - thickness, bottom), slice(left, right)),
        'e': (slice(middle, bottom), slice(left, left + thickness)),
        'f': (slice(top, middle), slice(left, left + thickness)),
        'g': (slice(bar, bar + thickness), slice(left, right)),
    }
    for segment in _DIGIT_SEGMENTS[digit]:
        image[boxes[segment]] = 1.0

    # Anti-aliased edges around strokes that stay saturated, as in MNIST.
    smoothed = scipy.ndimage.gaussian_filter(image, sigma=rng.uniform(0.3, 0.6) * thickness)
    smoothed /= max(smoothed.max(), 1e-12)
    return numpy.clip((smoothed - _INK_FLOOR) / (_INK_SATURATION - _INK_FLOOR), 0.0, 1.0)


def synthetic_digits(n_per_split, d, seed):
    # type: (SplitSizes, int, int) -> Dataset
    """Generate digit-like images when the MNIST files are not available.

    Every image is a seven-segment digit with a random size, position and stroke width. The
    strokes are smoothed with a Gaussian filter and contrast-stretched, so most pixels are 0 or
    1 with a gray rim, and the brightest pixel is 1.

    Args:
        n_per_split:
            Number of images per split, either one count for all splits or a
            ``(train, valid, test)`` triple.
        d:
            Number of pixels per image. Must be a perfect square.
        seed:
            Seed of the generator. The same seed always gives the same images.
    """

    side = _image_side(d)
    counts = _as_split_sizes(n_per_split)
    rng = numpy.random.RandomState(seed)

    splits = []
    for count in counts:
        digits = rng.randint(0, 10, size=count)
        images = numpy.empty((count, d))
        for i, digit in enumerate(digits):
            images[i] = _render_glyph(int(digit), side, rng).ravel()
        splits.append(images)
    return Dataset(*splits)


def salt_pepper(images, p, noise_stream):
    # type: (ndarray, float, numpy.random.RandomState) -> ndarray
    """Corrupt images with salt-and-pepper noise.

    Each pixel is independently replaced with probability ``p``, by ``0.0`` or ``1.0`` with
    equal probability. The stream is consumed in row-major order, one uniform draw per pixel
    for the corruption event followed by one per pixel for the color, regardless of ``p``.

    Args:
        images:
            Images with values in ``[0, 1]``.
        p:
            Corruption probability.
        noise_stream:
            Random state the noise is drawn from.

    Returns:
        A corrupted copy of ``images``.
    """

    if not 0.0 <= p <= 1.0:
        raise ValueError('Corruption probability must be in [0, 1] but got {}.'.format(p))

    images = numpy.asarray(images, dtype=numpy.float64)
    corrupted = noise_stream.random_sample(images.shape) < p
    white = noise_stream.random_sample(images.shape) < 0.5
    return numpy.where(corrupted, numpy.where(white, 1.0, 0.0), images)


def load_dataset(
        train_images=None,  # type: Optional[str]
        test_images=None,  # type: Optional[str]
        sample_counts=(1000, 500, 500),  # type: SplitSizes
        image_factor=2,  # type: int
        synthetic_seed=0,  # type: int
):
    # type: (...) -> Dataset
    """Load MNIST, or synthetic digits if no paths are given, and downsample it.

    Synthetic digits are generated directly at the downsampled resolution.
    """

    counts = _as_split_sizes(sample_counts)
    if train_images is None and test_images is None:
        if image_factor < 1 or 28 % image_factor != 0:
            raise ValueError('Downsampling factor {} does not divide 28.'.format(image_factor))
        d = (28 // image_factor) ** 2
        logger.info('Generating synthetic digits with {} pixels.'.format(d))
        return synthetic_digits(counts, d, synthetic_seed)
    if train_images is None or test_images is None:
        raise ValueError('Both the training and the test IDX files are needed.')

    logger.info('Loading MNIST from {} and {}.'.format(train_images, test_images))
    dataset = split_mnist(load_idx_images(train_images), load_idx_images(test_images))
    return downsample(dataset, counts, image_factor)

"""Logging of the ``hvmax`` package.

Every module logs through a child of the ``hvmax`` logger. That logger owns one colored stderr
handler, installed on first use, and does not propagate to the root logger unless asked to.
"""

from __future__ import absolute_import

import colorlog
import logging
from logging import CRITICAL  # NOQA
from logging import DEBUG  # NOQA
from logging import ERROR  # NOQA
from logging import INFO  # NOQA
from logging import WARNING  # NOQA
import threading

from hvmax import type_checking

if type_checking.TYPE_CHECKING:
    from typing import Optional  # NOQA
    from typing import Union  # NOQA

_ROOT_NAME = 'hvmax'
_FORMAT = '%(log_color)s[%(levelname)1.1s %(asctime)s]%(reset)s %(message)s'

_handler_lock = threading.Lock()
_handler = None  # type: Optional[logging.Handler]


def create_default_formatter():
    # type: () -> colorlog.ColoredFormatter
    """Create the formatter shared by the library handler and the CLI."""

    return colorlog.ColoredFormatter(_FORMAT)


def _root():
    # type: () -> logging.Logger

    return logging.getLogger(_ROOT_NAME)


def _install_handler():
    # type: () -> logging.Handler

    global _handler

    with _handler_lock:
        if _handler is None:
            _handler = logging.StreamHandler()
            _handler.setFormatter(create_default_formatter())
            root = _root()
            root.addHandler(_handler)
            root.setLevel(INFO)
            root.propagate = False
        return _handler


def _uninstall_handler():
    # type: () -> None

    global _handler

    with _handler_lock:
        if _handler is not None:
            root = _root()
            root.removeHandler(_handler)
            root.setLevel(logging.NOTSET)
            _handler = None


def get_logger(name):
    # type: (str) -> logging.Logger
    """Return the logger of a module.

    The first call installs the colored stderr handler on the ``hvmax`` logger.
    """

    _install_handler()
    return logging.getLogger(name)


def get_verbosity():
    # type: () -> int
    """Return the current level of the ``hvmax`` logger.

    Training logs one line per epoch at ``INFO`` and the shared Nadir value of every
    mini-batch at ``DEBUG``.
    """

    _install_handler()
    return _root().getEffectiveLevel()


def set_verbosity(verbosity):
    # type: (Union[int, str]) -> None
    """Set the level of the ``hvmax`` logger.

    Args:
        verbosity:
            Logging level such as ``hvmax.logging.DEBUG``, or its name such as ``'debug'``.
    """

    if isinstance(verbosity, str):
        level = logging.getLevelName(verbosity.upper())
        if not isinstance(level, int):
            raise ValueError('Unknown logging level {!r}.'.format(verbosity))
        verbosity = level

    _install_handler()
    _root().setLevel(verbosity)


def disable_default_handler():
    # type: () -> None
    """Detach the colored stderr handler from the ``hvmax`` logger.

    Example:

        Silence the per-epoch progress of a training run.

        .. code::

            >> hvmax.logging.disable_default_handler()
            >> record = hvmax.optim.run(config, dataset)
            >> hvmax.logging.enable_default_handler()
    """

    _root().removeHandler(_install_handler())


def enable_default_handler():
    # type: () -> None
    """Attach the colored stderr handler again after :func:`disable_default_handler`."""

    _root().addHandler(_install_handler())


def disable_propagation():
    # type: () -> None
    """Stop passing records to the root logger. This is the default."""

    _install_handler()
    _root().propagate = False


def enable_propagation():
    # type: () -> None
    """Pass records on to the root logger.

    Disable the default handler as well if the root logger has its own handlers, or every
    record is printed twice.

    Example:

        Keep the epoch log of an experiment in a file.

        .. code::

            >> logging.getLogger().setLevel(logging.INFO)
            >> logging.getLogger().addHandler(logging.FileHandler('train.log'))

            >> hvmax.logging.enable_propagation()
            >> hvmax.logging.disable_default_handler()
            >> hvmax.optim.run(config, dataset)
            >> open('train.log').readlines()
            ["[mean] epoch 1: train=...", ...
    """

    _install_handler()
    _root().propagate = True

"""Guard for imports that are only needed by ``mypy``.

Modules import annotation-only names under ``if type_checking.TYPE_CHECKING:`` so that
type comments can refer to them without creating import cycles at runtime.
"""

from typing import TYPE_CHECKING  # NOQA

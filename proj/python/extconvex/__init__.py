"""Convexity notions for functions of differential forms."""

from ._extconvex import *  # noqa: F401,F403
from ._extconvex import __doc__ as _doc

__doc__ = _doc

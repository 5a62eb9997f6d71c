"""Exact tropical hypersurfaces and curves, with a numeric amoeba-limit harness."""

from .amoeba import *  # noqa: F401,F403
from .curve import *  # noqa: F401,F403
from .errors import *  # noqa: F401,F403
from .geom_core import *  # noqa: F401,F403
from .hypersurface import *  # noqa: F401,F403
from .lp import LPResult, linprog_exact  # noqa: F401

__version__ = "0.1.0"

"""Hierarchies of tight geodesics realised in S x R-hat, and their model manifolds."""

from .errors import HierError
from .extreal import Interval, NEG_INF, POS_INF
from .surfaces import CatalogSystem, FareySphere, FareyTorus, Slope, Surface, system_from_name
from .hierarchy import build_hierarchy

__version__ = "0.1.0"

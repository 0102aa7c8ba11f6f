"""Character counting for the relative McKay condition in split finite reductive groups.

The Borel side (:mod:`relmckay.borel`) is a closed formula built on exact
lattice algebra (:mod:`relmckay.lattice`); the group side is an exact
character table of an explicit matrix group (:mod:`relmckay.matgrp`,
:mod:`relmckay.chartab`). :mod:`relmckay.mckay` compares the two.
"""

from .rootdata import build_root_datum
from .twist import SplitFrobenius

__version__ = "0.1.0"

__all__ = ["SplitFrobenius", "build_root_datum", "__version__"]

"""Linear deterministic models of wireless relay networks.

Exact GF(2) min-cut capacity of deterministic networks, and constant-gap
comparisons of deterministic-model-inspired schemes with cut-set bounds for
the Gaussian relay channel and diamond network.
"""

from detrelay.detnet import DetNetwork, min_cut_capacity
from detrelay.gf2 import BitMatrix, rank

__version__ = "0.1.0"

__all__ = ["BitMatrix", "DetNetwork", "min_cut_capacity", "rank"]

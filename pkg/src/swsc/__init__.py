"""Rate regions and sliding-window superposition coding for two-user interference channels."""

from ._accel import NUMBA_ENABLED
from .channels import (Constellation, DiscreteChannel, DiscreteIC, GaussianIC, QuadratureIC, SymbolMap,
                       load_channel, load_corpus, map_by_name)
from .mi import mi, mutual_info, mutual_info_mc
from .splits import LayerSplit, SenderSplit, cascade_split, erasure_split, map_split

__version__ = "0.1.0"

__all__ = [
    "NUMBA_ENABLED", "Constellation", "DiscreteChannel", "DiscreteIC", "GaussianIC", "LayerSplit", "QuadratureIC",
    "SenderSplit", "SymbolMap", "cascade_split", "erasure_split", "load_channel", "load_corpus", "map_by_name",
    "map_split", "mi", "mutual_info", "mutual_info_mc",
]

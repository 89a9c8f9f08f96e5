"""Achievable rate regions of interference-channel coding schemes."""

from .basic import region_ian, region_mix, region_scd, region_sd, region_snd, region_snd_decomposed, snd_corner
from .fm import Constraint, Expr, InfeasibleRegionError, fm_eliminate, fm_project, fm_symbolic, le
from .geometry import EmptyRegionError, HalfPlane, RateRegion2, RateRegion4
from .orders import (DecodingOrder, InfeasibleOrderError, LayerOrder, OrderSyntaxError, Stream,
                     alternating_decoding_orders, alternating_layer_orders, parse_orders, split_streams,
                     three_one_orders)
from .hk import hk_coverage, hk_layer_order, mac3_order_rates, region_hk, region_hk_union, region_mac3
from .rate_splitting import region_rate_splitting, rs_gap_demo
from .swsc import layer_order_rates, region_swsc, region_swsc_alternating, region_swsc_union

__all__ = [
    "Constraint", "DecodingOrder", "EmptyRegionError", "Expr", "HalfPlane", "InfeasibleOrderError",
    "InfeasibleRegionError", "LayerOrder", "OrderSyntaxError", "RateRegion2", "RateRegion4", "Stream",
    "alternating_decoding_orders", "alternating_layer_orders", "fm_eliminate", "fm_project", "fm_symbolic",
    "hk_coverage", "hk_layer_order", "mac3_order_rates", "region_hk", "region_hk_union", "region_mac3",
    "region_rate_splitting", "rs_gap_demo",
    "layer_order_rates", "le", "parse_orders", "region_ian", "region_mix", "region_scd", "region_sd",
    "region_snd", "region_snd_decomposed", "region_swsc", "region_swsc_alternating", "region_swsc_union",
    "snd_corner", "split_streams", "three_one_orders",
]

"""Link-level simulation of sliding-window superposition coding."""

from .code import ConvCode, MessageCodec, RateMatcher, RateMatchError
from .curve import CurvePoint, ian_rate, snd_rate, sweep_curve, swcm_rate
from .demap import SuperpositionModel, gaussian_equivalent
from .link import BlerReport, ConfigError, Link, SimConfig, auto_orders, run_ian_baseline, simulate
from .schedule import BlockSchedule

__all__ = [
    "BlerReport", "BlockSchedule", "ConfigError", "ConvCode", "CurvePoint", "Link", "MessageCodec", "RateMatchError",
    "RateMatcher", "SimConfig", "SuperpositionModel", "auto_orders", "gaussian_equivalent", "ian_rate",
    "run_ian_baseline", "simulate", "snd_rate", "sweep_curve", "swcm_rate",
]

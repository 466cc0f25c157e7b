"""Exact, certificate-producing constructions around generalized Hausdorff measures."""

from .balanced_cantor import (LevelSystem, NaturalMeasure, auto_schedule, build_system,
                              natural_gauge, regular_system)
from .convolve import DiscreteMeasure, pigeonhole_translates, pushforward_sum
from .digit_groups import BaseSystem, DigitSetSpec, DigitVector, greedy_sidon, rigidity_check
from .exactcore import Certificate, InputError, Interval, IntervalFamily, OpenSetModel
from .gauge import Gauge, eval_gauge, pointwise_min
from .hausdorff_bounds import (box_counting, canonical_upper_bound, mass_distribution_check,
                               net_measure_dp)
from .incomparable import (NullCover, assemble_partition, schedule_scales, split_cover,
                           verify_null)

__version__ = "0.1.0"

__all__ = [
    "BaseSystem", "Certificate", "DigitSetSpec", "DigitVector", "DiscreteMeasure", "Gauge",
    "InputError", "Interval", "IntervalFamily", "LevelSystem", "NaturalMeasure", "NullCover",
    "OpenSetModel", "assemble_partition", "auto_schedule", "box_counting", "build_system",
    "canonical_upper_bound", "eval_gauge", "greedy_sidon", "mass_distribution_check",
    "natural_gauge", "net_measure_dp", "pigeonhole_translates", "pointwise_min",
    "pushforward_sum", "regular_system", "rigidity_check", "schedule_scales", "split_cover",
    "verify_null",
]

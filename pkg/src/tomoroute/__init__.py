"""Minimum-cost ordering of tomography measurement settings."""

from .analysis import SpeedupReport, speedup, transition_table
from .costmodel import (
    CostMatrix,
    HeaterModel,
    MountModel,
    cycle_cost,
    heat_matrix,
    max_angle_matrix,
    to_temporal,
)
from .errors import (
    InvalidArgumentError,
    PrecisionError,
    SizeLimitError,
    TomorouteError,
    TsplibParseError,
    UnsupportedFormatError,
)
from .settings import (
    MeasurementSetting,
    SettingsSet,
    path_encoded_settings,
    product_settings,
    random_settings,
    six_state_settings,
    three_base_settings,
)
from .solver import (
    Budget,
    SolveResult,
    Tour,
    nest_tours,
    solve,
    solve_brute_force,
    solve_held_karp,
    solve_heuristic,
)

__version__ = "0.1.0"

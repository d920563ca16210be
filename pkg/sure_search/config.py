"""
Solver tolerances and knobs shared by every module.
"""

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class SearchConfig:
    """Numerical configuration for planning and verification"""
    # spectral decomposition refused below this rotation angle
    degenerate_w: float = 1e-12
    # count-formula denominators below this raise DegenerateAngle
    degenerate_angle: float = 1e-14
    # arcsin/arccos arguments this far outside [-1, 1] are clipped
    clip_slack: float = 1e-12
    # |f - round(f)| below this snaps to the integer
    snap_tolerance: float = 1e-9
    # theta_op bracket grows from pi - bracket_start, doubling, down to bracket_floor
    bracket_start: float = 1e-3
    bracket_floor: float = 0.01
    theta_xtol: float = 1e-13
    t_xtol: float = 1e-13
    bisect_maxiter: int = 400
    residual_tolerance: float = 1e-10
    success_tolerance: float = 1e-9
    beta_match_tolerance: float = 1e-12
    max_items: int = 2 ** 20
    log_progress: bool = False


DEFAULT_CONFIG = SearchConfig()


def resolve(config: Optional[SearchConfig]) -> SearchConfig:
    return DEFAULT_CONFIG if config is None else config

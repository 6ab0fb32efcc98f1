"""Closed-form movement-time models for clutched position control and
hybrid position/rate control.

Both models split a pointing task of display distance D and target
width W into phases.  Position control with a bounded device range
clutches: each engagement covers an effective display distance
d_e = c*d*CD, every clutch costs a fixed repositioning time, and the
final engagement is a Fitts-law aimed movement over the residual
distance.  The hybrid device instead crosses into the elastic band
once (one clutch-equivalent cost) and covers everything beyond the
isotonic reach CD*d under rate control, modelled as a Fitts-law
movement with elastic-device coefficients.

Fitts' law here is the Shannon form ID = log2(D/W + 1).  The ``b``
coefficient can be read either as a slope (s/bit, T = a + b*ID) or as
a throughput (bit/s, T = a + ID/b); throughput is the default.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .transfer import ConfigError


class FittsForm(enum.Enum):
    """How the b coefficient of a Fitts pair is interpreted."""

    SLOPE_S_PER_BIT = "slope"
    THROUGHPUT_BPS = "throughput"


class ClutchStrategy(enum.Enum):
    """How the clutch count follows from the engagement count.

    CEIL_MINUS_ONE: N = ceil(D/d_e) - 1 (a final partial engagement
    needs no further clutch).  FLOOR: N = floor(D/d_e), which differs
    only when D is an exact multiple of d_e.
    """

    CEIL_MINUS_ONE = "ceil-minus-one"
    FLOOR = "floor"


@dataclass(frozen=True)
class FittsCoefficients:
    a: float                          # [s] intercept
    b: float                          # [s/bit] or [bit/s], see form
    form: FittsForm = FittsForm.THROUGHPUT_BPS


@dataclass(frozen=True)
class DeviceProfile:
    """Physical description of a device/display pair."""

    name: str
    operating_range: float            # [mm] usable device travel d
    cd_gain: float                    # baseline constant CD gain
    display_width: float              # [mm]
    display_height: float             # [mm]

    @property
    def display_diagonal(self) -> float:
        return math.hypot(self.display_width, self.display_height)


# 15" 4:3 laptop panel and a 4" 4:3 handheld screen
PRESETS = {
    "laptop": DeviceProfile("laptop", operating_range=40.0, cd_gain=2.0,
                            display_width=304.8, display_height=228.6),
    "pda": DeviceProfile("pda", operating_range=10.0, cd_gain=2.0,
                         display_width=81.3, display_height=61.0),
}


@dataclass(frozen=True)
class ModelParams:
    """Inputs shared by both movement-time models."""

    operating_range: float = 40.0     # [mm] device travel d
    cd_gain: float = 2.0              # CD
    utilization: float = 0.75         # c, fraction of d used per engagement
    clutch_time: float = 0.2          # [s] T_c, one reposition
    fitts_isotonic: FittsCoefficients = field(
        default_factory=lambda: FittsCoefficients(0.0, 4.5))
    fitts_elastic: FittsCoefficients = field(
        default_factory=lambda: FittsCoefficients(0.0, 2.0))
    clutch_strategy: ClutchStrategy = ClutchStrategy.CEIL_MINUS_ONE

    def __post_init__(self):
        if self.operating_range <= 0.0 or self.cd_gain <= 0.0:
            raise ConfigError("operating range and CD gain must be positive")
        if not 0.0 < self.utilization <= 1.0:
            raise ConfigError("utilization must be in (0, 1]")
        if self.clutch_time < 0.0:
            raise ConfigError("clutch time must be non-negative")

    @property
    def effective_engagement_distance(self) -> float:
        """Display distance d_e covered by one full engagement."""
        return self.utilization * self.operating_range * self.cd_gain

    @property
    def isotonic_reach(self) -> float:
        """Display distance CD*d reachable without leaving position control."""
        return self.cd_gain * self.operating_range

    @classmethod
    def for_profile(cls, profile: DeviceProfile, **overrides) -> "ModelParams":
        return cls(operating_range=profile.operating_range,
                   cd_gain=profile.cd_gain, **overrides)


@dataclass(frozen=True)
class Prediction:
    """Movement-time prediction split into its phases."""

    total: float                      # [s]
    first_phase: float                # [s] clutching overhead, or ballistic phase
    second_phase: float               # [s] aimed-movement phase
    clutches: int                     # repositioning count N
    residual_distance: float          # [mm] distance left to the aimed phase


def index_of_difficulty(distance: float, width: float) -> float:
    """Shannon-form Fitts index of difficulty, bits."""
    if distance <= 0.0 or width <= 0.0:
        raise ValueError("distance and width must be positive")
    return math.log2(distance / width + 1.0)


def fitts_time(distance: float, width: float, coeffs: FittsCoefficients) -> float:
    """Movement time for one aimed movement under the given coefficients."""
    ident = index_of_difficulty(distance, width)
    if coeffs.form is FittsForm.SLOPE_S_PER_BIT:
        return coeffs.a + coeffs.b * ident
    if coeffs.b <= 0.0:
        raise ConfigError("throughput must be positive")
    return coeffs.a + ident / coeffs.b


def invocations(distance: float, params: ModelParams) -> int:
    """Number of device engagements needed to cover a display distance."""
    if distance <= 0.0:
        raise ValueError("distance must be positive")
    return math.ceil(distance / params.effective_engagement_distance)


def _clutch_count(distance: float, params: ModelParams) -> int:
    d_e = params.effective_engagement_distance
    if params.clutch_strategy is ClutchStrategy.FLOOR:
        return math.floor(distance / d_e)
    return invocations(distance, params) - 1


def clutching_time(distance: float, width: float, params: ModelParams) -> Prediction:
    """Predicted time for clutched position control.

    N clutches each cost 2*T_c (move off, move back); the residual
    distance after the full engagements is an aimed movement with the
    isotonic coefficients.
    """
    if width <= 0.0:
        raise ValueError("width must be positive")
    n = _clutch_count(distance, params)
    d_e = params.effective_engagement_distance
    residual = distance - n * d_e
    t1 = 2.0 * n * params.clutch_time
    t2 = fitts_time(residual, width, params.fitts_isotonic) if residual > 0.0 else 0.0
    return Prediction(t1 + t2, t1, t2, n, residual)


def hybrid_time(distance: float, width: float, params: ModelParams) -> Prediction:
    """Predicted time for the hybrid position/rate device.

    Within the isotonic reach CD*d the task is a single aimed movement
    (no rate phase).  Beyond it, one clutch-equivalent cost covers the
    mode change and the remaining distance is an aimed movement with
    the elastic coefficients.
    """
    if width <= 0.0:
        raise ValueError("width must be positive")
    reach = params.isotonic_reach
    if distance <= reach:
        t = fitts_time(distance, width, params.fitts_isotonic)
        return Prediction(t, t, 0.0, 0, 0.0)
    residual = distance - reach
    t2 = fitts_time(residual, width, params.fitts_elastic)
    return Prediction(params.clutch_time + t2, params.clutch_time, t2, 0, residual)


def hybrid_discontinuity(width: float, params: ModelParams) -> float:
    """Model gap at D = CD*d, where the hybrid branches meet.

    The isotonic branch ends at the full Fitts time for the reach
    distance while the elastic branch starts at T_c + a_e; the model is
    discontinuous there and the gap is reported rather than hidden.
    """
    reach = params.isotonic_reach
    iso_end = fitts_time(reach, width, params.fitts_isotonic)
    elastic_start = params.clutch_time + params.fitts_elastic.a
    return iso_end - elastic_start


def crossover_distance(
    width: float,
    params: ModelParams,
    max_distance: float,
    step: float = 1.0,
) -> float | None:
    """Smallest distance beyond which the hybrid model always wins.

    Scans D over (0, max_distance] at the given resolution and returns
    the smallest scanned D such that hybrid_time < clutching_time for
    it and every larger scanned D.  Returns None if the hybrid never
    dominates through the end of the range.
    """
    if max_distance <= 0.0 or step <= 0.0:
        raise ValueError("scan range and step must be positive")
    n = int(max_distance / step)
    crossover = None
    for i in range(n, 0, -1):
        d = i * step
        if hybrid_time(d, width, params).total < clutching_time(d, width, params).total:
            crossover = d
        else:
            break
    return crossover


def effective_width(endpoints) -> float:
    """Effective target width from selection endpoints.

    4.133 times the sample standard deviation of the signed deviations
    from the target centre (the spread covering 96% of hits).
    """
    x = np.asarray(endpoints, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("need at least two scalar endpoint deviations")
    return 4.133 * float(np.std(x, ddof=1))


@dataclass(frozen=True)
class RegressionResult:
    a: float                          # [s] intercept
    b: float                          # [s/bit] slope
    r_squared: float


def fitts_regression(ids, times) -> RegressionResult:
    """Least-squares fit of movement time against index of difficulty."""
    x = np.asarray(ids, dtype=float)
    y = np.asarray(times, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size < 2:
        raise ValueError("need matching 1-d arrays of at least two observations")
    if np.ptp(x) == 0.0:
        raise ValueError("index of difficulty must vary across observations")
    from scipy import stats

    fit = stats.linregress(x, y)
    return RegressionResult(float(fit.intercept), float(fit.slope),
                            float(fit.rvalue) ** 2)


def sweep(
    widths,
    params: ModelParams,
    max_distance: float,
    step: float = 1.0,
):
    """Model predictions over a distance grid for both techniques.

    Yields (distance, width, technique, prediction) rows, the raw
    material of the model CSV export.
    """
    n = int(max_distance / step)
    for w in widths:
        for i in range(1, n + 1):
            d = i * step
            yield d, w, "position", clutching_time(d, w, params)
            yield d, w, "hybrid", hybrid_time(d, w, params)

"""
BTZ background geometry.

Horizons, lapse, angular shift and the tortoise coordinate of the rotating
BTZ metric

    ds^2 = -N^2 dt^2 + dr^2 / N^2 + r^2 (N_phi dt + dphi)^2,
    N^2 = -M + r^2/l^2 + J^2/(4 r^2),      N_phi = -J / (2 r^2).

All quantities keep explicit (M, J, l) units; nothing is normalised to l = 1.

Functions accept scalars or numpy arrays for the radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Union

import numpy as np
from scipy.optimize import brentq

from .errors import BracketError, DomainError, InvalidParameters, NoHorizon

ArrayLike = Union[float, np.ndarray]

#: |J| >= M l (1 - EXTREMAL_RTOL) is treated as extremal.
EXTREMAL_RTOL = 1e-12
#: default outer cap of the tortoise inversion bracket, in units of r_+.
DEFAULT_R_CAP = 1e6


@dataclass(frozen=True)
class HorizonData:
    r_plus: float
    r_minus: float
    extremal: bool

    @property
    def branch(self) -> str:
        """Name of the tortoise branch used for these horizons."""
        return "extremal" if self.extremal else "non-extremal"


@dataclass(frozen=True)
class BTZParams:
    """Black-hole triple (M, J, l).

    Construction fails with :class:`NoHorizon` when |J| > M l; values within
    a relative EXTREMAL_RTOL above M l (rounding of J = M l) count as extremal.
    """

    M: float
    J: float
    l: float

    def __post_init__(self):
        for name in ("M", "J", "l"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidParameters(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.M <= 0:
            raise InvalidParameters(f"M must be positive, got {self.M}")
        if self.l <= 0:
            raise InvalidParameters(f"l must be positive, got {self.l}")
        if abs(self.J) > self.M * self.l * (1.0 + EXTREMAL_RTOL):
            raise NoHorizon(
                f"J^2 > M^2 l^2 (M={self.M}, J={self.J}, l={self.l}): no horizon"
            )

    @cached_property
    def horizons(self) -> HorizonData:
        return horizon_radii(self)

    @property
    def r_plus(self) -> float:
        return self.horizons.r_plus

    @property
    def r_minus(self) -> float:
        return self.horizons.r_minus

    @property
    def extremal(self) -> bool:
        return self.horizons.extremal

    @property
    def surface_gravity(self) -> float:
        """(r_+^2 - r_-^2) / (l^2 r_+); zero in the extremal case.

        Near a non-extremal horizon N^2 ~ 2 kappa (r - r_+), so the tortoise
        coordinate grows like -ln(r - r_+) / (2 kappa).
        """
        h = self.horizons
        if h.extremal:
            return 0.0
        return _horizon_gap_sq(self) / (self.l**2 * h.r_plus)


def _extremality_defect(p: BTZParams) -> float:
    """1 - |J|/(M l), clipped at zero."""
    return max(0.0, 1.0 - abs(p.J) / (p.M * p.l))


def _horizon_gap_sq(p: BTZParams) -> float:
    # r_+^2 - r_-^2 = M l^2 sqrt(1 - a^2); (1-a)(1+a) keeps digits near a = 1
    a = abs(p.J) / (p.M * p.l)
    return p.M * p.l**2 * math.sqrt(max(0.0, (1.0 - a) * (1.0 + a)))


def horizon_radii(p: BTZParams) -> HorizonData:
    """Outer and inner horizon radii.

    r_+^2 = (M l^2 / 2)(1 + sqrt(1 - J^2/(M^2 l^2))); the inner radius comes
    from r_+ r_- = |J| l / 2, which avoids the cancellation of the minus
    branch of the closed form.
    """
    if _extremality_defect(p) <= EXTREMAL_RTOL:
        r = p.l * math.sqrt(p.M / 2.0)
        return HorizonData(r_plus=r, r_minus=r, extremal=True)
    a = abs(p.J) / (p.M * p.l)
    root = math.sqrt((1.0 - a) * (1.0 + a))
    r_plus = p.l * math.sqrt(0.5 * p.M * (1.0 + root))
    r_minus = abs(p.J) * p.l / (2.0 * r_plus)
    return HorizonData(r_plus=r_plus, r_minus=r_minus, extremal=False)


def lapse_sq(p: BTZParams, r: ArrayLike) -> ArrayLike:
    """N^2 = -M + r^2/l^2 + J^2/(4 r^2). Negative between the horizons."""
    r = np.asarray(r, dtype=float) if not np.isscalar(r) else float(r)
    if np.any(np.asarray(r) <= 0):
        raise DomainError("lapse_sq requires r > 0")
    return -p.M + r * r / p.l**2 + p.J**2 / (4.0 * r * r)


def lapse_sq_offset(p: BTZParams, u: ArrayLike) -> ArrayLike:
    """N^2 at r = r_+ + u in factored form.

    N^2 = (r^2 - r_+^2)(r^2 - r_-^2) / (l^2 r^2) with r^2 - r_+^2 = u (2 r_+ + u)
    keeps full relative precision for u << r_+.
    """
    h = p.horizons
    u = np.asarray(u, dtype=float)
    r = h.r_plus + u
    out = u * (2.0 * h.r_plus + u) * (r - h.r_minus) * (r + h.r_minus) / (p.l**2 * r * r)
    return out if out.ndim else float(out)


def lapse_sq_exterior(p: BTZParams, r: ArrayLike) -> ArrayLike:
    """N^2 for r >= r_+ from the factored form (r^2 - r_+^2)(r^2 - r_-^2)/(l^2 r^2).

    Agrees with :func:`lapse_sq` but keeps its relative precision as r -> r_+.
    """
    h = p.horizons
    r = np.asarray(r, dtype=float)
    out = (r - h.r_plus) * (r + h.r_plus) * (r - h.r_minus) * (r + h.r_minus) / (p.l**2 * r * r)
    return out if out.ndim else float(out)


def lapse(p: BTZParams, r: ArrayLike) -> ArrayLike:
    """N = sqrt(N^2) on the exterior; requires r >= r_+."""
    n2 = lapse_sq_exterior(p, r)
    return np.sqrt(np.maximum(n2, 0.0))


def lapse_derivative(p: BTZParams, r: ArrayLike) -> ArrayLike:
    """dN/dr = (2r/l^2 - J^2/(2 r^3)) / (2N) for r > r_+."""
    r = np.asarray(r, dtype=float)
    out = (2.0 * r / p.l**2 - p.J**2 / (2.0 * r**3)) / (2.0 * lapse(p, r))
    return out if out.ndim else float(out)


def angular_shift(p: BTZParams, r: ArrayLike) -> ArrayLike:
    """N_phi = -J / (2 r^2)."""
    r = np.asarray(r, dtype=float)
    out = -p.J / (2.0 * r * r) + 0.0  # no negative zero for J = 0
    return out if out.ndim else float(out)


def angular_shift_derivative(p: BTZParams, r: ArrayLike) -> ArrayLike:
    """dN_phi/dr = J / r^3."""
    r = np.asarray(r, dtype=float)
    out = p.J / r**3
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Tortoise coordinate
# ---------------------------------------------------------------------------

def _check_exterior(p: BTZParams, r: np.ndarray) -> None:
    if np.any(~(r > p.r_plus)):
        raise DomainError(f"tortoise coordinate needs r > r_+ = {p.r_plus!r}")


def _log_ratio(r: np.ndarray, a: float) -> np.ndarray:
    # ln((r - a)/(r + a)): log1p form far out, direct ratio near r = a
    near = r < 3.0 * a
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.log((r - a) / (r + a))
    return np.where(near, direct, np.log1p(-2.0 * a / (r + a)))


def tortoise(p: BTZParams, r: ArrayLike) -> ArrayLike:
    """Tortoise coordinate y(r) with dy/dr = -1/N^2.

    The integration constant is zero, so y maps (r_+, inf) onto (0, inf)
    with y -> +inf at the horizon.

    Non-extremal:
        y = l^2 / (2(r_+^2 - r_-^2)) [ -r_+ ln((r-r_+)/(r+r_+))
                                       + r_- ln((r-r_-)/(r+r_-)) ]
    Extremal:
        y = -l^2/(4 r_+) ln((r-r_+)/(r+r_+)) + l^2/4 (1/(r+r_+) + 1/(r-r_+))
    """
    r_arr = np.asarray(r, dtype=float)
    _check_exterior(p, r_arr)
    h = p.horizons
    rp, rm = h.r_plus, h.r_minus
    if h.extremal:
        y = (-p.l**2 / (4.0 * rp)) * _log_ratio(r_arr, rp) + 0.25 * p.l**2 * (
            1.0 / (r_arr + rp) + 1.0 / (r_arr - rp)
        )
    else:
        pref = p.l**2 / (2.0 * _horizon_gap_sq(p))
        y = pref * (-rp * _log_ratio(r_arr, rp) + rm * _log_ratio(r_arr, rm))
    return y if y.ndim else float(y)


def tortoise_log_offset(p: BTZParams, s: ArrayLike) -> ArrayLike:
    """Tortoise coordinate at r = r_+ + exp(s).

    Working with s = ln(r - r_+) lets near-horizon code reach offsets far
    below the resolution of r itself (y ~ -s / (2 kappa) stays finite even
    when exp(s) underflows).
    """
    s = np.asarray(s, dtype=float)
    h = p.horizons
    rp, rm = h.r_plus, h.r_minus
    u = np.exp(s)
    log_plus = s - np.log(2.0 * rp + u)
    if h.extremal:
        with np.errstate(over="ignore"):
            inv_u = np.exp(-s)
        y = (-p.l**2 / (4.0 * rp)) * log_plus + 0.25 * p.l**2 * (1.0 / (2.0 * rp + u) + inv_u)
    else:
        pref = p.l**2 / (2.0 * _horizon_gap_sq(p))
        log_minus = np.log((rp - rm + u) / (rp + rm + u))
        y = pref * (-rp * log_plus + rm * log_minus)
    return y if y.ndim else float(y)


def tortoise_derivative(p: BTZParams, r: ArrayLike) -> ArrayLike:
    """dy/dr = -1/N^2."""
    return -1.0 / lapse_sq(p, r)


def _solve_log_offset(p: BTZParams, y: float, s_lo: float, s_hi: float) -> float:
    f_lo = tortoise_log_offset(p, s_lo) - y
    f_hi = tortoise_log_offset(p, s_hi) - y
    if not (f_lo > 0 > f_hi):
        raise BracketError(
            f"no sign change for y={y!r} on r - r_+ in "
            f"({math.exp(s_lo)!r}, {math.exp(s_hi)!r})"
        )
    return brentq(
        lambda s: tortoise_log_offset(p, s) - y,
        s_lo,
        s_hi,
        xtol=1e-15,
        rtol=4 * np.finfo(float).eps,
        maxiter=500,
    )


def tortoise_inverse_log_offset(
    p: BTZParams, y: float, s_min: float = -700.0, r_cap: float = DEFAULT_R_CAP
) -> float:
    """Solve y(r_+ + exp(s)) = y for s = ln(r - r_+)."""
    s_hi = math.log(p.r_plus * (r_cap - 1.0))
    return _solve_log_offset(p, float(y), s_min, s_hi)


def tortoise_inverse(
    p: BTZParams,
    y: float,
    r_cap: float = DEFAULT_R_CAP,
    eps: float = 1e-15,
) -> float:
    """Radius r > r_+ with tortoise(p, r) = y.

    The bracket is r in (r_+(1 + eps), r_+ r_cap); :class:`BracketError` is
    raised when y falls outside its image.
    """
    if not math.isfinite(y):
        raise BracketError(f"y must be finite, got {y!r}")
    rp = p.r_plus
    s_lo = math.log(rp * eps)
    s_hi = math.log(rp * (r_cap - 1.0))
    s = _solve_log_offset(p, float(y), s_lo, s_hi)
    return rp + math.exp(s)


def radial_grid(
    p: BTZParams,
    r_max: float,
    points: int = 1000,
    offset: float = 1e-8,
    log: bool = True,
) -> np.ndarray:
    """Grid on (r_+(1 + offset), r_max].

    With ``log=True`` the points are logarithmic in r - r_+, concentrating
    resolution at the horizon.
    """
    rp = p.r_plus
    if points < 2:
        raise InvalidParameters("a grid needs at least two points")
    if offset <= 0:
        raise InvalidParameters("grid offset must be positive")
    if not r_max > rp * (1.0 + offset):
        raise DomainError(f"r_max={r_max!r} must exceed r_+(1 + offset)")
    if log:
        u = np.geomspace(rp * offset, r_max - rp, points)
        return rp + u
    return np.linspace(rp * (1.0 + offset), r_max, points)

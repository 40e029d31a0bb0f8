"""
Level-crossing scans: the potential curves lambda_+/- against their common
horizon value phi_+ = J k / (2 r_+^2) and against the analytic bounds G+/-.

Positive-energy states live above lambda_+, negative-energy states below
lambda_-. A level crossing (and with it spontaneous pair creation) would need
some radius where lambda_+ dips below the horizon value of lambda_-, or
lambda_- rises above it. The bounds

    G+ = |k|/l - (|k| / (2 r^2)) (-sign(k) J + 2 r_+^2 / l)
    G- = -|k|/l + (|k| / (2 r^2)) (sign(k) J + 2 r_+^2 / l)

satisfy G+(r_+) = G-(r_+) = phi_+, are monotone away from the horizon and
bracket the potentials: lambda_+ >= G+ and lambda_- <= G-. Both gaps equal

    (N / r) S(r) - |k| (r^2 - r_+^2) / (l r^2),

with S = sqrt((J/(4r) + mu r)^2 + k^2) for Dirac and sqrt(mu^2 r^2 + k^2)
for Klein-Gordon, which is how the scan evaluates them (in u = r - r_+, so
nothing cancels near the horizon).

The scans sample a grid; they provide evidence, not proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .dirac_radial import ModeParams, potential_eigenvalues
from .errors import DomainError, InvalidParameters, NotExtremal, ZeroK
from .geometry import ArrayLike, BTZParams, lapse_sq_offset
from .klein_gordon import kg_eigenvalues

NO_CROSSING = "no_crossing"
CROSSING_CANDIDATE = "crossing_candidate"

BC_DEPENDENT_NOTE = "bc-dependent, inconclusive"
ZERO_MASS_NOTE = "zero mass: outside the mu != 0 regime of the Klein-Gordon argument"
ZERO_K_NOTE = "k = 0: bounds skipped, separation of lambda_+/- checked directly"

#: relative slack for a bound violation, to absorb rounding in the gap
BOUND_RTOL = 1e-12


@dataclass(frozen=True)
class GridOptions:
    """Log grid in r - r_+ over (r_+(1 + offset), r_max]; r_max defaults to 10^3 r_+."""

    points: int = 1000
    offset: float = 1e-8
    r_max: Optional[float] = None
    log: bool = True

    def __post_init__(self):
        if int(self.points) != self.points or self.points < 2:
            raise InvalidParameters("grid needs an integer number of points >= 2")
        if not (self.offset > 0 and math.isfinite(self.offset)):
            raise InvalidParameters("grid offset must be positive and finite")
        if self.r_max is not None and not (self.r_max > 0 and math.isfinite(self.r_max)):
            raise InvalidParameters("r_max must be positive and finite")

    def outer_radius(self, p: BTZParams) -> float:
        return 1e3 * p.r_plus if self.r_max is None else float(self.r_max)

    def offsets(self, p: BTZParams) -> np.ndarray:
        """u = r - r_+ at the grid points."""
        rp = p.r_plus
        r_max = self.outer_radius(p)
        u_lo, u_hi = rp * self.offset, r_max - rp
        if not u_hi > u_lo:
            raise DomainError(f"r_max={r_max!r} must exceed r_+(1 + offset)")
        if self.log:
            return np.geomspace(u_lo, u_hi, int(self.points))
        return np.linspace(u_lo, u_hi, int(self.points))


@dataclass(frozen=True)
class CrossingReport:
    grid: np.ndarray
    lambda_plus: np.ndarray
    lambda_minus: np.ndarray
    phi_plus: float
    g_plus: np.ndarray
    g_minus: np.ndarray
    min_upper_margin: float
    max_lower_margin: float
    bound_violations: int
    verdict: str
    field_name: str = "dirac"
    regime_note: str = ""
    extras: Dict[str, float] = field(default_factory=dict)

    @property
    def no_crossing(self) -> bool:
        return self.verdict == NO_CROSSING

    def rows(self):
        """(r, lambda_-, G-, phi_+, G+, lambda_+) per grid point."""
        phi = np.full_like(self.grid, self.phi_plus)
        return np.column_stack(
            [self.grid, self.lambda_minus, self.g_minus, phi, self.g_plus, self.lambda_plus]
        )


@dataclass(frozen=True)
class ExtremalTouchPoint:
    r_star: Optional[float]
    inside_domain: bool
    regime_note: str


def phi_plus(p: BTZParams, k: int) -> float:
    """Common horizon limit J k / (2 r_+^2) of lambda_+ and lambda_-."""
    return p.J * k / (2.0 * p.r_plus**2)


def bound_constant(p: BTZParams, k: int) -> float:
    """-sign(k) J + 2 r_+^2 / l, the constant in G+ (positive off extremality)."""
    return -float(np.sign(k)) * p.J + 2.0 * p.r_plus**2 / p.l


def crossing_bounds(p: BTZParams, m: ModeParams, r: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """(G-, G+) at r. Both are |k|-scaled, so k = 0 is rejected."""
    if m.k == 0:
        raise ZeroK("bounds G+/- degenerate for k = 0")
    r = np.asarray(r, dtype=float)
    if np.any(~(r > p.r_plus)):
        raise DomainError("crossing bounds need r > r_+")
    ak, sk = abs(m.k), float(np.sign(m.k))
    rp2l = 2.0 * p.r_plus**2 / p.l
    g_plus = ak / p.l - ak / (2.0 * r * r) * (-sk * p.J + rp2l)
    g_minus = -ak / p.l + ak / (2.0 * r * r) * (sk * p.J + rp2l)
    if g_plus.ndim == 0:
        return float(g_minus), float(g_plus)
    return g_minus, g_plus


def _scan(p, m, grid_opts, field_name, spin):
    opts = grid_opts or GridOptions()
    h = p.horizons
    rp = h.r_plus
    u = opts.offsets(p)
    r = rp + u
    n = np.sqrt(lapse_sq_offset(p, u))
    if spin:
        s = np.sqrt((p.J / (4.0 * r) + m.mu * r) ** 2 + m.k**2)
        lam_minus, lam_plus = potential_eigenvalues(p, m, r)
    else:
        s = np.sqrt((m.mu * r) ** 2 + m.k**2)
        lam_minus, lam_plus = kg_eigenvalues(p, m, r)
    half = n / r * s
    phi = phi_plus(p, m.k)
    # J k / (2 r^2) - phi_+ = -J k u (2 r_+ + u) / (2 r^2 r_+^2)
    center_shift = -p.J * m.k * u * (2.0 * rp + u) / (2.0 * r * r * rp * rp)
    upper = center_shift + half
    lower = center_shift - half

    notes = []
    if m.k == 0:
        g_minus = np.full_like(r, np.nan)
        g_plus = np.full_like(r, np.nan)
        violations = 0
        notes.append(ZERO_K_NOTE)
    else:
        g_minus, g_plus = crossing_bounds(p, m, r)
        gap = half - abs(m.k) * u * (2.0 * rp + u) / (p.l * r * r)
        violations = int(np.count_nonzero(gap < -BOUND_RTOL * half))
    min_upper = float(np.min(upper))
    max_lower = float(np.max(lower))
    ok = min_upper > 0 and max_lower < 0 and violations == 0
    if spin and m.mu * p.l < 0.5:
        notes.append(BC_DEPENDENT_NOTE)
    if not spin and m.mu == 0:
        notes.append(ZERO_MASS_NOTE)
    return CrossingReport(
        grid=r,
        lambda_plus=np.asarray(lam_plus),
        lambda_minus=np.asarray(lam_minus),
        phi_plus=phi,
        g_plus=g_plus,
        g_minus=g_minus,
        min_upper_margin=min_upper,
        max_lower_margin=max_lower,
        bound_violations=violations,
        verdict=NO_CROSSING if ok else CROSSING_CANDIDATE,
        field_name=field_name,
        regime_note="; ".join(notes),
        extras={"bound_constant": bound_constant(p, m.k) if m.k else float("nan")},
    )


def verify_no_crossing(
    p: BTZParams, m: ModeParams, grid_opts: Optional[GridOptions] = None
) -> CrossingReport:
    """Scan the Dirac potentials for a level crossing.

    Margins are lambda_+ - phi_+ (must stay positive) and lambda_- - phi_+
    (must stay negative); bound violations count grid points with
    lambda_+ < G+ or lambda_- > G- beyond rounding. For mu l < 1/2 the
    verdict is still reported, but the report carries a note that the
    physics there depends on the boundary condition at infinity.
    """
    return _scan(p, m, grid_opts, "dirac", spin=True)


def kg_verify_no_crossing(
    p: BTZParams, m: ModeParams, grid_opts: Optional[GridOptions] = None
) -> CrossingReport:
    """Same scan with the Klein-Gordon potentials (mu^2 r^2 in place of (J/4r + mu r)^2)."""
    return _scan(p, m, grid_opts, "kg", spin=False)


def extremal_touch_point(p: BTZParams, m: ModeParams) -> ExtremalTouchPoint:
    """Where lambda_+ could touch G+ for an extremal hole.

    On an extremal background N / r = (r^2 - r_+^2)/(l r^2) exactly, so the
    gap lambda_+ - G+ = (N/r)(S - |k|) vanishes only where J/(4r) + mu r = 0,
    i.e. at r* = sqrt(-J / (4 mu)); that point also needs sign(k) sign(J) = 1
    for the touching to happen at phi_+. r* > r_+ is equivalent to mu l < 1/2.
    """
    if not p.extremal:
        raise NotExtremal("touch point analysis applies to extremal holes only")
    if m.mu > 0 and p.J < 0 and m.k != 0 and np.sign(m.k) == np.sign(p.J):
        r_star = math.sqrt(-p.J / (4.0 * m.mu))
        inside = r_star > p.r_plus
        if inside:
            note = "r* lies outside the horizon: interior touching possible, requires mu l < 1/2"
        else:
            note = "r* lies at or inside the horizon: no interior touching"
        return ExtremalTouchPoint(r_star, inside, note)
    return ExtremalTouchPoint(None, False, "no real touch point for these signs")

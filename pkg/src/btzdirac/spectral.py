"""
Endpoint classification and numerical checks of the spectral premises.

Covers:

* Frobenius exponents +/- mu l of the radial system at x = 1/r -> 0, and
  the decaying Frobenius solution as a power series;
* limit-point / limit-circle verdicts at both ends, with numerical
  square-integrability evidence;
* near-horizon integrability of V - phi_+ and of the tortoise-coordinate
  coefficient matrix at lambda = phi_+, plus the plateau of its solutions;
* the discreteness criterion int Q dr = inf and the LPC test
  int N^-2 E^2 dr = inf at infinity;
* the MIT-bag boundary residual.

Divergence is never proven, only evidenced. Every "is this integral finite"
question goes through :func:`assess_ladder`, which looks at partial
integrals over a ladder of truncation points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import quad, solve_ivp

from .dirac_radial import ModeParams, Spinor2
from .errors import (
    ComplexMu0,
    ExtremalUnsupported,
    InvalidParameters,
    LadderTooShort,
    StiffnessError,
)
from .geometry import (
    BTZParams,
    angular_shift,
    angular_shift_derivative,
    lapse,
    lapse_sq_exterior,
    tortoise_inverse_log_offset,
    tortoise_log_offset,
)

CONVERGENT = "convergent"
DIVERGENT = "divergent"
INCONCLUSIVE = "inconclusive"

LPC = "LPC"
LCC = "LCC"

#: relative change of the (extrapolated) partial integrals that counts as settled
CAUCHY_RTOL = 1e-6
#: per-rung increments shrinking by less than this fraction count as not shrinking
RATIO_TOL = 1e-4
MIN_RUNGS = 4
DEFAULT_RUNGS = 20
HORIZON_RUNGS = 60


# ---------------------------------------------------------------------------
# Ladder quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntegrabilityReport:
    """Partial integrals over a ladder of truncation points.

    ``value`` is the (extrapolated) limit for convergent ladders and the last
    partial integral otherwise. ``growth_exponent`` is log(d_N/d_{N-1}) /
    log(rung ratio): the exponent s for which the per-rung contribution
    scales like (rung ratio)^(s n); s >= 0 means the integral diverges.
    """

    points: np.ndarray
    partial: np.ndarray
    verdict: str
    value: float
    growth_exponent: float
    tail_ratio: float
    extras: Dict[str, float] = field(default_factory=dict)

    @property
    def convergent(self) -> bool:
        return self.verdict == CONVERGENT

    @property
    def divergent(self) -> bool:
        return self.verdict == DIVERGENT


def geometric_ladder(start: float, rungs: int = DEFAULT_RUNGS, ratio: float = 2.0) -> np.ndarray:
    """Truncation points start * ratio**n for n = 1..rungs."""
    return start * ratio ** np.arange(1, rungs + 1, dtype=float)


def assess_ladder(
    points: Sequence[float],
    increments: Sequence[float],
    rung_ratio: float = 2.0,
    extras: Optional[Dict[str, float]] = None,
) -> IntegrabilityReport:
    """Turn per-rung contributions into a verdict.

    ``increments[n]`` is the integral between truncation points n-1 and n
    (the first one from the lower limit). Rules, applied in order:

    1. settled: the last rung changed the partial integral by less than
       CAUCHY_RTOL (relative), or the tail is identically zero -> convergent;
    2. the last three per-rung contributions do not shrink (each ratio
       d_n / d_{n-1} >= 1 - RATIO_TOL) -> divergent;
    3. they all shrink and the geometric-tail extrapolants
       I_n + d_n rho_n / (1 - rho_n) of the last two rungs agree to
       CAUCHY_RTOL -> convergent, with the extrapolant as value;
    4. otherwise inconclusive.

    The geometric extrapolation is exact for power-law tails on geometric
    ladders, which is what separates r^-1.02 (convergent) from r^-1
    (divergent) within 20 doublings.
    """
    pts = np.asarray(points, dtype=float)
    d = np.asarray(increments, dtype=float)
    if pts.size < MIN_RUNGS or d.size != pts.size:
        raise LadderTooShort(f"need at least {MIN_RUNGS} rungs, got {pts.size}")
    partial = np.cumsum(d)
    last = partial[-1]
    extras = dict(extras or {})

    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = d[1:] / d[:-1]
    tail = ratios[-3:]
    rho = float(ratios[-1]) if np.isfinite(ratios[-1]) else float("nan")
    growth = math.log(rho) / math.log(rung_ratio) if rho > 0 else float("-inf")

    def report(verdict, value):
        return IntegrabilityReport(pts, partial, verdict, float(value), growth, rho, extras)

    if np.all(d[-3:] == 0.0):
        return report(CONVERGENT, last)
    if last != 0 and abs(d[-1]) < CAUCHY_RTOL * abs(last):
        return report(CONVERGENT, last)
    if np.all(np.isfinite(tail)) and np.all(tail >= 1.0 - RATIO_TOL):
        return report(DIVERGENT, last)
    if np.all(np.isfinite(tail)) and np.all(tail > 0) and np.all(tail < 1.0 - RATIO_TOL):
        r1, r2 = ratios[-2], ratios[-1]
        e1 = partial[-2] + d[-2] * r1 / (1.0 - r1)
        e2 = partial[-1] + d[-1] * r2 / (1.0 - r2)
        extras.setdefault("raw_last", float(last))
        if abs(e2 - e1) < CAUCHY_RTOL * abs(e2):
            return report(CONVERGENT, e2)
    return report(INCONCLUSIVE, last)


def _quad(f: Callable[[float], float], a: float, b: float) -> float:
    val, _ = quad(f, a, b, epsabs=0.0, epsrel=1e-12, limit=400)
    return val


def sq_integrability_oracle(
    f: Callable[[float], float],
    weight: Callable[[float], float],
    start: float,
    ladder: Optional[Sequence[float]] = None,
    endpoint: str = "infinity",
) -> IntegrabilityReport:
    """Is int f * weight finite toward ``endpoint``?

    ``f`` and ``weight`` are nonnegative callables. For ``endpoint =
    "infinity"`` the default ladder is start * 2^n (n = 1..20); for a finite
    endpoint pass a ladder accumulating at it (monotone toward the endpoint
    from ``start``).
    """
    if ladder is None:
        if endpoint != "infinity":
            raise InvalidParameters("a finite endpoint needs an explicit ladder")
        ladder = geometric_ladder(start)
    pts = np.asarray(ladder, dtype=float)
    if pts.size < MIN_RUNGS:
        raise LadderTooShort(f"need at least {MIN_RUNGS} rungs, got {pts.size}")
    edges = np.concatenate([[start], pts])
    g = lambda t: f(t) * weight(t)  # noqa: E731
    inc = [abs(_quad(g, min(a, b), max(a, b))) for a, b in zip(edges[:-1], edges[1:])]
    ratio = pts[-1] / pts[-2] if endpoint == "infinity" else 2.0
    return assess_ladder(pts, inc, rung_ratio=ratio)


# ---------------------------------------------------------------------------
# Frobenius analysis at infinity (x = 1/r)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FrobeniusExponents:
    minus: float
    plus: float
    integer_gap: bool

    def __iter__(self):
        return iter((self.minus, self.plus))


def frobenius_exponents(m: ModeParams, p: BTZParams) -> FrobeniusExponents:
    """Indicial exponents -mu l and +mu l at x = 0.

    ``integer_gap`` flags 2 mu l in Z, where the second solution may carry a
    logarithm (not constructed here).
    """
    if m.mu < 0 or p.l <= 0:
        raise InvalidParameters("need mu >= 0 and l > 0")
    ml = m.mu * p.l
    gap = 2.0 * ml
    return FrobeniusExponents(-ml, ml, abs(gap - round(gap)) <= 1e-12 * max(1.0, gap))


def frobenius_matrix(p: BTZParams, m: ModeParams, x) -> np.ndarray:
    """M(x) in x dg/dx = M(x) g, analytic for |x| < 1/r_+ (complex x allowed).

    With q(x) = sqrt((1 - r_+^2 x^2)(1 - r_-^2 x^2)) one has N = q / (l x) and

        M = -[[ l k x/q,  (l/q)(J x^2/4 + mu) + l^2 x (J k x^2/2 - lam)/q^2],
              [(l/q)(J x^2/4 + mu) + l^2 x (lam - J k x^2/2)/q^2,  -l k x/q]]

    so M(0) = [[0, -mu l], [-mu l, 0]].
    """
    x = np.asarray(x, dtype=complex)
    h = p.horizons
    q = np.sqrt(1.0 - (h.r_plus * x) ** 2) * np.sqrt(1.0 - (h.r_minus * x) ** 2)
    l, J, k, lam = p.l, p.J, m.k, m.lam
    diag = l * k * x / q
    common = (l / q) * (J * x * x / 4.0 + m.mu)
    spin = l * l * x * (J * k * x * x / 2.0 - lam) / (q * q)
    out = np.empty(x.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = -diag
    out[..., 0, 1] = -(common + spin)
    out[..., 1, 0] = -(common - spin)
    out[..., 1, 1] = diag
    return out


def _frobenius_taylor(p: BTZParams, m: ModeParams, terms: int, nodes: int = 128) -> np.ndarray:
    # Cauchy integral on |x| = 1/(2 r_+) via FFT
    rho = 0.5 / p.r_plus
    w = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    samples = frobenius_matrix(p, m, rho * w)
    coeffs = np.fft.fft(samples, axis=0) / nodes
    return (coeffs[:terms] / rho ** np.arange(terms)[:, None, None]).real


def frobenius_decaying_series(p: BTZParams, m: ModeParams, order: int = 30) -> np.ndarray:
    """Coefficients c_n of the solution g = x^(mu l) sum_n c_n x^n.

    This is the solution that decays like r^(-mu l) at infinity; its series
    never needs a logarithm because the exponent gap is on the other branch.
    c_0 = (1, -1)/sqrt(2), the +mu l eigenvector of M(0).
    """
    if m.mu <= 0:
        raise InvalidParameters("the decaying Frobenius solution needs mu > 0")
    eps = m.mu * p.l
    mj = _frobenius_taylor(p, m, order + 1)
    c = np.zeros((order + 1, 2))
    c[0] = np.array([1.0, -1.0]) / math.sqrt(2.0)
    eye = np.eye(2)
    for n in range(1, order + 1):
        rhs = sum(mj[j] @ c[n - j] for j in range(1, n + 1))
        c[n] = np.linalg.solve((eps + n) * eye - mj[0], rhs)
    return c


def frobenius_decaying_data(p: BTZParams, m: ModeParams, r: float, order: int = 30) -> Spinor2:
    """Value at radius r of the decaying Frobenius solution (needs r > 2 r_+)."""
    if not r > 2.0 * p.r_plus:
        raise InvalidParameters("series evaluation needs r > 2 r_+")
    c = frobenius_decaying_series(p, m, order)
    x = 1.0 / r
    g = (x ** np.arange(order + 1))[:, None] * c
    total = (x ** (m.mu * p.l)) * g.sum(axis=0)
    return Spinor2(float(total[0]), float(total[1]))


# ---------------------------------------------------------------------------
# Endpoint classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EndpointClassification:
    endpoint: str
    verdict: str
    exponents: Tuple[float, float]
    evidence: Dict[str, IntegrabilityReport]
    integer_gap: bool = False
    notes: str = ""


def classify_infinity(m: ModeParams, p: BTZParams, start: Optional[float] = None) -> EndpointClassification:
    """LPC at r = inf iff mu l >= 1/2, decided from numerical evidence.

    Evidence: the model solutions x^(-mu l) = r^(mu l) and x^(+mu l) = r^(-mu l)
    tested for square integrability against the weight N^-2 on a ladder from
    ``start`` (default 2 r_+). In the LPC case the growing one fails.
    """
    fe = frobenius_exponents(m, p)
    ml = fe.plus
    a = 2.0 * p.r_plus if start is None else float(start)
    weight = lambda r: 1.0 / lapse_sq_exterior(p, r)  # noqa: E731
    evidence = {
        "growing": sq_integrability_oracle(lambda r: r ** (2.0 * ml), weight, a),
        "decaying": sq_integrability_oracle(lambda r: r ** (-2.0 * ml), weight, a),
    }
    analytic = LPC if ml >= 0.5 else LCC
    growing = evidence["growing"].verdict
    if growing == DIVERGENT:
        verdict = LPC
    elif growing == CONVERGENT:
        verdict = LCC
    else:
        verdict = analytic
    m0 = np.linalg.eigvals(frobenius_matrix(p, m, 0.0)).real
    notes = f"eigenvalues of M(0): {sorted(m0.tolist())}"
    if growing == INCONCLUSIVE:
        notes += "; ladder inconclusive, verdict from the exponent rule mu l >= 1/2"
    elif verdict != analytic:
        notes += f"; ladder disagrees with the exponent rule ({analytic})"
    return EndpointClassification("infinity", verdict, (fe.minus, fe.plus), evidence, fe.integer_gap, notes)


def classify_horizon(p: BTZParams, rungs: int = DEFAULT_RUNGS) -> EndpointClassification:
    """LPC at r = r_+, extremal or not.

    In the tortoise coordinate the weight is the constant 1 on (0, inf), which
    is not integrable at y = inf. The recorded exponents are the real parts
    (zero) of the horizon exponents; solutions oscillate in y.
    """
    ladder = geometric_ladder(1.0, rungs)
    report = sq_integrability_oracle(lambda y: 1.0, lambda y: 1.0, 0.0, ladder)
    return EndpointClassification(
        "horizon",
        LPC,
        (0.0, 0.0),
        {"weight": report},
        False,
        f"{p.horizons.branch} horizon; constant weight in the tortoise coordinate",
    )


# ---------------------------------------------------------------------------
# Near-horizon checks (non-extremal)
# ---------------------------------------------------------------------------

def phi_plus(p: BTZParams, k: int) -> float:
    """Common horizon limit J k / (2 r_+^2) of both potential curves."""
    return p.J * k / (2.0 * p.r_plus**2)


def _require_non_extremal(p: BTZParams) -> None:
    if p.extremal:
        raise ExtremalUnsupported("near-horizon spectral checks are not available for extremal parameters")


def _horizon_fields(p: BTZParams, m: ModeParams, s):
    """Quantities at r = r_+ + exp(s), in forms that keep digits as s -> -inf.

    Returns (jac, rbar) where jac = u / N^2 = dy/ds up to sign and rbar is the
    tortoise coefficient matrix at lambda = phi_+, shape (..., 2, 2).
    """
    h = p.horizons
    rp, rm = h.r_plus, h.r_minus
    s = np.asarray(s, dtype=float)
    u = np.exp(s)
    r = rp + u
    tail = (r - rm) * (r + rm) / (p.l**2 * r * r)
    n2 = u * (2.0 * rp + u) * tail
    n = np.sqrt(n2)
    jac = 1.0 / ((2.0 * rp + u) * tail)
    # phi_+ + N_phi k = (J k / 2)(r^2 - r_+^2)/(r^2 r_+^2)
    shifted = 0.5 * p.J * m.k * u * (2.0 * rp + u) / (r * r * rp * rp)
    mph = n * (p.J / (4.0 * r * r) + m.mu)
    off = n * m.k / r
    rbar = np.empty(s.shape + (2, 2))
    rbar[..., 0, 0] = off
    rbar[..., 0, 1] = -shifted + mph
    rbar[..., 1, 0] = shifted + mph
    rbar[..., 1, 1] = -off
    return jac, rbar


def _horizon_ladder(p: BTZParams, rungs: int, u0: Optional[float]):
    u0 = p.r_plus if u0 is None else float(u0)
    s_edges = math.log(u0) - math.log(2.0) * np.arange(0, rungs + 1)
    y_points = np.asarray(tortoise_log_offset(p, s_edges[1:]))
    return s_edges, y_points


def _horizon_ladder_integral(p, integrand, rungs, u0):
    s_edges, y_points = _horizon_ladder(p, rungs, u0)
    inc = [abs(_quad(integrand, b, a)) for a, b in zip(s_edges[:-1], s_edges[1:])]
    return assess_ladder(y_points, inc, rung_ratio=2.0, extras={"u0": float(math.exp(s_edges[0]))})


def p2_integrability_check(
    p: BTZParams, m: ModeParams, rungs: int = HORIZON_RUNGS, u0: Optional[float] = None
) -> IntegrabilityReport:
    """Is int_c^inf |V[r(y)] - phi_+ 1| dy finite? (Frobenius norm of the 2x2 block.)

    The ladder halves r - r_+ from u0 (default r_+) at every rung, which is a
    uniform ladder in y; ``points`` holds the y values. The integral is done
    in s = ln(r - r_+), where dy = -(u/N^2) ds.
    """
    _require_non_extremal(p)

    def integrand(s):
        jac, rb = _horizon_fields(p, m, s)
        # V - phi_+ = [[-(R10), R00], [R00, R01]] entrywise in magnitude
        norm = math.sqrt(rb[1, 0] ** 2 + 2.0 * rb[0, 0] ** 2 + rb[0, 1] ** 2)
        return norm * float(jac)

    return _horizon_ladder_integral(p, integrand, rungs, u0)


@dataclass(frozen=True)
class LevinsonReport:
    """Evidence that phi_+ is not an eigenvalue (non-extremal case).

    ``entry_reports[i][j]`` is the ladder for int |R_ij| dy. ``solutions``
    holds the two solutions started from e1 and e2 at ``y[0]``, sampled at
    ``y``; ``limits`` their values at the far end and ``drift`` the largest
    relative deviation from that value over the last decade of y.
    """

    phi_plus: float
    entry_reports: Tuple[Tuple[IntegrabilityReport, IntegrabilityReport], Tuple[IntegrabilityReport, IntegrabilityReport]]
    y: np.ndarray
    solutions: Tuple[np.ndarray, np.ndarray]
    limits: Tuple[np.ndarray, np.ndarray]
    drift: Tuple[float, float]
    wronskian: float
    plateau_tol: float
    normalizable: bool

    @property
    def entries_integrable(self) -> bool:
        return all(rep.convergent for row in self.entry_reports for rep in row)

    @property
    def plateaued(self) -> bool:
        return all(d <= self.plateau_tol for d in self.drift)


def levinson_check(
    p: BTZParams,
    m: ModeParams,
    y_span: Optional[Tuple[float, float]] = None,
    rungs: int = HORIZON_RUNGS,
    rtol: float = 1e-11,
    plateau_tol: float = 1e-4,
) -> LevinsonReport:
    """Check the hypotheses and conclusion of the Levinson argument at lambda = phi_+.

    (a) every entry of the tortoise coefficient matrix is in L^1(c, inf) in y;
    (b) the two solutions started from e1, e2 at y_span[0] tend to constant,
        nonzero, independent vectors as y -> inf, so none of their
        combinations is square integrable against dy.

    The default span starts at r = 2 r_+ and runs to y = 250 / kappa, far
    enough that exp(-kappa y / 10) is negligible over the last decade.
    The solutions are integrated in s = ln(r - r_+).
    """
    _require_non_extremal(p)
    fp = phi_plus(p, m.k)
    mode = ModeParams(m.mu, m.k, fp, m.hbar)

    reports = []
    for i in range(2):
        row = []
        for j in range(2):
            def integrand(s, i=i, j=j):
                jac, rb = _horizon_fields(p, mode, s)
                return abs(float(rb[i, j])) * float(jac)
            row.append(_horizon_ladder_integral(p, integrand, rungs, None))
        reports.append(tuple(row))

    kappa = p.surface_gravity
    if y_span is None:
        y0 = float(tortoise_log_offset(p, math.log(p.r_plus)))
        y1 = 250.0 / kappa
    else:
        y0, y1 = map(float, y_span)
    if not y1 > 10.0 * max(y0, 0.0) or not y1 > y0:
        raise InvalidParameters("y_span must satisfy y_end > 10 * y_start > 0")
    s0 = tortoise_inverse_log_offset(p, y0, s_min=-1e4)
    s1 = tortoise_inverse_log_offset(p, y1, s_min=-1e4)

    def rhs(s, x):
        jac, rb = _horizon_fields(p, mode, s)
        a = float(jac) * rb
        return np.concatenate([a @ x[:2], a @ x[2:]])

    s_eval = np.linspace(s0, s1, 2001)
    sol = solve_ivp(rhs, (s0, s1), [1.0, 0.0, 0.0, 1.0], method="DOP853",
                    t_eval=s_eval, rtol=rtol, atol=1e-14)
    if sol.status != 0:
        raise StiffnessError(f"Levinson integration failed: {sol.message}", reach=float(sol.t[-1]))
    y = np.asarray(tortoise_log_offset(p, sol.t))
    xs = (sol.y[:2].T, sol.y[2:].T)
    limits = (xs[0][-1].copy(), xs[1][-1].copy())
    tail = y >= y[-1] / 10.0
    drift = tuple(
        float(np.max(np.linalg.norm(x[tail] - lim, axis=1)) / np.linalg.norm(lim))
        for x, lim in zip(xs, limits)
    )
    wr = float(limits[0][0] * limits[1][1] - limits[0][1] * limits[1][0])
    nonzero = all(np.linalg.norm(lim) > 0 for lim in limits)
    normalizable = not (nonzero and abs(wr) > 0 and all(d <= plateau_tol for d in drift))
    return LevinsonReport(fp, tuple(reports), y, xs, limits, drift, wr, plateau_tol, normalizable)


# ---------------------------------------------------------------------------
# Behaviour at infinity: discreteness and the E criterion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HSDiagnostics:
    r: float
    p1: float
    p2: float
    p: float
    p11: float
    p21: float
    p12: float
    p22: float
    r11: float
    r21: float
    Q: float
    s13: float
    s23: float
    Delta: float
    mu0: float
    E: Optional[float] = None


def _mu0_radicand(p: BTZParams, m: ModeParams, r):
    n2 = lapse_sq_exterior(p, r)
    return 1.0 - 1.0 / (m.mu**2 * n2) + m.k**2 / (m.mu**2 * np.asarray(r) ** 2)


def _mu0_q(p: BTZParams, m: ModeParams, r: float) -> float:
    rad = float(_mu0_radicand(p, m, r))
    if rad < 0:
        raise ComplexMu0(f"mu_0 radicand {rad!r} < 0 at r={r!r}")
    return math.sqrt(rad) * m.mu / float(lapse(p, r))


def _require_mass(m: ModeParams) -> None:
    if not m.mu > 0:
        raise InvalidParameters("this diagnostic needs mu > 0")


def hs_diagnostics(p: BTZParams, m: ModeParams, r: float, r0_for_E: Optional[float] = None) -> HSDiagnostics:
    """Coefficients of the discreteness theorem at radius r.

    p12 and p22 follow from the splits p1 = p11 + p12, p2 = p21 + p22, and
    s13, s23 from their definitions -p12/p11, -p22/p21. E needs mu_0 real
    along [r0_for_E, r]; otherwise :class:`ComplexMu0`.
    """
    _require_mass(m)
    r = float(r)
    if not r > p.r_plus:
        raise InvalidParameters("hs_diagnostics needs r > r_+")
    n2 = float(lapse_sq_exterior(p, r))
    n = math.sqrt(n2)
    rot = float(angular_shift(p, r)) * m.k
    dshift = float(angular_shift_derivative(p, r))
    mph = n * r / 4.0 * dshift + n * m.mu
    p1 = (rot + mph) / n2
    p2 = (rot - mph) / n2
    p11 = m.mu / n
    p21 = -m.mu / n
    p12 = p1 - p11
    p22 = p2 - p21
    q = math.sqrt(-p11 * p21)
    pp = -m.k / (n * r)
    # d/dr ln p11 and d/dr ln p21 are both -N'/N and cancel exactly
    delta = -pp / q
    rad = float(_mu0_radicand(p, m, r))
    mu0 = math.sqrt(rad) if rad >= 0 else float("nan")
    e_val = None
    if r0_for_E is not None:
        lo, hi = sorted((float(r0_for_E), r))
        integral = _quad(lambda t: _mu0_q(p, m, t), lo, hi)
        e_val = math.exp(integral if r >= r0_for_E else -integral)
    return HSDiagnostics(
        r=r, p1=p1, p2=p2, p=pp, p11=p11, p21=p21, p12=p12, p22=p22,
        r11=-1.0 / (m.mu * n), r21=1.0 / (m.mu * n), Q=q,
        s13=-p12 / p11, s23=-p22 / p21, Delta=delta, mu0=mu0, E=e_val,
    )


def discreteness_criterion(p: BTZParams, m: ModeParams, r0: float, rungs: int = DEFAULT_RUNGS) -> IntegrabilityReport:
    """Ladder for int_{r0}^R Q dr with Q = mu/N; divergent for every mu > 0.

    extras: ``log_ratio`` = I(R)/(mu l ln(R/r0)) and ``slope_ratio`` =
    (I(R) - I(R/2)) / (mu l ln 2), both -> 1 as R -> inf.
    """
    _require_mass(m)
    r0 = float(r0)
    if not r0 > p.r_plus:
        raise InvalidParameters("r0 must exceed r_+")
    ladder = geometric_ladder(r0, rungs)
    edges = np.concatenate([[r0], ladder])
    mu = m.mu
    inc = [_quad(lambda t: mu / float(lapse(p, t)), a, b) for a, b in zip(edges[:-1], edges[1:])]
    ml = m.mu * p.l
    total = float(np.sum(inc))
    extras = {
        "log_ratio": total / (ml * math.log(ladder[-1] / r0)),
        "slope_ratio": inc[-1] / (ml * math.log(ladder[-1] / ladder[-2])),
    }
    return assess_ladder(ladder, inc, extras=extras)


def discreteness_constant(p: BTZParams, r0: float) -> float:
    """const with int_{r0}^R Q dr ~ mu l ln(R const / r0) as R -> inf.

    Q = mu/N integrates in closed form to
    mu l ln(sqrt(R^2 - r_+^2) + sqrt(R^2 - r_-^2)) + C, so
    const = 2 r0 / (sqrt(r0^2 - r_+^2) + sqrt(r0^2 - r_-^2)).
    """
    h = p.horizons
    r0 = float(r0)
    a0 = math.sqrt((r0 - h.r_plus) * (r0 + h.r_plus)) + math.sqrt((r0 - h.r_minus) * (r0 + h.r_minus))
    return 2.0 * r0 / a0


def discreteness_ratio(p: BTZParams, m: ModeParams, r0: float, R: float) -> float:
    """int_{r0}^R Q dr / (mu l ln(R const / r0)), by quadrature; tends to 1."""
    _require_mass(m)
    r0, R = float(r0), float(R)
    if not (R > r0 > p.r_plus):
        raise InvalidParameters("need R > r0 > r_+")
    mu = m.mu
    edges = np.geomspace(r0, R, max(2, int(math.ceil(math.log2(R / r0)))) + 1)
    total = sum(_quad(lambda t: mu / float(lapse(p, t)), a, b) for a, b in zip(edges[:-1], edges[1:]))
    return total / (m.mu * p.l * math.log(R * discreteness_constant(p, r0) / r0))


def mu0_real_start(p: BTZParams, m: ModeParams, r0: float, points: int = 2000) -> float:
    """First radius >= r0 beyond which the mu_0 radicand stays nonnegative.

    Scans a log grid in r - r_+ out to where mu^2 N^2 >= 1 for sure and steps
    one grid point past the last negative sample.
    """
    _require_mass(m)
    rp = p.r_plus
    r_hi = 4.0 * p.l * math.sqrt(p.M + 1.0 / m.mu**2) + 2.0 * rp
    grid = rp + np.geomspace(rp * 1e-8, r_hi - rp, points)
    neg = np.nonzero(_mu0_radicand(p, m, grid) < 0)[0]
    start = float(r0)
    if neg.size:
        i = min(neg[-1] + 2, points - 1)
        start = max(start, float(grid[i]))
    return start


def lpc_E_criterion(p: BTZParams, m: ModeParams, r0: float, rungs: int = DEFAULT_RUNGS) -> IntegrabilityReport:
    """Ladder for int N^-2 E(r, 0)^2 dr toward infinity.

    E(r, 0) = exp(int_{r0'}^r mu_0 Q dr), with r0' the start shifted past the
    region where mu_0 is imaginary (``extras['r0_effective']``). Divergent
    exactly when mu l >= 1/2. Both integrals are carried by one ODE in ln r.
    """
    _require_mass(m)
    a = mu0_real_start(p, m, r0)
    ladder = geometric_ladder(a, rungs)

    def rhs(t, z):
        r = math.exp(t)
        log_e, _ = z
        return [r * _mu0_q(p, m, r), r * math.exp(2.0 * log_e) / float(lapse_sq_exterior(p, r))]

    t_eval = np.log(ladder)
    sol = solve_ivp(rhs, (math.log(a), t_eval[-1]), [0.0, 0.0], method="DOP853",
                    t_eval=t_eval, rtol=1e-13, atol=1e-14)
    if sol.status != 0:
        raise StiffnessError(f"E-criterion integration failed: {sol.message}", reach=float(math.exp(sol.t[-1])))
    partial = sol.y[1]
    inc = np.diff(np.concatenate([[0.0], partial]))
    return assess_ladder(ladder, inc, extras={"r0_effective": a})


# ---------------------------------------------------------------------------
# Boundary conditions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryCondition:
    """sin(beta) X1(r0) + cos(beta) X2(r0) = 0 with beta in [0, pi)."""

    beta: float
    r0: float

    def __post_init__(self):
        if not 0.0 <= self.beta < math.pi:
            raise InvalidParameters(f"beta must lie in [0, pi), got {self.beta!r}")


def mit_bag(r0: float) -> BoundaryCondition:
    """The no-flux condition g1(r0) = g2(r0), i.e. beta = 3 pi / 4."""
    return BoundaryCondition(3.0 * math.pi / 4.0, r0)


def mit_bag_residual(bc: BoundaryCondition, X: Sequence[float]) -> float:
    x1, x2 = X
    return math.sin(bc.beta) * x1 + math.cos(bc.beta) * x2

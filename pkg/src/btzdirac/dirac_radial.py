"""
Separated radial Dirac Hamiltonian on the BTZ exterior.

After separating t and phi (p_phi eigenvalue k) the reduced Hamiltonian acts on
two-component functions g(r) in L^2[(r_+, inf), N^-2 dr]^2:

    H_red = [[-N_phi k - mu_phi,      N^2 d/dr + N k / r],
             [-N^2 d/dr + N k / r,    -N_phi k + mu_phi ]]

with mu_phi = (N r / 4) dN_phi/dr + N mu = N (J/(4 r^2) + mu).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, InvalidParameters, StiffnessError
from .geometry import (
    ArrayLike,
    BTZParams,
    angular_shift,
    angular_shift_derivative,
    lapse,
    lapse_derivative,
    lapse_sq_exterior,
)


@dataclass(frozen=True)
class ModeParams:
    """Field sector: mass mu, angular eigenvalue k, spectral parameter lam.

    ``hbar`` only scales the spin coupling in
    :func:`potential_eigenvalues_hbar`; every other routine uses hbar = 1.
    """

    mu: float
    k: int
    lam: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        k = self.k
        if isinstance(k, (bool, np.bool_)):
            raise InvalidParameters("k must be an integer")
        if isinstance(k, (float, np.floating)):
            if not float(k).is_integer():
                raise InvalidParameters(f"k must be an integer, got {k!r}")
        elif not isinstance(k, (int, np.integer)):
            raise InvalidParameters(f"k must be an integer, got {k!r}")
        object.__setattr__(self, "k", int(k))
        for name in ("mu", "lam", "hbar"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidParameters(f"{name} must be finite")
            object.__setattr__(self, name, value)
        if self.mu < 0:
            raise InvalidParameters(f"mu must be >= 0, got {self.mu}")

    def mu_l(self, p: BTZParams) -> float:
        return self.mu * p.l

    def essentially_self_adjoint(self, p: BTZParams) -> bool:
        """True when mu l >= 1/2 (no boundary condition needed at infinity)."""
        return self.mu * p.l >= 0.5


class Spinor2(NamedTuple):
    g1: Any
    g2: Any


class PotentialMatrix(NamedTuple):
    v11: Any
    v12: Any
    v21: Any
    v22: Any

    def as_array(self) -> np.ndarray:
        """Stack into shape (..., 2, 2)."""
        v11, v12, v21, v22 = np.broadcast_arrays(*map(np.asarray, self))
        return np.stack([np.stack([v11, v12], -1), np.stack([v21, v22], -1)], -2)


def _as_r(r: ArrayLike) -> np.ndarray:
    return np.asarray(r, dtype=float)


def _out(x: np.ndarray):
    return x if np.ndim(x) else float(x)


def mu_phi(p: BTZParams, m: ModeParams, r: ArrayLike) -> ArrayLike:
    """mu_phi = (N r / 4) dN_phi/dr + N mu = N (J/(4 r^2) + mu)."""
    r = _as_r(r)
    n = lapse(p, r)
    return _out(n * r / 4.0 * angular_shift_derivative(p, r) + n * m.mu)


def potential_matrix(p: BTZParams, m: ModeParams, r: ArrayLike) -> PotentialMatrix:
    r = _as_r(r)
    n = lapse(p, r)
    rot = -angular_shift(p, r) * m.k
    mph = mu_phi(p, m, r)
    off = n * m.k / r
    return PotentialMatrix(_out(rot - mph), _out(off), _out(off), _out(rot + mph))


def _split(center, half):
    return _out(center - half), _out(center + half)


def potential_eigenvalues(p: BTZParams, m: ModeParams, r: ArrayLike) -> Tuple[Any, Any]:
    """(lambda_-, lambda_+) = -N_phi k -/+ (N/r) sqrt((J/(4r) + mu r)^2 + k^2)."""
    r = _as_r(r)
    n = lapse(p, r)
    half = n / r * np.sqrt((p.J / (4.0 * r) + m.mu * r) ** 2 + m.k**2)
    return _split(-angular_shift(p, r) * m.k, half)


def potential_eigenvalues_hbar(
    p: BTZParams, m: ModeParams, r: ArrayLike, hbar: Optional[float] = None
) -> Tuple[Any, Any]:
    """Eigenvalues with the spin coupling scaled by hbar.

    lambda_+/- = -N_phi k +/- (N/r) sqrt(((mu - N_phi hbar/2) r)^2 + k^2).
    hbar = 1 reproduces :func:`potential_eigenvalues`; hbar = 0 gives the
    Klein-Gordon / Hamilton-Jacobi potentials.
    """
    hb = m.hbar if hbar is None else float(hbar)
    r = _as_r(r)
    n = lapse(p, r)
    shift = angular_shift(p, r)
    half = n / r * np.sqrt(((m.mu - shift * hb / 2.0) * r) ** 2 + m.k**2)
    return _split(-shift * m.k, half)


def untransformed_extra_term(p: BTZParams, r: ArrayLike) -> ArrayLike:
    """-(N^2/4) (dN/dr + N/r)^2: what the sqrt(N r) rescaling removes."""
    r = _as_r(r)
    n = lapse(p, r)
    return _out(-(n * n / 4.0) * (lapse_derivative(p, r) + n / r) ** 2)


def spinor_map(p: BTZParams, r: ArrayLike, psi: Sequence, direction: str = "to_reduced") -> Spinor2:
    """Rescale a spinor between the current-density and reduced Hilbert spaces.

    ``to_reduced`` multiplies by sqrt(N r) so that
    int (r/N)|psi|^2 dr = int N^-2 |psi_reduced|^2 dr; ``to_original`` divides.
    """
    r = _as_r(r)
    scale = np.sqrt(lapse(p, r) * r)
    if direction == "to_reduced":
        f = scale
    elif direction == "to_original":
        f = 1.0 / scale
    else:
        raise InvalidParameters(f"unknown direction {direction!r}")
    g1, g2 = psi
    return Spinor2(_out(np.asarray(g1) * f), _out(np.asarray(g2) * f))


# ---------------------------------------------------------------------------
# First-order systems
# ---------------------------------------------------------------------------

def coefficient_matrix(p: BTZParams, m: ModeParams, r: ArrayLike, lam: Optional[float] = None) -> np.ndarray:
    """A(r) with dg/dr = A g for (H_red - lam) g = 0. Trace-free.

    A = N^-2 [[N k/r,                 mu_phi - N_phi k - lam],
              [lam + N_phi k + mu_phi, -N k/r               ]]
    """
    lam = m.lam if lam is None else float(lam)
    r = _as_r(r)
    n2 = lapse_sq_exterior(p, r)
    n = np.sqrt(n2)
    rot = angular_shift(p, r) * m.k
    mph = n * (p.J / (4.0 * r * r) + m.mu)
    off = n * m.k / r
    a = np.empty(r.shape + (2, 2))
    a[..., 0, 0] = off / n2
    a[..., 0, 1] = (mph - rot - lam) / n2
    a[..., 1, 0] = (lam + rot + mph) / n2
    a[..., 1, 1] = -off / n2
    return a


def local_basis(p: BTZParams, m: ModeParams, r: float) -> Tuple[np.ndarray, np.ndarray]:
    """Two real, independent initial states adapted to A(r).

    For real eigenvalues these are the unit eigenvectors of A(r) (locally
    growing and decaying directions); for a complex pair, the real and
    imaginary parts of one eigenvector. Starting a fundamental pair here keeps
    det[g, h] well conditioned: a generic pair is dominated by the growing
    solution in both columns and its determinant loses digits to cancellation.
    """
    w, v = np.linalg.eig(coefficient_matrix(p, m, float(r)))
    if np.iscomplexobj(w) and w[0].imag != 0.0:
        z = v[:, 0]
        pair = (z.real, z.imag)
    else:
        v = np.real(v)
        pair = (v[:, 0], v[:, 1])
    return tuple(x / np.linalg.norm(x) for x in pair)


def rhs_radial_system(p: BTZParams, m: ModeParams, r: float, g: Sequence) -> Spinor2:
    """dg/dr for (H_red - lambda) g = 0."""
    a = coefficient_matrix(p, m, float(r))
    v = a @ np.asarray(g)
    return Spinor2(v[0], v[1])


def rbar_matrix(p: BTZParams, m: ModeParams, r: ArrayLike, lam: Optional[float] = None) -> np.ndarray:
    """The tortoise-coordinate coefficient matrix

        [[k N/r,                  -lam - N_phi k + mu_phi],
         [lam + N_phi k + mu_phi, -k N/r                 ]]

    ``lam`` defaults to m.lam. With g as a function of y, dg/dy = -R g
    (see :func:`rhs_tortoise_system`).
    """
    lam = m.lam if lam is None else float(lam)
    r = _as_r(r)
    n = lapse(p, r)
    rot = angular_shift(p, r) * m.k
    mph = n * (p.J / (4.0 * r * r) + m.mu)
    off = n * m.k / r
    out = np.empty(r.shape + (2, 2))
    out[..., 0, 0] = off
    out[..., 0, 1] = -lam - rot + mph
    out[..., 1, 0] = lam + rot + mph
    out[..., 1, 1] = -off
    return out


def rhs_tortoise_system(p: BTZParams, m: ModeParams, r: float, g: Sequence) -> Spinor2:
    """dg/dy = -N^2 dg/dr at the radius r = r(y)."""
    v = -rbar_matrix(p, m, float(r)) @ np.asarray(g)
    return Spinor2(v[0], v[1])


def apply_hamiltonian(p: BTZParams, m: ModeParams, r: ArrayLike, g: Sequence, dg: Sequence) -> Spinor2:
    """H_red g given samples of g and dg/dr at r."""
    r = _as_r(r)
    v11, v12, _, v22 = potential_matrix(p, m, r)
    n2 = lapse_sq_exterior(p, r)
    g1, g2 = (np.asarray(c) for c in g)
    d1, d2 = (np.asarray(c) for c in dg)
    return Spinor2(_out(v11 * g1 + n2 * d2 + v12 * g2), _out(-n2 * d1 + v12 * g1 + v22 * g2))


# ---------------------------------------------------------------------------
# Integration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntegrationOptions:
    """Settings for :func:`integrate_radial`.

    horizon_offset: integrations toward the horizon stop at r_+(1 + offset).
    samples: number of log-spaced output points (endpoints included).
    """

    rtol: float = 1e-10
    atol: float = 1e-14
    method: str = "DOP853"
    horizon_offset: float = 1e-8
    samples: int = 200
    max_step: float = np.inf


@dataclass(frozen=True)
class SolutionTrace:
    """Sampled fundamental pair of the radial system.

    ``states`` is the requested solution, ``companion`` the second solution
    propagated alongside it; ``wronskian`` is det[states, companion] at each
    sample. Points are stored in increasing order whatever the direction of
    integration.
    """

    coordinate: str
    points: np.ndarray
    states: np.ndarray
    companion: np.ndarray
    wronskian: np.ndarray
    start: float
    reach: float
    horizon_clamped: bool
    rtol: float
    dense: Any = field(default=None, repr=False, compare=False)

    def __len__(self):
        return len(self.points)

    def wronskian_variation(self) -> float:
        """max |W - W_0| / |W_0| over the trace, W_0 at the starting point."""
        w = self.wronskian
        w0 = w[0] if self.start == self.points[0] else w[-1]
        return float(np.max(np.abs(w - w0)) / abs(w0))


def integrate_radial(
    p: BTZParams,
    m: ModeParams,
    r_start: float,
    r_end: float,
    init: Sequence,
    opts: IntegrationOptions = IntegrationOptions(),
    companion: Optional[Sequence] = None,
    r_eval: Optional[np.ndarray] = None,
) -> SolutionTrace:
    """Integrate dg/dr = A(r) g from r_start to r_end.

    ``companion`` is a second initial state propagated with the first; it
    defaults to the rotation (-g2, g1) of ``init``, so the pair is always
    fundamental and its Wronskian is recorded. Spans reaching into
    (r_+, r_+(1 + horizon_offset)) are clamped and flagged.
    """
    rp = p.r_plus
    r_start, r_end = float(r_start), float(r_end)
    if not (r_start > rp and r_end > rp) or r_start == r_end:
        raise DomainError(
            f"invalid span ({r_start!r}, {r_end!r}); both ends must exceed r_+ = {rp!r}"
        )
    g0 = np.asarray(init, dtype=float)
    if g0.shape != (2,) or not np.all(np.isfinite(g0)):
        raise InvalidParameters("init must be two finite numbers")
    h0 = np.array([-g0[1], g0[0]]) if companion is None else np.asarray(companion, dtype=float)
    if h0.shape != (2,) or not np.all(np.isfinite(h0)):
        raise InvalidParameters("companion must be two finite numbers")

    floor = rp * (1.0 + opts.horizon_offset)
    clamped = False
    if r_end < floor:
        r_end, clamped = floor, True
    if r_start < floor:
        raise DomainError(f"r_start={r_start!r} lies inside the horizon offset r_+(1+delta)")

    if r_eval is None:
        r_eval = np.geomspace(r_start, r_end, opts.samples)
    else:
        r_eval = np.array(r_eval, dtype=float)
    r_eval[0], r_eval[-1] = r_start, r_end

    def rhs(r, y):
        a = coefficient_matrix(p, m, r)
        return np.concatenate([a @ y[:2], a @ y[2:]])

    sol = solve_ivp(
        rhs,
        (r_start, r_end),
        np.concatenate([g0, h0]),
        method=opts.method,
        t_eval=r_eval,
        rtol=opts.rtol,
        atol=opts.atol,
        dense_output=True,
        max_step=opts.max_step,
    )
    if sol.status != 0:
        reach = float(sol.t[-1]) if sol.t.size else r_start
        raise StiffnessError(f"integration stopped at r={reach!r}: {sol.message}", reach=reach)

    order = np.argsort(sol.t)
    pts = sol.t[order]
    ys = sol.y[:, order].T
    states, comp = ys[:, :2], ys[:, 2:]
    wr = states[:, 0] * comp[:, 1] - states[:, 1] * comp[:, 0]
    return SolutionTrace(
        coordinate="r",
        points=pts,
        states=states,
        companion=comp,
        wronskian=wr,
        start=r_start,
        reach=r_end,
        horizon_clamped=clamped,
        rtol=opts.rtol,
        dense=sol.sol,
    )

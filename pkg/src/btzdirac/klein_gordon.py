"""
Klein-Gordon potentials in Hamiltonian form and the classical
Hamilton-Jacobi effective potentials.

After separating t and phi the Klein-Gordon Hamiltonian's potential part is

    V = [[J k / (2 r^2),            1           ],
         [N^2 (mu^2 + k^2 / r^2),   J k / (2 r^2)]]

with eigenvalues J k/(2 r^2) +/- (N/r) sqrt(mu^2 r^2 + k^2). The
Hamilton-Jacobi turning points omega+/- of a test particle are the same
expression; both are computed along one code path so they agree bit for bit.
Only the potentials are provided, not a Hamiltonian operator.
"""

from __future__ import annotations

from typing import Any, NamedTuple, Tuple

import numpy as np

from .dirac_radial import ModeParams
from .errors import DomainError
from .geometry import ArrayLike, BTZParams, angular_shift, lapse, lapse_sq_exterior


class KGPotentialMatrix(NamedTuple):
    v11: Any
    v12: Any
    v21: Any
    v22: Any

    def as_array(self) -> np.ndarray:
        v11, v12, v21, v22 = np.broadcast_arrays(*map(np.asarray, self))
        return np.stack([np.stack([v11, v12], -1), np.stack([v21, v22], -1)], -2)


def _exterior(p: BTZParams, r: ArrayLike) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if np.any(~(r >= p.r_plus)):
        raise DomainError(f"need r >= r_+ = {p.r_plus!r}")
    return r


def _out(x):
    return x if np.ndim(x) else float(x)


def kg_potential_matrix(p: BTZParams, m: ModeParams, r: ArrayLike) -> KGPotentialMatrix:
    r = _exterior(p, r)
    diag = -angular_shift(p, r) * m.k
    v21 = lapse_sq_exterior(p, r) * (m.mu**2 + m.k**2 / (r * r))
    return KGPotentialMatrix(_out(diag), 1.0, _out(v21), _out(diag))


def _turning_points(p: BTZParams, m: ModeParams, r: np.ndarray):
    # same operations, in the same order, as the hbar = 0 Dirac eigenvalues
    n = lapse(p, r)
    shift = angular_shift(p, r)
    half = n / r * np.sqrt((m.mu * r) ** 2 + m.k**2)
    center = -shift * m.k
    return _out(center - half), _out(center + half)


def kg_eigenvalues(p: BTZParams, m: ModeParams, r: ArrayLike) -> Tuple[Any, Any]:
    """(lambda_-, lambda_+) = J k/(2 r^2) -/+ (N/r) sqrt(mu^2 r^2 + k^2)."""
    return _turning_points(p, m, _exterior(p, r))


def hj_potentials(p: BTZParams, m: ModeParams, r: ArrayLike) -> Tuple[Any, Any]:
    """(omega_-, omega_+) = -N_phi k -/+ (N/r) sqrt(mu^2 r^2 + k^2)."""
    return _turning_points(p, m, _exterior(p, r))


def hj_radial_momentum_sq(p: BTZParams, m: ModeParams, r: ArrayLike, omega: ArrayLike) -> ArrayLike:
    """N^4 (dR/dtau)^2 = (omega + N_phi k)^2 - N^2 (mu^2 + k^2 / r^2).

    Nonnegative in classically allowed regions; zero at omega+/-(r).
    """
    r = _exterior(p, r)
    omega = np.asarray(omega, dtype=float)
    out = (omega + angular_shift(p, r) * m.k) ** 2 - lapse_sq_exterior(p, r) * (
        m.mu**2 + m.k**2 / (r * r)
    )
    return _out(out)

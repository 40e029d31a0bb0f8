"""Independent reference computations used by the tests.

Nothing here imports the package's closed forms: roots come from bisection,
eigenvalues from numpy's symmetric eigensolver, tortoise differences from
adaptive quadrature of the defining integrand.
"""

import math

import numpy as np
from scipy.integrate import quad
from scipy.optimize import bisect


def horizon_bisection(M, J, l):
    """(r_+, r_-) as roots of r^2 l^2 N^2 = r^4 - M l^2 r^2 + J^2 l^2 / 4."""
    f = lambda r: r**4 - M * l * l * r * r + J * J * l * l / 4.0  # noqa: E731
    vertex = l * math.sqrt(M / 2.0)
    outer = bisect(f, vertex, l * math.sqrt(M) * 1.000001, xtol=1e-300, rtol=1e-15, maxiter=2000)
    if J == 0:
        inner = 0.0
    else:
        inner = bisect(f, 0.0, vertex, xtol=1e-300, rtol=1e-15, maxiter=2000)
    return outer, inner


def lapse_sq_direct(M, J, l, r):
    return -M + r * r / (l * l) + J * J / (4.0 * r * r)


def tortoise_difference(M, J, l, r_a, r_b):
    """y(r_a) - y(r_b) = int_{r_a}^{r_b} dr / N^2."""
    val, _ = quad(lambda r: 1.0 / lapse_sq_direct(M, J, l, r), r_a, r_b, epsabs=0, epsrel=1e-13, limit=500)
    return val


def potential_matrix_direct(M, J, l, mu, k, r):
    n = math.sqrt(lapse_sq_direct(M, J, l, r))
    nphi = -J / (2.0 * r * r)
    muphi = n * (J / (4.0 * r * r) + mu)
    off = n * k / r
    return np.array([[-nphi * k - muphi, off], [off, -nphi * k + muphi]])


def sym_eigenvalues(a):
    return np.linalg.eigvalsh(a)


def char_poly_eigenvalues(a):
    """Roots of the 2x2 characteristic polynomial, ascending (general matrix)."""
    tr = a[0, 0] + a[1, 1]
    det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    disc = math.sqrt(max(tr * tr / 4.0 - det, 0.0))
    return tr / 2.0 - disc, tr / 2.0 + disc


# Frozen reference values (computed once with the oracles above or by hand).
R_PLUS_112 = 1.9318516525781366       # M=1, J=1, l=2
R_MINUS_112 = 0.5176380902050416
PHI_PLUS_112 = 0.13397459621556135    # 1 / (2 (2 + sqrt 3))
Y_STATIC_R3 = 0.34657359027997264     # -(1/2) ln(1/2)
Y_EXTREMAL_SQRT2 = 0.8598226203970785  # M=J=l=1 at r = sqrt 2 (direct evaluation)
LAMBDA_PLUS_HBAR_HALF = 0.4115175128264414  # M=1,J=1,l=2,mu=1,k=1,r=2, hbar=1/2
EXTRA_TERM_STATIC_R2 = -3.0625        # -(N^2/4)(N' + N/r)^2 at M=1,J=0,l=1,r=2

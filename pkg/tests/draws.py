"""Random parameter draws shared by the property and acceptance tests."""

import numpy as np

from btzdirac.dirac_radial import ModeParams
from btzdirac.geometry import BTZParams


def background(rng, extremal=False, max_ratio=0.999):
    M = rng.uniform(0.2, 5.0)
    l = rng.uniform(0.3, 3.0)
    sign = rng.choice([-1.0, 1.0])
    if extremal:
        return BTZParams(M, sign * M * l, l)
    return BTZParams(M, sign * rng.uniform(0.0, max_ratio) * M * l, l)


def mode(rng, p, ml_range=(0.5, 3.0), k_range=(-3, 3), lam=0.0):
    mu = rng.uniform(*ml_range) / p.l
    k = int(rng.integers(k_range[0], k_range[1] + 1))
    return ModeParams(mu, k, lam)


def radii(rng, p, n, lo=1e-6, hi=1e3):
    """Radii r_+(1 + u) with u log-uniform in (lo, hi)."""
    return p.r_plus * (1.0 + np.exp(rng.uniform(np.log(lo), np.log(hi), n)))

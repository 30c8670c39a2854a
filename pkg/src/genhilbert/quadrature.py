"""Panel quadrature on [t0, 1) with the substitution t = 1 - exp(-x).

The map sends [t0, 1) to [x0, inf) and turns the endpoint factors
(1-t)^(gamma-1) and powers of log(2/(1-t)) into smooth, exponentially
decaying integrands.  Panels have width log(2) in x, i.e. every panel halves
the distance 1-t, so the panel edges line up with the dyadic grid
t_j = 1 - 2^-j used for Carleson quotients.

Integrands are called as ``func(t, u)`` with ``u = 1 - t`` supplied
separately, so callers never have to recover 1-t by cancellation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

LN2 = float(np.log(2.0))


class QuadratureError(RuntimeError):
    """Raised when a panel sum fails to settle within ``max_panels``."""


@dataclass(frozen=True)
class QuadSettings:
    """Controls for :func:`integrate_tail`.

    tol is relative: a component is converged after ``settle`` consecutive
    panels each contributing at most ``tol * |running sum|``.
    """

    tol: float = 1e-14
    nodes: int = 32
    max_panels: int = 4000
    min_panels: int = 2
    settle: int = 2
    batch: int = 8

    def __post_init__(self):
        if not (0.0 < self.tol <= 1e-6):
            raise ValueError(f"quadrature tol must lie in (0, 1e-6], got {self.tol}")
        if self.nodes < 2 or self.max_panels < 1 or self.batch < 1:
            raise ValueError("nodes >= 2, max_panels >= 1 and batch >= 1 required")


DEFAULT_QUAD = QuadSettings()


@lru_cache(maxsize=16)
def _legendre_panel(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(nodes)
    # map [-1, 1] -> [0, LN2]
    s = 0.5 * LN2 * (x + 1.0)
    w = 0.5 * LN2 * w
    s.setflags(write=False)
    w.setflags(write=False)
    return s, w


def integrate_tail(
    func: Callable[[np.ndarray, np.ndarray], np.ndarray],
    t0: float = 0.0,
    settings: QuadSettings = DEFAULT_QUAD,
) -> np.ndarray | float | complex:
    """Integrate ``func(t, u) dt`` over [t0, 1).

    ``func`` receives 1-D arrays of nodes and may return an array whose last
    axis runs over the nodes; leading axes are treated as independent
    components.  Each component stops accumulating once it has converged, so
    its value does not depend on which other components were requested with
    it.
    """
    if not (0.0 <= t0 < 1.0):
        raise ValueError(f"t0 must lie in [0, 1), got {t0}")
    s_ref, w_ref = _legendre_panel(settings.nodes)
    u0 = 1.0 - t0
    total = quiet = active = None
    k = 0
    while k < settings.max_panels:
        # evaluate a batch of panels per call; convergence is still checked panel by panel
        nb = min(settings.batch, settings.max_panels - k)
        s = (s_ref[None, :] + LN2 * np.arange(k, k + nb)[:, None]).ravel()
        u = u0 * np.exp(-s)
        t = t0 - u0 * np.expm1(-s)
        vals = np.asarray(func(t, u))
        wu = (np.tile(w_ref, nb) * u).reshape(nb, -1)
        vals = vals.reshape(vals.shape[:-1] + (nb, settings.nodes))
        for b in range(nb):
            panel = vals[..., b, :] @ wu[b]
            if total is None:
                total = np.zeros_like(panel)
                quiet = np.zeros(np.shape(panel), dtype=int)
                active = np.ones(np.shape(panel), dtype=bool)
            total = np.where(active, total + panel, total)
            small = np.abs(panel) <= settings.tol * np.abs(total)
            quiet = np.where(small, quiet + 1, 0)
            if k + 1 >= settings.min_panels:
                active = active & (quiet < settings.settle)
            # past this point u underflows and every density term has vanished
            if not np.any(active) or wu[b, -1] == 0.0 or u0 * np.exp(-LN2 * (k + 1)) < 1e-300:
                return total[()] if np.ndim(total) == 0 else total
            k += 1
    raise QuadratureError(
        f"panel quadrature did not settle after {settings.max_panels} panels "
        f"(t0={t0}, tol={settings.tol})"
    )

"""The generalized Hankel matrix H_{mu,alpha} and the integral operator I_{mu,alpha}.

Entries are mu_{n,k,alpha} = c_alpha(n) * mu_{n+k} with
c_alpha(n) = Gamma(n+alpha) / (n! Gamma(alpha)) and mu_m the m-th moment of
mu.  The matrix is stored as the pair (c_alpha, moment vector); dense
entries are only formed on request.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .measures import CarlesonReport, MeasureSpec, carleson_report, integrate, moments
from .quadrature import DEFAULT_QUAD, QuadSettings
from .spaces import DEFAULT_GRID, GridSpec, PowerSeries, _horner, area_pairing, evaluate


@dataclass(frozen=True)
class OperatorConfig:
    alpha: float
    N: int = 1024
    quad: QuadSettings = DEFAULT_QUAD
    r_list: tuple[float, ...] = (0.5, 0.9, 0.99)
    grid: GridSpec = field(default=DEFAULT_GRID)

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if any(not (0.0 < r < 1.0) for r in self.r_list):
            raise ValueError("r_list entries must lie in (0, 1)")


def gamma_ratio_coeffs(alpha: float, N: int, log: bool = False) -> np.ndarray:
    """c_alpha(n) = Gamma(n+alpha)/(n! Gamma(alpha)) for n = 0..N.

    Multiplicative recurrence c(n+1) = c(n)(n+alpha)/(n+1); once the running
    value passes 1e300 the remainder is accumulated as a log-sum.  With
    ``log=True`` the logarithms are returned instead.
    """
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    if N < 0:
        raise ValueError("N must be >= 0")
    n = np.arange(N, dtype=float)
    steps = (n + alpha) / (n + 1.0)
    out = np.empty(N + 1)
    out[0] = 1.0
    with np.errstate(over="ignore"):
        out[1:] = np.cumprod(steps)
    big = np.nonzero(out > 1e300)[0]
    if big.size or log:
        logs = np.empty(N + 1)
        logs[0] = 0.0
        logs[1:] = np.cumsum(np.log(steps))
        if log:
            ok = out <= 1e300
            logs[ok] = np.log(out[ok])
            return logs
        start = big[0]
        with np.errstate(over="ignore"):
            out[start:] = np.exp(logs[start:])
    return out


@dataclass(frozen=True, eq=False)
class HankelMatrix:
    alpha: float
    order: int
    coeffs: np.ndarray  # c_alpha(0..N)
    moment_vector: np.ndarray  # mu_0..mu_{2N}
    label: str = ""

    @property
    def entries(self) -> np.ndarray:
        """Dense (N+1) x (N+1) matrix of mu_{n,k,alpha}."""
        N = self.order
        mom = self.moment_vector
        idx = np.add.outer(np.arange(N + 1), np.arange(N + 1))
        return self.coeffs[:, None] * mom[idx]

    def entry(self, n: int, k: int) -> float:
        return float(self.coeffs[n] * self.moment_vector[n + k])

    def to_json(self) -> str:
        return json.dumps(
            {
                "label": self.label,
                "alpha": self.alpha,
                "order": self.order,
                "moments": self.moment_vector.tolist(),
            }
        )

    def to_csv(self) -> str:
        if self.order > 64:
            raise ValueError("dense CSV export is limited to order <= 64; use to_json")
        rows = self.entries
        return "".join(",".join(format(v, ".15g") for v in row) + "\n" for row in rows)


def hankel_matrix(m: MeasureSpec, cfg: OperatorConfig) -> HankelMatrix:
    mom = moments(m, 2 * cfg.N, cfg.quad)
    c = gamma_ratio_coeffs(cfg.alpha, cfg.N)
    c.setflags(write=False)
    return HankelMatrix(cfg.alpha, cfg.N, c, mom, m.label)


def apply_hankel(H: HankelMatrix, f: PowerSeries) -> PowerSeries:
    """b_n = sum_k mu_{n,k,alpha} a_k for n <= N, streamed from the moment vector."""
    if f.order > H.order:
        raise ValueError(
            f"series order {f.order} exceeds matrix order {H.order}"
        )
    K = f.coeffs.size
    # row n of the Hankel block is moment_vector[n : n+K]
    windows = sliding_window_view(H.moment_vector, K)[: H.order + 1]
    b = H.coeffs * (windows @ f.coeffs)
    return PowerSeries(b, f"H[{H.label}]({f.label})")


def apply_integral(
    m: MeasureSpec,
    alpha: float,
    f: PowerSeries,
    z,
    quad: QuadSettings = DEFAULT_QUAD,
):
    """I_{mu,alpha}(f)(z) = int f(t) (1-tz)^(-alpha) dmu(t), vectorized over z."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1.0):
        raise ValueError("z must lie in the open unit disk")
    zz = np.atleast_1d(z)

    def integrand(t, u):
        ft = _horner(f.coeffs, t.astype(complex))
        return ft * (1.0 - np.multiply.outer(zz, t)) ** (-alpha)

    out = integrate(m, integrand, 0.0, quad)
    return out[0] if z.ndim == 0 else out.reshape(z.shape)


DEFAULT_Z_GRID = tuple(
    complex(r * np.exp(2j * np.pi * k / 8)) for r in (0.3, 0.5, 0.7) for k in range(8)
)


def definedness_gate(m: MeasureSpec, p: float, depth: int = 40) -> CarlesonReport:
    """Sufficient Carleson condition for H f to be defined on H^p:
    1/p-Carleson for p <= 1, 1-Carleson for p > 1."""
    return carleson_report(m, 0.0, 1.0 / p if p <= 1 else 1.0, depth)


def equivalence_residual(
    m: MeasureSpec,
    cfg: OperatorConfig,
    f: PowerSeries,
    z_grid=DEFAULT_Z_GRID,
    gate: CarlesonReport | None = None,
) -> float:
    """max_z |H f(z) - I f(z)| over the grid.  A divergent gate only warns."""
    if gate is not None and gate.divergent:
        warnings.warn(
            f"measure {m.label!r} fails the {gate.s:g}-Carleson gate; "
            "H and I need not agree",
            RuntimeWarning,
            stacklevel=2,
        )
    z = np.asarray(z_grid, dtype=complex)
    hf = apply_hankel(hankel_matrix(m, cfg), f)
    lhs = evaluate(hf, z)
    rhs = apply_integral(m, cfg.alpha, f, z, cfg.quad)
    return float(np.max(np.abs(lhs - rhs)))


def duality_pairing(
    m: MeasureSpec,
    cfg: OperatorConfig,
    f: PowerSeries,
    g: PowerSeries,
    r: float,
) -> tuple[complex, complex]:
    """Both sides of the weighted-area / measure duality identity:

    lhs = int_D conj(H f(rz)) g(rz) (1-|z|^2)^(alpha-2) dA(z)
    rhs = (alpha-1)^(-1) int conj(f(t)) g(r^2 t) dmu(t)
    """
    if cfg.alpha <= 1:
        raise ValueError(f"duality pairing needs alpha > 1, got {cfg.alpha}")
    if not (0.0 < r < 1.0):
        raise ValueError(f"r must lie in (0, 1), got {r}")
    hf = apply_hankel(hankel_matrix(m, cfg), f)
    lhs = area_pairing(hf, g, r, cfg.alpha - 2.0, cfg.grid)

    def integrand(t, u):
        tc = t.astype(complex)
        return np.conj(_horner(f.coeffs, tc)) * _horner(g.coeffs, r * r * tc)

    rhs = complex(integrate(m, integrand, 0.0, cfg.quad)) / (cfg.alpha - 1.0)
    return lhs, rhs

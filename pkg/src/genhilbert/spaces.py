"""Truncated power series on the unit disk and their Hardy, Bergman, Bloch norms.

Integral means on a circle are computed from M equally spaced samples
obtained with one inverse FFT of the scaled coefficients.  For a polynomial
of degree N the trapezoid rule on M > 2N points is exact for |f|^2; the
oversampling M >= 8(N+1) keeps the error for other exponents negligible for
the test families used here.

Area integrals use the substitution u = r^2,

    int_D F(|z|) (1-|z|^2)^beta dA = int_0^1 (1-u)^beta F(sqrt(u)) du,

with a Gauss-Jacobi rule carrying the weight (1-u)^beta exactly.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from functools import lru_cache
import numpy as np
from scipy import special
from scipy.optimize import minimize_scalar


class GridTooCoarseError(ValueError):
    pass


class TruncationError(ValueError):
    """The requested truncation order cannot represent the series accurately."""


@dataclass(frozen=True, eq=False)
class PowerSeries:
    coeffs: np.ndarray
    label: str = "f"

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise ValueError("a power series needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, z):
        return evaluate(self, z)

    def __mul__(self, c: complex) -> PowerSeries:
        return PowerSeries(self.coeffs * c, self.label)

    __rmul__ = __mul__

    def __len__(self):
        return self.coeffs.size

    def derivative(self) -> PowerSeries:
        k = np.arange(1, self.coeffs.size)
        d = self.coeffs[1:] * k if k.size else np.zeros(1)
        return PowerSeries(d, f"{self.label}'")

    def padded(self, n: int) -> np.ndarray:
        out = np.zeros(n + 1, dtype=complex)
        out[: self.coeffs.size] = self.coeffs
        return out

    def to_json(self) -> str:
        return json.dumps([[float(c.real), float(c.imag)] for c in self.coeffs])

    @classmethod
    def from_json(cls, text: str, label: str = "f") -> PowerSeries:
        data = json.loads(text)
        if not isinstance(data, list) or not data:
            raise ValueError("coefficient file must be a nonempty JSON array")
        coeffs = []
        for i, item in enumerate(data):
            if isinstance(item, (int, float)) and not isinstance(item, bool):
                coeffs.append(complex(item))
            elif isinstance(item, list) and len(item) == 2:
                coeffs.append(complex(float(item[0]), float(item[1])))
            else:
                raise ValueError(f"coefficient [{i}]: expected [re, im], got {item!r}")
        return cls(np.array(coeffs), label)


def monomial(k: int, c: complex = 1.0) -> PowerSeries:
    a = np.zeros(k + 1, dtype=complex)
    a[k] = c
    return PowerSeries(a, f"z^{k}" if k else "1")


def evaluate(f: PowerSeries, z) -> np.ndarray | complex:
    """Horner evaluation of the truncated series; rejects |z| >= 1."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1.0):
        raise ValueError("evaluation point outside the open unit disk")
    return _horner(f.coeffs, z)


def _horner(coeffs: np.ndarray, z):
    acc = np.zeros_like(np.asarray(z, dtype=complex)) + coeffs[-1]
    for c in coeffs[-2::-1]:
        acc = acc * z + c
    return acc[()] if np.ndim(acc) == 0 else acc


# ---------------------------------------------------------------------------
# grids


def _next_pow2(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


DEFAULT_RADII = tuple(1.0 - 2.0 ** -j for j in range(1, 21))


@dataclass(frozen=True)
class GridSpec:
    """Sampling grid for norms.  ``angular_size=None`` picks the smallest
    admissible power of two for the series at hand."""

    radii: tuple[float, ...] = DEFAULT_RADII
    angular_size: int | None = None
    bergman_radial_nodes: int = 256

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        if r.size == 0 or np.any(r <= 0) or np.any(r >= 1) or np.any(np.diff(r) <= 0):
            raise ValueError("radii must be strictly increasing values in (0, 1)")
        object.__setattr__(self, "radii", tuple(float(x) for x in r))
        M = self.angular_size
        if M is not None and (M < 1 or M & (M - 1)):
            raise ValueError(f"angular_size must be a power of two, got {M}")
        if self.bergman_radial_nodes < 2:
            raise ValueError("bergman_radial_nodes must be >= 2")

    def angles_for(self, order: int) -> int:
        need = 8 * (order + 1)
        if self.angular_size is None:
            return _next_pow2(need)
        if self.angular_size < need:
            raise GridTooCoarseError(
                f"angular grid M={self.angular_size} too coarse for order {order} "
                f"(need M >= {need})"
            )
        return self.angular_size

    def digest(self) -> str:
        payload = json.dumps(
            [list(self.radii), self.angular_size, self.bergman_radial_nodes]
        ).encode()
        return hashlib.sha1(payload).hexdigest()[:12]


DEFAULT_GRID = GridSpec()


def circle_values(f: PowerSeries, r: float, M: int) -> np.ndarray:
    """f(r e^{2 pi i m / M}) for m = 0..M-1 (requires M > order)."""
    if M <= f.order:
        raise GridTooCoarseError(f"M={M} cannot resolve order {f.order}")
    a = np.zeros(M, dtype=complex)
    a[: f.coeffs.size] = f.coeffs * r ** np.arange(f.coeffs.size)
    return np.fft.ifft(a) * M


def _mean_power(vals: np.ndarray, p: float) -> float:
    return float(np.mean(np.abs(vals) ** p))


def integral_means(f: PowerSeries, r: float, p: float, M: int | None = None) -> float:
    """M_p(r, f).  p = 2 uses the coefficient sum (Parseval); r = 1 is allowed
    since the series is a polynomial."""
    if not (0.0 < r <= 1.0):
        raise ValueError(f"r must lie in (0, 1], got {r}")
    if p <= 0:
        raise ValueError("p must be > 0")
    need = 8 * (f.order + 1)
    if M is None:
        M = _next_pow2(need)
    elif M < need or M & (M - 1):
        raise GridTooCoarseError(f"M={M} must be a power of two >= {need}")
    if p == 2:
        k = np.arange(f.coeffs.size)
        return float(np.sqrt(np.sum(np.abs(f.coeffs) ** 2 * r ** (2 * k))))
    return _mean_power(circle_values(f, r, M), p) ** (1.0 / p)


def hardy_norm(f: PowerSeries, p: float, grid: GridSpec = DEFAULT_GRID) -> float:
    """sup_r M_p(r, f) over the grid radii and r = 1."""
    M = grid.angles_for(f.order)
    radii = (*grid.radii, 1.0)
    return max(integral_means(f, r, p, M) for r in radii)


@lru_cache(maxsize=32)
def jacobi_rule(n: int, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights on [0,1] for int_0^1 (1-u)^beta F(u) du."""
    x, w = special.roots_jacobi(n, beta, 0.0)
    u = 0.5 * (x + 1.0)
    w = w * 0.5 ** (beta + 1.0)
    u.setflags(write=False)
    w.setflags(write=False)
    return u, w


def _radial_means_power(f: PowerSeries, p: float, u: np.ndarray, M: int) -> np.ndarray:
    """M_p(sqrt(u), f)^p at each radial node."""
    if p == 2:
        return np.polynomial.polynomial.polyval(u, np.abs(f.coeffs) ** 2)
    return np.array([_mean_power(circle_values(f, math.sqrt(ui), M), p) for ui in u])


def bergman_norm(
    f: PowerSeries, p: float, beta: float, grid: GridSpec = DEFAULT_GRID
) -> float:
    """((beta+1) int_D |f|^p (1-|z|^2)^beta dA)^(1/p), dA normalized area."""
    if beta <= -1:
        raise ValueError(f"beta must be > -1, got {beta}")
    if p <= 0:
        raise ValueError("p must be > 0")
    M = grid.angles_for(f.order)
    u, w = jacobi_rule(grid.bergman_radial_nodes, float(beta))
    vals = _radial_means_power(f, p, u, M)
    return float(((beta + 1.0) * (w @ vals)) ** (1.0 / p))


def bergman_norm2_exact(f: PowerSeries, beta: float) -> float:
    """Closed form for p = 2: (sum |a_k|^2 k! Gamma(beta+2) / Gamma(k+beta+2))^(1/2)."""
    k = np.arange(f.coeffs.size)
    # (beta+1) B(k+1, beta+1) via the stable ratio recurrence
    ratios = np.ones(k.size)
    ratios[1:] = k[1:] / (k[1:] + beta + 1.0)
    weights = np.cumprod(ratios)
    return float(np.sqrt(np.sum(np.abs(f.coeffs) ** 2 * weights)))


def _effective_order(f: PowerSeries, r: float, rel: float = 1e-18) -> int:
    """Largest k with |a_k| r^k above rel times the largest scaled coefficient."""
    scaled = np.abs(f.coeffs) * r ** np.arange(f.coeffs.size)
    top = scaled.max()
    if top == 0:
        return 0
    return int(np.nonzero(scaled > rel * top)[0][-1])


def area_pairing(
    h: PowerSeries,
    g: PowerSeries,
    r: float,
    beta: float,
    grid: GridSpec = DEFAULT_GRID,
) -> complex:
    """int_D conj(h(rz)) g(rz) (1-|z|^2)^beta dA(z), by angular FFT x radial Gauss-Jacobi.

    Coefficients whose contribution at radius r is below 1e-18 of the
    largest are dropped before sampling.
    """
    if not (0.0 < r < 1.0):
        raise ValueError(f"r must lie in (0, 1), got {r}")
    if beta <= -1:
        raise ValueError(f"beta must be > -1, got {beta}")
    kh, kg = _effective_order(h, r), _effective_order(g, r)
    M = grid.angles_for(max(kh, kg))
    u, w = jacobi_rule(grid.bergman_radial_nodes, float(beta))
    rho = r * np.sqrt(u)
    vals = np.empty(u.size, dtype=complex)
    # batches of radial nodes keep the sample block near 32 MiB
    step = max(1, (1 << 21) // M)
    for lo in range(0, u.size, step):
        rr = rho[lo : lo + step, None]
        H = np.zeros((rr.shape[0], M), dtype=complex)
        G = np.zeros((rr.shape[0], M), dtype=complex)
        H[:, : kh + 1] = h.coeffs[: kh + 1] * rr ** np.arange(kh + 1)
        G[:, : kg + 1] = g.coeffs[: kg + 1] * rr ** np.arange(kg + 1)
        hv = np.fft.ifft(H, axis=1) * M
        gv = np.fft.ifft(G, axis=1) * M
        vals[lo : lo + step] = np.mean(np.conj(hv) * gv, axis=1)
    return complex(w @ vals)


def bloch_norm(f: PowerSeries, grid: GridSpec = DEFAULT_GRID) -> float:
    """|f(0)| + sup (1-|z|^2)|f'(z)|: grid search over {0} and the grid radii
    (plus r = 1, where the weight vanishes), then a bounded 1-D refinement
    in r around the best grid point at its angle."""
    a0 = abs(f.coeffs[0])
    if f.order == 0:
        return float(a0)
    df = f.derivative()
    M = grid.angles_for(f.order)
    radii = np.array([0.0, *grid.radii, 1.0])
    best, best_i, best_m = -1.0, 0, 0
    for i, r in enumerate(radii[:-1]):
        vals = (1.0 - r * r) * np.abs(circle_values(df, r, M))
        m = int(np.argmax(vals))
        if vals[m] > best:
            best, best_i, best_m = float(vals[m]), i, m
    theta = 2.0 * np.pi * best_m / M
    lo, hi = radii[max(best_i - 1, 0)], radii[best_i + 1]

    def neg(r):
        return -(1.0 - r * r) * abs(_horner(df.coeffs, r * np.exp(1j * theta)))

    res = minimize_scalar(neg, bounds=(lo, min(hi, 1.0 - 1e-15)), method="bounded",
                          options={"xatol": 1e-12})
    best = max(best, float(-res.fun))
    return float(a0 + best)


# ---------------------------------------------------------------------------
# extremal test functions


def truncation_order(a: float, e: float = 1.0, tol: float = 1e-12) -> int:
    """Smallest N with a^N < tol whose binomial coefficients of
    (1-az)^(-2e) have also dropped below tol relative to their peak."""
    if not (0.0 <= a < 1.0):
        raise ValueError(f"a must lie in [0, 1), got {a}")
    if a == 0.0:
        return 1
    n = max(1, math.ceil(math.log(tol) / math.log(a)))
    # coefficient size ~ k^(2e-1) a^k; extend until the ratio term is small
    while True:
        logb = (2 * e - 1) * math.log(n + 1) + n * math.log(a)
        if 2 * e <= 1 or logb < math.log(tol):
            return n
        n = int(n * 1.25) + 1


def _check_order(a: float, N: int):
    if not (0.0 <= a < 1.0):
        raise ValueError(f"a must lie in [0, 1), got {a}")
    if N < 0:
        raise ValueError("N must be >= 0")
    if a > 0.0 and not a**N < 1e-12:
        raise TruncationError(f"order N={N} too small for a={a}: a^N = {a**N:.3g} >= 1e-12")


def kernel_power(a: float, e: float, N: int, label: str | None = None) -> PowerSeries:
    """Coefficients of ((1-a^2)/(1-az)^2)^e by the binomial recurrence."""
    _check_order(a, N)
    b = np.empty(N + 1)
    b[0] = (1.0 - a * a) ** e
    k = np.arange(N, dtype=float)
    b[1:] = a * (k + 2.0 * e) / (k + 1.0)
    b = np.cumprod(b)
    return PowerSeries(b, label or f"k(a={a:g},e={e:g})")


def test_fa(a: float, p: float, N: int | None = None) -> PowerSeries:
    """f_a(z) = ((1-a^2)/(1-az)^2)^(1/p)."""
    if p <= 0:
        raise ValueError("p must be > 0")
    if N is None:
        N = truncation_order(a, 1.0 / p)
    return kernel_power(a, 1.0 / p, N, f"f_a(a={a:g},p={p:g})")


def test_ga_bergman(a: float, e: float, N: int | None = None) -> PowerSeries:
    """g_a(z) = ((1-a^2)/(1-az)^2)^e."""
    if e <= 0:
        raise ValueError("e must be > 0")
    if N is None:
        N = truncation_order(a, e)
    return kernel_power(a, e, N, f"g_a(a={a:g},e={e:g})")


def test_ga_log(a: float, N: int | None = None) -> PowerSeries:
    """g_a(z) = log(2/(1-az)) = log 2 + sum_k a^k z^k / k."""
    if N is None:
        N = truncation_order(a, 0.5)
    _check_order(a, N)
    k = np.arange(1, N + 1, dtype=float)
    c = np.empty(N + 1)
    c[0] = math.log(2.0)
    c[1:] = a**k / k
    return PowerSeries(c, f"log_a(a={a:g})")


# pytest would otherwise collect these when imported into a test module
test_fa.__test__ = False
test_ga_bergman.__test__ = False
test_ga_log.__test__ = False


# ---------------------------------------------------------------------------
# coefficient estimates


@dataclass(frozen=True)
class CoeffReport:
    p: float
    max_ratio: float
    weighted_sum: float
    log_growth: bool


def coeff_checks(f: PowerSeries, p: float) -> CoeffReport:
    """max_n |a_n|/(n+1)^(1/p-1) and sum (n+1)^(p-2)|a_n|^p.

    ``log_growth`` flags a sum whose terms decay no faster than 1/n over the
    upper half of the index range, i.e. one that keeps growing like log N
    as the truncation is extended.
    """
    if not (0.0 < p <= 2.0):
        raise ValueError(f"p must lie in (0, 2], got {p}")
    n1 = np.arange(1, f.coeffs.size + 1, dtype=float)
    mag = np.abs(f.coeffs)
    ratio = mag / n1 ** (1.0 / p - 1.0)
    terms = n1 ** (p - 2.0) * mag**p
    half = f.coeffs.size // 2
    upper = (n1 * terms)[half:]
    log_growth = bool(
        f.coeffs.size >= 8 and upper.max() > 0 and upper.min() >= 0.5 * upper.max()
    )
    return CoeffReport(float(p), float(ratio.max()), float(terms.sum()), log_growth)


def norm_row(f: PowerSeries, kind: str, param: float, value: float, grid: GridSpec) -> list:
    """(label, kind, p-or-beta, value, grid digest) for CSV norm reports."""
    return [f.label, kind, param, value, grid.digest()]

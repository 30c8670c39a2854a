"""Positive Borel measures on [0, 1): atoms plus power-log densities.

A measure is a finite sum of point masses ``w * delta_t`` and density terms

    c * (1-t)^(gamma-1) * log(2/(1-t))^(-beta) dt,     c > 0, gamma > 0.

This family realizes every (log-)Carleson exponent the boundedness and
compactness tests distinguish: the tail of a density term behaves like
(1-t)^gamma * log(2/(1-t))^(-beta) near t = 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterable

import numpy as np

from .quadrature import DEFAULT_QUAD, QuadSettings, integrate_tail


class SpecError(ValueError):
    """Invalid measure specification (bad field, non-integrable term, ...)."""


@dataclass(frozen=True)
class DensityTerm:
    c: float
    gamma: float
    beta: float = 0.0

    def weight(self, u: np.ndarray) -> np.ndarray:
        """Density value as a function of u = 1 - t."""
        w = self.c * u ** (self.gamma - 1.0)
        if self.beta != 0.0:
            w = w * np.log(2.0 / u) ** (-self.beta)
        return w


def _as_float(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecError(f"{where}: expected a number, got {value!r}")
    x = float(value)
    if not math.isfinite(x):
        raise SpecError(f"{where}: must be finite, got {value!r}")
    return x


@dataclass(frozen=True)
class MeasureSpec:
    """Immutable positive measure on [0, 1).

    Construction validates every field and computes the total mass, so a
    spec that exists is always a finite, nonzero measure.
    """

    atoms: tuple[tuple[float, float], ...] = ()
    density: tuple[DensityTerm, ...] = ()
    label: str = "measure"
    total_mass: float = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        atoms = tuple(
            (_as_float(t, f"atoms[{i}].t"), _as_float(w, f"atoms[{i}].w"))
            for i, (t, w) in enumerate(self.atoms)
        )
        terms = []
        for i, d in enumerate(self.density):
            if not isinstance(d, DensityTerm):
                d = DensityTerm(*d)
            c = _as_float(d.c, f"density[{i}].c")
            gamma = _as_float(d.gamma, f"density[{i}].gamma")
            beta = _as_float(d.beta, f"density[{i}].beta")
            if c <= 0:
                raise SpecError(f"density[{i}].c: must be > 0, got {c}")
            if gamma <= 0:
                raise SpecError(
                    f"density[{i}].gamma: must be > 0 for a finite measure, got {gamma}"
                )
            terms.append(DensityTerm(c, gamma, beta))
        for i, (t, w) in enumerate(atoms):
            if not (0.0 <= t < 1.0):
                raise SpecError(f"atoms[{i}].t: must lie in [0, 1), got {t}")
            if w <= 0:
                raise SpecError(f"atoms[{i}].w: must be > 0, got {w}")
        if not atoms and not terms:
            raise SpecError("empty spec is the zero measure")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "density", tuple(terms))
        mass = tail_mass(self, 0.0)
        if not (math.isfinite(mass) and mass > 0):
            raise SpecError(f"total mass is not finite and positive: {mass}")
        object.__setattr__(self, "total_mass", mass)

    # convenience constructors -------------------------------------------

    @classmethod
    def atom(cls, t: float, w: float = 1.0, label: str | None = None) -> MeasureSpec:
        return cls(atoms=((t, w),), label=label or f"atom({t:g},{w:g})")

    @classmethod
    def power(
        cls, gamma: float, c: float | None = None, beta: float = 0.0, label: str | None = None
    ) -> MeasureSpec:
        """c (1-t)^(gamma-1) log(2/(1-t))^(-beta) dt; c defaults to gamma.

        With the default c and beta = 0 the tail is exactly (1-t)^gamma.
        """
        c = gamma if c is None else c
        name = label or f"power(c={c:g},gamma={gamma:g},beta={beta:g})"
        return cls(density=(DensityTerm(c, gamma, beta),), label=name)

    @classmethod
    def lebesgue(cls) -> MeasureSpec:
        return cls.power(1.0, label="lebesgue")

    def __add__(self, other: MeasureSpec) -> MeasureSpec:
        return MeasureSpec(
            self.atoms + other.atoms,
            self.density + other.density,
            f"{self.label}+{other.label}",
        )

    # serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "atoms": [[t, w] for t, w in self.atoms],
            "density": [{"c": d.c, "gamma": d.gamma, "beta": d.beta} for d in self.density],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: Any) -> MeasureSpec:
        if not isinstance(data, dict):
            raise SpecError("measure spec must be a JSON object")
        unknown = set(data) - {"label", "atoms", "density"}
        if unknown:
            raise SpecError(f"unknown field(s): {sorted(unknown)}")
        atoms = data.get("atoms", [])
        dens = data.get("density", [])
        if not isinstance(atoms, list):
            raise SpecError("atoms: expected a list of [t, w] pairs")
        if not isinstance(dens, list):
            raise SpecError("density: expected a list of objects")
        parsed_atoms = []
        for i, a in enumerate(atoms):
            if not isinstance(a, (list, tuple)) or len(a) != 2:
                raise SpecError(f"atoms[{i}]: expected [t, w], got {a!r}")
            parsed_atoms.append((a[0], a[1]))
        terms = []
        for i, d in enumerate(dens):
            if not isinstance(d, dict):
                raise SpecError(f"density[{i}]: expected an object, got {d!r}")
            extra = set(d) - {"c", "gamma", "beta"}
            if extra:
                raise SpecError(f"density[{i}]: unknown field(s) {sorted(extra)}")
            for key in ("c", "gamma"):
                if key not in d:
                    raise SpecError(f"density[{i}].{key}: missing")
            terms.append(
                DensityTerm(
                    _as_float(d["c"], f"density[{i}].c"),
                    _as_float(d["gamma"], f"density[{i}].gamma"),
                    _as_float(d.get("beta", 0.0), f"density[{i}].beta"),
                )
            )
        label = data.get("label", "measure")
        if not isinstance(label, str):
            raise SpecError("label: expected a string")
        return cls(tuple(parsed_atoms), tuple(terms), label)

    @classmethod
    def from_json(cls, text: str) -> MeasureSpec:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
        return cls.from_dict(data)


# ---------------------------------------------------------------------------
# tails and moments


def integrate(
    m: MeasureSpec,
    func,
    t0: float = 0.0,
    quad: QuadSettings = DEFAULT_QUAD,
):
    """Integral of ``func(t, u)`` over [t0, 1) against m, where u = 1 - t.

    Atoms at or above t0 are summed exactly; density terms go through the
    panel quadrature.  ``func`` may return extra leading axes (vector
    integrands).
    """
    total = 0.0
    for t, w in m.atoms:
        if t >= t0:
            total = total + w * np.asarray(func(np.array([t]), np.array([1.0 - t])))[..., 0]
    if m.density:
        terms = m.density

        def weighted(t, u):
            dens = sum(d.weight(u) for d in terms)
            return func(t, u) * dens

        total = total + integrate_tail(weighted, t0, quad)
    return total


def tail_mass(m: MeasureSpec, t: float, quad: QuadSettings = DEFAULT_QUAD) -> float:
    """mu([t, 1)).  Closed form for beta = 0 terms, quadrature otherwise."""
    if not (0.0 <= t < 1.0):
        raise ValueError(f"t must lie in [0, 1), got {t}")
    u0 = 1.0 - t
    total = sum(w for ti, w in m.atoms if ti >= t)
    for d in m.density:
        if d.beta == 0.0:
            total += d.c * u0**d.gamma / d.gamma
        else:
            total += float(integrate_tail(lambda _t, u, d=d: d.weight(u), t, quad))
    return float(total)


def _beta_sequence(nmax: int, gamma: float) -> np.ndarray:
    """B(n+1, gamma) for n = 0..nmax."""
    n = np.arange(nmax + 1, dtype=float)
    if gamma == int(gamma) and gamma <= 64:
        g = int(gamma)
        # (g-1)! / ((n+1)(n+2)...(n+g)); at most g roundings per entry
        out = np.full(nmax + 1, float(math.factorial(g - 1)))
        for i in range(1, g + 1):
            out /= n + i
        return out
    ratios = np.empty(nmax + 1)
    ratios[0] = 1.0 / gamma
    ratios[1:] = n[1:] / (n[1:] + gamma)
    return np.cumprod(ratios)


@lru_cache(maxsize=256)
def _moment_vector(m: MeasureSpec, nmax: int, quad: QuadSettings) -> np.ndarray:
    n = np.arange(nmax + 1, dtype=float)
    out = np.zeros(nmax + 1)
    for t, w in m.atoms:
        out += w * t**n
    for d in m.density:
        if d.beta == 0.0:
            out += d.c * _beta_sequence(nmax, d.gamma)
        else:
            def powers(t, u, d=d):
                # t^n = exp(n log1p(-u)) keeps precision for t near 1
                return np.exp(np.outer(n, np.log1p(-u))) * d.weight(u)

            out += integrate_tail(powers, 0.0, quad)
    out.setflags(write=False)
    return out


def moments(m: MeasureSpec, nmax: int, quad: QuadSettings = DEFAULT_QUAD) -> np.ndarray:
    """Vector of moments mu_n = int t^n dmu for n = 0..nmax (read-only)."""
    if nmax < 0:
        raise ValueError("nmax must be >= 0")
    return _moment_vector(m, int(nmax), quad)


def moment(m: MeasureSpec, n: int, quad: QuadSettings = DEFAULT_QUAD) -> float:
    if n < 0:
        raise ValueError("moment order must be >= 0")
    return float(moments(m, n, quad)[n])


# ---------------------------------------------------------------------------
# weighted transforms


def log_weighted(m: MeasureSpec) -> MeasureSpec:
    """dnu = log(2/(1-t)) dmu."""
    atoms = tuple((t, w * math.log(2.0 / (1.0 - t))) for t, w in m.atoms)
    terms = tuple(DensityTerm(d.c, d.gamma, d.beta - 1.0) for d in m.density)
    return MeasureSpec(atoms, terms, f"log*{m.label}")


def power_weighted(m: MeasureSpec, e: float) -> MeasureSpec:
    """dnu = (1-t)^(-e) dmu; rejects terms that become non-integrable."""
    if e <= 0:
        raise ValueError(f"exponent must be > 0, got {e}")
    for i, d in enumerate(m.density):
        if d.gamma - e <= 0:
            raise SpecError(
                f"density[{i}]: (1-t)^-{e:g} weighting is non-integrable "
                f"(gamma - e = {d.gamma - e:g} <= 0)"
            )
    atoms = tuple((t, w * (1.0 - t) ** (-e)) for t, w in m.atoms)
    terms = tuple(DensityTerm(d.c, d.gamma - e, d.beta) for d in m.density)
    return MeasureSpec(atoms, terms, f"(1-t)^-{e:g}*{m.label}")


# ---------------------------------------------------------------------------
# Carleson quotients


@dataclass(frozen=True)
class CarlesonThresholds:
    """Finite-grid cutoffs for the asymptotic Carleson conditions.

    A quotient profile is divergent when its last ``window`` values rise
    and either every step grows by more than ``growth_factor`` (power
    growth) or the log-log slope of quotient against log(2/(1-t)) is at
    least ``log_growth_slope`` (logarithmic growth, which the ratio rule
    cannot see on a geometric grid).  It is vanishing when the last
    ``window`` values are nonincreasing and the final one is below
    ``vanish_ratio`` times the maximum.
    """

    window: int = 5
    growth_factor: float = 1.05
    log_growth_slope: float = 0.25
    vanish_ratio: float = 1e-3


DEFAULT_THRESHOLDS = CarlesonThresholds()


@dataclass(frozen=True)
class CarlesonReport:
    a: float
    s: float
    grid: tuple[float, ...]
    quotients: tuple[float, ...]
    constant: float
    argmax_t: float
    divergent: bool
    vanishing: bool
    label: str = ""

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "a": self.a,
            "s": self.s,
            "constant": self.constant,
            "argmax_t": self.argmax_t,
            "divergent": self.divergent,
            "vanishing": self.vanishing,
            "grid": list(self.grid),
            "quotients": list(self.quotients),
        }

    def rows(self) -> list[tuple[int, float, float]]:
        return [(j, t, q) for j, (t, q) in enumerate(zip(self.grid, self.quotients))]


def _is_divergent(q: np.ndarray, logs: np.ndarray, th: CarlesonThresholds) -> bool:
    tail = q[-th.window:]
    if np.any(tail <= 0) or not np.all(np.diff(tail) > 0):
        return False
    if np.all(tail[1:] / tail[:-1] > th.growth_factor):
        return True
    slope = np.polyfit(np.log(logs[-th.window:]), np.log(tail), 1)[0]
    return bool(slope >= th.log_growth_slope)


def carleson_report(
    m: MeasureSpec,
    a: float,
    s: float,
    depth: int = 40,
    quad: QuadSettings = DEFAULT_QUAD,
    thresholds: CarlesonThresholds = DEFAULT_THRESHOLDS,
) -> CarlesonReport:
    """Quotients log(2/(1-t))^a mu([t,1)) / (1-t)^s on t_j = 1 - 2^-j, j = 0..depth."""
    if a < 0 or s <= 0:
        raise ValueError(f"need a >= 0 and s > 0, got a={a}, s={s}")
    if depth < 8:
        raise ValueError(f"depth must be >= 8, got {depth}")
    u = 2.0 ** -np.arange(depth + 1, dtype=float)
    t = 1.0 - u
    logs = np.log(2.0 / u)
    tails = np.array([tail_mass(m, float(tj), quad) for tj in t])
    q = logs**a * tails / u**s
    imax = int(np.argmax(q))  # first maximizer, i.e. smallest t
    divergent = _is_divergent(q, logs, thresholds)
    tail = q[-thresholds.window:]
    vanishing = (
        not divergent
        and bool(np.all(np.diff(tail) <= 0))
        and bool(tail[-1] < thresholds.vanish_ratio * q[imax])
    )
    return CarlesonReport(
        a=float(a),
        s=float(s),
        grid=tuple(t.tolist()),
        quotients=tuple(q.tolist()),
        constant=float(q[imax]),
        argmax_t=float(t[imax]),
        divergent=bool(divergent),
        vanishing=vanishing,
        label=m.label,
    )


def family(gammas: Iterable[float]) -> list[MeasureSpec]:
    """Calibrated densities gamma (1-t)^(gamma-1) dt, whose tails are (1-t)^gamma."""
    return [MeasureSpec.power(g) for g in gammas]

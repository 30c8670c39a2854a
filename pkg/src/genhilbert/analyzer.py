"""Executable boundedness / compactness verdicts for H_{mu,alpha}: H^p -> A^q_{alpha-2} or Bloch.

Branches (alpha > 1, q' the conjugate of q):

    (i)   q > 1, q >= alpha p    a = 0, s = 1/p + alpha/q'
    (ii)  q = 1 >= p             a = 1, s = 1/p
    (iii) target Bloch space     a = 0, s = 1/p + alpha

H is bounded iff mu is an a-logarithmic s-Carleson measure and compact iff
it is a vanishing one.  The Carleson quotient profile decides; the extremal
pairing Phi(a) along a_j = 1 - 2^-j is computed as an independent signal
and its growth exponent is fitted.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .measures import (
    DEFAULT_THRESHOLDS,
    CarlesonReport,
    CarlesonThresholds,
    MeasureSpec,
    carleson_report,
    integrate,
)
from .operator import definedness_gate
from .quadrature import DEFAULT_QUAD, QuadSettings
from .spaces import (
    DEFAULT_GRID,
    GridSpec,
    PowerSeries,
    _horner,
    bergman_norm,
    hardy_norm,
    test_fa,
    test_ga_bergman,
)

BLOCH = None  # q value selecting the Bloch-space target

OUT_OF_RANGE = "out-of-range"


@dataclass(frozen=True)
class AnalysisSettings:
    depth: int = 40
    pairing_j: tuple[int, ...] = tuple(range(1, 13))
    fit_points: int = 6
    slope_tol: float = 0.1
    thresholds: CarlesonThresholds = DEFAULT_THRESHOLDS
    quad: QuadSettings = DEFAULT_QUAD


DEFAULT_ANALYSIS = AnalysisSettings()


@dataclass
class VerdictReport:
    p: float
    q: float | None
    alpha: float
    mode: str
    branch: str
    verdict: str
    required_exponents: tuple[float, float] | None = None
    carleson: CarlesonReport | None = None
    pairing_values: list[tuple[float, float]] = field(default_factory=list)
    fitted_slope: float = float("nan")
    notes: list[str] = field(default_factory=list)
    label: str = ""

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "p": self.p,
            "q": "bloch" if self.q is None else self.q,
            "alpha": self.alpha,
            "mode": self.mode,
            "branch": self.branch,
            "verdict": self.verdict,
            "required_exponents": (
                None if self.required_exponents is None else list(self.required_exponents)
            ),
            "fitted_slope": None if math.isnan(self.fitted_slope) else self.fitted_slope,
            "pairing_values": [list(v) for v in self.pairing_values],
            "notes": list(self.notes),
            "carleson": None if self.carleson is None else self.carleson.to_dict(),
        }


def conjugate(q: float) -> float:
    return q / (q - 1.0)


def select_branch(p: float, q: float | None, alpha: float) -> str:
    """'i', 'ii', 'iii' or 'out-of-range'; q = None means the Bloch target."""
    if not (p > 0 and alpha > 1):
        return OUT_OF_RANGE
    if q is None:
        return "iii"
    if q > 1 and q >= alpha * p:
        return "i"
    if q == 1 and p <= 1:
        return "ii"
    return OUT_OF_RANGE


def required_exponents(branch: str, p: float, q: float | None, alpha: float) -> tuple[float, float]:
    """(log exponent a, power exponent s) of the branch's Carleson condition."""
    if branch == "i":
        return 0.0, 1.0 / p + alpha / conjugate(q)
    if branch == "ii":
        return 1.0, 1.0 / p
    if branch == "iii":
        return 0.0, 1.0 / p + alpha
    raise ValueError(f"no Carleson condition for branch {branch!r}")


def _kernel(a: float, t: np.ndarray, u: np.ndarray, e: float, shrink: float = 1.0) -> np.ndarray:
    """((1-a^2)/(1 - a*shrink*t)^2)^e computed without cancellation near t = 1."""
    ab = a * shrink
    one_minus = (1.0 - ab) + ab * u
    return ((1.0 - a * a) / one_minus**2) ** e


def pairing_integrand(branch: str, p: float, q: float | None, alpha: float, a: float):
    """f_a(t) * g_a(...) for the branch's extremal test pair, with r = a."""
    fe = 1.0 / p
    if branch == "i":
        e = alpha / conjugate(q)
        return lambda t, u: _kernel(a, t, u, fe + e)
    if branch == "ii":
        def f(t, u):
            ab = a**3
            return _kernel(a, t, u, fe) * np.log(2.0 / ((1.0 - ab) + ab * u))
        return f
    if branch == "iii":
        return lambda t, u: _kernel(a, t, u, fe) * _kernel(a, t, u, alpha, shrink=a * a)
    raise ValueError(f"no pairing for branch {branch!r}")


def extremal_pairing(
    m: MeasureSpec,
    branch: str,
    p: float,
    q: float | None,
    alpha: float,
    settings: AnalysisSettings = DEFAULT_ANALYSIS,
) -> tuple[list[tuple[float, float]], float]:
    """Phi(a_j) for a_j = 1 - 2^-j and the least-squares slope of log Phi
    against log(1/(1-a)) over the last ``fit_points`` values."""
    values = []
    for j in settings.pairing_j:
        a = 1.0 - 2.0**-j
        phi = float(np.real(integrate(m, pairing_integrand(branch, p, q, alpha, a), 0.0,
                                      settings.quad)))
        values.append((a, phi))
    tail = values[-settings.fit_points:]
    x = np.array([math.log(1.0 / (1.0 - a)) for a, _ in tail])
    y = np.log(np.array([v for _, v in tail]))
    slope = float(np.polyfit(x, y, 1)[0])
    return values, slope


def _gate_note(m: MeasureSpec, p: float, depth: int) -> list[str]:
    gate = definedness_gate(m, p, depth)
    if gate.divergent:
        return [f"well-definedness gate ({gate.s:g}-Carleson) fails; verdict is formal"]
    return []


def _base_report(m, p, q, alpha, mode, settings):
    if alpha <= 1:
        raise ValueError(f"verdicts need alpha > 1, got {alpha}")
    if p <= 0:
        raise ValueError(f"p must be > 0, got {p}")
    branch = select_branch(p, q, alpha)
    rep = VerdictReport(p=p, q=q, alpha=alpha, mode=mode, branch=branch,
                        verdict=OUT_OF_RANGE, label=m.label)
    if branch == OUT_OF_RANGE:
        rep.notes.append("(p, q, alpha) outside every characterized branch; no classification")
        return rep
    a_exp, s_exp = required_exponents(branch, p, q, alpha)
    rep.required_exponents = (a_exp, s_exp)
    rep.carleson = carleson_report(m, a_exp, s_exp, settings.depth, settings.quad,
                                   settings.thresholds)
    rep.pairing_values, rep.fitted_slope = extremal_pairing(m, branch, p, q, alpha, settings)
    rep.notes.extend(_gate_note(m, p, settings.depth))
    return rep


def boundedness_verdict(
    m: MeasureSpec,
    p: float,
    q: float | None,
    alpha: float,
    settings: AnalysisSettings = DEFAULT_ANALYSIS,
) -> VerdictReport:
    rep = _base_report(m, p, q, alpha, "bounded", settings)
    if rep.branch == OUT_OF_RANGE:
        return rep
    bounded = not rep.carleson.divergent
    rep.verdict = "bounded" if bounded else "unbounded"
    grows = rep.fitted_slope > settings.slope_tol
    if bounded == grows:
        rep.notes.append(
            f"pairing slope {rep.fitted_slope:.3g} disagrees with the Carleson quotient; "
            "quotient decides"
        )
    return rep


def _pairing_vanishes(rep: VerdictReport, settings: AnalysisSettings) -> bool:
    vals = [v for _, v in rep.pairing_values]
    return rep.fitted_slope < -settings.slope_tol and vals[-1] < vals[0]


def compactness_verdict(
    m: MeasureSpec,
    p: float,
    q: float | None,
    alpha: float,
    settings: AnalysisSettings = DEFAULT_ANALYSIS,
) -> VerdictReport:
    """compact iff the quotient vanishes and the extremal pairing tends to 0."""
    rep = _base_report(m, p, q, alpha, "compact", settings)
    if rep.branch == OUT_OF_RANGE:
        return rep
    vanishing = rep.carleson.vanishing
    to_zero = _pairing_vanishes(rep, settings)
    if rep.carleson.divergent:
        rep.notes.append("operator is unbounded")
    if vanishing != to_zero:
        rep.notes.append(
            f"signals disagree: quotient vanishing={vanishing}, pairing->0={to_zero}"
        )
    rep.verdict = "compact" if vanishing and to_zero else "not-compact"
    return rep


def classify(
    m: MeasureSpec,
    p: float,
    q: float | None,
    alpha: float,
    settings: AnalysisSettings = DEFAULT_ANALYSIS,
) -> VerdictReport:
    """Single three-way verdict: unbounded, bounded (not compact) or compact."""
    rep = compactness_verdict(m, p, q, alpha, settings)
    rep.mode = "classify"
    if rep.branch == OUT_OF_RANGE:
        return rep
    if rep.carleson.divergent:
        rep.verdict = "unbounded"
    elif rep.verdict != "compact":
        rep.verdict = "bounded"
    return rep


MODES = {"bounded": boundedness_verdict, "compact": compactness_verdict, "classify": classify}


# ---------------------------------------------------------------------------
# embedding checks


@dataclass
class EmbeddingReport:
    kind: str
    p: float
    q: float
    ratios: list[tuple[str, float]]
    sweep: list[tuple[float, float]]
    max_ratio: float
    slope: float
    spread: float
    stable: bool


def _lq_norm(m: MeasureSpec, f: PowerSeries, q: float, quad: QuadSettings) -> float:
    val = integrate(m, lambda t, u: np.abs(_horner(f.coeffs, t.astype(complex))) ** q, 0.0, quad)
    return float(val) ** (1.0 / q)


def _embedding(kind, m, p, q, corpus, family, denom, quad, slope_tol, max_spread):
    ratios = [(f.label, _lq_norm(m, f, q, quad) / denom(f)) for f in corpus]
    sweep = []
    for a, f in family:
        r = _lq_norm(m, f, q, quad) / denom(f)
        ratios.append((f.label, r))
        sweep.append((a, r))
    x = np.log([1.0 - a for a, _ in sweep[1:]])
    y = np.log([r for _, r in sweep[1:]])
    slope = float(np.polyfit(x, y, 1)[0])
    rs = [r for _, r in sweep]
    spread = max(rs) / rs[0]
    stable = slope > -slope_tol and spread <= max_spread
    return EmbeddingReport(kind, p, q, ratios, sweep, max(r for _, r in ratios), slope,
                           spread, stable)


def embedding_check_hardy(
    m: MeasureSpec,
    p: float,
    q: float,
    corpus: Sequence[PowerSeries] = (),
    a_values: Iterable[float] = (0.5, 0.9, 0.99, 0.999),
    grid: GridSpec = DEFAULT_GRID,
    quad: QuadSettings = DEFAULT_QUAD,
    slope_tol: float = 0.1,
    max_spread: float = 4.0,
) -> EmbeddingReport:
    """R(f) = ||f||_{L^q(mu)} / ||f||_{H^p} over the corpus plus the f_a family.

    The slope is that of log R(f_a) against log(1-a), fitted on the sweep
    without its first point.  Stable means the slope shows no growth beyond
    ``slope_tol`` and R never exceeds ``max_spread`` times its value at the
    first sweep point.
    """
    if not (0 < p <= q):
        raise ValueError("need 0 < p <= q")
    family = [(a, test_fa(a, p)) for a in a_values]
    return _embedding("hardy", m, p, q, corpus, family,
                      lambda f: hardy_norm(f, p, grid), quad, slope_tol, max_spread)


def embedding_check_bergman(
    m: MeasureSpec,
    p: float,
    q: float,
    beta: float,
    corpus: Sequence[PowerSeries] = (),
    a_values: Iterable[float] = (0.5, 0.9, 0.99),
    grid: GridSpec = DEFAULT_GRID,
    quad: QuadSettings = DEFAULT_QUAD,
    slope_tol: float = 0.1,
    max_spread: float = 4.0,
) -> EmbeddingReport:
    """As :func:`embedding_check_hardy` with ||f||_{A^p_beta} in the denominator
    and g_a = ((1-a^2)/(1-az)^2)^((2+beta)/p), whose A^p_beta norms stay bounded."""
    if not (0 < p <= q):
        raise ValueError("need 0 < p <= q")
    if beta <= -1:
        raise ValueError("beta must be > -1")
    e = (2.0 + beta) / p
    family = [(a, test_ga_bergman(a, e)) for a in a_values]
    return _embedding("bergman", m, p, q, corpus, family,
                      lambda f: bergman_norm(f, p, beta, grid), quad, slope_tol, max_spread)


# ---------------------------------------------------------------------------
# sweeps


SWEEP_COLUMNS = (
    "family", "p", "q", "alpha", "mode", "branch", "a_exp", "s_exp", "constant",
    "divergent", "vanishing", "fitted_slope", "verdict", "error",
)


def _cell(m: MeasureSpec, params: dict, mode: str, settings: AnalysisSettings) -> dict:
    row = dict.fromkeys(SWEEP_COLUMNS, "")
    row.update(family=m.label, p=params.get("p"), q=params.get("q"),
               alpha=params.get("alpha"), mode=mode)
    try:
        q = params["q"]
        q = None if q in (None, "bloch") else float(q)
        rep = MODES[mode](m, float(params["p"]), q, float(params["alpha"]), settings)
    except Exception as exc:  # recorded per cell, the sweep continues
        row["error"] = f"{type(exc).__name__}: {exc}"
        return row
    row.update(branch=rep.branch, verdict=rep.verdict)
    if rep.carleson is not None:
        row.update(
            a_exp=rep.required_exponents[0],
            s_exp=rep.required_exponents[1],
            constant=rep.carleson.constant,
            divergent=rep.carleson.divergent,
            vanishing=rep.carleson.vanishing,
            fitted_slope=rep.fitted_slope,
        )
    return row


def sweep(
    families: Sequence[MeasureSpec],
    params: Sequence[dict],
    mode: str = "classify",
    settings: AnalysisSettings = DEFAULT_ANALYSIS,
    workers: int = 1,
) -> list[dict]:
    """Cross product of verdicts, rows ordered by family then params."""
    if not families:
        raise ValueError("sweep needs at least one measure family")
    if not params:
        raise ValueError("sweep needs at least one (p, q, alpha) parameter set")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {sorted(MODES)}")
    jobs = [(m, prm) for m in families for prm in params]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda job: _cell(job[0], job[1], mode, settings), jobs))
    return [_cell(m, prm, mode, settings) for m, prm in jobs]

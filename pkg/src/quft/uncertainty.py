"""Uncertainty-principle functionals and the decay-regime classifier.

For decay rates alpha (spatial) and beta (frequency) the product alpha*beta
against pi^2 separates three regimes: above it only the zero signal can
satisfy matched Gaussian decay bounds on both sides, at it only constant
quaternion multiples of the matched Gaussian survive, and below it
infinitely many signals qualify. The functionals here make those regimes
observable on finite grids:

* the log-plus functional integrates log^+(|F(xi)| e^{beta |xi|^2} / rho)
  over the frequency window,
* the Hardy pair takes weighted sups on both sides,
* the Cowling-Price pair integrates p-th and q-th powers of the weighted
  moduli.

Finite windows cannot certify an improper integral, so divergence is
reported heuristically: the boundary ring of the window is compared with
the ring just inside it, and a growing integrand raises a flag. Nested
evaluations over doubling windows (``miyachi_nested``) make the dichotomy
concrete: convergent integrands produce Cauchy-like value sequences while
supercritical probes grow without sign of stopping.

Numerical caution: the weight exp(beta |xi|^2) amplifies everything,
including the rounding floor of numerically computed spectra (about 1e-15
in absolute terms). Windows should stay inside the radius where the true
spectrum dominates that floor; beyond it, only exactly sampled spectra
(see signals.sample_spectrum) give meaningful functional values. Moduli
below the smallest positive normal binary64 are treated as zero, the
continuous extension log^+(0) = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .field import QField, weighted_sup
from .signals import HermiteGauss
from .transform import SpectrumField

__all__ = [
    "SUPERCRITICAL",
    "CRITICAL",
    "SUBCRITICAL",
    "Classification",
    "classify",
    "MiyachiResult",
    "miyachi_functional",
    "miyachi_nested",
    "nested_verdict",
    "HardyResult",
    "hardy_check",
    "CowlingPriceResult",
    "cowling_price_check",
    "witness_subcritical",
    "UPParams",
    "UPReport",
    "evaluate_report",
    "report_to_text",
    "report_from_text",
]

SUPERCRITICAL = "supercritical"
CRITICAL = "critical"
SUBCRITICAL = "subcritical"

_CONCLUSIONS = {
    SUPERCRITICAL: "f = 0 almost everywhere",
    CRITICAL: "constant quaternion multiple of the Gaussian",
    SUBCRITICAL: "infinitely many functions",
}

# relative half-width of the critical band around pi^2 (binary64 representation)
_CRITICAL_EPS = 1e-12

# moduli below the smallest normal binary64 carry no usable log information
_MODULUS_FLOOR = np.finfo(float).tiny
_LOG_FLOOR = math.log(_MODULUS_FLOOR)

# ring-mean growth must exceed this relative margin to flag divergence
_RING_MARGIN = 1e-9


def _safe_log_modulus(values: np.ndarray) -> np.ndarray:
    """log of the quaternion modulus without underflow in the squares.

    Scaling by the largest absolute component keeps the sum of squares in
    [1, 4], so moduli are resolved all the way down to the subnormal range;
    all-zero nodes come back as -inf.
    """
    m = np.max(np.abs(values), axis=-1)
    safe = np.where(m > 0.0, m, 1.0)
    s = values / safe[..., None]
    with np.errstate(divide="ignore"):
        out = 0.5 * np.log(np.einsum("...c,...c->...", s, s)) + np.log(m)
    return out


@dataclass(frozen=True)
class Classification:
    regime: str
    conclusion: str
    product: float


def classify(alpha: float, beta: float) -> Classification:
    """Regime of the rate pair by the sign of alpha*beta - pi^2."""
    alpha, beta = float(alpha), float(beta)
    if not (alpha > 0.0 and beta > 0.0):
        raise ValueError("decay rates must be positive")
    product = alpha * beta
    pi2 = math.pi ** 2
    if abs(product - pi2) <= _CRITICAL_EPS * pi2:
        regime = CRITICAL
    elif product > pi2:
        regime = SUPERCRITICAL
    else:
        regime = SUBCRITICAL
    return Classification(regime=regime, conclusion=_CONCLUSIONS[regime],
                          product=product)


# ---------------------------------------------------------------------------
# log-plus functional


@dataclass(frozen=True)
class MiyachiResult:
    """Windowed log-plus integral with its boundary diagnostics."""

    value: float
    tail_estimate: float
    divergent: bool
    extent: float | None = None


def _log_plus_integrand(values: np.ndarray, r2: np.ndarray, beta: float,
                        rho: float) -> np.ndarray:
    ln = _safe_log_modulus(values)
    raw = ln + beta * r2 - math.log(rho)
    return np.where(ln >= _LOG_FLOOR, np.maximum(raw, 0.0), 0.0)


def _ring_mean(block: np.ndarray, depth: int) -> float:
    n1, n2 = block.shape
    mask = np.zeros(block.shape, dtype=bool)
    mask[depth, depth:n2 - depth] = True
    mask[n1 - 1 - depth, depth:n2 - depth] = True
    mask[depth:n1 - depth, depth] = True
    mask[depth:n1 - depth, n2 - 1 - depth] = True
    return float(block[mask].mean())


def _boundary_diagnostics(block: np.ndarray, cell: float,
                          strict: bool = True) -> tuple[float, bool]:
    """Boundary-ring contribution and a divergence heuristic.

    strict=True flags only an integrand growing outward across the two
    outermost rings (log-plus integrands are clamped at zero, so growth is
    the divergence signature). strict=False also flags a non-decaying
    boundary, appropriate for power integrands whose constant tails already
    mean divergence in the window limit.
    """
    n1, n2 = block.shape
    outer = _ring_mean(block, 0)
    tail = outer * (2 * n1 + 2 * n2 - 4) * cell
    if min(n1, n2) < 4:
        return tail, outer > 0.0
    inner = _ring_mean(block, 1)
    if strict:
        divergent = outer > 0.0 and outer > inner * (1.0 + _RING_MARGIN)
    else:
        divergent = outer > 0.0 and outer >= inner * (1.0 - _RING_MARGIN)
    return tail, divergent


def miyachi_functional(spectrum: SpectrumField, beta: float, rho: float) -> MiyachiResult:
    """Riemann sum of log^+(|F(xi)| e^{beta |xi|^2} / rho) over the lattice.

    The tail estimate is the boundary ring's contribution to the sum; the
    divergence flag fires when the integrand grows outward across the two
    outermost rings, meaning the window is too small for the value to be
    trusted as an integral.
    """
    beta, rho = float(beta), float(rho)
    if rho <= 0.0:
        raise ValueError("rho must be positive")
    integ = _log_plus_integrand(spectrum.values, spectrum.node_radius_sq(),
                                beta, rho)
    cell = spectrum.cell
    tail, divergent = _boundary_diagnostics(integ, cell)
    return MiyachiResult(value=float(integ.sum() * cell), tail_estimate=tail,
                         divergent=divergent)


def _window_slices(spectrum: SpectrumField, extent: float) -> tuple[slice, slice]:
    xi1 = spectrum.grid.xi1()
    xi2 = spectrum.grid.xi2()
    tol = 1e-12 * max(1.0, extent)
    w1 = np.nonzero(np.abs(xi1) <= extent + tol)[0]
    w2 = np.nonzero(np.abs(xi2) <= extent + tol)[0]
    if len(w1) < 4 or len(w2) < 4:
        raise ValueError(f"window extent {extent} is below the lattice resolution")
    return slice(w1[0], w1[-1] + 1), slice(w2[0], w2[-1] + 1)


def miyachi_nested(spectrum: SpectrumField, beta: float, rho: float,
                   extents) -> list[MiyachiResult]:
    """Evaluate the functional on nested centered windows |xi_a| <= extent.

    The extents share the lattice (and so its resolution); growing them
    emulates letting the integration window expand toward the whole plane.
    """
    beta, rho = float(beta), float(rho)
    if rho <= 0.0:
        raise ValueError("rho must be positive")
    integ = _log_plus_integrand(spectrum.values, spectrum.node_radius_sq(),
                                beta, rho)
    cell = spectrum.cell
    out = []
    for extent in sorted(float(e) for e in extents):
        s1, s2 = _window_slices(spectrum, extent)
        block = integ[s1, s2]
        tail, divergent = _boundary_diagnostics(block, cell)
        out.append(MiyachiResult(value=float(block.sum() * cell),
                                 tail_estimate=tail, divergent=divergent,
                                 extent=extent))
    return out


def nested_verdict(values, shrink: float = 10.0) -> str:
    """Classify a nested-window value sequence.

    "stabilizing": each successive difference at most 1/shrink of the one
    before (absolutely convergent window integral). "increasing": strictly
    growing values with non-shrinking differences (divergence signature).
    Anything else: "indeterminate".
    """
    vals = [float(v) for v in values]
    if len(vals) < 3:
        raise ValueError("need at least three nested values")
    diffs = [vals[i + 1] - vals[i] for i in range(len(vals) - 1)]
    absd = [abs(d) for d in diffs]
    if all(d2 <= d1 / shrink for d1, d2 in zip(absd, absd[1:])):
        return "stabilizing"
    if all(d > 0.0 for d in diffs) and all(d2 >= d1 for d1, d2 in zip(diffs, diffs[1:])):
        return "increasing"
    return "indeterminate"


# ---------------------------------------------------------------------------
# Hardy and Cowling-Price conditions


@dataclass(frozen=True)
class HardyResult:
    """Smallest grid constants C, C' with |f| <= C e^{-alpha |x|^2} spatially
    and |F| <= C' e^{-beta |xi|^2} in frequency."""

    c_spatial: float
    c_frequency: float


def hardy_check(field: QField, spectrum: SpectrumField, alpha: float,
                beta: float) -> HardyResult:
    """Weighted sups on both sides; finite iff the decay bounds hold on the window."""
    return HardyResult(c_spatial=weighted_sup(field, float(alpha)),
                       c_frequency=weighted_sup(spectrum, float(beta)))


@dataclass(frozen=True)
class CowlingPriceResult:
    spatial: float
    frequency: float
    spatial_divergent: bool
    frequency_divergent: bool


def _power_integral(side, rate: float, exponent: float) -> tuple[float, bool]:
    if math.isinf(exponent):
        return weighted_sup(side, rate), False
    r2 = side.node_radius_sq()
    ln = _safe_log_modulus(side.values)
    expo = exponent * (ln + rate * r2)
    expo = np.where(ln >= _LOG_FLOOR, expo, -np.inf)
    if float(np.max(expo)) > 709.0:
        return math.inf, True
    integ = np.exp(expo)
    tail, divergent = _boundary_diagnostics(integ, side.cell, strict=False)
    return float(integ.sum() * side.cell), divergent


def cowling_price_check(field: QField, spectrum: SpectrumField, alpha: float,
                        beta: float, p: float, q: float) -> CowlingPriceResult:
    """Riemann integrals of (|f| e^{alpha |x|^2})^p and (|F| e^{beta |xi|^2})^q.

    Either exponent may be inf (that side degrades to the weighted sup), but
    not both. Infinite values and outward-growing boundary rings raise the
    divergence flags.
    """
    p, q = float(p), float(q)
    if p < 1.0 or q < 1.0:
        raise ValueError("exponents must satisfy p, q >= 1")
    if math.isinf(p) and math.isinf(q):
        raise ValueError("min(p,q) must be finite")
    sp, sp_div = _power_integral(field, float(alpha), p)
    fq, fq_div = _power_integral(spectrum, float(beta), q)
    return CowlingPriceResult(spatial=sp, frequency=fq,
                              spatial_divergent=sp_div, frequency_divergent=fq_div)


def witness_subcritical(alpha: float, beta: float, k: int, l: int) -> HermiteGauss:
    """A subcritical witness: phi_{k,l} times the midpoint-rate Gaussian.

    The admissible Gaussian rates gamma lie in (alpha/pi, pi/beta), which is
    nonempty exactly in the subcritical regime; the midpoint is returned.
    """
    c = classify(alpha, beta)
    if c.regime != SUBCRITICAL:
        raise ValueError("no subcritical witness exists")
    gamma = 0.5 * (float(alpha) / math.pi + math.pi / float(beta))
    return HermiteGauss(k=int(k), l=int(l), gamma=gamma)


# ---------------------------------------------------------------------------
# aggregate report


@dataclass(frozen=True)
class UPParams:
    """Rates and exponents for one uncertainty evaluation."""

    alpha: float
    beta: float
    rho: float
    p: float = 1.0
    q: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "beta", "rho"):
            v = float(getattr(self, name))
            if not v > 0.0:
                raise ValueError(f"{name} must be positive")
            object.__setattr__(self, name, v)
        for name in ("p", "q"):
            v = float(getattr(self, name))
            if v < 1.0:
                raise ValueError(f"{name} must be >= 1")
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class UPReport:
    regime: str
    conclusion: str
    miyachi_value: float
    tail_estimate: float
    miyachi_divergent: bool
    hardy_sup_spatial: float
    hardy_sup_frequency: float
    cp_spatial: float
    cp_frequency: float
    cp_spatial_divergent: bool
    cp_frequency_divergent: bool


def evaluate_report(field: QField, spectrum: SpectrumField,
                    params: UPParams) -> UPReport:
    """Run the classifier and all three functionals on a field/spectrum pair."""
    c = classify(params.alpha, params.beta)
    m = miyachi_functional(spectrum, params.beta, params.rho)
    h = hardy_check(field, spectrum, params.alpha, params.beta)
    cp = cowling_price_check(field, spectrum, params.alpha, params.beta,
                             params.p, params.q)
    return UPReport(
        regime=c.regime,
        conclusion=c.conclusion,
        miyachi_value=m.value,
        tail_estimate=m.tail_estimate,
        miyachi_divergent=m.divergent,
        hardy_sup_spatial=h.c_spatial,
        hardy_sup_frequency=h.c_frequency,
        cp_spatial=cp.spatial,
        cp_frequency=cp.frequency,
        cp_spatial_divergent=cp.spatial_divergent,
        cp_frequency_divergent=cp.frequency_divergent,
    )


_REPORT_KEYS = [
    "regime", "conclusion", "miyachi_value", "tail_estimate",
    "miyachi_divergent", "hardy_sup_spatial", "hardy_sup_frequency",
    "cp_spatial", "cp_frequency", "cp_spatial_divergent",
    "cp_frequency_divergent",
]


def _fmt_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def report_to_text(report: UPReport) -> str:
    """Flat key=value block, one key per line, fixed order."""
    return "".join(f"{k}={_fmt_value(getattr(report, k))}\n" for k in _REPORT_KEYS)


def report_from_text(text: str) -> UPReport:
    found = {}
    for i, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if "=" not in line:
            raise ValueError(f"line {i}: expected key=value")
        k, v = line.split("=", 1)
        found[k.strip()] = v.strip()
    missing = [k for k in _REPORT_KEYS if k not in found]
    if missing:
        raise ValueError(f"missing report keys: {', '.join(missing)}")
    kwargs = {}
    for k in _REPORT_KEYS:
        raw = found[k]
        if k in ("regime", "conclusion"):
            kwargs[k] = raw
        elif k.endswith("divergent"):
            kwargs[k] = raw == "true"
        else:
            kwargs[k] = float(raw)
    return UPReport(**kwargs)

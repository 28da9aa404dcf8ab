"""Synthesizes the integrand series dictated by the residue data of a kernel,
estimates the root-test constant L, and evaluates truncated series with tail
control.

Modes:

* ``simple``      -- summands Res_{-k}(h) g(k) x^k (simple-pole kernels,
                     including kernels with pole gaps).
* ``general``     -- full residue of h(z) g(-z) x^{-z} at -k from the
                     principal part (higher-order poles).
* ``derivative``  -- the m-th derivative kernel of a simple-pole base:
                     summands Res_{-k}(h) [(d/dz + log x)^m g](k) x^k,
                     realized by transforming the principal part and feeding
                     the general engine (so m = 0 is bit-identical to simple).
* ``conjecture``  -- summands (-1)^{m n} [P_m(d/dz + log x) g](n) x^n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

from .catalog import CoefficientFunction, KernelFunction
from .errors import ConvergenceError, RadiusExceededError
from .jets import PrincipalPart, pm_operator_apply, residue_from_principal_part
from .specfun import _neumaier_add

MODES = ("simple", "general", "derivative", "conjecture")

#: default truncation controls (factorial decay dominates all registered
#: identities well before the cap)
DEFAULT_TOL = 1e-12
DEFAULT_K_CAP = 400

#: fraction of the radius up to which the series is preferred over the
#: closed form; convergence degenerates at the radius boundary itself
SERIES_USE_FRACTION = 0.75


@dataclass(frozen=True)
class SeriesHandle:
    """An integrand series f(x) = sum of residue terms, plus metadata."""

    kernel: KernelFunction
    coeff: CoefficientFunction
    mode: str = "simple"
    m: int = 0
    radius_hint: Optional[float] = None
    closed_form: Optional[Callable[[float], float]] = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown series mode {self.mode!r}")
        if self.radius_hint is not None and not self.radius_hint > 0.0:
            raise ValueError(f"radius hint must be positive, got {self.radius_hint}")
        if self.mode == "conjecture" and self.m < 1:
            raise ValueError("conjecture mode needs m >= 1")
        if self.mode == "derivative" and self.m < 0:
            raise ValueError("derivative mode needs m >= 0")

    def with_closed_form(self, fn, radius=None) -> "SeriesHandle":
        return replace(self, closed_form=fn,
                       radius_hint=radius if radius is not None else self.radius_hint)


def handle(kernel: KernelFunction, coeff: CoefficientFunction, mode: str = "simple",
           m: int = 0, radius_hint: Optional[float] = None,
           closed_form=None) -> SeriesHandle:
    if radius_hint is None:
        radius_hint = theorem_radius(coeff)
    return SeriesHandle(kernel, coeff, mode, m, radius_hint, closed_form)


def theorem_radius(coeff: CoefficientFunction) -> Optional[float]:
    """Convergence radius e^{-P} / L implied by growth metadata (L = 1 for
    the registered kernels; reported, never enforced)."""
    if coeff.growth_meta is None:
        return None
    _, p, _ = coeff.growth_meta
    return math.exp(-p)


def term(h: SeriesHandle, k: int, x: float):
    """The k-th summand of the integrand series at x > 0."""
    if x <= 0.0:
        raise ValueError(f"series variable must be positive, got x={x}")
    if h.mode == "conjecture":
        jet = h.coeff.jet(k, h.m - 1)
        val = pm_operator_apply(jet, math.log(x), h.m) * x ** k
        if (h.m * k) % 2:
            val = -val
        return val
    pp = h.kernel.principal_part(k)
    if h.mode == "derivative" and h.m > 0:
        pp = _derivative_principal_part(pp, h.m)
    jet = h.coeff.jet(k, max(pp.order - 1, 0))
    return residue_from_principal_part(pp, jet, x)


def _derivative_principal_part(pp: PrincipalPart, m: int) -> PrincipalPart:
    # d^m/dz^m of a simple pole: sole coefficient c_{-m-1} = (-1)^m m! c_{-1}
    if pp.order == 0:
        return pp
    if pp.order != 1:
        raise ValueError("derivative mode needs a simple-pole base kernel")
    lead = (-1.0 if m % 2 else 1.0) * math.factorial(m) * pp.coeffs[0]
    return PrincipalPart(pp.k, m + 1, (0.0,) * m + (lead,))


@dataclass(frozen=True)
class LEstimate:
    """Root-test constant estimate with a convergence diagnostic."""

    value: float
    plateau: bool           # False flags a divergent / non-settling sequence
    radius: Optional[float]  # e^{-P}/value when growth metadata supplies P


def estimate_L(h: SeriesHandle, k_max: int) -> LEstimate:
    """Empirical limit of |Res_{-k}(h) / phi(k)|^{1/k} by Richardson
    extrapolation of the last five root-test values.

    Only meaningful for simple-pole kernels; pole gaps are skipped.
    """
    if k_max < 8:
        raise ValueError(f"k_max must be >= 8, got {k_max}")
    if not h.kernel.simple_poles:
        raise ValueError("estimate_L applies to simple-pole kernels")
    ks, vals = [], []
    for k in range(1, k_max + 1):
        pp = h.kernel.principal_part(k)
        if pp.order == 0:
            continue
        r = abs(pp.residue) / abs(h.kernel.phi_eval(float(k)))
        if r == 0.0:
            continue
        ks.append(k)
        vals.append(r ** (1.0 / k))
    if len(vals) < 6:
        return LEstimate(vals[-1] if vals else float("nan"), False, None)

    def extrapolate(kk, vv):
        # Neville at 1/k -> 0 (the sequence expands in powers of 1/k)
        xs = [1.0 / k for k in kk]
        tab = list(vv)
        n = len(tab)
        for level in range(1, n):
            for i in range(n - level):
                tab[i] = (tab[i] * xs[i + level] - tab[i + 1] * xs[i]) / (
                    xs[i + level] - xs[i])
        return tab[0]

    last = extrapolate(ks[-5:], vals[-5:])
    prev = extrapolate(ks[-6:-1], vals[-6:-1])
    plateau = abs(last - prev) <= 5e-3 * max(abs(last), 1e-12)
    radius = None
    if h.coeff.growth_meta is not None:
        _, p, _ = h.coeff.growth_meta
        radius = math.exp(-p) / last
    return LEstimate(last, plateau, radius)


def sum_series(h: SeriesHandle, x: float, tol: float = DEFAULT_TOL,
               k_cap: int = DEFAULT_K_CAP):
    """Compensated summation of the raw series, no radius fallback.

    Stops once two successive terms are below tol * |sum| and a geometric
    tail bound confirms the remainder is negligible.
    """
    total, comp = 0.0, 0.0
    prev_mag = None
    small_streak = 0
    for k in range(k_cap + 1):
        t = term(h, k, x)
        if isinstance(t, complex) and abs(t.imag) <= 1e-30 * max(1.0, abs(t.real)):
            t = t.real
        total, comp = _neumaier_add(total, comp, t)
        mag = abs(t)
        scale = max(abs(total + comp), 1e-300)
        if k >= 4 and mag <= tol * scale:
            small_streak += 1
            if small_streak >= 2 and prev_mag is not None:
                q = mag / prev_mag if prev_mag > 0.0 else 0.0
                if q < 1.0:
                    tail = mag * q / (1.0 - q) if q > 0.0 else 0.0
                    if tail <= tol * scale:
                        return total + comp
        else:
            small_streak = 0
        if mag > 0.0:
            prev_mag = mag
    raise ConvergenceError(
        f"series did not converge within {k_cap} terms at x={x} "
        f"(mode={h.mode}, kernel={h.kernel.id}, coeff={h.coeff.id})")


def eval_series(h: SeriesHandle, x: float, tol: float = DEFAULT_TOL,
                k_cap: int = DEFAULT_K_CAP, force_series: bool = False):
    """Evaluate f(x): the truncated series inside the radius, the registered
    closed form beyond it."""
    if x <= 0.0:
        raise ValueError(f"series variable must be positive, got x={x}")
    if force_series:
        return sum_series(h, x, tol, k_cap)
    if h.radius_hint is not None and x > SERIES_USE_FRACTION * h.radius_hint:
        if h.closed_form is not None:
            return h.closed_form(x)
        if x > h.radius_hint:
            raise RadiusExceededError(
                f"x={x} is outside the series radius {h.radius_hint} and no "
                f"closed form is registered (kernel={h.kernel.id})")
    return sum_series(h, x, tol, k_cap)


def seam_check(h: SeriesHandle, tol: float) -> tuple[float, float]:
    """Series-vs-closed-form agreement at the switch-over point.

    Returns (x_seam, relative mismatch); only meaningful when both a radius
    and a closed form are registered.
    """
    if h.closed_form is None or h.radius_hint is None:
        raise ValueError("seam check needs both a radius hint and a closed form")
    x_seam = SERIES_USE_FRACTION * h.radius_hint
    s = sum_series(h, x_seam, tol=min(tol, DEFAULT_TOL))
    c = h.closed_form(x_seam)
    mismatch = abs(s - c) / max(abs(c), 1e-300)
    return x_seam, mismatch

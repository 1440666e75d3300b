"""Closed-form heat and Riesz kernels.

The Mehler closed forms of the Hermite and Laguerre heat kernels, the
raising-operator derivatives (d/dx + x)^l W_t, the k-fold first-order
Laguerre derivative of the Laguerre heat kernel (evaluated two independent
ways that are cross-checked in production), and their time integrals: the
fractional-power kernel K_gamma and the Riesz kernels.

Time integrals are computed after the substitution t = log((1+s)/(1-s)):
s in (0, 1) with panels refined geometrically toward both endpoints and a
split at s = 1/2.  Near s = 1 the complement w = 1 - s is the integration
variable, so no 1 - s cancellation ever occurs.  Scaled Bessel evaluations
keep every exponential combined analytically; e^{+z} is never formed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import combinat
from .specfun import alpha_value, bessel_i_scaled, gamma, hermite_poly

__all__ = [
    "KernelSpec",
    "SubstitutedTime",
    "KernelAgreementWarning",
    "QuadratureConvergenceError",
    "heat_kernel_hermite",
    "heat_kernel_hermite_s",
    "heat_kernel_laguerre",
    "d_plus_x_pow_l_heat",
    "d_alpha_pow_k_heat",
    "d_alpha_pow_k_heat_pair",
    "frac_kernel",
    "riesz_kernel_hermite",
    "riesz_kernel_laguerre",
    "kernel_value",
]

_FAMILIES = ("hermite-heat", "laguerre-heat", "hermite-frac",
             "hermite-riesz", "laguerre-riesz")


class KernelAgreementWarning(UserWarning):
    """The two independent evaluations of the Laguerre derivative kernel
    disagree beyond the production threshold at some point."""


class QuadratureConvergenceError(RuntimeError):
    """Refinement of a kernel time-integral stalled above tolerance."""


@dataclass(frozen=True)
class KernelSpec:
    """Tagged description of which kernel is meant, with its parameters."""

    family: str
    k: int = 0
    l: int | None = None
    gamma: float | None = None
    alpha: float | None = None

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown kernel family: {self.family}")
        if self.family == "hermite-frac":
            if self.gamma is None or not self.gamma > 0:
                raise ValueError("hermite-frac requires gamma > 0")
        if self.family in ("hermite-riesz", "laguerre-riesz"):
            if self.k < 1:
                raise ValueError("Riesz kernels require k >= 1")
        if self.family == "hermite-riesz":
            l = self.k if self.l is None else self.l
            if not 0 <= l <= self.k:
                raise ValueError(f"need 0 <= l <= k, got l={self.l}, k={self.k}")
            object.__setattr__(self, "l", l)
        if self.family.startswith("laguerre"):
            if self.alpha is None:
                raise ValueError(f"{self.family} requires alpha")
            object.__setattr__(self, "alpha", alpha_value(self.alpha))


@dataclass(frozen=True)
class SubstitutedTime:
    """The time variable under t = log((1+s)/(1-s)); s in (0, 1)."""

    s: float

    def __post_init__(self):
        if not 0.0 < self.s < 1.0:
            raise ValueError(f"s must lie in (0, 1), got {self.s}")

    @property
    def t(self) -> float:
        return 2.0 * math.atanh(self.s)

    @classmethod
    def from_t(cls, t: float) -> "SubstitutedTime":
        if not t > 0.0:
            raise ValueError(f"t must be > 0, got {t}")
        return cls(math.tanh(0.5 * t))


@lru_cache(maxsize=512)
def _e_float(n: int, l: int) -> float:
    return float(combinat.e_coeff(n, l))


# ---------------------------------------------------------------------------
# Heat kernels
# ---------------------------------------------------------------------------

def heat_kernel_hermite(t: float, x, y):
    """Hermite heat kernel W_t(x, y) via the Mehler closed form."""
    if not t > 0.0:
        raise ValueError(f"t must be > 0, got {t}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    em = math.exp(-t)
    den = -math.expm1(-2.0 * t)
    expo = (-0.5 * (x * x + y * y) * (1.0 + em * em) / den
            + 2.0 * x * y * em / den)
    return math.sqrt(em / (math.pi * den)) * np.exp(expo)


def _dplusx_heat_sw(l: int, s, w, x, y):
    """(d/dx + x)^l W_t(x, y) in substituted time; w = 1 - s passed
    separately so the s -> 1 endpoint loses no precision.

    e^{x^2/2} W_t is a Gaussian in x with curvature -(1-s)^2/(4s), so the
    l-th raising derivative is an l-th Hermite polynomial evaluation; no
    finite differences.
    """
    s = np.asarray(s, dtype=float)
    w = np.asarray(w, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    one_m_s2 = w * (2.0 - w)                       # 1 - s^2
    pref = np.sqrt(one_m_s2 / (4.0 * math.pi * s))
    expo = -0.25 * (s * (x + y) ** 2 + (x - y) ** 2 / s)
    val = pref * np.exp(expo)
    if l == 0:
        return val
    lam = w * w / (4.0 * s)
    arg = (w * x - (1.0 + s) * y) / (2.0 * np.sqrt(s))
    return val * (-1.0) ** l * lam ** (0.5 * l) * hermite_poly(l, arg)


def heat_kernel_hermite_s(s: float, x, y):
    """Hermite heat kernel in the substituted time variable s in (0, 1)."""
    if not 0.0 < s < 1.0:
        raise ValueError(f"s must lie in (0, 1), got {s}")
    return _dplusx_heat_sw(0, s, 1.0 - s, x, y)


def d_plus_x_pow_l_heat(l: int, t: float, x, y):
    """Raising-operator derivative (d/dx + x)^l W_t(x, y), exact closed form."""
    if l < 0:
        raise ValueError("l must be >= 0")
    if not t > 0.0:
        raise ValueError(f"t must be > 0, got {t}")
    s = math.tanh(0.5 * t)
    return _dplusx_heat_sw(l, s, 1.0 - s, x, y)


def heat_kernel_laguerre(t: float, x, y, alpha):
    """Laguerre heat kernel W_t^alpha(x, y) via its Mehler closed form.

    Evaluated with the scaled Bessel function and the regrouped exponent
    -((x - y e^-t)^2 + (y - x e^-t)^2) / (2 (1 - e^-2t)), which stays
    bounded as the Bessel argument grows.
    """
    a = alpha_value(alpha)
    if not t > 0.0:
        raise ValueError(f"t must be > 0, got {t}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if not (np.all(x > 0) and np.all(y > 0)):
        raise ValueError("x and y must be > 0")
    em = math.exp(-t)
    den = -math.expm1(-2.0 * t)
    z = 2.0 * x * y * em / den
    expo = -((x - y * em) ** 2 + (y - x * em) ** 2) / (2.0 * den)
    return (math.sqrt(2.0 * em / den) * np.sqrt(z)
            * bessel_i_scaled(a, z) * np.exp(expo))


# ---------------------------------------------------------------------------
# k-fold first-order Laguerre derivative of the Laguerre heat kernel
# ---------------------------------------------------------------------------

def _dw_pair_sw(k: int, alpha: float, s, w, x, y, want_second: bool = True):
    """Both independent evaluations of the k-fold derivative kernel.

    Route one is the explicit triple sum over (j, n, m) with Bessel orders
    alpha + j - n; route two expands against the Hermite heat kernel's
    raising derivatives with Bessel orders alpha - n + l.  The scaled
    Bessel table is shared between the two.
    """
    s = np.asarray(s, dtype=float)
    w = np.asarray(w, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    one_m_s2 = w * (2.0 - w)
    z = x * y * one_m_s2 / (2.0 * s)
    u = y * one_m_s2 / (2.0 * s)
    c2 = w * w / (4.0 * s)
    isc = [bessel_i_scaled(alpha + d, z) for d in range(k + 1)]
    zpow = [z ** (0.5 - d) for d in range(k + 1)]   # z^{1/2 - d}

    # route one; the same sum with absolute values tracks the cancellation
    # conditioning, which bounds the achievable route agreement
    expo = -(((1.0 + s) * x - w * y) ** 2 + ((1.0 + s) * y - w * x) ** 2) / (8.0 * s)
    pref = np.sqrt(one_m_s2 / (2.0 * s)) * np.exp(expo)
    acc = 0.0
    acc_abs = 0.0
    for j in range(k + 1):
        for n in range(j // 2 + 1):
            base = (math.comb(k, j) * _e_float(j, n) / 2.0 ** (j - n)
                    * u ** (2 * (j - n)))
            for m in range((k - j) // 2 + 1):
                term = (base * _e_float(k - j, m) * c2 ** (k - j - m)
                        * x ** (k - 2 * m - 2 * n) * zpow[j - n] * isc[j - n])
                acc = acc + ((-1.0) ** (k - j - m)) * term
                acc_abs = acc_abs + term
    dw1 = pref * acc
    dw1_abs = pref * acc_abs
    if not want_second:
        return dw1, None, dw1_abs

    # route two
    dw2 = 0.0
    for j in range(k + 1):
        inner = 0.0
        for n in range(j // 2 + 1):
            for l in range(2 * n, j + 1):
                inner = inner + ((-1.0) ** l * math.comb(j, l)
                                 * _e_float(l, n) / 2.0 ** (l - n)
                                 * zpow[0] * z ** (-n) * isc[l - n])
        dw2 = dw2 + ((-1.0) ** j * math.comb(k, j)
                     * _dplusx_heat_sw(k - j, s, w, x, y) * u ** j * inner)
    dw2 = math.sqrt(2.0 * math.pi) * dw2
    return dw1, dw2, dw1_abs


_AGREEMENT_TOL = 1e-8


def d_alpha_pow_k_heat_pair(k: int, t: float, x: float, y: float, alpha):
    """Both evaluation routes of the k-fold derivative of W_t^alpha."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if not t > 0.0:
        raise ValueError(f"t must be > 0, got {t}")
    if not (x > 0 and y > 0):
        raise ValueError("x and y must be > 0")
    a = alpha_value(alpha)
    s = math.tanh(0.5 * t)
    dw1, dw2, _ = _dw_pair_sw(k, a, s, 1.0 - s, float(x), float(y))
    return float(dw1), float(dw2)


def d_alpha_pow_k_heat(k: int, t: float, x: float, y: float, alpha) -> float:
    """k-fold first-order Laguerre derivative of the Laguerre heat kernel.

    Both independent routes are evaluated; disagreement beyond 1e-8
    relative (plus the cancellation floor of the alternating sums) raises
    :class:`KernelAgreementWarning`.  The triple-sum value is returned.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if not t > 0.0:
        raise ValueError(f"t must be > 0, got {t}")
    a = alpha_value(alpha)
    s = math.tanh(0.5 * t)
    dw1, dw2, dwabs = _dw_pair_sw(k, a, s, 1.0 - s, float(x), float(y))
    scale = max(abs(dw1), abs(dw2))
    if scale > 0.0 and abs(dw1 - dw2) > (_AGREEMENT_TOL + 1e-12 * dwabs / scale) * scale:
        warnings.warn(
            f"derivative-kernel routes disagree at (k={k}, t={t}, x={x}, "
            f"y={y}): {dw1!r} vs {dw2!r}", KernelAgreementWarning)
    return float(dw1)


# ---------------------------------------------------------------------------
# Time integration in the substituted variable
# ---------------------------------------------------------------------------

@lru_cache(maxsize=16)
def _s_quadrature(nodes: int = 8, lo_floor: float = 1e-18,
                  hi_floor: float = 1e-26, ratio: float = 0.4):
    """Panelled rule for integrals dt over (0, inf) in the s variable.

    Returns immutable arrays (s, w=1-s, t, weight) where weight includes
    the Jacobian dt/ds = 2/(1-s^2).  Split at 1/2; panels shrink
    geometrically toward s = 0 and (in the complement variable) toward
    s = 1.
    """
    xb, wb = np.polynomial.legendre.leggauss(nodes)

    def panels(edges):
        a = edges[:-1][:, None]
        b = edges[1:][:, None]
        xs = (0.5 * (b - a) * xb[None, :] + 0.5 * (b + a)).ravel()
        ws = (0.5 * (b - a) * wb[None, :]).ravel()
        return xs, ws

    n_lo = int(math.ceil(math.log(lo_floor / 0.5) / math.log(ratio)))
    s_lo, gl_lo = panels(0.5 * ratio ** np.arange(n_lo, -1, -1, dtype=float))
    w_lo = 1.0 - s_lo

    n_hi = int(math.ceil(math.log(hi_floor / 0.5) / math.log(ratio)))
    w_hi, gl_hi = panels(0.5 * ratio ** np.arange(n_hi, -1, -1, dtype=float))
    w_hi = w_hi[::-1]
    gl_hi = gl_hi[::-1]
    s_hi = 1.0 - w_hi

    s = np.concatenate([s_lo, s_hi])
    w = np.concatenate([w_lo, w_hi])
    t = np.concatenate([2.0 * np.arctanh(s_lo),
                        np.log(2.0 - w_hi) - np.log(w_hi)])
    weight = np.concatenate([gl_lo, gl_hi]) * 2.0 / (w * (2.0 - w))
    for arr in (s, w, t, weight):
        arr.setflags(write=False)
    return s, w, t, weight


def _time_integral(point_eval, half_order: float, nodes: int = 8):
    """(1/Gamma(q)) * integral of t^{q-1} point_eval(s, w) dt, q = half_order.

    ``point_eval`` may return a vector over s or an (s, y)-mesh; the time
    axis is always the first one.
    """
    s, w, t, weight = _s_quadrature(nodes)
    vals = np.asarray(point_eval(s, w))
    wt = weight * t ** (half_order - 1.0)
    if vals.ndim == 2:
        return (wt[:, None] * vals).sum(axis=0) / gamma(half_order)
    return float((wt * vals).sum() / gamma(half_order))


def _time_integral_with_err(point_eval, half_order: float, nodes: int = 8):
    coarse = _time_integral(point_eval, half_order, nodes)
    fine = _time_integral(point_eval, half_order, nodes + 4)
    return fine, abs(fine - coarse)


# ---------------------------------------------------------------------------
# Integrated kernels
# ---------------------------------------------------------------------------

def frac_kernel(gamma_: float, x: float, y: float, *, nodes: int = 8,
                with_err: bool = False):
    """Fractional-power Hermite kernel K_gamma(x, y).

    Requires x != y when gamma <= 1 (the kernel is then singular on the
    diagonal but integrable off it).
    """
    if not gamma_ > 0:
        raise ValueError(f"gamma must be > 0, got {gamma_}")
    if gamma_ <= 1.0 and x == y:
        raise ValueError("K_gamma on the diagonal requires gamma > 1")
    val, err = _time_integral_with_err(
        lambda s, w: _dplusx_heat_sw(0, s, w, x, y), 0.5 * gamma_, nodes)
    val = float(val)
    err = float(err)
    if err > max(1e-5 * abs(val), 1e-250):
        raise QuadratureConvergenceError(
            f"K_gamma quadrature stalled at ({x}, {y}): est err {err}")
    return (val, err) if with_err else val


def riesz_kernel_hermite_vec(k: int, l: int, x: float, y, *, nodes: int = 8):
    """Hermite Riesz-type kernel with l raising derivatives, vectorized in y."""
    if k < 1 or not 0 <= l <= k:
        raise ValueError(f"need k >= 1 and 0 <= l <= k, got k={k}, l={l}")
    y = np.asarray(y, dtype=float)
    if l >= k - 1 and np.any(y == x):
        raise ValueError("kernel singular on the diagonal for l >= k-1")
    return _time_integral(
        lambda s, w: _dplusx_heat_sw(l, s[:, None], w[:, None], x, y[None, :]),
        0.5 * k, nodes)


def riesz_kernel_hermite(k: int, l: int, x: float, y: float, *,
                         nodes: int = 8, with_err: bool = False):
    """Kernel of the order-k Hermite Riesz transform family at (x, y);
    l = k gives the Riesz kernel itself."""
    if k < 1 or not 0 <= l <= k:
        raise ValueError(f"need k >= 1 and 0 <= l <= k, got k={k}, l={l}")
    if l >= k - 1 and x == y:
        raise ValueError("kernel singular on the diagonal for l >= k-1")
    val, err = _time_integral_with_err(
        lambda s, w: _dplusx_heat_sw(l, s, w, float(x), float(y)), 0.5 * k,
        nodes)
    return (float(val), float(err)) if with_err else float(val)


def riesz_kernel_laguerre_vec(k: int, alpha, x: float, y, *, nodes: int = 8,
                              return_agreement: bool = False):
    """Laguerre Riesz kernel vectorized in y.

    Both derivative-kernel routes are integrated and compared in
    production.  The warning threshold allows for the cancellation floor of
    the alternating sums (tracked through an absolute-value companion
    integral), so only genuine formula-level disagreement fires.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    a = alpha_value(alpha)
    y = np.asarray(y, dtype=float)
    if np.any(y == x):
        raise ValueError("Riesz kernel requires x != y")
    if not (x > 0 and np.all(y > 0)):
        raise ValueError("x and y must be > 0")
    s, w, t, weight = _s_quadrature(nodes)
    dw1, dw2, dwabs = _dw_pair_sw(k, a, s[:, None], w[:, None], x, y[None, :])
    wt = (weight * t ** (0.5 * k - 1.0))[:, None] / gamma(0.5 * k)
    v1 = (wt * dw1).sum(axis=0)
    v2 = (wt * dw2).sum(axis=0)
    vabs = (wt * dwabs).sum(axis=0)
    denom = np.maximum(np.maximum(np.abs(v1), np.abs(v2)), 1e-300)
    disagree = np.abs(v1 - v2) / denom
    floor = _AGREEMENT_TOL + 1e-12 * vabs / denom
    if np.any(disagree > floor):
        idx = int(np.argmax(disagree - floor))
        warnings.warn(
            f"Riesz kernel routes disagree ({disagree[idx]:.2e} relative, "
            f"conditioning floor {floor[idx]:.2e}) at (k={k}, alpha={a}, "
            f"x={x}, y={y.ravel()[idx]})", KernelAgreementWarning)
    if return_agreement:
        return v1, float(disagree.max()) if disagree.size else 0.0
    return v1


def riesz_kernel_laguerre(k: int, alpha, x: float, y: float, *,
                          nodes: int = 8, with_err: bool = False):
    """Order-k Laguerre Riesz kernel at a point, x != y."""
    vec, agree = riesz_kernel_laguerre_vec(k, alpha, float(x),
                                           np.array([float(y)]), nodes=nodes,
                                           return_agreement=True)
    fine = riesz_kernel_laguerre_vec(k, alpha, float(x),
                                     np.array([float(y)]), nodes=nodes + 4)
    val = float(fine[0])
    err = max(abs(val - float(vec[0])), agree * abs(val))
    if err > max(1e-4 * abs(val), 1e-250):
        raise QuadratureConvergenceError(
            f"Riesz kernel quadrature stalled at ({x}, {y}): est err {err}")
    return (val, err) if with_err else val


def kernel_value(spec: KernelSpec, x: float, y: float,
                 t: float | None = None):
    """Evaluate the kernel described by ``spec`` at (x, y).

    Heat families need ``t``; integrated families ignore it.  Returns
    (value, est_err).
    """
    if spec.family == "hermite-heat":
        if t is None:
            raise ValueError("heat kernels need t")
        return float(heat_kernel_hermite(t, x, y)), 0.0
    if spec.family == "laguerre-heat":
        if t is None:
            raise ValueError("heat kernels need t")
        return float(heat_kernel_laguerre(t, x, y, spec.alpha)), 0.0
    if spec.family == "hermite-frac":
        return frac_kernel(spec.gamma, x, y, with_err=True)
    if spec.family == "hermite-riesz":
        return riesz_kernel_hermite(spec.k, spec.l, x, y, with_err=True)
    return riesz_kernel_laguerre(spec.k, spec.alpha, x, y, with_err=True)

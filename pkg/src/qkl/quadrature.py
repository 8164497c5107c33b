"""Orthonormality verification by numerical integration: Gram matrices of the
Meixner-Pollaczek and Al-Salam-Chihara families against their printed weights.

Integration uses adaptive Gauss-Kronrod (G7, K15) panels with elementwise
error tracking; the Al-Salam-Chihara integral is taken over theta in [0, pi]
after x = cos(theta), which removes the 1/sqrt(1-x^2) endpoint singularity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, ParamError, RangeError
from .numerics import STANDARD, Context
from .polys import ASCParams, MPParams, asc_orthonormal_stream, mp_orthonormal_stream
from .series import log_abs_gamma, qpoch

# Gauss-Kronrod 15-point nodes / weights, with the embedded Gauss-7 rule
# (QUADPACK constants).
_XGK = (0.991455371120813, 0.949107912342759, 0.864864423359769,
        0.741531185599394, 0.586087235467691, 0.405845151377397,
        0.207784955007898, 0.0)
_WGK = (0.022935322010529, 0.063092092629979, 0.104790010322250,
        0.140653259715525, 0.169004726639267, 0.190350578064785,
        0.204432940075298, 0.209482141084728)
_WG = (0.129484966168870, 0.279705391489277, 0.381830050505119,
       0.417959183673469)


@dataclass
class QuadratureResult:
    """A Gram matrix with its accumulated error estimate and counts."""

    value: np.ndarray
    error_estimate: float
    evaluations: int


def mp_weight(k: float, phi: float, x: float, ctx: Context = STANDARD) -> float:
    """Meixner-Pollaczek orthogonality density
    ((2 sin phi)^(2k) / 2 pi) e^((2 phi - pi) x) |Gamma(k + i x)|^2.

    Assembled in log space: the two exponential factors overflow/underflow
    individually far inside the region where their product still matters.
    """
    MPParams(k, phi)
    logw = (2 * k * math.log(2 * math.sin(phi)) - math.log(2 * math.pi)
            + (2 * phi - math.pi) * x + 2 * log_abs_gamma(complex(k, x), ctx))
    if logw < -745.0:
        return 0.0
    return math.exp(logw)


def aw_weight(params, x: float, ctx: Context = STANDARD) -> float:
    """Askey-Wilson-type weight w(x) = h(x,1) h(x,-1) h(x,q^(1/2)) h(x,-q^(1/2))
    / prod over nonzero parameters of h(x,p), with
    h(x,alpha) = (alpha e^(i theta), alpha e^(-i theta); q)_inf, x = cos theta.

    Accepts ASCParams (two-parameter denominator) or AWParams (up to four).
    """
    if isinstance(params, ASCParams):
        q, denom_params = params.q, (params.a, params.b)
    else:
        q, denom_params = params.q, (params.a, params.b, params.c, params.d)
    if abs(x) >= 1.0:
        raise RangeError("aw_weight is evaluated strictly inside (-1, 1)")
    theta = math.acos(x)
    eit = complex(math.cos(theta), math.sin(theta))

    def h(alpha) -> complex:
        return complex(qpoch(alpha * eit, q, ctx=ctx)
                       * qpoch(alpha * eit.conjugate(), q, ctx=ctx))

    # h(x, alpha) is complex for complex alpha; only the assembled ratio is
    # real (conjugate parameter pairs), so realness is taken at the end
    w = h(1.0) * h(-1.0) * h(math.sqrt(q)) * h(-math.sqrt(q))
    for p_ in denom_params:
        if complex(p_) != 0:
            w /= h(complex(p_))
    return w.real


def _kronrod_panel(f, a: float, b: float):
    """Apply G7/K15 on [a, b] to a vector-valued integrand f(x) -> ndarray.

    Returns (K15 integral, elementwise |K15 - G7| estimate, evaluations).
    """
    h = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    fc = f(mid)
    k15 = _WGK[7] * fc
    g7 = _WG[3] * fc
    n_eval = 1
    for i in range(7):
        dx = h * _XGK[i]
        fl = f(mid - dx)
        fr = f(mid + dx)
        n_eval += 2
        k15 = k15 + _WGK[i] * (fl + fr)
        if i % 2 == 1:
            g7 = g7 + _WG[i // 2] * (fl + fr)
    k15 = k15 * h
    g7 = g7 * h
    return k15, np.abs(k15 - g7), n_eval


def _adaptive(f, a: float, b: float, tol: float, initial_panels: int = 8,
              max_panels: int = 2000):
    """Adaptive bisection of GK15 panels driven by the max elementwise error."""
    edges = np.linspace(a, b, initial_panels + 1)
    panels = []
    n_eval = 0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, err, ne = _kronrod_panel(f, lo, hi)
        panels.append((lo, hi, val, err))
        n_eval += ne
    while len(panels) < max_panels:
        total_err = np.zeros_like(panels[0][3])
        for _, _, _, err in panels:
            total_err = total_err + err
        if float(total_err.max()) <= tol:
            break
        worst = max(range(len(panels)), key=lambda i: float(panels[i][3].max()))
        lo, hi, _, _ = panels.pop(worst)
        mid = 0.5 * (lo + hi)
        for seg in ((lo, mid), (mid, hi)):
            val, err, ne = _kronrod_panel(f, *seg)
            panels.append((seg[0], seg[1], val, err))
            n_eval += ne
    total = np.zeros_like(panels[0][2])
    total_err = np.zeros_like(panels[0][3])
    for _, _, val, err in sorted(panels, key=lambda p_: p_[0]):
        total = total + val
        total_err = total_err + err
    if float(total_err.max()) > tol:
        raise ConvergenceError(
            f"quadrature error estimate {float(total_err.max()):.3e} exceeds {tol}")
    return total, float(total_err.max()), n_eval


def _mp_support(k: float, phi: float, nmax: int):
    """Interval outside which weight * (1 + x^2)^(nmax+1) is below 1e-18 of
    the weight's peak (the polynomial envelope keeps the truncation honest)."""
    def w(x):
        return mp_weight(k, phi, x)

    xs = np.arange(-8.0, 8.0001, 0.5)
    peak = max(w(float(x)) for x in xs)
    envelope = lambda x: w(x) * (1 + x * x) ** (nmax + 1)
    lo = -8.0
    while envelope(lo) > 1e-18 * peak and lo > -400:
        lo -= 2.0
    hi = 8.0
    while envelope(hi) > 1e-18 * peak and hi < 400:
        hi += 2.0
    return lo, hi


def ortho_gram(family: str, params: dict, nmax: int = 8, tol: float = 1e-9,
               ctx: Context = STANDARD) -> QuadratureResult:
    """Gram matrix G[m][n] = integral of p_m p_n against the printed measure,
    for the orthonormal Meixner-Pollaczek ("mp") or Al-Salam-Chihara ("asc")
    family; exact orthonormality means G = I.
    """
    if nmax > 12:
        raise ParamError("ortho_gram supports nmax <= 12")
    if family == "mp":
        k, phi = params["k"], params["phi"]
        MPParams(k, phi)
        lo, hi = _mp_support(k, phi, nmax)

        def f(x):
            gen = mp_orthonormal_stream(MPParams(k, phi), x, ctx)
            vec = np.array([float(next(gen)) for _ in range(nmax + 1)])
            return mp_weight(k, phi, x, ctx) * np.outer(vec, vec)

        value, err, n_eval = _adaptive(f, lo, hi, tol,
                                       initial_panels=max(16, int((hi - lo) / 4)))
        return QuadratureResult(value, err, n_eval)
    if family == "asc":
        q, a, b = params["q"], params["a"], params["b"]
        asc = ASCParams(q, a, b)
        if not asc.in_measure_regime():
            raise ParamError(
                "ASC parameters must be real or conjugate with moduli < 1 "
                "(absolutely continuous measure regime)")
        const = float(complex(qpoch(q, q, ctx=ctx)).real
                      * complex(qpoch(complex(a) * complex(b), q, ctx=ctx)).real) / (2 * math.pi)

        def f(theta):
            x = math.cos(theta)
            gen = asc_orthonormal_stream(a, b, q, x, ctx)
            vec = np.array([complex(next(gen)).real for _ in range(nmax + 1)])
            return const * aw_weight(asc, x, ctx) * np.outer(vec, vec)

        value, err, n_eval = _adaptive(f, 1e-13, math.pi - 1e-13, tol)
        return QuadratureResult(value, err, n_eval)
    raise ParamError(f"unknown family {family!r}; use 'mp' or 'asc'")

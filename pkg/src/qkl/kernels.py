"""Poisson kernels: bilinear sums over orthonormal polynomial streams and the
printed closed forms they must equal.

The Meixner-Pollaczek kernel closed form is assembled in log space (the
Gamma(2k) prefactor overflows long before the value does) and its 2F1 runs
through the Pfaff-transformed route, since the argument r = -4t sin^2(phi) /
(1-t)^2 falls below -1 already at moderate |t|.  The Al-Salam-Chihara kernel
has two printed closed forms related by a Bailey transform; both are exposed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DivergenceError, DomainError
from .hyper import (
    SeriesEval,
    TruncationPolicy,
    accumulate,
    default_policy,
    gauss_2f1,
    vwp_8w7,
)
from .numerics import STANDARD, Context
from .polys import MPParams, asc_orthonormal_stream, mp_orthonormal_stream
from .series import _qval, log_gamma_real, qpoch


@dataclass(frozen=True)
class KernelPoint:
    """Evaluation point of a Poisson kernel: |t| < 1, real x, y; the q-case
    additionally carries the spectral parameters s, sigma."""

    t: complex
    x: float
    y: float
    s: complex | None = None
    sigma: complex | None = None

    def __post_init__(self):
        if abs(complex(self.t)) >= 1.0:
            raise DivergenceError(f"kernel point requires |t| < 1, got {self.t}")

    def thetas(self):
        """theta = arccos x, phi = arccos y on the [0, pi] branch (q-case)."""
        if abs(self.x) > 1 or abs(self.y) > 1:
            raise DomainError("q-kernel points need x, y in [-1, 1]")
        return math.acos(self.x), math.acos(self.y)


def mp_kernel_sum(k: float, phi: float, pt: KernelPoint,
                  policy: TruncationPolicy | None = None,
                  ctx: Context = STANDARD) -> SeriesEval:
    """sum_n p_n(x) p_n(y) t^n over orthonormal Meixner-Pollaczek values,
    generated by two simultaneous recurrence streams."""
    policy = policy or default_policy()
    p = MPParams(k, phi)
    with ctx.guard():
        t = ctx.cnum(pt.t)
        xs = mp_orthonormal_stream(p, pt.x, ctx)
        ys = mp_orthonormal_stream(p, pt.y, ctx)

        def terms():
            tn = ctx.cnum(1)
            while True:
                yield next(xs) * next(ys) * tn
                tn *= t

        return accumulate(terms(), policy, ctx)


def mp_kernel_closed(k: float, phi: float, pt: KernelPoint,
                     policy: TruncationPolicy | None = None,
                     ctx: Context = STANDARD) -> complex:
    """(1/Gamma(2k)) (1-t e^{2 i phi})^{i(x+y)} (1-t)^{-2k-ix-iy}
    2F1(k+ix, k+iy; 2k; r) with r = -4 t sin^2 phi / (1-t)^2.

    All powers are principal-branch; for |t| < 1 both power bases have
    positive real part, so no branch cut is crossed (asserted).
    """
    MPParams(k, phi)
    policy = policy or default_policy()
    with ctx.guard():
        i = ctx.cnum(1j)
        t = ctx.cnum(pt.t)
        x, y = ctx.rnum(pt.x), ctx.rnum(pt.y)
        sinphi = ctx.sin(ctx.rnum(phi))
        r = -4 * t * sinphi * sinphi / (1 - t) ** 2
        base1 = 1 - t * ctx.expi(2 * ctx.rnum(phi))
        base2 = 1 - t
        assert base1.real > 0 and base2.real > 0, "principal branch violated"
        f = gauss_2f1(k + i * x, k + i * y, 2 * ctx.rnum(k), r, policy, ctx)
        logpref = (-log_gamma_real(2 * k, ctx)
                   + i * (x + y) * ctx.log(base1)
                   + (-2 * k - i * (x + y)) * ctx.log(base2))
        out = ctx.exp(logpref) * f.value
    return ctx.to_complex(out) if not ctx.extended else out


def ac_kernel_sum(k: float, q, pt: KernelPoint,
                  policy: TruncationPolicy | None = None,
                  ctx: Context = STANDARD) -> SeriesEval:
    """sum_n r_n(x; q^k s, q^k/s) r_n(y; q^k sigma, q^k/sigma) t^n over
    orthonormal Al-Salam-Chihara recurrence streams."""
    policy = policy or default_policy()
    qq = _qval(q)
    _check_spectral(k, qq, pt)
    with ctx.guard():
        t = ctx.cnum(pt.t)
        s, sg = complex(pt.s), complex(pt.sigma)
        xs = asc_orthonormal_stream(qq ** k * s, qq ** k / s, qq, pt.x, ctx)
        ys = asc_orthonormal_stream(qq ** k * sg, qq ** k / sg, qq, pt.y, ctx)

        def terms():
            tn = ctx.cnum(1)
            while True:
                yield next(xs) * next(ys) * tn
                tn *= t

        return accumulate(terms(), policy, ctx)


def _check_spectral(k: float, q: float, pt: KernelPoint):
    if pt.s is None or pt.sigma is None:
        raise DomainError("q-kernel point requires spectral parameters s, sigma")
    for name, v in (("s", pt.s), ("sigma", pt.sigma)):
        m = abs(complex(v))
        if not (q ** k < m < q ** (-k) or abs(m - 1.0) <= 1e-12):
            raise DomainError(
                f"|{name}| = {m} outside (q^k, q^-k) and not on the unit circle")


def ac_kernel_closed(k: float, q, pt: KernelPoint,
                     policy: TruncationPolicy | None = None,
                     ctx: Context = STANDARD) -> complex:
    """Closed form of the nonsymmetric Al-Salam-Chihara Poisson kernel:
    q-infinite-product prefactor times 8W7 with argument t e^{i(theta+phi)}."""
    policy = policy or default_policy()
    qq = _qval(q)
    _check_spectral(k, qq, pt)
    theta, phi = pt.thetas()
    with ctx.guard():
        t = ctx.cnum(pt.t)
        s, sg = ctx.cnum(pt.s), ctx.cnum(pt.sigma)
        qk = ctx.rnum(qq) ** k
        eit, emt = ctx.expi(theta), ctx.expi(-theta)
        eip, emp = ctx.expi(phi), ctx.expi(-phi)
        num = [qk * t * emp * s, qk * t * emp / s, qk * t * emt * sg, qk * t * emt / sg]
        den = [t * eit * emp, t * emt * eip, t * emt * emp,
               ctx.rnum(qq) ** (2 * k) * t * emt * emp]
        pref = ctx.cnum(1)
        for u in num:
            pref *= qpoch(u, qq, ctx=ctx)
        for l in den:
            pref /= qpoch(l, qq, ctx=ctx)
        w = vwp_8w7(ctx.rnum(qq) ** (2 * k - 1) * t * emt * emp,
                    [qk * emt * s, qk * emt / s, qk * emp * sg, qk * emp / sg,
                     t * emt * emp],
                    qq, t * eit * eip, policy, ctx)
        out = pref * w.value
    return ctx.to_complex(out) if not ctx.extended else out


def ac_kernel_closed_alt(k: float, q, pt: KernelPoint,
                         policy: TruncationPolicy | None = None,
                         ctx: Context = STANDARD) -> complex:
    """The Bailey-transformed variant of :func:`ac_kernel_closed`, an 8W7 in
    the argument q^k e^{-i theta} / s (requires |s| > q^k)."""
    policy = policy or default_policy()
    qq = _qval(q)
    _check_spectral(k, qq, pt)
    if abs(complex(pt.s)) <= qq ** k:
        raise DivergenceError("alt kernel form needs |s| > q^k")
    theta, phi = pt.thetas()
    with ctx.guard():
        t = ctx.cnum(pt.t)
        s, sg = ctx.cnum(pt.s), ctx.cnum(pt.sigma)
        qk = ctx.rnum(qq) ** k
        eit, emt = ctx.expi(theta), ctx.expi(-theta)
        eip, emp = ctx.expi(phi), ctx.expi(-phi)
        num = [t * t, qk * emt / s, qk * t * eit * sg, qk * t * eit / sg,
               qk * t * s * eip, qk * t * s * emp]
        den = [ctx.rnum(qq) ** (2 * k), qk * s * t * t * eit, t * eit * eip,
               t * eit * emp, t * emt * emp, t * emt * eip]
        pref = ctx.cnum(1)
        for u in num:
            pref *= qpoch(u, qq, ctx=ctx)
        for l in den:
            pref /= qpoch(l, qq, ctx=ctx)
        w = vwp_8w7(ctx.rnum(qq) ** (k - 1) * s * t * t * eit,
                    [t * eit * eip, t * eit * emp, qk * s * eit, s * t / sg, s * t * sg],
                    qq, qk * emt / s, policy, ctx)
        out = pref * w.value
    return ctx.to_complex(out) if not ctx.extended else out

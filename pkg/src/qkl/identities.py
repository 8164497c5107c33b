"""Registry of the verifiable bilinear-generating-function identities.

Every entry evaluates its two sides through structurally independent code
paths (bilinear polynomial sum vs. closed form, product of series vs.
expansion), so a shared bug cannot certify itself, and emits an
:class:`IdentityReport` with the two values and their residual.

Each identity also carries a deterministic parameter sampler producing
admissible cases from a seed, and a hypothesis validator that raises
:class:`HypothesisError` naming the violated constraint.
"""
from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from typing import Callable

from .errors import DivergenceError, HypothesisError
from .hyper import (
    TruncationPolicy,
    bhs_rphis,
    default_policy,
    gauss_2f1,
    hyp_pfq,
    hyp_pfq_stable,
    vwp_8w7,
)
from .kernels import (
    KernelPoint,
    ac_kernel_closed,
    ac_kernel_closed_alt,
    ac_kernel_sum,
    mp_kernel_closed,
    mp_kernel_sum,
)
from .numerics import EXTENDED, STANDARD, Context
from .polys import (
    ASCParams,
    AWParams,
    CHahnParams,
    HahnParams,
    MPParams,
    aw_poly,
    asc_poly,
    chahn_poly,
    hahn_poly,
    jacobi_poly,
    mp_poly,
    sj_ac,
    sj_mp,
)
from .series import bessel_j, log_gamma_real, pochhammer, qpoch

_TINY = 1e-300


@dataclass(frozen=True)
class IdentityCase:
    """One parameterised instance of a registered identity."""

    identity_id: str
    params: dict
    tol_rel: float = 1e-8
    policy: TruncationPolicy = field(default_factory=default_policy)
    seed: int | None = None

    def __post_init__(self):
        if self.tol_rel <= 0:
            raise ValueError("tol_rel must be positive")


@dataclass
class IdentityReport:
    identity_id: str
    lhs: complex
    rhs: complex
    abs_err: float
    rel_err: float
    passed: bool
    terms: dict
    precision_used: str
    seed: int | None = None
    note: str | None = None


@dataclass(frozen=True)
class IdentityEntry:
    identity_id: str
    description: str
    sampler: Callable[[random.Random], dict]
    validator: Callable[[dict], None]
    eval_lhs: Callable[[dict, TruncationPolicy, Context], tuple]
    eval_rhs: Callable[[dict, TruncationPolicy, Context], tuple]
    param_names: tuple


REGISTRY: dict[str, IdentityEntry] = {}


def _register(identity_id, description, param_names, sampler, validator, lhs, rhs):
    REGISTRY[identity_id] = IdentityEntry(identity_id, description, sampler,
                                          validator, lhs, rhs, tuple(param_names))


def identity_ids() -> list[str]:
    return list(REGISTRY.keys())


def get_entry(identity_id: str) -> IdentityEntry:
    try:
        return REGISTRY[identity_id]
    except KeyError:
        raise KeyError(f"unknown identity {identity_id!r}; "
                       f"known: {', '.join(REGISTRY)}") from None


def _require(cond: bool, constraint: str):
    if not cond:
        raise HypothesisError(f"violated hypothesis: {constraint}")


def _require_conv(cond: bool, constraint: str):
    """Convergence-domain constraints (|t| < 1 etc.) are divergences."""
    if not cond:
        raise DivergenceError(f"outside convergence region: {constraint}")


def _sum_j(term_fn, policy: TruncationPolicy, ctx: Context, jmax: int = 400):
    """Sum composite bilinear terms over j, stopping after quiet_window
    consecutive terms below tail_tol * |partial sum|."""
    with ctx.guard():
        total = ctx.cnum(0)
        quiet = 0
        used = 0
        for j in range(jmax):
            t = term_fn(j)
            total += t
            used = j + 1
            if abs(t) <= policy.tail_tol * abs(total):
                quiet += 1
                if quiet >= policy.quiet_window:
                    return total, {"terms": used, "status": "Converged"}
            else:
                quiet = 0
        return total, {"terms": used, "status": "MaxTermsReached"}


def _ev_meta(ev):
    return {"terms": ev.terms_used, "status": ev.status.value,
            "tail": ev.tail_estimate}


# ---------------------------------------------------------------------------
# samplers: shared draws


def _rng(identity_id: str, seed: int) -> random.Random:
    return random.Random(f"qkl:{identity_id}:{seed}")


def _u(rng, lo, hi):
    return lo + (hi - lo) * rng.random()


def _signed(rng, lo, hi):
    return (1 if rng.random() < 0.5 else -1) * _u(rng, lo, hi)


def _qchoice(rng):
    return rng.choice([0.3, 0.5, 0.7])


# ---------------------------------------------------------------------------
# Meixner-Pollaczek Poisson kernel: bilinear sum vs closed form


def _mp_poisson_sample(rng):
    return {"k": _u(rng, 0.2, 3.0), "phi": _u(rng, 0.2, math.pi - 0.2),
            "t": _signed(rng, 0.05, 0.6), "x": _u(rng, -5, 5), "y": _u(rng, -5, 5)}


def _mp_poisson_validate(p):
    _require(p["k"] > 0, "k > 0")
    _require(0 < p["phi"] < math.pi, "0 < phi < pi")
    _require_conv(abs(complex(p["t"])) < 1, "|t| < 1")


def _mp_poisson_lhs(p, policy, ctx):
    ev = mp_kernel_sum(p["k"], p["phi"], KernelPoint(p["t"], p["x"], p["y"]),
                       policy, ctx)
    return ev.value, _ev_meta(ev)


def _mp_poisson_rhs(p, policy, ctx):
    v = mp_kernel_closed(p["k"], p["phi"], KernelPoint(p["t"], p["x"], p["y"]),
                         policy, ctx)
    return v, {}


_register("mp_poisson", "MP Poisson kernel: bilinear sum equals closed form",
          ("k", "phi", "t", "x", "y"),
          _mp_poisson_sample, _mp_poisson_validate, _mp_poisson_lhs, _mp_poisson_rhs)


# ---------------------------------------------------------------------------
# MP three-term recurrence (definitional values)


def _mp_rec_sample(rng):
    k = _u(rng, 0.2, 3.0)
    phi = _u(rng, 0.2, math.pi - 0.2)
    n = rng.randrange(1, 31)
    p = MPParams(k, phi)
    y = _u(rng, -5, 5)
    for _ in range(40):
        if abs(2 * y * math.sin(phi) * mp_poly(p, n, y, orthonormal=True)) > 1e-2:
            break
        y = _u(rng, -5, 5)
    return {"k": k, "phi": phi, "y": y, "n": n}


def _mp_rec_validate(p):
    _require(p["k"] > 0, "k > 0")
    _require(0 < p["phi"] < math.pi, "0 < phi < pi")
    _require(int(p["n"]) >= 0, "n >= 0")


def _mp_rec_lhs(p, policy, ctx):
    mpp = MPParams(p["k"], p["phi"])
    n = int(p["n"])
    v = 2 * p["y"] * math.sin(p["phi"]) * mp_poly(mpp, n, p["y"], True, ctx)
    return v, {}


def _mp_rec_rhs(p, policy, ctx):
    mpp = MPParams(p["k"], p["phi"])
    k, y, n = p["k"], p["y"], int(p["n"])
    a_n = math.sqrt((n + 1) * (n + 2 * k))
    a_nm1 = math.sqrt(n * (n - 1 + 2 * k)) if n > 0 else 0.0
    v = (a_n * mp_poly(mpp, n + 1, y, True, ctx)
         - 2 * (n + k) * math.cos(p["phi"]) * mp_poly(mpp, n, y, True, ctx))
    if n > 0:
        v += a_nm1 * mp_poly(mpp, n - 1, y, True, ctx)
    return v, {}


_register("mp_recurrence", "MP three-term recurrence on definitional values",
          ("k", "phi", "y", "n"),
          _mp_rec_sample, _mp_rec_validate, _mp_rec_lhs, _mp_rec_rhs)


# ---------------------------------------------------------------------------
# product of two 2F1 as a bilinear continuous-Hahn sum


def _hahn_product_sample(rng):
    return {"k1": _u(rng, 0.2, 2.5), "k2": _u(rng, 0.2, 2.5),
            "x1": _u(rng, -3, 3), "x2": _u(rng, -3, 3),
            "y1": _u(rng, -3, 3), "y2": _u(rng, -3, 3),
            "r": _signed(rng, 0.05, 0.6)}


def _hahn_product_validate(p):
    _require(p["k1"] > 0 and p["k2"] > 0, "k1, k2 > 0")
    _require_conv(abs(complex(p["r"])) < 1, "|r| < 1")


def _hahn_product_lhs(p, policy, ctx):
    k1, k2, r = p["k1"], p["k2"], p["r"]
    f1 = gauss_2f1(complex(k1, p["x1"]), complex(k1, p["y1"]), 2 * k1, r, policy, ctx)
    f2 = gauss_2f1(complex(k2, p["x2"]), complex(k2, p["y2"]), 2 * k2, r, policy, ctx)
    return f1.value * f2.value, {"terms": f1.terms_used + f2.terms_used}


def _hahn_product_rhs(p, policy, ctx):
    k1, k2, r = p["k1"], p["k2"], p["r"]
    x1, x2, y1, y2 = p["x1"], p["x2"], p["y1"], p["y2"]
    X, Y = x1 + x2, y1 + y2
    A = 2 * k1 + 2 * k2 - 1
    with ctx.guard():
        rr = ctx.cnum(r)
        coef = ctx.cnum(1)
        state = {"j": -1, "coef": coef}

        def term(j):
            if j > 0:
                state["coef"] = state["coef"] * (-rr) * j / (
                    (2 * k1 + j - 1) * (2 * k2 + j - 1)
                    * (A + 2 * (j - 1)) * (A + 2 * j - 1) / (A + j - 1))
            kk = k1 + k2 + j
            f = gauss_2f1(complex(kk, X), complex(kk, Y), 2 * kk, r, policy, ctx)
            px = chahn_poly(CHahnParams(k1, complex(k2, -X), k1, complex(k2, X)),
                            j, x1, ctx)
            py = chahn_poly(CHahnParams(k1, complex(k2, -Y), k1, complex(k2, Y)),
                            j, y1, ctx)
            return state["coef"] * f.value * px * py

        return _sum_j(term, policy, ctx)


_register("hahn_product", "product of two 2F1 as continuous-Hahn bilinear sum",
          ("k1", "k2", "x1", "x2", "y1", "y2", "r"),
          _hahn_product_sample, _hahn_product_validate,
          _hahn_product_lhs, _hahn_product_rhs)


# ---------------------------------------------------------------------------
# continuous Hahn bilinear sum formula


def _chahn_bilinear_sample(rng):
    return {"a": _u(rng, 0.25, 2.2), "beta": _u(rng, 0.25, 2.0),
            "u": _u(rng, -2, 2), "v": _u(rng, -2, 2),
            "x": _u(rng, -3, 3), "y": _u(rng, -3, 3),
            "r": _signed(rng, 0.05, 0.6)}


def _chahn_abcd(p):
    b = complex(p["beta"], p["u"])
    d = b.conjugate()
    b2 = complex(p["beta"], p["v"])
    d2 = b2.conjugate()
    return p["a"], b, d, b2, d2


def _chahn_bilinear_validate(p):
    a, b, d, b2, d2 = _chahn_abcd(p)
    _require(a > 0, "a > 0")
    _require(b.real > 0 and b2.real > 0, "Re b, Re b' > 0")
    _require(abs(d - b.conjugate()) <= 1e-12, "d = conj(b)")
    _require(abs(d2 - b2.conjugate()) <= 1e-12, "d' = conj(b')")
    _require(abs((b + d) - (b2 + d2)) <= 1e-12, "b + d = b' + d'")
    _require_conv(abs(complex(p["r"])) < 1, "|r| < 1")


def _chahn_bilinear_lhs(p, policy, ctx):
    a, b, d, b2, d2 = _chahn_abcd(p)
    r, x, y = p["r"], p["x"], p["y"]
    bd = (b + d).real
    A = 2 * a + bd - 1
    with ctx.guard():
        rr = ctx.cnum(r)
        state = {"coef": ctx.cnum(1)}

        def term(j):
            if j > 0:
                state["coef"] = state["coef"] * (-1) * j / (
                    (2 * a + j - 1) * (bd + j - 1)
                    * (A + 2 * (j - 1)) * (A + 2 * j - 1) / (A + j - 1))
            f = gauss_2f1(a + d + j, a + d2 + j, 2 * a + bd + 2 * j, r, policy, ctx)
            px = chahn_poly(CHahnParams(a, b, a, d), j, x, ctx)
            py = chahn_poly(CHahnParams(a, b2, a, d2), j, y, ctx)
            return state["coef"] * f.value * px * py * rr ** j

        return _sum_j(term, policy, ctx)


def _chahn_bilinear_rhs(p, policy, ctx):
    a, b, d, b2, d2 = _chahn_abcd(p)
    r, x, y = p["r"], p["x"], p["y"]
    f1 = gauss_2f1(complex(a, x), complex(a, y), 2 * a, r, policy, ctx)
    f2 = gauss_2f1(d - 1j * x, d2 - 1j * y, b + d, r, policy, ctx)
    return f1.value * f2.value, {"terms": f1.terms_used + f2.terms_used}


_register("chahn_bilinear", "continuous Hahn bilinear sum formula",
          ("a", "beta", "u", "v", "x", "y", "r"),
          _chahn_bilinear_sample, _chahn_bilinear_validate,
          _chahn_bilinear_lhs, _chahn_bilinear_rhs)


# ---------------------------------------------------------------------------
# Jacobi x Bessel bilinear generating function (Bateman 1904)


def _jacobi_bessel_sample(rng):
    return {"alpha": _u(rng, -0.45, 3.0), "beta": _u(rng, -0.45, 3.0),
            "x": _u(rng, -0.9, 0.9), "y": _u(rng, -0.9, 0.9),
            "z": _u(rng, 0.5, 10.0)}


def _jacobi_bessel_validate(p):
    _require(p["alpha"] > -1 and p["beta"] > -1, "alpha, beta > -1")
    _require(abs(p["x"]) < 1 and abs(p["y"]) < 1, "|x|, |y| < 1")
    _require(0 <= p["z"] <= 30, "0 <= z <= 30")


def _jacobi_bessel_lhs(p, policy, ctx):
    al, be, x, y, z = p["alpha"], p["beta"], p["x"], p["y"], p["z"]

    def term(j):
        nu = al + be + 2 * j + 1
        logc = (math.lgamma(j + 1) + math.lgamma(al + be + j + 1)
                - math.lgamma(al + j + 1) - math.lgamma(be + j + 1))
        coef = (-1) ** j * (al + be + 2 * j + 1) * math.exp(logc)
        bj = bessel_j(nu, z, ctx)
        if abs(bj) < 1e-18:
            return ctx.cnum(0)
        return ctx.cnum(coef * jacobi_poly(al, be, j, x, ctx)
                        * jacobi_poly(al, be, j, y, ctx) * bj)

    return _sum_j(term, policy, ctx, jmax=60)


def _jacobi_bessel_rhs(p, policy, ctx):
    al, be, x, y, z = p["alpha"], p["beta"], p["x"], p["y"], p["z"]
    mm = (1 - x) * (1 - y)
    pp = (1 + x) * (1 + y)
    v = (2.0 ** (al + be - 1) * mm ** (-al / 2) * pp ** (-be / 2) * z
         * bessel_j(al, z / 2 * math.sqrt(mm), ctx)
         * bessel_j(be, z / 2 * math.sqrt(pp), ctx))
    return ctx.cnum(v), {}


_register("jacobi_bessel", "Jacobi-Bessel bilinear generating function",
          ("alpha", "beta", "x", "y", "z"),
          _jacobi_bessel_sample, _jacobi_bessel_validate,
          _jacobi_bessel_lhs, _jacobi_bessel_rhs)


# ---------------------------------------------------------------------------
# terminating continuous-Hahn sum (coefficient of r^K) and its Whipple form


def _chahn_finite_sample(rng):
    return {"a": _u(rng, 0.25, 2.2), "beta": _u(rng, 0.25, 2.0),
            "u": _u(rng, -2, 2), "v": _u(rng, -2, 2),
            "x": _u(rng, -3, 3), "y": _u(rng, -3, 3),
            "K": rng.randrange(1, 11)}


def _chahn_finite_validate(p):
    _chahn_bilinear_validate({**p, "r": 0.0})
    _require(1 <= int(p["K"]) <= 10, "1 <= K <= 10")


def _chahn_finite_lhs(p, policy, ctx):
    a, b, d, b2, d2 = _chahn_abcd(p)
    x, y, K = p["x"], p["y"], int(p["K"])
    bd = (b + d).real
    S = 2 * a + bd
    with ctx.guard():
        total = ctx.cnum(0)
        for j in range(K + 1):
            num = (pochhammer(-K, j, ctx) * pochhammer(S, 2 * j, ctx)
                   * ctx.rexp(log_gamma_real(j + 1, ctx)))
            den = (pochhammer(2 * a, j, ctx) * pochhammer(bd, j, ctx)
                   * pochhammer(S + j - 1, j, ctx) * pochhammer(a + d, j, ctx)
                   * pochhammer(a + d2, j, ctx) * pochhammer(S + K, j, ctx))
            px = chahn_poly(CHahnParams(a, b, a, d), j, x, ctx)
            py = chahn_poly(CHahnParams(a, b2, a, d2), j, y, ctx)
            total += num / den * px * py
        return total, {"terms": K + 1}


def _chahn_finite_rhs(p, policy, ctx):
    a, b, d, b2, d2 = _chahn_abcd(p)
    x, y, K = p["x"], p["y"], int(p["K"])
    bd = (b + d).real
    S = 2 * a + bd
    with ctx.guard():
        pref = (pochhammer(d - 1j * x, K, ctx) * pochhammer(d2 - 1j * y, K, ctx)
                * pochhammer(S, K, ctx)
                / (pochhammer(a + d, K, ctx) * pochhammer(a + d2, K, ctx)
                   * pochhammer(bd, K, ctx)))
        f = hyp_pfq_stable([-K, 1 - K - bd, complex(a, x), complex(a, y)],
                           [2 * a, 1 - K - d + 1j * x, 1 - K - d2 + 1j * y],
                           1, ctx, lost_hint=0.6 * K)
        return pref * f, {"terms": K + 1}


_register("chahn_finite", "terminating continuous-Hahn bilinear sum",
          ("a", "beta", "u", "v", "x", "y", "K"),
          _chahn_finite_sample, _chahn_finite_validate,
          _chahn_finite_lhs, _chahn_finite_rhs)


def _chahn_whipple_sample(rng):
    p = _chahn_finite_sample(rng)
    p.pop("v")
    return p


def _chahn_whipple_params(p):
    # b' = d, d' = b: the balanced case b = d'
    return {**p, "v": -p["u"]}


def _chahn_whipple_validate(p):
    _chahn_finite_validate(_chahn_whipple_params(p))


def _chahn_whipple_lhs(p, policy, ctx):
    return _chahn_finite_lhs(_chahn_whipple_params(p), policy, ctx)


def _chahn_whipple_rhs(p, policy, ctx):
    q = _chahn_whipple_params(p)
    a, b, d, b2, d2 = _chahn_abcd(q)
    x, y, K = q["x"], q["y"], int(q["K"])
    bd = (b + d).real
    S = 2 * a + bd
    with ctx.guard():
        pref = (pochhammer(d - 1j * x, K, ctx) * pochhammer(d2 - 1j * y, K, ctx)
                * pochhammer(S, K, ctx)
                / (pochhammer(a + d, K, ctx) * pochhammer(a + d2, K, ctx)
                   * pochhammer(bd, K, ctx)))
        whip = (pochhammer(a + d, K, ctx)
                * pochhammer(a + b + 1j * (x - y), K, ctx)
                / (pochhammer(d - 1j * x, K, ctx) * pochhammer(b - 1j * y, K, ctx)))
        f = hyp_pfq_stable([-K, S + K - 1, complex(a, x), complex(a, -y)],
                           [2 * a, a + d, a + b + 1j * (x - y)],
                           1, ctx, lost_hint=0.6 * K)
        return pref * whip * f, {"terms": K + 1}


_register("chahn_finite_whipple",
          "terminating continuous-Hahn sum, Whipple-transformed right side",
          ("a", "beta", "u", "x", "y", "K"),
          _chahn_whipple_sample, _chahn_whipple_validate,
          _chahn_whipple_lhs, _chahn_whipple_rhs)


# ---------------------------------------------------------------------------
# multiplication formula for 2F1 x 2F1


def _away_from_nonpos_int(rng, lo, hi, *sums):
    """Draw v such that v + s stays 0.07 clear of nonpositive integers for
    every s in sums."""
    for _ in range(100):
        v = _u(rng, lo, hi)
        ok = True
        for s in sums:
            w = v + s
            if w < 0.07 and abs(w - round(w)) < 0.07:
                ok = False
                break
        if ok:
            return v
    return hi


def _mult_2f1_sample(rng):
    a = _u(rng, -2.5, 2.5)
    b = _u(rng, -2.5, 2.5)
    a2 = _away_from_nonpos_int(rng, -2.5, 2.5, a)
    b2 = _away_from_nonpos_int(rng, -2.5, 2.5, b)
    c = _away_from_nonpos_int(rng, 0.4, 3.0, 0.0)
    c2 = _away_from_nonpos_int(rng, 0.4, 3.0, 0.0, c - 1.0)
    return {"a": a, "b": b, "c": c, "a2": a2, "b2": b2, "c2": c2,
            "z": _signed(rng, 0.05, 0.6)}


def _is_nonpos_int(v, tol=1e-9):
    vc = complex(v)
    return (abs(vc.imag) <= tol and vc.real <= tol
            and abs(vc.real - round(vc.real)) <= tol)


def _mult_2f1_validate(p):
    _require(not _is_nonpos_int(p["c"]) and not _is_nonpos_int(p["c2"]),
             "c, c' not nonpositive integers")
    _require_conv(abs(complex(p["z"])) < 1, "|z| < 1")
    for u, u2 in (("a", "a2"), ("b", "b2")):
        if _is_nonpos_int(p[u] + p[u2]):
            _require(_is_nonpos_int(p[u]) and _is_nonpos_int(p[u2]),
                     f"{u}+{u}' nonpositive integer only when both are")


def _mult_2f1_lhs(p, policy, ctx):
    f1 = gauss_2f1(p["a"], p["b"], p["c"], p["z"], policy, ctx)
    f2 = gauss_2f1(p["a2"], p["b2"], p["c2"], p["z"], policy, ctx)
    return f1.value * f2.value, {"terms": f1.terms_used + f2.terms_used}


def _mult_2f1_rhs(p, policy, ctx):
    a, b, c, a2, b2, c2, z = (p[k] for k in ("a", "b", "c", "a2", "b2", "c2", "z"))
    A, B, C = a + a2, b + b2, c + c2 - 1
    with ctx.guard():
        zc = ctx.cnum(z)
        state = {"coef": ctx.cnum(1)}

        def term(j):
            if j > 0:
                jm = j - 1
                state["coef"] = state["coef"] * (c + jm) * (A + jm) * (B + jm) / (
                    j * (c2 + jm) * (C + 2 * jm) * (C + 2 * jm + 1) / (C + jm))
            if state["coef"] == 0:
                return ctx.cnum(0)
            f3a = hyp_pfq_stable([-j, a, c + c2 + j - 1], [A, c], 1, ctx,
                                 lost_hint=0.45 * j)
            f3b = hyp_pfq_stable([-j, b, c + c2 + j - 1], [B, c], 1, ctx,
                                 lost_hint=0.45 * j)
            f = gauss_2f1(A + j, B + j, c + c2 + 2 * j, z, policy, ctx)
            return state["coef"] * f3a * f3b * f.value * zc ** j

        return _sum_j(term, policy, ctx)


_register("mult_2f1", "multiplication formula for a product of two 2F1",
          ("a", "b", "c", "a2", "b2", "c2", "z"),
          _mult_2f1_sample, _mult_2f1_validate, _mult_2f1_lhs, _mult_2f1_rhs)


def _bc_sample(rng):
    a = _u(rng, -2.2, 2.2)
    b = _u(rng, -2.2, 2.2)
    if _is_nonpos_int(2 * a, 0.07):
        a += 0.11
    if _is_nonpos_int(2 * b, 0.07):
        b += 0.11
    c = _away_from_nonpos_int(rng, 0.4, 3.0, 0.0)
    return {"a": a, "b": b, "c": c, "z": _signed(rng, 0.05, 0.6)}


def _bc_expand(p):
    return {"a": p["a"], "b": p["b"], "c": p["c"],
            "a2": p["a"], "b2": p["b"], "c2": p["c"], "z": p["z"]}


_register("burchnall_chaundy",
          "square of a 2F1 as a self-consistency case of the multiplication formula",
          ("a", "b", "c", "z"),
          _bc_sample,
          lambda p: _mult_2f1_validate(_bc_expand(p)),
          lambda p, pol, ctx: _mult_2f1_lhs(_bc_expand(p), pol, ctx),
          lambda p, pol, ctx: _mult_2f1_rhs(_bc_expand(p), pol, ctx))


# ---------------------------------------------------------------------------
# confluent limit: product of two 1F1


def _conf_sample(rng):
    a = _u(rng, -2.0, 2.5)
    a2 = _away_from_nonpos_int(rng, -2.0, 2.5, a)
    c = _away_from_nonpos_int(rng, 0.4, 3.0, 0.0)
    c2 = _away_from_nonpos_int(rng, 0.4, 3.0, 0.0, c - 1.0)
    return {"a": a, "c": c, "a2": a2, "c2": c2,
            "x": _u(rng, 0.2, 3.0), "y": _u(rng, 0.2, 3.0)}


def _conf_validate(p):
    _require(not _is_nonpos_int(p["c"]) and not _is_nonpos_int(p["c2"]),
             "c, c' not nonpositive integers")
    if _is_nonpos_int(p["a"] + p["a2"]):
        _require(_is_nonpos_int(p["a"]) and _is_nonpos_int(p["a2"]),
                 "a+a' nonpositive integer only when both are")
    _require(p["x"] > 0 and p["y"] > 0, "x, y > 0")


def _conf_lhs(p, policy, ctx):
    f1 = hyp_pfq([p["a"]], [p["c"]], p["x"], policy, ctx)
    f2 = hyp_pfq([p["a2"]], [p["c2"]], p["y"], policy, ctx)
    return f1.value * f2.value, {"terms": f1.terms_used + f2.terms_used}


def _conf_rhs(p, policy, ctx):
    a, c, a2, c2, x, y = (p[k] for k in ("a", "c", "a2", "c2", "x", "y"))
    A, C = a + a2, c + c2 - 1
    s = x + y
    with ctx.guard():
        state = {"coef": ctx.cnum(1)}

        def term(j):
            if j > 0:
                jm = j - 1
                state["coef"] = state["coef"] * (c + jm) * (A + jm) / (
                    j * (c2 + jm) * (C + 2 * jm) * (C + 2 * jm + 1) / (C + jm))
            if state["coef"] == 0:
                return ctx.cnum(0)
            f3 = hyp_pfq_stable([-j, a, c + c2 + j - 1], [A, c], 1, ctx,
                                lost_hint=0.45 * j)
            f2a = hyp_pfq_stable([-j, c + c2 + j - 1], [c], x / s, ctx,
                                 lost_hint=0.4 * j)
            f1b = hyp_pfq([a + a2 + j], [c + c2 + 2 * j], s, policy, ctx)
            return state["coef"] * f3 * f2a * f1b.value * ctx.cnum(s) ** j

        return _sum_j(term, policy, ctx)


_register("conf_1f1", "confluent product formula for two 1F1",
          ("a", "c", "a2", "c2", "x", "y"),
          _conf_sample, _conf_validate, _conf_lhs, _conf_rhs)


# ---------------------------------------------------------------------------
# discrete Hahn bilinear theorem (floating route)


def _hahn_disc_sample(rng):
    M = rng.randrange(2, 7)
    N = rng.randrange(2, 7)
    return {"alpha": _u(rng, -0.25, 3.0), "beta": _u(rng, -0.25, 3.0),
            "M": M, "N": N, "x": rng.randrange(0, M + 1),
            "y": rng.randrange(0, N + 1), "z": _signed(rng, 0.1, 1.2)}


def _hahn_disc_validate(p):
    M, N = int(p["M"]), int(p["N"])
    _require(M >= 1 and N >= 1, "M, N positive integers")
    _require(0 <= int(p["x"]) <= M, "x in {0..M}")
    _require(0 <= int(p["y"]) <= N, "y in {0..N}")
    _require(not _is_nonpos_int(p["beta"] + 1), "beta + 1 not a nonpositive integer")
    _require(not _is_nonpos_int(p["alpha"] + 1), "alpha + 1 not a nonpositive integer")


def _hahn_disc_lhs(p, policy, ctx):
    al, be = p["alpha"], p["beta"]
    M, N, x, y, z = int(p["M"]), int(p["N"]), int(p["x"]), int(p["y"]), p["z"]
    jmax = min(M, N)
    with ctx.guard():
        total = ctx.cnum(0)
        for j in range(jmax + 1):
            coef = (pochhammer(al + 1, j, ctx) * pochhammer(-M, j, ctx)
                    * pochhammer(-N, j, ctx)
                    / (ctx.rexp(log_gamma_real(j + 1, ctx))
                       * pochhammer(be + 1, j, ctx)
                       * pochhammer(al + be + j + 1, j, ctx)))
            qx = hahn_poly(HahnParams(al, be, M), j, x, ctx)
            qy = hahn_poly(HahnParams(al, be, N), j, y, ctx)
            f = hyp_pfq_stable([j - M, j - N], [al + be + 2 * j + 2], z, ctx,
                               lost_hint=0.4 * (jmax - j))
            total += coef * qx * qy * f * ctx.cnum(z) ** j
        return total, {"terms": jmax + 1}


def _hahn_disc_rhs(p, policy, ctx):
    al, be = p["alpha"], p["beta"]
    M, N, x, y, z = int(p["M"]), int(p["N"]), int(p["x"]), int(p["y"]), p["z"]
    fa = hyp_pfq_stable([-x, -y], [al + 1], z, ctx, lost_hint=0.4 * min(x, y))
    fb = hyp_pfq_stable([x - M, y - N], [be + 1], z, ctx,
                        lost_hint=0.4 * min(M - x, N - y))
    with ctx.guard():
        return fa * fb, {"terms": min(x, y) + min(M - x, N - y) + 2}


_register("hahn_bilinear_discrete",
          "discrete Hahn bilinear theorem (floating route, corrected 1/j!)",
          ("alpha", "beta", "M", "N", "x", "y", "z"),
          _hahn_disc_sample, _hahn_disc_validate, _hahn_disc_lhs, _hahn_disc_rhs)


# ---------------------------------------------------------------------------
# Al-Salam-Chihara Poisson kernel: sum vs closed vs Bailey-transformed


def _ac_point_sample(rng):
    q = _qchoice(rng)
    k = _u(rng, 0.2, 1.6)
    lo, hi = q ** k + 0.05, q ** (-k) - 0.05

    def draw_s():
        if rng.random() < 0.3:
            return cmath.exp(1j * _u(rng, 0.1, math.pi - 0.1))
        return _u(rng, lo, hi)

    return {"q": q, "k": k, "s": draw_s(), "sigma": draw_s(),
            "t": _signed(rng, 0.05, 0.5),
            "x": math.cos(_u(rng, 0.15, math.pi - 0.15)),
            "y": math.cos(_u(rng, 0.15, math.pi - 0.15))}


def _ac_point_validate(p):
    q, k = p["q"], p["k"]
    _require(0 < q < 1, "0 < q < 1")
    _require(k > 0, "k > 0")
    _require_conv(abs(complex(p["t"])) < 1, "|t| < 1")
    for name in ("s", "sigma"):
        m = abs(complex(p[name]))
        _require(q ** k < m < q ** (-k) or abs(m - 1) <= 1e-12,
                 f"|{name}| in (q^k, q^-k) or |{name}| = 1")
    _require(abs(p["x"]) <= 1 and abs(p["y"]) <= 1, "x, y in [-1, 1]")


def _ac_pt(p):
    return KernelPoint(p["t"], p["x"], p["y"], s=p["s"], sigma=p["sigma"])


def _ac_poisson_lhs(p, policy, ctx):
    ev = ac_kernel_sum(p["k"], p["q"], _ac_pt(p), policy, ctx)
    return ev.value, _ev_meta(ev)


def _ac_poisson_rhs(p, policy, ctx):
    return ac_kernel_closed(p["k"], p["q"], _ac_pt(p), policy, ctx), {}


_register("ac_poisson", "ASC Poisson kernel: bilinear sum equals 8W7 closed form",
          ("q", "k", "s", "sigma", "t", "x", "y"),
          _ac_point_sample, _ac_point_validate, _ac_poisson_lhs, _ac_poisson_rhs)


def _ac_alt_validate(p):
    _ac_point_validate(p)
    _require(abs(complex(p["s"])) > p["q"] ** p["k"], "|s| > q^k for the alt form")


_register("ac_poisson_alt",
          "the two printed 8W7 closed forms of the ASC kernel agree",
          ("q", "k", "s", "sigma", "t", "x", "y"),
          _ac_point_sample, _ac_alt_validate,
          lambda p, pol, ctx: (ac_kernel_closed(p["k"], p["q"], _ac_pt(p), pol, ctx), {}),
          lambda p, pol, ctx: (ac_kernel_closed_alt(p["k"], p["q"], _ac_pt(p), pol, ctx), {}))


# ---------------------------------------------------------------------------
# coupled expansion of a product of two ASC kernels


def _ac_spoisson_sample(rng):
    q = _qchoice(rng)
    k1 = _u(rng, 0.2, 1.4)
    k2 = _u(rng, 0.2, 1.4)
    lo, hi = q ** k2 + 0.05, q ** (-k2) - 0.05
    ang = lambda: _u(rng, 0.15, math.pi - 0.15)
    return {"q": q, "k1": k1, "k2": k2,
            "s": _u(rng, lo, hi), "sigma": _u(rng, lo, hi),
            "t": _signed(rng, 0.05, 0.35),
            "x1": math.cos(ang()), "x2": math.cos(ang()),
            "y1": math.cos(ang()), "y2": math.cos(ang())}


def _ac_spoisson_validate(p):
    q, k1, k2 = p["q"], p["k1"], p["k2"]
    _require(0 < q < 1, "0 < q < 1")
    _require(k1 > 0 and k2 > 0, "k1, k2 > 0")
    _require_conv(abs(complex(p["t"])) < 1, "|t| < 1")
    for name in ("s", "sigma"):
        m = abs(complex(p[name]))
        _require(q ** k2 < m < q ** (-k2), f"|{name}| in (q^k2, q^-k2)")
    for name in ("x1", "x2", "y1", "y2"):
        _require(abs(p[name]) <= 1, f"{name} in [-1, 1]")


def _ac_spoisson_lhs(p, policy, ctx):
    th2 = math.acos(p["x2"])
    ph2 = math.acos(p["y2"])
    pt1 = KernelPoint(p["t"], p["x1"], p["y1"],
                      s=cmath.exp(1j * th2), sigma=cmath.exp(1j * ph2))
    pt2 = KernelPoint(p["t"], p["x2"], p["y2"], s=p["s"], sigma=p["sigma"])
    e1 = ac_kernel_sum(p["k1"], p["q"], pt1, policy, ctx)
    e2 = ac_kernel_sum(p["k2"], p["q"], pt2, policy, ctx)
    return e1.value * e2.value, {"terms": e1.terms_used + e2.terms_used}


def _ac_spoisson_rhs(p, policy, ctx):
    q, k1, k2, t = p["q"], p["k1"], p["k2"], p["t"]
    s, sg = p["s"], p["sigma"]

    def term(j):
        kk = k1 + k2 + j
        v = ac_kernel_closed(kk, q, KernelPoint(t, p["x1"], p["y1"], s=s, sigma=sg),
                             policy, ctx)
        sx = sj_ac(k1, k2, j, p["x1"], p["x2"], s, q, ctx)
        sy = sj_ac(k1, k2, j, p["y1"], p["y2"], sg, q, ctx)
        return ctx.cnum(t) ** j * ctx.cnum(v) * ctx.cnum(sx) * ctx.cnum(sy)

    return _sum_j(term, policy, ctx, jmax=200)


_register("ac_spoisson",
          "product of two ASC kernels as a coupled Askey-Wilson expansion",
          ("q", "k1", "k2", "s", "sigma", "t", "x1", "x2", "y1", "y2"),
          _ac_spoisson_sample, _ac_spoisson_validate,
          _ac_spoisson_lhs, _ac_spoisson_rhs)


# ---------------------------------------------------------------------------
# Askey-Wilson bilinear generating function (8W7 coefficients H_j)


def _aw_bilinear_sample(rng):
    q = _qchoice(rng)

    def draw(lo=0.15, hi=0.7):
        return _signed(rng, lo, hi)

    a, b, c, d = draw(), draw(), draw(), draw()
    # |b'| drawn so that a' = ab/b' keeps every modulus <= 0.7 by construction
    b2 = _signed(rng, max(0.15, abs(a * b) / 0.7), 0.7)
    a2 = a * b / b2
    d2 = _signed(rng, max(0.15, abs(c * d) / 0.7), 0.7)
    c2 = c * d / d2
    t = _signed(rng, 0.05, 0.4)
    while abs(a2 * t / b) >= 0.95:
        t *= 0.5
    return {"q": q, "a": a, "b": b, "c": c, "d": d, "a2": a2, "c2": c2,
            "t": t, "x": math.cos(_u(rng, 0.15, math.pi - 0.15)),
            "y": math.cos(_u(rng, 0.15, math.pi - 0.15))}


def _aw_primed(p):
    b2 = p["a"] * p["b"] / p["a2"]
    d2 = p["c"] * p["d"] / p["c2"]
    return b2, d2


def _aw_bilinear_validate(p):
    b2, d2 = _aw_primed(p)
    _require(0 < p["q"] < 1, "0 < q < 1")
    mods = [abs(complex(p[k])) for k in ("a", "b", "c", "d", "a2", "c2")]
    mods += [abs(complex(b2)), abs(complex(d2))]
    _require(max(mods) < 1, "max parameter modulus < 1")
    _require_conv(abs(complex(p["t"])) < 1, "|t| < 1")
    _require_conv(abs(p["a2"] * p["t"] / p["b"]) < 1, "|a' t / b| < 1")
    _require(abs(p["a"] * p["b"] - p["a2"] * b2) <= 1e-12 * max(1, abs(p["a"] * p["b"])),
             "ab = a'b'")
    _require(abs(p["c"] * p["d"] - p["c2"] * d2) <= 1e-12 * max(1, abs(p["c"] * p["d"])),
             "cd = c'd'")


def _aw_bilinear_lhs(p, policy, ctx):
    q, t = p["q"], p["t"]
    a, b, c, d, a2, c2 = (p[k] for k in ("a", "b", "c", "d", "a2", "c2"))
    b2, d2 = _aw_primed(p)
    z87 = a2 * t / b
    with ctx.guard():
        tc = ctx.cnum(t)

        def term(j):
            qj = q ** j
            num = qpoch(b * c2 * qj * t, q, ctx=ctx) * qpoch(b2 * c * qj * t, q, ctx=ctx) \
                * qpoch(b * d2 * qj * t, q, ctx=ctx) * qpoch(b2 * d * qj * t, q, ctx=ctx)
            den = qpoch(b * b2 * c * d * q ** (2 * j) * t, q, ctx=ctx) \
                * qpoch(q, q, j, ctx=ctx) * qpoch(a * b, q, j, ctx=ctx) \
                * qpoch(c * d, q, j, ctx=ctx) \
                * qpoch(a * b * c * d * q ** (j - 1), q, j, ctx=ctx)
            w = vwp_8w7(b * b2 * c * d * q ** (2 * j - 1) * t,
                        [b * c * qj, b * d * qj, b2 * c2 * qj, b2 * d2 * qj, b * t / a2],
                        q, z87, policy, ctx)
            hj = num / den * w.value
            px = aw_poly(AWParams(q, a, b, c, d), j, p["x"], ctx)
            py = aw_poly(AWParams(q, a2, b2, c2, d2), j, p["y"], ctx)
            return hj * ctx.cnum(px) * ctx.cnum(py) * tc ** j

        return _sum_j(term, policy, ctx, jmax=200)


def _aw_bilinear_rhs(p, policy, ctx):
    q, t = p["q"], p["t"]
    a, b, c, d, a2, c2 = (p[k] for k in ("a", "b", "c", "d", "a2", "c2"))
    b2, d2 = _aw_primed(p)
    theta, phi = math.acos(p["x"]), math.acos(p["y"])
    with ctx.guard():
        eit, emt = ctx.expi(theta), ctx.expi(-theta)
        eip, emp = ctx.expi(phi), ctx.expi(-phi)
        num = [b * t * eip, b * t * emp, c * t * emp, d * t * emp,
               b2 * t * eit, b2 * t * emt, c2 * t * emt, d2 * t * emt]
        den = [b * b2 * t, t * eit * emp, t * emt * eip, t * emt * emp,
               c * d * t * emt * emp]
        pref = ctx.cnum(1)
        for u in num:
            pref *= qpoch(u, q, ctx=ctx)
        for l in den:
            pref /= qpoch(l, q, ctx=ctx)
        w1 = vwp_8w7(b * b2 * t / q, [b * eit, b * emt, b2 * eip, b2 * emp, b * t / a2],
                     q, a2 * t / b, policy, ctx)
        w2 = vwp_8w7(c * d * t * emt * emp / q,
                     [c * emt, d * emt, c2 * emp, d2 * emp, t * emt * emp],
                     q, t * eit * eip, policy, ctx)
        return pref * w1.value * w2.value, {"terms": w1.terms_used + w2.terms_used}


_register("aw_bilinear", "Askey-Wilson bilinear generating function",
          ("q", "a", "b", "c", "d", "a2", "c2", "t", "x", "y"),
          _aw_bilinear_sample, _aw_bilinear_validate,
          _aw_bilinear_lhs, _aw_bilinear_rhs)


# ---------------------------------------------------------------------------
# continuous dual q-Hahn specialisation (d = d' = 0)


def _cdqh_sample(rng):
    q = _qchoice(rng)

    def draw():
        return _signed(rng, 0.15, 0.7)

    a, b, c, c2 = draw(), draw(), draw(), draw()
    b2 = _signed(rng, max(0.15, abs(a * b) / 0.7), 0.7)
    a2 = a * b / b2
    t = _signed(rng, 0.05, 0.4)
    while abs(a2 * t / b) >= 0.95:
        t *= 0.5
    return {"q": q, "a": a, "b": b, "c": c, "a2": a2, "c2": c2, "t": t,
            "x": math.cos(_u(rng, 0.15, math.pi - 0.15)),
            "y": math.cos(_u(rng, 0.15, math.pi - 0.15))}


def _cdqh_validate(p):
    b2 = p["a"] * p["b"] / p["a2"]
    _require(0 < p["q"] < 1, "0 < q < 1")
    mods = [abs(complex(p[k])) for k in ("a", "b", "c", "a2", "c2")] + [abs(b2)]
    _require(max(mods) < 1, "max parameter modulus < 1")
    _require_conv(abs(complex(p["t"])) < 1, "|t| < 1")
    _require_conv(abs(p["a2"] * p["t"] / p["b"]) < 1, "|a' t / b| < 1")


def _cdqh_lhs(p, policy, ctx):
    q, t = p["q"], p["t"]
    a, b, c, a2, c2 = (p[k] for k in ("a", "b", "c", "a2", "c2"))
    b2 = a * b / a2
    with ctx.guard():
        tc = ctx.cnum(t)

        def term(j):
            qj = q ** j
            gj = qpoch(b * c2 * qj * t, q, ctx=ctx) * qpoch(b2 * c * qj * t, q, ctx=ctx) \
                / (qpoch(q, q, j, ctx=ctx) * qpoch(a * b, q, j, ctx=ctx))
            f = bhs_rphis([b * c * qj, b2 * c2 * qj, b * t / a2],
                          [b * c2 * qj * t, b2 * c * qj * t], q, a2 * t / b,
                          policy, ctx)
            px = aw_poly(AWParams(q, a, b, c, 0.0), j, p["x"], ctx)
            py = aw_poly(AWParams(q, a2, b2, c2, 0.0), j, p["y"], ctx)
            return gj * f.value * ctx.cnum(px) * ctx.cnum(py) * tc ** j

        return _sum_j(term, policy, ctx, jmax=200)


def _cdqh_rhs(p, policy, ctx):
    q, t = p["q"], p["t"]
    a, b, c, a2, c2 = (p[k] for k in ("a", "b", "c", "a2", "c2"))
    b2 = a * b / a2
    theta, phi = math.acos(p["x"]), math.acos(p["y"])
    with ctx.guard():
        eit, emt = ctx.expi(theta), ctx.expi(-theta)
        eip, emp = ctx.expi(phi), ctx.expi(-phi)
        num = [b * t * eip, b * t * emp, c * t * emp,
               b2 * t * eit, b2 * t * emt, c2 * t * emt]
        den = [b * b2 * t, t * eit * emp, t * emt * eip, t * emt * emp]
        pref = ctx.cnum(1)
        for u in num:
            pref *= qpoch(u, q, ctx=ctx)
        for l in den:
            pref /= qpoch(l, q, ctx=ctx)
        w1 = vwp_8w7(b * b2 * t / q, [b * eit, b * emt, b2 * eip, b2 * emp, b * t / a2],
                     q, a2 * t / b, policy, ctx)
        f = bhs_rphis([c * emt, c2 * emp, t * emt * emp],
                      [c * t * emp, c2 * t * emt], q, t * eit * eip, policy, ctx)
        return pref * w1.value * f.value, {"terms": w1.terms_used + f.terms_used}


_register("cdqh_bilinear",
          "continuous dual q-Hahn bilinear generating function (d = d' = 0)",
          ("q", "a", "b", "c", "a2", "c2", "t", "x", "y"),
          _cdqh_sample, _cdqh_validate, _cdqh_lhs, _cdqh_rhs)


# ---------------------------------------------------------------------------
# Al-Salam-Chihara bilinear generating function (no product constraint)


def _asc_bilinear_sample(rng):
    q = _qchoice(rng)

    def draw():
        return _signed(rng, 0.15, 0.7)

    a, c, a2, c2 = draw(), draw(), draw(), draw()
    t = _signed(rng, 0.05, 0.4)
    while abs(t * c2 / c) >= 0.95:
        t *= 0.5
    return {"q": q, "a": a, "c": c, "a2": a2, "c2": c2, "t": t,
            "x": math.cos(_u(rng, 0.15, math.pi - 0.15)),
            "y": math.cos(_u(rng, 0.15, math.pi - 0.15))}


def _asc_bilinear_validate(p):
    _require(0 < p["q"] < 1, "0 < q < 1")
    _require(max(abs(p["a"]), abs(p["c"])) < 1, "max(|a|, |c|) < 1")
    _require(max(abs(p["a2"]), abs(p["c2"])) < 1, "max(|a'|, |c'|) < 1")
    _require_conv(abs(complex(p["t"])) < 1, "|t| < 1")
    _require_conv(abs(p["t"] * p["c2"] / p["c"]) < 1, "|t c'/c| < 1")


def _asc_bilinear_lhs(p, policy, ctx):
    q, t = p["q"], p["t"]
    a, c, a2, c2 = (p[k] for k in ("a", "c", "a2", "c2"))
    with ctx.guard():
        tc = ctx.cnum(t)

        def term(j):
            co = tc ** j / (qpoch(q, q, j, ctx=ctx) * qpoch(a2 * c * t, q, j, ctx=ctx))
            f = bhs_rphis([c * t / c2, a * c * q ** j], [a2 * c * t * q ** j],
                          q, t * c2 / c, policy, ctx)
            rx = asc_poly(ASCParams(q, a, c), j, p["x"], ctx=ctx)
            ry = asc_poly(ASCParams(q, a2, c2), j, p["y"], ctx=ctx)
            return co * f.value * ctx.cnum(rx) * ctx.cnum(ry)

        return _sum_j(term, policy, ctx, jmax=200)


def _asc_bilinear_rhs(p, policy, ctx):
    q, t = p["q"], p["t"]
    a, c, a2, c2 = (p[k] for k in ("a", "c", "a2", "c2"))
    theta, phi = math.acos(p["x"]), math.acos(p["y"])
    with ctx.guard():
        eit, emt = ctx.expi(theta), ctx.expi(-theta)
        eip, emp = ctx.expi(phi), ctx.expi(-phi)
        num = [c * t * emp, c2 * t * emt, a * t * eip, a2 * t * eit]
        den = [t * eit * emp, t * emt * eip, c2 * t / c, a2 * c * t]
        pref = ctx.cnum(1)
        for u in num:
            pref *= qpoch(u, q, ctx=ctx)
        for l in den:
            pref /= qpoch(l, q, ctx=ctx)
        f1 = bhs_rphis([a2 * eip, a * eit, t * eit * eip],
                       [a * t * eip, a2 * t * eit], q, t * emt * emp, policy, ctx)
        f2 = bhs_rphis([c * emt, c2 * emp, t * emt * emp],
                       [c * t * emp, c2 * t * emt], q, t * eit * eip, policy, ctx)
        return pref * f1.value * f2.value, {"terms": f1.terms_used + f2.terms_used}


_register("asc_bilinear",
          "Al-Salam-Chihara bilinear generating function",
          ("q", "a", "c", "a2", "c2", "t", "x", "y"),
          _asc_bilinear_sample, _asc_bilinear_validate,
          _asc_bilinear_lhs, _asc_bilinear_rhs)


# ---------------------------------------------------------------------------
# continuous big q-Hermite reduction (a = a' = 0)


def _cbqh_sample(rng):
    q = _qchoice(rng)
    c, c2 = _signed(rng, 0.15, 0.7), _signed(rng, 0.15, 0.7)
    t = _signed(rng, 0.05, 0.4)
    while abs(t * c2 / c) >= 0.95:
        t *= 0.5
    return {"q": q, "c": c, "c2": c2, "t": t,
            "x": math.cos(_u(rng, 0.15, math.pi - 0.15)),
            "y": math.cos(_u(rng, 0.15, math.pi - 0.15))}


def _cbqh_validate(p):
    _require(0 < p["q"] < 1, "0 < q < 1")
    _require(abs(p["c"]) < 1 and abs(p["c2"]) < 1, "|c|, |c'| < 1")
    _require_conv(abs(complex(p["t"])) < 1, "|t| < 1")
    _require_conv(abs(p["t"] * p["c2"] / p["c"]) < 1, "|t c'/c| < 1")


def _cbqh_lhs(p, policy, ctx):
    """Directly summed big q-Hermite bilinear kernel; the j-independent
    2phi1 factor is q-binomial-summed to (t^2; q)_inf / (t c'/c; q)_inf."""
    q, t, c, c2 = p["q"], p["t"], p["c"], p["c2"]
    with ctx.guard():
        pref = qpoch(t * t, q, ctx=ctx) / qpoch(t * c2 / c, q, ctx=ctx)
        tc = ctx.cnum(t)

        def term(j):
            co = tc ** j / qpoch(q, q, j, ctx=ctx)
            hx = aw_poly(AWParams(q, c, 0.0, 0.0, 0.0), j, p["x"], ctx)
            hy = aw_poly(AWParams(q, c2, 0.0, 0.0, 0.0), j, p["y"], ctx)
            return pref * co * ctx.cnum(hx) * ctx.cnum(hy)

        return _sum_j(term, policy, ctx, jmax=200)


def _cbqh_rhs(p, policy, ctx):
    return _asc_bilinear_rhs({**p, "a": 0.0, "a2": 0.0}, policy, ctx)


_register("cbqh_reduction",
          "continuous big q-Hermite reduction of the ASC bilinear formula",
          ("q", "c", "c2", "t", "x", "y"),
          _cbqh_sample, _cbqh_validate, _cbqh_lhs, _cbqh_rhs)


# ---------------------------------------------------------------------------
# coupled expansion of a product of two MP kernels


def _mp_spoisson_sample(rng):
    k1, k2 = _u(rng, 0.2, 1.8), _u(rng, 0.2, 1.8)
    phi = _u(rng, 0.2, math.pi - 0.2)
    t = _signed(rng, 0.05, 0.6)
    while abs(-4 * t * math.sin(phi) ** 2 / (1 - t) ** 2) > 0.6:
        t *= 0.5
    return {"k1": k1, "k2": k2, "phi": phi, "t": t,
            "x1": _u(rng, -3, 3), "x2": _u(rng, -3, 3),
            "y1": _u(rng, -3, 3), "y2": _u(rng, -3, 3)}


def _mp_spoisson_validate(p):
    _require(p["k1"] > 0 and p["k2"] > 0, "k1, k2 > 0")
    _require(0 < p["phi"] < math.pi, "0 < phi < pi")
    _require_conv(abs(complex(p["t"])) < 1, "|t| < 1")


def _mp_spoisson_lhs(p, policy, ctx):
    e1 = mp_kernel_sum(p["k1"], p["phi"], KernelPoint(p["t"], p["x1"], p["y1"]),
                       policy, ctx)
    e2 = mp_kernel_sum(p["k2"], p["phi"], KernelPoint(p["t"], p["x2"], p["y2"]),
                       policy, ctx)
    return e1.value * e2.value, {"terms": e1.terms_used + e2.terms_used}


def _mp_spoisson_rhs(p, policy, ctx):
    k1, k2, phi, t = p["k1"], p["k2"], p["phi"], p["t"]
    X, Y = p["x1"] + p["x2"], p["y1"] + p["y2"]

    def term(j):
        kk = k1 + k2 + j
        v = mp_kernel_closed(kk, phi, KernelPoint(t, X, Y), policy, ctx)
        sx = sj_mp(k1, k2, j, p["x1"], p["x2"], phi, ctx)
        sy = sj_mp(k1, k2, j, p["y1"], p["y2"], phi, ctx)
        return ctx.cnum(t) ** j * ctx.cnum(v) * ctx.cnum(sx) * ctx.cnum(sy)

    return _sum_j(term, policy, ctx, jmax=250)


_register("mp_spoisson",
          "product of two MP kernels as a coupled continuous-Hahn expansion",
          ("k1", "k2", "phi", "t", "x1", "x2", "y1", "y2"),
          _mp_spoisson_sample, _mp_spoisson_validate,
          _mp_spoisson_lhs, _mp_spoisson_rhs)


# ---------------------------------------------------------------------------
# drivers


def sample_params(identity_id: str, seed: int) -> IdentityCase:
    """Deterministic admissible parameters for one identity instance."""
    entry = get_entry(identity_id)
    params = entry.sampler(_rng(identity_id, seed))
    return IdentityCase(identity_id, params, seed=seed)


def run_case(case: IdentityCase, precision: str = "auto") -> IdentityReport:
    """Evaluate both sides of an identity case through independent routes.

    ``precision``: "standard", "extended", or "auto" (standard first, retried
    at extended precision when the residual lands in (tol, 1e3 tol)).
    """
    entry = get_entry(case.identity_id)
    entry.validator(case.params)
    ctx = EXTENDED if precision == "extended" else STANDARD
    report = _evaluate(entry, case, ctx)
    if (precision == "auto" and not report.passed
            and report.rel_err <= 1e3 * case.tol_rel):
        report = _evaluate(entry, case, EXTENDED)
        report.note = "extended retry"
    return report


def _evaluate(entry: IdentityEntry, case: IdentityCase, ctx: Context) -> IdentityReport:
    lhs, meta_l = entry.eval_lhs(case.params, case.policy, ctx)
    rhs, meta_r = entry.eval_rhs(case.params, case.policy, ctx)
    if not (ctx.is_finite(lhs) and ctx.is_finite(rhs)):
        raise DivergenceError(f"{case.identity_id}: non-finite side value")
    with ctx.guard():
        diff = abs(lhs - rhs)
        scale = max(abs(lhs), abs(rhs), ctx.rnum(_TINY))
        rel = float(diff / scale)
        abs_err = float(diff)
    return IdentityReport(
        identity_id=case.identity_id,
        lhs=complex(lhs), rhs=complex(rhs),
        abs_err=abs_err, rel_err=rel,
        passed=rel <= case.tol_rel,
        terms={"lhs": meta_l, "rhs": meta_r},
        precision_used="extended" if ctx.extended else "standard",
        seed=case.seed)

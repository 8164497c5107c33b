"""Exact rational verification of the identities whose two sides are rational
in their parameters: the 2F1 multiplication formula (coefficient-wise in z)
and the discrete Hahn bilinear theorem (finite rational sums).

All arithmetic is over Gaussian rationals (complex numbers with Fraction
components); no rounding occurs anywhere, so a ``True`` verdict is a proof
for the given parameter set and truncation order.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ParamError, PoleError

BigRational = Fraction


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise ParamError(f"exact arithmetic needs int/Fraction/str, got {type(v).__name__}")


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    @classmethod
    def of(cls, v) -> "GaussianRational":
        if isinstance(v, GaussianRational):
            return v
        if isinstance(v, complex):
            raise ParamError("floating complex is not exact; pass Fractions")
        return cls(_frac(v))

    def __add__(self, o):
        o = GaussianRational.of(o)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-GaussianRational.of(o))

    def __rsub__(self, o):
        return GaussianRational.of(o) + (-self)

    def __mul__(self, o):
        o = GaussianRational.of(o)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = GaussianRational.of(o)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by exact zero")
        return GaussianRational((self.re * o.re + self.im * o.im) / n,
                                (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, o):
        return GaussianRational.of(o) / self

    def __eq__(self, o):
        o = GaussianRational.of(o)
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def is_nonpositive_integer(self) -> bool:
        return self.im == 0 and self.re.denominator == 1 and self.re <= 0

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


GR_ZERO = GaussianRational(Fraction(0))
GR_ONE = GaussianRational(Fraction(1))


def gr(re, im=0) -> GaussianRational:
    """Convenience constructor accepting ints, Fractions, or strings."""
    return GaussianRational(_frac(re), _frac(im))


def poch_exact(a: GaussianRational, n: int) -> GaussianRational:
    out = GR_ONE
    for m in range(n):
        out = out * (a + m)
    return out


def factorial_exact(n: int) -> Fraction:
    out = Fraction(1)
    for m in range(2, n + 1):
        out *= m
    return out


def coeff_2f1(a, b, c, k: int) -> GaussianRational:
    """Exact Taylor coefficient (a)_k (b)_k / ((c)_k k!) of a 2F1."""
    a, b, c = (GaussianRational.of(v) for v in (a, b, c))
    den = poch_exact(c, k)
    if den.is_zero():
        raise PoleError(f"(c)_{k} = 0 for c = {c}")
    return poch_exact(a, k) * poch_exact(b, k) / (den * factorial_exact(k))


def _f32_unit_exact(u1, u2, u3, l1, l2, nmax: int) -> GaussianRational:
    """Terminating 3F2(u1,u2,u3; l1,l2; 1) with exact arithmetic; numerator
    zeros terminate before any denominator zero may be touched."""
    total = GR_ONE
    term = GR_ONE
    for m in range(nmax):
        num = (u1 + m) * (u2 + m) * (u3 + m)
        if num.is_zero():
            break
        den = (l1 + m) * (l2 + m) * (m + 1)
        if den.is_zero():
            raise PoleError("3F2 lower-parameter pole inside summation range")
        term = term * num / den
        total = total + term
    return total


def verify_mult_2f1_exact(a, b, c, a2, b2, c2, K: int = 8):
    """Coefficient-of-z^k equality of the 2F1 multiplication formula, exactly,
    for k = 0..K.  Returns (True, None) or (False, first failing k).

    Parameter sets where a+a' (or b+b') is a nonpositive integer are rejected
    unless both summands are themselves nonpositive integers (the only case in
    which the expansion coefficients stay well defined and eventually vanish).
    """
    a, b, c, a2, b2, c2 = (GaussianRational.of(v) for v in (a, b, c, a2, b2, c2))
    for name, v in (("c", c), ("c'", c2)):
        if v.is_nonpositive_integer():
            raise PoleError(f"{name} is a nonpositive integer")
    for name, u, u2 in (("a", a, a2), ("b", b, b2)):
        if (u + u2).is_nonpositive_integer():
            if not (u.is_nonpositive_integer() and u2.is_nonpositive_integer()):
                raise ParamError(
                    f"{name}+{name}' nonpositive integer needs both {name}, "
                    f"{name}' nonpositive integers")
    A, B = a + a2, b + b2
    for k in range(K + 1):
        lhs = GR_ZERO
        for i in range(k + 1):
            lhs = lhs + coeff_2f1(a, b, c, i) * coeff_2f1(a2, b2, c2, k - i)
        rhs = GR_ZERO
        for j in range(k + 1):
            cden = poch_exact(c2, j) * poch_exact(c + c2 + j - 1, j)
            if cden.is_zero():
                raise PoleError("C_j prefactor pole")
            cj = (poch_exact(c, j) * poch_exact(A, j) * poch_exact(B, j)
                  / (cden * factorial_exact(j)))
            if not cj.is_zero():
                cj = cj * _f32_unit_exact(GaussianRational(Fraction(-j)), a,
                                          c + c2 + j - 1, A, c, j)
                cj = cj * _f32_unit_exact(GaussianRational(Fraction(-j)), b,
                                          c + c2 + j - 1, B, c, j)
            if not cj.is_zero():
                rhs = rhs + cj * coeff_2f1(A + j, B + j, c + c2 + 2 * j, k - j)
        if lhs != rhs:
            return False, k
    return True, None


def _f21_terminating_exact(u1, u2, l1, z, nmax: int) -> GaussianRational:
    total = GR_ONE
    term = GR_ONE
    for m in range(nmax):
        num = (u1 + m) * (u2 + m)
        if num.is_zero():
            break
        den = (l1 + m) * (m + 1)
        if den.is_zero():
            raise PoleError("2F1 lower-parameter pole inside summation range")
        term = term * num / den * z
        total = total + term
    return total


def verify_hahn_exact(alpha, beta, M: int, N: int, x: int, y: int, z) -> bool:
    """Discrete Hahn bilinear theorem, verified exactly over the rationals.

    The j-sum coefficient carries a 1/j! factor: it is forced by deriving the
    theorem from the 2F1 multiplication formula (parameters a=-x, b=-y,
    c=alpha+1, a'=x-M, b'=y-N, c'=beta+1), and without it the identity already
    fails at M = N = 2, alpha = beta = 0, x = y = 2.
    """
    alpha = GaussianRational.of(alpha)
    beta = GaussianRational.of(beta)
    z = GaussianRational.of(z)
    if not (1 <= M and 1 <= N):
        raise ParamError("M, N must be positive integers")
    if not (0 <= x <= M and 0 <= y <= N):
        raise ParamError("x in {0..M} and y in {0..N} required")
    jmax = min(M, N)
    for j in range(jmax + 1):
        if poch_exact(beta + 1, j).is_zero() or poch_exact(alpha + beta + j + 1, j).is_zero():
            raise PoleError("Pochhammer pole in the coefficient")
        if poch_exact(alpha + 1, j).is_zero():
            raise PoleError("(alpha+1)_j pole inside Hahn polynomial range")

    def hahn_exact(n, xx, NN):
        total = GR_ONE
        term = GR_ONE
        for m in range(n):
            num = (GaussianRational(Fraction(-n)) + m) * (alpha + beta + n + 1 + m) \
                * (GaussianRational(Fraction(-xx)) + m)
            if num.is_zero():
                break
            den = (alpha + 1 + m) * (GaussianRational(Fraction(-NN)) + m) * (m + 1)
            if den.is_zero():
                raise PoleError("Hahn 3F2 lower-parameter pole")
            term = term * num / den
            total = total + term
        return total

    lhs = GR_ZERO
    for j in range(jmax + 1):
        coef = (poch_exact(alpha + 1, j)
                * poch_exact(GaussianRational(Fraction(-M)), j)
                * poch_exact(GaussianRational(Fraction(-N)), j)
                / (factorial_exact(j) * poch_exact(beta + 1, j)
                   * poch_exact(alpha + beta + j + 1, j)))
        f = _f21_terminating_exact(GaussianRational(Fraction(j - M)),
                                   GaussianRational(Fraction(j - N)),
                                   alpha + beta + 2 * j + 2, z, jmax - j)
        zj = GR_ONE
        for _ in range(j):
            zj = zj * z
        lhs = lhs + hahn_exact(j, x, M) * hahn_exact(j, y, N) * coef * f * zj
    rhs = _f21_terminating_exact(GaussianRational(Fraction(-x)),
                                 GaussianRational(Fraction(-y)),
                                 alpha + 1, z, min(x, y)) \
        * _f21_terminating_exact(GaussianRational(Fraction(x - M)),
                                 GaussianRational(Fraction(y - N)),
                                 beta + 1, z, min(M - x, N - y))
    return lhs == rhs

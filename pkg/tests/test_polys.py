"""Polynomial families: definitions, recurrences, and structural invariants."""
import math
import random

import pytest

from qkl.errors import DegreeError, ParamError, RealityError
from qkl.numerics import EXTENDED
from qkl.polys import (
    ASCParams,
    AWParams,
    CHahnParams,
    HahnParams,
    MPParams,
    asc_orthonormal_stream,
    asc_poly,
    aw_poly,
    chahn_poly,
    hahn_poly,
    jacobi_poly,
    mp_poly,
    mp_poly_rec,
    sj_ac,
    sj_mp,
)


def test_param_validation():
    with pytest.raises(ParamError):
        MPParams(-1.0, 1.0)
    with pytest.raises(ParamError):
        MPParams(1.0, 3.5)
    with pytest.raises(ParamError):
        ASCParams(1.5, 0.3, 0.2)


# ---------------------------------------------------------------- MP

def test_mp_trivial():
    p = MPParams(0.9, 1.3)
    assert mp_poly(p, 0, 0.7) == 1.0
    # n = 1 closed form 2(k cos phi + x sin phi)
    for k, phi, x in ((0.8, 1.1, 0.4), (2.3, 0.4, -3.0), (0.3, 2.8, 1.7)):
        got = mp_poly(MPParams(k, phi), 1, x)
        ref = 2 * (k * math.cos(phi) + x * math.sin(phi))
        assert abs(got - ref) < 1e-13 * max(1.0, abs(ref))


def test_mp_definition_vs_recurrence():
    rng = random.Random(1)
    for _ in range(6):
        p = MPParams(rng.uniform(0.25, 3.0), rng.uniform(0.3, math.pi - 0.3))
        x = rng.uniform(-4, 4)
        for n in (0, 1, 2, 7, 18, 30):
            d = mp_poly(p, n, x, orthonormal=True)
            r = mp_poly_rec(p, n, x)
            assert abs(d - r) <= 1e-11 * max(1.0, abs(r))


def test_mp_three_term_residual():
    rng = random.Random(2)
    for _ in range(5):
        k = rng.uniform(0.25, 2.5)
        phi = rng.uniform(0.3, math.pi - 0.3)
        y = rng.uniform(-4, 4)
        p = MPParams(k, phi)
        vals = [mp_poly(p, n, y, orthonormal=True) for n in range(32)]
        for n in range(1, 30):
            a_n = math.sqrt((n + 1) * (n + 2 * k))
            a_nm1 = math.sqrt(n * (n - 1 + 2 * k))
            lhs = 2 * y * math.sin(phi) * vals[n]
            rhs = (a_n * vals[n + 1] - 2 * (n + k) * math.cos(phi) * vals[n]
                   + a_nm1 * vals[n - 1])
            assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(lhs), abs(rhs))


def test_mp_rec_start():
    p = MPParams(0.7, 1.2)
    assert abs(mp_poly_rec(p, 0, 2.0) - 1 / math.sqrt(math.gamma(1.4))) < 1e-15
    # k=1, phi=pi/2, y=0: value at n=1 vanishes
    assert abs(mp_poly_rec(MPParams(1.0, math.pi / 2), 1, 0.0)) < 1e-15


# ---------------------------------------------------------------- chahn

def test_chahn_trivial():
    assert chahn_poly(CHahnParams(1, 1, 1, 1), 0, 0.3) == 1
    v = chahn_poly(CHahnParams(0.5, 0.5, 0.5, 0.5), 1, 0.0)
    assert abs(v) < 1e-14


def test_chahn_symmetric_data_is_real():
    # c = a real and d = conj(b): values at real x are real for every n
    # (the coupling coefficients S_j are built from exactly this family)
    rng = random.Random(3)
    for _ in range(5):
        a = rng.uniform(0.2, 2.0)
        b = complex(rng.uniform(0.2, 2.0), rng.uniform(-2, 2))
        p = CHahnParams(a, b, a, b.conjugate())
        x = rng.uniform(-3, 3)
        for n in range(7):
            v = chahn_poly(p, n, x)
            assert abs(v.imag) <= 1e-10 * max(1.0, abs(v.real))


# ---------------------------------------------------------------- hahn

def test_hahn_trivial():
    p = HahnParams(0.5, 1 / 3, 5)
    assert hahn_poly(p, 0, 3) == 1
    for n in range(6):
        assert abs(hahn_poly(p, n, 0) - 1) < 1e-14  # upper -x = 0
    assert abs(hahn_poly(HahnParams(0.0, 0.0, 4), 1, 2)) < 1e-14
    with pytest.raises(DegreeError):
        hahn_poly(p, 6, 1)


# ---------------------------------------------------------------- jacobi

def test_jacobi_trivial():
    assert jacobi_poly(0.4, 1.2, 0, 0.3) == 1.0
    # x = 1: (alpha+1)_n / n!
    for n in (1, 3, 5):
        ref = math.gamma(0.4 + 1 + n) / (math.gamma(1.4) * math.gamma(n + 1))
        assert abs(jacobi_poly(0.4, 1.2, n, 1.0) - ref) < 1e-12 * ref
    assert abs(jacobi_poly(0, 0, 2, 0.3) - (3 * 0.09 - 1) / 2) < 1e-14


# ---------------------------------------------------------------- aw / asc

def test_aw_trivial_and_n1():
    q = 0.5
    p = AWParams(q, 0.4, 0.3, -0.2, 0.6)
    assert aw_poly(p, 0, 0.3) == 1
    a, b, c, d, x = 0.4, 0.3, -0.2, 0.6, 0.3
    ref = (2 * x * (1 - a * b * c * d) - (a + b + c + d)
           + (a * b * c + a * b * d + a * c * d + b * c * d))
    assert abs(aw_poly(p, 1, x) - ref) < 1e-13


def test_aw_parameter_permutation_symmetry():
    import itertools

    q, x = 0.5, 0.35
    params = (0.45, -0.3, 0.6, 0.25)
    base = aw_poly(AWParams(q, *params), 6, x)
    for perm in itertools.permutations(params):
        v = aw_poly(AWParams(q, *perm), 6, x)
        assert abs(v - base) <= 1e-11 * max(1.0, abs(base))


def test_aw_zero_slot_and_q_hermite():
    q, x = 0.5, 0.3
    # a = 0 is rerouted through a nonzero slot
    v0 = aw_poly(AWParams(q, 0.0, 0.5, 0.0, 0.0), 5, x)
    v1 = aw_poly(AWParams(q, 0.5, 0.0, 0.0, 0.0), 5, x)
    assert abs(v0 - v1) < 1e-13
    # all-zero: continuous q-Hermite, checked against its recurrence
    H = [1.0, 2 * x]
    for n in range(1, 9):
        H.append(2 * x * H[n] - (1 - q ** n) * H[n - 1])
    for n in (2, 5, 8):
        assert abs(aw_poly(AWParams(q, 0, 0, 0, 0), n, x) - H[n]) < 1e-13


def test_asc_basic():
    q = 0.5
    p = ASCParams(q, 0.55, -0.35)
    assert asc_poly(p, 0, 0.3) == 1
    assert abs(asc_poly(p, 1, 0.3) - (2 * 0.3 - 0.55 + 0.35)) < 1e-14
    # orthonormal variant divides by sqrt((q, ab; q)_n)
    from qkl.series import qpoch

    n = 4
    norm = math.sqrt((complex(qpoch(q, q, n)) * complex(qpoch(0.55 * -0.35, q, n))).real)
    assert abs(asc_poly(p, n, 0.3, orthonormal=True) - asc_poly(p, n, 0.3) / norm) < 1e-13


def test_asc_equals_aw_with_cd_zero():
    rng = random.Random(9)
    for _ in range(4):
        q = rng.choice([0.3, 0.5, 0.7])
        a, b = rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9)
        x = math.cos(rng.uniform(0.2, math.pi - 0.2))
        for n in range(9):
            va = asc_poly(ASCParams(q, a, b), n, x)
            vw = aw_poly(AWParams(q, a, b, 0.0, 0.0), n, x)
            assert abs(va - vw) <= 1e-12 * max(1.0, abs(vw))


def test_asc_definition_vs_derived_recurrence():
    rng = random.Random(10)
    for _ in range(4):
        q = rng.choice([0.3, 0.5, 0.7])
        a, b = rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9)
        x = math.cos(rng.uniform(0.2, math.pi - 0.2))
        gen = asc_orthonormal_stream(a, b, q, x)
        stream = [next(gen) for _ in range(13)]
        for n in (0, 1, 5, 9, 12):
            v = asc_poly(ASCParams(q, a, b), n, x, orthonormal=True)
            assert abs(v - stream[n]) <= 1e-11 * max(1.0, abs(stream[n]))


def test_asc_stream_conjugate_parameters_real():
    a = 0.3 + 0.4j
    gen = asc_orthonormal_stream(a, a.conjugate(), 0.5, 0.2)
    for _ in range(10):
        v = next(gen)
        assert abs(v.imag) < 1e-12


# ---------------------------------------------------------------- degree

def _forward_difference_is_zero(f, n, x0, h, scale_pts):
    """(n+1)-th forward difference over n+2 equally spaced points."""
    vals = [f(x0 + i * h) for i in range(n + 2)]
    scale = max(abs(v) for v in vals) or 1.0
    acc = 0
    for i in range(n + 2):
        acc += (-1) ** i * math.comb(n + 1, i) * vals[n + 1 - i]
    return abs(acc) <= 1e-9 * scale * scale_pts


@pytest.mark.parametrize("family,n", [("mp", 4), ("mp", 7), ("jacobi", 5),
                                      ("chahn", 4), ("aw", 5), ("asc", 6),
                                      ("hahn", 3)])
def test_degree_property(family, n):
    if family == "mp":
        f = lambda x: mp_poly(MPParams(0.8, 1.1), n, x)
        assert _forward_difference_is_zero(f, n, -1.0, 0.4, 2 ** n)
    elif family == "jacobi":
        f = lambda x: jacobi_poly(0.3, 0.9, n, x)
        assert _forward_difference_is_zero(f, n, -0.8, 0.25, 2 ** n)
    elif family == "chahn":
        p = CHahnParams(0.7, 0.9 - 0.5j, 0.7, 0.9 + 0.5j)
        f = lambda x: abs(chahn_poly(p, n, x)) * 0 + chahn_poly(p, n, x).real
        assert _forward_difference_is_zero(f, n, -1.0, 0.35, 2 ** n)
    elif family == "aw":
        p = AWParams(0.5, 0.45, -0.3, 0.6, 0.25)
        f = lambda x: aw_poly(p, n, x).real
        assert _forward_difference_is_zero(f, n, -0.75, 0.2, 2 ** n)
    elif family == "asc":
        p = ASCParams(0.5, 0.55, -0.35)
        f = lambda x: asc_poly(p, n, x).real
        assert _forward_difference_is_zero(f, n, -0.8, 0.2, 2 ** n)
    elif family == "hahn":
        p = HahnParams(0.5, 0.25, 6)
        f = lambda x: hahn_poly(p, n, x).real
        assert _forward_difference_is_zero(f, n, 0.0, 1.0, 2 ** n)


# ---------------------------------------------------------------- coupling

def test_sj_mp_closed_forms():
    k1, k2 = 0.6, 0.9
    v0 = sj_mp(k1, k2, 0, 0.3, -0.2, 1.0)
    ref = math.sqrt((2 * k1 + 2 * k2 - 1) * math.gamma(2 * k1 + 2 * k2 - 1)
                    / (math.gamma(2 * k1) * math.gamma(2 * k2)))
    assert abs(v0 - ref) < 1e-13
    assert abs(sj_mp(0.5, 0.5, 0, 1.2, -0.7, 1.0) - 1.0) < 1e-14


def test_sj_ac_basics():
    assert sj_ac(0.5, 0.7, 0, 0.2, -0.1, 1.1, 0.5) == 1
    # real s, real arguments -> real value
    for j in range(5):
        v = sj_ac(0.5, 0.7, j, 0.2, -0.1, 1.1, 0.5)
        assert abs(v.imag) <= 1e-10 * max(1.0, abs(v.real))
    with pytest.raises(ParamError):
        sj_ac(0.5, 0.7, 0, 0.2, -0.1, 9.0, 0.5)


def test_extended_context_round_trip():
    p = MPParams(0.8, 1.1)
    v_std = mp_poly(p, 12, 0.4, orthonormal=True)
    v_ext = mp_poly(p, 12, 0.4, orthonormal=True, ctx=EXTENDED)
    assert abs(v_std - float(v_ext)) <= 1e-13 * max(1.0, abs(v_std))


def test_reality_error_raised():
    # forcing an imaginary x through the real-valued MP evaluation trips the
    # reality guard
    with pytest.raises((RealityError, TypeError)):
        mp_poly(MPParams(0.8, 1.1), 3, 1 + 2j)  # type: ignore[arg-type]

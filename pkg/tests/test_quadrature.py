"""Orthonormality checks: printed weights and adaptive Gram matrices."""
import math
import random

import mpmath as mp
import numpy as np
import pytest

from qkl.errors import ParamError, RangeError
from qkl.polys import ASCParams, AWParams
from qkl.quadrature import aw_weight, mp_weight, ortho_gram


def test_mp_weight_closed_point():
    assert abs(mp_weight(1.0, math.pi / 2, 0.0) - 2 / math.pi) < 1e-15


def test_mp_weight_positivity():
    rng = random.Random(4)
    for _ in range(100):
        k = rng.uniform(0.2, 3.0)
        phi = rng.uniform(0.2, math.pi - 0.2)
        x = rng.uniform(-20, 20)
        assert mp_weight(k, phi, x) > 0


def test_mp_weight_k1_identity():
    # |Gamma(1+ix)|^2 = pi x / sinh(pi x)
    for phi, x in ((1.1, 0.7), (2.5, -1.3), (0.4, 3.0)):
        ref = ((2 * math.sin(phi)) ** 2 / (2 * math.pi)
               * math.exp((2 * phi - math.pi) * x)
               * math.pi * x / math.sinh(math.pi * x))
        assert abs(mp_weight(1.0, phi, x) - ref) <= 1e-12 * ref


def test_aw_weight_brute_force():
    mp.mp.dps = 40
    q, a, b, x = 0.5, 0.4, 0.3, 0.2
    th = mp.acos(mp.mpf(x))

    def h(alpha):
        r = mp.mpf(1)
        for m in range(220):
            r *= ((1 - alpha * mp.exp(1j * th) * mp.mpf(q) ** m)
                  * (1 - alpha * mp.exp(-1j * th) * mp.mpf(q) ** m)).real
        return r

    ref = (h(1) * h(-1) * h(mp.sqrt(mp.mpf(q))) * h(-mp.sqrt(mp.mpf(q)))
           / (h(mp.mpf(a)) * h(mp.mpf(b))))
    got = aw_weight(ASCParams(q, a, b), x)
    assert abs(got - float(ref)) <= 1e-13 * float(ref)


def test_aw_weight_depends_on_x_only():
    # built from e^{+-i theta} pairs, so even in theta
    w1 = aw_weight(ASCParams(0.5, 0.4, 0.3), 0.37)
    w2 = aw_weight(ASCParams(0.5, 0.4, 0.3), 0.37)
    assert w1 == w2
    assert aw_weight(ASCParams(0.5, 0.0, 0.0), 0.2) > 0  # denominator 1


def test_aw_weight_four_parameters():
    v2 = aw_weight(ASCParams(0.5, 0.4, 0.3), 0.2)
    v4 = aw_weight(AWParams(0.5, 0.4, 0.3, 0.0, 0.0), 0.2)
    assert abs(v2 - v4) < 1e-15
    v = aw_weight(AWParams(0.5, 0.4, 0.3, -0.2, 0.1), 0.2)
    assert v > 0


def test_aw_weight_range():
    with pytest.raises(RangeError):
        aw_weight(ASCParams(0.5, 0.4, 0.3), 1.0)


def test_mp_gram_identity():
    res = ortho_gram("mp", {"k": 0.8, "phi": 1.1}, nmax=8, tol=1e-9)
    dev = np.abs(res.value - np.eye(9)).max()
    assert dev < 1e-7
    assert res.value[0][0] == pytest.approx(1.0, abs=1e-9)
    assert abs(res.value[0][1]) < 1e-9
    assert res.error_estimate >= 0
    assert res.evaluations > 0


def test_asc_gram_identity():
    res = ortho_gram("asc", {"q": 0.5, "a": 0.4, "b": 0.3}, nmax=8, tol=1e-9)
    assert np.abs(res.value - np.eye(9)).max() < 1e-7


def test_asc_gram_conjugate_pair():
    res = ortho_gram("asc", {"q": 0.5, "a": 0.3 + 0.4j, "b": 0.3 - 0.4j},
                     nmax=6, tol=1e-9)
    assert np.abs(res.value - np.eye(7)).max() < 1e-7


def test_gram_tolerance_refinement():
    # a tighter tolerance changes entries by less than the looser estimate
    loose = ortho_gram("mp", {"k": 1.4, "phi": 0.7}, nmax=4, tol=1e-6)
    tight = ortho_gram("mp", {"k": 1.4, "phi": 0.7}, nmax=4, tol=1e-10)
    assert np.abs(loose.value - tight.value).max() <= max(loose.error_estimate, 1e-12)


def test_gram_guards():
    with pytest.raises(ParamError):
        ortho_gram("asc", {"q": 0.5, "a": 1.2, "b": 0.3})
    with pytest.raises(ParamError):
        ortho_gram("mp", {"k": 0.8, "phi": 1.1}, nmax=13)
    with pytest.raises(ParamError):
        ortho_gram("nope", {})

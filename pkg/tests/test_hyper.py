"""Hypergeometric and basic hypergeometric series engine."""
import math
import random

import mpmath as mp
import pytest

from qkl.errors import DenominatorPoleError, DivergenceError, VWPoleError
from qkl.hyper import (
    SeriesStatus,
    TruncationPolicy,
    bhs_rphis,
    default_policy,
    detect_termination,
    gauss_2f1,
    hyp_pfq,
    vwp_8w7,
)
from qkl.numerics import EXTENDED
from qkl.series import qpoch


def test_policy_validation():
    with pytest.raises(Exception):
        TruncationPolicy(tail_tol=2.0)
    with pytest.raises(Exception):
        TruncationPolicy(quiet_window=0)


def test_detect_termination():
    assert detect_termination([-3, 1.5]) == 3
    assert detect_termination([4.0, 0.3], 0.5) == 2
    assert detect_termination([0.7]) is None
    assert detect_termination([1.0, 0.3], 0.5) == 0


def test_pfq_trivial():
    assert hyp_pfq([0.3, -1.2], [0.9], 0.0).value == 1
    ev = hyp_pfq([-1, 2], [4], 0.5)
    assert abs(ev.value - 0.75) < 1e-15
    assert ev.status is SeriesStatus.TERMINATED_FINITE


def test_pfq_log_oracle():
    # 2F1(1,1;2;z) = -log(1-z)/z
    for z in (0.5, -0.7, 0.25):
        ev = hyp_pfq([1, 1], [2], z)
        assert abs(ev.value - (-math.log(1 - z) / z)) < 1e-14


def test_pfq_divergence_and_poles():
    with pytest.raises(DivergenceError):
        hyp_pfq([0.5, 0.5], [1.5], 1.2)
    with pytest.raises(DivergenceError):
        hyp_pfq([0.5, 0.5, 0.7], [1.5], 0.5)   # p > q+1, non-terminating
    with pytest.raises(DenominatorPoleError):
        hyp_pfq([0.5, 0.5], [-2.0], 0.3)
    # termination before the pole is fine: upper -1 stops before (l)_n = 0
    ev = hyp_pfq([-1, 0.5], [-2.0], 0.3)
    assert ev.status is SeriesStatus.TERMINATED_FINITE
    # pole before termination is not
    with pytest.raises(DenominatorPoleError):
        hyp_pfq([-5, 0.5], [-2.0], 0.3)


def test_terminating_policy_independence():
    loose = TruncationPolicy(max_terms=17, tail_tol=1e-3, quiet_window=1)
    tight = TruncationPolicy(max_terms=100000, tail_tol=1e-15, quiet_window=5)
    for upper, lower, z in ([[-6, 1.3], [0.4], 2.5],
                            [[-9, 0.2, 4.0], [1.1, 0.7], -3.0]):
        a = hyp_pfq(upper, lower, z, loose).value
        b = hyp_pfq(upper, lower, z, tight).value
        assert abs(a - b) <= 1e-14 * max(1.0, abs(a))


def test_gauss_contiguity_in_c():
    rng = random.Random(23)
    for _ in range(25):
        a = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
        b = rng.uniform(-2, 2.5)
        c = rng.uniform(1.2, 3.0)
        z = rng.uniform(-0.7, 0.7)
        f = lambda cc: gauss_2f1(a, b, cc, z).value
        res = (c * (c - 1) * (z - 1) * f(c - 1)
               + c * (c - 1 - (2 * c - a - b - 1) * z) * f(c)
               + (c - a) * (c - b) * z * f(c + 1))
        scale = max(abs(f(c)), 1.0) * abs(c) * 3
        assert abs(res) <= 1e-11 * scale


def test_gauss_2f1_pfaff_continuation():
    mp.mp.dps = 30
    for z in (-15.0, -1.2, -0.95):
        got = gauss_2f1(complex(1.3, 2), complex(1.3, -1), 2.6, z).value
        ref = complex(mp.hyp2f1(mp.mpc("1.3", "2"), mp.mpc("1.3", "-1"),
                                mp.mpf("2.6"), z))
        assert abs(got - ref) <= 1e-12 * abs(ref)
    with pytest.raises(DivergenceError):
        gauss_2f1(0.5, 0.7, 1.9, 1.5)  # z/(z-1) = 3 > 1, z > 1


def test_near_boundary_escalation():
    ev = hyp_pfq([0.5, 0.7], [1.9], 0.95)
    assert ev.precision == "extended"
    mp.mp.dps = 30
    ref = complex(mp.hyp2f1(0.5, 0.7, 1.9, 0.95))
    assert abs(ev.value - ref) <= 1e-12 * abs(ref)


def test_rphis_trivial_and_termination():
    assert bhs_rphis([0.3, 0.2], [0.5], 0.5, 0.0).value == 1
    # upper parameter 1 = q^0 terminates at n = 0
    ev = bhs_rphis([1.0, 0.3], [0.2], 0.5, 0.7)
    assert ev.value == 1
    assert ev.status is SeriesStatus.TERMINATED_FINITE


def test_q_binomial_theorem():
    # 1phi0(a; -; q, z) = (az; q)_inf / (z; q)_inf, with a direct-summation
    # cross-check
    a, q, z = 0.3, 0.5, 0.4
    ev = bhs_rphis([a], [], q, z)
    closed = qpoch(a * z, q) / qpoch(z, q)
    assert abs(ev.value - closed) < 1e-14
    direct = sum(complex(qpoch(a, q, n)) / complex(qpoch(q, q, n)) * z ** n
                 for n in range(200))
    assert abs(ev.value - direct) < 1e-14


def test_rphis_zero_parameters():
    # zero upper/lower parameters contribute (0; q)_n = 1
    ev = bhs_rphis([0.25, 0.3, 0.2], [0.4, 0.0], 0.5, 0.5,
                   TruncationPolicy(max_terms=100))
    term_sum = 0
    for n in range(60):
        t = (complex(qpoch(0.25, 0.5, n)) * complex(qpoch(0.3, 0.5, n))
             * complex(qpoch(0.2, 0.5, n))
             / (complex(qpoch(0.5, 0.5, n)) * complex(qpoch(0.4, 0.5, n))) * 0.5 ** n)
        term_sum += t
    assert abs(ev.value - term_sum) < 1e-13


def test_rphis_lower_series_factor():
    # r < s+1 applies the (-1)^n q^C(n,2) convention factor
    a, q, z = 0.4, 0.5, 0.8
    ev = bhs_rphis([a], [0.3], q, z)   # 1phi1
    direct = 0
    for n in range(200):
        direct += (complex(qpoch(a, q, n))
                   / (complex(qpoch(q, q, n)) * complex(qpoch(0.3, q, n)))
                   * (-1) ** n * q ** (n * (n - 1) // 2) * z ** n)
    assert abs(ev.value - direct) < 1e-13


def test_vwp_basic():
    assert vwp_8w7(0.2, [0.3, 0.4, 0.5, 0.15, 0.25], 0.5, 0.0).value == 1
    ev = vwp_8w7(0.2, [1.0, 0.4, 0.5, 0.15, 0.25], 0.5, 0.3)
    assert ev.value == 1  # b = 1 terminates at n = 0
    with pytest.raises(VWPoleError):
        vwp_8w7(1.0, [0.3, 0.4, 0.5, 0.15, 0.25], 0.5, 0.3)
    # a q / b hitting q^{-m} exactly is a denominator pole (b = aq here)
    with pytest.raises(DenominatorPoleError):
        vwp_8w7(0.2, [0.3, 0.4, 0.5, 0.1, 0.25], 0.5, 0.3)


def test_vwp_against_direct_extended_summation():
    a, bs, q, z = 0.2, [0.3, 0.4, 0.5, 0.15, 0.25], 0.5, 0.3
    mp.mp.dps = 40
    total = mp.mpc(0)
    for n in range(500):
        t = (1 - mp.mpf(a) * mp.mpf(q) ** (2 * n)) / (1 - mp.mpf(a))
        t *= complex(qpoch(a, q, n)) / complex(qpoch(q, q, n))
        for b in bs:
            t *= complex(qpoch(b, q, n)) / complex(qpoch(a * q / b, q, n))
        t *= mp.mpf(z) ** n
        total += t
    got = vwp_8w7(a, bs, q, z)
    assert abs(got.value - complex(total)) <= 1e-13 * abs(complex(total))
    got_ext = vwp_8w7(a, bs, q, z, ctx=EXTENDED)
    assert abs(complex(got_ext.value) - complex(total)) <= 1e-13


def test_vwp_b5_to_zero_degeneration():
    """With the denominator list held fixed, b5 -> 0 degenerates term by term
    to the series with the (b5; q)_n factor dropped."""
    a, q, z = 0.2, 0.5, 0.45
    bs = [0.3, 0.4, 0.5, 0.15]
    denoms = [a * q / b for b in bs] + [0.35]
    eps = 1e-15

    def terms(b5_val, n_terms=20):
        out = []
        t = complex(1)
        for n in range(n_terms):
            out.append(t * (1 - a * q ** (2 * n)) / (1 - a))
            num = (1 - a * q ** n) * z
            for b in bs + [b5_val]:
                num *= 1 - b * q ** n
            den = 1 - q ** (n + 1)
            for d in denoms:
                den *= 1 - d * q ** n
            t = t * num / den
        return out

    full = terms(eps)
    lower = terms(0.0)
    for tf, tl in zip(full, lower):
        assert abs(tf - tl) <= 1e-13 * max(1.0, abs(tl))
    got = vwp_8w7(a, bs + [eps], q, z, denoms=denoms)
    ref = sum(terms(0.0, 200))
    assert abs(got.value - ref) <= 1e-12 * abs(ref)


def test_default_policy_env_override(monkeypatch):
    monkeypatch.setenv("QKL_MAX_TERMS", "37")
    assert default_policy().max_terms == 37
    monkeypatch.delenv("QKL_MAX_TERMS")
    assert default_policy().max_terms == 10000

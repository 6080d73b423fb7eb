import math

import numpy as np
import pytest

from hyperharm.coefficients import (
    AxisSignature,
    SplitSignature,
    b_coefficient,
    g_closed,
    g_direct,
    h_closed,
    h_direct,
    norm_axis,
    norm_split,
    y_axis,
    y_split,
)
from hyperharm.special import gegenbauer

from oracles import g_from_q_sum, random_axis_signature, random_split_signature


def _gl(n, lo, hi):
    x, w = np.polynomial.legendre.leggauss(n)
    return lo + 0.5 * (hi - lo) * (x + 1), 0.5 * (hi - lo) * w


class TestBCoefficient:
    def test_parity_zero(self):
        assert b_coefficient(5, 1, 0) == 0.0
        assert b_coefficient(3, 4, 1) == 0.0

    def test_examples(self):
        assert b_coefficient(3, 1, 1) == pytest.approx(1.0, rel=1e-14)
        assert b_coefficient(4, 0, 0) == pytest.approx(1.0, rel=1e-14)

    def test_l_greater_than_q(self):
        with pytest.raises(ValueError):
            b_coefficient(4, 2, 3)

    @pytest.mark.parametrize("kappa", [3, 4, 5, 7])
    def test_reconstructs_powers(self, kappa):
        # x^q = sum_l B_{ql} C^{kappa/2 - 1}_l(x)
        xs = np.linspace(-1, 1, 9)
        for q in range(9):
            series = sum(b_coefficient(kappa, q, l) * gegenbauer(l, 0.5 * kappa - 1, xs) for l in range(q + 1))
            assert np.allclose(series, xs**q, rtol=1e-13, atol=1e-13)

    def test_two_dimensional_pole(self):
        assert b_coefficient(2, 2, 0) > 0
        with pytest.raises(ValueError):
            b_coefficient(2, 3, 1)


class TestSplitWeights:
    def test_h_parity_zero(self):
        for theta in (0.1, 0.9, 1.4):
            assert h_direct(SplitSignature(6, 3, 3, 1, 1), theta) == 0
            assert h_closed(SplitSignature(6, 3, 3, 1, 1), theta) == 0
            assert h_direct(SplitSignature(7, 3, 2, 2, 1), theta) == 0

    def test_h_example(self):
        sig = SplitSignature(6, 3, 2, 1, 1)
        t = math.pi / 4
        assert abs(h_closed(sig, t) - h_direct(sig, t)) <= 1e-13 * abs(h_direct(sig, t))

    def test_rank_zero_constant(self):
        sig = SplitSignature(4, 2, 0, 0, 0)
        vals = [h_direct(sig, t) for t in (0.0, 0.4, 1.2, math.pi / 2)]
        assert np.ptp(np.abs(vals)) == 0.0 and abs(vals[0]) > 0

    def test_h_oracle_random(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            sig = random_split_signature(rng)
            t = float(rng.uniform(0, math.pi / 2))
            ref = h_direct(sig, t)
            assert abs(h_closed(sig, t) - ref) <= 1e-12 * abs(ref) + 1e-300

    def test_h_phase(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            sig = random_split_signature(rng)
            v = h_closed(sig, float(rng.uniform(0, math.pi / 2))) / (1j**sig.lp)
            assert abs(v.imag) <= 1e-15 * abs(v)

    def test_lambda_zero_shape(self):
        sig = SplitSignature(7, 3, 3, 1, 2)
        ratios = [h_closed(sig, t) / (math.cos(t) * math.sin(t) ** 2) for t in (0.2, 0.7, 1.3)]
        assert np.ptp(np.abs(ratios)) <= 1e-14 * abs(ratios[0])

    def test_norm_split_example(self):
        assert norm_split(SplitSignature(4, 2, 0, 0, 0)) == pytest.approx(math.sqrt(2), rel=1e-15)
        assert y_split(SplitSignature(4, 2, 0, 0, 0), math.pi / 3) == pytest.approx(math.sqrt(2), rel=1e-15)

    def test_norm_split_domain(self):
        with pytest.raises(ValueError):
            norm_split(SplitSignature(6, 3, 3, 1, 1))
        assert y_split(SplitSignature(6, 3, 3, 1, 1), 0.4) == 0.0

    def test_signature_validation(self):
        with pytest.raises(ValueError):
            SplitSignature(3, 2, 0, 0, 0)
        with pytest.raises(ValueError):
            SplitSignature(6, 1, 0, 0, 0)
        with pytest.raises(ValueError):
            SplitSignature(6, 3, -1, 0, 0)

    def test_orthonormal_example(self):
        t, w = _gl(64, 0, math.pi / 2)
        weight = w * np.cos(t) ** 2 * np.sin(t) ** 2
        ys = [y_split(SplitSignature(6, 3, J, 1, 1), t) for J in (2, 4, 6)]
        gram = np.array([[np.sum(weight * a * b) for b in ys] for a in ys])
        assert np.allclose(gram, np.eye(3), atol=1e-12)

    def test_orthonormal_all_signatures(self):
        t, w = _gl(64, 0, math.pi / 2)
        worst = 0.0
        for d in range(4, 9):
            for kappa in range(2, d - 1):
                weight = w * np.cos(t) ** (kappa - 1) * np.sin(t) ** (d - kappa - 1)
                for l in range(4):
                    for lp in range(4):
                        Js = [J for J in range(l + lp, 11) if (J - l - lp) % 2 == 0]
                        ys = np.array([y_split(SplitSignature(d, kappa, J, l, lp), t) for J in Js])
                        gram = (ys * weight) @ ys.T
                        worst = max(worst, float(np.max(np.abs(gram - np.eye(len(Js))))))
        assert worst < 1e-9

    def test_parity_sweep(self):
        for d in range(4, 9):
            for kappa in range(2, d - 1):
                for J in range(13):
                    for l in range(J + 2):
                        for lp in range(J + 2):
                            if (J - l - lp) % 2 or l + lp > J:
                                sig = SplitSignature(d, kappa, J, l, lp)
                                assert y_split(sig, 0.3) == 0.0
                                if not ((kappa == 2 and l) or (d - kappa == 2 and lp)):
                                    assert h_direct(sig, 0.3) == 0


class TestAxisWeights:
    def test_top_rank_is_pure_sine(self):
        for D in (4, 5, 6):
            J = 4
            ratios = [g_direct(D, J, J, t) / math.sin(t) ** J for t in (0.3, 1.1, 2.5)]
            assert np.ptp(np.abs(ratios)) <= 1e-14 * abs(ratios[0])

    def test_example(self):
        ref = g_direct(5, 3, 1, 0.7)
        assert abs(g_closed(5, 3, 1, 0.7) - ref) <= 1e-13 * abs(ref)

    def test_rank_zero_constant(self):
        vals = [g_direct(5, 0, 0, t) for t in (0.0, 1.0, 3.0)]
        assert np.ptp(np.abs(vals)) == 0.0

    def test_rank_one_is_cosine(self):
        for t in (0.2, 1.0, 2.9):
            assert g_closed(6, 1, 0, t) / math.cos(t) == pytest.approx(g_closed(6, 1, 0, 0.0), rel=1e-14)

    def test_domain(self):
        with pytest.raises(ValueError):
            g_direct(5, 2, 3, 0.1)
        with pytest.raises(ValueError):
            g_closed(5, 2, 3, 0.1)
        with pytest.raises(ValueError):
            AxisSignature(4, 2, 3)

    def test_g_oracle_random(self):
        rng = np.random.default_rng(6)
        for _ in range(200):
            sig = random_axis_signature(rng)
            t = float(rng.uniform(0, math.pi))
            ref = g_direct(sig.D, sig.J, sig.l, t)
            assert abs(g_closed(sig.D, sig.J, sig.l, t) - ref) <= 1e-12 * abs(ref)
            assert abs((g_closed(sig.D, sig.J, sig.l, t) / 1j**sig.l).imag) <= 1e-14 * abs(ref)

    def test_g_direct_matches_binomial_projection(self):
        # the n-sum form equals projecting (cos t + i sin t x)^J onto C^{(D-3)/2}_l
        rng = np.random.default_rng(7)
        for _ in range(60):
            sig = random_axis_signature(rng)
            t = float(rng.uniform(0, math.pi))
            ref = g_from_q_sum(sig.D, sig.J, sig.l, t)
            got = g_direct(sig.D, sig.J, sig.l, t)
            assert abs(got - ref) <= 1e-11 * max(abs(ref), 1e-12)

    def test_y_axis_example(self):
        for t in (0.0, 1.0, 2.0):
            assert y_axis(AxisSignature(3, 0, 0), t) == pytest.approx(1 / math.sqrt(2), rel=1e-15)

    def test_orthonormal(self):
        t, w = _gl(64, 0, math.pi)
        for D in (3, 4, 5, 7):
            weight = w * np.sin(t) ** (D - 2)
            for l in range(4):
                ys = np.array([y_axis(AxisSignature(D, J, l), t) for J in range(l, 11)])
                assert np.allclose((ys * weight) @ ys.T, np.eye(len(ys)), atol=1e-10)
        assert norm_axis(AxisSignature(4, 3, 1)) > 0

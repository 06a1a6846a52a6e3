import math
import os

import numpy as np
import pytest
from scipy.integrate import quad

from momentsum.errors import TruncationError, UnsupportedFamily
from momentsum.kernels import (EntireE, KernelK, OmegaDomain, K_closed,
                               kernel_probe_csv, verify_kernel_lemma)
from momentsum.weights import WeightSpec, eval_eps, moment_weight, solve_saddle

W1 = WeightSpec.gamma_power(1.0)
W2 = WeightSpec.gamma_power(2.0)


class TestESeries:
    def test_classical_is_exp(self):
        E = EntireE(W1)
        assert E.series(1.0) == pytest.approx(math.e, rel=1e-11)

    def test_constant_term(self):
        for w in (W1, W2, WeightSpec.iterated_log(1)):
            E = EntireE(w)
            assert E.series(0.0) == pytest.approx(1.0 / w.moment(0), rel=1e-12)

    def test_beurling_log_growth(self):
        # log E(t) tracks e^t/t on the log scale at desk range
        E = EntireE(WeightSpec.iterated_log(1))
        le = E.log_series_real(10.0)
        target = math.exp(10.0) / 10.0
        assert abs(math.log(le) - math.log(target)) < 0.30 * math.log(target)

    def test_conjugate_symmetry(self):
        E = EntireE(W2)
        z = 3.0 + 2.0j
        assert E.series(np.conj(z)) == pytest.approx(np.conj(E.series(z)),
                                                     rel=1e-12)

    def test_truncation_cap(self):
        E = EntireE(WeightSpec.iterated_log(1), n_cap=50)
        with pytest.raises(TruncationError):
            E.series(10.0)

    def test_closed_form_alpha2_matches_series(self):
        E = EntireE(W2)
        for z in (0.3, 1.7, -0.8, 1.0 + 0.5j):
            assert E.eval(z) == pytest.approx(E.series(z), rel=1e-10)


class TestEAsymptotic:
    def test_classical_log_error(self):
        E = EntireE(W1)
        for z in (20.0, 50.0, 100.0):
            a = E.asymptotic(z)
            assert a.branch == "main"
            assert abs(a.log_abs - z) / z < 0.02

    def test_alpha2_matches_series_log(self):
        E = EntireE(W2)
        a = E.asymptotic(30.0)
        ls = E.log_series_real(30.0)
        assert abs(a.log_abs - ls) / ls < 0.02

    def test_off_sector_flag(self):
        E = EntireE(W2)
        a = E.asymptotic(30.0 * np.exp(1j * np.pi * 0.9))
        assert a.branch == "subdominant"
        # subdominant-region bound: |z E(z)| = O(1)
        assert abs(a.value) * 30.0 < 10.0


class TestKernel:
    def test_closed_textbook_form(self):
        assert K_closed(W1, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-14)
        assert K_closed(W2, 0.0) == pytest.approx(1.0)
        with pytest.raises(UnsupportedFamily):
            K_closed(WeightSpec.log_power(1.0), 1.0)

    def test_closed_moments_alpha1(self):
        for n in range(11):
            val, _ = quad(lambda t, n=n: t ** n * math.exp(-t), 0, 60,
                          epsabs=1e-12, epsrel=1e-12, limit=200)
            assert val == pytest.approx(math.factorial(n), rel=1e-8)

    def test_mellin_classical(self):
        k = KernelK(W1)
        v, resid = k.mellin(2.0, tol=1e-8)
        assert v == pytest.approx(math.exp(-2.0), abs=1e-7)
        assert resid < 1e-8

    def test_mellin_alpha2_canonical(self):
        # the kernel paired with mu_n = Gamma(1+n/2) is 2 t exp(-t^2); the
        # textbook-normalization exp(-t^2) differs by the prefactor off alpha=1
        k = KernelK(W2)
        t = 1.3
        v, _ = k.mellin(t, tol=1e-9)
        assert v == pytest.approx(2 * t * math.exp(-t * t), abs=1e-8)

    def test_canonical_moments_quadrature(self):
        k = KernelK(W2)
        for n in range(7):
            val, _ = quad(lambda t, n=n: t ** n * float(k.closed(t)), 0, 12,
                          epsabs=1e-12, limit=200)
            assert val == pytest.approx(W2.moment(n), rel=1e-8)

    def test_asymptotic_classical(self):
        k = KernelK(W1)
        for t in (20.0, 40.0, 100.0):
            _, la, _ = k.asymptotic(t)
            assert abs(la + t) / t < 0.02

    def test_asymptotic_alpha2_vs_true_kernel(self):
        k = KernelK(W2)
        _, la, _ = k.asymptotic(8.0)
        true_log = math.log(2 * 8.0) - 64.0
        assert abs(la - true_log) / abs(true_log) < 0.02
        # vs the textbook-normalization oracle the error budget is 5%
        assert abs(la + 64.0) / 64.0 < 0.05

    def test_growth_decay_cross_check(self):
        # log(t E(t)) + log K(t) - log(s/eps) stays bounded by 2 on [20, 100]
        E = EntireE(W1)
        k = KernelK(W1)
        mw = moment_weight(W1)
        for t in np.linspace(20.0, 100.0, 9):
            s = solve_saddle(mw, t).s_z.real
            eps = float(np.real(eval_eps(mw, s)))
            val = (math.log(t) + E.log_eval_real(t) + k.log_abs(t)
                   - math.log(s / eps))
            assert abs(val) < 2.0


class TestOmega:
    def test_disk_examples(self):
        d = OmegaDomain(W1, 1.0)
        assert d.membership(0.4).member is True
        assert d.membership(-0.1).member is False

    def test_alpha2_region(self):
        d = OmegaDomain(W2, 1.0)
        z = 0.45   # Re(1/z^2) ~ 4.9 > 1
        assert d.membership(z).member is True
        assert d.membership(1.5).member is False

    def test_disk_rule_agreement(self):
        # analytic rule Re(1/z) > eta on a coarse grid minus a boundary band
        d = OmegaDomain(W1, 1.0, n_probe=100)
        xs = np.linspace(-1, 1, 21)
        agree = total = 0
        for x in xs:
            for y in xs:
                z = complex(x, y)
                if abs(z) < 1e-3 or abs(abs(z - 0.5) - 0.5) < 0.08:
                    continue
                member = d.membership(z).member
                rule = (1.0 / z).real > 1.0
                total += 1
                agree += int(member == rule)
        assert agree / total >= 0.99


class TestLemmas:
    def test_three_E_classical_delta(self):
        r = verify_kernel_lemma("three_E", W1, eta=0.9)
        assert r.stable
        assert r.measured["delta_found"] <= 0.1 + 1e-12

    def test_K1_deriv_envelope(self):
        r = verify_kernel_lemma("K1_deriv", W1, n_max=6)
        assert r.stable

    def test_E_curve(self):
        assert verify_kernel_lemma("E_curve", W1).stable

    def test_E_exp_nonincreasing(self):
        r = verify_kernel_lemma("E_exp", W1, k_range=(20, 45))
        assert r.measured["non_increasing"]

    def test_three_E_beurling(self):
        # the Beurling E needs ~e^t series terms, so the desk range is short
        r = verify_kernel_lemma("three_E", WeightSpec.iterated_log(1),
                                eta=0.8, delta=0.05, t_range=(1.0, 9.0),
                                n_pts=12)
        assert r.stable


def test_probe_csv(tmp_path):
    path = kernel_probe_csv(W1, [0.5, 1.0, 2.0], tmp_path / "probe.csv",
                            "test-config")
    lines = open(path).read().splitlines()
    assert lines[0].startswith("#") and "test-config" in lines[0]
    assert lines[2].split(",")[0] == "t"
    row = lines[3].split(",")
    assert float(row[1]) == pytest.approx(math.exp(-0.5), rel=1e-9)
    assert float(row[4]) < 1e-8


def test_omega_boundary_inconclusive():
    # z on the disk boundary: the probed product is flat in t and the
    # membership test must refuse to decide
    d = OmegaDomain(WeightSpec.gamma_power(1.0), 1.0)
    m = d.membership(0.5 + 0.5j)     # Re(1/z) = 1 = eta exactly
    assert m.inconclusive


def test_mellin_decay_too_slow():
    from momentsum.errors import DecayTooSlow
    # gamma == 1 has a non-decaying Mellin integrand
    w = WeightSpec.custom(lambda s: 0.0 * s, min_real=0.5, label="one")
    k = KernelK(w)
    with pytest.raises(DecayTooSlow):
        k.mellin(1.5, tol=1e-10)


def test_asymptotic_below_threshold_is_saddle_failure():
    from momentsum.errors import SaddleFailure
    with pytest.raises(SaddleFailure):
        KernelK(WeightSpec.gamma_power(1.0)).asymptotic(0.2)

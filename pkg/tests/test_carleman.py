import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gammaln

from momentsum.carleman import (SequenceM, associated_weight_h,
                                associated_weight_h_log, check_regularity,
                                denjoy_carleman_classify,
                                exp_change_of_variables, fit_class_constant,
                                regular_sequence_facts, stirling_csv,
                                stirling_numbers)
from momentsum.errors import NonPositivePoint
from momentsum.transforms import FunctionHandle
from momentsum.weights import WeightSpec

W1 = WeightSpec.gamma_power(1.0)


class TestStirling:
    def test_second_4_2_by_partition_count(self):
        # oracle: count set partitions of {1..4} into 2 blocks
        from itertools import product
        count = 0
        for assign in product(range(2), repeat=4):
            if set(assign) == {0, 1} and assign[0] == 0:
                count += 1
        assert count == 7
        assert stirling_numbers("second", 4, 2) == 7

    def test_first_diagonal(self):
        for n in (0, 1, 5, 12):
            assert stirling_numbers("first_unsigned", n, n) == 1

    def test_orthogonality(self):
        for n in range(13):
            for m in range(13):
                s = sum((-1) ** (n - j)
                        * stirling_numbers("first_unsigned", n, j)
                        * stirling_numbers("second", j, m)
                        for j in range(m, n + 1))
                assert s == (1 if n == m else 0)

    def test_index_errors(self):
        with pytest.raises(IndexError):
            stirling_numbers("second", 3, 5)
        with pytest.raises(IndexError):
            stirling_numbers("first_unsigned", 2, -1)

    def test_big_integer_range(self):
        v = stirling_numbers("second", 200, 100)
        assert v > 10 ** 100   # exact big-int arithmetic

    def test_csv_export(self, tmp_path):
        path = stirling_csv(tmp_path / "stirling.csv", 5)
        rows = open(path).read().splitlines()
        assert rows[1] == "n,j,value"
        assert "4,2,7" in rows


class TestExpChange:
    def test_t_squared_example(self):
        jets = [Fraction(1), Fraction(2), Fraction(2)]
        g = exp_change_of_variables("to_log", jets, Fraction(1))
        assert g[2] == 4

    def test_identity_function(self):
        # f(t) = t gives g = e^x: all log-derivatives equal e^x = t
        t = Fraction(3, 2)
        jets = [t, Fraction(1)] + [Fraction(0)] * 6
        g = exp_change_of_variables("to_log", jets, t)
        assert all(v == t for v in g)

    def test_round_trip_exact(self):
        rng = random.Random(3)
        for _ in range(30):
            vec = [Fraction(rng.randint(-50, 50), rng.randint(1, 9))
                   for _ in range(rng.randint(2, 13))]
            t = Fraction(rng.randint(1, 9), rng.randint(1, 4))
            w = exp_change_of_variables("to_log", vec, t)
            assert exp_change_of_variables("from_log", w, t) == vec

    @given(st.lists(st.fractions(min_value=-20, max_value=20), min_size=1,
                    max_size=11),
           st.fractions(min_value=Fraction(1, 4), max_value=6))
    @settings(max_examples=30, deadline=None)
    def test_round_trip_property(self, vec, t):
        w = exp_change_of_variables("to_log", vec, t)
        assert exp_change_of_variables("from_log", w, t) == vec

    def test_nonpositive_point(self):
        with pytest.raises(NonPositivePoint):
            exp_change_of_variables("from_log", [Fraction(1)], Fraction(-1))


class TestRegularity:
    def test_factorial(self):
        r = check_regularity(SequenceM.factorial_power(1.0), 80)
        assert r.regular and r.tau_estimate == pytest.approx(1.0, abs=1e-6)

    def test_factorial_log(self):
        r = check_regularity(SequenceM.factorial_times_log(1.0), 80)
        assert r.regular and r.tau_estimate == math.inf

    def test_n_over_factorial_fails_early(self):
        M = SequenceM(lambda n: gammaln(n + 1.0) - math.log(max(n, 1)),
                      label="n!/n")
        r = check_regularity(M, 60)
        assert r.root_monotone_from is not None and r.root_monotone_from > 1

    @pytest.mark.parametrize("fam,par", [
        ("gamma_power", {"alpha": 1.0}),
        ("log_power", {"alpha": 1.0, "beta": 0.0}),
        ("loglog_power", {"beta": 1.0}),
        ("exp_logpower", {"alpha": 0.5}),
        ("exp_log_over_loglog", {"alpha": 1.0})])
    def test_table_ghat_sequences_regular(self, fam, par):
        r = check_regularity(SequenceM.from_gamma_hat(fam, par), 80)
        assert r.log_convex_from is not None
        assert r.root_monotone_from is not None


class TestDenjoyCarleman:
    def test_symbolic_cases(self):
        assert denjoy_carleman_classify(
            SequenceM.factorial_power(1.0)).verdict == "quasianalytic"
        assert denjoy_carleman_classify(
            SequenceM.factorial_power(2.0)).verdict == "not_quasianalytic"
        assert denjoy_carleman_classify(
            SequenceM.factorial_times_log(1.0)).verdict == "quasianalytic"

    def test_numeric_never_contradicts_symbolic(self):
        for M in (SequenceM.factorial_power(1.0),
                  SequenceM.factorial_power(2.0),
                  SequenceM.factorial_times_log(1.0),
                  SequenceM.factorial_times_log(2.0)):
            sym = denjoy_carleman_classify(M, "symbolic").verdict
            num = denjoy_carleman_classify(M, "numeric").verdict
            assert num in (sym, "inconclusive")

    def test_sector_criterion(self):
        # sum (M_n/M_{n+1})^{1+1/alpha}: n! log^2 n at alpha=2 converges
        M = SequenceM.factorial_times_log(2.0)
        assert denjoy_carleman_classify(M, exponent=1.5).verdict == \
            "not_quasianalytic"
        # boundary case reported, never asserted
        M1 = SequenceM.factorial_times_log(1.0)
        r = denjoy_carleman_classify(M1, exponent=1.0)
        assert r.verdict == "quasianalytic"    # plain DC, not boundary

    def test_no_metadata_is_inconclusive(self):
        M = SequenceM(lambda n: gammaln(n + 1.0), label="anon")
        assert denjoy_carleman_classify(M).verdict == "inconclusive"


class TestClassFits:
    def test_class_A_exp_flat(self):
        f = FunctionHandle(lambda t: math.exp(t), lambda t, n: math.exp(t),
                           growth_eta=1.0)
        fit = fit_class_constant("A", f, M=SequenceM.factorial_power(1.0),
                                 weight=W1, eta=1.1, interval=(0.0, 3.0),
                                 n_max=10)
        vals = list(fit.per_n.values())
        assert max(vals) <= 1.0 + 1e-9
        assert fit.C == max(vals)

    def test_class_C_min_envelope(self):
        f = FunctionHandle(lambda x: 1.0 / (1.0 - x),
                           lambda x, n: math.factorial(n) / (1.0 - x) ** (n + 1))
        Mbig = SequenceM(lambda n: gammaln(n + 1.0) + n * math.log(2.2),
                         label="n!2.2^n")
        fit = fit_class_constant("C", f, M=Mbig,
                                 N=SequenceM.factorial_power(1.0),
                                 mu=1.0, interval=(0.0, 0.5), n_max=10)
        assert fit.C == pytest.approx(2.0, rel=1e-6)

    def test_scaling_envelope(self):
        # fit(lambda f).C <= lambda * fit(f).C + tolerance envelope
        lam = 3.0
        f = FunctionHandle(lambda t: math.exp(t), lambda t, n: math.exp(t))
        fl = FunctionHandle(lambda t: lam * math.exp(t),
                            lambda t, n: lam * math.exp(t))
        kw = dict(M=SequenceM.factorial_power(1.0), weight=W1, eta=1.1,
                  interval=(0.0, 2.0), n_max=8)
        c0 = fit_class_constant("A", f, **kw).C
        c1 = fit_class_constant("A", fl, **kw).C
        assert c1 <= lam * c0 + 1e-9

    def test_subgrid_shrinks_constant(self):
        f = FunctionHandle(lambda x: 1.0 / (1.0 - x),
                           lambda x, n: math.factorial(n) / (1.0 - x) ** (n + 1))
        kw = dict(M=SequenceM.factorial_power(1.0), weight=W1, eta=1.1,
                  n_max=6)
        big = fit_class_constant("A", f, interval=(0.0, 0.6), grid_size=13, **kw)
        small = fit_class_constant("A", f, interval=(0.0, 0.3), grid_size=7, **kw)
        assert small.C <= big.C + 1e-12


class TestAssociatedWeight:
    def test_trivial_sequence(self):
        M = SequenceM.factorial_power(1.0)   # m_n = 1
        h, arg, cap = associated_weight_h(M, 2.0)
        assert h == 1.0 and arg == 0
        h, arg, cap = associated_weight_h(M, 0.5)
        assert cap   # inf r^n realized at the range cap, flagged

    def test_factorial_m_matches_stirling(self):
        M = SequenceM(lambda n: 2 * gammaln(n + 1.0), label="m=n!")
        r = 0.05
        h, arg, cap = associated_weight_h(M, r)
        stirling = math.exp(-1.0 / r) * math.sqrt(2 * math.pi / r)
        assert not cap
        assert abs(h - stirling) / stirling < 0.10
        assert arg == pytest.approx(1.0 / r, abs=2)

    def test_monotone(self):
        M = SequenceM(lambda n: 2 * gammaln(n + 1.0), label="m=n!")
        hs = [associated_weight_h_log(M, r) for r in (0.01, 0.1, 1.0, 5.0)]
        assert all(a <= b for a, b in zip(hs, hs[1:]))


class TestRegularFacts:
    def test_trivial_m(self):
        rf = regular_sequence_facts(SequenceM.factorial_power(1.0), n_max=80)
        assert rf.C2 == pytest.approx(0.0, abs=1e-9)
        assert rf.C3 == pytest.approx(1.0, abs=1e-9)
        assert rf.C4 == pytest.approx(1.0, abs=1e-9)

    def test_log_case_slowly_varying(self):
        rf = regular_sequence_facts(SequenceM.factorial_times_log(1.0),
                                    n_max=120)
        assert rf.slowly_varying
        assert rf.C4 < 1.2

    def test_factorial_m_not_slowly_varying(self):
        M = SequenceM(lambda n: 2 * gammaln(n + 1.0), label="m=n!")
        rf = regular_sequence_facts(M, n_max=120)
        assert not rf.slowly_varying

"""Sequence-level machinery: regularity, quasianalyticity, Stirling
change of variables, class-constant fitting, and the associated weight.

A sequence is handled as M_n = n! m_n in log scale throughout; regularity
means eventual log-convexity of (m_n), eventual monotonicity of (m_n^{1/n}),
and the moderate-growth bound m_{n+1} <= C m_n^{1+1/n}.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, NonPositivePoint
from .kernels import EntireE
from .weights import WeightSpec, gamma_hat_closed_log

# ---------------------------------------------------------------------------
# Stirling numbers (exact, memoized)
# ---------------------------------------------------------------------------

_STIRLING_LOCK = threading.Lock()
_S1 = {(0, 0): 1}   # unsigned first kind
_S2 = {(0, 0): 1}   # second kind


def stirling_numbers(kind: str, n: int, j: int) -> int:
    """Stirling numbers by their defining recursions, exact integers.

    first_unsigned: [n+1, j] = n [n, j] + [n, j-1];
    second:         {n+1, j} = j {n, j} + {n, j-1}.
    """
    if not (0 <= j <= n):
        raise IndexError(f"need 0 <= j <= n, got n={n}, j={j}")
    if n > 500:
        raise IndexError("Stirling table capped at n = 500")
    if kind == "first_unsigned":
        table, rec = _S1, (lambda m, jj: m)
    elif kind == "second":
        table, rec = _S2, (lambda m, jj: jj)
    else:
        raise DomainError("kind must be 'first_unsigned' or 'second'")
    with _STIRLING_LOCK:
        return _stirling_fill(table, rec, n, j)


def _stirling_fill(table, rec, n, j):
    if (n, j) in table:
        return table[(n, j)]
    if j == 0:
        val = 1 if n == 0 else 0
    elif j == n:
        val = 1
    elif j > n:
        val = 0
    else:
        val = (rec(n - 1, j) * _stirling_fill(table, rec, n - 1, j)
               + _stirling_fill(table, rec, n - 1, j - 1))
    table[(n, j)] = val
    return val


def stirling_csv(path: str, n_max: int, kind: str = "second"):
    import csv
    with open(path, "w", newline="") as fh:
        fh.write(f"# stirling {kind} triangle, n <= {n_max}\n")
        wr = csv.writer(fh)
        wr.writerow(["n", "j", "value"])
        for n in range(n_max + 1):
            for j in range(n + 1):
                wr.writerow([n, j, stirling_numbers(kind, n, j)])
    return path


def exp_change_of_variables(direction: str, derivs, point):
    """Derivative vectors under t = e^x.

    to_log: given (f^(j)(t))_{j<=n} at t = point, return (g^(j)(log t))
    where g(x) = f(e^x); from_log inverts it.  Exact over rationals when the
    inputs and the point are rational.
    """
    if isinstance(point, (int, Fraction)):
        point = Fraction(point)
        exact = all(isinstance(v, (int, Fraction)) for v in derivs)
    else:
        exact = False
    if point <= 0:
        raise NonPositivePoint("the change of variables needs point > 0")
    v = [Fraction(x) if exact else float(x) for x in derivs]
    nmax = len(v) - 1
    out = []
    if direction == "to_log":
        for n in range(nmax + 1):
            if n == 0:
                out.append(v[0])
                continue
            acc = 0 if exact else 0.0
            tp = point
            for j in range(1, n + 1):
                acc += stirling_numbers("second", n, j) * v[j] * tp
                tp = tp * point
            out.append(acc)
    elif direction == "from_log":
        for n in range(nmax + 1):
            if n == 0:
                out.append(v[0])
                continue
            acc = 0 if exact else 0.0
            for j in range(1, n + 1):
                sgn = -1 if (n + j) % 2 else 1
                acc += sgn * stirling_numbers("first_unsigned", n, j) * v[j]
            out.append(acc / point ** n)
    else:
        raise DomainError("direction must be 'to_log' or 'from_log'")
    return out


# ---------------------------------------------------------------------------
# SequenceM
# ---------------------------------------------------------------------------

@dataclass
class SequenceM:
    """Positive sequence M_n = n! m_n given by a log-scale generator.

    ``symbolic`` optionally declares the ratio asymptotics
    M_n/M_{n+1} ~ c / (n^p log^q n), which drives the symbolic
    Denjoy-Carleman classification.
    """

    log_M: Callable[[int], float]
    n_max: int = 200
    label: str = "M"
    symbolic: Optional[dict] = None     # {"p": float, "q": float}
    _cache: dict = field(default_factory=dict, repr=False)

    def logM(self, n: int) -> float:
        if n < 0:
            raise DomainError("sequence index must be >= 0")
        if n not in self._cache:
            self._cache[n] = float(self.log_M(n))
        return self._cache[n]

    def logm(self, n: int) -> float:
        return self.logM(n) - gammaln(n + 1.0)

    def M(self, n: int) -> float:
        return math.exp(self.logM(n))

    # -- constructors --------------------------------------------------------

    @staticmethod
    def factorial_power(a: float = 1.0) -> "SequenceM":
        return SequenceM(lambda n: a * gammaln(n + 1.0), label=f"n!^{a:g}",
                         symbolic={"p": a, "q": 0.0})

    @staticmethod
    def factorial_times_log(alpha: float = 1.0) -> "SequenceM":
        # M_n = n! log^{alpha n}(n + e)
        return SequenceM(
            lambda n: gammaln(n + 1.0) + alpha * n * math.log(math.log(n + math.e)),
            label=f"n!*log^{alpha:g}n", symbolic={"p": 1.0, "q": alpha})

    @staticmethod
    def beurling_log(alpha: float = 1.0) -> "SequenceM":
        # M_n = log^{alpha n}(n + e), sub-factorial
        return SequenceM(
            lambda n: alpha * n * math.log(math.log(n + math.e)),
            label=f"log^{alpha:g}n", symbolic={"p": 0.0, "q": 0.0})

    @staticmethod
    def from_gamma_hat(family: str, params: dict, n_floor: int = 3) -> "SequenceM":
        sym = {"gamma_power": {"p": 1.0, "q": 0.0},
               "log_power": {"p": 1.0, "q": 1.0},
               "loglog_power": {"p": 1.0, "q": 1.0},
               "exp_logpower": {"p": 1.0, "q": 1.0 - params.get("alpha", 0.5)},
               "exp_log_over_loglog": {"p": 1.0, "q": 0.0}}.get(family)
        return SequenceM(
            lambda n: gamma_hat_closed_log(family, params, max(n, n_floor)),
            label=f"ghat[{family}]", symbolic=sym)

    @staticmethod
    def from_moments(w: WeightSpec) -> "SequenceM":
        """M_n = n! mu_n (the natural image-class scale of the weight)."""
        return SequenceM(lambda n: gammaln(n + 1.0) + w.moment_log(n),
                         label=f"n!*mu[{w.describe()}]")


# ---------------------------------------------------------------------------
# regularity
# ---------------------------------------------------------------------------

@dataclass
class RegularityReport:
    log_convex_from: Optional[int]
    root_monotone_from: Optional[int]
    moderate_growth_C: float
    tau_estimate: float            # math.inf for non-analytic trend
    n_max: int
    regular: bool
    details: dict

    def to_json(self) -> str:
        return json.dumps({k: (None if v is None else
                               ("inf" if v == math.inf else v))
                           for k, v in self.__dict__.items() if k != "details"})


def check_regularity(M: SequenceM, n_max: Optional[int] = None) -> RegularityReport:
    """Check the three regularity conditions and estimate tau(M)."""
    n_max = n_max or M.n_max
    if n_max < 10:
        raise DomainError("regularity check needs n_max >= 10")
    lm = np.array([M.logm(n) for n in range(n_max + 1)])

    # 1. eventual log-convexity of m
    conv_ok = lm[:-2] + lm[2:] - 2 * lm[1:-1] >= -1e-9
    lc_from = None
    for i in range(len(conv_ok)):
        if conv_ok[i:].all():
            lc_from = i + 1
            break

    # 2. eventual monotonicity of m_n^{1/n}
    v = lm[1:] / np.arange(1, n_max + 1)
    mono_ok = np.diff(v) >= -1e-9
    rm_from = None
    for i in range(len(mono_ok)):
        if mono_ok[i:].all():
            rm_from = i + 1
            break

    # 3. moderate growth witness
    ns = np.arange(1, n_max)
    logC = lm[2:n_max + 1] - (1.0 + 1.0 / ns) * lm[1:n_max]
    C3 = float(np.exp(max(np.max(logC), lm[1] - lm[0])))

    # tau by Richardson-style extrapolation of v_n = log m_n^{1/n}
    tail = v[n_max // 2:]
    x = 1.0 / np.arange(n_max // 2 + 1, n_max + 1)
    slope, inter = np.polyfit(x, tail, 1)
    growth = np.polyfit(np.log(np.arange(n_max // 2 + 1, n_max + 1)),
                        tail, 1)[0]
    tau = math.inf if growth > 0.02 else float(np.exp(inter))

    regular = lc_from is not None and rm_from is not None and np.isfinite(C3)
    return RegularityReport(lc_from, rm_from, C3, tau, n_max, regular,
                            {"v_tail": tail[-3:].tolist()})


# ---------------------------------------------------------------------------
# Denjoy-Carleman
# ---------------------------------------------------------------------------

@dataclass
class QAReport:
    verdict: str                   # quasianalytic | not_quasianalytic | inconclusive
    mode: str
    evidence: dict


def _symbolic_divergence(p: float, q: float) -> bool:
    """Does sum 1/(n^p log^q n) diverge?"""
    return p < 1.0 or (p == 1.0 and q <= 1.0)


def denjoy_carleman_classify(M: SequenceM, mode: str = "symbolic",
                             exponent: float = 1.0) -> QAReport:
    """Denjoy-Carleman test: quasianalytic iff sum M_n/M_{n+1} diverges.

    ``exponent`` generalizes to the sector criterion
    sum (M_n/M_{n+1})^exponent (Carleson/Salinas/Korenblum style with
    exponent = 1 + 1/alpha); the boundary case is reported, never asserted.

    Numeric mode reports partial sums across decades and classifies only a
    clean log- or power-growth fit, returning inconclusive otherwise.
    """
    if mode == "symbolic":
        if M.symbolic is None:
            return QAReport("inconclusive", mode,
                            {"reason": "no symbolic ratio metadata"})
        p, q = M.symbolic["p"] * exponent, M.symbolic["q"] * exponent
        if p == 1.0 and q == 1.0 and exponent != 1.0:
            return QAReport("inconclusive", mode,
                            {"reason": "boundary case of the criterion",
                             "p": p, "q": q})
        verdict = "quasianalytic" if _symbolic_divergence(p, q) \
            else "not_quasianalytic"
        return QAReport(verdict, mode, {"p": p, "q": q})

    if mode != "numeric":
        raise DomainError("mode must be 'symbolic' or 'numeric'")
    checkpoints = [30, 100, 300, 1000, 3000, 10000]
    S = []
    total = 0.0
    n = 0
    for cp in checkpoints:
        while n < cp:
            total += math.exp((M.logM(n) - M.logM(n + 1)) * exponent)
            n += 1
        S.append(total)
    S = np.array(S)
    logN = np.log(np.array(checkpoints, dtype=float))
    # clean log-divergence: S ~ a + b log N with b > 0, a good fit, and a
    # slope that is stable across windows (a decaying slope is the signature
    # of a slowly convergent sum and must stay inconclusive)
    b, a = np.polyfit(logN[2:], S[2:], 1)
    fit = a + b * logN
    resid = float(np.max(np.abs(fit[2:] - S[2:])) / max(S[-1], 1e-300))
    b_early = np.polyfit(logN[1:4], S[1:4], 1)[0]
    b_late = np.polyfit(logN[3:], S[3:], 1)[0]
    increments = np.diff(S)
    if b > 1e-3 and resid < 0.02 and b_late >= 0.8 * b_early:
        return QAReport("quasianalytic", mode,
                        {"partial_sums": S.tolist(), "log_slope": float(b)})
    # clean convergence: geometric-ish decay of increments
    if increments[-1] <= 0.25 * increments[-3] and \
            increments[-1] < 1e-3 * max(S[-1], 1e-300):
        return QAReport("not_quasianalytic", mode,
                        {"partial_sums": S.tolist(),
                         "tail_increment": float(increments[-1])})
    return QAReport("inconclusive", mode, {"partial_sums": S.tolist()})


# ---------------------------------------------------------------------------
# class-constant fitting
# ---------------------------------------------------------------------------

@dataclass
class ClassFit:
    class_tag: str
    C: float
    per_n: dict
    grid: dict
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps({"class": self.class_tag, "C": self.C,
                           "per_n": {str(k): v for k, v in self.per_n.items()},
                           "grid": self.grid, "extra": self.extra},
                          default=float)


def _deriv_logabs(f, x: float, n: int) -> float:
    v = f.derivative(x, n)
    a = abs(v)
    return math.log(a) if a > 0 else -math.inf


def fit_class_constant(class_tag: str, f, *, M: Optional[SequenceM] = None,
                       N: Optional[SequenceM] = None,
                       weight: Optional[WeightSpec] = None,
                       eta: float = 1.1, mu: float = 1.0, a: float = 1.0,
                       interval=(0.0, 1.0), n_max: int = 10,
                       grid_size: int = 12, n_min: int = 0) -> ClassFit:
    """Smallest constant making the class inequality hold on a sampled grid.

    Class A normalizes per n as C_n = ratio^{1/(n+1)} (the inequality carries
    C^{n+1}); class B fits its two conditions separately; class C fits the
    min-envelope; class D bounds Taylor remainders.  The fitted constant is
    the max of the per-n profile, so sub-grids can only shrink it.
    """
    xs = np.linspace(interval[0], interval[1], grid_size)
    per_n = {}
    extra = {}
    if class_tag == "A":
        if M is None or weight is None:
            raise DomainError("class A needs M and weight")
        E = EntireE(weight)
        for n in range(n_min, n_max + 1):
            best = -math.inf
            for x in xs:
                lr = _deriv_logabs(f, x, n) - M.logM(n) \
                    - E.log_eval_real(eta * x / a)
                best = max(best, lr / (n + 1))
            per_n[n] = math.exp(best)
    elif class_tag == "B":
        if M is None or N is None:
            raise DomainError("class B needs M and N")
        xs_b = [x for x in xs if x > 0]
        cond1, cond2 = {}, {}
        jets = {x: [f.derivative(x, j) for j in range(n_max + 1)] for x in xs_b}
        logjets = {x: exp_change_of_variables("to_log", jets[x], x)
                   for x in xs_b}
        for n in range(n_min, n_max + 1):
            b1 = max((_deriv_logabs(f, x, n) - M.logM(n)) / (n + 1)
                     for x in xs_b)
            b2 = max(math.log(max(abs(logjets[x][n]), 1e-300))
                     - n * math.log(eta) - N.logM(n) for x in xs_b)
            cond1[n] = math.exp(b1)
            cond2[n] = math.exp(b2)
            per_n[n] = max(cond1[n], cond2[n])
        extra = {"cond1": cond1, "cond2": cond2}
    elif class_tag == "C":
        if M is None or N is None:
            raise DomainError("class C needs M and N")
        for n in range(n_min, n_max + 1):
            best = -math.inf
            for x in xs:
                la = _deriv_logabs(f, x, n)
                # the envelope is a min, so C must satisfy both branches
                r1 = (la - M.logM(n)) / (n + 1)
                r2 = la - (n * math.log(mu) + N.logM(n)
                           - n * math.log(max(abs(x), 1e-300)))
                best = max(best, r1, r2)
            per_n[n] = math.exp(best)
    elif class_tag == "D":
        if M is None or weight is None:
            raise DomainError("class D needs M and weight")
        from .transforms import remainder_Rn
        zs = [z for z in xs if abs(z) > 0]
        for n in range(max(n_min, 1), n_max + 1):
            best = -math.inf
            for z in zs:
                R = abs(remainder_Rn(f, float(z), n))
                lr = (math.log(max(R, 1e-300)) + gammaln(n + 1.0)
                      - M.logM(n) - weight.moment_log(n)
                      - n * math.log(abs(z)))
                best = max(best, lr / (n + 1))
            per_n[n] = math.exp(best)
    else:
        raise DomainError(f"unknown class tag {class_tag!r}")
    C = max(per_n.values())
    return ClassFit(class_tag, C, per_n,
                    {"interval": list(interval), "grid_size": grid_size,
                     "n_max": n_max, "eta": eta, "mu": mu, "a": a}, extra)


# ---------------------------------------------------------------------------
# associated weight and regular-sequence facts
# ---------------------------------------------------------------------------

def associated_weight_h(M: SequenceM, r: float, n_max: Optional[int] = None):
    """Dynkin's h(r) = inf_{n >= 0} m_n r^n over the cached range.

    Returns (h, argmin, at_cap); h underflows to 0.0 gracefully (the log
    value is in the report tuple via math.log fallback at the caller).
    """
    if r <= 0:
        raise DomainError("h(r) needs r > 0")
    n_max = n_max or M.n_max
    logr = math.log(r)
    best, arg = math.inf, 0
    for n in range(n_max + 1):
        v = M.logm(n) + n * logr
        if v < best:
            best, arg = v, n
    at_cap = arg == n_max
    return (math.exp(best) if best > -745 else 0.0), arg, at_cap


def associated_weight_h_log(M: SequenceM, r: float,
                            n_max: Optional[int] = None) -> float:
    if r <= 0:
        raise DomainError("h(r) needs r > 0")
    n_max = n_max or M.n_max
    logr = math.log(r)
    return min(M.logm(n) + n * logr for n in range(n_max + 1))


@dataclass
class RegularFactsReport:
    C2: float
    C3: float
    C4: float
    C4_half_range: float
    slowly_varying: bool
    details: dict


def regular_sequence_facts(M: SequenceM, C1: float = 4.0,
                           n_max: Optional[int] = None) -> RegularFactsReport:
    """Measure the comparability witnesses of regular sequences:
    (i) m_k^{1/k} <= m_1 k^{C2}; (ii) m_n^{1/n} <= C3 m_k^{1/k} for
    n in [k, C1 k]; (iii) m_k^{n/k} <= C4^{k+n} m_n.  A C4 witness that
    grows with the range flags a non-slowly-varying profile."""
    n_max = n_max or M.n_max
    lm = [M.logm(n) for n in range(n_max + 1)]
    v = [lm[n] / n if n else 0.0 for n in range(n_max + 1)]

    c2 = max((v[k] - lm[1]) / math.log(k) for k in range(2, n_max + 1))
    C2 = max(c2, 0.0)

    C3 = 1.0
    for k in range(1, n_max + 1):
        for n in range(k, min(int(C1 * k), n_max) + 1):
            C3 = max(C3, math.exp(v[n] - v[k]))

    def c4_over(limit):
        worst = 0.0
        for k in range(1, limit + 1):
            for n in range(1, limit + 1):
                worst = max(worst, ((n / k) * lm[k] - lm[n]) / (k + n))
        return math.exp(worst)

    C4_half = c4_over(n_max // 2)
    C4 = c4_over(n_max)
    # slowly varying profile: v(2k) - v(k) -> 0, measured as a decreasing trend
    deltas = [v[2 * k] - v[k] for k in (n_max // 8, n_max // 4, n_max // 2)]
    slowly = bool(deltas[1] <= deltas[0] * 0.97 + 1e-12
                  and deltas[2] <= deltas[1] * 0.97 + 1e-12)
    return RegularFactsReport(C2, C3, C4, C4_half, slowly,
                              {"n_max": n_max, "C1": C1,
                               "v_doubling_deltas": deltas})

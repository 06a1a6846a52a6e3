"""The entire function E and the moment kernel K.

``E(z) = sum_n z^n / mu_n`` is the Borel transform of the Cauchy kernel;
``K`` is the function on the positive ray whose moments are ``mu_n``,
realized as the inverse Mellin transform of the index-shifted weight.  Their
matched growth/decay (E grows exactly as fast as 1/K) is what makes the
Laplace integrals of the transforms module converge, and both admit
saddle-point asymptotics driven by ``solve_saddle``.

For the gamma_power family everything is explicit: ``mu_n = Gamma(1+n/alpha)``,
``K(t) = alpha t^(alpha-1) exp(-t^alpha)`` (exactly; the literature's
``exp(-t^alpha)`` differs by the polynomial prefactor and is kept as the
textbook-normalization closed form, coinciding at alpha = 1), and E is the
Mittag-Leffler function (``exp`` at alpha=1, ``erfcx``-type at alpha=2).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import quad
from scipy.special import wofz

from .errors import (DecayTooSlow, DomainError, MomentSumError, SaddleFailure,
                     TruncationError, UnsupportedFamily)
from .weights import (LOG_FLOAT_MAX, WeightSpec, eval_eps,
                      gamma_hat_numeric, log_L, moment_weight, solve_saddle)

_LOG_TINY = -745.0


# ---------------------------------------------------------------------------
# E
# ---------------------------------------------------------------------------

@dataclass
class EAsymptotic:
    """Saddle-point value of E with branch information."""
    value: complex
    log_abs: float
    branch: str            # "main" | "subdominant"
    saddle: object = None


class EntireE:
    """E(z) = sum_{n>=0} z^n / mu_n with certified truncation.

    The series cache grows on demand; closed forms are used when the family
    has one (exp for the classical weight, the Mittag-Leffler/erfcx form at
    alpha = 2).  Very large positive-real arguments are handled in log scale.
    """

    def __init__(self, weight: WeightSpec, rel_tol: float = 1e-12,
                 n_cap: int = 100_000, auto_asymptotic: bool = True):
        self.weight = weight
        self.rel_tol = rel_tol
        self.n_cap = n_cap
        self.auto_asymptotic = auto_asymptotic
        self._log_mu = []

    def _log_mu_upto(self, n):
        while len(self._log_mu) <= n:
            self._log_mu.append(self.weight.moment_log(len(self._log_mu)))
        return self._log_mu

    @property
    def _closed(self):
        w = self.weight
        if w.family == "custom":
            return w.custom_entire
        if w.family == "gamma_power" and w.arg_shift == 0.0:
            a = w.pdict["alpha"]
            if a == 1.0:
                return np.exp
            if a == 2.0:
                # sum z^n / Gamma(1+n/2) = e^{z^2} erfc(-z)
                return lambda z: wofz(-1j * np.asarray(z, dtype=complex))
        return None

    def series(self, z, rel_tol: Optional[float] = None) -> complex:
        """Direct partial summation with a geometric tail certificate."""
        rel_tol = rel_tol or self.rel_tol
        z = complex(z)
        az = abs(z)
        lm = self._log_mu_upto(0)[0]
        term = complex(math.exp(-lm))
        total = term
        n = 1
        while n <= self.n_cap:
            lms = self._log_mu_upto(n)
            term = term * z * math.exp(lms[n - 1] - lms[n])
            at = abs(term)
            if at > 1e306:
                raise TruncationError("series terms overflow; use log_eval_real")
            total += term
            ratio = az * math.exp(self._log_mu_upto(n + 1)[n] -
                                  self._log_mu_upto(n + 1)[n + 1])
            if ratio < 0.5:
                tail = at * ratio / (1.0 - ratio)
                if tail <= rel_tol * max(abs(total), 1e-300):
                    return total
            n += 1
        raise TruncationError(
            f"no tail domination after {self.n_cap} terms at |z|={az:.3g}")

    def log_series_real(self, x: float, rel_tol: Optional[float] = None) -> float:
        """log E(x) for real x >= 0 via log-scale summation."""
        if x < 0:
            raise DomainError("log_series_real needs x >= 0")
        if x == 0.0:
            return -self.weight.moment_log(0)
        lx = math.log(x)
        logs = []
        best = -math.inf
        n = 0
        while n <= self.n_cap:
            lt = n * lx - self._log_mu_upto(n)[n]
            logs.append(lt)
            best = max(best, lt)
            # stop once past the peak and 60 nats below it
            if n > 4 and lt < best - 60.0 and logs[-2] > lt:
                break
            n += 1
        else:
            raise TruncationError(f"series cap hit at x={x:.3g}")
        arr = np.array(logs)
        m = arr.max()
        return float(m + math.log(np.exp(arr - m).sum()))

    def eval(self, z) -> complex:
        cf = self._closed
        if cf is not None:
            return complex(cf(complex(z)))
        try:
            return self.series(z)
        except TruncationError:
            if not self.auto_asymptotic:
                raise
            a = self.asymptotic(z)
            if a.branch != "main":
                raise
            return a.value

    def log_eval_real(self, x: float) -> float:
        cf = self._closed
        w = self.weight
        if w.family == "gamma_power" and w.arg_shift == 0.0 and cf is not None:
            a = w.pdict["alpha"]
            if a == 1.0:
                return float(x)
            if a == 2.0 and x >= 0:
                # log(e^{x^2} erfc(-x)) = x^2 + log(2 - erfcx(x))-ish; for
                # x >= 0, erfc(-x) in [1, 2] so the direct form is stable
                from scipy.special import erfc
                return float(x * x + math.log(erfc(-min(x, 26.0)))) if x < 26 \
                    else float(x * x + math.log(2.0))
        try:
            return self.log_series_real(x)
        except TruncationError:
            if not self.auto_asymptotic:
                raise
            a = self.asymptotic(x)
            if a.branch != "main":
                raise
            return a.log_abs

    def asymptotic(self, z, delta: float = 0.08) -> EAsymptotic:
        """Saddle-point value sqrt(2 pi s/eps) exp(s eps)/z for the entire function
        of the moment-anchored weight; off the main sector the subdominant
        O(1/z) branch is flagged and the series value (if affordable) is
        returned."""
        z = complex(z)
        mw = moment_weight(self.weight)
        eps_lim = float(np.real(eval_eps(mw, 1e6)))
        boundary = (math.pi / 2 + delta) * max(eps_lim, 1e-6)
        if abs(np.angle(z)) > min(boundary, math.pi):
            val = None
            cf = self._closed
            if cf is not None:
                val = complex(cf(z))
            else:
                # the subdominant value is O(1/z) while the raw series terms
                # peak near E(|z|): only sum when the cancellation is benign
                try:
                    if self.log_series_real(abs(z)) < 25.0:
                        val = self.series(z)
                except MomentSumError:
                    val = None
            if val is None:
                return EAsymptotic(0j, -math.inf, "subdominant")
            la = math.log(abs(val)) if val != 0 else -math.inf
            return EAsymptotic(val, la, "subdominant")
        try:
            sp = solve_saddle(mw, z)
        except (DomainError,) as exc:
            raise SaddleFailure(str(exc)) from exc
        s = sp.s_z
        eps = eval_eps(mw, s)
        log_e = (0.5 * (np.log(2 * np.pi) + np.log(s) - np.log(eps))
                 + s * eps - np.log(z))
        la = float(np.real(log_e))
        value = np.exp(log_e) if la < LOG_FLOAT_MAX else complex(np.inf)
        return EAsymptotic(complex(value), la, "main", sp)


def E_series(E: EntireE, z, rel_tol: float = 1e-12) -> complex:
    return E.series(z, rel_tol)


def E_asymptotic(E: EntireE, z) -> EAsymptotic:
    return E.asymptotic(z)


# ---------------------------------------------------------------------------
# K
# ---------------------------------------------------------------------------

def K_closed(w: WeightSpec, t):
    """Textbook-normalization closed form exp(-t^alpha) (gamma_power only).

    Coincides with the canonical moment kernel exactly at alpha = 1; for
    other alpha it differs by the prefactor alpha t^(alpha-1) and is kept
    for reference comparisons only.
    """
    if w.family != "gamma_power":
        raise UnsupportedFamily("closed kernel form exists for gamma_power only")
    a = w.pdict["alpha"]
    return np.exp(-np.asarray(t, dtype=complex) ** a) if np.iscomplexobj(t) \
        else float(np.exp(-float(t) ** a))


@dataclass
class KernelK:
    """Moment kernel with int_0^inf t^n K(t) dt = mu_n.

    mode "closed_form" uses the exact canonical kernel when the family has
    one; "mellin_contour" integrates t^{-w} over a vertical line against the
    moment-anchored weight; "asymptotic" applies the saddle-point formula.
    """

    weight: WeightSpec
    mode: str = "auto"           # auto | closed_form | mellin_contour | asymptotic
    contour_abscissa: Optional[float] = None
    mellin_tol: float = 1e-10
    _mw: WeightSpec = field(init=False, repr=False)

    def __post_init__(self):
        self._mw = moment_weight(self.weight)
        if self.contour_abscissa is None:
            self.contour_abscissa = max(1.0, self._mw.min_real + 0.75)

    # -- canonical closed form --------------------------------------------

    def closed(self, t):
        """Exact kernel where known: alpha t^(alpha-1) exp(-t^alpha) for
        gamma_power, a user hook for custom weights; None otherwise."""
        w = self.weight
        if w.family == "gamma_power" and w.arg_shift == 0.0:
            a = w.pdict["alpha"]
            tc = complex(t)
            if tc.imag == 0 and tc.real >= 0:
                tr = tc.real
                val = a * tr ** (a - 1.0) * math.exp(-tr ** a) if tr > 0 else \
                    (1.0 if a == 1.0 else (math.inf if a < 1.0 else 0.0))
                return val
            return a * tc ** (a - 1.0) * np.exp(-tc ** a)
        if w.family == "custom" and w.custom_kernel is not None:
            return w.custom_kernel(t)
        return None

    def log_abs_closed(self, t):
        """log |K(t)| for complex t via the closed form (overflow-safe)."""
        w = self.weight
        if w.family == "gamma_power" and w.arg_shift == 0.0:
            a = w.pdict["alpha"]
            tc = complex(t)
            if tc == 0:
                return 0.0 if a == 1.0 else (-math.inf if a > 1 else math.inf)
            return (math.log(a) + (a - 1.0) * math.log(abs(tc))
                    - float(np.real(tc ** a)))
        if w.family == "custom" and w.custom_kernel is not None:
            v = w.custom_kernel(t)
            return math.log(abs(v)) if v != 0 else -math.inf
        return None

    # -- Mellin line integral ----------------------------------------------

    def _mellin_height(self, tol):
        c = self.contour_abscissa
        lg0 = float(np.real(self._mw.log_gamma(c)))
        h = 1.0
        for _ in range(60):
            lg = float(np.real(self._mw.log_gamma(complex(c, h))))
            if lg < lg0 + math.log(tol):
                return h
            h *= 1.7
        raise DecayTooSlow(
            f"|gamma({c}+iy)| not below tol*peak by y={h:.3g}")

    def mellin(self, t, tol: Optional[float] = None):
        """K(t) = (1/2 pi i) int t^{-z} gamma(z-1) dz along Re z = c.

        Returns (value, imag_residual); the imaginary part doubles as a
        conjugate-symmetry self-check and must sit below tol.
        """
        tol = tol or self.mellin_tol
        tc = complex(t)
        if tc.real <= 0 and tc.imag == 0:
            raise DomainError("Mellin kernel evaluation needs Re t > 0")
        if abs(np.angle(tc)) > math.pi / 2 - 0.05:
            raise DomainError("Mellin line integral valid for |arg t| < pi/2")
        c = self.contour_abscissa
        H = self._mellin_height(tol * 1e-3)
        logt = np.log(tc)

        def integrand(y, part):
            zz = complex(c, y)
            v = np.exp(self._mw.log_gamma(zz) - zz * logt)
            return v.real if part == 0 else v.imag

        re, re_err = quad(integrand, -H, H, args=(0,), epsabs=tol * 1e-2,
                          epsrel=tol * 1e-2, limit=400)
        im, _ = quad(integrand, -H, H, args=(1,), epsabs=tol * 1e-2,
                     epsrel=tol * 1e-2, limit=400)
        value = (re + 1j * im) / (2 * math.pi)
        resid = abs(im) / (2 * math.pi)
        if tc.imag == 0 and resid > max(tol, 10 * re_err):
            raise DecayTooSlow(
                f"imaginary residual {resid:.2e} above tolerance {tol:.2e}")
        return (value.real if tc.imag == 0 else value), resid

    # -- saddle asymptotics --------------------------------------------------

    def asymptotic(self, t):
        """Saddle-point value sqrt(s/(2 pi eps)) exp(-s eps) for the kernel."""
        try:
            sp = solve_saddle(self._mw, t)
        except (DomainError,) as exc:
            raise SaddleFailure(str(exc)) from exc
        s = sp.s_z
        eps = eval_eps(self._mw, s)
        log_k = 0.5 * (np.log(s) - np.log(2 * np.pi) - np.log(eps)) - s * eps
        la = float(np.real(log_k))
        value = np.exp(log_k) if la < LOG_FLOAT_MAX else complex(np.inf)
        if complex(t).imag == 0:
            value = float(np.real(value))
        return value, la, sp

    def log_abs_asymptotic(self, t) -> float:
        return self.asymptotic(t)[1]

    # -- dispatch ------------------------------------------------------------

    def eval(self, t):
        if self.mode in ("auto", "closed_form"):
            v = self.closed(t)
            if v is not None:
                return v
            if self.mode == "closed_form":
                raise UnsupportedFamily(
                    f"no closed kernel for {self.weight.describe()}")
        if self.mode == "asymptotic":
            return self.asymptotic(t)[0]
        return self.mellin(t)[0]

    def log_abs(self, t) -> float:
        v = self.log_abs_closed(t)
        if v is not None:
            return v
        val = self.mellin(t)[0]
        a = abs(val)
        return math.log(a) if a > 0 else -math.inf


def K_mellin(k: KernelK, t, tol: float = 1e-10):
    return k.mellin(t, tol)[0]


def K_asymptotic(k: KernelK, t):
    return k.asymptotic(t)[0]


# ---------------------------------------------------------------------------
# Omega domain
# ---------------------------------------------------------------------------

@dataclass
class OmegaMembership:
    member: bool
    sup_log: float
    inconclusive: bool
    tail_slope: float


@dataclass
class OmegaDomain:
    """Membership testing for Omega_eta = {z : sup_t E(t eta)|K(t/z)| < inf}.

    A finite grid cannot prove unboundedness; the decision extrapolates the
    tail trend of the probed product and flags near-flat trends as
    inconclusive (an explicit third outcome).
    """

    weight: WeightSpec
    eta: float
    t_range: tuple = (1e-2, 1e4)
    n_probe: int = 160
    flat_tol: float = 0.25

    def __post_init__(self):
        self._E = EntireE(self.weight)
        self._K = KernelK(self.weight)
        self._ts = np.geomspace(self.t_range[0], self.t_range[1], self.n_probe)

    def membership(self, z) -> OmegaMembership:
        z = complex(z)
        if z == 0:
            raise DomainError("Omega membership defined for z != 0")
        vals = np.empty(self.n_probe)
        for i, t in enumerate(self._ts):
            try:
                lk = self._K.log_abs(t / z)
            except DomainError:
                lk = math.inf  # kernel off its analyticity domain: unbounded
            vals[i] = self._E.log_eval_real(t * self.eta) + lk
        if np.any(np.isposinf(vals)):
            return OmegaMembership(False, math.inf, False, math.inf)
        q = self.n_probe // 4
        tail_slope = ((vals[-1] - vals[-q]) /
                      (math.log(self._ts[-1]) - math.log(self._ts[-q])))
        sup_log = float(np.max(vals))
        peak = int(np.argmax(vals))
        if abs(tail_slope) < self.flat_tol:
            return OmegaMembership(False, sup_log, True, float(tail_slope))
        member = bool(tail_slope < 0 and peak < self.n_probe - 1)
        return OmegaMembership(member, sup_log, False, float(tail_slope))


def omega_membership(d: OmegaDomain, z):
    m = d.membership(z)
    return m.member, m.sup_log


# ---------------------------------------------------------------------------
# lemma verification suite
# ---------------------------------------------------------------------------

@dataclass
class LemmaReport:
    lemma: str
    weight: str
    measured: dict
    stable: Optional[bool]
    detail: str

    def to_row(self):
        return {"lemma": self.lemma, "weight": self.weight,
                "stable": self.stable, "detail": self.detail}


def _stability(values, slope_tol: float = 0.15) -> bool:
    """A measured log-constant is 'stable' when it stops growing: the fitted
    slope over the upper half of the sequence stays below slope_tol."""
    v = np.asarray(values, dtype=float)
    v = v[np.isfinite(v)]
    if len(v) < 4:
        return False
    upper = v[len(v) // 2:]
    slope = np.polyfit(np.arange(len(upper)), upper, 1)[0]
    return bool(slope <= slope_tol)


def verify_three_E(w: WeightSpec, eta: float, delta: Optional[float] = None,
                   t_range=(1.0, 200.0), n_pts: int = 60) -> LemmaReport:
    """Measure sup_t E(t delta) E(t eta) / E(t) and the kernel variant."""
    if not 0 < eta < 1:
        raise DomainError("three-E inequality needs 0 < eta < 1")
    E = EntireE(w)
    K = KernelK(w)
    ts = np.geomspace(*t_range, n_pts)
    if K.log_abs_closed(1.0) is None:
        # Mellin evaluation cannot resolve K below ~e^-30 of the integrand
        # scale, so the kernel variant probes only where E is moderate
        capped = [t for t in ts if E.log_eval_real(t) < 30.0]
        ts_k = np.array(capped) if len(capped) >= 4 else ts[:4]
    else:
        ts_k = ts
    deltas = [delta] if delta is not None else \
        [0.9 * (1 - eta), 0.5 * (1 - eta), 0.25 * (1 - eta)]
    found = None
    per_delta = {}
    for d in deltas:
        g = np.array([E.log_eval_real(t * d) + E.log_eval_real(t * eta)
                      - E.log_eval_real(t) for t in ts])
        gk = np.array([E.log_eval_real(t * d) + E.log_eval_real(t * eta)
                       + K.log_abs(t) for t in ts_k])
        per_delta[d] = {"log_C": float(np.max(g)), "log_C_kernel": float(np.max(gk)),
                        "stable": _stability(g)}
        if found is None and _stability(g) and _stability(gk):
            found = d
    return LemmaReport("three_E", w.describe(),
                       {"eta": eta, "per_delta": per_delta, "delta_found": found},
                       found is not None,
                       f"found delta={found} with bounded E(td)E(te)/E(t)"
                       if found is not None else "no stable delta found")


def verify_K1_deriv(w: WeightSpec, n_max: int = 6, delta: Optional[float] = None,
                    t_range=(0.5, 2.5), n_pts: int = 9) -> LemmaReport:
    """Measure |d^n/dt^n (e^t K_1)| against (1+delta)^n ghat_n K_1(t - delta).

    Derivatives come from the Mellin representation with the z^n factor in
    the integrand (the independent oracle), K_1(u) = K(e^u).  The statement
    targets weights with eps -> 0; for eps-limit > 0 a bounded constant needs
    delta with delta(1+delta) >= (pi/2) eps_lim, hence the default choice.
    """
    mw = moment_weight(w)
    if delta is None:
        eps_lim = float(np.real(eval_eps(mw, 1e6)))
        delta = 0.25 if eps_lim < 0.05 else \
            0.1 + (math.sqrt(1.0 + 2.0 * math.pi * eps_lim) - 1.0) / 2.0
    k = KernelK(w)
    c = k.contour_abscissa
    H = k._mellin_height(1e-14)
    ghat = [gamma_hat_numeric(mw, n).log_value for n in range(n_max + 1)]
    ts = np.linspace(*t_range, n_pts)

    def K1_deriv(n, u):
        # (-1)^n/(2 pi i) int z^n e^{-z u} gamma~(z) dz on Re z = c
        def ig(y, part):
            zz = complex(c, y)
            v = (zz ** n) * np.exp(mw.log_gamma(zz) - zz * u)
            return v.real if part == 0 else v.imag
        re, _ = quad(ig, -H, H, args=(0,), epsabs=1e-13, limit=400)
        return ((-1) ** n) * re / (2 * math.pi)

    binom = [[math.comb(n, kk) for kk in range(n + 1)] for n in range(n_max + 1)]
    consts = []
    per_n = {}
    for n in range(n_max + 1):
        worst = -math.inf
        for t in ts:
            k2n = math.exp(t) * sum(binom[n][j] * K1_deriv(j, t)
                                    for j in range(n + 1))
            envelope = (n * math.log1p(delta) + ghat[n]
                        + math.log(max(K1_deriv(0, t - delta), 1e-300)))
            worst = max(worst, math.log(abs(k2n) + 1e-300) - envelope)
        per_n[n] = worst
        consts.append(worst)
    stable = _stability(consts)
    return LemmaReport("K1_deriv", w.describe(),
                       {"delta": delta, "log_C_per_n": per_n},
                       stable, "measured ratio bounded by (1+delta)^n ghat_n envelope"
                       if stable else "envelope constant grows with n")


def verify_E_curve(w: WeightSpec, eta: float = 1.05, r_range=(5.0, 60.0),
                   n_r: int = 8) -> LemmaReport:
    """Measure max{|E(z)| : |arg z| >= theta(r) or |z| <= r} / E(r)."""
    E = EntireE(w)
    mw = moment_weight(w)
    from scipy.optimize import brentq as _brentq

    def L_inv(r):
        f = lambda kk: float(np.real(log_L(mw, kk))) - math.log(r)
        lo = max(mw.min_real + 1.0, 2.0)
        if f(lo) > 0:
            return lo
        hi = lo * 2
        while f(hi) < 0:
            hi *= 2
        return _brentq(f, lo, hi, xtol=1e-9)

    rs = np.geomspace(*r_range, n_r)
    logC = []
    for r in rs:
        from .weights import log_L_hat
        theta = min(eta / math.exp(log_L_hat(mw, L_inv(r))), 0.95 * math.pi)
        best = -math.inf
        # circle |z| = r, angles theta..pi
        for ang in np.linspace(theta, math.pi, 25):
            zv = r * np.exp(1j * ang)
            try:
                val = abs(E.eval(zv))
            except MomentSumError:
                continue
            best = max(best, math.log(val + 1e-300))
        # rays at angle theta, |z| in [r, 20r]
        for u in np.geomspace(r, 20 * r, 25):
            zv = u * np.exp(1j * theta)
            try:
                val = abs(E.eval(zv))
            except MomentSumError:
                continue
            best = max(best, math.log(val + 1e-300))
        logC.append(best - E.log_eval_real(r))
    stable = _stability(logC)
    return LemmaReport("E_curve", w.describe(),
                       {"eta": eta, "r": list(rs), "log_C": [float(v) for v in logC]},
                       stable, "max|E| over the curve bounded by C E(r)"
                       if stable else "curve constant grows with r")


def verify_E_exp(w: WeightSpec, k_range=(20, 60)) -> LemmaReport:
    """Measure E(L(k)) e^{-2k}; the bound requires a stable (non-growing)
    constant, and for the classical weight the ratio is strictly decreasing."""
    E = EntireE(w)
    mw = moment_weight(w)
    ks = list(range(k_range[0], k_range[1] + 1))
    logC = []
    for k in ks:
        Lk = math.exp(float(np.real(log_L(mw, k))))
        logC.append(E.log_eval_real(Lk) - 2.0 * k)
    diffs = np.diff(logC)
    non_increasing = bool(np.all(diffs <= 1e-9))
    return LemmaReport("E_exp", w.describe(),
                       {"k": ks, "log_ratio": [float(v) for v in logC],
                        "non_increasing": non_increasing},
                       _stability(logC) or non_increasing,
                       "E(L(k)) <= C e^{2k} with non-growing constant")


_LEMMAS = {
    "three_E": verify_three_E,
    "K1_deriv": verify_K1_deriv,
    "E_curve": verify_E_curve,
    "E_exp": verify_E_exp,
}


def verify_kernel_lemma(lemma: str, w: WeightSpec, **params) -> LemmaReport:
    if lemma not in _LEMMAS:
        raise DomainError(f"unknown lemma {lemma!r}; choose from {sorted(_LEMMAS)}")
    return _LEMMAS[lemma](w, **params)


# ---------------------------------------------------------------------------
# probe dump (external interface)
# ---------------------------------------------------------------------------

def kernel_probe_csv(w: WeightSpec, ts, path, header_note: str = ""):
    """Dump t, K_closed, K_mellin, K_asymptotic, abs_err rows to CSV."""
    k = KernelK(w)
    with open(path, "w", newline="") as fh:
        if header_note:
            fh.write(f"# {header_note}\n")
        fh.write(f"# weight: {w.describe()}\n")
        writer = csv.writer(fh)
        writer.writerow(["t", "K_closed", "K_mellin", "K_asymptotic", "abs_err"])
        for t in ts:
            try:
                kc = K_closed(w, t)
            except UnsupportedFamily:
                kc = math.nan
            km = k.mellin(t)[0]
            try:
                ka = k.asymptotic(t)[0]
            except (SaddleFailure, DomainError):
                ka = math.nan
            err = abs(km - kc) if kc == kc else math.nan
            writer.writerow([f"{t:.10g}", f"{kc:.12g}", f"{km:.12g}",
                             f"{ka:.12g}", f"{err:.3e}"])
    return path

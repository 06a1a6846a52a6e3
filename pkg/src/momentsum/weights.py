"""Admissible weight functions and their derived quantities.

A weight is an analytic, non-vanishing function ``gamma`` on a sector
``{|arg(s + c)| < alpha_0}`` (``alpha_0 > pi/2``), positive on the real ray it
contains.  Everything else in the package is derived from it:

* ``L(s) = gamma(s)^(1/s)`` and ``eps(s) = s L'(s)/L(s)``, the slowly varying
  profile that controls all asymptotics;
* the moment sequence ``mu_n = gamma(n)`` that the Borel/Laplace transforms
  divide and integrate against (``mu_n = n!`` for the classical weight
  ``gamma_power(alpha=1)``, i.e. gamma(s) = Gamma(1 + s));
* the companion sequence ``ghat_n = sup_rho rho^n |gamma(i rho)|`` governing
  logarithmic-derivative bounds of Laplace images;
* the saddle point ``s_z`` of ``log L(s) + eps(s) = log z`` driving the
  exponential asymptotics of the kernel K and the entire function E.

Moment-index convention: the classical presentation writes the moments as
"gamma_{n+1}"; here the sequence is anchored one step lower, ``mu_n =
gamma(n)``, so that the same function both matches the family tables
(gamma_power(1) at s=5 gives 120) and produces the classical pair
``K = exp(-t)``, ``E = exp(z)``.  Asymptotic formulas that need the function
paired with K and E use the index-shifted weight ``gamma(s - 1)``; see
:func:`moment_weight`.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq
from scipy.special import digamma, gammaln, loggamma

from .errors import BracketError, DomainError, NoConvergence, UnsupportedFamily

LOG_FLOAT_MAX = math.log(np.finfo(float).max)  # ~709.78


# ---------------------------------------------------------------------------
# family formulas
# ---------------------------------------------------------------------------

def _log_iter(z, k):
    """k-fold principal-branch logarithm."""
    for _ in range(k):
        z = np.log(z)
    return z


def _exp_iter(x, k):
    for _ in range(k):
        x = math.exp(x)
    return x


def _lg_log_power(p, s):
    # gamma(s) = (log s)^(alpha s) * (log log s)^(beta s)
    out = p["alpha"] * s * np.log(np.log(s))
    if p.get("beta", 0.0):
        out = out + p["beta"] * s * np.log(np.log(np.log(s)))
    return out


def _lg_loglog_power(p, s):
    return p["beta"] * s * np.log(np.log(np.log(s)))


def _lg_exp_logpower(p, s):
    return s * np.log(s) ** p["alpha"]


def _lg_exp_log_over_loglog(p, s):
    return s * np.log(s) / np.log(np.log(s)) ** p["alpha"]


def _lg_gamma_power(p, s):
    return loggamma(1.0 + s / p["alpha"])


def _lg_iterated_log(p, s):
    k = int(p["k"])
    anchor = _exp_iter(1.0, k)
    return (s - 1.0) * np.log(_log_iter(s - 1.0 + anchor, k))


def _eps_log_power(p, s):
    e = p["alpha"] / np.log(s)
    if p.get("beta", 0.0):
        e = e + p["beta"] / (np.log(s) * np.log(np.log(s)))
    return e


def _eps_loglog_power(p, s):
    return p["beta"] / (np.log(s) * np.log(np.log(s)))


def _eps_exp_logpower(p, s):
    return p["alpha"] * np.log(s) ** (p["alpha"] - 1.0)


def _eps_exp_log_over_loglog(p, s):
    ll = np.log(np.log(s))
    return (1.0 - p["alpha"] / ll) / ll ** p["alpha"]


def _eps_gamma_power(p, s):
    a = p["alpha"]
    return digamma(1.0 + s / a) / a - loggamma(1.0 + s / a) / s


@dataclass(frozen=True)
class _Family:
    name: str
    log_gamma: Callable
    analytic_eps: Optional[Callable]
    min_real: float  # smallest real argument the formula tolerates
    rho0: float      # empirical univalence threshold for the saddle profile
    param_names: tuple


_FAMILIES = {
    f.name: f
    for f in [
        _Family("log_power", _lg_log_power, _eps_log_power, 1.10, 8.0,
                ("alpha", "beta")),
        _Family("loglog_power", _lg_loglog_power, _eps_loglog_power,
                math.e + 0.10, 16.0, ("beta",)),
        _Family("exp_logpower", _lg_exp_logpower, _eps_exp_logpower,
                1.10, 8.0, ("alpha",)),
        _Family("exp_log_over_loglog", _lg_exp_log_over_loglog,
                _eps_exp_log_over_loglog, math.e + 0.10, 16.0, ("alpha",)),
        _Family("gamma_power", _lg_gamma_power, _eps_gamma_power,
                None, 2.0, ("alpha",)),  # min_real depends on alpha
        _Family("iterated_log", _lg_iterated_log, None, 0.0, 8.0, ("k",)),
    ]
}

_TABLE_FAMILIES = ("log_power", "loglog_power", "exp_logpower",
                   "exp_log_over_loglog", "gamma_power")


# ---------------------------------------------------------------------------
# WeightSpec
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightSpec:
    """An admissible weight: family tag + parameters + sector data.

    ``arg_shift`` re-anchors the function (``gamma(s + arg_shift)``); it is 0
    for user-constructed weights and -1 for the internal moment-anchored twin
    used by the kernel/E asymptotics.

    Custom weights supply ``evaluator`` returning ``log gamma(s)`` for complex
    ``s`` (or real-only; see ``complex_capable``) and may add closed-form
    hooks for the moment sequence and kernel.
    """

    family: str
    params: tuple = ()
    sector_half_angle: float = 2.0
    shift_c: float = 0.5
    arg_shift: float = 0.0
    evaluator: Optional[Callable] = None
    custom_eps: Optional[Callable] = None
    custom_min_real: float = 1.0
    custom_rho0: float = 4.0
    complex_capable: bool = True
    custom_kernel: Optional[Callable] = None   # closed-form K(t), complex-capable
    custom_entire: Optional[Callable] = None   # closed-form E(z)
    custom_max_real: float = math.inf          # largest evaluable real argument
    label: str = ""
    _moment_cache: dict = field(default_factory=dict, compare=False,
                                repr=False, hash=False)
    _lock: threading.Lock = field(default_factory=threading.Lock,
                                  compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self.sector_half_angle <= math.pi / 2:
            raise DomainError("sector half-angle must exceed pi/2")
        if self.shift_c <= 0:
            raise DomainError("shift_c must be positive")
        if self.family == "custom":
            if self.evaluator is None:
                raise DomainError("custom weight needs an evaluator")
        elif self.family not in _FAMILIES:
            raise DomainError(f"unknown family {self.family!r}")

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def gamma_power(alpha: float, **kw) -> "WeightSpec":
        if alpha <= 0:
            raise DomainError("gamma_power needs alpha > 0")
        kw.setdefault("shift_c", min(0.5, alpha / 2))
        return WeightSpec("gamma_power", (("alpha", float(alpha)),), **kw)

    @staticmethod
    def log_power(alpha: float, beta: float = 0.0, **kw) -> "WeightSpec":
        if alpha <= 0:
            raise DomainError("log_power needs alpha > 0")
        return WeightSpec("log_power",
                          (("alpha", float(alpha)), ("beta", float(beta))), **kw)

    @staticmethod
    def loglog_power(beta: float, **kw) -> "WeightSpec":
        if beta <= 0:
            raise DomainError("loglog_power needs beta > 0")
        return WeightSpec("loglog_power", (("beta", float(beta)),), **kw)

    @staticmethod
    def exp_logpower(alpha: float, **kw) -> "WeightSpec":
        if not 0 < alpha < 1:
            raise DomainError("exp_logpower needs 0 < alpha < 1")
        return WeightSpec("exp_logpower", (("alpha", float(alpha)),), **kw)

    @staticmethod
    def exp_log_over_loglog(alpha: float, **kw) -> "WeightSpec":
        if alpha <= 0:
            raise DomainError("exp_log_over_loglog needs alpha > 0")
        return WeightSpec("exp_log_over_loglog", (("alpha", float(alpha)),), **kw)

    @staticmethod
    def iterated_log(k: int, **kw) -> "WeightSpec":
        if k < 1:
            raise DomainError("iterated_log needs k >= 1")
        return WeightSpec("iterated_log", (("k", int(k)),), **kw)

    @staticmethod
    def custom(evaluator, *, eps=None, min_real=1.0, rho0=4.0,
               complex_capable=True, kernel=None, entire=None,
               max_real=math.inf, label="custom", **kw) -> "WeightSpec":
        return WeightSpec("custom", (), evaluator=evaluator, custom_eps=eps,
                          custom_min_real=min_real, custom_rho0=rho0,
                          complex_capable=complex_capable, custom_kernel=kernel,
                          custom_entire=entire, custom_max_real=max_real,
                          label=label, **kw)

    # -- basic properties ----------------------------------------------------

    @property
    def pdict(self) -> dict:
        return dict(self.params)

    @property
    def min_real(self) -> float:
        """Smallest real s at which gamma(s) is safely evaluable."""
        if self.family == "custom":
            base = self.custom_min_real
        elif self.family == "gamma_power":
            base = -self.pdict["alpha"] + 1e-9
        else:
            base = _FAMILIES[self.family].min_real
        return base - self.arg_shift

    @property
    def max_real(self) -> float:
        return self.custom_max_real - self.arg_shift \
            if self.family == "custom" else math.inf

    @property
    def rho0(self) -> float:
        if self.family == "custom":
            return self.custom_rho0 - self.arg_shift
        return _FAMILIES[self.family].rho0 - self.arg_shift

    def in_sector(self, s) -> bool:
        w = complex(s) + self.shift_c
        return abs(np.angle(w)) < self.sector_half_angle

    # -- evaluation ----------------------------------------------------------

    def log_gamma(self, s):
        """Principal-branch log gamma(s) on the sector (complex-capable)."""
        if not self.in_sector(s):
            raise DomainError(f"s={s} outside sector of {self.describe()}")
        s = s + self.arg_shift
        if self.family == "custom":
            return self.evaluator(s)
        if isinstance(s, complex) or np.iscomplexobj(s):
            s = complex(s)
        return _FAMILIES[self.family].log_gamma(self.pdict, s)

    def gamma(self, s):
        lg = self.log_gamma(s)
        if np.real(lg) > LOG_FLOAT_MAX:
            raise OverflowError(
                "gamma(s) exceeds float range; use log_gamma instead")
        out = np.exp(lg)
        return out

    def moment_log(self, n: int) -> float:
        """log mu_n where mu_n = gamma(n) is the n-th kernel moment."""
        if n < 0:
            raise DomainError("moment index must be >= 0")
        with self._lock:
            if n not in self._moment_cache:
                if n < self.min_real:
                    raise DomainError(
                        f"moment {n} below evaluable range of family "
                        f"{self.family} (min arg {self.min_real:.3g})")
                self._moment_cache[n] = float(np.real(self.log_gamma(n)))
            return self._moment_cache[n]

    def moment(self, n: int) -> float:
        lg = self.moment_log(n)
        if lg > LOG_FLOAT_MAX:
            raise OverflowError("moment exceeds float range; use moment_log")
        return math.exp(lg)

    def describe(self) -> str:
        if self.label:
            return self.label
        ps = ",".join(f"{k}={v:g}" for k, v in self.params)
        return f"{self.family}({ps})" if ps else self.family

    # -- serialization (external interface) -----------------------------------

    def to_json(self) -> str:
        if self.family == "custom":
            raise UnsupportedFamily("custom weights are not JSON-serializable")
        d = {"family": self.family}
        d.update({k: v for k, v in self.params})
        d["sector_half_angle"] = self.sector_half_angle
        d["shift_c"] = self.shift_c
        return json.dumps(d)

    @staticmethod
    def from_json(text: str) -> "WeightSpec":
        d = json.loads(text)
        family = d.pop("family")
        kw = {}
        for key in ("sector_half_angle", "shift_c"):
            if key in d:
                kw[key] = d.pop(key)
        ctor = getattr(WeightSpec, family)
        return ctor(**d, **kw)


def moment_weight(w: WeightSpec) -> WeightSpec:
    """The index-shifted twin gamma(s-1), whose sequence values at 1, 2, ...
    are w's moments; it drives the K/E saddle asymptotics."""
    return replace(w, arg_shift=w.arg_shift - 1.0,
                   _moment_cache={}, _lock=threading.Lock())


# ---------------------------------------------------------------------------
# L, eps and the saddle machinery
# ---------------------------------------------------------------------------

def eval_gamma(w: WeightSpec, s):
    """gamma(s) on the sector; raises DomainError/OverflowError per contract."""
    return w.gamma(s)


def eval_log_gamma(w: WeightSpec, s):
    return w.log_gamma(s)


def log_L(w: WeightSpec, s):
    if s == 0:
        raise DomainError("L(s) undefined at s = 0")
    return w.log_gamma(s) / s


def eval_L_eps(w: WeightSpec, s, h_rel: float = 1e-6):
    """Return (L(s), eps(s)).

    eps uses the family's analytic formula when one is known, otherwise a
    central difference of log L with step ``h_rel * |s|``.
    """
    L = np.exp(log_L(w, s))
    return L, eval_eps(w, s, h_rel=h_rel)


def eval_eps(w: WeightSpec, s, h_rel: float = 1e-6, force_numeric: bool = False):
    if not force_numeric:
        fn = w.custom_eps if w.family == "custom" else \
            _FAMILIES[w.family].analytic_eps
        if fn is not None:
            sa = s + w.arg_shift
            if isinstance(sa, complex) or np.iscomplexobj(sa):
                sa = complex(sa)
            eps = (w.custom_eps(sa) if w.family == "custom"
                   else fn(w.pdict, sa))
            if w.arg_shift:
                # eps of the re-anchored function gamma(s + shift):
                # the log(gamma)/s term divides by the outer s, not s+shift
                eps = eps + w.log_gamma(s) * (1.0 / sa - 1.0 / s)
            return eps
    h = h_rel * abs(s)
    dlogL = (log_L(w, s + h) - log_L(w, s - h)) / (2 * h)
    return s * dlogL


def _profile(w: WeightSpec, rho: float) -> float:
    """log L(rho) + eps(rho), the real-axis saddle profile."""
    return float(np.real(log_L(w, rho))) + float(np.real(eval_eps(w, rho)))


@dataclass(frozen=True)
class SaddlePoint:
    """Solution s_z of log L(s) + eps(s) = log z with its residual."""
    z: complex
    s_z: complex
    residual: float

    @property
    def rho_z(self) -> float:
        return abs(self.s_z)

    @property
    def theta_z(self) -> float:
        return float(np.angle(self.s_z))


def _saddle_threshold(w: WeightSpec) -> float:
    return math.exp(_profile(w, max(w.rho0, w.min_real + 1.0)))


def solve_saddle(w: WeightSpec, z, tol: float = 1e-10,
                 max_iter: int = 80) -> SaddlePoint:
    """Solve log L(s) + eps(s) = log z for s in the sector.

    Real positive z uses monotone bracketing on the ray; complex z runs a
    damped Newton iteration started from the real-axis solution for |z|.
    """
    z = complex(z)
    if z == 0:
        raise DomainError("saddle point needs z != 0")
    zmin = _saddle_threshold(w)
    if abs(z) < zmin:
        raise DomainError(
            f"|z|={abs(z):.4g} below saddle threshold {zmin:.4g} for "
            f"{w.describe()}")
    target = math.log(abs(z))
    lo = max(w.rho0, w.min_real + 1.0)
    hi = 2.0 * lo
    flo = _profile(w, lo) - target
    for _ in range(200):
        fhi = _profile(w, hi) - target
        if flo * fhi <= 0:
            break
        hi *= 2.0
        if hi > 1e300:
            raise NoConvergence("no real-axis bracket for the saddle profile",
                                last_iterate=hi, residual=abs(fhi))
    rho = brentq(lambda r: _profile(w, r) - target, lo, hi, xtol=1e-12,
                 rtol=1e-15, maxiter=200)

    def h(s):
        return log_L(w, s) + eval_eps(w, s) - np.log(z)

    s = complex(rho)
    if abs(z.imag) == 0 and z.real > 0:
        res = abs(h(s))
        return SaddlePoint(z, s, res)

    # damped Newton with finite-difference derivative
    res = abs(h(s))
    for _ in range(max_iter):
        if res <= tol:
            break
        hs = h(s)
        dh = abs(s) * 1e-7
        hp = (h(s + dh) - h(s - dh)) / (2 * dh)
        if hp == 0:
            raise NoConvergence("flat saddle profile", last_iterate=s,
                                residual=res)
        step = hs / hp
        lam = 1.0
        while lam > 1e-6:
            cand = s - lam * step
            if w.in_sector(cand) and abs(cand) > 1e-12:
                cres = abs(h(cand))
                if cres < res:
                    s, res = cand, cres
                    break
            lam /= 2
        else:
            break
    if res > tol:
        raise NoConvergence("saddle Newton stalled", last_iterate=s,
                            residual=res)
    return SaddlePoint(z, s, res)


def rho_of_r(w: WeightSpec, r: float, tol: float = 1e-12) -> float:
    """Invert r = L(rho) e^{eps(rho)} on the positive ray (monotone)."""
    if r <= 0:
        raise DomainError("r must be positive")
    lo = max(w.rho0, w.min_real + 1.0)
    target = math.log(r)
    if _profile(w, lo) - target > 0:
        raise DomainError(f"r={r:.4g} below the evaluable profile range")
    hi = 2.0 * lo
    for _ in range(200):
        if _profile(w, hi) - target >= 0:
            break
        hi *= 2
    else:
        raise DomainError("r beyond bracketing range")
    rho = brentq(lambda u: _profile(w, u) - target, lo, hi, xtol=1e-12,
                 rtol=1e-15, maxiter=200)
    resid = abs(math.exp(_profile(w, rho)) - r) / r
    if resid > max(tol, 1e-9):
        raise NoConvergence("rho(r) residual too large", last_iterate=rho,
                            residual=resid)
    return float(rho)


# ---------------------------------------------------------------------------
# gamma-hat
# ---------------------------------------------------------------------------

def log_abs_gamma_imag(w: WeightSpec, rho: float) -> float:
    """log |gamma(i rho)|.

    gamma_power (unshifted) uses the reflection closed form
    |Gamma(1+iy)|^2 = pi y / sinh(pi y); everything else takes the real part
    of the principal-branch log composition.
    """
    if w.family == "gamma_power" and w.arg_shift == 0.0:
        y = rho / w.pdict["alpha"]
        # log sinh(pi y) = pi y - log 2 + log1p(-exp(-2 pi y))
        lsh = math.pi * y - math.log(2.0) + math.log1p(-math.exp(-2 * math.pi * y)) \
            if y > 1e-8 else math.log(math.sinh(math.pi * y))
        return 0.5 * (math.log(math.pi) + math.log(y) - lsh)
    return float(np.real(w.log_gamma(1j * rho)))


@dataclass(frozen=True)
class GammaHatEntry:
    """ghat_n = sup_{rho>0} rho^n |gamma(i rho)| with its maximizer."""
    n: int
    log_value: float
    argmax_rho: float
    mode: str                    # "analytic_continuation" | "asymptotic_form"
    ratio_form_log: Optional[float] = None   # the alternative ((g_{n+1}/g_n))^{pi n/2}

    @property
    def value(self) -> float:
        if self.log_value > LOG_FLOAT_MAX:
            raise OverflowError("gamma-hat exceeds float range; use log_value")
        return math.exp(self.log_value)


def gamma_hat_numeric(w: WeightSpec, n: int, rel_tol: float = 1e-6,
                      rho_floor: float = 1e-6) -> GammaHatEntry:
    """Maximize f(rho) = n log rho + log|gamma(i rho)| by golden section."""
    if n < 0:
        raise DomainError("n must be >= 0")
    mode = "analytic_continuation"
    if w.complex_capable:
        def f(rho):
            return n * math.log(rho) + log_abs_gamma_imag(w, rho)
    else:
        mode = "asymptotic_form"

        def f(rho):
            eps = float(np.real(eval_eps(w, rho)))
            return n * math.log(rho) - 0.5 * math.pi * rho * eps

    lo = max(rho_floor, w.min_real + 0.05 if w.min_real > 0 else rho_floor)
    # bracket by doubling
    a = lo
    fa = f(a)
    b = 2.0 * max(a, 0.5)
    grew = False
    while True:
        fb = f(b)
        if fb < fa:
            break
        a, fa = b, fb
        grew = True
        b *= 2.0
        if b > 1e120:
            raise BracketError("no interior maximum up to the growth cap")
    if not grew:
        # maximum at the left edge (n = 0 style peak)
        return GammaHatEntry(n, fa, a, mode, _ratio_form_log(w, n))
    lo_b, hi_b = a / 2.0 if a > lo else lo, b
    phi = (math.sqrt(5.0) - 1) / 2
    x1 = hi_b - phi * (hi_b - lo_b)
    x2 = lo_b + phi * (hi_b - lo_b)
    f1, f2 = f(x1), f(x2)
    for _ in range(300):
        if hi_b - lo_b <= rel_tol * max(1.0, abs(lo_b)):
            break
        if f1 < f2:
            lo_b, x1, f1 = x1, x2, f2
            x2 = lo_b + phi * (hi_b - lo_b)
            f2 = f(x2)
        else:
            hi_b, x2, f2 = x2, x1, f1
            x1 = hi_b - phi * (hi_b - lo_b)
            f1 = f(x1)
    rho_star = 0.5 * (lo_b + hi_b)
    return GammaHatEntry(n, f(rho_star), rho_star, mode,
                         _ratio_form_log(w, n))


def _ratio_form_log(w: WeightSpec, n: int) -> Optional[float]:
    """The introduction's alternative form ((gamma_{n+1}/gamma_n))^{pi n / 2},
    exposed for cross-checking only."""
    if n < 1:
        return None
    try:
        return 0.5 * math.pi * n * (w.moment_log(n + 1) - w.moment_log(n))
    except DomainError:
        return None


def gamma_hat_closed_log(family: str, params: dict, n: int) -> float:
    """Closed-form log ghat_n for the five tabulated families."""
    if n < 3:
        raise DomainError("closed forms are asymptotic; need n >= 3")
    lf = gammaln(n + 1.0)
    ln = math.log(n)
    if family == "log_power":
        a = params["alpha"]
        return lf + n * math.log(2.0 / (math.pi * a) * ln)
    if family == "loglog_power":
        b = params["beta"]
        return lf + n * math.log(2.0 / (math.pi * b) * ln * math.log(ln))
    if family == "exp_logpower":
        a = params["alpha"]
        return lf + n * math.log(2.0 / (math.pi * a) * ln ** (1.0 - a))
    if family == "exp_log_over_loglog":
        a = params["alpha"]
        return lf + n * math.log(2.0 / (math.pi * a) * math.log(ln))
    if family == "gamma_power":
        a = params["alpha"]
        return lf + n * math.log(2.0 / math.pi * a)
    raise UnsupportedFamily(f"no closed gamma-hat for family {family!r}")


def gamma_hat_closed(family: str, params: dict, n: int) -> float:
    lg = gamma_hat_closed_log(family, params, n)
    if lg > LOG_FLOAT_MAX:
        raise OverflowError("use gamma_hat_closed_log")
    return math.exp(lg)


def log_L_hat(w: WeightSpec, k: int) -> float:
    """log Lhat(k) = log (ghat_k / k!)^{1/k}, the slowly varying profile of
    the companion sequence."""
    ent = gamma_hat_numeric(w, k)
    return (ent.log_value - gammaln(k + 1.0)) / k


# ---------------------------------------------------------------------------
# admissibility report
# ---------------------------------------------------------------------------

@dataclass
class ReportEntry:
    passed: Optional[bool]        # None = inconclusive / not applicable
    detail: str
    evidence: dict


@dataclass
class AdmissibilityReport:
    weight: str
    entries: dict

    @property
    def all_pass(self) -> bool:
        return all(e.passed is not False for e in self.entries.values())

    def to_json(self) -> str:
        return json.dumps({
            "weight": self.weight,
            "entries": {k: {"passed": e.passed, "detail": e.detail,
                            "evidence": {kk: (list(vv) if isinstance(vv, (list, tuple, np.ndarray)) else vv)
                                         for kk, vv in e.evidence.items()}}
                        for k, e in self.entries.items()},
        }, default=float)


def admissibility_report(w: WeightSpec, rho_range=(None, 1e6),
                         grid_size: int = 200) -> AdmissibilityReport:
    """Grid evidence for the four admissibility conditions.

    (A) partial integrals of eps(rho)/rho grow decade over decade without a
        plateau; (B) eps(lambda rho)/eps(rho) -> 1 for lambda in [1/2, 2];
    (C) the limit of eps exists and is < 2; (D) when the limit is 0, eps is
        eventually decreasing with |eps'(rho)| >= e^{-delta rho}.
    """
    lo = rho_range[0] or max(w.rho0, w.min_real + 2.0)
    hi = rho_range[1]
    if math.isfinite(w.max_real):
        hi = min(hi, (w.max_real - 1.0) / 2.05)  # headroom for the lambda probes
    rho = np.geomspace(lo, hi, grid_size)
    eps = np.array([float(np.real(eval_eps(w, r))) for r in rho])
    entries = {}

    # (A) divergence proxy: decade increments of int eps/rho drho = int eps dlog(rho)
    dlog = np.diff(np.log(rho))
    inc = 0.5 * (eps[1:] + eps[:-1]) * dlog
    cum = np.concatenate([[0.0], np.cumsum(inc)])
    decades = np.linspace(0, len(rho) - 1, 7).astype(int)
    dec_inc = np.diff(cum[decades])
    a_pass = bool(np.all(dec_inc > 1e-4 * max(cum[-1], 1e-12)) and cum[-1] > 0)
    entries["A_divergence"] = ReportEntry(
        a_pass, "partial integrals of eps/rho grow across decades",
        {"decade_increments": dec_inc, "total": cum[-1]})

    # (B) slow variation
    lam = np.array([0.5, 0.75, 1.5, 2.0])
    probes = rho[[grid_size // 4, grid_size // 2, 3 * grid_size // 4, -1]]
    dev = []
    for r in probes:
        e0 = float(np.real(eval_eps(w, r)))
        d = max(abs(float(np.real(eval_eps(w, l * r))) / e0 - 1.0) for l in lam)
        dev.append(d)
    b_pass = bool(all(dev[i + 1] <= dev[i] + 1e-3 for i in range(len(dev) - 1))
                  and dev[-1] < 0.5)
    entries["B_slow_variation"] = ReportEntry(
        b_pass, "max_{lambda in [1/2,2]} |eps(lambda rho)/eps(rho)-1| decreasing",
        {"probe_rho": probes, "max_deviation": dev})

    # (C) limit < 2: extrapolate eps linearly in 1/log(rho)
    x = 1.0 / np.log(rho[-grid_size // 3:])
    y = eps[-grid_size // 3:]
    slope, inter = np.polyfit(x, y, 1)
    limit = float(inter)
    c_pass = bool(limit < 2.0 - 1e-9)
    entries["C_limit"] = ReportEntry(
        c_pass, f"estimated limit of eps = {limit:.4g} (< 2 required)",
        {"limit_estimate": limit, "tail_eps": y[-3:]})

    # (D) only when the limit is ~0
    if abs(limit) < 0.05:
        tail = slice(grid_size // 2, None)
        decreasing = bool(np.all(np.diff(eps[tail]) <= 1e-12))
        h = rho * 1e-5
        epsp = np.array([
            (float(np.real(eval_eps(w, r + hh))) - float(np.real(eval_eps(w, r - hh)))) / (2 * hh)
            for r, hh in zip(rho[tail], h[tail])])
        deltas = [0.5, 0.1, 0.01]
        ok = {}
        for d in deltas:
            mask = d * rho[tail] < 700
            ok[d] = bool(np.all(np.abs(epsp[mask]) >= np.exp(-d * rho[tail][mask])))
        d_pass = bool(decreasing and all(ok.values()))
        entries["D_zero_limit"] = ReportEntry(
            d_pass, "eps eventually decreasing and |eps'| >= e^{-delta rho}",
            {"decreasing": decreasing, "eps_prime_bound_ok": ok})
    else:
        entries["D_zero_limit"] = ReportEntry(
            None, "not applicable (limit of eps is nonzero)", {"limit": limit})

    # boundedness/positivity of eps on the grid (definition precondition)
    entries["positivity"] = ReportEntry(
        bool(np.all(eps > 0) and np.all(np.isfinite(eps))),
        "eps positive and bounded on the grid",
        {"min": float(eps.min()), "max": float(eps.max())})

    return AdmissibilityReport(w.describe(), entries)

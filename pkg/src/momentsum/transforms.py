"""Generalized Borel and Laplace transforms.

The summation pipeline: divide Taylor coefficients by the moments
(``borel_coeffs``), continue the Borel-side series along the positive ray
(closed form or Pade), then integrate against the kernel
(``laplace_quadrature``).  ``moment_sum`` composes the three; on polynomials
the composition is the identity up to quadrature tolerance (the moment
identity).  ``borel_contour`` implements the contour-integral realization of
the Borel transform for functions analytic near the ray.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .errors import (DegenerateDenominator, DerivativeUnavailable, DomainError,
                     IncompatibleGrowth, PoleOnRayWarning, QuadratureStall)
from .kernels import EntireE, KernelK
from .weights import WeightSpec, log_L, log_L_hat, moment_weight

MAX_FD_ORDER = 8  # finite-difference derivatives beyond this are ill-conditioned


# ---------------------------------------------------------------------------
# formal power series
# ---------------------------------------------------------------------------

def _is_exact(values) -> bool:
    return all(isinstance(v, (Fraction, int)) for v in values)


@dataclass(frozen=True)
class FormalSeries:
    """Finite coefficient vector a_0..a_n over exact rationals or floats.

    Binary operations truncate to the shorter operand, so every operation is
    closed under the stored length.
    """

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(
            Fraction(c) if isinstance(c, int) else c for c in self.coeffs))

    @staticmethod
    def from_list(values) -> "FormalSeries":
        return FormalSeries(tuple(values))

    @staticmethod
    def zero(length: int) -> "FormalSeries":
        return FormalSeries((Fraction(0),) * length)

    @property
    def exact(self) -> bool:
        return _is_exact(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __add__(self, other: "FormalSeries") -> "FormalSeries":
        n = min(len(self), len(other))
        return FormalSeries(tuple(self[k] + other[k] for k in range(n)))

    def __sub__(self, other: "FormalSeries") -> "FormalSeries":
        n = min(len(self), len(other))
        return FormalSeries(tuple(self[k] - other[k] for k in range(n)))

    def scale(self, c) -> "FormalSeries":
        c = Fraction(c) if isinstance(c, int) else c
        return FormalSeries(tuple(c * v for v in self.coeffs))

    def cauchy_mul(self, other: "FormalSeries") -> "FormalSeries":
        n = min(len(self), len(other))
        out = []
        for k in range(n):
            out.append(sum((self[j] * other[k - j] for j in range(k + 1)),
                           start=Fraction(0)))
        return FormalSeries(tuple(out))

    def divide_by_unit(self, other: "FormalSeries") -> "FormalSeries":
        """Coefficientwise division by a series with invertible constant term."""
        if other[0] == 0:
            raise DomainError("division needs a unit (nonzero constant term)")
        n = min(len(self), len(other))
        out = []
        for k in range(n):
            acc = self[k]
            for j in range(1, k + 1):
                acc = acc - other[j] * out[k - j]
            out.append(acc / other[0])
        return FormalSeries(tuple(out))

    def shift_up(self, factor=1) -> "FormalSeries":
        """Multiply by x (degree raised by one), scaling by factor."""
        f = Fraction(factor) if isinstance(factor, int) else factor
        return FormalSeries((Fraction(0),) + tuple(f * v for v in self.coeffs))

    def eval(self, x):
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def to_json(self) -> str:
        if self.exact:
            return json.dumps({"coeffs": [str(Fraction(c)) for c in self.coeffs],
                               "exact": True})
        return json.dumps({"coeffs": [float(c) for c in self.coeffs],
                           "exact": False})

    @staticmethod
    def from_json(text: str) -> "FormalSeries":
        d = json.loads(text)
        if d.get("exact"):
            return FormalSeries(tuple(Fraction(c) for c in d["coeffs"]))
        return FormalSeries(tuple(float(c) for c in d["coeffs"]))


# ---------------------------------------------------------------------------
# function handles
# ---------------------------------------------------------------------------

def _fd_derivative(f: Callable, x: float, n: int, h0: Optional[float] = None) -> float:
    """Richardson-extrapolated central difference of order n (n <= 8)."""
    if n == 0:
        return f(x)
    if n > MAX_FD_ORDER:
        raise DerivativeUnavailable(
            f"finite differences capped at order {MAX_FD_ORDER}; supply an oracle")
    h0 = h0 or max(abs(x), 1.0) * (0.005 * (n + 1))

    def central(h):
        return sum((-1) ** k * math.comb(n, k) * f(x + (n / 2 - k) * h)
                   for k in range(n + 1)) / h ** n

    d1, d2 = central(h0), central(h0 / 2)
    return (4.0 * d2 - d1) / 3.0


@dataclass
class FunctionHandle:
    """Evaluable function of one variable with optional derivative oracle.

    ``growth_eta`` tags the growth |F(t)| = O(E(eta t)) on the ray (0 for
    bounded/polynomially growing functions), where E belongs to
    ``growth_weight`` when set and to the integrating kernel's weight
    otherwise; ``analytic_radius`` is the radius of the disk of analyticity
    at the origin when known (inf for entire).
    """

    evaluator: Callable
    derivative_fn: Optional[Callable] = None   # (x, n) -> value
    max_order: Optional[int] = None            # None: unlimited oracle, FD cap otherwise
    growth_eta: float = 0.0
    growth_weight: Optional[WeightSpec] = None
    complex_capable: bool = False
    analytic_radius: float = math.inf
    label: str = ""

    def __call__(self, x):
        return self.evaluator(x)

    def derivative(self, x, n: int):
        if n == 0:
            return self.evaluator(x)
        if self.derivative_fn is not None:
            if self.max_order is not None and n > self.max_order:
                raise DerivativeUnavailable(
                    f"oracle for {self.label or 'handle'} capped at order "
                    f"{self.max_order}")
            return self.derivative_fn(x, n)
        return _fd_derivative(self.evaluator, x, n)

    @staticmethod
    def from_series_eval(series: FormalSeries, label="poly") -> "FunctionHandle":
        coeffs = [float(c) for c in series.coeffs]

        def ev(x):
            acc = 0.0 if not isinstance(x, complex) else 0j
            for c in reversed(coeffs):
                acc = acc * x + c
            return acc

        def dv(x, n):
            if n >= len(coeffs):
                return 0.0
            acc = 0.0 if not isinstance(x, complex) else 0j
            for k in range(len(coeffs) - 1, n - 1, -1):
                acc = acc * x + coeffs[k] * math.perm(k, n)
            return acc

        return FunctionHandle(ev, dv, growth_eta=0.0,
                              complex_capable=True, label=label)


# ---------------------------------------------------------------------------
# Borel step
# ---------------------------------------------------------------------------

def borel_coeffs(s: FormalSeries, w: WeightSpec) -> FormalSeries:
    """Termwise division by the moments: coefficient n becomes a_n / mu_n.

    Exact when the input is rational and the moments are integers (the
    factorial moments of the classical weight).
    """
    out = []
    for n, a in enumerate(s.coeffs):
        if w.family == "gamma_power" and w.pdict["alpha"] == 1.0 \
                and w.arg_shift == 0.0 and isinstance(a, (Fraction, int)):
            out.append(Fraction(a) / math.factorial(n))
        else:
            out.append(float(a) / w.moment(n))
    return FormalSeries(tuple(out))


def remainder_Rn(f: FunctionHandle, z, n: int):
    """f(z) minus its Taylor polynomial of order < n at the origin."""
    val = f(z)
    acc = 0.0 if not isinstance(z, complex) else 0j
    for k in range(n - 1, -1, -1):
        acc = acc * z + f.derivative(0.0, k) / math.factorial(k)
    return val - acc


# ---------------------------------------------------------------------------
# Pade continuation
# ---------------------------------------------------------------------------

@dataclass
class PadeApproximant:
    num: tuple
    den: tuple
    exact: bool
    poles: tuple = ()
    pole_on_ray: bool = False

    def __call__(self, x):
        p = self._horner(self.num, x)
        q = self._horner(self.den, x)
        return p / q

    @staticmethod
    def _horner(cs, x):
        acc = 0.0 if not isinstance(x, complex) else 0j
        for c in reversed(cs):
            acc = acc * x + (float(c) if isinstance(c, Fraction) else c)
        return acc

    def handle(self) -> FunctionHandle:
        return FunctionHandle(self.__call__, None, growth_eta=0.0,
                              complex_capable=True,
                              analytic_radius=min((abs(p) for p in self.poles),
                                                  default=math.inf),
                              label=f"pade({len(self.num)-1},{len(self.den)-1})")


def pade_continue(s: FormalSeries, order) -> PadeApproximant:
    """Rational approximant [m/n] agreeing with the series to order m+n.

    Exact (Fraction) solve for rational input; float solve otherwise.  Poles
    on the nonnegative ray trigger a PoleOnRayWarning.
    """
    m, n = order
    if len(s) < m + n + 1:
        raise DomainError(f"need {m+n+1} coefficients for a ({m},{n}) Pade")
    c = list(s.coeffs)
    exact = s.exact
    if not exact:
        c = [float(v) for v in c]

    # denominator: sum_{j=0..n} q_j c_{m+k-j} = 0, k=1..n, q_0 = 1
    if n > 0:
        A = [[(c[m + k - j] if 0 <= m + k - j < len(c) else
               (Fraction(0) if exact else 0.0)) for j in range(1, n + 1)]
             for k in range(1, n + 1)]
        b = [-(c[m + k] if m + k < len(c) else (Fraction(0) if exact else 0.0))
             for k in range(1, n + 1)]
        if exact:
            q_tail = _solve_exact(A, b)
        else:
            An, bn = np.array(A, dtype=float), np.array(b, dtype=float)
            if np.linalg.cond(An) > 1e13:
                raise DegenerateDenominator("near-singular Pade system")
            q_tail = list(np.linalg.solve(An, bn))
        q = [Fraction(1) if exact else 1.0] + q_tail
    else:
        q = [Fraction(1) if exact else 1.0]

    p = []
    for k in range(m + 1):
        acc = Fraction(0) if exact else 0.0
        for j in range(min(k, n) + 1):
            acc += q[j] * c[k - j]
        p.append(acc)

    poles = ()
    pole_on_ray = False
    if n > 0:
        qf = np.array([float(v) for v in q], dtype=float)
        rts = np.roots(qf[::-1]) if np.any(qf[1:]) else np.array([])
        poles = tuple(complex(r) for r in rts)
        for r in poles:
            if abs(r.imag) < 1e-9 and r.real >= -1e-12:
                pole_on_ray = True
        if pole_on_ray:
            warnings.warn("Pade denominator has a pole on [0, inf)",
                          PoleOnRayWarning)
    return PadeApproximant(tuple(p), tuple(q), exact, poles, pole_on_ray)


def _solve_exact(A, b):
    """Gaussian elimination over Fractions."""
    n = len(b)
    M = [[Fraction(A[i][j]) for j in range(n)] + [Fraction(b[i])]
         for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise DegenerateDenominator("singular Pade system (exact)")
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [v / pv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [vr - f * vc for vr, vc in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# Laplace step
# ---------------------------------------------------------------------------

@dataclass
class SummationResult:
    value: float
    abs_error_estimate: float
    panels: int = 0
    method: str = ""
    truncation_t0: float = 0.0
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps({
            "value": _jsonable(self.value),
            "abs_error_estimate": self.abs_error_estimate,
            "panels": self.panels, "method": self.method,
            "truncation_t0": self.truncation_t0,
            "diagnostics": {k: _jsonable(v) for k, v in self.diagnostics.items()},
        })


def _jsonable(v):
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, (np.floating, np.integer)):
        return float(v)
    return v


def _choose_truncation(g: Callable, tol: float, t_cap: float):
    """Walk the integrand up a log grid until it has decayed below
    tol * peak; stops before evaluating past the cutoff (the factors may
    overflow individually far beyond it even when the product decays)."""
    t = 1e-3
    peak = 0.0
    below = 0
    T = None
    while t <= t_cap:
        try:
            v = abs(g(t))
        except OverflowError:
            raise QuadratureStall(
                f"integrand factor overflow at t={t:.3g} before decay; "
                "growth too close to the kernel scale")
        if not math.isfinite(v):
            raise QuadratureStall(f"integrand not finite at t={t:.3g}")
        peak = max(peak, v)
        if peak > 0 and t > 0.5 and v < max(peak * tol * 1e-2, 1e-300):
            below += 1
            if below >= 3:
                T = t
                break
        else:
            below = 0
        t *= 1.12
    if peak == 0.0:
        return 1.0, 0.0, None
    if T is None:
        raise QuadratureStall(
            f"integrand did not decay below tolerance by t_cap={t_cap:.3g}")
    return T, peak, None


def _growth_limit(F: FunctionHandle, K: KernelK) -> float:
    """Largest eta*x the kernel decay can absorb.

    When the growth tag refers to the kernel's own weight the classical
    scale condition eta*x < 1 applies.  When it refers to a larger weight
    (a multi-summation product), the kernel's E dominates the tagged growth
    and the range expands by the moment-ratio root
    (mu_F(n)/mu_K(n))^(1/n) -> inf; the smallest probed root is used.
    """
    gw = F.growth_weight
    if gw is None:
        return 1.0
    try:
        r16, r32 = (math.exp((gw.moment_log(n) - K.weight.moment_log(n)) / n)
                    for n in (16, 32))
    except DomainError:
        return 1.0
    if r32 > r16 * 1.05:
        # strictly growing dominance root: the kernel absorbs any scale
        # (the truncation scan still detects an actually divergent integrand)
        return math.inf
    return max(1.0, min(r16, r32))


def laplace_quadrature(F: FunctionHandle, K: KernelK, x: float,
                       tol: float = 1e-9, t_cap: float = 1e6,
                       trace_path=None) -> SummationResult:
    """f(x) = int_0^inf F(x t) K(t) dt by adaptive Gauss-Kronrod panels.

    The upper limit T is placed where the integrand has fallen below
    tol * peak (the E/K matching guarantees decay when the growth tag is
    compatible); the discarded tail is estimated from the terminal decay rate
    and added to the error estimate.  ``trace_path`` dumps integrand samples
    to CSV on request.
    """
    if F.growth_eta * x >= _growth_limit(F, K):
        raise IncompatibleGrowth(
            f"growth tag eta={F.growth_eta} with x={x} leaves the kernel "
            "decay uncompensated (eta*x >= 1 at the kernel's scale)")

    def g(t):
        return float(np.real(F(x * t))) * float(np.real(K.eval(t)))

    T, peak, _scan = _choose_truncation(g, tol, t_cap)
    if trace_path is not None:
        with open(trace_path, "w") as fh:
            fh.write(f"# integrand trace: x={x} tol={tol} T={T}\n")
            fh.write("t,integrand\n")
            for t in np.linspace(0.0, T, 200):
                fh.write(f"{t:.9g},{g(t):.12g}\n")
    if peak == 0.0:
        return SummationResult(0.0, 0.0, 0, "laplace_gk", T)
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            val, err, info = quad(g, 0.0, T, epsabs=tol * 0.5,
                                  epsrel=tol * 0.5, limit=300,
                                  full_output=True)[:3]
        except IntegrationWarning as exc:
            raise QuadratureStall(str(exc)) from exc
    # tail estimate from the last decade's decay rate
    gT = abs(g(T))
    g2 = abs(g(0.8 * T))
    if g2 > 0 and gT > 0 and gT < g2:
        rate = math.log(g2 / gT) / (0.2 * T)
        tail = gT / max(rate, 1e-12)
    else:
        tail = gT * T
    return SummationResult(val, err + tail, info["neval"], "laplace_gk", T,
                           {"peak": peak})


def laplace_derivative_n(F: FunctionHandle, K: KernelK, x: float, n: int,
                         tol: float = 1e-9, t_cap: float = 1e6) -> float:
    """f^(n)(x) = int F^(n)(x t) t^n K(t) dt (derivatives under the integral)."""
    if n == 0:
        return laplace_quadrature(F, K, x, tol, t_cap).value
    if F.growth_eta * x >= _growth_limit(F, K):
        raise IncompatibleGrowth("eta*x >= 1 at the kernel's scale")

    def g(t):
        return float(np.real(F.derivative(x * t, n))) * t ** n \
            * float(np.real(K.eval(t)))

    T, peak, _ = _choose_truncation(g, tol, t_cap)
    if peak == 0.0:
        return 0.0
    val, err = quad(g, 0.0, T, epsabs=tol, epsrel=tol, limit=300)
    return val


# ---------------------------------------------------------------------------
# the summation pipeline
# ---------------------------------------------------------------------------

def continue_borel_series(b: FormalSeries, continuation="pade",
                          pade_order=None):
    """Pick the Borel-side evaluator: a user handle, the truncated
    polynomial, or a screened Pade approximant.

    The Pade walk steps down the diagonal on singular systems (rational
    inputs hit the block structure of the Pade table) and on ray poles;
    order (m, 0) is the polynomial itself, so the walk always terminates.
    """
    diag = {}
    if isinstance(continuation, FunctionHandle):
        return continuation, {"continuation": continuation.label or "user"}
    if continuation == "poly":
        return FunctionHandle.from_series_eval(b), {"continuation": "poly"}
    if continuation != "pade":
        raise DomainError(f"unknown continuation {continuation!r}")
    N = len(b) - 1
    m, n = pade_order or (N - N // 2, N // 2)
    pa = None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PoleOnRayWarning)
        while True:
            if n <= 0:
                pa = pade_continue(b, (N, 0))   # the truncated polynomial
                break
            try:
                cand = pade_continue(b, (m, n))
            except DegenerateDenominator:
                m, n = m - 1, n - 1
                continue
            if cand.pole_on_ray:
                m, n = m - 1, n - 1
                continue
            pa = cand
            break
    diag["continuation"] = f"pade({len(pa.num) - 1},{len(pa.den) - 1})"
    diag["pole_on_ray"] = pa.pole_on_ray
    return pa.handle(), diag


def moment_sum(a: FormalSeries, w: WeightSpec, x: float,
               continuation="pade", pade_order=None, tol: float = 1e-9,
               t_cap: float = 1e6) -> SummationResult:
    """Resummation: borel_coeffs -> analytic continuation -> Laplace integral.

    ``continuation`` is either a FunctionHandle for the Borel-side function
    or "pade" (default order near (N/2, N/2) with pole screening).
    """
    K = KernelK(w)
    b = borel_coeffs(a, w)
    F, diag = continue_borel_series(b, continuation, pade_order)
    res = laplace_quadrature(F, K, x, tol, t_cap)
    res.method = "moment_sum"
    res.diagnostics.update(diag)
    return res


# ---------------------------------------------------------------------------
# contour Borel transform
# ---------------------------------------------------------------------------

def borel_contour(g: FunctionHandle, w: WeightSpec, x: float, n: int = 0,
                  R: Optional[float] = None, eta: float = 1.05,
                  tol: float = 1e-10) -> complex:
    """G^(n)(x) = (1/2 pi i) int_{Gamma(R)} g^(n)(x/w) E(w) dw / w^{n+1}.

    Gamma(R) is the arc |w| = R, |arg w| < theta_R joined to two rays at
    +-theta_R with theta_R = eta / Lhat(L^{-1}(R)); rays are truncated where
    |E(w)| / |w|^{n+1} falls below tolerance.  Requires an evaluator for E
    that stays accurate off the ray, so the weight must have a closed entire
    form (classical and alpha=2 gamma_power do, as do custom weights with an
    ``entire`` hook).
    """
    if not g.complex_capable:
        raise DomainError("contour Borel transform needs a complex-capable g")
    E = EntireE(w)
    if E._closed is None:
        raise DomainError(
            "borel_contour needs a closed-form E for off-ray evaluation; "
            f"{w.describe()} has none")
    mw = moment_weight(w)
    r_g = g.analytic_radius
    if R is None:
        R = max(1.0, 1.35 * abs(x) / min(r_g, 1e6))
    if abs(x) / R >= r_g:
        raise DomainError(
            f"contour radius {R} maps x={x} outside the declared analyticity "
            f"disk (radius {r_g})")

    # theta_R from the companion sequence profile of the moment weight
    def L_inv(r):
        from scipy.optimize import brentq
        f = lambda k: float(np.real(log_L(mw, k))) - math.log(r)
        lo = max(mw.min_real + 1.0, 2.0)
        if f(lo) > 0:
            return lo
        hi = 2 * lo
        while f(hi) < 0:
            hi *= 2
        return brentq(f, lo, hi, xtol=1e-9)

    theta = min(eta * math.exp(-log_L_hat(mw, L_inv(max(R, 2.0)))),
                0.95 * math.pi)

    def Ew(wv):
        return complex(E._closed(wv))

    def integrand(wv):
        return g.derivative(x / wv, n) * Ew(wv) / wv ** (n + 1)

    # arc part
    def arc_part(theta_v, part):
        wv = R * np.exp(1j * theta_v)
        val = integrand(wv) * 1j * wv
        return val.real if part == 0 else val.imag

    arc_re, _ = quad(lambda th: arc_part(th, 0), -theta, theta,
                     epsabs=tol, epsrel=tol, limit=300)
    arc_im, _ = quad(lambda th: arc_part(th, 1), -theta, theta,
                     epsabs=tol, epsrel=tol, limit=300)
    total = arc_re + 1j * arc_im

    # ray truncation where |E|/|w|^{n+1} is negligible against the arc scale
    scale = max(abs(total), tol)
    U = R
    for _ in range(400):
        U *= 1.25
        if abs(Ew(U * np.exp(1j * theta))) / U ** (n + 1) < tol * scale / 10:
            break

    # sqrt-spaced panels keep the per-panel oscillation count bounded for
    # Gaussian-type phases (E of fractional weights oscillates like e^{i c u^2}
    # along the rays); for the classical exponential phase they are harmless
    knots = np.sqrt(np.linspace(R * R, U * U, 64))
    for sgn in (+1, -1):
        phase = np.exp(sgn * 1j * theta)

        def ray_part(u, part):
            wv = u * phase
            val = integrand(wv) * phase * sgn
            return val.real if part == 0 else val.imag

        for a, b in zip(knots[:-1], knots[1:]):
            ray_re, _ = quad(lambda u: ray_part(u, 0), a, b, epsabs=tol,
                             epsrel=tol, limit=200)
            ray_im, _ = quad(lambda u: ray_part(u, 1), a, b, epsabs=tol,
                             epsrel=tol, limit=200)
            total += ray_re + 1j * ray_im
    return total / (2j * math.pi)

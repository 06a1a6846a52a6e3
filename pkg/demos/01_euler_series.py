"""Resumming the Euler series sum (-1)^n n! x^n step by step.

The series diverges for every x != 0, yet it is the asymptotic expansion of
f(x) = int_0^inf e^-t/(1+xt) dt.  Moment summation recovers f: divide the
coefficients by n! (Borel step), continue the resulting geometric series
1/(1+t) along the positive ray, then integrate against the kernel e^-t.
"""

import math
from fractions import Fraction

from momentsum import (FormalSeries, KernelK, WeightSpec, borel_coeffs,
                       laplace_quadrature, moment_sum, pade_continue)

w = WeightSpec.gamma_power(1.0)          # the classical weight: mu_n = n!
x = 1.0

a = FormalSeries(tuple(Fraction((-1) ** n * math.factorial(n))
                       for n in range(24)))

print("partial sums of the divergent series at x = 1:")
partial = 0
for n in range(10):
    partial += (-1) ** n * math.factorial(n)
    print(f"  N={n:2d}  S_N = {partial}")

print("\nBorel step: a_n / n! =", [str(c) for c in
                                   borel_coeffs(a, w).coeffs[:6]], "...")

pa = pade_continue(borel_coeffs(a, w), (1, 1))
print("Pade (1,1) of the Borel series: poles at", pa.poles,
      " -> exactly 1/(1+t)")

res = moment_sum(a, w, x, tol=1e-10)
print(f"\nresummed value at x=1: {res.value:.12f} "
      f"(+- {res.abs_error_estimate:.1e})")
print("reference e*E1(1):     0.596347362323")

# the same number from the integral representation directly
from momentsum import FunctionHandle

F = FunctionHandle(lambda t: 1.0 / (1.0 + t))
direct = laplace_quadrature(F, KernelK(w), 1.0, tol=1e-12)
print(f"direct quadrature:     {direct.value:.12f}")

print("\nresummation across x:")
for xv in (0.2, 0.5, 1.0, 2.0):
    r = moment_sum(a, w, xv, tol=1e-10)
    print(f"  x={xv:4.1f}  f(x) = {r.value:.10f}")

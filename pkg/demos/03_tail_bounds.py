"""Closed-form tail bounds, their inversion, and the application formulas.

A proxy profile collects the per-coordinate conditional-version norms of
a function of independent variables; three closed forms turn it into tail
probabilities, and inversion turns a confidence level into a deviation.
"""
import math

import numpy as np

from lighttails import distributions as D
from lighttails.applications import (metric_tail, psa_bound, psi_diameter,
                                     rademacher_generalization_bound,
                                     regression_bound, vector_bound_i,
                                     vector_bound_ii)
from lighttails.bounds import evaluate_tail, invert_tail
from lighttails.functions import SumFunction, VectorNormOfSum, proxy_profile

print("tail bounds for a sum of ten Exp(1) variables:")
fspec = SumFunction([D.Exponential(1.0)] * 10)
profile = proxy_profile(fspec, p=2.0)
print(f"  per-coordinate psi1 entries: {profile.psi1_per_coord[0]:.4f} (x10)")
for t in (2.0, 5.0, 10.0, 20.0):
    r2 = evaluate_tail("thm2", profile, t)
    r3 = evaluate_tail("thm3", profile, t, p=2.0)
    rb = evaluate_tail("bounded-difference", profile, t)
    print(f"  t = {t:5.1f}: subexp {r2.prob:.3e}  moment {r3.prob:.3e}"
          f"  baseline {'n/a (unbounded)' if rb.prob == 1.0 else rb.prob}")

print()
print("the Euclidean norm of a sum of Gaussian vectors is sub-Gaussian:")
vec = D.VectorSpec(5, [D.Gaussian(0.0, 1.0)] * 5)
norm_spec = VectorNormOfSum(vec, n=20)
prof = proxy_profile(norm_spec)
for t in (5.0, 15.0, 30.0):
    r1 = evaluate_tail("thm1", prof, t)
    print(f"  t = {t:5.1f}: P(deviation > t) <= {r1.prob:.3e}")

print()
print("inverting a bound: deviation at confidence 1 - delta")
for delta in (0.1, 0.01, 1e-4):
    inv = invert_tail("thm2", profile, delta)
    print(f"  delta = {delta:6.0e}: exact root {inv.exact:8.3f},"
          f" additive relaxation {inv.additive:8.3f}")

print()
print("application formulas (all closed-form in n and delta):")
print(f"  vector sum deviation:      {vector_bound_i([1.0] * 10, 0.01):8.3f}")
print(f"  normalized iid mean:       {vector_bound_ii(1.0, 1000, 0.01):8.3f}")
print(f"  subspace reconstruction:   {psa_bound(1.0, 5, 1000, 0.01):8.3f}")
print(f"  Lipschitz-class uniform:   "
      f"{rademacher_generalization_bound(0.2, 1.0, 1.0, 1000, 0.01):8.3f}")
print(f"  unbounded regression:      "
      f"{regression_bound(1.0, 1.0, 0.5, 1000, 0.01):8.3f}")

print()
print("metric-space tails from psi diameters:")
diams = [psi_diameter(spec, 1) for spec in
         (D.Gaussian(0.0, 1.0), D.UniformInterval(0.0, 1.0), D.Exponential(1.0))]
for d, name in zip(diams, ("Gaussian", "Uniform", "Exponential")):
    print(f"  Delta_1({name}) = {d.value:.4f}  [{d.method}]")
res = metric_tail(1.0, diams, 4.0)
print(f"  1-Lipschitz f of the three coordinates: P(dev > 4) <= {res.prob:.4f}")

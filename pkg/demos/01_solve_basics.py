"""Exact spectra of a box with point scatterers: the basics.

Walks through the core objects: build an instance, evaluate the root
function whose zeros are the allowed quasimomenta, find all levels below a
cutoff, and cross-check two classic cases against pencil-and-paper values
(the empty box, and one scatterer in the middle where even states solve
tan k = -k/h).
"""
import numpy as np
from scipy.optimize import brentq

import kpbox as kp

# --- empty box: k_n = n pi / L ---------------------------------------------
box = kp.make_scatterer_set(L=np.pi, positions=[], heights=[])
roots = kp.find_roots(box, k_max=6.5)
print("empty box, L = pi")
for r in roots:
    print(f"  k = {r.k:.12f}   E = {r.E:.12f}")

# --- one scatterer at the centre --------------------------------------------
s = kp.make_scatterer_set(L=2.0, positions=[0.0], heights=[1.0])
roots = kp.find_roots(s, k_max=10.0)
print("\ncentred scatterer, h = 1, L = 2")
print("  odd levels sit at n*pi (node on the scatterer),")
print("  even levels solve tan k = -k/h:")
for n, r in enumerate(roots):
    if abs(r.k / np.pi - round(r.k / np.pi)) < 1e-9:
        kind = "odd   (n pi)"
    else:
        m = int(np.ceil(r.k / np.pi))
        k_ref = brentq(lambda k: np.tan(k) + k, (2 * m - 1) * np.pi / 2 + 1e-12,
                       m * np.pi - 1e-12)
        kind = f"even  (tan k = -k, ref {k_ref:.9f})"
    print(f"  level {n}: k = {r.k:.9f}   {kind}")

# --- the root function itself ------------------------------------------------
ks = np.linspace(0.2, 10, 400)
mm = kp.bethe_mismatch(s, ks)
print("\nsign changes of the root function bracket every level:",
      int(np.sum(np.sign(mm[:-1]) != np.sign(mm[1:]))), "found")

# the explicit ordered-subset form is an independent expression of the same
# condition (cost 2^M, so only for small M): identical zero set
poly = kp.bethe_polynomial_form(s, ks)
print("explicit-sum form max |poly - k^M * mismatch|:",
      float(np.max(np.abs(poly - mm * ks ** s.M))))

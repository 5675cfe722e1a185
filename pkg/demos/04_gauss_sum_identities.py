#!/usr/bin/env python3
"""Gauss-sum algebra behind the closed forms, at a glance.

Walks the exact identities the fast paths rely on: |tau| = sqrt(N) and
the inverse relation for primitive characters, the induced-character
formula for imprimitive Gauss sums, the twisted quadratic sums, and the
reduction of cos(2 pi p/N) to a normalized character sum with the
principal term tau(conj(chi0)) = mu(N).
"""

import math

import numpy as np

from murmurlab import arith, characters as ch
from murmurlab.complex_family import _conjugate_permutation

N = 45
g = ch.character_group(N)
tau = g.gauss_sums_all()
prim = g.conductors_all() == N
print(f"mod {N}: {g.phi} characters, {int(prim.sum())} primitive "
      f"(formula gives {ch.count_primitive(N)})")
print(f"  max ||tau| - sqrt(N)| over primitive: "
      f"{np.max(np.abs(np.abs(tau[prim]) - math.sqrt(N))):.2e}")

tau_bar = tau[_conjugate_permutation(g)]
par = g.parities_all()
dev = np.max(np.abs(1 / tau[prim] - par[prim] / N * tau_bar[prim]))
print(f"  max |1/tau - chi(-1) tau(conj)/N|: {dev:.2e}")

print()
print("imprimitive Gauss sums via the inducing character:")
chars = g.characters()
for i in np.flatnonzero((g.conductors_all() > 1) & (g.conductors_all() < N))[:4]:
    chi = chars[i]
    sub, chi1 = ch.restrict_to_conductor(g, chi)
    formula = ch.imprimitive_gauss_sum(g, chi, sub, chi1)
    direct = g.gauss_sum(g.conjugate_index(chi))
    print(f"  chi index {chi} (conductor {sub.N}): "
          f"formula {formula:+.6f}, direct {direct:+.6f}")

print()
print("twisted quadratic sums: G_k(p) = (k/p) sqrt(p)")
p = 13
for k in (0, 1, 2, 5):
    tau_k, g_k = ch.twisted_quadratic_gauss_sum(k, p)
    print(f"  k = {k}: G_k({p}) = {g_k:+.6f}, (k/p) sqrt(p) = "
          f"{arith.kronecker_symbol(k, p) * math.sqrt(p):+.6f}")

print()
print("cos(2 pi p/N) from characters (principal term is mu(N)):")
for N2, p2 in ((45, 7), (101, 17), (16, 11)):
    g2 = ch.character_group(N2)
    tau2 = g2.gauss_sums_all()
    tb = tau2[_conjugate_permutation(g2)]
    parities = g2.parities_all()
    even = parities == 1
    even[0] = False
    vals = g2.values_at(p2)
    rhs = (arith.mobius(N2) + np.sum(tb[even] * vals[even])) / arith.euler_phi(N2)
    print(f"  N = {N2:3d}, p = {p2:3d}: lhs {math.cos(2*math.pi*p2/N2):+.12f}, "
          f"rhs {rhs.real:+.12f}")

#!/usr/bin/env python3
"""Weighted real-character murmurations and their density.

Runs the empirical double sum at a modest scale alongside the two
analytic evaluations of its limit (the Mobius double sum and the
divisor-sum form), then traces the density's phase transition between
0 (as y -> 0) and -(2/pi^2) * integral of the transform at 0 (as
y -> infinity).
"""

import math

from murmurlab import real_family as rf

weight = rf.bump_weight(1, 2)
X = 2**15
print(f"empirical weighted sum at X = 2^15 vs the limiting density (bump weight)")
print(f"{'y':>5} {'empirical':>12} {'primal':>12} {'dual':>12}")
for y in (0.5, 1.0, 1.5):
    emp = rf.empirical_average(y, X, 2 / 3, weight, "eight_d")
    primal = rf.density_primal(y, weight, "eight_d").value
    dual = rf.density_dual(y, weight, "eight_d")
    print(f"{y:5.2f} {emp:12.6f} {primal:12.6f} {dual:12.6f}")

print()
grid = rf.transform_grid(weight)
floor = -rf.TWO_OVER_PI2 * grid.tilde0
print(f"phase transition: 0 at y -> 0+, {floor:.6f} at y -> infinity")
pol = rf.TruncationPolicy(n_max=100_000)
for y in (1e-4, 1e-2, 0.5, 5.0, 100.0, 1e4):
    print(f"  y = {y:8.4g}: density = {rf.density_dual(y, weight, 'eight_d', pol):+.8f}")

print()
print("plain-Kronecker variant shares the same endpoints:")
for y in (1e-2, 1.0, 1e4):
    print(f"  y = {y:8.4g}: density = {rf.density_dual(y, weight, 'dagger'):+.8f}")

print()
print("weight mass approaches (4/pi^2) * integral of the weight:")
for X2 in (10**4, 10**5, 10**6):
    res = rf.double_average(1.0, X2, 0.6, weight)
    target = 4 / math.pi**2 * rf.tilde_transform(weight, 0.0)
    print(f"  X = {X2:8d}: mass {res.weight_mass:.8f} vs {target:.8f}")

#!/usr/bin/env python3
"""Prime-conductor murmurations: window averages versus their limits.

Sweeps y over [0, 4] for the geometric window [X, 2X], prints the
average of chi(p)/tau(chi) over primitive even characters next to the
limiting integral, and shows the short-window version converging to a
plain cosine.  Also demonstrates the p = N discontinuity: conductors
equal to the prime ceiling contribute zero.
"""

import numpy as np

from murmurlab import complex_family as cf

X = 2**11

print(f"geometric window [X, 2X], X = {X}: average vs integral limit")
print(f"{'y':>5} {'average':>12} {'limit':>12} {'gap':>9}")
for y in np.arange(0.0, 4.01, 0.5):
    avg = cf.prime_window_average(float(y), X, 2.0, parity=1)
    lim = cf.prime_window_limit(float(y), 2.0, parity=1)
    print(f"{y:5.2f} {avg.real:12.6f} {lim.real:12.6f} {abs(avg - lim):9.5f}")

print()
print("short window [X, X + X^0.6]: the limit is cos(2 pi y)")
print(f"{'y':>5} {'average':>12} {'cos(2 pi y)':>12}")
for y in (0.0, 0.25, 0.5, 0.75, 1.25):
    avg = cf.prime_window_average_short(float(y), 10**5, 0.6, parity=1)
    lim = cf.prime_window_limit_short(float(y), parity=1)
    print(f"{y:5.2f} {avg.real:12.6f} {lim.real:12.6f}")

print()
print("minus-parity averages are purely imaginary (sine shape):")
v = cf.prime_window_average(0.7, X, 2.0, parity=-1)
print(f"  T(0.7) = {v:.6f};  imaginary part {v.imag:.6f}, real part {v.real:.2e}")

print()
print("the p = N term is dropped, not divided by tau of the principal character:")
y = 1.002
p = cf.prime_ceiling(y, 100)
with_term = cf.prime_window_average(y, 100, 2.0, 1, "brute")
print(f"  X = 100, y = {y}: prime ceiling p = {p} lies inside the window")
print(f"  brute enumeration gives {with_term.real:.6f} (its chi(p) vanish identically)")

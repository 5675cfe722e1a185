"""Small quadrature helpers shared by the limit and transform evaluators."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np


def adaptive_simpson(
    f: Callable[[float], float], a: float, b: float, tol: float, max_depth: int = 50
) -> float:
    """Adaptive Simpson integration of a scalar real function on [a, b]."""
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth)


def _simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    err = left + right - whole
    if depth <= 0 or abs(err) <= 15.0 * tol:
        return left + right + err / 15.0
    half = 0.5 * tol
    return _simpson_rec(f, a, m, fa, flm, fm, left, half, depth - 1) + _simpson_rec(
        f, m, b, fm, frm, fb, right, half, depth - 1
    )


def gauss_legendre_nodes(a: float, b: float, panels: int, order: int = 8):
    """Composite Gauss-Legendre nodes/weights on [a, b] as flat arrays."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).reshape(-1)
    weights = (half[:, None] * w[None, :]).reshape(-1)
    return nodes, weights


def fsum_complex(terms) -> complex:
    """Exact (Shewchuk) summation of complex terms in the given order."""
    re, im = [], []
    for t in terms:
        t = complex(t)
        re.append(t.real)
        im.append(t.imag)
    return complex(math.fsum(re), math.fsum(im))

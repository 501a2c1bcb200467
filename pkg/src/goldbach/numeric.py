"""Small numerical building blocks: compensated summation and adaptive
Simpson quadrature."""

from __future__ import annotations

import math


class KahanSum:
    """Running sum with Kahan compensation."""

    __slots__ = ("total", "_c")

    def __init__(self, start: float = 0.0):
        self.total = float(start)
        self._c = 0.0

    def add(self, x: float) -> float:
        y = x - self._c
        t = self.total + y
        self._c = (t - self.total) - y
        self.total = t
        return t


def kahan_sum(values) -> float:
    acc = KahanSum()
    for v in values:
        acc.add(v)
    return acc.total


def _simpson(fa, fm, fb, a, b):
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def adaptive_simpson(f, a: float, b: float, tol: float, max_depth: int = 60) -> float:
    """Integrate ``f`` over ``[a, b]`` to absolute tolerance ``tol``.

    Classic bisection with the ``|S_left + S_right - S_whole| <= 15 tol``
    acceptance test and one Richardson correction per accepted panel.
    Panels are accepted left to right and summed with Kahan compensation.
    """
    if b == a:
        return 0.0
    if b < a:
        return -adaptive_simpson(f, b, a, tol, max_depth)
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    acc = KahanSum()
    # (a, b, fa, fm, fb, whole, tol, depth); right halves pushed first
    stack = [(a, b, fa, fm, fb, _simpson(fa, fm, fb, a, b), tol, 0)]
    while stack:
        a, b, fa, fm, fb, whole, eps, depth = stack.pop()
        m = 0.5 * (a + b)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = _simpson(fa, flm, fm, a, m)
        right = _simpson(fm, frm, fb, m, b)
        delta = left + right - whole
        if depth >= max_depth or abs(delta) <= 15.0 * eps:
            acc.add(left + right + delta / 15.0)
        else:
            stack.append((m, b, fm, frm, fb, right, 0.5 * eps, depth + 1))
            stack.append((a, m, fa, flm, fm, left, 0.5 * eps, depth + 1))
    return acc.total


def inv_log_sq(x: float) -> float:
    lx = math.log(x)
    return 1.0 / (lx * lx)

"""Exact Fibonacci numbers and the Fibonacci difference transform.

The convention here is f(0) = f(1) = 1, f(n) = f(n-1) + f(n-2), matching
the banded transform below, whose row n carries -f(n+1)/f(n) at column
n-1 and f(n)/f(n+1) at column n.  Row 0 has no column -1, so the first
output term is simply (f(0)/f(1)) * u(0); windowed analyses downstream
never look at that boundary row (see :mod:`geoseq.summability`).

Values are arbitrary-precision integers; float ratios are produced by
exact integer division, which CPython rounds correctly and which cannot
overflow (the quotients lie in (0, 2]).
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Optional, Sequence

from .geometric import GeoSequence, gscale, gsub

__all__ = [
    "FibonacciCache",
    "fib",
    "fib_ratio",
    "fib_inverse_ratio",
    "cassini",
    "fib_partial_sum",
    "identity_report",
    "difference_entry",
    "difference_transform_log",
    "difference_transform",
    "kernel_log_sequence",
    "GOLDEN_RATIO",
]

#: Limit of f(n+1)/f(n).
GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0


class FibonacciCache:
    """Grow-only cache of exact Fibonacci numbers and their float ratios."""

    def __init__(self):
        self._values = [1, 1]
        self._lock = threading.Lock()

    def _ensure(self, n: int) -> None:
        if n < len(self._values):
            return
        with self._lock:
            while n >= len(self._values):
                self._values.append(self._values[-1] + self._values[-2])

    def value(self, n: int) -> int:
        if n < 0:
            raise ValueError(f"index must be >= 0, got {n}")
        self._ensure(n)
        return self._values[n]

    def ratio(self, k: int) -> float:
        """f(k) / f(k+1), correctly rounded; lies in (0, 1]."""
        self._ensure(k + 1)
        return self._values[k] / self._values[k + 1]

    def inverse_ratio(self, k: int) -> float:
        """f(k+1) / f(k), correctly rounded; lies in [1, 2]."""
        self._ensure(k + 1)
        return self._values[k + 1] / self._values[k]

    def ratio_exact(self, k: int) -> Fraction:
        self._ensure(k + 1)
        return Fraction(self._values[k], self._values[k + 1])


_CACHE = FibonacciCache()


def fib(n: int, cache: Optional[FibonacciCache] = None) -> int:
    """Exact n-th Fibonacci number under the f(0) = f(1) = 1 convention."""
    return (cache or _CACHE).value(n)


def fib_ratio(k: int, cache: Optional[FibonacciCache] = None) -> float:
    return (cache or _CACHE).ratio(k)


def fib_inverse_ratio(k: int, cache: Optional[FibonacciCache] = None) -> float:
    return (cache or _CACHE).inverse_ratio(k)


def cassini(n: int, cache: Optional[FibonacciCache] = None) -> int:
    """f(n-1) f(n+1) - f(n)**2, which equals (-1)**(n+1) for n >= 1.

    The substituted form f(n-1)**2 + f(n) f(n-1) - f(n)**2 is recomputed
    and compared; the recurrence makes the two agree identically.
    """
    if n < 1:
        raise ValueError(f"index must be >= 1, got {n}")
    c = cache or _CACHE
    a, b, d = c.value(n - 1), c.value(n), c.value(n + 1)
    primary = a * d - b * b
    substituted = a * a + b * a - b * b
    if primary != substituted:
        raise AssertionError(f"identity forms disagree at n={n}")
    return primary


def fib_partial_sum(n: int, cache: Optional[FibonacciCache] = None) -> int:
    """Sum of f(0)..f(n); equals f(n+2) - 1."""
    c = cache or _CACHE
    c._ensure(n + 2)
    return sum(c.value(k) for k in range(n + 1))


def identity_report(n_max: int, cache: Optional[FibonacciCache] = None) -> dict:
    """Exact-integer status of the product and sum identities up to n_max."""
    c = cache or _CACHE
    cassini_ok = all(cassini(n, c) == (-1) ** (n + 1) for n in range(1, n_max + 1))
    sum_ok = all(
        fib_partial_sum(n, c) == c.value(n + 2) - 1 for n in range(n_max + 1)
    )
    return {"n_max": n_max, "cassini_ok": cassini_ok, "sum_ok": sum_ok}


def difference_entry(n: int, k: int, cache: Optional[FibonacciCache] = None) -> float:
    """Entry (n, k) of the banded Fibonacci difference matrix."""
    if n < 0 or k < 0:
        raise ValueError("indices must be >= 0")
    c = cache or _CACHE
    if k == n - 1:
        return -c.inverse_ratio(n)
    if k == n:
        return c.ratio(n)
    return 0.0


def difference_transform_log(
    u: Sequence[float], cache: Optional[FibonacciCache] = None
) -> list:
    """Apply the difference matrix to a real (log-domain) sequence.

    y(0) = (f(0)/f(1)) u(0); y(n) = (f(n)/f(n+1)) u(n) - (f(n+1)/f(n)) u(n-1).
    Length is preserved.
    """
    c = cache or _CACHE
    u = [float(v) for v in u]
    if not u:
        return []
    out = [c.ratio(0) * u[0]]
    for n in range(1, len(u)):
        out.append(c.ratio(n) * u[n] - c.inverse_ratio(n) * u[n - 1])
    return out


def difference_transform(
    x: GeoSequence, cache: Optional[FibonacciCache] = None
) -> GeoSequence:
    """Apply the difference matrix to a geometric sequence.

    Term n is (f(n)/f(n+1)) |> x(n)  geo-minus  (f(n+1)/f(n)) |> x(n-1),
    with the scalar action |> of :func:`geoseq.geometric.gscale`.  The
    result agrees with the log-domain transform of the log-view; when a
    representative leaves double range the log route is used, and the
    returned sequence reports that through ``in_value_range``.
    """
    c = cache or _CACHE
    n = len(x)
    if n == 0:
        return GeoSequence(())
    terms = [gscale(c.ratio(0), x[0])]
    for k in range(1, n):
        terms.append(gsub(gscale(c.ratio(k), x[k]), gscale(c.inverse_ratio(k), x[k - 1])))
    return GeoSequence(terms)


def kernel_log_sequence(n_terms: int, cache: Optional[FibonacciCache] = None) -> list:
    """Log-views u(k) = f(k+1)**2, the non-trivial kernel of the transform.

    Exact telescoping, u(k) = u(k-1) * (f(k+1)/f(k))**2, makes every
    transformed term vanish for k >= 1 while u itself is far from the
    constant-one sequence: the standard witness that the windowed
    paranorm is not total.
    """
    c = cache or _CACHE
    return [float(c.value(k + 1) ** 2) for k in range(n_terms)]

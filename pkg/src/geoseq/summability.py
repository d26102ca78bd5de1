"""Windowed summability machinery: means, modulars, membership, paranorm.

Window n covers the integer indices I(n) = [n - lam(n) + 1, n], where the
window-generating sequence lam is non-decreasing, starts at lam(1) = 1,
grows by at most 1 per step and tends to infinity.  Because lam(n) <= n
always, windows only ever contain indices k >= 1.

Indexing convention (load-bearing, used consistently everywhere):

* The *windowed view* z of a geometric sequence x is 1-indexed: window
  index k refers to ``z[k-1]`` in storage.
* With ``transform="identity"`` the windowed view is the whole log-view
  of x, so the first stored term is z(1).
* With ``transform="fhat"`` the windowed view consists of the banded
  difference transform's rows 1, 2, ... of the 0-indexed x; row 0 is the
  boundary row of the matrix and is never windowed.  That is exactly why
  the transform's kernel (which is non-constant but has vanishing rows
  beyond the boundary) receives paranorm 0: the witness that the
  paranorm is not total.

All geometric conditions are evaluated classically through the log-view:
the geometric scale rho > 1 becomes the classical scale r = ln rho > 0
(the ``rho`` field below is already the classical value), geometric
convergence to 1 becomes convergence to 0, and the threshold "<= e"
becomes "<= 1".
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Optional, Sequence

from .fibonacci import difference_transform_log
from .geometric import GEO_ZERO, GeoScalar, GeoSequence
from .orlicz import OrliczFunction

__all__ = [
    "LambdaSequence",
    "Exponents",
    "SpaceSpec",
    "Tolerances",
    "MembershipReport",
    "ParanormResult",
    "window",
    "vp_mean",
    "windowed_logs",
    "modular_mean",
    "modular_window",
    "window_trace",
    "classify_membership",
    "paranorm",
    "CONVERGING",
    "BOUNDED",
    "DIVERGING",
    "INCONCLUSIVE",
]

CONVERGING = "converging"
BOUNDED = "bounded"
DIVERGING = "diverging"
INCONCLUSIVE = "inconclusive"

# trend threshold for the empirical verdicts (desk-scale heuristic)
_FLAT_SLOPE = -0.05


class LambdaSequence:
    """The window-generating sequence lam(1), lam(2), ...

    Built-in kinds are lazy formulas valid for every n; ``custom`` wraps
    an explicit list validated against the admissibility invariants:
    lam(1) = 1, non-decreasing, lam(n+1) <= lam(n) + 1, and growth on the
    truncation (lam(N) >= lam(N/2) + 1).  Non-integer values are allowed;
    windows are the integer lattice inside [n - lam(n) + 1, n].
    """

    def __init__(self, kind: str, values: Optional[Sequence[float]] = None):
        if kind not in ("identity", "half", "sqrt", "custom"):
            raise ValueError(f"unknown lambda kind {kind!r}")
        self.kind = kind
        self.values = None
        if kind == "custom":
            if values is None:
                raise ValueError("custom lambda needs explicit values")
            vals = [float(v) for v in values]
            self._validate(vals)
            self.values = tuple(vals)
        elif values is not None:
            raise ValueError("built-in lambda kinds take no explicit values")

    @staticmethod
    def _validate(vals: Sequence[float]) -> None:
        n = len(vals)
        if n == 0:
            raise ValueError("lambda sequence must be nonempty")
        if abs(vals[0] - 1.0) > 1e-12:
            raise ValueError(f"lambda must start at 1, got {vals[0]!r}")
        for i in range(n - 1):
            if vals[i + 1] < vals[i] - 1e-12:
                raise ValueError(f"lambda must be non-decreasing (index {i + 2})")
            if vals[i + 1] > vals[i] + 1.0 + 1e-12:
                raise ValueError(
                    f"lambda may grow by at most 1 per step (index {i + 2})"
                )
        if any(v <= 0 for v in vals):
            raise ValueError("lambda values must be positive")
        if n >= 4 and vals[n - 1] < vals[n // 2 - 1] + 1.0 - 1e-9:
            raise ValueError("lambda must keep growing on the truncation")

    @classmethod
    def identity(cls) -> "LambdaSequence":
        return cls("identity")

    @classmethod
    def half(cls) -> "LambdaSequence":
        return cls("half")

    @classmethod
    def sqrt(cls) -> "LambdaSequence":
        return cls("sqrt")

    @classmethod
    def custom(cls, values: Sequence[float]) -> "LambdaSequence":
        return cls("custom", values)

    def at(self, n: int) -> float:
        """lam(n) for window index n >= 1."""
        if n < 1:
            raise ValueError(f"window index must be >= 1, got {n}")
        if self.kind == "identity":
            return float(n)
        if self.kind == "half":
            return float((n + 1) // 2)
        if self.kind == "sqrt":
            return float(math.isqrt(n - 1) + 1)  # ceil(sqrt(n)), exact
        if n > len(self.values):
            raise ValueError(
                f"window index {n} beyond custom lambda of length {len(self.values)}"
            )
        return self.values[n - 1]

    def window(self, n: int) -> range:
        """I(n) = integer k with n - lam(n) + 1 <= k <= n (and k >= 0)."""
        lam_n = self.at(n)
        lo = max(0, math.ceil(n - lam_n + 1.0 - 1e-12))
        return range(lo, n + 1)

    def describe(self) -> dict:
        d = {"kind": self.kind}
        if self.values is not None:
            d["values"] = list(self.values)
        return d

    @classmethod
    def from_config(cls, cfg: dict) -> "LambdaSequence":
        kind = cfg.get("kind")
        if kind == "custom":
            return cls.custom(cfg["values"])
        return cls(kind)


def window(n: int, lam: LambdaSequence) -> range:
    """Module-level convenience for :meth:`LambdaSequence.window`."""
    return lam.window(n)


def vp_mean(x: Sequence[float], n: int, lam: LambdaSequence) -> float:
    """Windowed mean (1/lam(n)) * sum of x over I(n).

    The input list is 1-indexed data: ``x[0]`` holds the term with index
    1, matching the classical convention that windowed sums start at 1.
    """
    if n < 1 or n > len(x):
        raise ValueError(f"window index {n} out of range for {len(x)} terms")
    ks = lam.window(n)
    return math.fsum(float(x[k - 1]) for k in ks) / lam.at(n)


class Exponents:
    """The strictly positive, bounded exponent sequence p(1), p(2), ...

    ``H`` is max(1, sup p) and ``B`` is max(1, 2**(H-1)); both use the
    analytic supremum of the chosen kind, not a truncation maximum.
    """

    def __init__(
        self,
        kind: str,
        value: Optional[float] = None,
        values: Optional[Sequence[float]] = None,
        c: Optional[float] = None,
        d: Optional[float] = None,
    ):
        self.kind = kind
        self.value = None
        self.values = None
        self.c = None
        self.d = None
        if kind == "constant":
            v = float(value)
            if not math.isfinite(v) or v <= 0:
                raise ValueError(f"constant exponent must be positive, got {value!r}")
            self.value = v
        elif kind == "list":
            vals = tuple(float(v) for v in values)
            if not vals:
                raise ValueError("exponent list must be nonempty")
            if any((not math.isfinite(v)) or v <= 0 for v in vals):
                raise ValueError("exponents must be positive and finite")
            self.values = vals
        elif kind == "formula":
            # p(k) = c + d/k
            self.c = float(c)
            self.d = float(d)
            if not (math.isfinite(self.c) and math.isfinite(self.d)):
                raise ValueError("formula coefficients must be finite")
            if self.c <= 0 or self.c + self.d <= 0:
                raise ValueError("formula exponents must stay positive")
        else:
            raise ValueError(f"unknown exponent kind {kind!r}")

    @classmethod
    def constant(cls, value: float) -> "Exponents":
        return cls("constant", value=value)

    @classmethod
    def from_list(cls, values: Sequence[float]) -> "Exponents":
        return cls("list", values=values)

    @classmethod
    def formula(cls, c: float, d: float) -> "Exponents":
        return cls("formula", c=c, d=d)

    def at(self, k: int) -> float:
        if k < 1:
            raise ValueError(f"exponent index must be >= 1, got {k}")
        if self.kind == "constant":
            return self.value
        if self.kind == "formula":
            return self.c + self.d / k
        if k > len(self.values):
            raise ValueError(
                f"exponent index {k} beyond list of length {len(self.values)}"
            )
        return self.values[k - 1]

    @property
    def sup(self) -> float:
        if self.kind == "constant":
            return self.value
        if self.kind == "formula":
            return max(self.c, self.c + self.d)
        return max(self.values)

    @property
    def inf(self) -> float:
        if self.kind == "constant":
            return self.value
        if self.kind == "formula":
            return min(self.c, self.c + self.d)
        return min(self.values)

    @property
    def H(self) -> float:
        return max(1.0, self.sup)

    @property
    def B(self) -> float:
        return max(1.0, 2.0 ** (self.H - 1.0))

    def describe(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "value": self.value}
        if self.kind == "formula":
            return {"kind": "formula", "c": self.c, "d": self.d}
        return {"kind": "list", "values": list(self.values)}

    @classmethod
    def from_config(cls, cfg: dict) -> "Exponents":
        kind = cfg.get("kind")
        if kind == "constant":
            return cls.constant(cfg["value"])
        if kind == "list":
            return cls.from_list(cfg["values"])
        if kind == "formula":
            return cls.formula(cfg["c"], cfg["d"])
        raise ValueError(f"unknown exponent kind {kind!r}")


_VARIANTS = ("zero", "limit", "bounded")
_TRANSFORMS = ("identity", "fhat")


@dataclass(frozen=True)
class SpaceSpec:
    """Parameterisation of one windowed modular sequence space.

    ``rho`` is the classical denominator scale, i.e. the logarithm of the
    geometric scale (which the space definitions require to exceed 1), so
    it must be positive.
    """

    lam: LambdaSequence
    orlicz: OrliczFunction
    exponents: Exponents
    variant: str = "zero"
    transform: str = "fhat"
    rho: float = 1.0

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise ValueError(f"variant must be one of {_VARIANTS}, got {self.variant!r}")
        if self.transform not in _TRANSFORMS:
            raise ValueError(
                f"transform must be one of {_TRANSFORMS}, got {self.transform!r}"
            )
        if not (math.isfinite(self.rho) and self.rho > 0):
            raise ValueError(f"rho must be a positive classical scale, got {self.rho!r}")

    def describe(self) -> dict:
        return {
            "lambda": self.lam.describe(),
            "orlicz": self.orlicz.describe(),
            "exponents": self.exponents.describe(),
            "variant": self.variant,
            "transform": self.transform,
            "rho": self.rho,
        }


@dataclass(frozen=True)
class Tolerances:
    """Decision knobs for the empirical verdicts."""

    tol: float = 1e-6
    window_count: int = 10
    bound_cap: float = 1e9

    def describe(self) -> dict:
        return {
            "tol": self.tol,
            "window_count": self.window_count,
            "bound_cap": self.bound_cap,
        }


@dataclass
class MembershipReport:
    """Empirical verdict for one truncation.

    A truncation can never prove membership; the full window trace is
    returned so callers can judge the evidence themselves.
    """

    verdict: str
    window_values: list
    lambda_values: list
    tail_slope: float
    params_used: dict
    limit_estimate: Optional[GeoScalar] = None
    reason: Optional[str] = None


@dataclass(frozen=True)
class ParanormResult:
    """Scale infimum and paranorm value at truncation scale.

    ``g_geo`` is the geometric value e**g; it is None when no admissible
    scale exists below the search cap (infinite paranorm marker,
    ``math.isinf(g)``).
    """

    rho_star: float
    g: float
    g_geo: Optional[GeoScalar]


def windowed_logs(x: GeoSequence, transform: str) -> list:
    """The 1-indexed windowed view of x under the chosen transform.

    identity: the whole log-view (first stored term is z(1));
    fhat: rows 1.. of the banded difference transform (boundary row 0
    excluded -- windows can never reach it).
    """
    if transform == "identity":
        return x.to_log()
    if transform == "fhat":
        return difference_transform_log(x.to_log())[1:]
    raise ValueError(f"unknown transform {transform!r}")


def _pow_sat(base: float, exponent: float) -> float:
    try:
        return base ** exponent
    except OverflowError:
        return math.inf


def modular_mean(
    z: Sequence[float],
    lam: LambdaSequence,
    orlicz: OrliczFunction,
    exponents: Exponents,
    scale: float,
    n: int,
    center: float = 0.0,
) -> float:
    """(1/lam(n)) * sum over I(n) of [M(|z_k - center| / scale)]**p_k.

    ``z`` is the 1-indexed windowed view (``z[k-1]`` is term k); the
    summation order over the window is fixed ascending, so results are
    reproducible bit for bit.
    """
    if n < 1 or n > len(z):
        raise ValueError(f"window index {n} out of range for {len(z)} terms")
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale!r}")
    total = 0.0
    for k in lam.window(n):
        t = abs(z[k - 1] - center) / scale
        total += _pow_sat(orlicz.eval(t), exponents.at(k))
    return total / lam.at(n)


def modular_window(
    x: GeoSequence, spec: SpaceSpec, n: int, ell: Optional[GeoScalar] = None
) -> float:
    """Windowed modular S(n) of x under spec; the geometric value is e**S(n).

    ``ell`` is honoured only for the "limit" variant (the other variants
    measure distance from the geometric zero 1).
    """
    center = ell.log if (spec.variant == "limit" and ell is not None) else 0.0
    z = windowed_logs(x, spec.transform)
    return modular_mean(z, spec.lam, spec.orlicz, spec.exponents, spec.rho, n, center)


def window_trace(
    x: GeoSequence, spec: SpaceSpec, ell: Optional[GeoScalar] = None
) -> list:
    """S(n) for every computable window n = 1..len(windowed view)."""
    z = windowed_logs(x, spec.transform)
    center = ell.log if (spec.variant == "limit" and ell is not None) else 0.0
    return [
        modular_mean(z, spec.lam, spec.orlicz, spec.exponents, spec.rho, n, center)
        for n in range(1, len(z) + 1)
    ]


def _tail_slope(values: Sequence[float]) -> float:
    """Least-squares slope of log S against log n over the trailing half."""
    m = len(values)
    pts = [
        (math.log(n), math.log(values[n - 1]))
        for n in range(max(1, m // 2), m + 1)
        if values[n - 1] > 0 and math.isfinite(values[n - 1])
    ]
    if len(pts) < 3:
        return 0.0
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    try:
        return statistics.linear_regression(xs, ys).slope
    except statistics.StatisticsError:
        return 0.0


def _decide_vanishing(values: Sequence[float], tols: Tolerances) -> tuple:
    """Verdict for a trace that should tend to zero (or stay bounded)."""
    W = tols.window_count
    last = values[-W:]
    prev = values[-2 * W : -W]
    slope = _tail_slope(values)
    med_last = statistics.median(last)
    med_prev = statistics.median(prev)
    small = all(v <= tols.tol for v in last)
    non_increasing = med_last <= med_prev * 1.1 + 1e-12
    if small and non_increasing:
        return CONVERGING, slope
    if med_last > tols.tol and slope > _FLAT_SLOPE:
        return DIVERGING, slope
    return INCONCLUSIVE, slope


def _estimate_limit(
    z: Sequence[float], spec: SpaceSpec, iters: int = 80
) -> float:
    """Estimated log-limit: tail median refined on the final window.

    The refinement golden-sections the final-window modular, which is
    convex in the center for exponents >= 1.
    """
    m = len(z)
    tail = list(z[-max(1, math.ceil(m / 4)) :])
    center0 = statistics.median(tail)
    span = max(tail) - min(tail)
    if span == 0.0:
        return center0
    lo = center0 - span
    hi = center0 + span

    def h(center: float) -> float:
        return modular_mean(z, spec.lam, spec.orlicz, spec.exponents, spec.rho, m, center)

    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    hc, hd = h(c), h(d)
    for _ in range(iters):
        if hc <= hd:
            b, d, hd = d, c, hc
            c = b - inv_phi * (b - a)
            hc = h(c)
        else:
            a, c, hc = c, d, hd
            d = a + inv_phi * (b - a)
            hd = h(d)
    best = 0.5 * (a + b)
    return best if h(best) <= h(center0) else center0


def classify_membership(
    x: GeoSequence, spec: SpaceSpec, tols: Tolerances = Tolerances()
) -> MembershipReport:
    """Empirical membership verdict for the truncation x under spec.

    zero: converging iff the last W window modulars sit below tol with a
    non-increasing trend; limit: same test on the residual modular around
    the estimated limit; bounded: bounded iff no window exceeds the cap
    and no growth trend shows.  Anything the evidence cannot settle is
    inconclusive.
    """
    z = windowed_logs(x, spec.transform)
    m = len(z)
    params = {
        "spec": spec.describe(),
        "tolerances": tols.describe(),
        "windows": m,
    }
    if m < 4 * tols.window_count:
        return MembershipReport(
            verdict=INCONCLUSIVE,
            window_values=[],
            lambda_values=[],
            tail_slope=0.0,
            params_used=params,
            reason=(
                f"truncation too short: {m} windows < 4 * window_count"
                f" = {4 * tols.window_count}"
            ),
        )
    lam_values = [spec.lam.at(n) for n in range(1, m + 1)]

    ell = None
    center = 0.0
    if spec.variant == "limit":
        center = _estimate_limit(z, spec)
        ell = GeoScalar.from_log(center)

    values = [
        modular_mean(z, spec.lam, spec.orlicz, spec.exponents, spec.rho, n, center)
        for n in range(1, m + 1)
    ]

    if spec.variant == "bounded":
        slope = _tail_slope(values)
        peak = max(values)
        # growth test robust to the noise of a stabilising trace: the
        # last quarter of windows must not sit well above the second
        q2 = statistics.median(values[m // 4 : m // 2])
        q4 = statistics.median(values[3 * m // 4 :])
        growing = q4 > 1.5 * q2 + 1e-12
        if peak < tols.bound_cap and not growing:
            verdict = BOUNDED
        else:
            verdict = DIVERGING
    else:
        verdict, slope = _decide_vanishing(values, tols)

    return MembershipReport(
        verdict=verdict,
        window_values=values,
        lambda_values=lam_values,
        tail_slope=slope,
        params_used=params,
        limit_estimate=ell,
    )


def paranorm(
    x: GeoSequence,
    spec: SpaceSpec,
    rel_tol: float = 1e-11,
    max_iter: int = 200,
) -> ParanormResult:
    """Luxemburg-style paranorm of the vanishing-variant space.

    rho_star = inf{r > 0 : sup_n (S_n(r))**(1/H) <= 1} over the windows
    computable on the truncation, found by bisection (the constraint is
    non-increasing in r, asserted at every probe); g = rho_star**(pbar/H)
    with pbar = inf p; g_geo = e**g.  The zero sequence gets g = 0.
    """
    if spec.variant != "zero":
        raise ValueError("paranorm is defined on the vanishing variant")
    z = windowed_logs(x, spec.transform)
    m = len(z)
    H = spec.exponents.H
    p_bar = spec.exponents.inf

    if m == 0 or max(abs(v) for v in z) == 0.0:
        return ParanormResult(rho_star=0.0, g=0.0, g_geo=GEO_ZERO)

    def sup_constraint(r: float) -> float:
        worst = 0.0
        for n in range(1, m + 1):
            s = modular_mean(z, spec.lam, spec.orlicz, spec.exponents, r, n)
            s = _pow_sat(s, 1.0 / H)
            if s > worst:
                worst = s
                if math.isinf(worst):
                    break
        return worst

    def check_monotone(r_small_val: float, r_large_val: float) -> None:
        slack = 1e-12 * max(1.0, abs(r_large_val))
        if math.isfinite(r_large_val) and not math.isinf(r_small_val):
            assert r_small_val >= r_large_val - slack, (
                f"paranorm constraint increased with the scale: "
                f"{r_small_val} -> {r_large_val}"
            )

    hi = 1.0
    c_hi = sup_constraint(hi)
    for _ in range(max_iter):
        if c_hi <= 1.0:
            break
        prev = c_hi
        hi *= 2.0
        c_hi = sup_constraint(hi)
        check_monotone(prev, c_hi)
    else:
        return ParanormResult(rho_star=math.inf, g=math.inf, g_geo=None)

    lo = hi
    c_lo = c_hi
    while c_lo <= 1.0:
        if lo < 1e-300:
            return ParanormResult(rho_star=0.0, g=0.0, g_geo=GEO_ZERO)
        prev = c_lo
        lo *= 0.5
        c_lo = sup_constraint(lo)
        check_monotone(c_lo, prev)

    for _ in range(max_iter):
        if hi - lo <= rel_tol * hi:
            break
        mid = 0.5 * (lo + hi)
        c_mid = sup_constraint(mid)
        check_monotone(c_lo, c_mid)
        check_monotone(c_mid, c_hi)
        if c_mid <= 1.0:
            hi, c_hi = mid, c_mid
        else:
            lo, c_lo = mid, c_mid

    g = hi ** (p_bar / H)
    return ParanormResult(rho_star=hi, g=g, g_geo=GeoScalar.from_log(g))

"""Randomised verification of the space inclusions and modular inequalities.

Members of the windowed modular spaces are manufactured by prescribing
the transformed profile on the windowed indices and inverting the banded
relation in its contractive direction (from the last index backwards,
each step multiplies by ratio**2 < 0.41), so reconstruction is stable at
any length and the forward transform reproduces the prescription to
rounding error.  The boundary row is implied and never windowed.

Each check verifies a finite, exact-given-arithmetic inequality on every
window of every generated instance, plus an end-to-end membership
consequence where the claim has one.  All randomness flows from a single
seed through named per-trial substreams, so two runs of the same
configuration produce identical reports.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from .fibonacci import fib
from .geometric import GeoScalar, GeoSequence
from .orlicz import Delta2Report, OrliczFunction, delta2_constant, small_argument_threshold
from .statconv import modular_density_bound, stat_converges, stat_density
from .summability import (
    CONVERGING,
    Exponents,
    LambdaSequence,
    SpaceSpec,
    Tolerances,
    classify_membership,
    modular_mean,
    windowed_logs,
)

__all__ = [
    "TrialConfig",
    "MemberSample",
    "CheckOutcome",
    "SuiteCheck",
    "SuiteReport",
    "generate_member",
    "check_linear_combination",
    "check_solidity",
    "check_delta2_inclusion",
    "check_exponent_inclusion",
    "run_suite",
]


def _default_spec() -> SpaceSpec:
    return SpaceSpec(
        lam=LambdaSequence.half(),
        orlicz=OrliczFunction.power(2.0),
        exponents=Exponents.constant(1.0),
        variant="zero",
        transform="fhat",
        rho=1.0,
    )


@dataclass(frozen=True)
class TrialConfig:
    """Reproducible parameterisation of one suite run."""

    seed: int = 42
    trials: int = 100
    length: int = 56
    spec: SpaceSpec = field(default_factory=_default_spec)
    slack: float = 1e-12
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        if self.trials < 0:
            raise ValueError("trials must be >= 0")
        if self.length < 8:
            raise ValueError("length must be >= 8")
        if self.slack <= 0:
            raise ValueError("slack must be positive")

    def describe(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "length": self.length,
            "spec": self.spec.describe(),
            "slack": self.slack,
            "tolerances": self.tolerances.describe(),
        }


def _rng(seed, check: str, trial: int) -> random.Random:
    # documented substream rule: one generator per (seed, check, trial)
    return random.Random(f"{seed}:{check}:{trial}")


@dataclass(frozen=True)
class MemberSample:
    """A generated member plus the profile it was built to realise."""

    sequence: GeoSequence
    target: tuple  # prescribed windowed view, index k stored at [k-1]
    ell: Optional[GeoScalar]


def _reconstruct_logs(target: Sequence[float], transform: str, anchor: float) -> list:
    """Log-view whose windowed view under ``transform`` equals ``target``."""
    if transform == "identity":
        return list(target)
    m = len(target)
    n_terms = m + 1
    u = [0.0] * n_terms
    u[n_terms - 1] = anchor
    for k in range(n_terms - 1, 0, -1):
        r_k = fib(k) / fib(k + 1)
        # solve target[k-1] = r_k u[k] - u[k-1]/r_k for u[k-1]
        u[k - 1] = r_k * (r_k * u[k] - target[k - 1])
    return u


def generate_member(
    spec: SpaceSpec, seed, length: int, check: str = "member", trial: int = 0
) -> MemberSample:
    """Draw a member of the spec's space at the given truncation length.

    The windowed profile is prescribed to match the variant (vanishing:
    geometric decay; limit: a level plus decay; bounded: uniform noise)
    and the stored sequence realises it to within 1e-10.
    """
    rng = _rng(seed, check, trial)
    m = length if spec.transform == "identity" else length - 1
    if m < 1:
        raise ValueError("length too short for the chosen transform")

    ell = None
    amp = rng.uniform(0.5, 1.5)
    decay = rng.uniform(0.35, 0.55)
    if spec.variant == "bounded":
        target = [rng.uniform(-3.0, 3.0) for _ in range(m)]
    else:
        level = 0.0
        if spec.variant == "limit":
            level = rng.uniform(-2.0, 2.0)
            ell = GeoScalar.from_log(level)
        target = [
            level + rng.choice((-1.0, 1.0)) * amp * decay ** k
            for k in range(1, m + 1)
        ]

    anchor = rng.uniform(-0.5, 0.5)
    u = _reconstruct_logs(target, spec.transform, anchor)
    seq = GeoSequence.from_log(u)

    realised = windowed_logs(seq, spec.transform)
    scale = max(1.0, max(abs(t) for t in target))
    worst = max(abs(a - b) for a, b in zip(realised, target))
    if worst > 1e-10 * scale:
        raise ArithmeticError(
            f"member reconstruction drifted: {worst:.3e} on scale {scale:.3e}"
        )
    return MemberSample(sequence=seq, target=tuple(target), ell=ell)


@dataclass
class CheckOutcome:
    """Result of one inequality check over all windows of one instance."""

    name: str
    passed: bool
    worst_violation: float
    detail: Optional[str] = None


def check_linear_combination(
    x: GeoSequence,
    y: GeoSequence,
    a: float,
    b: float,
    spec: SpaceSpec,
    rho1: float,
    rho2: float,
    slack: float = 1e-12,
) -> CheckOutcome:
    """Windowed modular bound for the scaled geometric combination.

    With combined scale rho3 = max(2|a| rho1, 2|b| rho2), every window
    satisfies  S(a|>x (+) b|>y; rho3) <= B [S(x; rho1) + S(y; rho2)]
    where B = max(1, 2**(H-1)); convexity and monotonicity of M give the
    per-term estimate, and B >= 1 absorbs the exponent split.
    """
    if rho1 <= 0 or rho2 <= 0:
        raise ValueError("component scales must be positive")
    zx = windowed_logs(x, spec.transform)
    zy = windowed_logs(y, spec.transform)
    if len(zx) != len(zy):
        raise ValueError("sequences must share a truncation length")
    z3 = [a * p + b * q for p, q in zip(zx, zy)]
    rho3 = max(2.0 * abs(a) * rho1, 2.0 * abs(b) * rho2)
    B = spec.exponents.B
    worst = 0.0
    m = len(zx)
    for n in range(1, m + 1):
        if rho3 == 0.0:
            lhs = 0.0  # both scalars vanish: the combination is the geometric zero
        else:
            lhs = modular_mean(z3, spec.lam, spec.orlicz, spec.exponents, rho3, n)
        s1 = modular_mean(zx, spec.lam, spec.orlicz, spec.exponents, rho1, n)
        s2 = modular_mean(zy, spec.lam, spec.orlicz, spec.exponents, rho2, n)
        rhs = B * (s1 + s2)
        violation = lhs - rhs
        margin = slack * max(1.0, abs(rhs))
        if violation > worst:
            worst = violation
        if violation > margin:
            return CheckOutcome(
                "linear_combination",
                False,
                worst,
                f"window {n}: {lhs} > {rhs}",
            )
    return CheckOutcome("linear_combination", True, worst)


def check_solidity(
    y_member: GeoSequence,
    alphas: Sequence[GeoScalar],
    spec: SpaceSpec,
    slack: float = 1e-12,
) -> CheckOutcome:
    """Scalar damping never increases the windowed modular.

    ``y_member`` is an element of the windowed space itself (identity
    view); the scalars must satisfy |ln alpha_k| <= 1, i.e. geometric
    magnitude at most e.  Masks of 0/1 log-views exercise the monotone
    (step-space) consequence.
    """
    z = list(y_member.logs)
    if len(alphas) != len(z):
        raise ValueError("need one scalar per term")
    a = []
    for i, alpha in enumerate(alphas):
        if abs(alpha.log) > 1.0 + 1e-15:
            raise ValueError(
                f"scalar {i}: geometric magnitude exceeds e (|log| = {abs(alpha.log)})"
            )
        a.append(alpha.log)
    scaled = [ai * zi for ai, zi in zip(a, z)]
    worst = 0.0
    for n in range(1, len(z) + 1):
        lhs = modular_mean(scaled, spec.lam, spec.orlicz, spec.exponents, spec.rho, n)
        rhs = modular_mean(z, spec.lam, spec.orlicz, spec.exponents, spec.rho, n)
        violation = lhs - rhs
        if violation > worst:
            worst = violation
        if violation > slack * max(1.0, abs(rhs)):
            return CheckOutcome("solidity", False, worst, f"window {n}: {lhs} > {rhs}")
    return CheckOutcome("solidity", True, worst)


def check_delta2_inclusion(
    x: GeoSequence,
    orlicz: OrliczFunction,
    spec: SpaceSpec,
    delta: float,
    epsilon: float,
    ell: Optional[GeoScalar] = None,
    delta2: Optional[Delta2Report] = None,
    tols: Tolerances = Tolerances(),
    slack: float = 1e-12,
) -> CheckOutcome:
    """Raw windowed summability dominates the Orlicz-modular one.

    Requires M to satisfy the doubling condition (refused otherwise).
    With t_k = |z_k - ln(ell)| / rho and delta chosen so M(t) <= epsilon
    for t <= delta, every window satisfies
        mean M(t_k)  <=  epsilon + K M(2) delta**-1 * mean t_k,
    K the doubling constant.  End to end, a truncation that converges in
    the raw sense must converge in the M-modular sense.
    """
    if delta2 is None:
        delta2 = delta2_constant(orlicz)
    if not delta2.satisfied:
        return CheckOutcome(
            "delta2_inclusion",
            False,
            math.inf,
            "refused: the Orlicz function fails the doubling condition",
        )
    if not (0.0 < delta < 1.0):
        raise ValueError("delta must lie in (0, 1)")
    if orlicz.eval(delta) > epsilon + 1e-15:
        raise ValueError("delta too large: M(delta) exceeds epsilon")

    center = ell.log if ell is not None else 0.0
    z = windowed_logs(x, spec.transform)
    unit = Exponents.constant(1.0)
    raw = OrliczFunction.power(1.0)
    K = delta2.K
    factor = K * orlicz.eval(2.0) / delta
    worst = 0.0
    for n in range(1, len(z) + 1):
        lhs = modular_mean(z, spec.lam, orlicz, unit, spec.rho, n, center)
        s_raw = modular_mean(z, spec.lam, raw, unit, spec.rho, n, center)
        rhs = epsilon + factor * s_raw
        violation = lhs - rhs
        if violation > worst:
            worst = violation
        if violation > slack * max(1.0, abs(rhs)):
            return CheckOutcome(
                "delta2_inclusion", False, worst, f"window {n}: {lhs} > {rhs}"
            )

    variant = spec.variant if spec.variant != "bounded" else "zero"
    raw_spec = replace(spec, orlicz=raw, exponents=unit, variant=variant)
    m_spec = replace(spec, orlicz=orlicz, exponents=unit, variant=variant)
    raw_verdict = classify_membership(x, raw_spec, tols).verdict
    m_verdict = classify_membership(x, m_spec, tols).verdict
    if raw_verdict == CONVERGING and m_verdict != CONVERGING:
        return CheckOutcome(
            "delta2_inclusion",
            False,
            worst,
            f"end-to-end: raw verdict {raw_verdict} but M-modular verdict {m_verdict}",
        )
    return CheckOutcome("delta2_inclusion", True, worst)


def check_exponent_inclusion(
    x: GeoSequence,
    p: Exponents,
    q: Exponents,
    spec: SpaceSpec,
    ell: Optional[GeoScalar] = None,
    tols: Tolerances = Tolerances(),
    slack: float = 1e-12,
) -> CheckOutcome:
    """Larger exponents give the smaller space: q-membership forces p-membership.

    Per window, with t_k = M(|z_k - center|/rho)**q_k and mu_k = p_k/q_k,
    splitting t at 1 gives
        mean t_k**mu_k  <=  mean t_k + (mean v_k)**mu,
    where v_k = t_k when t_k < 1 (else 0) and mu = inf mu_k clipped into
    (0, 1].  End to end, membership under q implies membership under p.
    """
    center = ell.log if ell is not None else 0.0
    z = windowed_logs(x, spec.transform)
    m = len(z)
    mus = [p.at(k) / q.at(k) for k in range(1, m + 1)]
    for k in range(1, m + 1):
        pk, qk = p.at(k), q.at(k)
        if not (0.0 < pk <= qk):
            raise ValueError(f"need 0 < p <= q at every index; index {k}: {pk} > {qk}")
    mu = min(1.0, max(1e-3, min(mus)))

    worst = 0.0
    lam, M, rho = spec.lam, spec.orlicz, spec.rho
    for n in range(1, m + 1):
        lam_n = lam.at(n)
        lhs_sum = 0.0
        t_sum = 0.0
        v_sum = 0.0
        for k in lam.window(n):
            t = M.eval(abs(z[k - 1] - center) / rho) ** q.at(k)
            lhs_sum += t ** mus[k - 1]
            t_sum += t
            if t < 1.0:
                v_sum += t
        lhs = lhs_sum / lam_n
        rhs = t_sum / lam_n + (v_sum / lam_n) ** mu
        violation = lhs - rhs
        if violation > worst:
            worst = violation
        if violation > slack * max(1.0, abs(rhs)):
            return CheckOutcome(
                "exponent_inclusion", False, worst, f"window {n}: {lhs} > {rhs}"
            )

    q_spec = replace(spec, exponents=q)
    p_spec = replace(spec, exponents=p)
    q_verdict = classify_membership(x, q_spec, tols).verdict
    p_verdict = classify_membership(x, p_spec, tols).verdict
    if q_verdict == CONVERGING and p_verdict != CONVERGING:
        return CheckOutcome(
            "exponent_inclusion",
            False,
            worst,
            f"end-to-end: q-verdict {q_verdict} but p-verdict {p_verdict}",
        )
    return CheckOutcome("exponent_inclusion", True, worst)


@dataclass
class SuiteCheck:
    """Aggregate of one named check across all trials."""

    name: str
    trials: int
    failures: int
    worst_violation: float
    skipped: Optional[str] = None
    first_failure: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass
class SuiteReport:
    """Deterministic aggregate of a full suite run."""

    config: dict
    checks: list
    rows: list  # (check, trial, passed, worst_violation)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _p_profiles() -> list:
    return [
        Exponents.constant(1.0),
        Exponents.constant(1.5),
        Exponents.formula(1.0, 1.0),  # mixed: p(k) = 1 + 1/k
    ]


def run_suite(config: TrialConfig) -> SuiteReport:
    """Run every inequality and inclusion check under one seed.

    Individual trial errors are recorded as failures, not raised; an
    unsatisfied doubling condition skips that check with a reason.  Two
    runs of an identical configuration produce identical reports.
    """
    spec = config.spec
    N = config.length
    slack = config.slack
    tols = config.tolerances
    checks: list = []
    rows: list = []

    def run_trials(name: str, fn) -> None:
        failures = 0
        worst = 0.0
        first = None
        for trial in range(config.trials):
            try:
                outcome = fn(trial)
            except Exception as exc:  # collected, not fatal
                failures += 1
                rows.append((name, trial, False, math.inf))
                if first is None:
                    first = f"trial {trial}: {exc}"
                continue
            if outcome.worst_violation > worst:
                worst = outcome.worst_violation
            rows.append((name, trial, outcome.passed, outcome.worst_violation))
            if not outcome.passed:
                failures += 1
                if first is None:
                    first = f"trial {trial}: {outcome.detail}"
        checks.append(SuiteCheck(name, config.trials, failures, worst, None, first))

    profiles = _p_profiles()

    def linear(trial: int) -> CheckOutcome:
        rng = _rng(config.seed, "linear_combination", trial)
        x = GeoSequence.from_log([rng.uniform(-5.0, 5.0) for _ in range(N)])
        y = GeoSequence.from_log([rng.uniform(-5.0, 5.0) for _ in range(N)])
        a = rng.uniform(-3.0, 3.0)
        b = rng.uniform(-3.0, 3.0)
        rho1 = rng.uniform(0.5, 2.0)
        rho2 = rng.uniform(0.5, 2.0)
        p = profiles[trial % len(profiles)]
        return check_linear_combination(
            x, y, a, b, replace(spec, exponents=p), rho1, rho2, slack
        )

    def solidity(trial: int) -> CheckOutcome:
        rng = _rng(config.seed, "solidity", trial)
        sample = generate_member(
            replace(spec, transform="identity", variant="zero"),
            config.seed,
            N,
            "solidity_member",
            trial,
        )
        n_terms = len(sample.sequence)
        if trial % 2 == 0:
            alphas = [
                GeoScalar.from_log(rng.uniform(-1.0, 1.0)) for _ in range(n_terms)
            ]
        else:
            # 0/1 mask in log-view: the step-space (monotone) consequence
            alphas = [
                GeoScalar.from_log(float(rng.randint(0, 1))) for _ in range(n_terms)
            ]
        return check_solidity(
            sample.sequence, alphas, replace(spec, transform="identity"), slack
        )

    def delta2(trial: int) -> CheckOutcome:
        sample = generate_member(
            replace(spec, variant="limit"), config.seed, N, "delta2_member", trial
        )
        eps = 0.1
        delta = small_argument_threshold(spec.orlicz, eps)
        return check_delta2_inclusion(
            sample.sequence,
            spec.orlicz,
            replace(spec, variant="limit"),
            delta,
            eps,
            ell=sample.ell,
            delta2=d2_report,
            tols=tols,
            slack=slack,
        )

    def exponents(trial: int) -> CheckOutcome:
        if trial % 2 == 0:
            p = Exponents.constant(1.0)
            q = Exponents.constant(2.0)
        else:
            p = Exponents.constant(1.0)
            q = Exponents.formula(1.0, 1.0)  # q(k) = p(k) + 1/k
        sample = generate_member(
            replace(spec, exponents=q), config.seed, N, "exponent_member", trial
        )
        return check_exponent_inclusion(
            sample.sequence, p, q, spec, tols=tols, slack=slack
        )

    def density(trial: int) -> CheckOutcome:
        rng = _rng(config.seed, "density_bound", trial)
        x = GeoSequence.from_log([rng.uniform(-3.0, 3.0) for _ in range(N)])
        ell = GeoScalar.from_log(rng.uniform(-1.0, 1.0))
        epsilon = GeoScalar.from_log(rng.uniform(0.1, 2.0))
        worst = 0.0
        m = len(windowed_logs(x, "fhat"))
        for n in range(1, m + 1):
            lhs, rhs = modular_density_bound(x, spec, ell, epsilon, n)
            violation = rhs - lhs
            if violation > worst:
                worst = violation
            if violation > slack * max(1.0, abs(rhs)):
                return CheckOutcome(
                    "density_bound", False, worst, f"window {n}: {lhs} < {rhs}"
                )
        return CheckOutcome("density_bound", True, worst)

    def consistency(trial: int) -> CheckOutcome:
        sample = generate_member(
            replace(spec, variant="limit"), config.seed, N, "consistency_member", trial
        )
        m_spec = replace(spec, variant="limit", exponents=Exponents.constant(1.0))
        report = classify_membership(sample.sequence, m_spec, tols)
        if report.verdict != CONVERGING:
            return CheckOutcome(
                "stat_consistency",
                False,
                math.inf,
                f"generated member classified {report.verdict}",
            )
        for eps_log in (0.1, 1.0, 2.0):
            trace = stat_density(
                sample.sequence,
                spec.lam,
                report.limit_estimate,
                GeoScalar.from_log(eps_log),
            )
            verdict = stat_converges(trace, tols)
            if verdict != CONVERGING:
                return CheckOutcome(
                    "stat_consistency",
                    False,
                    math.inf,
                    f"density verdict {verdict} at ln eps = {eps_log}",
                )
        return CheckOutcome("stat_consistency", True, 0.0)

    run_trials("linear_combination", linear)
    run_trials("solidity", solidity)

    try:
        d2_report = delta2_constant(spec.orlicz)
    except Exception as exc:
        d2_report = None
        checks.append(
            SuiteCheck("delta2_inclusion", 0, 0, 0.0, f"skipped: {exc}", None)
        )
    if d2_report is not None and not d2_report.satisfied:
        checks.append(
            SuiteCheck(
                "delta2_inclusion",
                0,
                0,
                0.0,
                "skipped: the configured Orlicz function fails the doubling condition",
                None,
            )
        )
    elif d2_report is not None:
        run_trials("delta2_inclusion", delta2)

    run_trials("exponent_inclusion", exponents)
    run_trials("density_bound", density)
    run_trials("stat_consistency", consistency)

    return SuiteReport(config=config.describe(), checks=checks, rows=rows)

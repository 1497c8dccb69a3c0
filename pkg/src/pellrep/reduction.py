"""Certified continued fractions and the de Weger reduction toolkit.

Turns a Baker-method bound X0 (astronomically large) into a small bound Y on
the exponent appearing in |Lambda| < c exp(-rho Y), using a convergent p/q of
the continued fraction of theta with q > X0:

  homogeneous   (delta = 0):  Y < (1/rho) log(c (A+2) X0 / |theta2|)
  inhomogeneous (delta != 0): need ||q psi|| > 2 X0 / q for some convergent;
                              then Y < (1/rho) log(q^2 c / (|theta2| X0))

Every partial quotient is certified: a quotient is emitted only when the
floor of the current remainder is unambiguous under the enclosure's error
radius, and expansions restart from scratch at doubled precision otherwise.
The distance-to-nearest-integer test is certified the same way, refining
the psi enclosure instead of guessing when it straddles a tie.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

import gmpy2

from .interval import (
    MAX_PRECISION,
    CertifiedReal,
    InsufficientPrecision,
    float_up,
)

RealSource = Union[CertifiedReal, Fraction, Callable[[int], CertifiedReal]]


class ReductionFailure(RuntimeError):
    """The distance hypothesis failed for every convergent tried."""


def _resolve(source: RealSource, prec: int) -> CertifiedReal:
    if isinstance(source, CertifiedReal):
        return source
    if isinstance(source, Fraction):
        return CertifiedReal.from_fraction(source, prec)
    return source(prec)


def _refinable(source: RealSource) -> bool:
    return not isinstance(source, CertifiedReal)


@dataclass
class ContinuedFraction:
    """Partial quotients and exact convergents of a certified expansion."""

    quotients: list[int]
    convergents: list[tuple[int, int]]  # (p_t, q_t), exact integers
    value: CertifiedReal
    precision: int
    exact: bool = False  # rational input, expansion terminated

    def convergent_above(self, bound: int) -> int:
        """Index of the first convergent with q > bound."""
        for t, (_, q) in enumerate(self.convergents):
            if q > bound:
                return t
        raise ValueError(f"no convergent with denominator above {bound}; "
                         f"expansion has {len(self.convergents)} terms")


def _expand_interval(x: CertifiedReal, depth: Optional[int],
                     q_threshold: Optional[int], extra_terms: int):
    """One expansion attempt at fixed precision; raises InsufficientPrecision
    (annotated with .index) as soon as a quotient cannot be certified."""
    quotients: list[int] = []
    convergents: list[tuple[int, int]] = []
    pm1, pm2 = 1, 0
    qm1, qm2 = 0, 1
    y = x
    past_threshold = -1
    while True:
        try:
            a = y.floor()
        except InsufficientPrecision as exc:
            exc.index = len(quotients)  # type: ignore[attr-defined]
            raise
        quotients.append(a)
        p, q = a * pm1 + pm2, a * qm1 + qm2
        convergents.append((p, q))
        pm2, pm1, qm2, qm1 = pm1, p, qm1, q

        if depth is not None and len(quotients) >= depth:
            break
        if q_threshold is not None and q > q_threshold:
            if past_threshold < 0:
                past_threshold = extra_terms
            if past_threshold == 0:
                break
            past_threshold -= 1
        rem = y - a
        if rem.contains_zero():
            exc = InsufficientPrecision("remainder enclosure touches zero")
            exc.index = len(quotients)  # type: ignore[attr-defined]
            raise exc
        y = 1 / rem
    return quotients, convergents


def _expand_fraction(f: Fraction, depth: Optional[int]):
    """Exact Euclidean expansion of a rational; always terminates."""
    p, q = f.numerator, f.denominator
    quotients: list[int] = []
    convergents: list[tuple[int, int]] = []
    pm1, pm2 = 1, 0
    qm1, qm2 = 0, 1
    while q:
        a, r = divmod(p, q)
        quotients.append(a)
        cp, cq = a * pm1 + pm2, a * qm1 + qm2
        convergents.append((cp, cq))
        pm2, pm1, qm2, qm1 = pm1, cp, qm1, cq
        p, q = q, r
        if depth is not None and len(quotients) >= depth:
            break
    return quotients, convergents


def continued_fraction(source: RealSource, *, depth: Optional[int] = None,
                       q_threshold: Optional[int] = None, extra_terms: int = 0,
                       start_precision: int = 512,
                       max_precision: int = MAX_PRECISION) -> ContinuedFraction:
    """Certified continued fraction of ``source``.

    Stops after ``depth`` quotients, or ``extra_terms`` quotients past the
    first convergent whose denominator exceeds ``q_threshold``.  Ambiguous
    quotients trigger a restart at doubled precision; the restart must
    reproduce every previously certified quotient.
    """
    if depth is None and q_threshold is None:
        raise ValueError("need a stop condition: depth or q_threshold")
    if isinstance(source, Fraction):
        quotients, convergents = _expand_fraction(source, depth)
        value = CertifiedReal.from_fraction(source, start_precision)
        return ContinuedFraction(quotients, convergents, value, start_precision, exact=True)

    prec = start_precision
    certified: list[int] = []
    while True:
        x = _resolve(source, prec)
        try:
            quotients, convergents = _expand_interval(x, depth, q_threshold, extra_terms)
        except InsufficientPrecision as exc:
            idx = getattr(exc, "index", 0)
            partial, _ = _expand_interval(x, idx, None, 0) if idx else ([], [])
            if partial[: len(certified)] != certified[: len(partial)]:
                raise ArithmeticError(
                    "restart disagreed with previously certified quotients")
            certified = max(certified, partial, key=len)
            if prec >= max_precision or not _refinable(source):
                raise
            prec = min(2 * prec, max_precision)
            continue
        if quotients[: len(certified)] != certified:
            raise ArithmeticError("expansion disagreed with certified prefix")
        return ContinuedFraction(quotients, convergents, x, prec)


def convergent_index_bound(x0: int) -> int:
    """Smallest index budget Y0 with q_{Y0} guaranteed past X0:
    Y0 = ceil(-1 + log(1 + X0 sqrt 5) / log phi)."""
    if x0 < 1:
        raise ValueError("X0 must be >= 1")
    from .realalg import phi_interval, sqrt5

    prec = max(128, x0.bit_length() + 64)
    val = ((1 + x0 * sqrt5(prec)).log() / phi_interval(prec).log()) - 1
    return int(gmpy2.ceil(val.hi))


@dataclass
class ReductionOutcome:
    """Resolution of one reduction: which convergent worked and the bound."""

    convergent_index: int
    q: int
    y_bound: float
    advances: int = 0       # convergents where ||q psi|| genuinely failed
    forced_skips: int = 0   # convergents with 2 X0 / q >= 1/2, unusable a priori
    hypothesis_margin: float = 0.0  # certified lower bound of ||q psi|| - 2 X0/q


@dataclass
class ReductionProblem:
    """|Lambda| < c exp(-rho Y) with Y <= max|x_i| <= X0, for the linear form
    delta + x1 theta1 + x2 theta2; theta = -theta1/theta2, psi = delta/theta2.
    ``psi`` is absent in the homogeneous (delta = 0) case."""

    c: Fraction
    rho: Fraction
    theta: RealSource
    x0: int
    psi: Optional[RealSource] = None
    theta2_abs: Optional[RealSource] = None
    label: str = ""
    resolution: Optional[ReductionOutcome] = None

    def __post_init__(self):
        if self.c <= 0 or self.rho <= 0 or self.x0 < 1:
            raise ValueError("c, rho must be positive and X0 >= 1")
        if self.theta2_abs is None:
            raise ValueError("the |theta2| denominator scale is required")


def _y_bound_inhomogeneous(prob: ReductionProblem, q: int, prec: int = 320) -> float:
    theta2 = _resolve(prob.theta2_abs, prec)
    num = CertifiedReal.from_int(q * q, prec) * CertifiedReal.from_fraction(prob.c, prec)
    den = theta2 * prob.x0
    return float_up((num / den).log() / CertifiedReal.from_fraction(prob.rho, prec))


def reduce_homogeneous(prob: ReductionProblem, cf: ContinuedFraction) -> float:
    """Y-bound for the delta = 0 case: (1/rho) log(c (A+2) X0 / |theta2|)
    with A the largest partial quotient a_{t+1} over 0 <= t <= Y0."""
    if prob.psi is not None:
        raise ValueError("homogeneous reduction requires psi to be absent")
    y0 = convergent_index_bound(prob.x0)
    if len(cf.quotients) < y0 + 2:
        raise ValueError(f"expansion too short: need {y0 + 2} quotients, "
                         f"have {len(cf.quotients)}")
    a_max = max(cf.quotients[1: y0 + 2])
    prec = 320
    theta2 = _resolve(prob.theta2_abs, prec)
    num = CertifiedReal.from_fraction(prob.c * (a_max + 2), prec) * prob.x0
    y = float_up((num / theta2).log() / CertifiedReal.from_fraction(prob.rho, prec))
    prob.resolution = ReductionOutcome(y0, cf.convergents[min(y0, len(cf.convergents) - 1)][1], y)
    return y


def reduce_inhomogeneous(prob: ReductionProblem, cf: ContinuedFraction,
                         max_advance: int = 30) -> tuple[int, float]:
    """First convergent q > X0 with certified ||q psi|| > 2 X0 / q, and the
    resulting Y-bound.  Advances through up to ``max_advance`` further
    convergents when the distance hypothesis fails."""
    if prob.psi is None:
        raise ValueError("inhomogeneous reduction requires psi")
    t0 = cf.convergent_above(prob.x0)
    advances = 0
    forced = 0
    for t in range(t0, min(t0 + max_advance + 1, len(cf.convergents))):
        q = cf.convergents[t][1]
        thr_frac = Fraction(2 * prob.x0, q)
        if thr_frac >= Fraction(1, 2):
            forced += 1  # ||.|| <= 1/2 can never beat this threshold
            continue
        prec = q.bit_length() + 96
        while True:
            psi = _resolve(prob.psi, prec)
            try:
                _, dist = (q * psi).nearest_int()
            except InsufficientPrecision:
                if prec >= MAX_PRECISION or not _refinable(prob.psi):
                    raise
                prec = min(2 * prec, MAX_PRECISION)
                continue
            thr = CertifiedReal.from_fraction(thr_frac, prec)
            if dist.certainly_greater(thr):
                margin = float(dist.lo - thr.hi)
                y = _y_bound_inhomogeneous(prob, q)
                prob.resolution = ReductionOutcome(t, q, y, advances, forced, margin)
                return t, y
            if dist.certainly_less(thr):
                advances += 1
                break  # hypothesis genuinely fails here; next convergent
            if prec >= MAX_PRECISION or not _refinable(prob.psi):
                raise InsufficientPrecision(
                    f"||q psi|| vs 2 X0/q ambiguous at precision ceiling (t={t})")
            prec = min(2 * prec, MAX_PRECISION)
    raise ReductionFailure(
        f"hypothesis failed at {advances} usable convergents past index {t0} "
        f"({forced} more were below the 2 X0/q ceiling; "
        f"{prob.label or 'unlabelled problem'})")


def linearization_factor(a: Fraction) -> float:
    """-log(1-a)/a for 0 < a < 1: converts |e^x - 1| bounds to |x| bounds."""
    a = Fraction(a)
    if not 0 < a < 1:
        raise ValueError("a must lie in (0, 1)")
    prec = 192
    av = CertifiedReal.from_fraction(a, prec)
    return float_up(-(1 - av).log() / av)

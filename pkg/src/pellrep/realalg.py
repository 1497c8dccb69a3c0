"""Certified algebra around the dominant root of x^k - 2x^{k-1} - ... - x - 1.

The characteristic polynomial of the order-k Pell-Lucas recurrence has a
single real root gamma(k) outside the unit circle, squeezed inside
(phi^2 (1 - phi^-k), phi^2) where phi is the golden ratio.  This module
isolates that root with exact dyadic bisection followed by interval Newton
refinement, evaluates the Binet weight

    g_k(z) = (z - 1) / ((k+1) z^2 - 3k z + k - 1),

and certifies the growth and approximation estimates the bound chains rely
on.  Everything returns :class:`~pellrep.interval.CertifiedReal` enclosures;
a failed certification raises ``InsufficientPrecision`` so callers can climb
the precision ladder.

gamma(k) hugs phi^2 to within about phi^(2-2k), so certifying the bracket
needs roughly 1.4*k bits; the working precision scales accordingly.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpz

from .interval import (
    DEFAULT_PRECISION,
    MAX_PRECISION,
    CertifiedReal,
    InsufficientPrecision,
    refine,
)

_GAMMA_CACHE_VERSION = f"pellrep-gamma-cache 1 mpfr={gmpy2.mpfr_version()}"


def sqrt5(prec: int) -> CertifiedReal:
    return CertifiedReal.from_int(5, prec).sqrt()


def phi_interval(prec: int) -> CertifiedReal:
    """Golden ratio (1 + sqrt 5)/2 as an enclosure."""
    return (sqrt5(prec) + 1) / 2


def phi_half_power(j: int, prec: int) -> CertifiedReal:
    """phi^(j/2) for a nonnegative integer j."""
    if j < 0:
        raise ValueError("negative half-power")
    p = phi_interval(prec)
    out = p.powi(j // 2)
    if j % 2:
        out = out * p.sqrt()
    return out


def char_poly(k: int, x: CertifiedReal) -> CertifiedReal:
    """Enclosure of x^k - 2x^{k-1} - x^{k-2} - ... - x - 1, by Horner."""
    if k < 2:
        raise ValueError("k must be >= 2")
    acc = x - 2
    for _ in range(k - 1):
        acc = acc * x - 1
    return acc


# The root finder works with the algebraically identical product form
#   (x - 1) * Phi_k(x) = x^{k-1} (x^2 - 3x + 1) + 1
# which needs one interval power instead of k Horner steps.  Valid whenever
# the enclosure of x stays right of 1, which holds on the bracket [2, 2.75].

def _char_poly_fast(k: int, x: CertifiedReal) -> CertifiedReal:
    num = x.powi(k - 1) * (x * x - 3 * x + 1) + 1
    return num / (x - 1)


def _char_poly_deriv(k: int, x: CertifiedReal) -> CertifiedReal:
    # derivative of (x-1) Phi_k is x^{k-2} ((k+1)x^2 - 3kx + k - 1), and
    # Phi_k' = (that - Phi_k) / (x - 1)
    psi_prime = x.powi(k - 2) * ((k + 1) * x * x - (3 * k) * x + (k - 1))
    return (psi_prime - _char_poly_fast(k, x)) / (x - 1)


def _sign_at_dyadic(k: int, m: int, t: int) -> int:
    """Exact sign of Phi_k at m / 2^t (requires m / 2^t > 1)."""
    n = m ** (k - 1) * (m * m - 3 * m * (1 << t) + (1 << (2 * t))) + (1 << (t * (k + 1)))
    return (n > 0) - (n < 0)


_BISECT_STEPS = 60


def _bisect_bracket(k: int) -> tuple[int, int, int]:
    """Exact dyadic bracket (lo, hi, scale) of width 0.75 * 2^-60 around gamma(k).

    Starts from [2, 2.75]: Phi_k(2) = 1 - 2^{k-1} < 0 and Phi_k(2.75) > 0 for
    every k >= 2, and the dominant root is the only root beyond 1.
    """
    lo, hi, t = 8, 11, 2
    for _ in range(_BISECT_STEPS):
        mid = lo + hi  # numerator at scale t+1
        t += 1
        lo, hi = lo * 2, hi * 2
        if _sign_at_dyadic(k, mid, t) < 0:
            lo = mid
        else:
            hi = mid
    return lo, hi, t


def _dyadic_interval(lo: int, hi: int, t: int, prec: int) -> CertifiedReal:
    scale = mpz(1) << t
    d = gmpy2.context(precision=prec, round=gmpy2.RoundDown)
    u = gmpy2.context(precision=prec, round=gmpy2.RoundUp)
    return CertifiedReal(d.div(mpz(lo), scale), u.div(mpz(hi), scale), prec)


def _narrower_than(x: CertifiedReal, log2_bound: int) -> bool:
    """True when width(x) <= 2^log2_bound (exponent test, no underflow)."""
    w = x.width
    return w == 0 or gmpy2.get_exp(w) <= log2_bound


def _newton_refine(k: int, x: CertifiedReal, prec: int) -> CertifiedReal:
    """Interval Newton iteration until the width bottoms out near 2^-prec."""
    for _ in range(64):
        mid = CertifiedReal.exact(x.center, prec)
        f_mid = _char_poly_fast(k, mid)
        df = _char_poly_deriv(k, x)
        if df.contains_zero():
            raise InsufficientPrecision("derivative enclosure straddles zero")
        step = mid - f_mid / df
        x = step.intersect(x)
        if _narrower_than(x, -(prec - 12)):
            return x
    return x


_root_cache: dict[int, CertifiedReal] = {}
_root_cache_lock = threading.Lock()


def _work_precision(k: int, precision: int) -> int:
    # bracket certification needs ~log2(phi^(2k)) = 1.389 k bits of headroom
    need = max(precision, (1389 * k) // 1000 + 96)
    return -(-need // 64) * 64  # round up to a 64-bit multiple


def dominant_root(k: int, precision: int = DEFAULT_PRECISION) -> CertifiedReal:
    """Certified enclosure of gamma(k), the lone root of Phi_k beyond 1.

    The result is certified to lie strictly inside
    (phi^2 (1 - phi^-k), phi^2) and has width well under 2^(-precision/2).
    Enclosures are cached per k; repeated calls, including at higher
    precision, only ever narrow the cached interval.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    with _root_cache_lock:
        cached = _root_cache.get(k)
    if cached is not None and cached.prec >= _work_precision(k, precision):
        return cached

    prec = _work_precision(k, precision)
    lo, hi, t = _bisect_bracket(k)
    x = _dyadic_interval(lo, hi, t, prec)
    x = _newton_refine(k, x, prec)

    # certify phi^2 (1 - phi^-k) < gamma < phi^2
    phi = phi_interval(prec)
    phi_sq = phi * phi
    lower = phi_sq * (1 - phi.powi(-k))
    if not (lower.certainly_less(x) and x.certainly_less(phi_sq)):
        raise InsufficientPrecision(f"cannot certify golden-ratio bracket for k={k}")

    with _root_cache_lock:
        prev = _root_cache.get(k)
        if prev is not None:
            x = x.intersect(prev.with_precision(max(prev.prec, x.prec)))
        _root_cache[k] = x
    return x


def clear_root_cache() -> None:
    with _root_cache_lock:
        _root_cache.clear()


def save_root_cache(path: str) -> int:
    """Persist cached gamma enclosures; returns the number of entries written."""
    with _root_cache_lock:
        items = sorted(_root_cache.items())
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w") as fh:
        fh.write(f"# {_GAMMA_CACHE_VERSION}\n")
        for k, enc in items:
            c, r = enc.to_hex()
            fh.write(f"{k}\t{enc.prec}\t{c}\t{r}\n")
    os.replace(tmp, path)
    return len(items)


def load_root_cache(path: str) -> int:
    """Load persisted gamma enclosures; entries from a different cache version
    (e.g. another MPFR build) are ignored wholesale."""
    try:
        fh = open(path)
    except FileNotFoundError:
        return 0
    with fh:
        header = fh.readline().strip()
        if header != f"# {_GAMMA_CACHE_VERSION}":
            return 0
        n = 0
        for line in fh:
            k_s, prec_s, c_hex, r_hex = line.rstrip("\n").split("\t")
            k, prec = int(k_s), int(prec_s)
            enc = CertifiedReal.from_hex(c_hex, r_hex, prec)
            with _root_cache_lock:
                prev = _root_cache.get(k)
                if prev is None or prev.width > enc.width:
                    _root_cache[k] = enc
            n += 1
    return n


def binet_weight(k: int, z: CertifiedReal) -> CertifiedReal:
    """g_k(z) = (z-1) / ((k+1) z^2 - 3k z + k - 1).

    Raises ``InsufficientPrecision`` when the denominator enclosure straddles
    zero (the quadratic has a root just below phi^2, so wide inputs near the
    dominant root can be ambiguous)."""
    denom = (k + 1) * z * z - (3 * k) * z + (k - 1)
    if denom.contains_zero():
        raise InsufficientPrecision("binet weight denominator straddles zero")
    return (z - 1) / denom


@dataclass(frozen=True)
class AlgebraicContext:
    """gamma(k), g_k(gamma) and phi bundled at one working precision."""

    k: int
    gamma: CertifiedReal
    g_gamma: CertifiedReal
    phi: CertifiedReal
    precision: int
    work_precision: int

    @classmethod
    def create(cls, k: int, precision: int = DEFAULT_PRECISION) -> "AlgebraicContext":
        def build(prec: int) -> "AlgebraicContext":
            gamma = dominant_root(k, prec)
            work = gamma.prec
            phi = phi_interval(work)
            g = binet_weight(k, gamma)
            # certification: root residual, width, and the weight window
            if not char_poly(k, gamma).contains_zero():
                raise ArithmeticError(f"gamma({k}) enclosure lost the root")
            if not _narrower_than(gamma, -(precision // 2)):
                raise InsufficientPrecision("gamma enclosure too wide")
            lo_g = CertifiedReal.from_fraction(Fraction(276, 1000), work)
            hi_g = CertifiedReal.from_fraction(Fraction(1, 2), work)
            if not (lo_g.certainly_less(g) and g.certainly_less(hi_g)):
                raise InsufficientPrecision(f"cannot certify 0.276 < g_{k}(gamma) < 0.5")
            return cls(k, gamma, g, phi, precision, work)

        return refine(build, start=precision, cap=MAX_PRECISION)


def binet_residual(ctx: AlgebraicContext, n: int) -> CertifiedReal:
    """Certified |Q_n - (2 gamma - 2) g_k(gamma) gamma^n|, checked < 2."""
    from .bigseq import pell_lucas_term

    k = ctx.k
    if n < 2 - k:
        raise ValueError(f"n must be >= {2 - k}")
    q = pell_lucas_term(k, n) if n >= -(k - 2) else 0
    main = (2 * ctx.gamma - 2) * ctx.g_gamma * ctx.gamma.powi(n)
    res = abs(CertifiedReal.from_int(q, ctx.work_precision) - main)
    if not res.certainly_less(CertifiedReal.from_int(2, ctx.work_precision)):
        raise InsufficientPrecision(f"cannot certify residual < 2 at k={k}, n={n}")
    return res


def check_growth_envelope(ctx: AlgebraicContext, n: int) -> bool:
    """Certify gamma^(n-1) <= Q_n <= 2 gamma^n."""
    from .bigseq import pell_lucas_term

    if n < 1:
        raise ValueError("n must be >= 1")
    q = CertifiedReal.from_int(pell_lucas_term(ctx.k, n), ctx.work_precision)
    low = ctx.gamma.powi(n - 1)
    high = 2 * ctx.gamma.powi(n)
    if not (low <= q and q <= high):  # raises InsufficientPrecision on overlap
        raise ArithmeticError(f"growth envelope fails at k={ctx.k}, n={n}")
    return True


@dataclass(frozen=True)
class GoldenApproxChecks:
    """Outcome of the three certified golden-ratio approximation estimates."""

    k: int
    n: int
    root_power_gap: CertifiedReal   # |(2g-2) g^n - 2 phi^(2n+1)|
    weight_gap: CertifiedReal       # |g_k(gamma) - g_k(phi^2)|
    xi: CertifiedReal               # relative error of the phi^2 substitution


def golden_approx_checks(ctx: AlgebraicContext, n: int) -> GoldenApproxChecks:
    """Certify, for k >= 50 and 1 < n < phi^(k/2):

      |(2 gamma - 2) gamma^n - 2 phi^(2n+1)|  <  4 phi^(2n) / phi^(k/2)
      |g_k(gamma) - g_k(phi^2)|               <  4k / phi^k
      |xi| < 1.25 / phi^(k/2)   where
      xi = (2 gamma - 2) g_k(gamma) gamma^n (phi + 2) / (2 phi^(2n+1)) - 1
    """
    k, prec = ctx.k, ctx.work_precision
    if k < 50:
        raise ValueError("estimates require k >= 50")
    if n <= 1:
        raise ValueError("estimates require n > 1")
    phi = ctx.phi
    half_k = phi_half_power(k, prec)
    if not CertifiedReal.from_int(n, prec).certainly_less(half_k):
        raise ValueError(f"estimates require n < phi^(k/2), got n={n}")

    gamma, g = ctx.gamma, ctx.g_gamma
    phi_2n1 = phi.powi(2 * n + 1)

    gap1 = abs((2 * gamma - 2) * gamma.powi(n) - 2 * phi_2n1)
    bound1 = 4 * phi.powi(2 * n) / half_k
    if not gap1.certainly_less(bound1):
        raise InsufficientPrecision(f"root-power gap not certified at k={k}, n={n}")

    gap2 = abs(g - binet_weight(k, phi * phi))
    bound2 = CertifiedReal.from_int(4 * k, prec) / phi.powi(k)
    if not gap2.certainly_less(bound2):
        raise InsufficientPrecision(f"weight gap not certified at k={k}, n={n}")

    xi = (2 * gamma - 2) * g * gamma.powi(n) * (phi + 2) / (2 * phi_2n1) - 1
    bound3 = CertifiedReal.from_fraction(Fraction(5, 4), prec) / half_k
    if not abs(xi).certainly_less(bound3):
        raise InsufficientPrecision(f"xi bound not certified at k={k}, n={n}")

    return GoldenApproxChecks(k, n, gap1, gap2, xi)


def golden_aux_facts(k: int, prec: int = DEFAULT_PRECISION) -> bool:
    """Certify the two auxiliary tail facts used alongside the xi bound:

      4k (phi+2) / phi^k           < 0.005 / phi^(k/2)
      (8k/phi)(phi+2) / phi^(3k/2) < 0.005 / phi^(k/2)
    """
    if k < 50:
        raise ValueError("facts hold for k >= 50")
    phi = phi_interval(prec)
    rhs = CertifiedReal.from_fraction(Fraction(5, 1000), prec) / phi_half_power(k, prec)
    lhs1 = 4 * k * (phi + 2) / phi.powi(k)
    lhs2 = (8 * k / phi) * (phi + 2) / phi_half_power(3 * k, prec)
    if not lhs1.certainly_less(rhs):
        raise InsufficientPrecision(f"first tail fact not certified at k={k}")
    if not lhs2.certainly_less(rhs):
        raise InsufficientPrecision(f"second tail fact not certified at k={k}")
    return True

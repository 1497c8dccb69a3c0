"""Campaign configuration dataclasses and the published reduction constants."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction

# Reduction constants (c, rho) of the four log-form decay inequalities.
# rho values follow the published chain; the sharp natural alternatives
# (log 10 for the decimal forms, log phi / 2 for the golden ones) are
# available behind CampaignConfig.sharp_constants.
GAMMA1_C = Fraction("20.22")
GAMMA2_C = Fraction("21.1")
GAMMA3_C = Fraction("606")
GAMMA4_C = Fraction("22.12")
RHO_DECIMAL = Fraction("2.3")
RHO_GOLDEN_HALF = Fraction("0.48")
RHO_GOLDEN_QUARTER = Fraction("0.24")
RHO_DECIMAL_SHARP = Fraction("2.302585")          # just under log 10
RHO_GOLDEN_HALF_SHARP = Fraction("0.4812118")     # just under log phi
RHO_GOLDEN_QUARTER_SHARP = Fraction("0.2406059")  # just under (log phi)/2

# First-pass ceiling of the large-k campaign: the printed absolute n-bound.
LARGE_K_X0_FIRST = 537 * 10 ** 348


def cache_dir() -> str | None:
    """Directory for the persisted gamma cache (PELLREP_CACHE_DIR), if set."""
    return os.environ.get("PELLREP_CACHE_DIR") or None


@dataclass
class SearchConfig:
    k_min: int = 3
    k_max: int = 100
    n_min: int = 1
    n_max: int = 782
    window_check: bool = False  # annotate hits against the m+l window


@dataclass
class SmallKConfig:
    k_min: int = 3
    k_max: int = 100
    precision_start: int = 256
    max_advance: int = 30
    extra_terms: int = 36
    workers: int = 1
    sharp_constants: bool = False

    def k_values(self) -> list[int]:
        return list(range(self.k_min, self.k_max + 1))


@dataclass
class LargeKConfig:
    max_passes: int = 10
    x0_first: int = LARGE_K_X0_FIRST
    cf_precision_start: int = 4096
    max_advance: int = 30
    extra_terms: int = 40
    workers: int = 1
    sharp_constants: bool = False


@dataclass
class ProverConfig:
    search: SearchConfig = field(default_factory=SearchConfig)
    small_k: SmallKConfig = field(default_factory=SmallKConfig)
    large_k: LargeKConfig = field(default_factory=LargeKConfig)
    cache_dir: str | None = field(default_factory=cache_dir)

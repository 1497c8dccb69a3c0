"""Exact integer layer: k-Pell-Lucas terms, Fibonacci numbers, repdigits and
complete product-of-two-repdigits decompositions.

The order-k Pell-Lucas recurrence is

    Q_n = 2*Q_{n-1} + Q_{n-2} + ... + Q_{n-k}      (n >= 2)

with k initial terms 0, ..., 0, 2, 2 placed at indices -(k-2), ..., 0, 1.
All arithmetic is exact Python integers; terms are memoized per k and shared
safely between campaign worker threads.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field


class SequenceTable:
    """Memoized terms of one order-k Pell-Lucas sequence.

    Terms are stored in a list indexed from -(k-2); the list only grows, so
    reads of already-computed entries never take the extension lock.
    """

    def __init__(self, k: int):
        if k < 2:
            raise ValueError(f"order k must be >= 2, got {k}")
        self.k = k
        # indices -(k-2) .. 1 hold the initial block
        self._terms: list[int] = [0] * (k - 2) + [2, 2]
        # rolling sum of the last k stored terms, kept in step with _terms
        self._window = sum(self._terms[-k:])
        self._lock = threading.Lock()

    @property
    def min_index(self) -> int:
        return -(self.k - 2)

    @property
    def max_index(self) -> int:
        return len(self._terms) - 1 + self.min_index

    def term(self, n: int) -> int:
        if n < self.min_index:
            raise ValueError(f"index {n} below first defined index {self.min_index}")
        pos = n - self.min_index
        if pos < len(self._terms):
            return self._terms[pos]
        with self._lock:
            while len(self._terms) <= pos:
                # Q_next = Q_last + (Q_last + ... + Q_{last-k+1})
                q = self._terms[-1] + self._window
                self._window += q - self._terms[-self.k]
                self._terms.append(q)
        return self._terms[pos]

    def terms(self, n_max: int) -> list[int]:
        """All terms from the first defined index through n_max."""
        self.term(n_max)
        return self._terms[: n_max - self.min_index + 1]


_tables: dict[int, SequenceTable] = {}
_tables_lock = threading.Lock()


def sequence_table(k: int) -> SequenceTable:
    tab = _tables.get(k)
    if tab is None:
        with _tables_lock:
            tab = _tables.setdefault(k, SequenceTable(k))
    return tab


def pell_lucas_term(k: int, n: int) -> int:
    """Q_n for the order-k Pell-Lucas sequence (exact)."""
    return sequence_table(k).term(n)


def fibonacci(n: int) -> int:
    """F_n with F_0 = 0, F_1 = 1."""
    if n < 0:
        raise ValueError("negative Fibonacci index")
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


@dataclass(frozen=True, order=True)
class Repdigit:
    """A number whose decimal expansion repeats one digit: a * (10^l - 1)/9."""

    length: int
    digit: int

    def __post_init__(self):
        if not 1 <= self.digit <= 9:
            raise ValueError(f"digit must be in 1..9, got {self.digit}")
        if self.length < 1:
            raise ValueError(f"length must be >= 1, got {self.length}")

    @property
    def value(self) -> int:
        return self.digit * (10 ** self.length - 1) // 9

    def __str__(self):
        return str(self.digit) * self.length


def repdigit_value(digit: int, length: int) -> int:
    return Repdigit(length, digit).value


def as_repdigit(n: int) -> Repdigit | None:
    """The (digit, length) witness when n is a repdigit, else None."""
    if n < 1:
        raise ValueError("repdigit test is defined for positive integers")
    s = str(n)
    if len(set(s)) != 1:
        return None
    return Repdigit(len(s), int(s[0]))


@dataclass(frozen=True)
class Decomposition:
    """n = first.value * second.value with first <= second in canonical order
    (shorter length first; equal lengths ordered by digit)."""

    first: Repdigit
    second: Repdigit
    value: int

    def __str__(self):
        return f"{self.first}*{self.second}"


def repdigit_product_decompositions(n: int) -> list[Decomposition]:
    """All canonical ways of writing n as a product of two repdigits.

    Enumerates every repdigit divisor not exceeding sqrt(n); because repdigit
    values are strictly ordered by (length, digit), the cofactor is always the
    canonically larger factor.  No digit-count shortcut is used here, so the
    enumeration is complete by construction.
    """
    if n < 1:
        raise ValueError("decomposition is defined for positive integers")
    root = math.isqrt(n)
    out: list[Decomposition] = []
    length = 1
    while repdigit_value(1, length) <= root:
        for digit in range(1, 10):
            v = repdigit_value(digit, length)
            if v > root:
                break
            if n % v:
                continue
            co = as_repdigit(n // v)
            if co is not None:
                out.append(Decomposition(Repdigit(length, digit), co, n))
        length += 1
    return out


@dataclass
class FibonacciOverlap:
    """How far Q_n agrees with 2*F_{2n}, and the first residual past it."""

    k: int
    extent: int
    first_failure: int | None = None
    residual: int | None = None
    checked_up_to: int = field(default=0)


def fibonacci_overlap(k: int, n_max: int) -> FibonacciOverlap:
    """Largest n <= n_max with Q_i = 2*F_{2i} for every 1 <= i <= n.

    Reports the residual Q_{n+1} - 2*F_{2(n+1)} at the first index where the
    identity breaks (empirically n = k+1, residual -2).
    """
    tab = sequence_table(k)
    a, b = fibonacci(2), fibonacci(3)  # F_2, F_3
    extent = 0
    for n in range(1, n_max + 1):
        diff = tab.term(n) - 2 * a
        if diff != 0:
            return FibonacciOverlap(k, extent, n, diff, n_max)
        extent = n
        a, b = a + b, a + 2 * b  # advance (F_2n, F_2n+1) by two indices
    return FibonacciOverlap(k, extent, None, None, n_max)

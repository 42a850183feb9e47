"""Exact k-generalized Fibonacci numbers.

The order-k sequence starts with k-1 zeros at indices -(k-2)..0 followed by
``F_1 = 1``; every later term is the sum of the k terms before it.  Terms are
Python ints, so values are exact at any size.
"""

from __future__ import annotations

from collections.abc import Iterator


def _check_k(k: int) -> None:
    if int(k) != k or k < 2:
        raise ValueError(f"order k must be an integer >= 2, got {k!r}")


class SeqTable:
    """Append-only table of ``F_n^(k)`` for ``-(k-2) <= n <= n_max``.

    Indexing uses the logical index: ``table[0] == 0``, ``table[1] == 1``.
    Negative logical indices down to ``-(k-2)`` are valid, so ``table[-1]``
    is F_{-1}, not the last element.
    """

    __slots__ = ("k", "_values")

    def __init__(self, k: int):
        _check_k(k)
        self.k = int(k)
        # physical slot p holds logical index p - (k - 2)
        self._values: list[int] = [0] * (self.k - 1) + [1]

    @property
    def offset(self) -> int:
        return self.k - 2

    @property
    def n_min(self) -> int:
        return -(self.k - 2)

    @property
    def n_max(self) -> int:
        return len(self._values) - 1 - self.offset

    @property
    def values(self) -> list[int]:
        """Copy of the stored terms, starting at logical index ``-(k-2)``."""
        return list(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __getitem__(self, n: int) -> int:
        i = n + self.k - 2
        if i < 0 or i >= len(self._values):
            raise IndexError(f"index {n} outside [{self.n_min}, {self.n_max}] for k={self.k}")
        return self._values[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self._values)

    def items(self, start: int = 1) -> Iterator[tuple[int, int]]:
        """Yield ``(n, F_n)`` for ``start <= n <= n_max``."""
        off = self.offset
        for n in range(max(start, self.n_min), self.n_max + 1):
            yield n, self._values[n + off]

    def extend(self, n_max: int) -> SeqTable:
        """Grow in place up to ``n_max`` (no-op if already that long)."""
        v = self._values
        k = self.k
        if n_max >= 2 and self.n_max < 2:
            v.append(1)
        # F_j = 2 F_{j-1} - F_{j-k-1}; the subtracted term sits k+1 slots back
        target = n_max + self.offset + 1
        while len(v) < target:
            v.append(2 * v[-1] - v[-k - 1])
        return self


def generate(k: int, n_max: int) -> SeqTable:
    """Table of ``F_n^(k)`` for all ``-(k-2) <= n <= n_max``."""
    _check_k(k)
    if int(n_max) != n_max or n_max < 1:
        raise ValueError(f"n_max must be an integer >= 1, got {n_max!r}")
    return SeqTable(k).extend(int(n_max))


def naive_terms(k: int, n_max: int) -> list[int]:
    """Literal k-term recurrence, for cross-checking :func:`generate`.

    Returns the terms for logical indices ``-(k-2)..n_max``.
    """
    _check_k(k)
    vals = [0] * (k - 1) + [1]
    while len(vals) < n_max + k - 1:
        vals.append(sum(vals[-k:]))
    return vals[: n_max + k - 1]


def closed_form(k: int, i: int) -> int | None:
    """Closed form of ``F_i^(k)`` on ``2 <= i <= 2k+2``; ``None`` elsewhere.

    ``F_i = 2^(i-2)`` for ``i`` in ``[2, k+1]`` and
    ``F_i = 2^(i-2) - (i-k) 2^(i-k-3)`` for ``i`` in ``[k+2, 2k+2]``.
    """
    _check_k(k)
    if 2 <= i <= k + 1:
        return 1 << (i - 2)
    if k + 2 <= i <= 2 * k + 2:
        # at i = k+2 the second term is 2 * 2^-1 = 1
        if i - k - 3 >= 0:
            return (1 << (i - 2)) - (i - k) * (1 << (i - k - 3))
        return (1 << (i - 2)) - (i - k) // 2
    return None


def power_of_two_exponent(x: int) -> int | None:
    """Return ``t`` if ``x == 2**t``, else ``None``."""
    if x < 0:
        raise ValueError("x must be nonnegative")
    if x == 0 or x & (x - 1):
        return None
    return x.bit_length() - 1

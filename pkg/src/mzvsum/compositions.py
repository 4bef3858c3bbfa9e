"""Integer compositions of ``k`` into exactly ``n`` positive parts."""
from __future__ import annotations

from math import comb
from typing import Iterator


class Composition(tuple):
    """Ordered tuple of positive integers ``(k1, ..., kn)``."""

    def __new__(cls, parts, last_min: int = 1):
        self = super().__new__(cls, (int(p) for p in parts))
        if len(self) < 1:
            raise ValueError("a composition needs at least one part")
        if any(p < 1 for p in self):
            raise ValueError(f"parts must be positive: {tuple(self)}")
        if self[-1] < last_min:
            raise ValueError(f"last part must be >= {last_min}: {tuple(self)}")
        return self

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def depth(self) -> int:
        return len(self)

    def __repr__(self):
        return f"Composition{tuple(self)}"


def _check(k: int, n: int, last_min: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if last_min not in (1, 2):
        raise ValueError(f"last_min must be 1 or 2, got {last_min}")


def enumerate_compositions(k: int, n: int, last_min: int = 1) -> Iterator[Composition]:
    """Yield every composition of ``k`` into ``n`` parts with ``kn >= last_min``.

    Lexicographic order, generated lazily.  Yields nothing when
    ``k < n + last_min - 1``.
    """
    _check(k, n, last_min)
    if k < n + last_min - 1:
        return
    parts = [1] * n
    parts[-1] = k - (n - 1)
    while True:
        yield Composition(parts, last_min)
        # the next composition: bump the rightmost position i < n-1 that can
        # grow while the tail still has room for ones and a last part >= last_min
        i = n - 2
        while i >= 0:
            head = sum(parts[: i + 1]) + 1
            room = k - head - (n - 2 - i)
            if room >= last_min:
                parts[i] += 1
                for j in range(i + 1, n - 1):
                    parts[j] = 1
                parts[-1] = room
                break
            i -= 1
        else:
            return


def count_compositions(k: int, n: int, last_min: int = 1) -> int:
    """``C(k-1, n-1)``, or ``C(k-2, n-1)`` when the last part must be >= 2."""
    _check(k, n, last_min)
    top = k - last_min
    if top < n - 1:
        return 0
    return comb(top, n - 1)

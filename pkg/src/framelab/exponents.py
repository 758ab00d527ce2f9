"""Exponent sets for generalized orbits {D**lam b : lam in Lambda}."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TAGS = ("explicit", "naturals", "every_nth", "ceil_n_log_n", "primes")


def sieve(limit: int) -> np.ndarray:
    """All primes <= limit (sieve of Eratosthenes)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def first_primes(count: int) -> np.ndarray:
    """p_1, ..., p_count with p_1 = 2."""
    if count <= 0:
        return np.zeros(0, dtype=np.int64)
    # p_n < n (log n + log log n) for n >= 6
    bound = 15 if count < 6 else int(count * (math.log(count) + math.log(math.log(count)))) + 1
    return sieve(bound)[:count]


@dataclass(frozen=True, eq=False)
class ExponentSet:
    """A strictly increasing set of non-negative exponents.

    Named generators can be infinite (``n_max=None``).  Infinite ``naturals``
    and ``every_nth`` sets are handled through closed forms; infinite
    ``ceil_n_log_n`` and ``primes`` sets are summed lazily with a tail bound.
    """

    values: np.ndarray
    tag: str = "explicit"
    n_max: int | None = None
    stride: int = 1

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown exponent generator {self.tag!r}")
        v = np.asarray(self.values, dtype=float).ravel()
        if v.size and (np.any(v < 0) or np.any(np.diff(v) <= 0)):
            raise ValueError("exponents must be non-negative and strictly increasing")
        if self.tag == "explicit" and self.n_max is None and v.size == 0:
            raise ValueError("explicit exponent sets must be non-empty")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def infinite(self) -> bool:
        return self.tag != "explicit" and self.n_max is None

    @property
    def has_closed_form(self) -> bool:
        return self.infinite and self.tag in ("naturals", "every_nth")

    @property
    def is_integer(self) -> bool:
        return self.tag != "explicit" or bool(np.all(self.values == np.round(self.values)))

    def __len__(self):
        if self.infinite:
            raise TypeError("infinite exponent set has no length")
        return len(self.values)

    def __iter__(self):
        if self.infinite:
            raise TypeError("cannot iterate an infinite exponent set")
        return iter(self.values)

    def chunk(self, start: int, stop: int) -> np.ndarray:
        """Terms with generator index in [start, stop), lazily for infinite sets.

        Generator index 0 is the first element of the set, whatever its tag.
        """
        if not self.infinite:
            return self.values[start:stop]
        idx = np.arange(start, stop, dtype=np.int64)
        if self.tag == "naturals":
            return idx.astype(float)
        if self.tag == "every_nth":
            return (idx * self.stride).astype(float)
        n = idx + 2
        if self.tag == "ceil_n_log_n":
            return np.ceil(n * np.log(n))
        return first_primes(int(stop) + 1)[start + 1 : stop + 1].astype(float)


def _ceil_n_log_n(n_max: int) -> np.ndarray:
    n = np.arange(2, n_max + 1, dtype=float)
    return np.ceil(n * np.log(n))


def make_exponent_set(tag: str, n_max: int | None = None, stride: int = 1, values=None) -> ExponentSet:
    """Build an exponent set from a named generator.

    ``naturals``     0, 1, ..., n_max
    ``every_nth``    0, N, 2N, ... <= n_max   (N = stride)
    ``ceil_n_log_n`` ceil(n log n) for n = 2..n_max
    ``primes``       p_2, ..., p_{n_max}, i.e. 3, 5, 7, ... (indexing starts at n = 2)
    ``explicit``     the given ``values``
    """
    if tag == "explicit":
        return ExponentSet(np.asarray(values, dtype=float), "explicit", None, 1)
    if stride < 1:
        raise ValueError("stride must be a positive integer")
    if tag in ("ceil_n_log_n", "primes") and n_max is not None and n_max < 2:
        raise ValueError(f"{tag} needs n_max >= 2")
    if n_max is None:
        return ExponentSet(np.zeros(0), tag, None, stride if tag == "every_nth" else 1)
    if tag == "naturals":
        vals = np.arange(n_max + 1, dtype=float)
    elif tag == "every_nth":
        vals = np.arange(0, n_max + 1, stride, dtype=float)
    elif tag == "ceil_n_log_n":
        vals = _ceil_n_log_n(n_max)
    elif tag == "primes":
        vals = first_primes(n_max)[1:].astype(float)
    else:
        raise ValueError(f"unknown exponent generator {tag!r}")
    return ExponentSet(vals, tag, n_max, stride if tag == "every_nth" else 1)

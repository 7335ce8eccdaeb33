"""Prime generation and deterministic primality testing."""

from __future__ import annotations

import math
from typing import Iterator

import numpy as np

# ----- configuration -----


class Config:
    SMALL_SIEVE_LIMIT = 1_000_000        # cached flag array covers [0, this]
    SEGMENT_SIZE = 1 << 20               # block length for segmented iteration
    MAX_ENUMERATION = 1_000_000_000      # refuse to enumerate primes past this


# Witness set making Miller-Rabin deterministic for all n < 3.3e24 (> 2**63).
MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


# ----- cached small sieve -----

_flag_cache: np.ndarray | None = None
_prime_cache: np.ndarray | None = None
_spf_cache: np.ndarray | None = None


def _flags() -> np.ndarray:
    global _flag_cache
    if _flag_cache is None:
        n = Config.SMALL_SIEVE_LIMIT + 1
        flags = np.ones(n, dtype=bool)
        flags[:2] = False
        for p in range(2, math.isqrt(n - 1) + 1):
            if flags[p]:
                flags[p * p::p] = False
        _flag_cache = flags
    return _flag_cache


def small_primes() -> np.ndarray:
    """All primes up to Config.SMALL_SIEVE_LIMIT, cached, as int64."""
    global _prime_cache
    if _prime_cache is None:
        _prime_cache = np.flatnonzero(_flags()).astype(np.int64)
    return _prime_cache


def smallest_prime_factor() -> np.ndarray:
    """Array s with s[i] = least prime factor of i, for 2 <= i <= SMALL_SIEVE_LIMIT."""
    global _spf_cache
    if _spf_cache is None:
        n = Config.SMALL_SIEVE_LIMIT + 1
        spf = np.zeros(n, dtype=np.int32)
        for p in range(2, math.isqrt(n - 1) + 1):
            if spf[p] == 0:
                block = spf[p * p::p]
                block[block == 0] = p
        untouched = np.flatnonzero(spf[2:] == 0) + 2  # primes, and composites < 4
        spf[untouched] = untouched
        _spf_cache = spf
    return _spf_cache


def primes_up_to(n: int) -> np.ndarray:
    """Sorted int64 array of all primes p <= n."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    if n <= Config.SMALL_SIEVE_LIMIT:
        ps = small_primes()
        return ps[:int(np.searchsorted(ps, n, side="right"))]
    if n > Config.MAX_ENUMERATION:
        raise ValueError(f"prime enumeration limit is {Config.MAX_ENUMERATION}, got {n}")
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p::p] = False
    return np.flatnonzero(flags).astype(np.int64)


def iter_primes(lo: int, hi: int) -> Iterator[int]:
    """Yield primes in [lo, hi) in increasing order, sieving one segment at a time."""
    if hi > Config.MAX_ENUMERATION + 1:
        raise ValueError(f"prime enumeration limit is {Config.MAX_ENUMERATION}, got {hi}")
    lo = max(lo, 2)
    if lo >= hi:
        return
    base = primes_up_to(math.isqrt(hi - 1))
    for seg_lo in range(lo, hi, Config.SEGMENT_SIZE):
        seg_hi = min(seg_lo + Config.SEGMENT_SIZE, hi)
        flags = np.ones(seg_hi - seg_lo, dtype=bool)
        for p in base:
            p = int(p)
            start = max(p * p, ((seg_lo + p - 1) // p) * p)
            if start >= seg_hi:
                continue
            flags[start - seg_lo::p] = False
        if seg_lo <= 1:
            flags[:2 - seg_lo] = False
        for off in np.flatnonzero(flags):
            yield seg_lo + int(off)


# ----- primality -----


def is_prime(n: int) -> bool:
    """Deterministic primality test for 0 <= n < 2**64."""
    if n < 2:
        return False
    for p in MR_BASES:
        if n % p == 0:
            return n == p
    # n is odd and coprime to all bases here; run strong-probable-prime rounds.
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ----- self-check -----

if __name__ == "__main__":
    ps = primes_up_to(100)
    assert list(ps[:10]) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(primes_up_to(1_000_000)) == 78498
    assert list(iter_primes(90, 120)) == [97, 101, 103, 107, 109, 113]
    assert is_prime(2) and is_prime(2**61 - 1) and not is_prime(2**61 + 1)
    assert sum(1 for _ in iter_primes(10**6, 10**6 + 10**4)) == 753
    print("primes: self-check ok")

"""Square-free sieving, factorization tables and twist-eligibility predicates.

Everything here is exact integer arithmetic.  The segmented sieve never
allocates a full-range table, so scans up to 2**40 stay within a fixed
window budget.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import gcd, isqrt
from typing import Iterator, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import CapacityError

CURVE_LABELS = ("A", "B", "C", "D")

DEFAULT_WINDOW = 1 << 24

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def memory_budget() -> int:
    """Configured memory budget in bytes (env SHASCAN_MEM_BUDGET)."""
    return int(os.environ.get("SHASCAN_MEM_BUDGET", 6 << 30))


def check_budget(nbytes: int, what: str = "buffer") -> None:
    if nbytes > memory_budget():
        raise CapacityError(
            f"{what} needs {nbytes} bytes, budget is {memory_budget()}"
        )


@dataclass(frozen=True, slots=True)
class FactoredInt:
    """A positive integer together with its ordered prime factorization."""

    value: int
    factors: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        prev = 1
        for p, e in self.factors:
            if p <= prev or e < 1:
                raise ValueError(f"bad factorization for {self.value}")
            prev = p
            prod *= p**e
        if prod != self.value or self.value < 1:
            raise ValueError(f"factors {self.factors} do not multiply to {self.value}")

    @property
    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    @property
    def primes(self) -> Tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def __int__(self) -> int:
        return self.value


IntLike = Union[int, FactoredInt]


def _as_int(d: IntLike) -> int:
    return d.value if isinstance(d, FactoredInt) else int(d)


def primes_upto(n: int) -> np.ndarray:
    """All primes <= n as a uint64 array."""
    if n < 2:
        return np.zeros(0, dtype=np.uint64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.uint64)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond 64 bits of input."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """One nontrivial factor of composite odd n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        seed += 1
        y, c, m = seed, seed + 6, 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> FactoredInt:
    """Factor a positive integer: trial division, then Pollard rho.

    Intended for single-d queries and discriminants, not bulk scans
    (those go through the segmented sieve).
    """
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    value = n
    fac: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            fac[p] = fac.get(p, 0) + 1
            n //= p
    p = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while p * p <= n and p < 100000:
        while n % p == 0:
            fac[p] = fac.get(p, 0) + 1
            n //= p
        p += wheel[i]
        i = (i + 1) % 8
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            fac[m] = fac.get(m, 0) + 1
            continue
        g = _pollard_rho(m)
        stack.extend((g, m // g))
    return FactoredInt(value, tuple(sorted(fac.items())))


def divisor_count(n: IntLike) -> int:
    """tau(n), the number of positive divisors."""
    if isinstance(n, int):
        n = factorize(n)
    return int(np.prod([e + 1 for _, e in n.factors], initial=1))


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n) with the full 2-adic and sign conventions."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    k = 1
    if n < 0:
        n = -n
        if a < 0:
            k = -k
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v % 2 == 1:
        m = a % 8
        if m in (3, 5):
            k = -k
        elif m % 2 == 0:
            return 0
    a %= n
    while a:
        v = 0
        while a % 2 == 0:
            a //= 2
            v += 1
        if v % 2 == 1 and n % 8 in (3, 5):
            k = -k
        if a % 4 == 3 and n % 4 == 3:
            k = -k
        a, n = n % a, a
    return k if n == 1 else 0


_STAR_RESIDUES = {
    "A": (8, frozenset((1, 3))),
    "B": (12, frozenset((1, 5))),
    "C": (11, frozenset((1, 3, 4, 5, 9))),
    "D": (7, frozenset((1, 2, 4))),
}


def condition_star(curve: str, d: IntLike) -> bool:
    """Twist-eligibility residue test for one of the four fixed curves.

    d must be a positive square-free integer; the test itself only reads
    residues (A: d mod 8, B: d mod 12, C: parity and d mod 11,
    D: d mod 56).
    """
    if curve not in _STAR_RESIDUES:
        raise ValueError(f"unknown curve label {curve!r}")
    n = _as_int(d)
    if n < 1:
        return False
    if n % 2 == 0:
        return False
    mod, allowed = _STAR_RESIDUES[curve]
    if n % mod not in allowed:
        return False
    if curve == "D" and n % 8 == 3:
        return False
    return True


def b_curve_l_invariant(d: FactoredInt) -> int:
    """The exponent l = l1 + floor((l2+1)/2) from residues of d's primes mod 3."""
    if not d.is_squarefree or gcd(d.value, 6) != 1:
        raise ValueError(f"d={d.value} must be square-free and coprime to 6")
    l1 = sum(1 for p in d.primes if p % 3 == 1)
    l2 = sum(1 for p in d.primes if p % 3 == 2)
    return l1 + (l2 + 1) // 2


def sieve_window(lo: int, hi: int, primes: np.ndarray):
    """Sieve the window [lo, hi): square-free mask plus factor COO arrays.

    Returns (mask, flat_idx, flat_p) where mask[i] says lo+i is square-free
    and (flat_idx, flat_p) list, grouped by index in increasing prime
    order, every prime factor p <= sqrt(hi) of each square-free entry.
    The remaining cofactor (1 or a single large prime) is recoverable by
    division.  Entry 1 is square-free with no factors.
    """
    n = hi - lo
    mask = np.ones(n, dtype=bool)
    if lo <= 0:
        mask[: min(1 - lo, n)] = False
    idx_parts = []
    p_parts = []
    root = isqrt(max(hi - 1, 0))
    for p in primes:
        p = int(p)
        if p > root:
            break
        p2 = p * p
        start = (-lo) % p2
        mask[start::p2] = False
        start = (-lo) % p
        mult = np.arange(start, n, p, dtype=np.int64)
        mult = mult[mask[mult]]
        if mult.size:
            idx_parts.append(mult)
            p_parts.append(np.full(mult.size, p, dtype=np.int64))
    if idx_parts:
        flat_idx = np.concatenate(idx_parts)
        flat_p = np.concatenate(p_parts)
        order = np.argsort(flat_idx, kind="stable")
        flat_idx = flat_idx[order]
        flat_p = flat_p[order]
    else:
        flat_idx = np.zeros(0, dtype=np.int64)
        flat_p = np.zeros(0, dtype=np.int64)
    return mask, flat_idx, flat_p


def squarefree_stream(
    limit: int,
    window: int = DEFAULT_WINDOW,
    *,
    start: int = 1,
) -> Iterator[FactoredInt]:
    """Yield every square-free start <= d <= limit in order, fully factored.

    Segmented smallest-prime sieve: memory is O(window), independent of
    limit.
    """
    if limit < 1 or window < 1:
        raise ValueError("limit and window must be positive")
    check_budget(window * 24, "sieve window")
    primes = primes_upto(isqrt(limit))
    for lo in range(start, limit + 1, window):
        hi = min(lo + window, limit + 1)
        mask, flat_idx, flat_p = sieve_window(lo, hi, primes)
        counts = np.bincount(flat_idx, minlength=hi - lo)
        offsets = np.concatenate(([0], np.cumsum(counts)))
        plist = flat_p.tolist()
        for i in np.flatnonzero(mask).tolist():
            d = lo + i
            ps = plist[offsets[i] : offsets[i + 1]]
            rem = d
            for p in ps:
                rem //= p
            if rem > 1:
                ps.append(rem)
            yield FactoredInt(d, tuple((p, 1) for p in ps))

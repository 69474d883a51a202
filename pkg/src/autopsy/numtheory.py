"""Modular arithmetic, extended Euclid, safe-prime parameters, brute-force dlog."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import NotInvertible, OracleRefused

MIN_BITS = 8
MAX_BITS = 512
DLOG_GUARD = 1 << 20

# 40 random bases: error probability <= 4**-40 = 2**-80 per composite.
MR_ROUNDS = 40

_SMALL_PRIMES = [
    p for p in range(3, 2000)
    if all(p % d for d in range(2, int(p ** 0.5) + 1))
]


class BezoutResult(NamedTuple):
    g: int
    alpha: int
    beta: int


@dataclass(frozen=True)
class DhParams:
    p: int
    g: int
    bits: int

    @property
    def order(self) -> int:
        return self.p - 1


def ext_gcd(a: int, b: int) -> BezoutResult:
    """Extended Euclid: return (g, alpha, beta) with alpha*a + beta*b = g = gcd(a, b)."""
    if a == 0 and b == 0:
        raise ValueError("ext_gcd(0, 0) is undefined")
    old_r, r = abs(a), abs(b)
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        quot, rem = divmod(old_r, r)
        old_r, r = r, rem
        old_s, s = s, old_s - quot * s
        old_t, t = t, old_t - quot * t
    alpha = -old_s if a < 0 else old_s
    beta = -old_t if b < 0 else old_t
    return BezoutResult(old_r, alpha, beta)


def mod_exp(base: int, e: int, p: int) -> int:
    """Left-to-right square-and-multiply."""
    if p < 2:
        raise ValueError("modulus must be >= 2")
    if e < 0:
        raise ValueError("exponent must be non-negative")
    base %= p
    result = 1 % p
    for bit in bin(e)[2:] if e else "":
        result = result * result % p
        if bit == "1":
            result = result * base % p
    return result


def mod_inverse(a: int, m: int) -> int:
    if m < 2:
        raise ValueError("modulus must be >= 2")
    g, alpha, _ = ext_gcd(a % m, m)
    if g != 1:
        raise NotInvertible(a, m, g)
    return alpha % m


def is_probable_prime(n: int, rng: Optional[random.Random] = None) -> bool:
    """Miller-Rabin with MR_ROUNDS bases drawn from ``rng``.

    Deterministic when ``rng`` is seeded; small inputs are trial-divided.
    """
    if n < 2:
        return False
    for sp in [2] + _SMALL_PRIMES:
        if n == sp:
            return True
        if n % sp == 0:
            return False
    if n < _SMALL_PRIMES[-1] ** 2:
        return True
    rng = rng or random.Random(n)
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for _ in range(MR_ROUNDS):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _passes_sieve(q: int) -> bool:
    # q and 2q+1 must both avoid small factors
    for sp in _SMALL_PRIMES:
        if sp >= q:
            break
        if q % sp == 0:
            return False
        if (2 * q + 1) % sp == 0 and 2 * q + 1 != sp:
            return False
    return True


def is_generator(g: int, p: int) -> bool:
    """Full-order test for a safe prime p = 2q + 1."""
    q = (p - 1) // 2
    if not 2 <= g <= p - 2:
        return False
    return mod_exp(g, 2, p) != 1 and mod_exp(g, q, p) != 1


def gen_params(bits: int, seed: int) -> DhParams:
    """Deterministic safe prime of exactly ``bits`` bits plus a full-order generator."""
    if not MIN_BITS <= bits <= MAX_BITS:
        raise ValueError(f"bits must be in [{MIN_BITS}, {MAX_BITS}], got {bits}")
    rng = random.Random(f"gen_params:{bits}:{seed}")
    lo, hi = 1 << (bits - 2), 1 << (bits - 1)
    while True:
        q = rng.randrange(lo, hi) | 1
        if not _passes_sieve(q):
            continue
        if is_probable_prime(q, rng) and is_probable_prime(2 * q + 1, rng):
            break
    p = 2 * q + 1
    while True:
        g = rng.randrange(2, p - 1)
        if is_generator(g, p):
            return DhParams(p=p, g=g, bits=bits)


def dlog_bruteforce(g: int, y: int, p: int) -> Optional[int]:
    """Smallest x >= 0 with g**x == y (mod p), or None."""
    if p > DLOG_GUARD:
        raise OracleRefused(f"p={p} exceeds brute-force guard {DLOG_GUARD}")
    y %= p
    acc = 1 % p
    for x in range(p):
        if acc == y:
            return x
        acc = acc * g % p
        if acc == 1 % p:
            # cycled through the whole subgroup
            break
    return None


def solve_linear_congruence(a: int, b: int, m: int) -> list[int]:
    """All x in [0, m) with a*x == b (mod m)."""
    g, alpha, _ = ext_gcd(a % m, m) if a % m else BezoutResult(m, 0, 1)
    if b % g:
        return []
    step = m // g
    x0 = (alpha * (b // g)) % step if a % m else 0
    return [x0 + i * step for i in range(g)]

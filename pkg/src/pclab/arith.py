"""Small integer number-theory helpers (totient, divisors, Moebius, primes)."""

from functools import lru_cache
from math import gcd, isqrt


def lcm(*values):
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


@lru_cache(maxsize=None)
def factorint(n):
    """Prime factorisation of ``n >= 1`` as a tuple of ``(p, e)`` pairs."""
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def totient(n):
    result = n
    for p, _ in factorint(n):
        result -= result // p
    return result


def mobius(n):
    fs = factorint(n)
    if any(e > 1 for _, e in fs):
        return 0
    return -1 if len(fs) % 2 else 1


@lru_cache(maxsize=None)
def divisors(n):
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    large = [n // d for d in reversed(small) if d * d != n]
    return tuple(small + large)


def is_prime(n):
    return n >= 2 and factorint(n) == ((n, 1),)


def primes_upto(n):
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]

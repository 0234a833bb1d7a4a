"""Elementary integer arithmetic: primality, factorization, symbols.

Everything here is exact and deterministic.  Factorization does trial
division up to TRIAL_BOUND and then Pollard's rho with a configurable
iteration cap; inputs that resist both raise FactorizationIncomplete rather
than returning a wrong answer.
"""

from __future__ import annotations

import contextlib
import contextvars
from math import gcd, isqrt

from .errors import FactorizationIncomplete, InvalidInput

TRIAL_BOUND = 10 ** 6
DEFAULT_RHO_ITERATIONS = 10 ** 6

_rho_cap: contextvars.ContextVar[int] = contextvars.ContextVar(
    "rho_iteration_cap", default=DEFAULT_RHO_ITERATIONS
)


@contextlib.contextmanager
def rho_iteration_cap(value: int):
    """Scoped override of the Pollard-rho iteration cap."""
    if value <= 0:
        raise InvalidInput("factoring effort cap must be positive")
    token = _rho_cap.set(value)
    try:
        yield
    finally:
        _rho_cap.reset(token)

# strong pseudoprime witnesses: deterministic for n < 3.3 * 10^24
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_spf_sieve: list[int] = []


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, u, v) with u*a + v*b = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    if old_r < 0:
        old_r, old_u, old_v = -old_r, -old_u, -old_v
    return old_r, old_u, old_v


def is_prime(n: int) -> bool:
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
    for a in _MR_WITNESSES:
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


def _pollard_rho(n: int, max_iterations: int) -> int:
    """Find a nontrivial factor of composite odd n, or raise."""
    # Brent's cycle detection; deterministic over increasing parameters.
    for c in range(1, 64):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        count = 0
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
            count += r
            if count > max_iterations:
                break
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
                count += 1
                if count > max_iterations:
                    break
        if 1 < g < n:
            return g
    raise FactorizationIncomplete(f"no factor of {n} found within the iteration cap")


def factorize(n: int, rho_iterations: int | None = None) -> dict[int, int]:
    """Factor n > 0 into {prime: exponent}."""
    if rho_iterations is None:
        rho_iterations = _rho_cap.get()
    if n <= 0:
        raise InvalidInput("factorize expects a positive integer")
    factors: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    p = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while p * p <= n and p <= TRIAL_BOUND:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += wheel[i]
        i = (i + 1) % 8
    if n == 1:
        return factors
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        g = _pollard_rho(m, rho_iterations)
        stack.append(g)
        stack.append(m // g)
    return dict(sorted(factors.items()))


def euler_phi(n: int, rho_iterations: int | None = None) -> int:
    result = n
    for p in factorize(n, rho_iterations):
        result -= result // p
    return result


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, k) with q = p^k if q is a prime power, else None."""
    if q < 2:
        return None
    fac = factorize(q)
    if len(fac) != 1:
        return None
    (p, k), = fac.items()
    return p, k


def _ensure_spf(limit: int) -> list[int]:
    """Smallest-prime-factor sieve used for fast squarefree tests."""
    global _spf_sieve
    if len(_spf_sieve) <= limit:
        size = max(limit + 1, 2 * len(_spf_sieve), 1 << 12)
        spf = list(range(size))
        for i in range(2, isqrt(size - 1) + 1):
            if spf[i] == i:
                for j in range(i * i, size, i):
                    if spf[j] == j:
                        spf[j] = i
        _spf_sieve = spf
    return _spf_sieve


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    if n < 10 ** 7:
        spf = _ensure_spf(n)
        while n > 1:
            p = spf[n]
            n //= p
            if n % p == 0:
                return False
        return True
    return all(e == 1 for e in factorize(n).values())


def is_fundamental_discriminant(d: int) -> bool:
    """Fundamental discriminant of an imaginary quadratic field (d < 0)."""
    if d >= 0:
        return False
    if d % 4 == 1:
        return is_squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def fundamental_discriminants(bound: int) -> list[int]:
    """All fundamental discriminants d < 0 with |d| <= bound, descending d."""
    return [d for d in range(-3, -bound - 1, -1) if is_fundamental_discriminant(d)]


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a | n)."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    if n % 2 == 0:
        if a % 2 == 0:
            return 0
        while n % 2 == 0:
            n //= 2
            if a % 8 in (3, 5):
                result = -result
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of a modulo prime p, or None if a is a non-residue."""
    a %= p
    if p == 2 or a == 0:
        return a % p
    if kronecker(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while kronecker(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r

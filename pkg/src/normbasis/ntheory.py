"""Small integer number theory helpers (trial division scale)."""

from math import gcd

from .errors import NotCoprime


def is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n):
    """Return the prime factorization of ``n >= 1`` as a dict ``{prime: exponent}``."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_divisors(n):
    return sorted(factorize(n))


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def prime_power(q):
    """Split ``q = p**m`` with ``p`` prime; raise ValueError otherwise."""
    f = factorize(q) if q > 1 else {}
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, m), = f.items()
    return p, m


def mult_order(q, n):
    """Multiplicative order of ``q`` modulo ``n`` (``n = 1`` gives 1).

    >>> mult_order(2, 7)
    3
    """
    if n < 1:
        raise ValueError("modulus must be positive")
    if gcd(q, n) != 1:
        raise NotCoprime(f"gcd({q}, {n}) != 1")
    if n == 1:
        return 1
    # the order divides the Carmichael-ish bound phi(n); walk divisors of phi(n)
    phi = euler_phi(n)
    for d in divisors(phi):
        if pow(q, d, n) == 1:
            return d
    raise AssertionError("unreachable: q^phi(n) = 1 mod n")


def euler_phi(n):
    result = n
    for p in factorize(n):
        result -= result // p
    return result


def legendre(r, n):
    """Legendre symbol (r/n) for an odd prime ``n`` via Euler's criterion."""
    r %= n
    if r == 0:
        return 0
    return 1 if pow(r, (n - 1) // 2, n) == 1 else -1


def is_primitive_root(g, n):
    """True iff ``g`` generates the cyclic group (Z/nZ)* for prime ``n``."""
    if gcd(g, n) != 1:
        return False
    phi = n - 1
    return all(pow(g, phi // ell, n) != 1 for ell in prime_divisors(phi))

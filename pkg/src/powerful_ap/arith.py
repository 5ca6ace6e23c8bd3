"""Integer kernel: primality, budgeted factoring, powerful-number decompositions.

Everything works on plain Python ints (arbitrary precision).  Factoring is
trial division by primes up to 10^6 followed by Brent-cycle Pollard rho on
whatever composite cofactor remains.  Rho work is metered: each call gets
an iteration budget and raises BudgetExceeded instead of ever returning a
wrong or partial answer.  Primality uses the 13-base deterministic
Miller-Rabin test below 3.3e24 and Baillie-PSW above.

is_powerful avoids full factorization where it can: after stripping primes
up to 10^4 it classifies the cofactor by square/cube/perfect-power root
extraction and primality tests, splitting with rho only as a last resort.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

from .errors import BudgetExceeded, InvalidInput, NotPowerful

# Reporting precision (significant digits) for every derived ratio/quality.
RATIO_DIGITS = 50

TRIAL_DIVISION_BOUND = 10**6
SMALL_PRIME_BOUND = 10**4  # stripping bound for the is_powerful fast path
DEFAULT_RHO_BUDGET = 4_000_000

# Largest n for which Miller-Rabin with the fixed 13-base set is a proof.
_MR_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

_primes: list[int] | None = None
_small_primes: list[int] | None = None


def _prime_list() -> list[int]:
    """Primes up to TRIAL_DIVISION_BOUND (sieved once, cached)."""
    global _primes, _small_primes
    if _primes is None:
        n = TRIAL_DIVISION_BOUND
        sieve = bytearray([1]) * (n + 1)
        sieve[0] = sieve[1] = 0
        for p in range(2, math.isqrt(n) + 1):
            if sieve[p]:
                sieve[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
        _primes = [i for i in range(2, n + 1) if sieve[i]]
        _small_primes = _primes[: bisect.bisect_right(_primes, SMALL_PRIME_BOUND)]
    return _primes


def _small_prime_list() -> list[int]:
    _prime_list()
    assert _small_primes is not None
    return _small_primes


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as an ascending tuple of (prime, exponent) pairs."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise InvalidInput(f"malformed factorization: {self.factors!r}")
            last = p

    @property
    def n(self) -> int:
        """The factored integer (product of p**e)."""
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)


def merged(*factorizations: Factorization) -> Factorization:
    """Factorization of the product (exponents add; inputs need not be coprime)."""
    acc: dict[int, int] = {}
    for f in factorizations:
        for p, e in f:
            acc[p] = acc.get(p, 0) + e
    return Factorization(tuple(sorted(acc.items())))


# ---------------------------------------------------------------- primality

def _sprp(n: int, a: int) -> bool:
    """Strong probable-prime test to base a (n odd, n > 2)."""
    a %= n
    if a == 0:
        return True
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n > 0."""
    assert n > 0 and n % 2 == 1
    a %= n
    result = 1
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


def _strong_lucas_prp(n: int) -> bool:
    """Strong Lucas probable-prime test with Selfridge parameters (n odd,
    n > 2, not a perfect square)."""
    d_param = 5
    while True:
        j = _jacobi(d_param, n)
        if j == -1:
            break
        if j == 0:
            return False  # shares a factor with d_param; n > |d_param| here
        d_param = -(d_param + 2) if d_param > 0 else -(d_param - 2)
    q = (1 - d_param) // 4
    # n + 1 = d * 2^s with d odd
    d, s = n + 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    inv2 = (n + 1) // 2
    u, v, qk = 1, 1, q % n  # U_1, V_1 (P = 1), Q^1
    for bit in bin(d)[3:]:
        u, v = u * v % n, (v * v - 2 * qk) % n
        qk = qk * qk % n
        if bit == "1":
            u, v = (u + v) * inv2 % n, (d_param * u + v) * inv2 % n
            qk = qk * q % n
    if u == 0 or v == 0:
        return True
    for _ in range(s - 1):
        v = (v * v - 2 * qk) % n
        qk = qk * qk % n
        if v == 0:
            return True
    return False


def is_prime(n: int) -> bool:
    """Certified primality: deterministic Miller-Rabin below 3.3e24, BPSW above."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        if n == p:
            return True
        if n % p == 0:
            return False
    if n < _MR_DETERMINISTIC_BOUND:
        return all(_sprp(n, a) for a in _MR_BASES)
    r = math.isqrt(n)
    if r * r == n:
        return False
    return _sprp(n, 2) and _strong_lucas_prp(n)


# ----------------------------------------------------------- roots / powers

def integer_nth_root(n: int, k: int) -> int:
    """floor(n ** (1/k)) by Newton iteration on integers."""
    if n < 0 or k < 1:
        raise InvalidInput(f"integer_nth_root({n}, {k})")
    if n in (0, 1) or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    if k >= n.bit_length():
        return 1
    x = 1 << -(-n.bit_length() // k)  # >= true root
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _perfect_power(n: int) -> tuple[int, int] | None:
    """(root, k) with root**k == n and k >= 2 prime, else None."""
    if n < 4:
        return None
    for k in _prime_list():
        if k >= n.bit_length():
            break
        r = integer_nth_root(n, k)
        if r**k == n:
            return r, k
    return None


# ------------------------------------------------------------------- budget

class _Budget:
    """Mutable rho-iteration meter shared across one factoring call."""

    __slots__ = ("remaining", "number")

    def __init__(self, iterations: int, number: int):
        self.remaining = iterations
        self.number = number

    def spend(self, amount: int) -> None:
        self.remaining -= amount
        if self.remaining < 0:
            raise BudgetExceeded(
                f"factoring budget exhausted on {self.number}",
                number=self.number,
            )


def _brent_rho(n: int, budget: _Budget) -> int:
    """A nontrivial factor of composite n (no prime factors <= 10^6, not a
    perfect power).  Deterministic: fixed start x0=2 and polynomial offsets
    c = 1, 2, 3, ... so results never depend on external randomness."""
    batch = 128
    for c in range(1, 10_000):
        y, r, q = 2, 1, 1
        g, ys, x = 1, y, y
        while g == 1:
            x = y
            budget.spend(r)
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                steps = min(batch, r - k)
                budget.spend(steps)
                for _ in range(steps):
                    y = (y * y + c) % n
                    q = q * (x - y) % n
                g = math.gcd(q, n)
                k += steps
            r *= 2
        if g == n:
            # a whole batch collapsed; redo it one step at a time
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                budget.spend(1)
                g = math.gcd(x - ys, n)
        if g != n:
            return g
        # cycle found the trivial divisor; retry with the next offset
    raise BudgetExceeded(f"rho failed on {n}", number=budget.number)


def _factor_into(n: int, mult: int, out: dict[int, int], budget: _Budget) -> None:
    """Accumulate prime factors of n (counted mult times) into out.
    n has no prime factors <= TRIAL_DIVISION_BOUND."""
    stack = [(n, mult)]
    while stack:
        m, mu = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + mu
            continue
        pp = _perfect_power(m)
        if pp is not None:
            stack.append((pp[0], mu * pp[1]))
            continue
        d = _brent_rho(m, budget)
        assert 1 < d < m and m % d == 0
        stack.append((d, mu))
        stack.append((m // d, mu))


def factorize(n: int, budget: int | None = None) -> Factorization:
    """Complete prime factorization of n >= 1.

    Raises BudgetExceeded if the rho iteration budget runs out on a hard
    cofactor; never returns an unverified factorization.
    """
    if n < 1:
        raise InvalidInput(f"factorize requires n >= 1, got {n}")
    original = n
    acc: dict[int, int] = {}
    for p in _prime_list():
        if p * p > n:
            break
        if n % p == 0:
            e = 1
            n //= p
            while n % p == 0:
                n //= p
                e += 1
            acc[p] = e
    if n > 1:
        if n <= TRIAL_DIVISION_BOUND * TRIAL_DIVISION_BOUND or is_prime(n):
            # no divisor <= 10^6 and n <= 10^12 forces primality
            acc[n] = acc.get(n, 0) + 1
        else:
            meter = _Budget(DEFAULT_RHO_BUDGET if budget is None else budget, original)
            _factor_into(n, 1, acc, meter)
    result = Factorization(tuple(sorted(acc.items())))
    assert result.n == original
    return result


def radical(n: int, budget: int | None = None) -> int:
    """Squarefree kernel: product of the distinct primes dividing n."""
    if n < 1:
        raise InvalidInput(f"radical requires n >= 1, got {n}")
    out = 1
    for p, _ in factorize(n, budget):
        out *= p
    return out


def valuation(p: int, n: int) -> int:
    """p-adic valuation of n (largest e with p**e | n); no factoring needed.

    p must be at least 2 (callers pass primes); n must be nonzero.
    """
    if p < 2:
        raise InvalidInput(f"valuation requires p >= 2, got {p}")
    if n == 0:
        raise InvalidInput("valuation of 0 is undefined")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def is_squarefree(n: int, budget: int | None = None) -> bool:
    """True iff no prime divides n twice."""
    if n < 1:
        raise InvalidInput(f"is_squarefree requires n >= 1, got {n}")
    if n < 4:
        return True
    r = math.isqrt(n)
    if r * r == n:
        return False
    return all(e == 1 for _, e in factorize(n, budget))


# --------------------------------------------------------- powerful numbers

def _powerful_core(c: int, budget: _Budget) -> bool:
    """Powerfulness of a cofactor with no prime factor <= SMALL_PRIME_BOUND.

    Root extraction and primality tests settle the common shapes (1, perfect
    square/cube/power, prime) without factoring; only mixed-exponent leftovers
    get split with rho, peeling one prime at a time so a huge square factor
    can still be recognized cheaply once the small part is gone.
    """
    while True:
        if c == 1:
            return True
        r = math.isqrt(c)
        if r * r == c:
            return True
        if is_prime(c):
            return False
        pp = _perfect_power(c)
        if pp is not None:
            return True  # exponents all multiples of pp[1] >= 2
        d = _brent_rho(c, budget)
        while not is_prime(d):
            sub = _perfect_power(d)
            d = sub[0] if sub is not None else _brent_rho(d, budget)
        e = 0
        while c % d == 0:
            c //= d
            e += 1
        assert e >= 1
        if e == 1:
            return False


def is_powerful(n: int, budget: int | None = None) -> bool:
    """True iff every prime dividing n divides it at least twice."""
    if n < 1:
        raise InvalidInput(f"is_powerful requires n >= 1, got {n}")
    if n == 1:
        return True
    for p in _small_prime_list():
        if p * p > n:
            return n == 1  # leftover > 1 would be prime, hence exponent 1
        if n % p == 0:
            e = 1
            n //= p
            while n % p == 0:
                n //= p
                e += 1
            if e == 1:
                return False
            if n == 1:
                return True
    meter = _Budget(DEFAULT_RHO_BUDGET if budget is None else budget, n)
    return _powerful_core(n, meter)


@dataclass(frozen=True)
class SquarefreeDecomp:
    """n = a^2 * b with b squarefree (the unique such splitting)."""

    a: int
    b: int

    @property
    def n(self) -> int:
        return self.a * self.a * self.b


@dataclass(frozen=True)
class PowerfulDecomp:
    """n = a^2 * b^3 with b squarefree (unique for powerful n)."""

    a: int
    b: int

    @property
    def n(self) -> int:
        return self.a * self.a * self.b**3


def decompose_square_times_squarefree(n: int, budget: int | None = None) -> SquarefreeDecomp:
    """Split n >= 1 as a^2 * b with b squarefree."""
    if n < 1:
        raise InvalidInput(f"decompose requires n >= 1, got {n}")
    a, b = 1, 1
    for p, e in factorize(n, budget):
        a *= p ** (e // 2)
        if e % 2:
            b *= p
    assert a * a * b == n
    return SquarefreeDecomp(a, b)


def decompose_powerful(n: int, budget: int | None = None) -> PowerfulDecomp:
    """Split powerful n as a^2 * b^3 with b squarefree.

    Raises NotPowerful when some prime divides n exactly once.
    """
    if n < 1:
        raise InvalidInput(f"decompose_powerful requires n >= 1, got {n}")
    a, b = 1, 1
    for p, e in factorize(n, budget):
        if e == 1:
            raise NotPowerful(f"{n} is not powerful: {p} divides it exactly once")
        if e % 2:
            a *= p ** ((e - 3) // 2)
            b *= p
        else:
            a *= p ** (e // 2)
    assert a * a * b**3 == n
    return PowerfulDecomp(a, b)

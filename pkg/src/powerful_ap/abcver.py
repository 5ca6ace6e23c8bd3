"""Structural verification of 3-term progressions of powerful numbers.

Every 3-AP N, N+d, N+2d of powerful numbers t_i = a_i^2 b_i^3 satisfies
(N+d)^2 = N(N+2d) + d^2 exactly.  After dividing out cube factors common
to all three b_i (reduce_triple) and setting D = gcd(N+d, d), the three
quotients t_i/D give an exact sum

    (t_1/D)(t_3/D) + (d/D)^2 = (t_2/D)^2

of pairwise coprime terms, which is an abc triple.  This module checks,
with nothing but integer arithmetic:

* the square identity itself (ap_identity_check);
* that D^2 computed three different ways agrees and D divides each term
  (compute_D; disagreement raises ConsistencyFailure);
* the valuation bound 3*nu_p(ab) >= delta whenever p^delta | a^2 b^3
  (lemma_check);
* the radical inequality kappa(q_1 q_2 q_3) * D <= a_1 b_1 a_2 b_2 a_3 b_3
  and its per-prime refinement nu_p(a_1 b_1 ... b_3) - nu_p(D) >= lhs,
  where lhs is 1 when p divides some quotient and 0 otherwise.

The abc quality log(c)/log(kappa(abc)) of the induced triple is reported
to 50 digits but never asserted against a bound; a quality above 1.6
would be an extraordinary find, not a test failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext

from .arith import (
    RATIO_DIGITS,
    PowerfulDecomp,
    factorize,
    is_prime,
    merged,
    valuation,
)
from .constructions import APWitness, validate_witness
from .errors import (
    ConsistencyFailure,
    InvalidInput,
    NotASum,
    NotCoprime,
    PreconditionViolated,
)


@dataclass(frozen=True)
class PrimeCheck:
    """One row of the per-prime valuation table for a reduced triple.

    case tags which of b_1, b_2, b_3 the prime divides (case1: none,
    case2: one, case3: two) and the parity of nu_d; primes not dividing D
    are tagged D-coprime.  Diagnostic only.
    """

    p: int
    nu_d: int
    lhs: int
    rhs: int
    ok: bool
    case: str


@dataclass(frozen=True)
class TripleAnalysis:
    witness: APWitness
    reduced: APWitness
    D: int
    quotients: tuple[int, int, int]
    quotient_radical: int
    per_prime: tuple[PrimeCheck, ...]
    abc: tuple[int, int, int]
    kappa: int
    quality: Decimal

    def all_ok(self) -> bool:
        return all(row.ok for row in self.per_prime)


def ap_identity_check(n: int, d: int) -> bool:
    """Exact check of (N+d)^2 == N(N+2d) + d^2.

    True for every N, d by algebra; exercising it on concrete values
    guards the integer plumbing, not the mathematics.
    """
    if n < 1 or d < 1:
        raise InvalidInput(f"need N >= 1 and d >= 1, got N={n}, d={d}")
    return (n + d) ** 2 == n * (n + 2 * d) + d * d


def _require_3ap(w: APWitness) -> None:
    if w.k != 3:
        raise InvalidInput(f"expected a 3-term witness, got k={w.k}")


def reduce_triple(w: APWitness, budget: int | None = None) -> APWitness:
    """Divide out p^3 for every prime p dividing all of b_1, b_2, b_3.

    The result is the same progression with gcd(b_1, b_2, b_3) = 1; a
    witness already in that state is returned unchanged.
    """
    _require_3ap(w)
    g = math.gcd(w.decomps[0].b, w.decomps[1].b, w.decomps[2].b)
    if g == 1:
        return w
    # g is squarefree (it divides a squarefree number), so one pass of
    # dividing by g^3 removes every shared prime completely.
    g3 = g ** 3
    params = dict(w.params)
    params["reduced_by"] = params.get("reduced_by", 1) * g
    out = APWitness(
        k=3,
        terms=tuple(t // g3 for t in w.terms),
        d=w.d // g3,
        decomps=tuple(PowerfulDecomp(dec.a, dec.b // g) for dec in w.decomps),
        family=w.family,
        params=params,
    )
    validate_witness(out, budget)
    assert math.gcd(out.decomps[0].b, out.decomps[1].b, out.decomps[2].b) == 1
    return out


def compute_D(w: APWitness) -> int:
    """D = gcd(N+d, d) for a reduced triple, with cross-checked structure.

    D^2 must equal gcd(t_2^2, d^2), gcd(t_2^2, t_1 t_3) and
    gcd(t_1 t_3, d^2), and D must divide t_1 and t_3 as well; any
    disagreement means broken arithmetic and raises ConsistencyFailure.
    """
    _require_3ap(w)
    if math.gcd(w.decomps[0].b, w.decomps[1].b, w.decomps[2].b) != 1:
        raise InvalidInput("witness must be reduced first (shared b factor)")
    t1, t2, t3 = w.terms
    d = w.d
    D = math.gcd(t2, d)
    D2 = D * D
    forms = (
        math.gcd(t2 * t2, d * d),
        math.gcd(t2 * t2, t1 * t3),
        math.gcd(t1 * t3, d * d),
    )
    if any(f != D2 for f in forms):
        raise ConsistencyFailure(
            f"D^2 forms disagree for terms {w.terms}: {D2} vs {forms}"
        )
    if t1 % D or t3 % D:
        raise ConsistencyFailure(f"D={D} does not divide outer terms {t1}, {t3}")
    return D


def lemma_check(a: int, b: int, p: int, delta: int) -> bool:
    """True iff 3*nu_p(ab) >= delta, given the premise p^delta | a^2 b^3."""
    if a < 1 or b < 1:
        raise InvalidInput(f"need a, b >= 1, got a={a}, b={b}")
    if delta < 1:
        raise InvalidInput(f"need delta >= 1, got {delta}")
    if not is_prime(p):
        raise InvalidInput(f"p must be prime, got {p}")
    if (a * a * b ** 3) % p ** delta:
        raise PreconditionViolated(f"{p}^{delta} does not divide {a}^2*{b}^3")
    return 3 * valuation(p, a * b) >= delta


def _case_tag(w: APWitness, p: int, nu_d: int) -> str:
    if nu_d == 0:
        return "D-coprime"
    hits = sum(1 for dec in w.decomps if dec.b % p == 0)
    parity = "even" if nu_d % 2 == 0 else "odd"
    return f"case{hits + 1}/{parity}"


def analyze_triple(w: APWitness, budget: int | None = None) -> TripleAnalysis:
    """Run the whole battery on one 3-AP and collect the evidence.

    Factors each a_i, b_i and d/D once (the only potentially expensive
    step; `budget` caps the work per number) and reuses those
    factorizations for the radical, the per-prime table, and the abc
    quality, so hard witnesses are not paid for twice.
    """
    _require_3ap(w)
    validate_witness(w, budget)
    if not ap_identity_check(w.terms[0], w.d):
        raise ConsistencyFailure(f"square identity fails for {w.terms}")

    red = reduce_triple(w, budget)
    D = compute_D(red)
    quotients = tuple(t // D for t in red.terms)
    dd = red.d // D
    q1, q2, q3 = quotients
    abc = (q1 * q3, dd * dd, q2 * q2)
    if abc[0] + abc[1] != abc[2]:
        raise ConsistencyFailure(f"quotient identity fails for {red.terms}")
    if (
        math.gcd(abc[0], abc[1]) != 1
        or math.gcd(abc[0], abc[2]) != 1
        or math.gcd(abc[1], abc[2]) != 1
    ):
        raise ConsistencyFailure(f"quotient terms not pairwise coprime: {abc}")

    fact_ab = merged(
        *(factorize(dec.a, budget) for dec in red.decomps),
        *(factorize(dec.b, budget) for dec in red.decomps),
    )
    fact_dd = factorize(dd, budget)
    nu_ab = fact_ab.as_dict()

    rows = []
    quotient_radical = 1
    for p in fact_ab.primes():
        nu_d = valuation(p, D)
        lhs = 1 if any(q % p == 0 for q in quotients) else 0
        rhs = nu_ab[p] - nu_d
        rows.append(
            PrimeCheck(
                p=p, nu_d=nu_d, lhs=lhs, rhs=rhs,
                ok=rhs >= lhs, case=_case_tag(red, p, nu_d),
            )
        )
        if lhs:
            quotient_radical *= p

    kappa = 1
    for p in sorted(set(fact_ab.primes()) | set(fact_dd.primes())):
        if q1 % p == 0 or q2 % p == 0 or q3 % p == 0 or dd % p == 0:
            kappa *= p
    with localcontext() as ctx:
        ctx.prec = RATIO_DIGITS + 15
        quality = Decimal(abc[2]).ln() / Decimal(kappa).ln()
        ctx.prec = RATIO_DIGITS
        quality = +quality

    return TripleAnalysis(
        witness=w,
        reduced=red,
        D=D,
        quotients=quotients,
        quotient_radical=quotient_radical,
        per_prime=tuple(rows),
        abc=abc,
        kappa=kappa,
        quality=quality,
    )


def radical_inequality_check(t: TripleAnalysis) -> bool:
    """kappa(q_1 q_2 q_3) * D <= a_1 b_1 a_2 b_2 a_3 b_3, exactly.

    Expected true on every valid reduced triple; a False here is a
    reportable discovery (or a bug), not a condition to swallow.
    """
    product_ab = math.prod(dec.a * dec.b for dec in t.reduced.decomps)
    return t.quotient_radical * t.D <= product_ab


def valuation_inequality_check(t: TripleAnalysis, p: int) -> tuple[int, int, bool]:
    """(lhs, rhs, ok) of the per-prime bound at p, recomputed from scratch.

    lhs is nu_p of the radical of q_1 q_2 q_3 (so 0 or 1); rhs is
    nu_p(a_1 b_1 a_2 b_2 a_3 b_3) - nu_p(D).  Any prime is allowed; for p
    dividing nothing the result is (0, 0, True).
    """
    if not is_prime(p):
        raise InvalidInput(f"p must be prime, got {p}")
    lhs = 1 if any(q % p == 0 for q in t.quotients) else 0
    product_ab = math.prod(dec.a * dec.b for dec in t.reduced.decomps)
    rhs = valuation(p, product_ab) - valuation(p, t.D)
    return lhs, rhs, rhs >= lhs


def abc_quality(a: int, b: int, c: int, budget: int | None = None) -> Decimal:
    """log(c) / log(kappa(abc)) to 50 digits for an abc triple a + b = c.

    The three terms are pairwise coprime once gcd(a, b) = 1, so the
    radical is computed factor-by-factor instead of on the product.
    """
    if a < 1 or b < 1:
        raise InvalidInput(f"need a, b >= 1, got a={a}, b={b}")
    if a + b != c:
        raise NotASum(f"{a} + {b} != {c}")
    if math.gcd(a, b) != 1:
        raise NotCoprime(f"gcd({a}, {b}) = {math.gcd(a, b)} != 1")
    kappa = 1
    for p in merged(
        factorize(a, budget), factorize(b, budget), factorize(c, budget)
    ).primes():
        kappa *= p
    with localcontext() as ctx:
        ctx.prec = RATIO_DIGITS + 15
        q = Decimal(c).ln() / Decimal(kappa).ln()
        ctx.prec = RATIO_DIGITS
        return +q

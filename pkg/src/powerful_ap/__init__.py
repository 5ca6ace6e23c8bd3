"""Arithmetic progressions of powerful numbers.

A powerful number is a positive integer n with p^2 | n for every prime
p | n; equivalently n = a^2 * b^3 with b squarefree.  This package
constructs explicit k-term arithmetic progressions of such numbers,
searches exhaustively for progressions below a bound, and verifies the
gcd/radical/valuation structure that every 3-term progression carries.

The pieces:

* arith: factoring, primality, valuations, powerful-number predicates.
* pell: solutions of X^2 - 2Y^2 = +-1, which drive the constructions.
* constructions: the closed-form 3/4/5-term families, the inductive
  extension step to arbitrary k, and the growth constants C_k.
* search: enumeration of all powerful numbers up to a limit and
  windowed AP search over the table.
* abcver: the identity, gcd-consistency, radical and per-prime
  valuation checks, plus abc-triple quality reporting.
* cli: `powerful-ap construct | search | verify | report`.
"""

from .arith import (
    DEFAULT_RHO_BUDGET,
    Factorization,
    PowerfulDecomp,
    SquarefreeDecomp,
    decompose_powerful,
    decompose_square_times_squarefree,
    factorize,
    integer_nth_root,
    is_powerful,
    is_prime,
    is_squarefree,
    radical,
    valuation,
)
from .abcver import (
    PrimeCheck,
    TripleAnalysis,
    abc_quality,
    analyze_triple,
    ap_identity_check,
    compute_D,
    lemma_check,
    radical_inequality_check,
    reduce_triple,
    valuation_inequality_check,
)
from .constructions import (
    APWitness,
    ck_constants,
    default_theta,
    extend_ap,
    extension_exponent,
    five_ap,
    four_ap,
    long_ap,
    pell_3ap,
    ratio_bound_holds,
    squares_3ap,
    theta_ratio,
    validate_witness,
    witness_ok,
)
from .errors import (
    BudgetExceeded,
    CacheError,
    CapacityExceeded,
    ConsistencyFailure,
    InvalidInput,
    InvalidWitness,
    NotASum,
    NotCoprime,
    NotPowerful,
    PowerfulAPError,
    PreconditionViolated,
)
from .pell import PellKind, PellSolution, iter_pell_neg, iter_pell_pos, pell_solution
from .search import (
    APRecord,
    PowerfulTable,
    ap_witness,
    consecutive_check,
    enumerate_powerful,
    find_3aps,
    find_kaps,
    load_table,
    record_min_ratio,
    save_table,
    table_for,
)

__version__ = "0.1.0"

__all__ = [
    "APRecord",
    "APWitness",
    "BudgetExceeded",
    "CacheError",
    "CapacityExceeded",
    "ConsistencyFailure",
    "DEFAULT_RHO_BUDGET",
    "Factorization",
    "InvalidInput",
    "InvalidWitness",
    "NotASum",
    "NotCoprime",
    "NotPowerful",
    "PellKind",
    "PellSolution",
    "PowerfulAPError",
    "PowerfulDecomp",
    "PowerfulTable",
    "PreconditionViolated",
    "PrimeCheck",
    "SquarefreeDecomp",
    "TripleAnalysis",
    "abc_quality",
    "analyze_triple",
    "ap_identity_check",
    "ap_witness",
    "ck_constants",
    "compute_D",
    "consecutive_check",
    "decompose_powerful",
    "decompose_square_times_squarefree",
    "default_theta",
    "enumerate_powerful",
    "extend_ap",
    "extension_exponent",
    "factorize",
    "find_3aps",
    "find_kaps",
    "five_ap",
    "four_ap",
    "integer_nth_root",
    "is_powerful",
    "is_prime",
    "is_squarefree",
    "iter_pell_neg",
    "iter_pell_pos",
    "lemma_check",
    "load_table",
    "long_ap",
    "pell_3ap",
    "pell_solution",
    "radical",
    "radical_inequality_check",
    "ratio_bound_holds",
    "record_min_ratio",
    "reduce_triple",
    "save_table",
    "squares_3ap",
    "table_for",
    "theta_ratio",
    "valuation",
    "valuation_inequality_check",
    "validate_witness",
    "witness_ok",
]

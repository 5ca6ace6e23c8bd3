"""Exhaustive enumeration of powerful numbers and AP discovery among them.

The table generator walks n = a^2 * b^3 over squarefree b (sieve up to
limit^(1/3), a-loop innermost), which hits every powerful number exactly
once.  AP search is a windowed pair scan over the sorted table with hash
probes for the remaining terms, so the cost is (table size) * (pairs per
d_max window) rather than quadratic.

Both the enumeration and the scan can shard across threads; shards are
merged and sorted deterministically, so any thread count produces
byte-identical output.  Tables can be persisted to a checksummed cache
file for repeated runs.
"""

from __future__ import annotations

import hashlib
import math
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from decimal import Decimal, localcontext

from .arith import RATIO_DIGITS, decompose_powerful, integer_nth_root
from .constructions import FAMILY_SEARCH, APWitness, validate_witness
from .errors import CacheError, CapacityExceeded, InvalidInput

# Soft memory guard: ~2.173*sqrt(limit) values expected, each a Python int.
DEFAULT_MAX_VALUES = 5_000_000

_CACHE_HEADER = re.compile(
    r"POWERFUL-TABLE v1 limit=(\d+) count=(\d+) sha256=([0-9a-f]{64})"
)


def _ratio_half(n: int, d: int) -> Decimal:
    """d / sqrt(n) to 50 significant digits."""
    with localcontext() as ctx:
        ctx.prec = RATIO_DIGITS + 10
        r = Decimal(d) / Decimal(n).sqrt()
        ctx.prec = RATIO_DIGITS
        return +r


@dataclass(frozen=True)
class APRecord:
    """A k-term AP of powerful numbers found by search: N, N+d, .., N+(k-1)d.

    ratio_half is d / sqrt(N); for 3-APs that is the quantity whose record
    minima probe how small a difference a progression can have.
    """

    n: int
    d: int
    k: int
    ratio_half: Decimal

    def terms(self) -> tuple[int, ...]:
        return tuple(self.n + i * self.d for i in range(self.k))


class PowerfulTable:
    """All powerful numbers up to `limit`, sorted, with O(1) membership."""

    __slots__ = ("limit", "values", "_members")

    def __init__(self, limit: int, values: tuple[int, ...]):
        if limit < 1:
            raise InvalidInput(f"limit must be >= 1, got {limit}")
        self.limit = limit
        self.values = values
        self._members: frozenset[int] | None = None

    @property
    def members(self) -> frozenset[int]:
        if self._members is None:
            self._members = frozenset(self.values)
        return self._members

    def __contains__(self, n: int) -> bool:
        return n in self.members

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __repr__(self) -> str:
        return f"PowerfulTable(limit={self.limit}, count={len(self.values)})"


def _squarefree_flags(bound: int) -> bytearray:
    """flags[i] == 1 iff i is squarefree, for 0 <= i <= bound."""
    flags = bytearray([1]) * (bound + 1)
    if bound >= 0:
        flags[0] = 0
    for q in range(2, math.isqrt(bound) + 1):
        step = q * q
        flags[step :: step] = bytearray(len(range(step, bound + 1, step)))
    return flags


def _emit_range(limit: int, bs: list[int]) -> list[int]:
    out = []
    for b in bs:
        b3 = b * b * b
        for a in range(1, math.isqrt(limit // b3) + 1):
            out.append(a * a * b3)
    return out


def enumerate_powerful(limit: int, threads: int = 1,
                       max_values: int = DEFAULT_MAX_VALUES) -> PowerfulTable:
    """Build the table of all powerful numbers <= limit.

    Work is sharded by squarefree-b residue classes across `threads`
    workers; the merged result is sorted, so the output does not depend on
    the thread count.  Raises CapacityExceeded before allocating anything
    if the expected table size (about 2.173*sqrt(limit)) is over
    max_values.
    """
    if limit < 1:
        raise InvalidInput(f"limit must be >= 1, got {limit}")
    if threads < 1:
        raise InvalidInput(f"threads must be >= 1, got {threads}")
    estimate = (22 * math.isqrt(limit)) // 10 + 16
    if estimate > max_values:
        raise CapacityExceeded(
            f"expect about {estimate} powerful numbers up to {limit}, "
            f"over the cap of {max_values}"
        )
    bmax = integer_nth_root(limit, 3)
    flags = _squarefree_flags(bmax)
    bs = [b for b in range(1, bmax + 1) if flags[b]]
    if threads == 1 or len(bs) <= threads:
        values = _emit_range(limit, bs)
    else:
        shards = [bs[i::threads] for i in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda s: _emit_range(limit, s), shards))
        values = [v for chunk in chunks for v in chunk]
    values.sort()
    # (a, b) -> a^2*b^3 is injective for squarefree b, so a repeat means
    # the generator is broken, not the input.
    for i in range(1, len(values)):
        if values[i] == values[i - 1]:
            raise AssertionError(f"duplicate powerful value {values[i]}")
    return PowerfulTable(limit, tuple(values))


# ----------------------------------------------------------------- AP search

def _scan_range(values: tuple[int, ...], members: frozenset[int], k: int,
                d_max: int, start: int, step: int) -> list[tuple[int, int]]:
    found = []
    total = len(values)
    for i in range(start, total, step):
        n = values[i]
        for j in range(i + 1, total):
            d = values[j] - n
            if d > d_max:
                break
            if all(n + t * d in members for t in range(2, k)):
                found.append((n, d))
    return found


def find_kaps(table: PowerfulTable, k: int, d_max: int,
              threads: int = 1) -> list[APRecord]:
    """All (N, d) with d <= d_max and N, N+d, ..., N+(k-1)d in the table.

    Exhaustive within the window: the outer scan visits every ordered pair
    (N, N+d) with d <= d_max, and set probes check the remaining k-2
    terms.  A progression of length > k shows up once per starting term,
    which keeps the k=4 output consistent with its sub-3-APs.  Sorted by
    (N, d); thread count never changes the result.
    """
    if k < 3:
        raise InvalidInput(f"k must be >= 3, got {k}")
    if d_max < 0:
        raise InvalidInput(f"d_max must be >= 0, got {d_max}")
    values, members = table.values, table.members
    if threads < 1:
        raise InvalidInput(f"threads must be >= 1, got {threads}")
    if threads == 1:
        pairs = _scan_range(values, members, k, d_max, 0, 1)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(
                pool.map(
                    lambda s: _scan_range(values, members, k, d_max, s, threads),
                    range(threads),
                )
            )
        pairs = [p for chunk in chunks for p in chunk]
    pairs.sort()
    return [APRecord(n, d, k, _ratio_half(n, d)) for n, d in pairs]


def find_3aps(table: PowerfulTable, d_max: int,
              threads: int = 1) -> list[APRecord]:
    """All 3-term APs with difference at most d_max."""
    return find_kaps(table, 3, d_max, threads)


def consecutive_check(table: PowerfulTable) -> list[tuple[int, ...]]:
    """Maximal runs of consecutive powerful numbers with length >= 2.

    A run of length 3 would refute the expectation that n and n+1 are
    never both powerful alongside n+2; none is known, so any such run in
    the output is a finding to report loudly.
    """
    members = table.members
    runs = []
    for v in table.values:
        if v - 1 in members:
            continue  # not the start of a run
        length = 1
        while v + length in members:
            length += 1
        if length >= 2:
            runs.append(tuple(range(v, v + length)))
    return runs


def record_min_ratio(records: list[APRecord]) -> list[APRecord]:
    """Running strict minima of d/sqrt(N), in (N, d) scan order.

    Each output entry had the smallest ratio seen so far when it appeared;
    the ratio column is therefore non-increasing.
    """
    out: list[APRecord] = []
    best: Decimal | None = None
    for rec in records:
        if best is None or rec.ratio_half < best:
            best = rec.ratio_half
            out.append(rec)
    return out


def ap_witness(record: APRecord, budget: int | None = None) -> APWitness:
    """Re-derive a checked APWitness from a search record.

    Decomposes every term from scratch, so this independently re-proves
    powerfulness rather than trusting the table.
    """
    terms = record.terms()
    decomps = tuple(decompose_powerful(t, budget) for t in terms)
    w = APWitness(
        k=record.k,
        terms=terms,
        d=record.d,
        decomps=decomps,
        family=FAMILY_SEARCH,
        params={"n": record.n, "d": record.d},
    )
    validate_witness(w, budget)
    return w


# ------------------------------------------------------------------- caching

def save_table(table: PowerfulTable, path: str) -> None:
    """Write the table with a checksummed header, atomically."""
    body = "".join(f"{v}\n" for v in table.values).encode("ascii")
    digest = hashlib.sha256(body).hexdigest()
    header = (
        f"POWERFUL-TABLE v1 limit={table.limit} "
        f"count={len(table.values)} sha256={digest}\n"
    )
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(body)
    os.replace(tmp, path)


def load_table(path: str) -> PowerfulTable:
    """Read a cached table, verifying count, checksum, and ordering."""
    with open(path, "rb") as fh:
        header = fh.readline().decode("ascii", errors="replace").rstrip("\n")
        body = fh.read()
    m = _CACHE_HEADER.fullmatch(header)
    if m is None:
        raise CacheError(f"{path}: unrecognized header {header!r}")
    limit, count, digest = int(m.group(1)), int(m.group(2)), m.group(3)
    if hashlib.sha256(body).hexdigest() != digest:
        raise CacheError(f"{path}: checksum mismatch")
    try:
        values = tuple(int(line) for line in body.decode("ascii").split())
    except ValueError as exc:
        raise CacheError(f"{path}: bad value line: {exc}") from exc
    if len(values) != count:
        raise CacheError(f"{path}: header says {count} values, found {len(values)}")
    prev = 0
    for v in values:
        if v <= prev:
            raise CacheError(f"{path}: values not strictly ascending at {v}")
        prev = v
    if values and values[-1] > limit:
        raise CacheError(f"{path}: value {values[-1]} exceeds limit {limit}")
    return PowerfulTable(limit, values)


def table_for(limit: int, cache_path: str | None = None, threads: int = 1,
              max_values: int = DEFAULT_MAX_VALUES) -> PowerfulTable:
    """Load a matching cached table if possible, else enumerate (and save).

    A cache file for a different limit is treated as stale and silently
    regenerated; a corrupt one raises CacheError rather than being
    clobbered, since that points at a real problem.
    """
    if cache_path and os.path.exists(cache_path):
        table = load_table(cache_path)
        if table.limit == limit:
            return table
    table = enumerate_powerful(limit, threads, max_values)
    if cache_path:
        save_table(table, cache_path)
    return table

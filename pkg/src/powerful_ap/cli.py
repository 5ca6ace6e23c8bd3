"""Command-line front end: construct, search, verify, report.

Everything here is orchestration; the mathematics lives in the library
modules.  Two contracts shape the output:

* Reports are deterministic.  The same arguments produce byte-identical
  files regardless of thread count, so outputs can be diffed and cached.
* Exact integers are serialized as decimal strings in JSON (term values
  overflow doubles almost immediately); small structural counters like k
  and m stay native.

Exit codes: 0 all checks passed, 1 a verification failed, 2 a resource
limit was hit (factoring budget, table capacity), 3 arguments or input
files could not be parsed.  Errors are mirrored to stderr as one-line
JSON objects so scripts do not have to scrape messages.

Witness files are JSON objects (or arrays of objects) with the shape
{"k": 3, "terms": ["392", "484", "576"], "d": "92", "family": "pell3"};
extra keys are ignored on input, so a construct report can be fed
straight back into verify.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Any, Callable, Sequence

from .abcver import TripleAnalysis, analyze_triple, radical_inequality_check
from .arith import DEFAULT_RHO_BUDGET, RATIO_DIGITS, decompose_powerful
from .constructions import (
    FAMILY_FIVE,
    FAMILY_FOUR,
    FAMILY_PELL3,
    FAMILY_SQUARES3,
    APWitness,
    ck_constants,
    default_theta,
    extension_exponent,
    five_ap,
    four_ap,
    long_ap,
    pell_3ap,
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
    NotPowerful,
)
from .search import (
    APRecord,
    ap_witness,
    consecutive_check,
    find_kaps,
    record_min_ratio,
    table_for,
)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_RESOURCE = 2
EXIT_PARSE = 3

CACHE_ENV = "POWERFUL_AP_CACHE"

_CONSTRUCTORS: dict[str, Callable[..., APWitness]] = {
    FAMILY_SQUARES3: lambda m, budget: squares_3ap(m),
    FAMILY_PELL3: lambda m, budget: pell_3ap(m),
    FAMILY_FOUR: four_ap,
    FAMILY_FIVE: five_ap,
}


@dataclass(frozen=True)
class RunConfig:
    """Validated bag of options shared by the subcommands."""

    limit: int | None = None
    d_max: int | None = None
    k: int | None = None
    m_range: tuple[int, int] | None = None
    theta: Fraction | None = None
    seed: str = f"{FAMILY_PELL3}:1"
    budget: int = DEFAULT_RHO_BUDGET
    threads: int = 1
    fmt: str = "json"
    out: str | None = None
    cache: str | None = None

    def __post_init__(self):
        for name in ("limit", "d_max", "k", "budget", "threads"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise InvalidInput(f"--{name.replace('_', '')} must be >= 1, got {v}")
        if self.m_range is not None:
            lo, hi = self.m_range
            if lo < 1 or hi < lo:
                raise InvalidInput(f"bad m range {lo}..{hi}")
        if self.theta is not None and not 0 < self.theta < 1:
            raise InvalidInput(f"theta must lie in (0, 1), got {self.theta}")
        if self.fmt not in ("json", "csv"):
            raise InvalidInput(f"format must be json or csv, got {self.fmt}")


@dataclass(frozen=True)
class ReportRow:
    """One output line: a witness plus how it was measured."""

    family: str
    k: int
    m: int | None
    n: int
    d: int
    theta: Fraction
    ratio: Decimal
    verified: bool
    terms: tuple[int, ...] = ()
    extra: tuple[tuple[str, Any], ...] = ()

    def as_json(self) -> dict[str, Any]:
        obj: dict[str, Any] = {
            "family": self.family,
            "k": self.k,
            "m": self.m,
            "N": str(self.n),
            "d": str(self.d),
            "theta": str(self.theta),
            "ratio": str(self.ratio),
            "verified": self.verified,
        }
        if self.terms:
            obj["terms"] = [str(t) for t in self.terms]
        obj.update(dict(self.extra))
        return obj

    def as_csv(self) -> list[str]:
        return [
            self.family,
            str(self.k),
            "" if self.m is None else str(self.m),
            str(self.n),
            str(self.d),
            str(self.theta),
            str(self.ratio),
            "true" if self.verified else "false",
        ]


def _row_for(w: APWitness, cfg: RunConfig) -> ReportRow:
    theta = cfg.theta if cfg.theta is not None else default_theta(w)
    m = w.params.get("m")
    extra: list[tuple[str, Any]] = []
    if "multipliers" in w.params:
        extra.append(("multipliers", [str(b) for b in w.params["multipliers"]]))
        extra.append(("seed_family", w.params.get("seed_family")))
    return ReportRow(
        family=w.family,
        k=w.k,
        m=m if isinstance(m, int) else None,
        n=w.terms[0],
        d=w.d,
        theta=theta,
        ratio=theta_ratio(w, theta),
        verified=witness_ok(w, cfg.budget),
        terms=w.terms,
        extra=tuple(extra),
    )


# --------------------------------------------------------------- serialization

def _write(text: str, cfg: RunConfig) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit(payload: Any, rows: list[ReportRow], cfg: RunConfig) -> None:
    if cfg.fmt == "json":
        _write(json.dumps(payload, indent=2) + "\n", cfg)
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["family", "k", "m", "N", "d", "theta", "ratio", "verified"])
    for row in rows:
        writer.writerow(row.as_csv())
    _write(buf.getvalue(), cfg)


def _error(name: str, detail: str, **extras: Any) -> None:
    obj = {"error": name, "detail": detail}
    obj.update({k: v for k, v in extras.items() if v is not None})
    print(json.dumps(obj), file=sys.stderr)


def witness_to_json(w: APWitness) -> dict[str, Any]:
    return {
        "k": w.k,
        "terms": [str(t) for t in w.terms],
        "d": str(w.d),
        "family": w.family,
    }


def _as_int(value: Any, label: str) -> int:
    if isinstance(value, bool):
        raise InvalidInput(f"{label} must be an integer, got a boolean")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value, 10)
        except ValueError as exc:
            raise InvalidInput(f"{label} is not a decimal string: {value!r}") from exc
    raise InvalidInput(f"{label} must be an integer or decimal string")


def witness_from_json(obj: Any, budget: int | None = None) -> APWitness:
    """Rebuild a full witness (decompositions included) from file JSON.

    Structural problems raise InvalidInput (exit 3); a well-formed object
    whose numbers do not form a powerful AP fails later, in validation.
    """
    if not isinstance(obj, dict):
        raise InvalidInput("witness must be a JSON object")
    for key in ("k", "terms", "d", "family"):
        if key not in obj:
            raise InvalidInput(f"witness is missing key {key!r}")
    k = _as_int(obj["k"], "k")
    if not isinstance(obj["terms"], list):
        raise InvalidInput("terms must be a list")
    terms = tuple(_as_int(t, "term") for t in obj["terms"])
    d = _as_int(obj["d"], "d")
    family = obj["family"]
    if not isinstance(family, str):
        raise InvalidInput("family must be a string")
    if k != len(terms):
        raise InvalidInput(f"k={k} but {len(terms)} terms given")
    if any(t < 1 for t in terms) or d < 1:
        # Shape trouble is a parse error; wrong arithmetic is a
        # verification failure.  Nonpositive values cannot be decomposed
        # at all, so they land on the parse side.
        raise InvalidInput("terms and d must be positive")
    try:
        decomps = tuple(decompose_powerful(t, budget) for t in terms)
    except NotPowerful as exc:
        raise InvalidWitness(f"claimed term is not powerful: {exc}") from exc
    w = APWitness(k=k, terms=terms, d=d, decomps=decomps, family=family)
    validate_witness(w, budget)
    return w


# ----------------------------------------------------------------- subcommands

def _config_from(args: argparse.Namespace) -> RunConfig:
    cache = getattr(args, "cache", None) or os.environ.get(CACHE_ENV) or None
    return RunConfig(
        limit=getattr(args, "limit", None),
        d_max=getattr(args, "dmax", None),
        k=getattr(args, "k", None),
        m_range=getattr(args, "m", None),
        theta=getattr(args, "theta", None),
        seed=getattr(args, "seed", None) or f"{FAMILY_PELL3}:1",
        budget=getattr(args, "budget", None) or DEFAULT_RHO_BUDGET,
        threads=getattr(args, "threads", None) or 1,
        fmt=getattr(args, "format", None) or "json",
        out=getattr(args, "out", None),
        cache=cache,
    )


def _seed_witness(text: str, budget: int | None) -> APWitness:
    name, sep, num = text.partition(":")
    if not sep or name not in _CONSTRUCTORS:
        families = ", ".join(sorted(_CONSTRUCTORS))
        raise InvalidInput(f"seed must look like 'family:m' with family in {families}")
    try:
        m = int(num, 10)
    except ValueError as exc:
        raise InvalidInput(f"bad seed index {num!r}") from exc
    return _CONSTRUCTORS[name](m, budget)


def _family_rows(family: str, m_range: tuple[int, int],
                 cfg: RunConfig) -> list[ReportRow]:
    lo, hi = m_range
    return [_row_for(_CONSTRUCTORS[family](m, cfg.budget), cfg)
            for m in range(lo, hi + 1)]


def cmd_construct(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    if args.family == "kap":
        if cfg.k is None:
            raise InvalidInput("--k is required for --family kap")
        seed = _seed_witness(cfg.seed, cfg.budget)
        stages = [seed]
        w = seed
        while w.k < cfg.k:
            w = long_ap(w.k + 1, w, cfg.budget)
            stages.append(w)
        rows = [_row_for(s, cfg) for s in stages]
    else:
        if cfg.m_range is None:
            raise InvalidInput("--m is required for family constructions")
        rows = _family_rows(args.family, cfg.m_range, cfg)
    payload = [witness_to_json_row(r) for r in rows]
    _emit(payload, rows, cfg)
    if all(r.verified for r in rows):
        return EXIT_OK
    bad = next(r for r in rows if not r.verified)
    _error("VerificationFailed", f"witness N={bad.n} d={bad.d} did not validate")
    return EXIT_VERIFY


def witness_to_json_row(row: ReportRow) -> dict[str, Any]:
    """Row JSON that doubles as a witness file entry (round-trips)."""
    obj = {
        "k": row.k,
        "terms": [str(t) for t in row.terms],
        "d": str(row.d),
        "family": row.family,
    }
    obj.update({k: v for k, v in row.as_json().items()
                if k not in ("k", "d", "family", "terms")})
    return obj


def _decimal_str(value: Fraction) -> str:
    with localcontext() as ctx:
        ctx.prec = RATIO_DIGITS + 10
        q = Decimal(value.numerator) / Decimal(value.denominator)
        ctx.prec = RATIO_DIGITS
        return str(+q)


def _search_payload(cfg: RunConfig) -> tuple[dict[str, Any], list[ReportRow]]:
    table = table_for(cfg.limit, cfg.cache, cfg.threads)
    runs = consecutive_check(table)
    payload: dict[str, Any] = {
        "limit": table.limit,
        "count": len(table),
    }
    if len(table) <= 1000:
        payload["values"] = [str(v) for v in table.values]
    payload["consecutive_runs"] = [[str(v) for v in run] for run in runs]
    notes: list[str] = []
    for run in runs:
        if len(run) >= 3:
            notes.append(
                f"run of {len(run)} consecutive powerful numbers at {run[0]} "
                "(previously unknown; report this)"
            )
    rows: list[ReportRow] = []
    if cfg.d_max is not None:
        k = cfg.k or 3
        records = find_kaps(table, k, cfg.d_max, cfg.threads)
        minima = record_min_ratio(records)
        payload["k"] = k
        payload["d_max"] = cfg.d_max
        payload["records"] = [_record_json(r) for r in records]
        payload["record_minima"] = [_record_json(r) for r in minima]
        if k == 3:
            for rec in minima:
                if rec.ratio_half < 4:
                    notes.append(
                        f"3-AP at N={rec.n}, d={rec.d} has d/sqrt(N) = "
                        f"{str(rec.ratio_half)[:12]}... < 4 (notable, not an error)"
                    )
        if cfg.fmt == "csv":
            # CSV rows promise a real verified flag, so re-prove each hit.
            for rec in records:
                w = ap_witness(rec, cfg.budget)
                rows.append(_row_for(w, cfg))
    payload["notes"] = notes
    return payload, rows


def _record_json(rec: APRecord) -> dict[str, Any]:
    return {
        "N": str(rec.n),
        "d": str(rec.d),
        "k": rec.k,
        "ratio_half": str(rec.ratio_half),
    }


def cmd_search(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    if cfg.limit is None:
        raise InvalidInput("--limit is required for search")
    payload, rows = _search_payload(cfg)
    _emit(payload, rows, cfg)
    return EXIT_OK


def _analysis_json(t: TripleAnalysis) -> dict[str, Any]:
    margin = min((row.rhs - row.lhs for row in t.per_prime), default=0)
    return {
        "N": str(t.reduced.terms[0]),
        "d": str(t.reduced.d),
        "D": str(t.D),
        "quality": str(t.quality),
        "abc": [str(v) for v in t.abc],
        "kappa": str(t.kappa),
        "radical_ok": radical_inequality_check(t),
        "min_margin": margin,
        "per_prime": [
            {
                "p": str(row.p),
                "nu_D": row.nu_d,
                "lhs": row.lhs,
                "rhs": row.rhs,
                "ok": row.ok,
                "case": row.case,
            }
            for row in t.per_prime
        ],
    }


def _verify_witness(w: APWitness, cfg: RunConfig) -> tuple[dict[str, Any], str | None]:
    """Analyze every consecutive triple of w; returns (report, failed check)."""
    entries = []
    failed: str | None = None
    qualities: list[Decimal] = []
    for i in range(w.k - 2):
        sub = APWitness(
            k=3,
            terms=w.terms[i : i + 3],
            d=w.d,
            decomps=w.decomps[i : i + 3],
            family=w.family,
            params=dict(w.params),
        )
        t = analyze_triple(sub, cfg.budget)
        entry = _analysis_json(t)
        entries.append(entry)
        qualities.append(t.quality)
        if failed is None:
            if not entry["radical_ok"]:
                failed = "radical_inequality"
            elif not t.all_ok():
                failed = "valuation_inequality"
    report = {
        "family": w.family,
        "k": w.k,
        "N": str(w.terms[0]),
        "d": str(w.d),
        "triples": entries,
        "verified": failed is None,
    }
    if any(q > Decimal("1.6") for q in qualities):
        report["note"] = "abc quality above 1.6: extraordinary, double-check inputs"
    return report, failed


def _load_witness_file(path: str, budget: int | None) -> list[APWitness]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from exc
    objs = data if isinstance(data, list) else [data]
    if not objs:
        raise InvalidInput(f"{path} contains no witnesses")
    return [witness_from_json(obj, budget) for obj in objs]


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    if args.witness_file:
        witnesses = _load_witness_file(args.witness_file, cfg.budget)
    elif args.family:
        if args.family == "kap":
            if cfg.k is None:
                raise InvalidInput("--k is required for --family kap")
            witnesses = [long_ap(cfg.k, _seed_witness(cfg.seed, cfg.budget),
                                 cfg.budget)]
        else:
            if cfg.m_range is None:
                raise InvalidInput("--m is required for family verification")
            lo, hi = cfg.m_range
            witnesses = [_CONSTRUCTORS[args.family](m, cfg.budget)
                         for m in range(lo, hi + 1)]
    else:
        raise InvalidInput("verify needs a witness file or --family")

    reports = []
    rows = []
    first_failure: str | None = None
    for w in witnesses:
        report, failed = _verify_witness(w, cfg)
        reports.append(report)
        quality = Decimal(report["triples"][0]["quality"])
        rows.append(
            ReportRow(
                family=w.family,
                k=w.k,
                m=w.params.get("m") if isinstance(w.params.get("m"), int) else None,
                n=w.terms[0],
                d=w.d,
                theta=default_theta(w),
                ratio=quality,
                verified=failed is None,
            )
        )
        if failed and first_failure is None:
            first_failure = failed
    _emit(reports, rows, cfg)
    if first_failure is not None:
        _error("VerificationFailed", f"first failing check: {first_failure}")
        return EXIT_VERIFY
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    m_range = cfg.m_range or (1, 5)
    families_rows: list[ReportRow] = []
    for family in (FAMILY_SQUARES3, FAMILY_PELL3, FAMILY_FOUR, FAMILY_FIVE):
        families_rows.extend(_family_rows(family, m_range, cfg))
    kmax = cfg.k or 9
    constants = []
    for k in range(5, kmax + 1):
        ck = ck_constants(k)
        constants.append(
            {
                "k": k,
                "C_k": _decimal_str(ck),
                "exponent": str(extension_exponent(k)),
            }
        )
    payload: dict[str, Any] = {
        "families": [witness_to_json_row(r) for r in families_rows],
        "constants": constants,
    }
    rows = list(families_rows)
    if cfg.limit is not None:
        search_payload, search_rows = _search_payload(cfg)
        payload["search"] = search_payload
        rows.extend(search_rows)
    _emit(payload, rows, cfg)
    return EXIT_OK


# ----------------------------------------------------------------- entry point

class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; our contract reserves 2 for
    resource limits, so rewire usage errors to the parse-error code."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _m_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo, 10)
        b = int(hi, 10) if sep else a
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad m range {text!r}") from exc
    return a, b


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad fraction {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="powerful-ap",
        description="Construct, search for, and verify arithmetic "
        "progressions of powerful numbers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--budget", type=int, default=None,
                       help="factoring work cap per number "
                       f"(default {DEFAULT_RHO_BUDGET})")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads for enumeration and scans")
        p.add_argument("--format", choices=("json", "csv"), default=None,
                       help="output format (default json)")
        p.add_argument("--out", default=None, help="write output to this file")

    families = sorted(_CONSTRUCTORS) + ["kap"]

    p = sub.add_parser("construct", help="build family witnesses")
    p.add_argument("--family", choices=families, required=True)
    p.add_argument("--m", type=_m_range, default=None,
                   help="index or range A..B within the family")
    p.add_argument("--k", type=int, default=None,
                   help="target length for --family kap")
    p.add_argument("--seed", default=None,
                   help="seed witness for kap as family:m (default pell3:1)")
    p.add_argument("--theta", type=_fraction, default=None,
                   help="override the reporting exponent")
    common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("search", help="enumerate powerful numbers and scan for APs")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--k", type=int, default=None, help="AP length (default 3)")
    p.add_argument("--dmax", type=int, default=None,
                   help="difference window; omit to skip the AP scan")
    p.add_argument("--cache", default=None,
                   help=f"table cache file (default ${CACHE_ENV})")
    common(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="run the 3-AP verification battery")
    p.add_argument("witness_file", nargs="?", default=None,
                   help="JSON witness file; omit to use --family")
    p.add_argument("--family", choices=families, default=None)
    p.add_argument("--m", type=_m_range, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--seed", default=None)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="family table, growth constants, "
                       "optional search summary")
    p.add_argument("--m", type=_m_range, default=None,
                   help="family index range (default 1..5)")
    p.add_argument("--k", type=int, default=None,
                   help="largest k for the constants table (default 9)")
    p.add_argument("--limit", type=int, default=None,
                   help="add a search section up to this bound")
    p.add_argument("--dmax", type=int, default=None)
    p.add_argument("--cache", default=None)
    common(p)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        _error("BudgetExceeded", str(exc),
               number=str(exc.number) if exc.number is not None else None,
               step=exc.step)
        return EXIT_RESOURCE
    except CapacityExceeded as exc:
        _error("CapacityExceeded", str(exc))
        return EXIT_RESOURCE
    except (InvalidWitness, ConsistencyFailure) as exc:
        _error(type(exc).__name__, str(exc))
        return EXIT_VERIFY
    except (InvalidInput, CacheError) as exc:
        _error(type(exc).__name__, str(exc))
        return EXIT_PARSE
    except OSError as exc:
        _error("IOError", str(exc))
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())

import hashlib

import pytest
from hypothesis import given, settings, strategies as st

from powerful_ap import (
    CacheError,
    CapacityExceeded,
    InvalidInput,
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

import oracles


class TestEnumerate:
    def test_tiny_limits(self):
        assert enumerate_powerful(1).values == (1,)
        assert enumerate_powerful(10).values == (1, 4, 8, 9)
        assert enumerate_powerful(100).values == (
            1, 4, 8, 9, 16, 25, 27, 32, 36, 49, 64, 72, 81, 100,
        )

    @given(st.integers(min_value=1, max_value=30000))
    @settings(max_examples=25, deadline=None)
    def test_matches_brute_definition(self, limit):
        got = list(enumerate_powerful(limit))
        want = [n for n in range(1, limit + 1) if oracles.brute_is_powerful(n)]
        assert got == want

    def test_against_sieve_oracle(self, table_1e6, brute_1e6):
        assert list(table_1e6) == brute_1e6

    def test_count_tracks_asymptotic_density(self, table_1e8):
        # 2.173 * sqrt(x) within 5% at 10^8 (the fit is coarser lower down)
        expected = 2.173 * 10**4
        assert abs(len(table_1e8) - expected) / expected < 0.05

    def test_thread_count_changes_nothing(self, table_1e6):
        for threads in (2, 3, 8):
            assert enumerate_powerful(10**6, threads=threads).values == table_1e6.values

    def test_capacity_guard(self):
        with pytest.raises(CapacityExceeded):
            enumerate_powerful(10**8, max_values=1000)

    def test_membership(self, table_1e6):
        assert 999999 not in table_1e6
        assert 997 * 997 in table_1e6
        assert len(table_1e6) == 2027

    def test_rejects_bad_args(self):
        with pytest.raises(InvalidInput):
            enumerate_powerful(0)
        with pytest.raises(InvalidInput):
            enumerate_powerful(10, threads=0)


class TestFindAPs:
    def test_frozen_small_windows(self, table_1e6):
        small100 = PowerfulTable(100, tuple(v for v in table_1e6 if v <= 100))
        assert [(r.n, r.d) for r in find_3aps(small100, 30)] == [(1, 24), (8, 28)]
        small600 = PowerfulTable(600, tuple(v for v in table_1e6 if v <= 600))
        recs = find_3aps(small600, 100)
        assert (392, 92) in [(r.n, r.d) for r in recs]
        assert len(recs) == 17

    def test_empty_window(self, table_1e6):
        assert find_3aps(table_1e6, 0) == []

    def test_exhaustive_against_direct_scan(self, table_1e6):
        values = [v for v in table_1e6 if v <= 20000]
        table = PowerfulTable(20000, tuple(values))
        got = [(r.n, r.d) for r in find_kaps(table, 3, 500)]
        want = oracles.brute_find_kaps(values, 3, 500)
        assert got == sorted(want)

    def test_kaps_reduces_to_3aps(self, table_1e6):
        assert find_kaps(table_1e6, 3, 1000) == find_3aps(table_1e6, 1000)

    def test_four_term_sub_progressions_are_found(self, table_1e6):
        quads = find_kaps(table_1e6, 4, 2000)
        triples = {(r.n, r.d) for r in find_3aps(table_1e6, 2000)}
        for q in quads:
            assert (q.n, q.d) in triples
            assert (q.n + q.d, q.d) in triples

    def test_four_term_frozen_example(self, table_1e8):
        sub = PowerfulTable(4 * 10**7, tuple(v for v in table_1e8 if v <= 4 * 10**7))
        found = [(r.n, r.d) for r in find_kaps(sub, 4, 3 * 10**6)]
        assert (31212000, 2080800) in found

    def test_thread_determinism(self, table_1e6):
        base = find_3aps(table_1e6, 10**4)
        for threads in (2, 5, 8):
            assert find_3aps(table_1e6, 10**4, threads=threads) == base

    def test_records_carry_ratio(self, table_1e6):
        recs = find_3aps(table_1e6, 30)
        assert recs[0].n == 1 and recs[0].ratio_half == 24
        assert recs[0].terms() == (1, 25, 49)

    def test_rejects_bad_args(self, table_1e6):
        with pytest.raises(InvalidInput):
            find_kaps(table_1e6, 2, 10)
        with pytest.raises(InvalidInput):
            find_kaps(table_1e6, 3, -1)


class TestConsecutive:
    def test_frozen_runs_at_1e6(self, table_1e6):
        runs = consecutive_check(table_1e6)
        assert runs == [
            (8, 9),
            (288, 289),
            (675, 676),
            (9800, 9801),
            (12167, 12168),
            (235224, 235225),
            (332928, 332929),
            (465124, 465125),
        ]

    def test_brute_scan_agrees(self, table_1e6, brute_1e6):
        members = set(brute_1e6)
        want = []
        for v in brute_1e6:
            if v - 1 in members:
                continue
            run = [v]
            while run[-1] + 1 in members:
                run.append(run[-1] + 1)
            if len(run) >= 2:
                want.append(tuple(run))
        assert consecutive_check(table_1e6) == want

    def test_no_triple_runs_at_1e6(self, table_1e6):
        assert all(len(run) == 2 for run in consecutive_check(table_1e6))


class TestRecordMinima:
    def test_empty(self):
        assert record_min_ratio([]) == []

    def test_frozen_records(self, table_1e8):
        recs = find_3aps(table_1e8, 10**6)
        minima = record_min_ratio(recs)
        assert [(r.n, r.d) for r in minima] == [
            (1, 24),
            (8, 28),
            (36, 36),
            (72, 28),
            (343, 49),
            (1728, 36),
            (729000, 316),
        ]

    def test_running_minima_non_increasing(self, table_1e6):
        minima = record_min_ratio(find_3aps(table_1e6, 10**4))
        ratios = [r.ratio_half for r in minima]
        assert all(a > b for a, b in zip(ratios, ratios[1:]))


class TestWitnessBridge:
    def test_rederives_and_validates(self, table_1e6):
        for rec in find_3aps(table_1e6, 100):
            w = ap_witness(rec)
            assert w.terms == rec.terms()
            assert w.d == rec.d

    def test_search_witness_has_real_decomps(self, table_1e6):
        rec = next(r for r in find_3aps(table_1e6, 100) if r.n == 392)
        w = ap_witness(rec)
        assert [(d.a, d.b) for d in w.decomps] == [(7, 2), (22, 1), (24, 1)]


class TestCache:
    def test_roundtrip(self, tmp_path, table_1e6):
        path = str(tmp_path / "table.cache")
        save_table(table_1e6, path)
        loaded = load_table(path)
        assert loaded.limit == table_1e6.limit
        assert loaded.values == table_1e6.values

    def test_header_format(self, tmp_path):
        path = str(tmp_path / "t.cache")
        save_table(enumerate_powerful(10), path)
        with open(path, "rb") as fh:
            header = fh.readline().decode()
        body = b"1\n4\n8\n9\n"
        digest = hashlib.sha256(body).hexdigest()
        assert header == f"POWERFUL-TABLE v1 limit=10 count=4 sha256={digest}\n"

    def test_rejects_corrupt_body(self, tmp_path, table_1e6):
        path = str(tmp_path / "t.cache")
        save_table(table_1e6, path)
        raw = open(path, "rb").read().replace(b"\n8\n", b"\n6\n", 1)
        open(path, "wb").write(raw)
        with pytest.raises(CacheError):
            load_table(path)

    def test_rejects_wrong_count(self, tmp_path):
        path = str(tmp_path / "t.cache")
        body = b"1\n4\n"
        digest = hashlib.sha256(body).hexdigest()
        with open(path, "wb") as fh:
            fh.write(f"POWERFUL-TABLE v1 limit=10 count=3 sha256={digest}\n".encode())
            fh.write(body)
        with pytest.raises(CacheError):
            load_table(path)

    def test_rejects_unsorted_values(self, tmp_path):
        path = str(tmp_path / "t.cache")
        body = b"4\n1\n"
        digest = hashlib.sha256(body).hexdigest()
        with open(path, "wb") as fh:
            fh.write(f"POWERFUL-TABLE v1 limit=10 count=2 sha256={digest}\n".encode())
            fh.write(body)
        with pytest.raises(CacheError):
            load_table(path)

    def test_rejects_alien_header(self, tmp_path):
        path = str(tmp_path / "t.cache")
        with open(path, "wb") as fh:
            fh.write(b"something else entirely\n1\n")
        with pytest.raises(CacheError):
            load_table(path)

    def test_table_for_uses_cache(self, tmp_path):
        path = str(tmp_path / "t.cache")
        first = table_for(1000, path)
        assert load_table(path).values == first.values
        again = table_for(1000, path)
        assert again.values == first.values

    def test_table_for_regenerates_stale_limit(self, tmp_path):
        path = str(tmp_path / "t.cache")
        table_for(100, path)
        bigger = table_for(1000, path)
        assert bigger.limit == 1000
        assert load_table(path).limit == 1000

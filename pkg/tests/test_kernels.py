import numpy as np
import pytest
from hypothesis import given, strategies as st

from consecwqo import _kernels
from consecwqo.bitcodec import BitCodec, codec, pair_scan
from consecwqo.core import restrict
from consecwqo.kinds import Kind, check_valid_at_scale, enumerate_structures, is_member

from conftest import BOUNTIFUL_KINDS, kind_id

needs_numba = pytest.mark.skipif(_kernels.numba is None, reason="numba not installed")


def test_env_flag(monkeypatch):
    monkeypatch.setenv("CONSECWQO_DISABLE_NUMBA", "1")
    assert not _kernels.numba_enabled()
    monkeypatch.setenv("CONSECWQO_DISABLE_NUMBA", "0")
    assert _kernels.numba_enabled() == (_kernels.numba is not None)


@pytest.mark.parametrize("k", BOUNTIFUL_KINDS, ids=kind_id)
def test_codec_roundtrip_and_membership(k):
    c = BitCodec(k, 3)
    for s in enumerate_structures(k, 3):
        assert c.decode(c.encode(s)) == s
    mode, trans, forbid, require = c.membership()
    codes = np.arange(1 << min(c.nbits, 12), dtype=np.int64)
    for use in (False, True):
        mask = _kernels.member_mask(codes, mode, trans, forbid, require, use_numba=use)
        for code, ok in zip(codes[:500], mask[:500]):
            assert ok == is_member(k, c.decode(code))


@pytest.mark.parametrize("k", BOUNTIFUL_KINDS, ids=kind_id)
def test_window_gather_matches_restrict(k):
    c = codec(k, 3)
    members = enumerate_structures(k, 3)
    codes = np.array([c.encode(s) for s in members], dtype=np.int64)
    for lo, hi in ((1, 2), (2, 3), (2, 2), (1, 3)):
        small = codec(k, hi - lo + 1)
        for use in (False, True):
            got = _kernels.gather(codes, c.window_src(lo, hi), use_numba=use)
            assert [small.decode(x) for x in got] == [restrict(s, lo, hi) for s in members]


@given(st.lists(st.integers(0, (1 << 9) - 1), min_size=1, max_size=40),
       st.lists(st.integers(0, 15), max_size=6))
def test_avoid_mask_backends_agree(codes, forb):
    k = Kind.of("digraph")
    c = codec(k, 3)
    srcs = [c.window_src(1, 2), c.window_src(2, 3)]
    forbidden = [np.array(sorted(set(forb)), dtype=np.int64)] * 2
    a = _kernels.avoid_mask(codes, srcs, forbidden, use_numba=False)
    b = _kernels.avoid_mask(codes, srcs, forbidden, use_numba=True)
    assert a.tolist() == b.tolist()
    small = codec(k, 2)
    for code, ok in zip(codes, a):
        s = c.decode(code)
        assert ok == all(small.encode(restrict(s, i, i + 1)) not in set(forb) for i in (1, 2))


@pytest.mark.parametrize("k", BOUNTIFUL_KINDS, ids=kind_id)
def test_pair_scan_backends_agree(k, backend):
    for p, q, x, need in ((2, 2, 1, 1), (3, 2, 2, 1), (3, 3, 2, 2), (2, 3, 1, 2)):
        checked, fails = pair_scan(k, p, q, x, need)
        assert checked > 0
        if need == 1 or x == p - 1 == q - 1:
            assert fails == []


def test_pair_scan_reports_failures(backend):
    # one combination per pair never satisfies a demand for 100
    k = Kind.of("tournament")
    checked, fails = pair_scan(k, 2, 2, 1, need=100, max_fail=3)
    assert checked == 4 and len(fails) == 3


def test_scale_check_same_on_both_backends(backend):
    rep = check_valid_at_scale(Kind.of("graph"), 3)
    assert rep.passed and rep.pairs_checked == 3450

"""Bit-code kernels for the per-tuple (local) kinds.

A structure of a local kind is an ``int64`` whose bits mark which tuples are
present (see :mod:`consecwqo.bitcodec`).  The hot loops here, bulk window
extraction, membership, avoidance and the pairwise combination scan behind
the validity/bountifulness checks, come in two flavours: ``numba`` kernels
and plain numpy.  Set ``CONSECWQO_DISABLE_NUMBA=1`` to force numpy.
"""

from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised implicitly
    import numba
except ImportError:  # pragma: no cover
    numba = None

MODE_FREE, MODE_SYMMETRIC, MODE_TOURNAMENT = 0, 1, 2


def numba_enabled() -> bool:
    return numba is not None and os.environ.get("CONSECWQO_DISABLE_NUMBA", "") in ("", "0")


# -- numpy path --------------------------------------------------------------

def gather_np(codes: np.ndarray, src: np.ndarray) -> np.ndarray:
    if len(src) == 0:
        return np.zeros(len(codes), dtype=np.int64)
    bits = (codes[:, None] >> src[None, :]) & 1
    return (bits << np.arange(len(src), dtype=np.int64)[None, :]).sum(axis=1)


def scatter_np(codes: np.ndarray, dst: np.ndarray) -> np.ndarray:
    if len(dst) == 0:
        return np.zeros(len(codes), dtype=np.int64)
    bits = (codes[:, None] >> np.arange(len(dst), dtype=np.int64)[None, :]) & 1
    return (bits << dst[None, :]).sum(axis=1)


def member_mask_np(codes, mode, trans, forbid, require):
    ok = (codes & forbid) == 0
    if mode == MODE_SYMMETRIC:
        ok &= gather_np(codes, trans) == codes
    elif mode == MODE_TOURNAMENT:
        t = gather_np(codes, trans)
        ok &= ((codes & t) == 0) & ((codes | t) == require)
    return ok


def avoid_mask_np(codes, srcs, forbidden):
    ok = np.ones(len(codes), dtype=bool)
    for src, forb in zip(srcs, forbidden):
        if len(forb):
            ok &= ~np.isin(gather_np(codes, src), forb)
    return ok


def pair_scan_np(S, T, skey, tkey, dst_s, dst_t, left_src, right_src, cross,
                 mode, trans, forbid, require, need, max_fail):
    checked = 0
    fails_i: list[int] = []
    fails_j: list[int] = []
    n_sub = 1 << len(cross)
    cross_w = np.left_shift(np.int64(1), cross.astype(np.int64)) if len(cross) else cross
    base_s = scatter_np(S, dst_s)
    base_t = scatter_np(T, dst_t)
    for key in np.unique(skey):
        si = np.nonzero(skey == key)[0]
        ti = np.nonzero(tkey == key)[0]
        if len(ti) == 0:
            continue
        checked += len(si) * len(ti)
        base = (base_s[si][:, None] | base_t[ti][None, :]).ravel()
        s_exp = np.repeat(S[si], len(ti))
        t_exp = np.tile(T[ti], len(si))
        count = np.zeros(len(base), dtype=np.int64)
        for sub in range(n_sub):
            extra = np.int64(0)
            for b in range(len(cross)):
                if (sub >> b) & 1:
                    extra |= cross_w[b]
            theta = base | extra
            ok = member_mask_np(theta, mode, trans, forbid, require)
            ok &= gather_np(theta, left_src) == s_exp
            ok &= gather_np(theta, right_src) == t_exp
            count += ok
            if (count >= need).all():
                break
        bad = np.nonzero(count < need)[0]
        for flat in bad[: max(0, max_fail - len(fails_i))]:
            fails_i.append(int(si[flat // len(ti)]))
            fails_j.append(int(ti[flat % len(ti)]))
    return checked, np.array(fails_i, dtype=np.int64), np.array(fails_j, dtype=np.int64)


# -- numba path ----------------------------------------------------------------

if numba is not None:
    @numba.njit(cache=True)
    def _gather1(code, src):
        out = 0
        for j in range(src.shape[0]):
            if (code >> src[j]) & 1:
                out |= np.int64(1) << j
        return out

    @numba.njit(cache=True)
    def _scatter1(code, dst):
        out = 0
        for j in range(dst.shape[0]):
            if (code >> j) & 1:
                out |= np.int64(1) << dst[j]
        return out

    @numba.njit(cache=True)
    def _member1(code, mode, trans, forbid, require):
        if code & forbid:
            return False
        if mode == 1:
            return _gather1(code, trans) == code
        if mode == 2:
            t = _gather1(code, trans)
            return (code & t) == 0 and (code | t) == require
        return True

    @numba.njit(cache=True)
    def gather_nb(codes, src):
        out = np.empty(codes.shape[0], dtype=np.int64)
        for i in range(codes.shape[0]):
            out[i] = _gather1(codes[i], src)
        return out

    @numba.njit(cache=True)
    def member_mask_nb(codes, mode, trans, forbid, require):
        out = np.empty(codes.shape[0], dtype=np.bool_)
        for i in range(codes.shape[0]):
            out[i] = _member1(codes[i], mode, trans, forbid, require)
        return out

    @numba.njit(cache=True)
    def avoid_mask_nb(codes, src_flat, src_off, forb_flat, forb_off):
        out = np.ones(codes.shape[0], dtype=np.bool_)
        n_win = src_off.shape[0] - 1
        for i in range(codes.shape[0]):
            for w in range(n_win):
                f0, f1 = forb_off[w], forb_off[w + 1]
                if f0 == f1:
                    continue
                key = _gather1(codes[i], src_flat[src_off[w]:src_off[w + 1]])
                pos = np.searchsorted(forb_flat[f0:f1], key)
                if pos < f1 - f0 and forb_flat[f0 + pos] == key:
                    out[i] = False
                    break
        return out

    @numba.njit(cache=True)
    def _pair_scan_nb(S, T_sorted, T_idx, skey, tkey_sorted, dst_s, dst_t, left_src, right_src,
                      cross, mode, trans, forbid, require, need, max_fail):
        checked = 0
        fails_i = np.empty(max_fail, dtype=np.int64)
        fails_j = np.empty(max_fail, dtype=np.int64)
        n_fail = 0
        n_sub = np.int64(1) << cross.shape[0]
        for i in range(S.shape[0]):
            s = S[i]
            lo = np.searchsorted(tkey_sorted, skey[i])
            hi = np.searchsorted(tkey_sorted, skey[i], side="right")
            bs = _scatter1(s, dst_s)
            for jj in range(lo, hi):
                t = T_sorted[jj]
                checked += 1
                base = bs | _scatter1(t, dst_t)
                count = 0
                for sub in range(n_sub):
                    theta = base
                    for b in range(cross.shape[0]):
                        if (sub >> b) & 1:
                            theta |= np.int64(1) << cross[b]
                    if not _member1(theta, mode, trans, forbid, require):
                        continue
                    if _gather1(theta, left_src) != s or _gather1(theta, right_src) != t:
                        continue
                    count += 1
                    if count >= need:
                        break
                if count < need and n_fail < max_fail:
                    fails_i[n_fail] = i
                    fails_j[n_fail] = T_idx[jj]
                    n_fail += 1
        return checked, fails_i[:n_fail], fails_j[:n_fail]


def _flatten(arrays):
    off = np.zeros(len(arrays) + 1, dtype=np.int64)
    for i, a in enumerate(arrays):
        off[i + 1] = off[i] + len(a)
    flat = np.concatenate([np.asarray(a, dtype=np.int64) for a in arrays]) if arrays else np.zeros(0, np.int64)
    return flat.astype(np.int64), off


# -- dispatch --------------------------------------------------------------------

def gather(codes, src, use_numba=None):
    codes = np.asarray(codes, dtype=np.int64)
    src = np.asarray(src, dtype=np.int64)
    if numba_enabled() if use_numba is None else use_numba:
        return gather_nb(codes, src)
    return gather_np(codes, src)


def member_mask(codes, mode, trans, forbid, require, use_numba=None):
    codes = np.asarray(codes, dtype=np.int64)
    trans = np.asarray(trans, dtype=np.int64)
    if numba_enabled() if use_numba is None else use_numba:
        return member_mask_nb(codes, mode, trans, np.int64(forbid), np.int64(require))
    return member_mask_np(codes, mode, trans, np.int64(forbid), np.int64(require))


def avoid_mask(codes, srcs, forbidden, use_numba=None):
    """``True`` where no window (``srcs[w]``) lands in ``forbidden[w]`` (sorted)."""
    codes = np.asarray(codes, dtype=np.int64)
    if numba_enabled() if use_numba is None else use_numba:
        src_flat, src_off = _flatten(srcs)
        forb_flat, forb_off = _flatten([np.sort(np.asarray(f, dtype=np.int64)) for f in forbidden])
        return avoid_mask_nb(codes, src_flat, src_off, forb_flat, forb_off)
    return avoid_mask_np(codes, [np.asarray(s, dtype=np.int64) for s in srcs],
                         [np.asarray(f, dtype=np.int64) for f in forbidden])


def pair_scan(S, T, skey, tkey, dst_s, dst_t, left_src, right_src, cross,
              mode, trans, forbid, require, need, max_fail=20, use_numba=None):
    """Count, for every key-matched pair ``(S[i], T[j])``, the admissible combinations.

    A combination is the union of both scattered codes plus any subset of
    ``cross`` bits that passes membership and restricts back to both inputs.
    Returns ``(pairs_checked, fail_i, fail_j)`` for pairs with fewer than
    ``need`` combinations (at most ``max_fail`` reported).
    """
    a = [np.asarray(v, dtype=np.int64) for v in (S, T, skey, tkey, dst_s, dst_t, left_src, right_src, cross, trans)]
    S, T, skey, tkey, dst_s, dst_t, left_src, right_src, cross, trans = a
    if numba_enabled() if use_numba is None else use_numba:
        order = np.argsort(tkey, kind="stable")
        checked, fi, fj = _pair_scan_nb(S, T[order], order.astype(np.int64), skey, tkey[order], dst_s, dst_t,
                                        left_src, right_src, cross, mode, trans, np.int64(forbid),
                                        np.int64(require), need, max_fail)
        return int(checked), fi, fj
    return pair_scan_np(S, T, skey, tkey, dst_s, dst_t, left_src, right_src, cross,
                        mode, trans, np.int64(forbid), np.int64(require), need, max_fail)

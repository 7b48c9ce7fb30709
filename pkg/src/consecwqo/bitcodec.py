"""Bit codes for structures of the local kinds.

Bit ``i`` of a length-``n`` code stands for tuple ``tuples[i]``; tuples are
listed slot by slot, each slot in lexicographic order over ``[1, n]^arity``.
Windows and embeddings then become index arrays, so restriction is a bit
gather and gluing is a bit scatter.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from . import _kernels
from .core import Structure
from .errors import LimitError

MAX_CODE_BITS = 62


class BitCodec:
    def __init__(self, kind, n: int):
        if not kind.is_local:
            raise ValueError(f"{kind.name} has no bit codec")
        self.kind, self.n = kind, n
        self.tuples = [(slot, t) for slot, a in enumerate(kind.arities)
                       for t in itertools.product(range(1, n + 1), repeat=a)]
        if len(self.tuples) > MAX_CODE_BITS:
            raise LimitError(f"{kind.name} structures of length {n} need {len(self.tuples)} bits, more than {MAX_CODE_BITS}")
        self.index = {it: i for i, it in enumerate(self.tuples)}
        self.nbits = len(self.tuples)

    # -- conversion ------------------------------------------------------------

    def encode(self, s: Structure) -> int:
        code = 0
        for slot, rel in enumerate(s.relations):
            for t in rel:
                code |= 1 << self.index[(slot, t)]
        return code

    def decode(self, code: int) -> Structure:
        rels: list[list] = [[] for _ in self.kind.arities]
        code = int(code)
        for i, (slot, t) in enumerate(self.tuples):
            if (code >> i) & 1:
                rels[slot].append(t)
        return Structure(self.n, self.kind.arities, tuple(tuple(r) for r in rels))

    # -- index arrays ----------------------------------------------------------

    def window_src(self, lo: int, hi: int) -> np.ndarray:
        """Gather indices restricting a code to ``[lo, hi]``.

        Read the other way round, the same array scatters a length
        ``hi-lo+1`` code into this codec at offset ``lo-1``.
        """
        return _window_src(self.kind, self.n, lo, hi)

    def membership(self):
        """``(mode, trans, forbid, require)`` for :func:`_kernels.member_mask`."""
        name = self.kind.name
        trans = np.arange(self.nbits, dtype=np.int64)
        forbid = require = 0
        mode = _kernels.MODE_FREE
        if name in ("graph", "simple_graph", "tournament"):
            trans = np.array([self.index[(0, t[::-1])] for _, t in self.tuples], dtype=np.int64)
            mode = _kernels.MODE_TOURNAMENT if name == "tournament" else _kernels.MODE_SYMMETRIC
            for i, (_, (a, b)) in enumerate(self.tuples):
                if a == b and name != "graph":
                    forbid |= 1 << i
                elif a != b and name == "tournament":
                    require |= 1 << i
        return mode, trans, forbid, require

    def _groups(self) -> list[list[int]]:
        """Independent choice groups of bit masks whose products are the members."""
        name = self.kind.name
        if name in ("digraph", "relational"):
            return [[0, 1 << i] for i in range(self.nbits)]
        groups = []
        for i in range(1, self.n + 1):
            for j in range(i, self.n + 1):
                a, b = 1 << self.index[(0, (i, j))], 1 << self.index[(0, (j, i))]
                if name == "graph":
                    groups.append([0, a | b])
                elif i != j:
                    groups.append([0, a | b] if name == "simple_graph" else [a, b])
        return groups

    def member_codes(self) -> np.ndarray:
        """Every member code, ascending."""
        codes = np.zeros(1, dtype=np.int64)
        for alts in self._groups():
            codes = (codes[:, None] | np.array(alts, dtype=np.int64)[None, :]).ravel()
        return np.sort(codes)

    def all_members(self) -> list[Structure]:
        return sorted((self.decode(c) for c in self.member_codes()), key=self.kind.sort_key)


@lru_cache(maxsize=512)
def codec(kind, n: int) -> BitCodec:
    return BitCodec(kind, n)


@lru_cache(maxsize=4096)
def _window_src(kind, n: int, lo: int, hi: int) -> np.ndarray:
    big, small = codec(kind, n), codec(kind, hi - lo + 1)
    shift = lo - 1
    arr = np.array([big.index[(slot, tuple(x + shift for x in t))] for slot, t in small.tuples], dtype=np.int64)
    arr.setflags(write=False)
    return arr


def pair_scan(kind, p: int, q: int, x: int, need: int, max_fail: int = 20):
    """Check that every ``x``-overlapping member pair of lengths ``p, q`` has ``need`` combinations.

    Returns ``(pairs_checked, failures)`` with failures as ``(s, t, x)`` triples.
    """
    cp, cq = codec(kind, p), codec(kind, q)
    L = p + q - x
    cl = codec(kind, L)
    S, T = cp.member_codes(), cq.member_codes()
    skey = _kernels.gather(S, cp.window_src(p - x + 1, p))
    tkey = _kernels.gather(T, cq.window_src(1, x))
    left, right = cl.window_src(1, p), cl.window_src(p - x + 1, L)
    cross = np.array([i for i, (_, t) in enumerate(cl.tuples) if min(t) <= p - x and max(t) > p], dtype=np.int64)
    if len(cross) > 24:
        raise LimitError(f"{len(cross)} free cross tuples at lengths {p}+{q}-{x}")
    mode, trans, forbid, require = cl.membership()
    checked, fi, fj = _kernels.pair_scan(S, T, skey, tkey, left, right, left, right, cross,
                                         mode, trans, forbid, require, need, max_fail)
    fails = [(cp.decode(S[i]), cq.decode(T[j]), x) for i, j in zip(fi, fj)]
    return checked, fails

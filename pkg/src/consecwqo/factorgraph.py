"""Factor graphs of avoidance sets, window paths and their realisations.

For an avoidance set ``C = Av(B)`` and a dimension ``m >= b`` (``b`` the
longest basis element), the factor graph has one vertex per length-``m``
member of ``C`` and an edge ``u -> v`` whenever the last ``m-1`` points of
``u`` look like the first ``m-1`` points of ``v``.  A member of length at
least ``m`` walks along the graph window by window.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from . import _kernels
from .core import Structure, avoids, restrict, windows
from .digraph import Digraph, to_dot
from .errors import InputError, LimitError
from .kinds import Kind, _check_cap, enumerate_structures, extensions, is_member


@dataclass(frozen=True)
class Problem:
    kind: Kind
    basis: tuple[Structure, ...]
    b: int

    @classmethod
    def create(cls, kind: Kind, basis: Sequence[Structure]) -> "Problem":
        """Validate, canonicalise and deduplicate a basis.

        Every offending element is reported at once.
        """
        problems = []
        for i, s in enumerate(basis):
            if s.arities != kind.arities:
                problems.append(f"basis[{i}]: signature {list(s.arities)} does not match {list(kind.arities)}")
            elif s.length < 1:
                problems.append(f"basis[{i}]: basis elements need at least one point")
            elif not is_member(kind, s):
                problems.append(f"basis[{i}]: {kind.label(s)} is not a {kind.name}")
        if problems:
            raise InputError("invalid basis:\n  " + "\n  ".join(problems))
        uniq = sorted(set(basis), key=kind.sort_key)
        b = max((s.length for s in uniq), default=1)
        return cls(kind, tuple(uniq), b)

    def contains(self, s: Structure) -> bool:
        return is_member(self.kind, s) and avoids(s, self.basis)

    def members(self, n: int) -> list[Structure]:
        """``C_n`` in canonical order (fast path for the bit-coded kinds)."""
        k = self.kind
        if k.is_local and n >= 1:
            _check_cap(k, n, None)
            from .bitcodec import codec
            c = codec(k, n)
            codes = c.member_codes()
            srcs, forbidden = [], []
            for length in sorted({s.length for s in self.basis}):
                if length > n:
                    continue
                small = codec(k, length)
                bad = np.array(sorted(small.encode(s) for s in self.basis if s.length == length), dtype=np.int64)
                for lo in range(1, n - length + 2):
                    srcs.append(c.window_src(lo, lo + length - 1))
                    forbidden.append(bad)
            if srcs:
                codes = codes[_kernels.avoid_mask(codes, srcs, forbidden)]
            return sorted((c.decode(x) for x in codes), key=k.sort_key)
        return [s for s in enumerate_structures(k, n) if avoids(s, self.basis)]


class FactorGraph:
    def __init__(self, problem: Problem, m: int, vertices: list[Structure], edges: list[tuple[int, int]]):
        self.problem, self.m = problem, m
        self.vertices = vertices
        self.index = {v: i for i, v in enumerate(vertices)}
        self.digraph = Digraph([problem.kind.label(v) for v in vertices], edges)

    def __len__(self) -> int:
        return len(self.vertices)

    def label(self, i: int) -> str:
        return self.digraph.labels[i]

    def labels(self, idx: Sequence[int]) -> list[str]:
        return [self.digraph.labels[i] for i in idx]

    def to_json(self) -> dict:
        return {
            "kind": self.problem.kind.descriptor(),
            "dimension": self.m,
            "vertices": list(self.digraph.labels),
            "edges": [list(e) for e in self.digraph.edges],
        }

    def to_dot(self) -> str:
        return to_dot(self.digraph, "factor_graph")


def build(p: Problem, m: Optional[int] = None) -> FactorGraph:
    m = p.b if m is None else m
    if m < p.b:
        raise InputError(f"dimension {m} is below the longest basis length {p.b}")
    verts = p.members(m)
    heads: dict[Structure, list[int]] = {}
    for j, v in enumerate(verts):
        heads.setdefault(restrict(v, 1, m - 1), []).append(j)
    edges = [(i, j) for i, u in enumerate(verts) for j in heads.get(restrict(u, 2, m), ())]
    return FactorGraph(p, m, verts, edges)


def path_of(fg: FactorGraph, s: Structure) -> list[int]:
    """Vertex indices of the length-``m`` windows of ``s``, left to right."""
    if s.length < fg.m:
        raise InputError(f"structure of length {s.length} is shorter than the dimension {fg.m}")
    if not fg.problem.contains(s):
        raise InputError(f"{fg.problem.kind.label(s)} is not in the avoidance set")
    return [fg.index[w] for w in windows(s, fg.m)]


def _check_path(fg: FactorGraph, path: Sequence[int]) -> None:
    if not path:
        raise InputError("a path needs at least one vertex")
    for v in path:
        if not 0 <= v < len(fg):
            raise InputError(f"vertex {v} is not in the factor graph")
    for u, v in zip(path, path[1:]):
        if not fg.digraph.has_edge(u, v):
            raise InputError(f"{fg.label(u)} -> {fg.label(v)} is not an edge")


def iter_structures_of_path(fg: FactorGraph, path: Sequence[int]) -> Iterator[Structure]:
    """Lazily yield every structure whose window path is exactly ``path``.

    Grows one point per edge, pinning the newest window to the next vertex.
    Each window already lies in ``C`` and every basis element fits inside a
    window, so the results avoid the basis; both facts are re-checked anyway.
    """
    _check_path(fg, path)
    k, m = fg.problem.kind, fg.m
    verts = fg.vertices

    def grow(theta: Structure, step: int) -> Iterator[Structure]:
        if step == len(path):
            yield theta
            return
        lo = theta.length - m + 2
        for nxt in extensions(k, theta, [(lo, verts[path[step]])]):
            yield from grow(nxt, step + 1)

    for s in grow(verts[path[0]], 1):
        if avoids(s, fg.problem.basis) and [fg.index.get(w) for w in windows(s, m)] == list(path):
            yield s


def structures_of_path(fg: FactorGraph, path: Sequence[int], max_count: int = 1 << 16) -> list[Structure]:
    out = []
    for s in iter_structures_of_path(fg, path):
        out.append(s)
        if len(out) > max_count:
            raise LimitError(f"path realises more than {max_count} structures")
    return sorted(out, key=fg.problem.kind.sort_key)


def is_ambiguous(fg: FactorGraph, path: Sequence[int]) -> bool:
    it = iter_structures_of_path(fg, path)
    return next(it, None) is not None and next(it, None) is not None

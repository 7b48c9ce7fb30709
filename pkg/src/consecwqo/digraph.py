"""Finite digraph analysis: components, cycles, in-out cycles and bicycles.

Vertices are indices ``0..n-1`` carrying opaque labels; loops are allowed,
parallel edges are not.  Every search walks successors in increasing index
order, so all witnesses are deterministic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Optional, Sequence

from .errors import InputError


class Digraph:
    __slots__ = ("labels", "n", "edges", "succ", "pred")

    def __init__(self, labels: Sequence[Hashable], edges: Iterable[tuple[int, int]]):
        self.labels = tuple(labels)
        self.n = len(self.labels)
        es = set()
        for u, v in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"edge ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
            es.add((int(u), int(v)))
        self.edges = tuple(sorted(es))
        self.succ: list[list[int]] = [[] for _ in range(self.n)]
        self.pred: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            self.succ[u].append(v)
            self.pred[v].append(u)

    def out_degree(self, v: int) -> int:
        return len(self.succ[v])

    def in_degree(self, v: int) -> int:
        return len(self.pred[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.succ[u]

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, edges={list(self.edges)})"


# -- components -------------------------------------------------------------------

def sccs(g: Digraph) -> list[list[int]]:
    """Strongly connected components, sources first; each component sorted."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack = [False] * g.n
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0
    for root in range(g.n):
        if root in index:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(g.succ[v]):
                work[-1] = (v, i + 1)
                w = g.succ[v][i]
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                out.append(sorted(comp))
    out.reverse()
    return out


def is_strongly_connected(g: Digraph) -> bool:
    if g.n == 0:
        raise InputError("strong connectivity is undefined for the empty digraph")
    return len(sccs(g)) == 1


def is_cyclic_component(g: Digraph, comp: Sequence[int]) -> bool:
    """Whether a component carries a cycle (two or more vertices, or a loop)."""
    return len(comp) > 1 or g.has_edge(comp[0], comp[0])


def shortest_path(g: Digraph, src: int, dst: int, allowed: Optional[set] = None) -> Optional[list[int]]:
    """Fewest-edge path ``src -> dst`` with at least one edge (BFS, smallest index first)."""
    parent: dict[int, int] = {}
    queue = deque()
    for w in g.succ[src]:
        if (allowed is None or w in allowed) and w not in parent:
            parent[w] = src
            queue.append(w)
    while queue:
        v = queue.popleft()
        if v == dst:
            path = [v]
            while True:
                v = parent[v]
                path.append(v)
                if v == src and len(path) > 1:
                    break
            return path[::-1]
        for w in g.succ[v]:
            if (allowed is None or w in allowed) and w not in parent:
                parent[w] = v
                queue.append(w)
    return None


def _reaches(g: Digraph, start: int, target: int, blocked: set) -> bool:
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        if v == target:
            return True
        for w in g.succ[v]:
            if w not in seen and (w == target or w not in blocked):
                seen.add(w)
                queue.append(w)
    return False


# -- cycles ---------------------------------------------------------------------------

def has_cycle(g: Digraph) -> Optional[list[int]]:
    """Lexicographically least simple cycle, closed (``[v, ..., v]``), or ``None``."""
    comp_of = {}
    for c in sccs(g):
        for v in c:
            comp_of[v] = c
    starts = [v for v in range(g.n) if is_cyclic_component(g, comp_of[v])]
    if not starts:
        return None
    v0 = starts[0]
    comp = set(comp_of[v0])
    path = [v0]
    while True:
        cur = path[-1]
        if v0 in g.succ[cur]:
            return path + [v0]
        on_path = set(path)
        for w in g.succ[cur]:
            if w in comp and w not in on_path and _reaches(g, w, v0, on_path | (set(range(g.n)) - comp)):
                path.append(w)
                break
        else:  # pragma: no cover - reachability guarantees progress
            raise AssertionError("cycle search stalled")


@dataclass(frozen=True)
class InOutCycle:
    cycle: list[int]
    u: int  # in-degree > 1
    v: int  # out-degree > 1


def has_in_out_cycle(g: Digraph) -> Optional[InOutCycle]:
    """A closed walk through a vertex of in-degree > 1 and one of out-degree > 1.

    Degrees are taken in the whole digraph.  Any two vertices of one cyclic
    component share a closed walk, so the search is per component.
    """
    for comp in sccs(g):
        if not is_cyclic_component(g, comp):
            continue
        ins = [w for w in comp if g.in_degree(w) > 1]
        outs = [w for w in comp if g.out_degree(w) > 1]
        if ins and outs:
            u, v = ins[0], outs[0]
            allowed = set(comp)
            if u == v:
                walk = shortest_path(g, u, u, allowed)
            else:
                walk = shortest_path(g, u, v, allowed) + shortest_path(g, v, u, allowed)[1:]
            return InOutCycle(walk, u, v)
    return None


# -- bicycles -------------------------------------------------------------------------

@dataclass(frozen=True)
class BicycleDecomposition:
    initial_cycle: Optional[list[int]]
    terminal_cycle: Optional[list[int]]
    connecting_path: list[int]

    def parts(self) -> tuple[set, set]:
        """Vertex and edge sets covered by the decomposition."""
        verts, edges = set(), set()
        for walk in (self.initial_cycle, self.terminal_cycle, self.connecting_path):
            if walk:
                verts.update(walk)
                edges.update(zip(walk, walk[1:]))
        return verts, edges


def _simple_cycle(g: Digraph, comp: Sequence[int]) -> Optional[list[int]]:
    members = set(comp)
    inner = {v: [w for w in g.succ[v] if w in members] for v in comp}
    if any(len(ws) != 1 for ws in inner.values()):
        return None
    cyc = [comp[0]]
    while True:
        nxt = inner[cyc[-1]][0]
        cyc.append(nxt)
        if nxt == comp[0]:
            break
        if len(cyc) > len(comp) + 1:  # pragma: no cover
            return None
    return cyc if len(cyc) == len(comp) + 1 else None


def _bicycle(g: Digraph) -> tuple[Optional[BicycleDecomposition], Optional[int]]:
    if g.n == 0:
        return None, None
    for v in range(g.n):
        if g.in_degree(v) > 2 or g.out_degree(v) > 2:
            return None, v
    big_out = [v for v in range(g.n) if g.out_degree(v) == 2]
    big_in = [v for v in range(g.n) if g.in_degree(v) == 2]
    if len(big_out) > 1:
        return None, big_out[1]
    if len(big_in) > 1:
        return None, big_in[1]
    comps = sccs(g)
    cyclic = [i for i, c in enumerate(comps) if is_cyclic_component(g, c)]
    if len(cyclic) > 2:
        return None, comps[cyclic[2]][0]
    cycles = {}
    for i in cyclic:
        cyc = _simple_cycle(g, comps[i])
        if cyc is None:
            return None, comps[i][0]
        cycles[i] = cyc
    last = len(comps) - 1
    initial = terminal = None
    for i in cyclic:
        if i == 0:
            initial = cycles[i]
        elif i == last:
            terminal = cycles[i]
        else:
            return None, comps[i][0]
    if initial is not None and initial is not terminal and len(comps) == 1:
        return BicycleDecomposition(initial, None, []), None
    in_initial = set(initial or ())
    in_terminal = set(terminal or ())
    if initial is not None:
        exits = [v for v in initial[:-1] if any(w not in in_initial for w in g.succ[v])]
        if len(exits) != 1:
            return None, initial[0]
        path = [exits[0]]
    else:
        path = [comps[0][0]]
    while True:
        cur = path[-1]
        if cur in in_terminal and len(path) > 1 or (cur in in_terminal and initial is None and len(path) == 1):
            break
        nxt = [w for w in g.succ[cur] if not (cur in in_initial and w in in_initial)]
        if not nxt:
            break
        if len(nxt) > 1 or nxt[0] in path or nxt[0] in in_initial:
            return None, cur
        path.append(nxt[0])
    if initial is None and terminal is not None and path[0] in in_terminal:
        path = []  # the whole digraph is the terminal cycle; unreachable for n comps > 1
    if terminal is not None and path and path[-1] not in in_terminal:
        return None, path[-1]
    decomp = BicycleDecomposition(initial, terminal, path)
    verts, edges = decomp.parts()
    if verts != set(range(g.n)) or edges != set(g.edges):
        missing = sorted(set(range(g.n)) - verts)
        return None, missing[0] if missing else path[-1]
    if initial is not None and terminal is not None and len(path) < 2:
        return None, path[0]
    return decomp, None


def is_bicycle(g: Digraph) -> Optional[BicycleDecomposition]:
    """Decomposition of the whole digraph into at most two cycles joined by a path.

    A lone cycle is reported as an initial cycle with an empty path; a single
    loop-free vertex is a path of length zero.
    """
    return _bicycle(g)[0]


def bicycle_violation(g: Digraph) -> Optional[int]:
    """A vertex where bicycle recognition fails, or ``None`` for bicycles."""
    decomp, bad = _bicycle(g)
    if decomp is not None:
        return None
    return 0 if bad is None else bad


# -- export -------------------------------------------------------------------------

def _quote(text: str) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: Digraph, name: str = "G") -> str:
    lines = [f"digraph {name} {{"]
    for i, label in enumerate(g.labels):
        lines.append(f"  {i} [label={_quote(label)}];")
    for u, v in g.edges:
        lines.append(f"  {u} -> {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"

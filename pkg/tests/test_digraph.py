import itertools

import pytest
from hypothesis import given, strategies as st

from consecwqo.digraph import (Digraph, bicycle_violation, has_cycle, has_in_out_cycle, is_bicycle,
                               is_strongly_connected, sccs, shortest_path, to_dot)
from consecwqo.errors import InputError


def graph(n, edges):
    return Digraph([str(i) for i in range(n)], edges)


@st.composite
def digraphs(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.product(range(n), repeat=2))
    edges = draw(st.sets(st.sampled_from(pairs), max_size=min(len(pairs), 12)))
    return graph(n, sorted(edges))


def closure(g):
    """reach[u][v]: a walk of one or more edges from u to v."""
    r = [[g.has_edge(u, v) for v in range(g.n)] for u in range(g.n)]
    for k in range(g.n):
        for i in range(g.n):
            if r[i][k]:
                for j in range(g.n):
                    r[i][j] = r[i][j] or r[k][j]
    return r


def simple_cycles(g):
    out = []
    for size in range(1, g.n + 1):
        for seq in itertools.permutations(range(g.n), size):
            if all(g.has_edge(a, b) for a, b in zip(seq, seq[1:] + seq[:1])):
                out.append(list(seq))
    return out


def is_walk(g, walk):
    return all(g.has_edge(a, b) for a, b in zip(walk, walk[1:]))


def brute_bicycle(g):
    cycles = simple_cycles(g)
    all_edges = set(g.edges)
    for size in range(1, g.n + 1):
        for path in itertools.permutations(range(g.n), size):
            if not is_walk(g, path):
                continue
            pe = set(zip(path, path[1:]))
            c1s = [None] + [c for c in cycles if path[0] in c and not (set(c) - {path[0]}) & set(path)]
            c2s = [None] + [c for c in cycles if path[-1] in c and not (set(c) - {path[-1]}) & set(path)]
            for c1, c2 in itertools.product(c1s, c2s):
                if c1 and c2 and (size == 1 or set(c1) & set(c2)):
                    continue
                verts, edges = set(path), set(pe)
                for c in (c1, c2):
                    if c:
                        verts |= set(c)
                        edges |= set(zip(c, c[1:] + c[:1]))
                if verts == set(range(g.n)) and edges == all_edges:
                    return True
    return False


def test_strong_connectivity():
    assert is_strongly_connected(graph(3, [(0, 1), (1, 2), (2, 0)]))
    assert not is_strongly_connected(graph(2, [(0, 1)]))
    assert is_strongly_connected(graph(1, []))
    with pytest.raises(InputError):
        is_strongly_connected(graph(0, []))


def test_cycle_examples():
    assert has_cycle(graph(3, [(0, 1), (1, 2)])) is None
    assert has_cycle(graph(2, [(1, 1)])) == [1, 1]
    assert has_cycle(graph(3, [(0, 2), (2, 0), (0, 1), (1, 0)])) == [0, 1, 0]


def test_in_out_cycle_examples():
    # two loops joined by an edge: the exit and entry sit on different cycles
    assert has_in_out_cycle(graph(2, [(0, 0), (0, 1), (1, 1)])) is None
    assert has_in_out_cycle(graph(3, [(0, 1), (1, 0), (1, 2), (2, 0)])) is not None
    # branching off a cycle on both sides without re-entry
    assert has_in_out_cycle(graph(4, [(0, 1), (1, 0), (2, 0), (1, 3)])) is not None
    assert has_in_out_cycle(graph(3, [(0, 1), (1, 2), (2, 0)])) is None


def test_bicycle_examples():
    fig = graph(3, [(0, 0), (0, 1), (1, 2), (2, 2)])
    d = is_bicycle(fig)
    assert d.initial_cycle == [0, 0] and d.terminal_cycle == [2, 2] and d.connecting_path == [0, 1, 2]
    loops = graph(2, [(0, 0), (1, 1)])
    assert is_bicycle(loops) is None and bicycle_violation(loops) == 1
    assert is_bicycle(graph(3, [(0, 1), (1, 2), (2, 0)])).connecting_path == []
    assert is_bicycle(graph(1, [])).connecting_path == [0]
    assert is_bicycle(graph(3, [(0, 1), (1, 2)])).connecting_path == [0, 1, 2]
    assert is_bicycle(graph(1, [(0, 0)])).initial_cycle == [0, 0]
    assert is_bicycle(graph(0, [])) is None
    figure_eight = graph(3, [(0, 1), (1, 0), (0, 2), (2, 0)])
    assert is_bicycle(figure_eight) is None


def test_shortest_path():
    g = graph(4, [(0, 1), (1, 2), (0, 3), (3, 2)])
    assert shortest_path(g, 0, 2) == [0, 1, 2]
    assert shortest_path(g, 0, 2, allowed={0, 3, 2}) == [0, 3, 2]
    assert shortest_path(g, 2, 0) is None
    assert shortest_path(g, 1, 1) is None


def test_dot_export():
    g = Digraph(["a", 'q"'], [(1, 0), (0, 1)])
    assert to_dot(g, "x") == 'digraph x {\n  0 [label="a"];\n  1 [label="q\\""];\n  0 -> 1;\n  1 -> 0;\n}\n'


@given(digraphs())
def test_sccs_partition_in_topological_order(g):
    comps = sccs(g)
    assert sorted(v for c in comps for v in c) == list(range(g.n))
    r = closure(g)
    where = {v: i for i, c in enumerate(comps) for v in c}
    for u, v in itertools.product(range(g.n), repeat=2):
        same = u == v or (r[u][v] and r[v][u])
        assert (where[u] == where[v]) == same
    for u, v in g.edges:
        assert where[u] <= where[v]


@given(digraphs())
def test_has_cycle_is_lex_least(g):
    cyc = has_cycle(g)
    every = simple_cycles(g)
    if not every:
        assert cyc is None
        return
    assert cyc[0] == cyc[-1] and is_walk(g, cyc) and len(set(cyc[:-1])) == len(cyc) - 1
    assert cyc[:-1] == min(every)


@given(digraphs())
def test_in_out_cycle_matches_closure(g):
    r = closure(g)
    found = has_in_out_cycle(g)
    ins = [u for u in range(g.n) if g.in_degree(u) > 1]
    outs = [v for v in range(g.n) if g.out_degree(v) > 1]
    expected = any(r[u][v] and r[v][u] if u != v else r[u][u] for u in ins for v in outs)
    assert (found is not None) == expected
    if found:
        w = found.cycle
        assert w[0] == w[-1] and len(w) > 1 and is_walk(g, w)
        assert found.u in w and found.v in w
        assert g.in_degree(found.u) > 1 and g.out_degree(found.v) > 1


@given(digraphs(max_n=5))
def test_bicycle_matches_brute_force(g):
    d = is_bicycle(g)
    assert (d is not None) == brute_bicycle(g)
    if d is None:
        assert bicycle_violation(g) in range(g.n)
        return
    assert bicycle_violation(g) is None
    verts, edges = d.parts()
    assert verts == set(range(g.n)) and edges == set(g.edges)
    assert has_in_out_cycle(g) is None


@given(digraphs())
def test_strongly_connected_bicycle_is_a_cycle(g):
    if is_strongly_connected(g) and is_bicycle(g) is not None:
        assert all(g.in_degree(v) <= 1 and g.out_degree(v) <= 1 for v in range(g.n))

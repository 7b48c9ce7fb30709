"""Double-ascent permutations and their reduction to words over ``{l, r}``.

A double ascent has at most one consecutive inversion, so it splits into two
increasing runs.  Recording, for each value in turn, whether it sits in the
left or the right run gives a word over ``{l, r}``; the map ``A`` below goes
back.  Containment here is by *values*: a window of consecutive values, read
in position order.

Questions about ``Av(B)`` for double ascents become questions about the
avoidance set ``K = Av(W(B))`` of words.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .decide import NO, UNDETERMINED, YES, Verdict, _graph_info, finite_atomicity, in_out_paths
from .digraph import is_bicycle, sccs
from .errors import InputError, LimitError
from .factorgraph import FactorGraph, Problem, build, iter_structures_of_path
from .kinds import Kind

LR = Kind.of("word", alphabet=("l", "r"))

Perm = tuple[int, ...]


def as_permutation(p: Iterable[int]) -> Perm:
    try:
        vals = tuple(int(v) for v in p)
    except (TypeError, ValueError):
        raise InputError(f"not a permutation: {p!r}") from None
    if sorted(vals) != list(range(1, len(vals) + 1)):
        raise InputError(f"{list(vals)} is not a permutation of 1..{len(vals)}")
    return vals


def consecutive_inversions(p: Sequence[int]) -> list[int]:
    """1-based positions ``i`` with ``p[i] > p[i+1]``."""
    return [i for i in range(1, len(p)) if p[i - 1] > p[i]]


def is_double_ascent(p: Sequence[int]) -> bool:
    return len(consecutive_inversions(p)) <= 1


def _reduce(seq: Sequence[int]) -> Perm:
    order = sorted(seq)
    rank = {v: i for i, v in enumerate(order, 1)}
    return tuple(rank[v] for v in seq)


def value_consecutive_leq(s: Sequence[int], t: Sequence[int]) -> Optional[int]:
    """Least ``k`` such that the entries of ``t`` valued ``k..k+|s|-1`` reduce to ``s``."""
    s, n = tuple(s), len(s)
    for k in range(1, len(t) - n + 2):
        window = [v for v in t if k <= v < k + n]
        if tuple(v - k + 1 for v in window) == s:
            return k
    return None


def associated_permutation(w: str | Sequence[str]) -> Perm:
    """The double ascent whose values ``1..n`` fall left/right of the descent as ``w`` says."""
    left, right = [], []
    for v, letter in enumerate(w, 1):
        if letter == "l":
            left.append(v)
        elif letter == "r":
            right.append(v)
        else:
            raise InputError(f"letter {letter!r} is not l or r")
    return tuple(left + right)


def associated_words(p: Sequence[int]) -> list[str]:
    """All words mapped onto ``p`` by :func:`associated_permutation`, sorted."""
    p = as_permutation(p)
    inv = consecutive_inversions(p)
    n = len(p)
    if len(inv) > 1:
        raise InputError(f"{list(p)} has {len(inv)} consecutive inversions")
    if not inv:
        return sorted("l" * a + "r" * (n - a) for a in range(n + 1))
    left = set(p[: inv[0]])
    return ["".join("l" if v in left else "r" for v in range(1, n + 1))]


def _word_key(w: str):
    return (len(w), w)


def basis_words(basis: Iterable[Sequence[int]]) -> list[str]:
    return sorted({w for p in basis for w in associated_words(p)}, key=_word_key)


def double_ascents(n: int) -> list[Perm]:
    """All double ascents of length ``n`` (images of ``A``), sorted."""
    if n > 20:
        raise LimitError(f"enumerating double ascents of length {n} exceeds the cap")
    return sorted({associated_permutation(w) for w in itertools.product("lr", repeat=n)})


def avoids_da(p: Sequence[int], basis: Iterable[Sequence[int]]) -> bool:
    return all(value_consecutive_leq(b, p) is None for b in basis)


# -- problems ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DoubleAscentProblem:
    basis: tuple[Perm, ...]
    b: int

    @classmethod
    def create(cls, basis: Iterable[Sequence[int]]) -> "DoubleAscentProblem":
        perms, problems = [], []
        for i, raw in enumerate(basis):
            try:
                p = as_permutation(raw)
            except InputError as exc:
                problems.append(f"basis[{i}]: {exc}")
                continue
            if not p:
                problems.append(f"basis[{i}]: basis elements need at least one point")
            elif not is_double_ascent(p):
                problems.append(f"basis[{i}]: {list(p)} is not a double ascent")
            else:
                perms.append(p)
        if problems:
            raise InputError("invalid basis:\n  " + "\n  ".join(problems))
        uniq = tuple(sorted(set(perms), key=lambda p: (len(p), p)))
        return cls(uniq, max((len(p) for p in uniq), default=1))

    def members(self, n: int) -> list[Perm]:
        return [p for p in double_ascents(n) if avoids_da(p, self.basis)]

    def word_problem(self) -> Problem:
        return Problem.create(LR, [LR.word(w) for w in basis_words(self.basis)])


def word_factor_graph(dp: DoubleAscentProblem) -> FactorGraph:
    """Factor graph of ``K = Av(W(B))`` at dimension ``b``."""
    return build(dp.word_problem(), dp.b)


def _extra(dp: DoubleAscentProblem, fg: FactorGraph) -> dict:
    info = _graph_info(fg)
    info["word_basis"] = basis_words(dp.basis)
    return info


def decide_wqo_da(dp: DoubleAscentProblem) -> Verdict:
    from .digraph import has_in_out_cycle
    fg = word_factor_graph(dp)
    ioc = has_in_out_cycle(fg.digraph)
    if ioc is None:
        return Verdict("wqo", YES, "word factor graph has no in-out cycle", extra=_extra(dp, fg))
    witness = {"type": "in_out_cycle", "vertices": fg.labels(ioc.cycle), "u": fg.label(ioc.u), "v": fg.label(ioc.v)}
    return Verdict("wqo", NO, "word factor graph has an in-out cycle", witness, extra=_extra(dp, fg))


def short_member_without_extension(dp: DoubleAscentProblem) -> Optional[Perm]:
    """Least member shorter than ``b`` contained in no length-``b`` member."""
    top = dp.members(dp.b)
    for n in range(1, dp.b):
        for p in dp.members(n):
            if not any(value_consecutive_leq(p, t) is not None for t in top):
                return p
    return None


def decide_atomicity_da(dp: DoubleAscentProblem) -> Verdict:
    fg = word_factor_graph(dp)
    extra = _extra(dp, fg)
    g = fg.digraph
    if len(fg):
        shape_ok = len(sccs(g)) == 1 or is_bicycle(g) is not None
        if not shape_ok:
            from .decide import _disconnection_witness
            from .digraph import bicycle_violation
            witness = _disconnection_witness(fg)
            if witness["type"] == "non_joinable_pair":
                u, v = witness["left"], witness["right"]
                witness = {"type": "non_joinable_pair", "left": list(associated_permutation(u)),
                           "right": list(associated_permutation(v)), "words": [u, v]}
            else:
                witness = {"type": "not_bicycle", "vertex": fg.label(bicycle_violation(g))}
            return Verdict("atomicity", NO, "word factor graph neither strongly connected nor a bicycle",
                           witness, extra=extra)
    if not len(fg):
        members = [q for n in range(1, dp.b) for q in dp.members(n)]
        return finite_atomicity(members, value_consecutive_leq, list, extra)
    missing = short_member_without_extension(dp)
    if missing is not None:
        return Verdict("atomicity", NO, "extension condition fails",
                       {"type": "missing_extension", "structure": list(missing)}, extra=extra)
    return Verdict("atomicity", YES, "word factor graph strongly connected or a bicycle, short members extend",
                   extra=extra)


def is_single_ascent_word(w: str) -> bool:
    return "rl" not in w


def antichain_witness_da(dp: DoubleAscentProblem, k: int) -> list[Perm]:
    """``k`` pairwise incomparable members, via a word antichain with single ascents dropped."""
    if k < 1:
        return []
    fg = word_factor_graph(dp)
    for extra in range(2, 12):
        paths = in_out_paths(fg, k + extra)
        if paths is None:
            raise LimitError("no in-out cycle in the word factor graph")
        words = []
        for path in paths:
            s = next(iter_structures_of_path(fg, path), None)
            if s is not None:
                words.append("".join(LR.letters(s)))
        perms = [associated_permutation(w) for w in words if not is_single_ascent_word(w)][:k]
        if len(perms) == k:
            for a, b in itertools.permutations(perms, 2):
                if value_consecutive_leq(a, b) is not None:  # pragma: no cover
                    raise AssertionError("constructed antichain is not an antichain")
            return perms
    raise LimitError(f"could not assemble {k} incomparable double ascents")


# -- left-right diagnostics ------------------------------------------------------------

def _weak_components(fg: FactorGraph) -> list[list[int]]:
    g = fg.digraph
    seen, out = set(), []
    for start in range(len(fg)):
        if start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in g.succ[v] + g.pred[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        out.append(sorted(comp))
    return out


def left_right_diagnostics(fg: FactorGraph) -> dict:
    """Which weak components are bicycles on words ``l^a r^c`` only.

    Such a component has no edges to the rest of the graph by construction,
    so any hit is an isolated left-right bicycle.
    """
    from .digraph import Digraph
    g = fg.digraph
    comps = []
    for comp in _weak_components(fg):
        pos = {v: i for i, v in enumerate(comp)}
        sub = Digraph([g.labels[v] for v in comp],
                      [(pos[u], pos[v]) for u, v in g.edges if u in pos and v in pos])
        lr_words = all(is_single_ascent_word(g.labels[v]) for v in comp)
        comps.append({"vertices": [g.labels[v] for v in comp],
                      "left_right_bicycle": lr_words and is_bicycle(sub) is not None})
    whole = bool(comps) and len(comps) == 1 and comps[0]["left_right_bicycle"]
    return {"is_left_right_bicycle": whole,
            "isolated": any(c["left_right_bicycle"] for c in comps),
            "components": comps}

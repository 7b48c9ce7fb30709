"""Brute-force cross-checks that never look at a factor graph.

Everything here is built from structure extension and window comparison
alone, so agreement with the deciders is an independent confirmation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .core import Structure, avoids, consecutive_leq, restrict
from .doubleascent import DoubleAscentProblem, value_consecutive_leq
from .errors import InputError, LimitError
from .factorgraph import Problem
from .kinds import _empty, extensions

MAX_LAYER = 1 << 18

AnyProblem = Union[Problem, DoubleAscentProblem]


@dataclass
class OracleReport:
    check: str
    passed: bool
    counterexample: Optional[dict] = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"check": self.check, "passed": self.passed, "counterexample": self.counterexample}
        out.update(self.details)
        return out


def _basis_by_length(p: Problem) -> dict:
    out: dict = {}
    for b in p.basis:
        out.setdefault(b.length, set()).add(b)
    return out


def _ends_clean(p: Problem, s: Structure, by_length: Optional[dict] = None) -> bool:
    """No basis element sits in a window ending at the last point."""
    n = s.length
    by_length = _basis_by_length(p) if by_length is None else by_length
    return all(ell > n or restrict(s, n - ell + 1, n) not in bs for ell, bs in by_length.items())


def enumerate_avoidance(p: AnyProblem, n: int, max_count: int = MAX_LAYER) -> list:
    """``C_n`` grown layer by layer; a prefix of a member is a member.

    Only members are ever built, so the size guard is on the layers rather
    than on the raw relation bits.
    """
    if n < 0:
        raise InputError(f"length must be non-negative, got {n}")
    if isinstance(p, DoubleAscentProblem):
        return p.members(n)
    by_length = _basis_by_length(p)
    layer = [_empty(p.kind)]
    for q in range(n):
        layer = [t for s in layer for t in extensions(p.kind, s) if _ends_clean(p, t, by_length)]
        if len(layer) > max_count:
            raise LimitError(f"more than {max_count} members of length {q + 1}")
    return sorted(layer, key=p.kind.sort_key)


def exists_member(p: Problem, n: int, dead: Optional[set] = None) -> Optional[Structure]:
    """Some member of ``C`` of length ``n``, or ``None``.

    Depth-first with two prunings for the per-tuple kinds: tuples spanning
    ``b`` or more points never meet a basis window, so they are fixed to
    absent; and failure only depends on the last ``b-1`` points and the
    remaining length, so failed states are remembered.  Pass the same
    ``dead`` set to calls for other lengths of the same problem to share
    that memory.
    """
    k = p.kind
    local = k.is_local
    reach = p.b if local else None
    dead = set() if dead is None else dead
    by_length = _basis_by_length(p)

    def grow(s: Structure) -> Optional[Structure]:
        if s.length == n:
            return s
        key = (restrict(s, max(1, s.length - p.b + 2), s.length), n - s.length) if local else None
        if key in dead:
            return None
        for t in extensions(k, s, reach=reach):
            if _ends_clean(p, t, by_length):
                found = grow(t)
                if found is not None:
                    return found
        if local:
            dead.add(key)
        return None

    return grow(_empty(k))


def nonempty_lengths(p: Problem, lengths) -> dict:
    """``{n: some member of length n or None}`` for each requested length."""
    dead: set = set()
    return {n: exists_member(p, n, dead) for n in lengths}


def jep_search(p: AnyProblem, sigma, rho, max_len: int, least: bool = True):
    """A member of length at most ``max_len`` containing both, or ``None`` ("absent up to L").

    The shortest length with a joiner wins.  At that length every pair of
    offsets is tried and the canonically least of the joiners found is
    returned; each placement contributes the first joiner its depth-first
    search reaches (the least one for words).  With ``least=False`` the
    first joiner found is returned, which is all an existence check needs.
    """
    if isinstance(p, DoubleAscentProblem):
        for n in range(max(len(sigma), len(rho)), max_len + 1):
            for t in p.members(n):
                if value_consecutive_leq(sigma, t) is not None and value_consecutive_leq(rho, t) is not None:
                    return t
        return None
    by_length = _basis_by_length(p)
    for n in range(max(sigma.length, rho.length), max_len + 1):
        found = []
        for i in range(1, n - sigma.length + 2):
            for j in range(1, n - rho.length + 2):
                if not _agree(sigma, i, rho, j):
                    continue
                t = _joiner_at(p, sigma, i, rho, j, n, by_length)
                if t is not None:
                    if not least:
                        return t
                    found.append(t)
        if found:
            return min(found, key=p.kind.sort_key)
    return None


def _agree(sigma: Structure, i: int, rho: Structure, j: int) -> bool:
    """Whether the two placements induce the same structure where they overlap."""
    lo, hi = max(i, j), min(i + sigma.length, j + rho.length) - 1
    return lo > hi or restrict(sigma, lo - i + 1, hi - i + 1) == restrict(rho, lo - j + 1, hi - j + 1)


def _joiner_at(p: Problem, sigma: Structure, i: int, rho: Structure, j: int, n: int,
               by_length: dict) -> Optional[Structure]:
    k = p.kind
    local = k.is_local
    reach = max(p.b, sigma.length, rho.length) if local else None
    placed = ((sigma, i), (rho, j))
    dead: set = set()

    def constraints(q: int):
        out = []
        for s, at in placed:
            if at <= q < at + s.length:
                out.append((at, restrict(s, 1, q - at + 1)))
        return out

    def grow(theta: Structure) -> Optional[Structure]:
        q = theta.length
        if q == n:
            return theta
        key = (restrict(theta, max(1, q - reach + 2), q), q) if local else None
        if key in dead:
            return None
        for nxt in extensions(k, theta, constraints(q + 1), reach=reach):
            if _ends_clean(p, nxt, by_length):
                found = grow(nxt)
                if found is not None:
                    return found
        if local:
            dead.add(key)
        return None

    return grow(_empty(k))


def verify_antichain(p: AnyProblem, xs: Sequence) -> OracleReport:
    """Pairwise non-embeddability (by values for double ascents)."""
    if isinstance(p, DoubleAscentProblem):
        leq, show = value_consecutive_leq, list
        members = [avoids_da_member(p, x) for x in xs]
    else:
        leq, show = consecutive_leq, p.kind.to_json
        members = [p.contains(x) for x in xs]
    for x, ok in zip(xs, members):
        if not ok:
            return OracleReport("verify_antichain", False, {"not_a_member": show(x)})
    for a, b in itertools.permutations(xs, 2):
        at = leq(a, b)
        if at is not None:
            return OracleReport("verify_antichain", False, {"smaller": show(a), "larger": show(b), "offset": at})
    return OracleReport("verify_antichain", True, details={"size": len(xs)})


def avoids_da_member(p: DoubleAscentProblem, x) -> bool:
    from .doubleascent import avoids_da, is_double_ascent
    return is_double_ascent(x) and avoids_da(x, p.basis)


def verify_joiner(p: AnyProblem, sigma, rho, joiner) -> OracleReport:
    """Re-check a claimed joiner: a member containing both structures."""
    if isinstance(p, DoubleAscentProblem):
        ok = avoids_da_member(p, joiner) and value_consecutive_leq(sigma, joiner) is not None \
            and value_consecutive_leq(rho, joiner) is not None
        return OracleReport("verify_joiner", ok, None if ok else {"joiner": list(joiner)})
    ok = p.contains(joiner) and consecutive_leq(sigma, joiner) is not None and consecutive_leq(rho, joiner) is not None
    return OracleReport("verify_joiner", ok, None if ok else {"joiner": p.kind.to_json(joiner)})

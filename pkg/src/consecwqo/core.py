"""Finite relational structures on ``[1, n]`` under the consecutive order.

Every structure carries an implicit linear order, the natural order on its
points, plus one explicit relation per signature slot.  Structures are kept
in canonical form at all times: points are ``1..n`` and each relation is a
lexicographically sorted tuple of tuples, so equality of values *is*
isomorphism and hashing is cheap.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import InputError

Tuple_ = tuple[int, ...]
Relations = tuple[tuple[Tuple_, ...], ...]


@dataclass(frozen=True, slots=True)
class Structure:
    length: int
    arities: tuple[int, ...]
    relations: Relations

    def __len__(self) -> int:
        return self.length

    def __repr__(self) -> str:
        return f"Structure({encode(self)!r})"


def check_signature(arities: Sequence[int]) -> tuple[int, ...]:
    arities = tuple(int(a) for a in arities)
    if any(a < 1 for a in arities):
        raise InputError(f"arities must be positive, got {list(arities)}")
    return arities


def make_structure(n: int, relations: Iterable[Iterable[Sequence[int]]], arities: Sequence[int]) -> Structure:
    """Build a structure on ``[1, n]`` from explicit tuple sets (validated)."""
    if n < 0:
        raise InputError(f"length must be non-negative, got {n}")
    return canonicalize(range(1, n + 1), relations, arities)


def canonicalize(points: Iterable[int], relations: Iterable[Iterable[Sequence[int]]], arities: Sequence[int]) -> Structure:
    """Relabel ``points`` order-preservingly onto ``[1, |points|]``."""
    arities = check_signature(arities)
    pts = sorted(set(points))
    label = {p: i for i, p in enumerate(pts, 1)}
    relations = list(relations)
    if len(relations) != len(arities):
        raise InputError(f"expected {len(arities)} relations, got {len(relations)}")
    out = []
    for slot, (arity, rel) in enumerate(zip(arities, relations), 1):
        tuples = set()
        for tup in rel:
            tup = tuple(tup)
            if len(tup) != arity:
                raise InputError(f"relation R{slot} has arity {arity}, got tuple {tup}")
            try:
                tuples.add(tuple(label[x] for x in tup))
            except KeyError as exc:
                raise InputError(f"tuple {tup} in R{slot} uses point {exc.args[0]} outside {pts}") from None
        out.append(tuple(sorted(tuples)))
    return Structure(len(pts), arities, tuple(out))


def restrict(s: Structure, lo: int, hi: int) -> Structure:
    """Induced, canonicalised substructure on the interval ``[lo, hi]``.

    ``lo == hi + 1`` gives the empty structure.
    """
    if lo < 1 or hi > s.length or lo > hi + 1:
        raise InputError(f"interval [{lo}, {hi}] not within [1, {s.length}]")
    if lo == 1 and hi == s.length:
        return s
    shift = lo - 1
    rels = tuple(
        tuple(tuple(x - shift for x in t) for t in rel if lo <= min(t) and max(t) <= hi)
        for rel in s.relations
    )
    return Structure(hi - lo + 1, s.arities, rels)


def _same_signature(a: Structure, b: Structure) -> None:
    if a.arities != b.arities:
        raise InputError(f"signature mismatch: {list(a.arities)} vs {list(b.arities)}")


def is_isomorphic(a: Structure, b: Structure) -> bool:
    _same_signature(a, b)
    return a == b


def consecutive_leq(s: Structure, t: Structure) -> Optional[int]:
    """Smallest offset ``k`` with ``t[k, k+|s|-1] == s``, or ``None``."""
    _same_signature(s, t)
    p = s.length
    for k in range(1, t.length - p + 2):
        if restrict(t, k, k + p - 1) == s:
            return k
    return None


def avoids(s: Structure, basis: Iterable[Structure]) -> bool:
    by_length: dict[int, set] = {}
    for b in basis:
        _same_signature(b, s)
        by_length.setdefault(b.length, set()).add(b)
    return not any(w in bs for n, bs in by_length.items() if n <= s.length for w in windows(s, n))


def overlap_amounts(s: Structure, t: Structure) -> list[int]:
    """All ``x >= 1`` such that the last ``x`` points of ``s`` match the first ``x`` of ``t``."""
    _same_signature(s, t)
    p = s.length
    return [x for x in range(1, min(p, t.length) + 1) if restrict(s, p - x + 1, p) == restrict(t, 1, x)]


def windows(s: Structure, width: int) -> list[Structure]:
    """All length-``width`` windows of ``s`` from left to right."""
    return [restrict(s, i, i + width - 1) for i in range(1, s.length - width + 2)]


# -- canonical text encoding -------------------------------------------------

def encode(s: Structure) -> str:
    parts = [f"n={s.length}"]
    for slot, rel in enumerate(s.relations, 1):
        body = ",".join("(" + ",".join(map(str, t)) + ")" for t in rel)
        parts.append(f"R{slot}={{{body}}}")
    return ";".join(parts)


_SLOT = re.compile(r"^R(\d+)=\{(.*)\}$")
_TUPLE = re.compile(r"\(([^()]*)\)")


def decode(text: str, arities: Sequence[int]) -> Structure:
    arities = check_signature(arities)
    fields = text.strip().split(";")
    if not fields[0].startswith("n="):
        raise InputError(f"encoding must start with 'n=': {text!r}")
    try:
        n = int(fields[0][2:])
    except ValueError:
        raise InputError(f"bad length in {text!r}") from None
    if len(fields) - 1 != len(arities):
        raise InputError(f"{text!r} has {len(fields) - 1} relations, signature expects {len(arities)}")
    rels = []
    for slot, field in enumerate(fields[1:], 1):
        m = _SLOT.match(field)
        if not m or int(m.group(1)) != slot:
            raise InputError(f"bad relation field {field!r}")
        rels.append([tuple(int(x) for x in tm.group(1).split(",")) for tm in _TUPLE.finditer(m.group(2))])
    s = make_structure(n, rels, arities)
    if encode(s) != text.strip():
        raise InputError(f"{text!r} is not in canonical form")
    return s

"""Structure kinds: membership, enumeration and overlap combination.

All enumeration is driven by one primitive, :func:`extensions`, which adds a
new last point to a structure in every way the kind allows.  The new tuples
(those containing the new point) are split into independent *choice groups*;
an extension picks one alternative per group.  Free kinds have one group per
tuple or symmetric pair, closure kinds (permutations, equivalences, posets)
have a single group listing every admissible way to place the new point.

Window constraints pin the alternatives: a constraint ``(lo, target)`` asks
that the new structure restricted to ``[lo, n+1]`` equals ``target``.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .core import Structure, check_signature, decode, encode, make_structure, overlap_amounts, restrict
from .errors import InputError, LimitError

BOUNTIFUL = "bountiful"
VALID_UNAMBIGUOUS = "valid_unambiguous"
VALID_OTHER = "valid_other"
ENCODED = "encoded"

CLASSIFICATION = {
    "graph": BOUNTIFUL,
    "simple_graph": BOUNTIFUL,
    "digraph": BOUNTIFUL,
    "tournament": BOUNTIFUL,
    "relational": BOUNTIFUL,
    "word": VALID_UNAMBIGUOUS,
    "linear_order": VALID_UNAMBIGUOUS,
    "permutation": VALID_OTHER,
    "equivalence": VALID_OTHER,
    "poset": VALID_OTHER,
}
KIND_NAMES = tuple(CLASSIFICATION)
# kinds whose membership is a per-tuple condition; these get the bit codec
BIT_KINDS = frozenset({"graph", "simple_graph", "digraph", "tournament", "relational"})

DEFAULT_MAX_BITS = 24


def enumeration_cap() -> int:
    """Relation-bit cap per enumerated structure (env ``CONSECWQO_MAX_BITS``)."""
    raw = os.environ.get("CONSECWQO_MAX_BITS")
    if raw is None:
        return DEFAULT_MAX_BITS
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"CONSECWQO_MAX_BITS must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class Kind:
    name: str
    arities: tuple[int, ...]
    alphabet: Optional[tuple[str, ...]] = None

    @classmethod
    def of(cls, name: str, signature: Optional[Sequence[int]] = None,
           alphabet: Optional[Sequence[str]] = None) -> "Kind":
        if name not in CLASSIFICATION:
            raise InputError(f"unknown kind {name!r}; expected one of {', '.join(KIND_NAMES)}")
        if name == "relational":
            if signature is None:
                raise InputError("relational kind needs a signature")
            return cls(name, check_signature(signature))
        if signature is not None:
            raise InputError(f"kind {name!r} has a fixed signature")
        if name == "word":
            if not alphabet:
                raise InputError("word kind needs a non-empty alphabet")
            alphabet = tuple(str(a) for a in alphabet)
            if len(set(alphabet)) != len(alphabet):
                raise InputError(f"alphabet letters must be distinct: {list(alphabet)}")
            return cls(name, (1,) * len(alphabet), alphabet)
        if alphabet is not None:
            raise InputError(f"kind {name!r} takes no alphabet")
        return cls(name, () if name == "linear_order" else (2,))

    @classmethod
    def from_descriptor(cls, desc: dict) -> "Kind":
        if not isinstance(desc, dict) or "name" not in desc:
            raise InputError(f"kind descriptor must be an object with a 'name': {desc!r}")
        extra = set(desc) - {"name", "signature", "alphabet"}
        if extra:
            raise InputError(f"unknown kind descriptor fields: {sorted(extra)}")
        return cls.of(desc["name"], desc.get("signature"), desc.get("alphabet"))

    def descriptor(self) -> dict:
        d: dict = {"name": self.name}
        if self.name == "relational":
            d["signature"] = list(self.arities)
        if self.alphabet is not None:
            d["alphabet"] = list(self.alphabet)
        return d

    @property
    def classification(self) -> str:
        return CLASSIFICATION[self.name]

    @property
    def is_local(self) -> bool:
        return self.name in BIT_KINDS

    # -- conversions -------------------------------------------------------

    def word(self, letters: Sequence[str] | str) -> Structure:
        """Word structure from a string (single-character letters) or letter list."""
        if self.name != "word":
            raise InputError(f"{self.name} is not a word kind")
        index = {a: i for i, a in enumerate(self.alphabet)}
        rels: list[list[tuple[int]]] = [[] for _ in self.alphabet]
        for pos, letter in enumerate(letters, 1):
            if letter not in index:
                raise InputError(f"letter {letter!r} not in alphabet {list(self.alphabet)}")
            rels[index[letter]].append((pos,))
        return make_structure(len(letters), rels, self.arities)

    def letters(self, s: Structure) -> list[str]:
        out = [""] * s.length
        for a, rel in zip(self.alphabet, s.relations):
            for (pos,) in rel:
                out[pos - 1] = a
        return out

    def permutation(self, one_line: Sequence[int]) -> Structure:
        """Permutation structure: points are values, R1 is the position order."""
        if self.name != "permutation":
            raise InputError(f"{self.name} is not the permutation kind")
        return permutation_structure(one_line)

    def parse(self, obj) -> Structure:
        """Structure from its JSON form (see :meth:`to_json`)."""
        if self.name == "word" and isinstance(obj, (str, list)):
            return self.word(obj)
        if self.name == "permutation" and isinstance(obj, list):
            return permutation_structure(obj)
        if self.name == "linear_order" and isinstance(obj, int) and not isinstance(obj, bool):
            return make_structure(obj, [], ())
        if isinstance(obj, str):
            return decode(obj, self.arities)
        if isinstance(obj, dict):
            if set(obj) - {"length", "relations"} or "length" not in obj:
                raise InputError(f"structure object needs 'length' and 'relations': {obj!r}")
            rels = obj.get("relations", [])
            if not isinstance(rels, list):
                raise InputError(f"'relations' must be a list: {obj!r}")
            try:
                return make_structure(int(obj["length"]), rels, self.arities)
            except TypeError:
                raise InputError(f"malformed relations in {obj!r}") from None
        raise InputError(f"cannot read a {self.name} structure from {obj!r}")

    def to_json(self, s: Structure):
        if self.name == "word":
            letters = self.letters(s)
            return "".join(letters) if all(len(a) == 1 for a in self.alphabet) else letters
        if self.name == "permutation":
            return one_line(s)
        return {"length": s.length, "relations": [[list(t) for t in rel] for rel in s.relations]}

    def label(self, s: Structure) -> str:
        """Vertex label for DOT/JSON output."""
        if self.name == "word":
            return "".join(self.letters(s)) if all(len(a) == 1 for a in self.alphabet) else " ".join(self.letters(s))
        if self.name == "permutation":
            return "[" + ",".join(map(str, one_line(s))) + "]"
        return encode(s)

    def sort_key(self, s: Structure):
        if self.name == "word":
            index = {a: i for i, a in enumerate(self.alphabet)}
            return (s.length, tuple(index[a] for a in self.letters(s)))
        if self.name == "permutation":
            return (s.length, tuple(one_line(s)))
        return (s.length, s.relations)

    def bits(self, n: int) -> int:
        """Relation-bit count of a length-``n`` structure, used for the cap."""
        name = self.name
        if name == "digraph":
            return n * n
        if name == "graph":
            return n * (n + 1) // 2
        if name in ("simple_graph", "tournament", "permutation", "equivalence", "poset"):
            return n * (n - 1) // 2
        if name == "relational":
            return sum(n ** a for a in self.arities)
        if name == "word":
            return math.ceil(n * math.log2(len(self.alphabet))) if len(self.alphabet) > 1 else 0
        return 0


def permutation_structure(one_line_: Sequence[int]) -> Structure:
    vals = [int(v) for v in one_line_]
    n = len(vals)
    if sorted(vals) != list(range(1, n + 1)):
        raise InputError(f"{list(one_line_)} is not a permutation of 1..{n}")
    pos = {v: i for i, v in enumerate(vals)}
    rel = [(u, v) for u in vals for v in vals if pos[u] <= pos[v]]
    return make_structure(n, [rel], (2,))


def one_line(s: Structure) -> list[int]:
    """One-line notation of a permutation structure (values in position order)."""
    below = [0] * (s.length + 1)
    for _, v in s.relations[0]:
        below[v] += 1
    return sorted(range(1, s.length + 1), key=below.__getitem__)


# -- membership ----------------------------------------------------------------

def _check_sig(k: Kind, s: Structure) -> None:
    if s.arities != k.arities:
        raise InputError(f"structure signature {list(s.arities)} does not match {k.name} {list(k.arities)}")


def _reflexive(rel: set, n: int) -> bool:
    return all((i, i) in rel for i in range(1, n + 1))


def _transitive(rel: set) -> bool:
    succ: dict[int, set] = {}
    for a, b in rel:
        succ.setdefault(a, set()).add(b)
    return all(c in succ.get(a, ()) for a, b in rel for c in succ.get(b, ()))


def _antisymmetric(rel: set) -> bool:
    return all(a == b or (b, a) not in rel for a, b in rel)


def is_member(k: Kind, s: Structure) -> bool:
    _check_sig(k, s)
    name, n = k.name, s.length
    if name in ("digraph", "relational", "linear_order"):
        return True
    if name == "word":
        seen = sorted(p for rel in s.relations for (p,) in rel)
        return seen == list(range(1, n + 1))
    rel = set(s.relations[0])
    if name in ("graph", "simple_graph"):
        if any((b, a) not in rel for a, b in rel):
            return False
        return name == "graph" or all(a != b for a, b in rel)
    if name == "tournament":
        if any(a == b for a, b in rel):
            return False
        return all(((i, j) in rel) != ((j, i) in rel) for i in range(1, n + 1) for j in range(i + 1, n + 1))
    if name == "equivalence":
        return _reflexive(rel, n) and all((b, a) in rel for a, b in rel) and _transitive(rel)
    if name == "poset":
        return _reflexive(rel, n) and _antisymmetric(rel) and _transitive(rel)
    if name == "permutation":
        total = all((i, j) in rel or (j, i) in rel for i in range(1, n + 1) for j in range(i + 1, n + 1))
        return total and _reflexive(rel, n) and _antisymmetric(rel) and _transitive(rel)
    raise AssertionError(name)


# -- extensions ------------------------------------------------------------------

# An alternative is a tuple of (slot, tuple) pairs to add; a group is a list of alternatives.
Alternative = tuple[tuple[int, tuple[int, ...]], ...]


def _tuples_with(q: int, arity: int) -> list[tuple[int, ...]]:
    return [t for t in itertools.product(range(1, q + 1), repeat=arity) if q in t]


def _extension_groups(k: Kind, s: Structure) -> list[list[Alternative]]:
    """Choice groups for adding point ``q = |s| + 1``, ordered far to near."""
    q = s.length + 1
    name = k.name
    if name in ("digraph", "relational"):
        items = [(slot, t) for slot, a in enumerate(k.arities) for t in _tuples_with(q, a)]
        items.sort(key=lambda it: (min(it[1]), it[0], it[1]))
        return [[(), ((slot, t),)] for slot, t in items]
    if name in ("graph", "simple_graph"):
        last = q if name == "graph" else q - 1
        return [[(), ((0, (i, q)), (0, (q, i))) if i != q else ((0, (q, q)),)] for i in range(1, last + 1)]
    if name == "tournament":
        return [[((0, (i, q)),), ((0, (q, i)),)] for i in range(1, q)]
    if name == "word":
        return [[((slot, (q,)),) for slot in range(len(k.alphabet))]]
    if name == "linear_order":
        return []
    rel = s.relations[0]
    if name == "permutation":
        order = one_line(s)
        alts = []
        for j in range(q):
            alt = [(0, (v, q)) for v in order[:j]] + [(0, (q, q))] + [(0, (q, v)) for v in order[j:]]
            alts.append(tuple(alt))
        return [alts]
    if name == "equivalence":
        classes = {}
        for a, b in rel:
            classes.setdefault(a, set()).add(b)
        alts = [((0, (q, q)),)]
        for rep in sorted({min(c) for c in classes.values()}):
            members = sorted(classes[rep])
            alts.append(tuple([(0, (e, q)) for e in members] + [(0, (q, q))] + [(0, (q, e)) for e in members]))
        return [alts]
    if name == "poset":
        n = s.length
        below = {i: {a for a, b in rel if b == i} for i in range(1, n + 1)}
        above = {i: {b for a, b in rel if a == i} for i in range(1, n + 1)}
        downs = [D for D in _subsets(n) if all(below[d] <= D for d in D)]
        ups = [U for U in _subsets(n) if all(above[u] <= U for u in U)]
        alts = []
        for D in downs:
            for U in ups:
                if D & U or any(u not in above[d] for d in D for u in U):
                    continue
                alts.append(tuple([(0, (d, q)) for d in sorted(D)] + [(0, (q, q))] + [(0, (q, u)) for u in sorted(U)]))
        return [alts]
    raise AssertionError(name)


def _subsets(n: int) -> list[frozenset]:
    return [frozenset(c) for r in range(n + 1) for c in itertools.combinations(range(1, n + 1), r)]


Constraint = tuple[int, Structure]


def extensions(k: Kind, s: Structure, constraints: Sequence[Constraint] = (),
               reach: Optional[int] = None) -> Iterator[Structure]:
    """Every member ``θ`` of length ``|s|+1`` with ``θ[1, |s|] == s``.

    ``constraints`` are ``(lo, target)`` windows that must satisfy
    ``θ[lo, |s|+1] == target``.  For local kinds, ``reach`` freezes every
    group whose tuples all span at least ``reach`` points apart to its first
    alternative (absent edge, or orientation towards the new point).
    """
    q = s.length + 1
    required = []
    for lo, target in constraints:
        if target.length != q - lo + 1:
            raise InputError("constraint window length mismatch")
        shift = lo - 1
        req = frozenset((slot, tuple(x + shift for x in t))
                        for slot, rel in enumerate(target.relations) for t in rel if target.length in t)
        required.append((lo, req))
    groups = []
    covered: set = set()
    for group in _extension_groups(k, s):
        if reach is not None and k.is_local and group and all(
                q - min(t) >= reach for alt in group for _, t in alt):
            group = group[:1]
        if required:
            # each group decides its own tuples, so compare only the part of
            # the required set that this group could produce
            universe = frozenset(it for alt in group for it in alt)
            covered |= universe
            group = [alt for alt in group
                     if all(frozenset(it for it in alt if min(it[1]) >= lo) == req & universe
                            for lo, req in required)]
            if not group:
                return
        groups.append(group)
    if any(not req <= covered for _, req in required):
        return
    base = [list(rel) for rel in s.relations]
    for choice in itertools.product(*groups):
        rels = [list(r) for r in base]
        for alt in choice:
            for slot, t in alt:
                rels[slot].append(t)
        yield Structure(q, s.arities, tuple(tuple(sorted(r)) for r in rels))


def _empty(k: Kind) -> Structure:
    return Structure(0, k.arities, tuple(() for _ in k.arities))


def _check_cap(k: Kind, n: int, cap: Optional[int]) -> None:
    cap = enumeration_cap() if cap is None else cap
    if k.bits(n) > cap:
        raise LimitError(f"{k.name} structures of length {n} need {k.bits(n)} relation bits, cap is {cap}")


def enumerate_structures(k: Kind, n: int, cap: Optional[int] = None) -> list[Structure]:
    """All members of length ``n`` in canonical order."""
    if n < 0:
        raise InputError(f"length must be non-negative, got {n}")
    _check_cap(k, n, cap)
    if k.is_local and n >= 3:
        from .bitcodec import BitCodec
        return BitCodec(k, n).all_members()
    layer = [_empty(k)]
    for _ in range(n):
        layer = [t for s in layer for t in extensions(k, s)]
    return sorted(layer, key=k.sort_key)


# -- combination ---------------------------------------------------------------

def iter_combinations(k: Kind, s: Structure, t: Structure, x: int,
                      reach: Optional[int] = None) -> Iterator[Structure]:
    """Members ``θ`` of length ``|s|+|t|-x`` extending ``s`` on the left and ``t`` on the right.

    ``x = 0`` (concatenation) is allowed here; overlap is not re-checked.
    """
    p, L = s.length, s.length + t.length - x
    lo = p - x + 1

    def grow(theta: Structure) -> Iterator[Structure]:
        if theta.length == L:
            yield theta
            return
        target = restrict(t, 1, theta.length + 1 - lo + 1)
        for nxt in extensions(k, theta, [(lo, target)], reach=reach):
            yield from grow(nxt)

    yield from grow(s)


def combine_all(k: Kind, s: Structure, t: Structure, x: int, max_count: int = 1 << 20) -> list[Structure]:
    """All members combining ``s`` and ``t`` on an overlap of ``x`` points, canonical order."""
    if x not in overlap_amounts(s, t):
        raise InputError(f"{x} is not an overlap amount of the given structures")
    out = []
    for theta in iter_combinations(k, s, t, x):
        out.append(theta)
        if len(out) > max_count:
            raise LimitError(f"more than {max_count} combinations")
    return sorted(out, key=k.sort_key)


def poset_amalgam(s: Structure, t: Structure, x: int) -> Structure:
    """The four-case order on the union of two posets glued on ``x`` points."""
    p, q = s.length, t.length
    L, shift = p + q - x, p - x
    P = set(s.relations[0])
    Q = {(a + shift, b + shift) for a, b in t.relations[0]}
    shared = range(shift + 1, p + 1)
    rel = set(P) | Q
    for a in range(1, shift + 1):
        for b in range(p + 1, L + 1):
            if any((a, c) in P and (c, b) in Q for c in shared):
                rel.add((a, b))
            if any((b, c) in Q and (c, a) in P for c in shared):
                rel.add((b, a))
    return make_structure(L, [rel], (2,))


# -- scale checks ----------------------------------------------------------------

@dataclass
class KindReport:
    kind: Kind
    check: str
    scale: int
    pairs_checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "kind": self.kind.descriptor(),
            "check": self.check,
            "scale": self.scale,
            "pairs_checked": self.pairs_checked,
            "passed": self.passed,
            "failures": [
                {"left": self.kind.to_json(s), "right": self.kind.to_json(t), "overlap": x}
                for s, t, x in self.failures[:20]
            ],
        }


def _grouped(structs: Iterable[Structure], key) -> dict:
    out: dict = {}
    for s in structs:
        out.setdefault(key(s), []).append(s)
    return out


def check_valid_at_scale(k: Kind, max_len: int, cap: Optional[int] = None) -> KindReport:
    """Every overlapping pair of members of length <= ``max_len`` has a combination."""
    report = KindReport(k, "valid", max_len)
    if max_len < 1:
        raise InputError("max_len must be at least 1")
    _check_cap(k, max_len, cap)
    if k.is_local:
        from .bitcodec import pair_scan
        for p in range(1, max_len + 1):
            for q in range(1, max_len + 1):
                for x in range(1, min(p, q) + 1):
                    checked, fails = pair_scan(k, p, q, x, need=1)
                    report.pairs_checked += checked
                    report.failures.extend(fails)
        return report
    members = {n: enumerate_structures(k, n, cap) for n in range(1, max_len + 1)}
    for p in members:
        for q in members:
            for x in range(1, min(p, q) + 1):
                tails = _grouped(members[p], lambda s: restrict(s, p - x + 1, p))
                heads = _grouped(members[q], lambda t: restrict(t, 1, x))
                for key, left in tails.items():
                    for s in left:
                        for t in heads.get(key, ()):
                            report.pairs_checked += 1
                            if next(iter_combinations(k, s, t, x), None) is None:
                                report.failures.append((s, t, x))
    return report


def check_bountiful_at_scale(k: Kind, m: int, cap: Optional[int] = None) -> KindReport:
    """Every pair of length-``m`` members overlapping on ``m-1`` points has two combinations."""
    report = KindReport(k, "bountiful", m)
    if m < 1:
        raise InputError("m must be at least 1")
    _check_cap(k, m + 1, cap)
    if k.is_local:
        from .bitcodec import pair_scan
        checked, fails = pair_scan(k, m, m, m - 1, need=2)
        report.pairs_checked, report.failures = checked, fails
        return report
    members = enumerate_structures(k, m, cap)
    tails = _grouped(members, lambda s: restrict(s, 2, m))
    heads = _grouped(members, lambda t: restrict(t, 1, m - 1))
    for key, left in tails.items():
        for s in left:
            for t in heads.get(key, ()):
                report.pairs_checked += 1
                if len(list(itertools.islice(iter_combinations(k, s, t, m - 1), 2))) < 2:
                    report.failures.append((s, t, m - 1))
    return report

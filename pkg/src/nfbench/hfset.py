"""Hereditarily finite sets with canonical Ackermann codes.

``code(s) = sum(2**code(e) for e in s)``; two sets are equal iff their codes
are equal, so membership and subset tests reduce to bit arithmetic on codes.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator, Optional

from .errors import HFSetError, HFSetOverflow, StageTooLarge, SubsetViolation

# Element codes must stay below this bound, i.e. every set lives in V_6.
CODE_BIT_BUDGET = 1 << 16

STAGE_SIZES = (0, 1, 2, 4, 16, 65536)


class HFSet:
    __slots__ = ("elements", "code", "_rank")

    def __init__(self, elements: Iterable["HFSet"] = ()):
        uniq = {}
        for e in elements:
            if not isinstance(e, HFSet):
                raise TypeError(f"HFSet elements must be HFSet, got {type(e).__name__}")
            uniq[e.code] = e
        code = 0
        for c in uniq:
            if c >= CODE_BIT_BUDGET:
                raise HFSetOverflow(f"element code {c} exceeds the {CODE_BIT_BUDGET}-bit budget")
            code |= 1 << c
        self.elements = tuple(uniq[c] for c in sorted(uniq))
        self.code = code
        self._rank = None

    @classmethod
    def _raw(cls, elements: tuple, code: int) -> "HFSet":
        s = cls.__new__(cls)
        s.elements = elements
        s.code = code
        s._rank = None
        return s

    def __eq__(self, other):
        return isinstance(other, HFSet) and self.code == other.code

    def __hash__(self):
        return hash(self.code)

    def __lt__(self, other: "HFSet"):
        return self.code < other.code

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator["HFSet"]:
        return iter(self.elements)

    def __contains__(self, e) -> bool:
        return isinstance(e, HFSet) and (self.code >> e.code) & 1 == 1

    def __repr__(self):
        return f"HFSet({hf_text(self)})"

    def __str__(self):
        return hf_text(self)

    def issubset(self, other: "HFSet") -> bool:
        return self.code & ~other.code == 0

    def __le__(self, other: "HFSet"):
        return self.issubset(other)

    def __or__(self, other: "HFSet") -> "HFSet":
        return HFSet(self.elements + other.elements)

    def __and__(self, other: "HFSet") -> "HFSet":
        return HFSet(e for e in self.elements if e in other)

    def __sub__(self, other: "HFSet") -> "HFSet":
        return HFSet(e for e in self.elements if e not in other)

    @property
    def rank(self) -> int:
        if self._rank is None:
            self._rank = 0 if not self.elements else 1 + max(e.rank for e in self.elements)
        return self._rank


EMPTY = HFSet._raw((), 0)

# ------------------------------------------------------------- Ackermann codes

_DECODED: dict[int, HFSet] = {0: EMPTY}


def ack_encode(s: HFSet) -> int:
    return s.code


def ack_decode(n: int) -> HFSet:
    if n < 0:
        raise HFSetError(f"Ackermann codes are natural numbers, got {n}")
    hit = _DECODED.get(n)
    if hit is not None:
        return hit
    if n.bit_length() > CODE_BIT_BUDGET:
        raise HFSetOverflow(f"code needs {n.bit_length()} bits; budget is {CODE_BIT_BUDGET}")
    elems = []
    bits, i = n, 0
    while bits:
        if bits & 1:
            elems.append(ack_decode(i))
        bits >>= 1
        i += 1
    s = HFSet._raw(tuple(elems), n)
    if n < CODE_BIT_BUDGET:
        _DECODED[n] = s
    return s


# ------------------------------------------------------------- brace notation

def hf_text(s: HFSet) -> str:
    return "{" + ",".join(hf_text(e) for e in s.elements) + "}"


def parse_hf(text: str) -> HFSet:
    """Parse nested-brace notation such as ``{{},{{}}}`` (whitespace allowed)."""
    src = "".join(text.split())
    pos = 0

    def fail(msg):
        raise HFSetError(f"bad HF notation at offset {pos}: {msg}")

    def parse_set() -> HFSet:
        nonlocal pos
        if pos >= len(src) or src[pos] != "{":
            fail("expected '{'")
        pos += 1
        elems = []
        if pos < len(src) and src[pos] == "}":
            pos += 1
            return EMPTY
        while True:
            elems.append(parse_set())
            if pos < len(src) and src[pos] == ",":
                pos += 1
                continue
            if pos < len(src) and src[pos] == "}":
                pos += 1
                return HFSet(elems)
            fail("expected ',' or '}'")

    result = parse_set()
    if pos != len(src):
        fail("trailing input")
    return result


# ---------------------------------------------------------------- V_n stages

_STAGES: dict[int, HFSet] = {}


def v_stage(n: int) -> HFSet:
    """The cumulative-hierarchy stage V_n; V_0 = {} and V_{n+1} = P(V_n)."""
    if n < 0:
        raise HFSetError("stage index must be non-negative")
    if n >= len(STAGE_SIZES):
        raise StageTooLarge(f"V_{n} is too large to build (V_5 already has 65536 elements)")
    if n not in _STAGES:
        # V_n consists exactly of the sets with code below |V_n|
        elems = tuple(ack_decode(i) for i in range(STAGE_SIZES[n]))
        _STAGES[n] = HFSet._raw(elems, (1 << STAGE_SIZES[n]) - 1)
    return _STAGES[n]


# ------------------------------------------------------------ set operations

def rank(s: HFSet) -> int:
    return s.rank


def pair(a: HFSet, b: HFSet) -> HFSet:
    return HFSet((a, b))


def singleton(a: HFSet) -> HFSet:
    return HFSet((a,))


def power_set(s: HFSet) -> HFSet:
    if len(s) > 16:
        raise HFSetOverflow(f"power set of a {len(s)}-element set exceeds the code budget")
    elems = s.elements
    return HFSet(
        HFSet._raw(tuple(elems[i] for i in range(len(elems)) if mask >> i & 1),
                   sum(1 << elems[i].code for i in range(len(elems)) if mask >> i & 1))
        for mask in range(1 << len(elems))
    )


def big_union(s: HFSet) -> HFSet:
    return HFSet(e for member in s for e in member)


def singleton_image(s: HFSet) -> HFSet:
    """P_1(s): the set of singletons of elements of ``s``."""
    return HFSet(singleton(e) for e in s)


def complement_within(s: HFSet, universe: HFSet) -> HFSet:
    if not s.issubset(universe):
        raise SubsetViolation(f"{hf_text(s)} is not a subset of {hf_text(universe)}")
    return universe - s


def unordered_square(x: HFSet) -> HFSet:
    """All unordered pairs {a, b} with a, b in x; {a, a} collapses to {a}."""
    elems = x.elements
    return HFSet([singleton(a) for a in elems] + [pair(a, b) for a, b in combinations(elems, 2)])


def pair_components(p: HFSet) -> Optional[tuple[HFSet, HFSet]]:
    """Read ``p`` as an unordered pair; singletons read as (a, a), other sizes as None."""
    if len(p) == 1:
        return p.elements[0], p.elements[0]
    if len(p) == 2:
        return p.elements
    return None


def ustar_compose(c: HFSet, d: HFSet) -> HFSet:
    """Unordered composition {{x,z} : exists y ({x,y} in c and {y,z} in d)}."""
    following: dict[HFSet, set[HFSet]] = {}
    for q in d:
        comps = pair_components(q)
        if comps is None:
            continue
        y, z = comps
        following.setdefault(y, set()).add(z)
        following.setdefault(z, set()).add(y)
    out = []
    for p in c:
        comps = pair_components(p)
        if comps is None:
            continue
        a, b = comps
        for x, y in ((a, b), (b, a)):
            for z in following.get(y, ()):
                out.append(pair(x, z))
    return HFSet(out)


def pi_star(A: HFSet) -> HFSet:
    """The members of ``A`` that are unordered pairs of intersecting sets."""
    keep = []
    for p in A:
        comps = pair_components(p)
        if comps is not None and comps[0].code & comps[1].code:
            keep.append(p)
    return HFSet(keep)

"""Exhaustive and randomized search over small membership structures."""

from __future__ import annotations

import random
import string
from dataclasses import dataclass, field
from itertools import permutations, product
from math import comb, perm
from typing import Iterator, Optional

from .errors import InfeasibleSpec, SearchError, UndefinedF
from .formula import AxiomId, RelSym
from .structure import MembershipStructure, check_axiom, check_extensionality, dump_structure

UNDEFINED = -1


@dataclass(frozen=True)
class AxiomRequest:
    axiom: AxiomId
    flavor: RelSym = RelSym.MEM_F
    scope: str = "all"  # extensionality only: "all" | "sets"

    @classmethod
    def parse(cls, text: str, default_flavor: RelSym = RelSym.MEM_F) -> "AxiomRequest":
        """``NAME[:flavor][@scope]``, e.g. ``COMPLEMENTS:memf`` or ``EXT@sets``."""
        scope = "all"
        if "@" in text:
            text, scope = text.split("@", 1)
        flavor = default_flavor
        if ":" in text:
            text, fl = text.split(":", 1)
            flavor = RelSym.parse(fl)
        return cls(AxiomId.parse(text), flavor, scope)


@dataclass(frozen=True)
class SearchSpec:
    domain_size: int
    f_mode: str = "set"  # "set" | "element"
    require_injective: bool = False
    require_total: bool = False
    axioms: tuple = ()
    budget: int = 1_000_000
    randomized: bool = False
    seed: int = 0
    canonical: bool = False

    def validate(self):
        if self.f_mode not in ("set", "element"):
            raise SearchError(f"f_mode must be 'set' or 'element', got {self.f_mode!r}")
        if self.domain_size < 0:
            raise SearchError("domain_size must be non-negative")
        if self.budget <= 0:
            raise SearchError("budget must be positive")
        if not self.randomized and self.f_mode == "set" and self.domain_size > 4:
            raise InfeasibleSpec("exhaustive set-valued search is limited to domain_size <= 4")


def domain_ids(n: int) -> list[str]:
    if n <= 26:
        return list(string.ascii_lowercase[:n])
    return [f"e{i}" for i in range(n)]


def _injective(spec: SearchSpec) -> bool:
    # element-valued f is always injective (the structure type requires it)
    return spec.require_injective or spec.f_mode == "element"


def _f_choices(spec: SearchSpec) -> int:
    n = spec.domain_size
    return 1 << n if spec.f_mode == "set" else n


def count_structures(spec: SearchSpec) -> int:
    """Closed-form size of the exhaustive space."""
    n = spec.domain_size
    m = _f_choices(spec)
    if spec.require_total and _injective(spec):
        maps = perm(m, n)
    elif spec.require_total:
        maps = m ** n
    elif _injective(spec):
        maps = sum(comb(n, k) * perm(m, k) for k in range(n + 1))
    else:
        maps = (m + 1) ** n
    edges = 1 << (n * n) if spec.f_mode == "element" else 1
    return maps * edges


def _f_tuples(spec: SearchSpec) -> Iterator[tuple]:
    n, m = spec.domain_size, _f_choices(spec)
    options = list(range(m)) if spec.require_total else [UNDEFINED] + list(range(m))
    for tup in product(options, repeat=n):
        if _injective(spec):
            used = [v for v in tup if v != UNDEFINED]
            if len(set(used)) != len(used):
                continue
        yield tup


def _build(spec: SearchSpec, f_tuple: tuple, edge_mask: int) -> MembershipStructure:
    ids = domain_ids(spec.domain_size)
    n = len(ids)
    if spec.f_mode == "set":
        fset = {
            ids[i]: [ids[b] for b in range(n) if v >> b & 1]
            for i, v in enumerate(f_tuple) if v != UNDEFINED
        }
        return MembershipStructure(ids, fset=fset)
    f = {ids[i]: ids[v] for i, v in enumerate(f_tuple) if v != UNDEFINED}
    edges = [(ids[k // n], ids[k % n]) for k in range(n * n) if edge_mask >> k & 1]
    return MembershipStructure(ids, edges=edges, f=f)


def _relabel(spec: SearchSpec, f_tuple, edge_mask, p):
    """Apply the domain permutation ``p`` (old index -> new index)."""
    n = spec.domain_size
    new_f = [UNDEFINED] * n
    for i, v in enumerate(f_tuple):
        if v == UNDEFINED:
            image = UNDEFINED
        elif spec.f_mode == "set":
            image = sum(1 << p[b] for b in range(n) if v >> b & 1)
        else:
            image = p[v]
        new_f[p[i]] = image
    new_mask = 0
    for k in range(n * n):
        if edge_mask >> k & 1:
            new_mask |= 1 << (p[k // n] * n + p[k % n])
    return tuple(new_f), new_mask


def _is_canonical(spec, f_tuple, edge_mask) -> bool:
    key = (f_tuple, edge_mask)
    for p in permutations(range(spec.domain_size)):
        if _relabel(spec, f_tuple, edge_mask, p) < key:
            return False
    return True


def enumerate_structures(spec: SearchSpec, shard: tuple[int, int] = (0, 1)) -> Iterator[MembershipStructure]:
    """Yield structures in canonical order (f graph outermost, then edge sets).

    ``shard=(i, k)`` keeps every k-th structure starting at i, so k shards
    partition the exhaustive stream.  Randomized specs yield ``budget``
    independent samples instead.
    """
    spec.validate()
    if spec.randomized:
        yield from _sample(spec)
        return
    total = count_structures(spec)
    if total > spec.budget:
        raise InfeasibleSpec(f"exhaustive space has {total} structures; budget is {spec.budget}")
    n = spec.domain_size
    edge_range = range(1 << (n * n)) if spec.f_mode == "element" else range(1)
    i, k = shard
    index = -1
    for f_tuple in _f_tuples(spec):
        for mask in edge_range:
            index += 1
            if index % k != i:
                continue
            if spec.canonical and not _is_canonical(spec, f_tuple, mask):
                continue
            yield _build(spec, f_tuple, mask)


def _sample(spec: SearchSpec) -> Iterator[MembershipStructure]:
    rng = random.Random(spec.seed)
    n, m = spec.domain_size, _f_choices(spec)
    produced = 0
    while produced < spec.budget:
        f_tuple = []
        for _ in range(n):
            if not spec.require_total and rng.randrange(m + 1) == 0:
                f_tuple.append(UNDEFINED)
            else:
                f_tuple.append(rng.randrange(m))
        if _injective(spec):
            used = [v for v in f_tuple if v != UNDEFINED]
            if len(set(used)) != len(used):
                continue
        mask = rng.getrandbits(n * n) if spec.f_mode == "element" and n else 0
        produced += 1
        yield _build(spec, tuple(f_tuple), mask)


def satisfies(M: MembershipStructure, requests) -> bool:
    """All requested axioms hold; an axiom that cannot be read (mem' at x outside dom f) does not."""
    for req in requests:
        try:
            if req.axiom is AxiomId.EXTENSIONALITY:
                report = check_extensionality(M, req.flavor, req.scope)
            else:
                report = check_axiom(M, req.axiom, req.flavor)
        except UndefinedF:
            return False
        if not report.holds:
            return False
    return True


@dataclass
class SearchResult:
    verdict: str  # "FOUND" | "EXHAUSTED"
    structure: Optional[MembershipStructure]
    examined: int

    def serialize(self) -> str:
        header = f"# verdict: {self.verdict} examined={self.examined}\n"
        return header + (dump_structure(self.structure) if self.structure is not None else "")


def find_model(spec: SearchSpec) -> SearchResult:
    examined = 0
    for M in enumerate_structures(spec):
        examined += 1
        if satisfies(M, spec.axioms):
            return SearchResult("FOUND", M, examined)
    return SearchResult("EXHAUSTED", None, examined)


# ----------------------------------------------------------------- Cantor

@dataclass
class CantorRow:
    n: int
    maps: int
    surjections: int
    min_missing: int
    diagonal_always_missing: bool


@dataclass
class CantorReport:
    rows: list = field(default_factory=list)

    @property
    def no_surjection(self) -> bool:
        return all(r.surjections == 0 for r in self.rows)


def cantor_check(max_n: int) -> CantorReport:
    """For n = 1..max_n, scan every total f: D -> P(D) for surjectivity.

    Subsets are bitmasks; for each map the diagonal set {i : i not in f(i)}
    is also checked to be absent from the image.
    """
    if not 1 <= max_n <= 4:
        raise SearchError("cantor_check needs 1 <= max_n <= 4")
    report = CantorReport()
    for n in range(1, max_n + 1):
        subsets = 1 << n
        maps = surj = 0
        min_missing = subsets
        diag_ok = True
        for f in product(range(subsets), repeat=n):
            maps += 1
            image = set(f)
            missing = subsets - len(image)
            if missing == 0:
                surj += 1
            min_missing = min(min_missing, missing)
            diagonal = sum(1 << i for i in range(n) if not f[i] >> i & 1)
            if diagonal in image:
                diag_ok = False
        report.rows.append(CantorRow(n, maps, surj, min_missing, diag_ok))
    return report

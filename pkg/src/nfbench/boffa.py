"""Witness-construction recipes for the Fin.SF axioms, executed step by step.

Two recipe families exist, picked by ``M.star``:

* ``star == "j"``: witnesses for the recoded membership ``mem'`` built through
  the automorphism ``j`` and the code-set ``S`` (the ``mem*`` of the ambient
  Boffa structure).
* ``star == "f"``: witnesses for ``mem*`` read through ``f`` itself, built
  with the Upward/Downward closures and the two lemmas.

Complements and Pairing exist only in the first family.  Every recipe
records its intermediate objects under the letters used in the hand proofs
(``k``, ``k^c``, ``q``, ``r``, ``I``, ``X`` ...) and finally checks the
witness by brute-force evaluation of the axiom matrix, with quantifiers
relativized to the structure's universe ``U``.

"Code of a set X" always means the unique domain element whose E-extension
is X.  No such element raises :class:`MissingCode`; a code that ``f`` cannot
reach raises :class:`OutsideRange`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Iterable, Optional

from .errors import (
    AmbiguousCode,
    AutomorphismViolation,
    MissingCode,
    OutsideRange,
    RecipeError,
    RecipeUndefinedF,
    StructureError,
    UndefinedF,
)
from .formula import AxiomId, RelSym, axiom_formula, recode_translate, split_axiom
from .hfset import HFSet, hf_text, v_stage
from .structure import (
    MembershipStructure,
    downward_set,
    eval_formula,
    hf_id,
    lemma1_preimage,
    lemma2_image,
    stage_structure,
    upward_set,
)

PI_VARIANTS = ("recode-image", "image-recode")


@dataclass
class WitnessOutcome:
    target: AxiomId
    inputs: tuple
    witness: Optional[str]
    trace: list = field(default_factory=list)
    validated: bool = False
    recipe: str = "j"
    variant: Optional[str] = None


class _Run:
    """Bookkeeping for one recipe execution."""

    def __init__(self, M: MembershipStructure, target: AxiomId, inputs: tuple):
        if M.f_mode != "element":
            raise StructureError("witness recipes need an element-valued injective f")
        self.M = M
        self.target = target
        self.inputs = inputs
        self.trace: list = []

    def note(self, label, obj):
        self.trace.append((label, obj))
        return obj

    def code(self, members: Iterable[str], step: str) -> str:
        members = frozenset(members)
        found = self.M.codes_of(members)
        if not found:
            raise MissingCode(step, f"no element has extension {sorted(members)}", self.trace)
        if len(found) > 1:
            raise AmbiguousCode(step, f"elements {found} share one extension", self.trace)
        return found[0]

    def f(self, x: str, step: str) -> str:
        if x not in self.M.f:
            raise RecipeUndefinedF(step, f"f({x}) is undefined", self.trace)
        return self.M.f[x]

    def f_inv(self, x: str, step: str) -> str:
        if x not in self.M.f_inv:
            raise OutsideRange(step, f"{x} is not in range(f)", self.trace)
        return self.M.f_inv[x]

    def image(self, xs: Iterable[str], step: str) -> frozenset:
        return frozenset(self.f(x, step) for x in xs)

    def preimage_strict(self, xs: Iterable[str], step: str) -> frozenset:
        return frozenset(self.f_inv(x, step) for x in xs)

    def finish(self, witness: str, flavor: RelSym, recipe: str, variant=None) -> WitnessOutcome:
        self.note("witness", witness)
        ok = validate_witness(self.M, self.target, flavor, self.inputs, witness)
        return WitnessOutcome(self.target, self.inputs, witness, self.trace, ok, recipe, variant)


def validate_witness(M, aid: AxiomId, flavor: RelSym, inputs: tuple, witness: str) -> bool:
    """Evaluate the axiom matrix at (inputs, witness), quantifiers restricted to ``U``."""
    universals, wvar, matrix = split_axiom(axiom_formula(aid))
    guard = "U" if M.universe is not None else None
    phi = recode_translate(matrix, RelSym.MEM, flavor, guard)
    assignment = dict(zip(universals, inputs))
    assignment[wvar] = witness
    try:
        return eval_formula(M, phi, assignment)
    except UndefinedF:
        return False


# ------------------------------------------------------------ helpers

def _code_set(M) -> frozenset:
    """The code-set used for mem* inside j-recipes: S if declared, else range(f)."""
    return M.S if M.S is not None else M.range_f


def _star_ext(M, x: str) -> frozenset:
    if x in _code_set(M):
        return M.ext[M.j_inv[x]]
    return frozenset()


def _pair_parts(members: frozenset):
    items = sorted(members)
    if len(items) == 1:
        return items[0], items[0]
    if len(items) == 2:
        return items[0], items[1]
    return None


def _compose_parts(left, right) -> set[frozenset]:
    """Unordered composition of two collections of (a, b) component tuples."""
    following: dict[str, set[str]] = {}
    for y, z in right:
        following.setdefault(y, set()).add(z)
        following.setdefault(z, set()).add(y)
    out = set()
    for a, b in left:
        for x, y in ((a, b), (b, a)):
            for z in following.get(y, ()):
                out.add(frozenset((x, z)))
    return out


def _prime_members(run: _Run, x: str, step: str) -> frozenset:
    M = run.M
    fx = run.f(x, step)
    return M.ext[M.j_inv[fx]]


# ------------------------------------------------------------ recipes

def complement_witness(M: MembershipStructure, x: str) -> WitnessOutcome:
    run = _Run(M, AxiomId.COMPLEMENTS, (x,))
    fx = run.note("f(x)", run.f(x, "f(x)"))
    k = run.note("k", M.j_inv[fx])
    members = run.note("ext(k)", M.ext[k])
    kc_set = run.note("k^c", M.U - members)
    kc = run.note("code(k^c)", run.code(kc_set, "k^c"))
    jkc = run.note("j(k^c)", M.j[kc])
    w = run.f_inv(jkc, "f^-1(j(k^c))")
    return run.finish(w, RelSym.MEM_PRIME, "j")


def pair_witness(M: MembershipStructure, a: str, b: str) -> WitnessOutcome:
    run = _Run(M, AxiomId.PAIRING, (a, b))
    c = run.note("{a,b}", run.code({a, b}, "{a,b}"))
    jc = run.note("j({a,b})", M.j[c])
    w = run.f_inv(jc, "f^-1(j({a,b}))")
    return run.finish(w, RelSym.MEM_PRIME, "j")


def union_witness(M: MembershipStructure, x: str) -> WitnessOutcome:
    if M.star == "f":
        return _union_via_f(M, x)
    return _union_via_j(M, x)


def _union_via_j(M, l):
    run = _Run(M, AxiomId.SET_UNION, (l,))
    fl = run.note("f(l)", run.f(l, "f(l)"))
    xs = run.note("x", M.ext[M.j_inv[fl]] & M.U)
    fx = run.note("f``x", run.image(xs, "f``x"))
    c = run.note("code(f``x)", run.code(fx, "f``x"))
    jc = run.note("j(f``x)", M.j[c])
    target = frozenset().union(*(_star_ext(M, w) for w in _star_ext(M, jc))) & M.U
    run.note("star-union members", target)
    k = M.j[run.code(target, "k")]
    if k not in _code_set(M):
        raise MissingCode("k", f"{k} codes the union but is not in the code-set", run.trace)
    run.note("k", k)
    w = run.f_inv(k, "f^-1(k)")
    return run.finish(w, RelSym.MEM_PRIME, "j")


def _union_via_f(M, x):
    run = _Run(M, AxiomId.SET_UNION, (x,))
    if x not in M.f_inv:
        raise RecipeUndefinedF("f^-1(x)", f"{x} is not in range(f)", run.trace)
    c = run.note("f^-1(x)", M.f_inv[x])
    k = run.note("k", lemma1_preimage(M, M.ext[c] & M.U))
    members = run.note("U k", frozenset().union(*(M.ext[z] for z in k)) & M.U)
    u = run.note("code(U k)", run.code(members, "U k"))
    w = run.f(u, "f(U k)")
    return run.finish(w, RelSym.MEM_STAR, "f")


def compose_witness(M: MembershipStructure, x: str, y: str) -> WitnessOutcome:
    if M.star == "f":
        return _compose_via_f(M, x, y)
    return _compose_via_j(M, x, y)


def _compose_via_j(M, x, y):
    run = _Run(M, AxiomId.U_COMPOSITION, (x, y))
    k = run.note("k", _prime_members(run, x, "f(x)") & M.U)
    # l is read off the second input
    l = run.note("l", _prime_members(run, y, "f(y)") & M.U)
    jk = run.note("j(f``k)", M.j[run.code(run.image(k, "f``k"), "f``k")])
    jl = run.note("j(f``l)", M.j[run.code(run.image(l, "f``l"), "f``l")])

    def star_pairs(c):
        parts = []
        for p in _star_ext(M, c):
            pp = _pair_parts(_star_ext(M, p) & M.U)
            if pp is not None:
                parts.append(pp)
        return parts

    composed = _compose_parts(star_pairs(jk), star_pairs(jl))
    q_members = set()
    for pr in sorted(composed, key=sorted):
        p = M.j[run.code(pr, "q")]
        if p not in _code_set(M):
            raise MissingCode("q", f"pair {sorted(pr)} has no mem*-code", run.trace)
        q_members.add(p)
    q = M.j[run.code(q_members, "q")]
    if q not in _code_set(M):
        raise MissingCode("q", f"{q} is not in the code-set", run.trace)
    run.note("q", q)
    back = run.note("j^-1(q)", M.ext[M.j_inv[q]])
    r = run.note("r", run.preimage_strict(back, "r") & M.U)
    jr = run.note("j(r)", M.j[run.code(r, "r")])
    w = run.f_inv(jr, "f^-1(j(r))")
    return run.finish(w, RelSym.MEM_PRIME, "j")


def _compose_via_f(M, x, y):
    run = _Run(M, AxiomId.U_COMPOSITION, (x, y))
    for v, label in ((x, "f^-1(x)"), (y, "f^-1(y)")):
        if v not in M.f_inv:
            raise RecipeUndefinedF(label, f"{v} is not in range(f)", run.trace)
    A = run.note("f^-1``f^-1(x)", lemma1_preimage(M, M.ext[M.f_inv[x]] & M.U))
    B = run.note("f^-1``f^-1(y)", lemma1_preimage(M, M.ext[M.f_inv[y]] & M.U))

    def parts(codes):
        return [pp for pp in (_pair_parts(M.ext[c]) for c in codes) if pp is not None]

    composed = _compose_parts(parts(A), parts(B))
    K = run.note("K", frozenset(run.code(pr, "K") for pr in sorted(composed, key=sorted)))
    for c in K:
        run.f(c, "f``K")
    fK = run.note("f``K", lemma2_image(M, K) & M.U)
    cK = run.note("code(f``K)", run.code(fK, "f``K"))
    w = run.f(cK, "f(f``K)")
    return run.finish(w, RelSym.MEM_STAR, "f")


def pi_witness(M: MembershipStructure, variant: str = "recode-image") -> WitnessOutcome:
    if variant not in PI_VARIANTS:
        raise ValueError(f"variant must be one of {PI_VARIANTS}")
    if M.star == "f":
        return _pi_via_f(M)
    return _pi_via_j(M, variant)


def _pi_via_j(M, variant):
    run = _Run(M, AxiomId.U_INTERSECTION, ())
    U = M.U
    # abstract Pi*: mem*-pairs {f z, f u} of mem*-intersecting sets, z, u in U
    codes = [c for c in M.domain if c in _code_set(M) and M.f_inv.get(c) in U]
    pi = {
        frozenset((a, b))
        for a, b in combinations_with_replacement(codes, 2)
        if _star_ext(M, a) & _star_ext(M, b) & U
    }
    run.note("Pi*", frozenset(pi))
    moved = run.note("I pairs", frozenset(upward_set(M, pi)))
    # Movement clause {{z,u} : {f(z), f(u)} in Pi*}; keep the codes whose X-image lands in U
    def lands(c):
        if variant == "recode-image":
            return M.f_inv.get(M.j[c]) in U
        return c in M.f_inv and M.j[M.f_inv[c]] in U

    I = run.note("I", frozenset(c for pr in moved for c in M.codes_of(pr)[:1] if lands(c)))
    if variant == "recode-image":
        jI = run.note("j(I)", M.j[run.code(I, "I")])
        X = run.preimage_strict(M.ext[jI], "X")
    else:
        X = frozenset(M.j[e] for e in run.preimage_strict(I, "X"))
    X = run.note("X", X & U)
    jX = run.note("j(X)", M.j[run.code(X, "X")])
    w = run.f_inv(jX, "f^-1(j(X))")
    return run.finish(w, RelSym.MEM_PRIME, "j", variant)


def _pi_via_f(M):
    run = _Run(M, AxiomId.U_INTERSECTION, ())
    U = M.U
    codes = [c for c in M.domain if c in M.f and M.f[c] in U]
    Pi = {
        frozenset((a, b))
        for a, b in combinations_with_replacement(codes, 2)
        if M.ext[a] & M.ext[b] & U
    }
    run.note("Pi", frozenset(Pi))
    K_pairs = run.note("K", frozenset(downward_set(M, Pi)))
    # only pairs that exist as elements can be members of anything
    K = frozenset(c for pr in K_pairs for c in M.codes_of(pr)[:1])
    fK = run.note("f``K", lemma2_image(M, K) & U)
    cK = run.note("code(f``K)", run.code(fK, "f``K"))
    w = run.f(cK, "f(f``K)")
    return run.finish(w, RelSym.MEM_STAR, "f")


def run_witness(M, aid: AxiomId, inputs: tuple = (), variant: str = "recode-image") -> WitnessOutcome:
    if aid is AxiomId.COMPLEMENTS:
        return complement_witness(M, *inputs)
    if aid is AxiomId.PAIRING:
        return pair_witness(M, *inputs)
    if aid is AxiomId.SET_UNION:
        return union_witness(M, *inputs)
    if aid is AxiomId.U_COMPOSITION:
        return compose_witness(M, *inputs)
    if aid is AxiomId.U_INTERSECTION:
        return pi_witness(M, variant)
    raise ValueError(f"no witness recipe for {aid.value}")


ARITY = {
    AxiomId.COMPLEMENTS: 1,
    AxiomId.PAIRING: 2,
    AxiomId.SET_UNION: 1,
    AxiomId.U_COMPOSITION: 2,
    AxiomId.U_INTERSECTION: 0,
}


# ----------------------------------------------------------- trace text

def render(M, obj) -> str:
    """Brace notation for ids (HF mode), id sets, and sets of pairs."""
    if isinstance(obj, str):
        if M.hf is not None and obj in M.hf:
            return hf_text(M.hf[obj])
        return obj
    if isinstance(obj, (set, frozenset)):
        items = sorted(obj, key=lambda o: (isinstance(o, frozenset), sorted(o) if isinstance(o, frozenset) else M._pos.get(o, 0)))
        if M.hf is not None and all(isinstance(o, str) and o in M.hf for o in items):
            return hf_text(HFSet(M.hf[o] for o in items))
        return "{" + ", ".join(render(M, o) for o in items) + "}"
    return str(obj)


def format_trace(M, trace) -> list[str]:
    return [f"{label}\t{render(M, obj)}" for label, obj in trace]


# ------------------------------------------------------ transposition

@dataclass
class TranspositionReport:
    n: int
    automorphism_witness: Optional[tuple[HFSet, HFSet]]
    j_rejected: bool
    pair_sets_checked: int
    downward_mismatches: int
    upward_mismatches: int

    @property
    def agrees(self) -> bool:
        return self.downward_mismatches == 0 and self.upward_mismatches == 0


def transposition_example(n: int = 3) -> TranspositionReport:
    """Swap the codes of {} and {{}} on V_n and test the map against the closures.

    The swap g is an injective total map V_n -> V_n that is not an
    E-automorphism; with it as ``f``, Upward and Downward are checked against
    the split "pairs avoiding {0, 1} move as under the identity, the rest move
    under g", and against a brute-force scan.
    """
    if not 2 <= n <= 4:
        raise ValueError("transposition_example needs 2 <= n <= 4")
    empty, one = hf_id(v_stage(0)), hf_id(v_stage(1))
    stage_ids = [hf_id(s) for s in v_stage(n)]
    g = {x: x for x in stage_ids}
    g[empty], g[one] = one, empty
    M = stage_structure(n, f=g, universe_stage=n)

    witness = None
    for x in M.domain:
        for y in M.domain:
            if M.E(x, y) != M.E(g[x], g[y]):
                witness = (M.hf[x], M.hf[y])
                break
        if witness:
            break

    try:
        MembershipStructure(M.domain, hf=M.hf, j=g)
        j_rejected = False
    except AutomorphismViolation:
        j_rejected = True

    moved = {empty, one}
    g_inv = {v: k for k, v in g.items()}
    base = [hf_id(s) for s in v_stage(min(n, 3))]
    all_pairs = sorted({frozenset((a, b)) for a in base for b in base}, key=sorted)
    down_bad = up_bad = checked = 0
    for mask in range(1 << len(all_pairs)):
        x = {all_pairs[i] for i in range(len(all_pairs)) if mask >> i & 1}
        checked += 1
        k = {p for p in x if not p & moved}
        rest = x - k
        split_down = {p for p in k} | {frozenset(g[c] for c in p) for p in rest}
        split_up = {p for p in x if not p & moved} | {frozenset(g_inv[c] for c in p) for p in x if p & moved}
        brute_down = {
            frozenset((g[z], g[u])) for z in M.domain for u in M.domain if frozenset((z, u)) in x
        }
        brute_up = {
            frozenset((z, u)) for z in M.domain for u in M.domain if frozenset((g[z], g[u])) in x
        }
        down = downward_set(M, x)
        up = upward_set(M, x)
        if not (down == split_down == brute_down):
            down_bad += 1
        if not (up == split_up == brute_up):
            up_bad += 1
    return TranspositionReport(n, witness, j_rejected, checked, down_bad, up_bad)

"""Finite membership structures and brute-force evaluation.

A structure has a domain of string ids and a base relation ``E`` (``E(y, x)``
reads "y is a member of x"), given either by explicit edges or by binding ids
to hereditarily finite sets.  On top of ``E`` it carries an optional
automorphism ``j``, a partial map ``f`` (element-valued or set-valued), an
optional code-set ``S`` and an optional universe ``U``, and induces the
recoded memberships:

* ``mem*``  y in j^-1(x) and x in S     (or y in f^-1(x), x in range f, when ``star == "f"``)
* ``mem'``  y in j^-1(f(x))
* ``memf``  y in f(x)                    (set-valued f)
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, Optional, Union

from .errors import (
    AutomorphismViolation,
    DanglingIdError,
    InjectivityViolation,
    StructureError,
    StructureParseError,
    UnboundVariableError,
    UndefinedF,
    UnsupportedRelation,
)
from .formula import (
    And,
    Atom,
    AxiomId,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Pred,
    RelSym,
    atoms,
    axiom_formula,
    free_vars,
    recode_translate,
    split_axiom,
)
from .hfset import HFSet, hf_text, parse_hf, v_stage

Pair = frozenset  # an unordered pair of ids; a singleton stands for {a, a}


class MembershipStructure:
    def __init__(
        self,
        domain: Iterable[str] = (),
        edges: Optional[Iterable[tuple[str, str]]] = None,
        hf: Optional[Mapping[str, HFSet]] = None,
        j: Optional[Mapping[str, str]] = None,
        f: Optional[Mapping[str, str]] = None,
        fset: Optional[Mapping[str, Iterable[str]]] = None,
        S: Optional[Iterable[str]] = None,
        universe: Optional[Iterable[str]] = None,
        star: str = "j",
    ):
        self.domain = tuple(domain)
        if len(set(self.domain)) != len(self.domain):
            raise StructureError("duplicate ids in domain")
        ids = set(self.domain)
        self.ids = frozenset(ids)
        self._pos = {x: i for i, x in enumerate(self.domain)}

        def known(*names):
            for n in names:
                if n not in ids:
                    raise DanglingIdError(f"id {n!r} is not in the domain")

        if edges is not None and hf is not None:
            raise StructureError("explicit edges and hf bindings are exclusive")
        if f is not None and fset is not None:
            raise StructureError("element-valued f and set-valued f are exclusive")
        if star not in ("j", "f"):
            raise StructureError(f"star must be 'j' or 'f', got {star!r}")

        self.hf = dict(hf) if hf is not None else None
        if self.hf is not None:
            known(*self.hf)
            by_code: dict[int, list[str]] = {}
            for i, s in self.hf.items():
                by_code.setdefault(s.code, []).append(i)
            pairs = set()
            for x, s in self.hf.items():
                for e in s:
                    for y in by_code.get(e.code, ()):
                        pairs.add((y, x))
            self.edges = frozenset(pairs)
        else:
            pairs = set()
            for y, x in edges or ():
                known(y, x)
                pairs.add((y, x))
            self.edges = frozenset(pairs)

        ext: dict[str, set[str]] = {x: set() for x in self.domain}
        for y, x in self.edges:
            ext[x].add(y)
        self.ext = {x: frozenset(v) for x, v in ext.items()}

        self.j_declared = j is not None and any(k != v for k, v in j.items())
        self.j = {x: x for x in self.domain}
        if j is not None:
            known(*j, *j.values())
            self.j.update(j)
            if len(set(self.j.values())) != len(self.domain):
                raise StructureError("j is not a permutation of the domain")
        self.j_inv = {v: k for k, v in self.j.items()}
        for y, x in sorted(self.edges, key=self._order_key):
            if (self.j[y], self.j[x]) not in self.edges:
                raise AutomorphismViolation(y, x)

        self.f_mode = None
        self.f: dict = {}
        self.f_inv: dict = {}
        if f is not None:
            self.f_mode = "element"
            seen: dict[str, str] = {}
            for x in self.domain:
                if x not in f:
                    continue
                y = f[x]
                known(x, y)
                if y in seen:
                    raise InjectivityViolation(seen[y], x)
                seen[y] = x
                self.f[x] = y
            known(*f)
            self.f_inv = seen
        elif fset is not None:
            self.f_mode = "set"
            known(*fset)
            for x in self.domain:
                if x in fset:
                    vals = frozenset(fset[x])
                    known(*vals)
                    self.f[x] = vals

        self.S = frozenset(S) if S is not None else None
        if self.S is not None:
            known(*self.S)
        self.universe = frozenset(universe) if universe is not None else None
        if self.universe is not None:
            known(*self.universe)
        self.star = star
        if star == "f" and self.f_mode != "element":
            raise StructureError("star mode 'f' needs an element-valued f")

        self._codes = None
        self._tables: dict = {}

    # ----------------------------------------------------------- basics

    def _order_key(self, pair):
        return tuple(self._pos[p] for p in pair)

    @property
    def mode(self) -> str:
        return "hf" if self.hf is not None else "edges"

    @property
    def dom_f(self) -> frozenset:
        return frozenset(self.f)

    @property
    def range_f(self) -> frozenset:
        if self.f_mode != "element":
            raise StructureError("range(f) is only defined for element-valued f")
        return frozenset(self.f_inv)

    @property
    def f_total(self) -> bool:
        return len(self.f) == len(self.domain)

    @property
    def f_injective(self) -> bool:
        return len(set(self.f.values())) == len(self.f)

    @property
    def U(self) -> frozenset:
        return self.universe if self.universe is not None else self.ids

    def E(self, y: str, x: str) -> bool:
        return y in self.ext[x]

    def codes_of(self, members: frozenset) -> list[str]:
        """All ids whose E-extension is exactly ``members``."""
        if self._codes is None:
            table: dict[frozenset, list[str]] = {}
            for x in self.domain:
                table.setdefault(self.ext[x], []).append(x)
            self._codes = table
        return self._codes.get(frozenset(members), [])

    def __repr__(self):
        return f"MembershipStructure(|D|={len(self.domain)}, mode={self.mode}, f={self.f_mode})"

    # --------------------------------------------------- recoded membership

    def _star_code(self, x: str) -> Optional[str]:
        """The element whose E-extension is the mem*-extension of ``x`` (None: urelement)."""
        if self.star == "f":
            if x not in self.f_inv or (self.S is not None and x not in self.S):
                return None
            return self.f_inv[x]
        if self.S is None:
            raise UnsupportedRelation("mem* needs a designated code-set S")
        return self.j_inv[x] if x in self.S else None

    def _prime_code(self, x: str) -> str:
        if self.f_mode != "element":
            raise UnsupportedRelation("mem' needs an element-valued f")
        if x not in self.f:
            raise UndefinedF(f"f({x}) is undefined, so mem' has no reading at {x}")
        return self.j_inv[self.f[x]]

    def extension(self, flavor: RelSym, x: str) -> frozenset:
        """``{y : y R x}`` for the given membership flavour."""
        if flavor is RelSym.MEM:
            return self.ext[x]
        if flavor is RelSym.MEM_STAR:
            c = self._star_code(x)
            return frozenset() if c is None else self.ext[c]
        if flavor is RelSym.MEM_PRIME:
            return self.ext[self._prime_code(x)]
        if flavor is RelSym.MEM_F:
            if self.f_mode != "set":
                raise UnsupportedRelation("memf needs a set-valued f")
            return self.f.get(x, frozenset())
        raise UnsupportedRelation(f"{flavor.value} is not a membership relation")

    def supports(self, flavor: RelSym) -> bool:
        if flavor in (RelSym.EQ, RelSym.MEM):
            return True
        if flavor is RelSym.MEM_STAR:
            return self.S is not None or self.star == "f"
        if flavor is RelSym.MEM_PRIME:
            return self.f_mode == "element"
        return self.f_mode == "set"

    def sets(self, flavor: RelSym) -> frozenset:
        """The ids that count as sets (not urelements) under ``flavor``."""
        if flavor is RelSym.MEM_F or flavor is RelSym.MEM_PRIME:
            return self.dom_f
        if flavor is RelSym.MEM_STAR:
            if self.star == "f":
                r = self.range_f
                return r if self.S is None else r & self.S
            return self.S
        return self.ids

    def restrict(self, keep: Iterable[str]) -> "MembershipStructure":
        """Substructure on ``keep`` with every membership flavour read off this one."""
        keep_set = set(keep)
        dom = [x for x in self.domain if x in keep_set]
        tables = {}
        for flavor in (RelSym.MEM, RelSym.MEM_STAR, RelSym.MEM_PRIME, RelSym.MEM_F):
            if self.supports(flavor):
                tables[flavor] = {x: self._table_entry(flavor, x) & keep_set for x in dom
                                  if self._table_entry(flavor, x) is not None}
        return _FrozenRelations(dom, tables, self)

    def _table_entry(self, flavor, x):
        try:
            return self.extension(flavor, x)
        except UndefinedF:
            return None


def mem_f(M: MembershipStructure, y: str, x: str) -> bool:
    return y in M.extension(RelSym.MEM_F, x)


def mem_star(M: MembershipStructure, y: str, x: str) -> bool:
    return y in M.extension(RelSym.MEM_STAR, x)


def mem_prime(M: MembershipStructure, y: str, x: str) -> bool:
    return y in M.extension(RelSym.MEM_PRIME, x)


class _FrozenRelations:
    """A domain with precomputed flavour tables; what :meth:`restrict` returns."""

    def __init__(self, domain, tables, parent):
        self.domain = tuple(domain)
        self.ids = frozenset(domain)
        self._tables = tables
        self.S = parent.S
        self.universe = None
        self.U = self.ids
        self.f_mode = parent.f_mode

    def supports(self, flavor):
        return flavor is RelSym.EQ or flavor in self._tables

    def extension(self, flavor, x):
        if flavor not in self._tables:
            raise UnsupportedRelation(f"{flavor.value} is not available")
        try:
            return self._tables[flavor][x]
        except KeyError:
            raise UndefinedF(f"{flavor.value} has no reading at {x}") from None


# ------------------------------------------------------------------ eval

def _builtin_preds(M) -> dict:
    preds = {"D": M.ids, "U": M.U}
    if M.S is not None:
        preds["S"] = M.S
    return preds


def eval_formula(
    M,
    phi: Formula,
    assignment: Optional[Mapping[str, str]] = None,
    preds: Optional[Mapping[str, Iterable[str]]] = None,
    interpret: Optional[Mapping[RelSym, RelSym]] = None,
) -> bool:
    """Tarskian evaluation; quantifiers range over the whole domain.

    ``interpret`` re-reads relation symbols (``{MEM: MEM_F}`` evaluates a
    pure-mem formula under the recoded membership).  Guard atoms ``P(v)`` look
    up ``preds``; ``D``, ``U`` and ``S`` are predefined.
    """
    env = dict(assignment or {})
    missing = free_vars(phi) - set(env)
    if missing:
            raise UnboundVariableError(missing)
    for v, x in env.items():
        if x not in M.ids:
            raise DanglingIdError(f"assignment {v}={x}: id not in domain")
    pred_table = _builtin_preds(M)
    pred_table.update({k: frozenset(v) for k, v in (preds or {}).items()})
    interpret = dict(interpret or {})
    domain = M.domain
    cache: dict = {}

    def ext(flavor, x):
        key = (flavor, x)
        if key not in cache:
            cache[key] = M.extension(flavor, x)
        return cache[key]

    def go(psi) -> bool:
        if isinstance(psi, Atom):
            rel = interpret.get(psi.rel, psi.rel)
            y, x = env[psi.left], env[psi.right]
            if rel is RelSym.EQ:
                return y == x
            return y in ext(rel, x)
        if isinstance(psi, Pred):
            if psi.name not in pred_table:
                raise UnsupportedRelation(f"no interpretation for predicate {psi.name!r}")
            return env[psi.var] in pred_table[psi.name]
        if isinstance(psi, Not):
            return not go(psi.body)
        if isinstance(psi, And):
            return go(psi.left) and go(psi.right)
        if isinstance(psi, Or):
            return go(psi.left) or go(psi.right)
        if isinstance(psi, Implies):
            return (not go(psi.left)) or go(psi.right)
        if isinstance(psi, Iff):
            return go(psi.left) == go(psi.right)
        if isinstance(psi, (Forall, Exists)):
            want = isinstance(psi, Exists)
            saved = env.get(psi.var)
            result = not want
            for e in domain:
                env[psi.var] = e
                if go(psi.body) == want:
                    result = want
                    break
            if saved is None:
                env.pop(psi.var, None)
            else:
                env[psi.var] = saved
            return result
        raise TypeError(f"not a formula: {psi!r}")

    for a in atoms(phi):
        rel = interpret.get(a.rel, a.rel)
        if not M.supports(rel):
            raise UnsupportedRelation(f"structure does not support {rel.value}")
    return go(phi)


# --------------------------------------------------------------- reports

@dataclass
class AxiomReport:
    axiom: AxiomId
    flavor: RelSym
    verdict: str  # "holds" | "fails"
    witnesses: dict = field(default_factory=dict)
    counterexample: Optional[tuple] = None
    scope: str = "all"
    examined: int = 0

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"


def check_axiom(M, aid: AxiomId, flavor: RelSym = RelSym.MEM) -> AxiomReport:
    """Brute-force one Fin.SF axiom under ``flavor``.

    Universal tuples are visited in domain order; the first existential
    witness is recorded for each, and the first tuple without one is the
    (lexicographically least) counterexample.
    """
    if aid is AxiomId.EXTENSIONALITY:
        return check_extensionality(M, flavor, "all")
    phi = recode_translate(axiom_formula(aid), RelSym.MEM, flavor)
    universals, wvar, matrix = split_axiom(phi)
    report = AxiomReport(aid, flavor, "holds")
    for tup in product(M.domain, repeat=len(universals)):
        report.examined += 1
        assignment = dict(zip(universals, tup))
        found = None
        for w in M.domain:
            assignment[wvar] = w
            if eval_formula(M, matrix, assignment):
                found = w
                break
        if found is None:
            report.verdict = "fails"
            report.counterexample = tup
            report.witnesses = {}
            return report
        report.witnesses[tup] = found
    return report


def check_extensionality(M, flavor: RelSym = RelSym.MEM, scope: str = "all") -> AxiomReport:
    """``forall x, y ((forall z: z R x <-> z R y) -> x = y)``.

    ``scope="sets"`` restricts x and y to the ids that are sets under the
    flavour (``dom f`` for memf and mem', the code-set for mem*).
    """
    if scope not in ("all", "sets"):
        raise ValueError("scope must be 'all' or 'sets'")
    body = recode_translate(axiom_formula(AxiomId.EXTENSIONALITY), RelSym.MEM, flavor)
    matrix = body.body.body  # strip forall x. forall y.
    candidates = M.ids if scope == "all" else M.sets(flavor)
    report = AxiomReport(AxiomId.EXTENSIONALITY, flavor, "holds", scope=scope)
    xs = [x for x in M.domain if x in candidates]
    for x in xs:
        for y in xs:
            report.examined += 1
            if not eval_formula(M, matrix, {"x": x, "y": y}):
                report.verdict = "fails"
                report.counterexample = (x, y)
                return report
    return report


def replay_report(M, report: AxiomReport) -> bool:
    """Re-evaluate the axiom matrix at every recorded witness/counterexample."""
    phi = recode_translate(axiom_formula(report.axiom), RelSym.MEM, report.flavor)
    if report.axiom is AxiomId.EXTENSIONALITY:
        matrix = phi.body.body
        if report.holds:
            return check_extensionality(M, report.flavor, report.scope).holds
        x, y = report.counterexample
        return not eval_formula(M, matrix, {"x": x, "y": y})
    universals, wvar, matrix = split_axiom(phi)
    if report.holds:
        if len(report.witnesses) != len(M.domain) ** len(universals):
            return False
        return all(
            eval_formula(M, matrix, {**dict(zip(universals, tup)), wvar: w})
            for tup, w in report.witnesses.items()
        )
    tup = report.counterexample
    return not any(
        eval_formula(M, matrix, {**dict(zip(universals, tup)), wvar: w}) for w in M.domain
    )


# ----------------------------------------------- Upward / Downward, Lemmas

def _require_element_f(M):
    if M.f_mode != "element":
        raise StructureError("operation needs an element-valued injective f")


def upward_set(M: MembershipStructure, x: Iterable[Pair]) -> set[Pair]:
    """``{{z,u} : {f(z), f(u)} in x}``, with z, u ranging over dom(f)."""
    _require_element_f(M)
    out = set()
    for p in x:
        if all(c in M.f_inv for c in p):
            out.add(frozenset(M.f_inv[c] for c in p))
    return out


def downward_set(M: MembershipStructure, x: Iterable[Pair]) -> set[Pair]:
    """``{{f(z), f(u)} : {z,u} in x}``; pairs leaving dom(f) are skipped."""
    _require_element_f(M)
    out = set()
    for p in x:
        if all(c in M.f for c in p):
            out.add(frozenset(M.f[c] for c in p))
    return out


def lemma1_preimage(M: MembershipStructure, x: Iterable[str]) -> frozenset:
    """``{z : f(z) in x}`` built from Upward applied to the singletons of x, then a union."""
    singletons = {frozenset((e,)) for e in x}
    lifted = upward_set(M, singletons)
    return frozenset().union(*lifted)


def lemma2_image(M: MembershipStructure, x: Iterable[str]) -> frozenset:
    """``f``x`` built from Downward applied to the singletons of x, then a union."""
    singletons = {frozenset((e,)) for e in x}
    pushed = downward_set(M, singletons)
    return frozenset().union(*pushed)


# ----------------------------------------------------------- constructors

def hf_id(s: HFSet) -> str:
    return str(s.code)


def stage_structure(
    n: int,
    f: Union[str, Mapping[str, str], None] = "identity",
    universe_stage: Optional[int] = None,
    S: Union[str, Iterable[str], None] = "all",
    star: str = "j",
) -> MembershipStructure:
    """HF-mode structure on V_n with ids named by Ackermann code.

    ``universe_stage`` (default n-1) designates V_k as the universe of
    discourse; codes for its subsets then all live in V_n.
    """
    stage = v_stage(n)
    ids = [hf_id(s) for s in stage]
    hf = {hf_id(s): s for s in stage}
    if f == "identity":
        f = {i: i for i in ids}
    k = n - 1 if universe_stage is None else universe_stage
    universe = [hf_id(s) for s in v_stage(max(k, 0))]
    if S == "all":
        S = ids
    return MembershipStructure(ids, hf=hf, f=f, S=S, universe=universe, star=star)


# ------------------------------------------------------------ file format

_LINE_RE = re.compile(r"^\s*([A-Za-z]+)\s*:\s*(.*?)\s*$")


def _parse_idset(text: str, line: int) -> list[str]:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise StructureParseError(f"expected '{{id, ...}}', got {text!r}", line)
    inner = text[1:-1].strip()
    if not inner:
        return []
    return [t.strip() for t in inner.split(",") if t.strip()] if "," in inner else inner.split()


def _parse_cycles(text: str, line: int) -> dict[str, str]:
    perm: dict[str, str] = {}
    cycles = re.findall(r"\(([^()]*)\)", text)
    if re.sub(r"\([^()]*\)", "", text).strip():
        raise StructureParseError(f"bad cycle notation {text!r}", line)
    for cyc in cycles:
        members = cyc.replace(",", " ").split()
        for a, b in zip(members, members[1:] + members[:1]):
            if a in perm:
                raise StructureParseError(f"id {a!r} appears in two cycles", line)
            perm[a] = b
    return perm


def load_structure(text: str) -> MembershipStructure:
    """Parse the line-based structure format and validate the result."""
    domain: list[str] = []
    edges: list[tuple[str, str]] = []
    hf: dict[str, HFSet] = {}
    j: dict[str, str] = {}
    f: dict[str, str] = {}
    fset: dict[str, list[str]] = {}
    S = universe = None
    star = "j"
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _LINE_RE.match(line)
        if m is None:
            raise StructureParseError(f"expected 'key: value', got {raw.strip()!r}", lineno)
        key, rest = m.group(1), m.group(2)
        try:
            if key == "domain":
                domain.extend(rest.split())
            elif key == "edge":
                parts = rest.split()
                if len(parts) != 2:
                    raise StructureParseError("edge needs exactly two ids", lineno)
                edges.append((parts[0], parts[1]))
            elif key == "hf":
                name, _, notation = rest.partition("=")
                if not notation:
                    raise StructureParseError("hf line needs 'id = {...}'", lineno)
                hf[name.strip()] = parse_hf(notation)
            elif key == "j":
                j.update(_parse_cycles(rest, lineno))
            elif key in ("f", "fset"):
                src, arrow, dst = rest.partition("->")
                if not arrow:
                    raise StructureParseError(f"{key} line needs 'id -> value'", lineno)
                src = src.strip()
                if src in f or src in fset:
                    raise StructureParseError(f"f({src}) defined twice", lineno)
                if key == "f":
                    f[src] = dst.strip()
                else:
                    fset[src] = _parse_idset(dst, lineno)
            elif key == "S":
                S = _parse_idset(rest, lineno)
            elif key == "U":
                universe = _parse_idset(rest, lineno)
            elif key == "star":
                star = rest.strip()
            else:
                raise StructureParseError(f"unknown key {key!r}", lineno)
        except StructureParseError:
            raise
        except Exception as exc:  # HF notation errors and the like
            raise StructureParseError(str(exc), lineno) from exc
    if f and fset:
        raise StructureParseError("f and fset lines are exclusive within one file")
    if edges and hf:
        raise StructureParseError("edge and hf lines are exclusive within one file")
    return MembershipStructure(
        domain,
        edges=edges if not hf else None,
        hf=hf or None,
        j=j or None,
        f=f or None,
        fset=fset or None,
        S=S,
        universe=universe,
        star=star,
    )


def dump_structure(M: MembershipStructure) -> str:
    lines = ["domain: " + " ".join(M.domain)]
    if M.hf is not None:
        for x in M.domain:
            if x in M.hf:
                lines.append(f"hf: {x} = {hf_text(M.hf[x])}")
    else:
        for y, x in sorted(M.edges, key=M._order_key):
            lines.append(f"edge: {y} {x}")
    if M.j_declared:
        seen, cycles = set(), []
        for x in M.domain:
            if x in seen or M.j[x] == x:
                continue
            cyc = [x]
            seen.add(x)
            y = M.j[x]
            while y != x:
                cyc.append(y)
                seen.add(y)
                y = M.j[y]
            cycles.append("(" + " ".join(cyc) + ")")
        lines.append("j: " + "".join(cycles))
    for x in M.domain:
        if x not in M.f:
            continue
        if M.f_mode == "element":
            lines.append(f"f: {x} -> {M.f[x]}")
        else:
            members = [y for y in M.domain if y in M.f[x]]
            lines.append(f"fset: {x} -> {{{', '.join(members)}}}")
    for key, ids in (("S", M.S), ("U", M.universe)):
        if ids is not None:
            lines.append(f"{key}: {{{', '.join(y for y in M.domain if y in ids)}}}")
    if M.star != "j":
        lines.append(f"star: {M.star}")
    return "\n".join(lines) + "\n"

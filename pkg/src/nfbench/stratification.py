"""Stratification as a system of difference constraints.

Every membership atom ``u R v`` (any flavour) demands ``t(v) = t(u) + 1``;
every equality ``u = v`` demands ``t(u) = t(v)``.  Guard atoms ``D(v)`` impose
nothing.  The constraints form a weighted graph; a spanning-tree traversal
assigns levels and the first inconsistent non-tree edge closes a cycle with a
nonzero weight sum, which is returned as the failure certificate.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Union

from .errors import MissingVariableError
from .formula import Atom, Formula, all_vars, atoms, print_formula


@dataclass(frozen=True)
class Typing:
    levels: dict[str, int] = field(default_factory=dict)

    def __getitem__(self, var: str) -> int:
        return self.levels[var]

    def shifted(self, c: int) -> "Typing":
        return Typing({v: t + c for v, t in self.levels.items()})


@dataclass(frozen=True)
class Step:
    atom: Atom
    src: str
    dst: str
    delta: int  # t(dst) = t(src) + delta


@dataclass(frozen=True)
class StratFailure:
    cycle: tuple[Atom, ...]
    steps: tuple[Step, ...]

    @property
    def offset(self) -> int:
        return sum(s.delta for s in self.steps)

    def is_valid(self) -> bool:
        """Replay the steps: they must chain into a closed walk with nonzero offset."""
        if not self.steps:
            return False
        for a, b in zip(self.steps, self.steps[1:] + self.steps[:1]):
            if a.dst != b.src:
                return False
        for s in self.steps:
            if _delta(s.atom, s.src, s.dst) != s.delta:
                return False
        return self.offset != 0

    def describe(self) -> str:
        chain = " ; ".join(print_formula(a) for a in self.cycle)
        start = self.steps[0].src
        return f"{chain}  forces t({start}) = t({start}) {'+' if self.offset > 0 else '-'} {abs(self.offset)}"


def _delta(atom: Atom, src: str, dst: str):
    """Level difference t(dst) - t(src) imposed by ``atom``, or None if it does not link them."""
    if atom.rel.is_membership:
        if (atom.left, atom.right) == (src, dst):
            return 1
        if (atom.right, atom.left) == (src, dst):
            return -1
        return None
    if {atom.left, atom.right} == {src, dst}:
        return 0
    return None


def constraint_graph(phi: Formula) -> dict[str, list[tuple[str, int, Atom]]]:
    graph: dict[str, list[tuple[str, int, Atom]]] = {v: [] for v in sorted(all_vars(phi))}
    for a in atoms(phi):
        w = 1 if a.rel.is_membership else 0
        graph[a.left].append((a.right, w, a))
        if a.left != a.right or w == 0:
            graph[a.right].append((a.left, -w, a))
    return graph


def stratify(phi: Formula) -> Union[Typing, StratFailure]:
    graph = constraint_graph(phi)
    level: dict[str, int] = {}
    parent: dict[str, tuple[str, int, Atom]] = {}

    for root in graph:
        if root in level:
            continue
        component = [root]
        level[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v, w, atom in graph[u]:
                if v not in level:
                    level[v] = level[u] + w
                    parent[v] = (u, w, atom)
                    component.append(v)
                    queue.append(v)
                elif level[v] != level[u] + w:
                    return _failure(parent, u, v, w, atom)
        low = min(level[v] for v in component)
        for v in component:
            level[v] -= low
    return Typing(level)


def _failure(parent, u, v, w, atom) -> StratFailure:
    def ancestors(x):
        chain = [x]
        while x in parent:
            x = parent[x][0]
            chain.append(x)
        return chain

    up_u, up_v = ancestors(u), ancestors(v)
    on_v = set(up_v)
    lca = next(x for x in up_u if x in on_v)

    # tree path lca -> u, then the offending edge u -> v, then v -> lca
    down = []
    x = u
    while x != lca:
        p, pw, patom = parent[x]
        down.append(Step(patom, p, x, pw))
        x = p
    down.reverse()
    back = []
    x = v
    while x != lca:
        p, pw, patom = parent[x]
        back.append(Step(patom, x, p, -pw))
        x = p
    steps = tuple(down + [Step(atom, u, v, w)] + back)
    return StratFailure(tuple(s.atom for s in steps), steps)


def is_stratified(phi: Formula) -> bool:
    return isinstance(stratify(phi), Typing)


def check_typing(phi: Formula, t: Union[Typing, dict]) -> bool:
    levels = t.levels if isinstance(t, Typing) else t
    missing = all_vars(phi) - set(levels)
    if missing:
        raise MissingVariableError(f"typing assigns no level to: {', '.join(sorted(missing))}")
    for a in atoms(phi):
        want = levels[a.left] + (1 if a.rel.is_membership else 0)
        if levels[a.right] != want:
            return False
    return True

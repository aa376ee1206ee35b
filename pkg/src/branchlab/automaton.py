"""Section closures, the word problem, and canonical minimization.

The section closure of an element g is the set of elements reachable from g
by taking sections at single letters. For words over the built-in recursions
this set is finite (sections never lengthen a freely reduced word), so
triviality, equality and minimization are decided by breadth-first search
with memoization on element keys. Every search takes a state budget;
exceeding it raises BudgetExceededError rather than returning an answer.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .perms import Permutation
from .tree import (
    DEFAULT_BUDGET,
    Automorphism,
    BudgetExceededError,
    GroupDef,
    Node,
    Portrait,
    Word,
)


@dataclass
class Closure:
    """Finite section closure: states, root permutations, transition table."""

    states: list[Automorphism]
    index: dict
    perms: list[Permutation]
    delta: list[tuple[int, ...]]

    @property
    def size(self) -> int:
        return len(self.states)


def section_closure(g: Automorphism, budget: int | None = None) -> Closure:
    budget = DEFAULT_BUDGET if budget is None else budget
    d = g.d
    states = [g]
    index = {g.key(): 0}
    perms: list[Permutation] = []
    delta: list[tuple[int, ...]] = []
    queue = deque([0])
    while queue:
        i = queue.popleft()
        s = states[i]
        perms.append(s.root_perm())
        row = []
        for x in range(d):
            t = s.section_at(x)
            k = t.key()
            j = index.get(k)
            if j is None:
                j = len(states)
                if j >= budget:
                    raise BudgetExceededError(
                        f"section closure exceeded budget of {budget} states", visited=j
                    )
                index[k] = j
                states.append(t)
                queue.append(j)
            row.append(j)
        delta.append(tuple(row))
    return Closure(states, index, perms, delta)


def is_trivial(g: Automorphism, budget: int | None = None) -> bool:
    """Decide whether g acts trivially on the whole tree.

    Breadth-first over the section closure; the first nontrivial root
    permutation refutes. States already enqueued are not revisited, which
    treats pending states as not-yet-falsifying; triviality holds when the
    finite closure is exhausted without refutation.
    """
    if isinstance(g, Portrait):
        return g.is_trivial()
    budget = DEFAULT_BUDGET if budget is None else budget
    d = g.d
    seen = {g.key()}
    queue = deque([g])
    while queue:
        s = queue.popleft()
        if not s.root_perm().is_identity():
            return False
        for x in range(d):
            t = s.section_at(x)
            k = t.key()
            if k not in seen:
                if len(seen) >= budget:
                    raise BudgetExceededError(
                        f"triviality closure exceeded budget of {budget} states",
                        visited=len(seen),
                    )
                seen.add(k)
                queue.append(t)
    return True


def equal(g: Automorphism, h: Automorphism, budget: int | None = None) -> bool:
    """Decide extensional equality of two automorphisms of the same tree.

    Runs a paired closure, comparing root permutations level by level. Works
    across forms and across groups, so no common GroupDef is needed.
    """
    if g.d != h.d:
        return False
    budget = DEFAULT_BUDGET if budget is None else budget
    d = g.d
    start = (g.key(), h.key())
    seen = {start}
    queue = deque([(g, h)])
    while queue:
        a, b = queue.popleft()
        if a.root_perm() != b.root_perm():
            return False
        for x in range(d):
            ta, tb = a.section_at(x), b.section_at(x)
            k = (ta.key(), tb.key())
            if k[0] == k[1]:
                continue
            if k not in seen:
                if len(seen) >= budget:
                    raise BudgetExceededError(
                        f"equality closure exceeded budget of {budget} states",
                        visited=len(seen),
                    )
                seen.add(k)
                queue.append((ta, tb))
    return True


@dataclass
class Machine:
    """Canonical minimized section automaton of one element.

    States are numbered in breadth-first order from the initial state with
    letters taken in increasing order, so equal elements always produce
    byte-identical serializations. State 0 is the element itself.
    """

    d: int
    perms: list[Permutation]
    delta: list[tuple[int, ...]]
    initial: int = 0
    identity_state: int | None = field(default=None)

    def __post_init__(self):
        ids = [
            i
            for i in range(len(self.perms))
            if self.perms[i].is_identity() and all(j == i for j in self.delta[i])
        ]
        if len(ids) > 1:
            raise AssertionError("minimized machine with two identity states")
        self.identity_state = ids[0] if ids else None

    @property
    def size(self) -> int:
        return len(self.perms)

    def canonical_text(self) -> str:
        lines = []
        for i in range(self.size):
            images = " ".join(str(x) for x in self.perms[i].images)
            children = " ".join(f"s{j}" for j in self.delta[i])
            lines.append(f"s{i} | {images} | {children}")
        return "\n".join(lines) + "\n"

    def to_group(self) -> GroupDef:
        group = GroupDef(self.d, name="minimized")
        names = [f"s{i}" for i in range(self.size)]
        group.declare(*names)
        for i in range(self.size):
            sections = tuple(group.gen(f"s{j}") for j in self.delta[i])
            group.define(names[i], Node(self.perms[i], sections))
        return group

    def as_automorphism(self) -> Word:
        return self.to_group().gen(f"s{self.initial}")


def machine_of(g: Automorphism, budget: int | None = None) -> Machine:
    """Minimize the section closure of g into its canonical machine."""
    clo = section_closure(g, budget)
    n = clo.size
    # partition refinement: start from root permutations, split by the
    # classes of the section states until stable
    cls = {}
    labels: list[int] = []
    for i in range(n):
        key = clo.perms[i].images
        labels.append(cls.setdefault(key, len(cls)))
    while True:
        sig = {}
        nxt: list[int] = []
        for i in range(n):
            key = (labels[i], tuple(labels[j] for j in clo.delta[i]))
            nxt.append(sig.setdefault(key, len(sig)))
        if len(sig) == len(cls):
            labels = nxt
            break
        cls = sig
        labels = nxt
    # canonical renumbering: BFS over classes from the initial state
    order: dict[int, int] = {labels[0]: 0}
    reps = {labels[0]: 0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in clo.delta[i]:
            lbl = labels[j]
            if lbl not in order:
                order[lbl] = len(order)
                reps[lbl] = j
                queue.append(j)
    perms = [None] * len(order)
    delta = [None] * len(order)
    for lbl, pos in order.items():
        rep = reps[lbl]
        perms[pos] = clo.perms[rep]
        delta[pos] = tuple(order[labels[j]] for j in clo.delta[rep])
    return Machine(g.d, perms, delta, initial=0)


def minimize(g: Automorphism, budget: int | None = None) -> Word:
    """Smallest-state canonical form of g, as an element again.

    The result is a one-symbol word over a fresh GroupDef whose generators
    are exactly the machine states; its serialization is
    ``machine_of(g).canonical_text()``.
    """
    return machine_of(g, budget).as_automorphism()

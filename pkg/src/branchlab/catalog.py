"""Built-in groups and structural checkers (transitivity, local supports)."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .automaton import is_trivial
from .perms import Permutation
from .tree import (
    GroupDef,
    Node,
    Portrait,
    Vertex,
    Word,
    format_vertex,
    iter_ball,
    level_vertices,
    parse_vertex,
)


class UnknownGroupError(ValueError):
    pass


@dataclass
class CatalogEntry:
    """A built-in group together with its recorded expectations.

    ``relations`` are words expected to be trivial; they are verified when
    the entry is loaded. ``weakly_branch_depth`` / ``rist_radius`` record to
    what vertex depth local-support witnesses are expected to be found and
    within which word radius (None when the action is free and none exist).
    """

    name: str
    group: GroupDef
    relations: tuple[str, ...] = ()
    level_transitive: bool = True
    weakly_branch_depth: int | None = None
    rist_radius: int | None = None
    description: str = ""


def catalog_names() -> list[str]:
    return ["grigorchuk", "gupta-sidki-3", "binary-odometer", "switch-group(L)"]


_SWITCH_RE = re.compile(r"^switch-group\((\d+)\)$")


def load(name: str, budget: int | None = None) -> CatalogEntry:
    """Build a catalog entry by name and verify its stated relations."""
    if name == "grigorchuk":
        entry = _grigorchuk()
    elif name == "gupta-sidki-3":
        entry = _gupta_sidki()
    elif name == "binary-odometer":
        entry = _odometer()
    else:
        m = _SWITCH_RE.match(name)
        if m:
            entry = _switch_group(int(m.group(1)))
        else:
            raise UnknownGroupError(f"unknown catalog group {name!r}")
    for rel in entry.relations:
        if not is_trivial(entry.group.word(rel), budget):
            raise AssertionError(f"catalog relation {rel!r} failed in {name}")
    return entry


def _grigorchuk() -> CatalogEntry:
    g = GroupDef(2, name="grigorchuk")
    g.declare("a", "b", "c", "d")
    e = g.identity()
    swap = Permutation((1, 0))
    ident = Permutation.identity(2)
    g.define("a", Node(swap, (e, e)))
    g.define("b", Node(ident, (g.gen("a"), g.gen("c"))))
    g.define("c", Node(ident, (g.gen("a"), g.gen("d"))))
    g.define("d", Node(ident, (e, g.gen("b"))))
    g.level_transitive = True
    return CatalogEntry(
        name="grigorchuk",
        group=g,
        relations=("a*a", "b*b", "c*c", "d*d", "b*c*d"),
        level_transitive=True,
        weakly_branch_depth=3,
        rist_radius=5,
        description="four involutions on the binary tree, intermediate growth",
    )


def _gupta_sidki() -> CatalogEntry:
    g = GroupDef(3, name="gupta-sidki-3")
    g.declare("t", "a")
    e = g.identity()
    cyc = Permutation.from_cycles(3, [(0, 1, 2)])
    ident = Permutation.identity(3)
    g.define("t", Node(cyc, (e, e, e)))
    g.define("a", Node(ident, (g.gen("t"), g.word("t^-1"), g.gen("a"))))
    g.level_transitive = True
    return CatalogEntry(
        name="gupta-sidki-3",
        group=g,
        relations=("t*t*t", "a*a*a"),
        level_transitive=True,
        weakly_branch_depth=2,
        rist_radius=5,
        description="ternary tree, rooted 3-cycle and its recursive companion",
    )


def _odometer() -> CatalogEntry:
    g = GroupDef(2, name="binary-odometer")
    g.declare("a")
    e = g.identity()
    swap = Permutation((1, 0))
    g.define("a", Node(swap, (e, g.gen("a"))))
    g.level_transitive = True
    return CatalogEntry(
        name="binary-odometer",
        group=g,
        relations=(),
        level_transitive=True,
        weakly_branch_depth=None,
        rist_radius=None,
        description="free cyclic action: adding one with carry",
    )


def _switch_group(truncation: int) -> CatalogEntry:
    """Finitary switches: single swaps at even-level vertices and full rows
    of swaps at odd levels, truncated at the given level."""
    if truncation < 0:
        raise UnknownGroupError("switch-group truncation level must be nonnegative")
    g = GroupDef(2, name=f"switch-group({truncation})")
    swap = Permutation((1, 0))
    for level in range(truncation + 1):
        if level % 2 == 0:
            for v in level_vertices(2, level):
                g.define("s" + format_vertex(v), Portrait(2, {v: swap}))
        else:
            row = {v: swap for v in level_vertices(2, level)}
            g.define(f"h{level}", Portrait(2, row))
    g.level_transitive = True
    g.truncation_level = truncation
    relations = tuple(
        f"{n}*{n}" for n in list(g.generators)[:3]
    )  # all generators are involutions; spot-check a few
    return CatalogEntry(
        name=f"switch-group({truncation})",
        group=g,
        relations=relations,
        level_transitive=True,
        weakly_branch_depth=max(0, truncation - 1),
        rist_radius=1,
        description="finitary swaps: one per even-level vertex, full rows at odd levels",
    )


def check_level_transitive(group: GroupDef, k: int) -> tuple[bool, int]:
    """Whether the generators act transitively on level k; also orbit count."""
    if group.truncation_level is not None and k > group.truncation_level:
        raise ValueError(
            f"level {k} exceeds the truncation level {group.truncation_level} of {group.name}"
        )
    verts = level_vertices(group.d, k)
    gens = group.gens()
    seen: set[Vertex] = set()
    orbits = 0
    for v in verts:
        if v in seen:
            continue
        orbits += 1
        stack = [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            for w in gens:
                img = w.apply(u)
                if img not in seen:
                    seen.add(img)
                    stack.append(img)
    return orbits == 1, orbits


def _supported_inside(g: Word, v: Vertex, budget: int | None) -> bool:
    """True when g is nontrivial and moves nothing outside the cylinder at v."""
    group = g.group
    for w in level_vertices(group.d, len(v)):
        if w == v:
            continue
        if g.apply(w) != w:
            return False
        if not is_trivial(g.section(w), budget):
            return False
    if g.apply(v) != v:
        return False
    return not is_trivial(g.section(v), budget)


def rist_witness(
    group: GroupDef, v: Vertex | str, radius: int, budget: int | None = None
) -> Word | None:
    """Shortlex-first nontrivial element supported inside the cylinder at v.

    Returns None when no witness exists within the word radius; budget
    exhaustion raises instead of returning.
    """
    if isinstance(v, str):
        v = parse_vertex(v, group.d)
    for g in iter_ball(group, radius):
        if _supported_inside(g, v, budget):
            return g
    return None

"""Non-freeness certificates and approximation of sets by supports.

Three constructions live here:

* ``tnf_certificate``: search for finitely many elements whose interior
  fixed sets at a level generate the full power set of that level by Boolean
  operations (equivalently, separate all vertices of the level).
* ``support_search`` / ``anf_construct``: greedily build one element whose
  support sits inside a target clopen set and fills all but epsilon of it.
* ``lemma_subsets_verify``: exhaustive finite check of a symmetric-group
  subset inequality, over every transitive subgroup and every nonempty
  subset of points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import symgroup
from .automaton import is_trivial
from .measure import fix_interior, fix_measure, supp_measure
from .tree import (
    GroupDef,
    Vertex,
    Word,
    compose,
    format_vertex,
    iter_ball,
    level_vertices,
    parse_vertex,
)


# -- topological non-freeness certificates -----------------------------------


@dataclass
class TnfCertificate:
    """Interior fixed sets at one level whose Boolean closure is everything.

    ``entries`` lists only the elements that refined the partition, in
    search order; ``radius`` is the word length at which separation became
    complete (minimal for the shortlex search order).
    """

    group_name: str
    level: int
    radius: int
    entries: list[tuple[str, frozenset[Vertex]]]

    def validate(self, group: GroupDef, budget: int | None = None) -> bool:
        """Recompute every interior set and re-run the separation check."""
        atoms = [frozenset(level_vertices(group.d, self.level))]
        for word_text, claimed in self.entries:
            got = frozenset(fix_interior(group.word(word_text), self.level, budget))
            if got != claimed:
                return False
            atoms = _refine(atoms, got)
        return all(len(a) == 1 for a in atoms)


def _refine(atoms: list[frozenset], s: frozenset) -> list[frozenset]:
    out = []
    for a in atoms:
        inner = a & s
        outer = a - s
        if inner and outer:
            out.extend([inner, outer])
        else:
            out.append(a)
    return out


def tnf_certificate(
    group: GroupDef, level: int, radius: int, budget: int | None = None
) -> TnfCertificate | None:
    """Separate all level vertices by interior fixed sets of short words.

    Words are tried in shortlex order; an element is recorded only when its
    interior set splits some current atom. Returns None when the ball up to
    the radius does not suffice (that is an honest negative, not an error).
    """
    verts = level_vertices(group.d, level)
    atoms = [frozenset(verts)]
    entries: list[tuple[str, frozenset[Vertex]]] = []
    if all(len(a) == 1 for a in atoms):
        return TnfCertificate(group.name or "?", level, 0, [])
    for w in iter_ball(group, radius):
        interior = frozenset(fix_interior(w, level, budget))
        refined = _refine(atoms, interior)
        if len(refined) != len(atoms):
            atoms = refined
            entries.append((w.text(), interior))
            if all(len(a) == 1 for a in atoms):
                return TnfCertificate(group.name or "?", level, len(w), entries)
    return None


# -- greedy approximation of clopen sets by supports --------------------------


@dataclass
class SupportWitness:
    word: Word
    supp: Fraction
    target_bound: Fraction
    meets_bound: bool


def support_search(
    group: GroupDef, v: Vertex | str, radius: int, budget: int | None = None
) -> SupportWitness | None:
    """Largest-support element confined to the cylinder below v.

    Scans the shortlex ball, keeping the first element attaining the maximal
    support measure. The recorded bound is (1/d) times the cylinder mass,
    which branch-like actions are expected to meet once the radius suffices.
    """
    if isinstance(v, str):
        v = parse_vertex(v, group.d)
    d = group.d
    cylinder_mass = Fraction(1, d ** len(v))
    bound = cylinder_mass / d
    best: SupportWitness | None = None
    for g in iter_ball(group, radius):
        if not _confined(g, v, budget):
            continue
        s = supp_measure(g, budget)
        if best is None or s > best.supp:
            best = SupportWitness(g, s, bound, s >= bound)
    return best


def _confined(g: Word, v: Vertex, budget: int | None) -> bool:
    """Nontrivial, with support inside the cylinder at v (exact check)."""
    for w in level_vertices(g.group.d, len(v)):
        if g.apply(w) != w:
            return False
        if w != v and not is_trivial(g.section(w), budget):
            return False
    return not is_trivial(g.section(v), budget)


class AnfStalledError(RuntimeError):
    """The greedy round found a cylinder with no usable support element."""

    def __init__(self, message: str, cylinder: Vertex):
        super().__init__(message)
        self.cylinder = cylinder


@dataclass
class AnfRound:
    depth: int
    defect_before: Fraction
    cylinders: list[Vertex]
    cover_mass: Fraction
    picks: list[tuple[Vertex, str, Fraction]]
    defect_after: Fraction
    bound_met: bool
    decay_ok: bool


@dataclass
class AnfApproximation:
    """Result of the greedy construction: supp(word) inside the target,
    missing at most ``defect`` of its mass."""

    target: list[Vertex]
    eps: Fraction
    word: Word
    defect: Fraction
    rounds: list[AnfRound] = field(default_factory=list)
    cert_depth: int = 0

    def validate(self, budget: int | None = None) -> bool:
        """Independent recheck: confinement at cert_depth and the defect value."""
        group = self.word.group
        inside = set(_expand(self.target, group.d, self.cert_depth))
        interior = set(fix_interior(self.word, self.cert_depth, budget))
        for v in level_vertices(group.d, self.cert_depth):
            if v not in inside and v not in interior:
                return False
        return _defect(self.word, self.target, budget) == self.defect


def _normalize_cylinders(group: GroupDef, cylinders) -> list[Vertex]:
    vs = []
    for c in cylinders:
        vs.append(parse_vertex(c, group.d) if isinstance(c, str) else tuple(c))
    vs.sort(key=lambda v: (len(v), v))
    out: list[Vertex] = []
    for v in vs:
        if any(v[: len(u)] == u for u in out):
            continue  # nested inside an earlier cylinder
        out.append(v)
    return out


def _expand(cylinders: list[Vertex], d: int, depth: int) -> list[Vertex]:
    out = []
    for v in cylinders:
        if len(v) > depth:
            raise ValueError("expansion depth is above a cylinder base")
        tails = level_vertices(d, depth - len(v))
        out.extend(v + t for t in tails)
    return sorted(out)


def _defect(g: Word, cylinders: list[Vertex], budget: int | None) -> Fraction:
    """Exact mass of (target minus support of g)."""
    total = Fraction(0)
    d = g.group.d
    for v in cylinders:
        if g.apply(v) != v:
            continue
        total += fix_measure(g.section(v), budget) / d ** len(v)
    return total


def _maximal_cylinders(verts: set[Vertex], d: int) -> list[Vertex]:
    """Merge complete sibling families upward into maximal cylinders."""
    current = set(verts)
    merged = True
    while merged:
        merged = False
        parents = {}
        for v in current:
            if v:
                parents.setdefault(v[:-1], set()).add(v[-1])
        for p, letters in parents.items():
            if len(letters) == d:
                current -= {p + (x,) for x in range(d)}
                current.add(p)
                merged = True
    return sorted(current, key=lambda v: (len(v), v))


def anf_construct(
    group: GroupDef,
    target,
    eps: Fraction,
    radius: int = 4,
    max_rounds: int = 32,
    budget: int | None = None,
) -> AnfApproximation:
    """Greedy element whose support lies in the target set and misses < eps.

    Each round covers the currently unmoved part of the target by maximal
    cylinders (computed at the working depth, which grows by one whenever a
    round stalls), finds a large-support element inside each cylinder, and
    multiplies them in. Supports are disjoint, so defects subtract exactly.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    cylinders = _normalize_cylinders(group, target)
    if not cylinders:
        raise ValueError("target set is empty")
    d = group.d
    base_depth = max(len(v) for v in cylinders)
    depth = max(base_depth, 1)
    g = group.identity()
    rounds: list[AnfRound] = []
    for _ in range(max_rounds):
        defect = _defect(g, cylinders, budget)
        if defect < eps:
            approx = AnfApproximation(cylinders, eps, g, defect, rounds, depth)
            if not approx.validate(budget):
                raise AssertionError("anf result failed its own validation")
            return approx
        inside = set(_expand(cylinders, d, depth))
        interior = [v for v in fix_interior(g, depth, budget) if v in inside]
        cover = _maximal_cylinders(set(interior), d)
        cover_mass = sum((Fraction(1, d ** len(v)) for v in cover), Fraction(0))
        picks = []
        new_g = g
        stalled = cover_mass * (d + 1) < defect * d  # cover below d/(d+1) of the defect
        if not stalled:
            for v in cover:
                w = support_search(group, v, radius, budget)
                if w is None:
                    stalled = True
                    picks = []
                    break
                picks.append((v, w.word.text(), w.supp))
                new_g = compose(new_g, w.word)
        if stalled:
            rounds.append(
                AnfRound(depth, defect, cover, cover_mass, [], defect, False, False)
            )
            depth += 1
            continue
        g = new_g
        defect_after = _defect(g, cylinders, budget)
        bound_met = all(
            s >= Fraction(1, d ** (len(v) + 1)) for v, _, s in picks
        )
        decay_ok = defect_after * (d + 1) <= defect * d
        rounds.append(
            AnfRound(depth, defect, cover, cover_mass, picks, defect_after, bound_met, decay_ok)
        )
    last = rounds[-1] if rounds else None
    if last is not None and not last.picks and last.cylinders:
        raise AnfStalledError(
            f"no support element found inside cylinder {format_vertex(last.cylinders[0])} "
            f"within radius {radius}",
            last.cylinders[0],
        )
    raise AnfStalledError(
        f"defect still {_defect(g, cylinders, budget)} after {max_rounds} rounds", cylinders[0]
    )


# -- exhaustive subset lemma ---------------------------------------------------


@dataclass
class LemmaReport:
    n_max: int
    subgroups_checked: dict[int, int]
    transitive_checked: dict[int, int]
    hypothesis_cases: dict[int, int]
    counterexamples: list[tuple[int, tuple[str, ...], tuple[int, ...]]]

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def lemma_subsets_verify(n_max: int) -> LemmaReport:
    """Check: transitive H on n points, nonempty A, if |g(A) xor h(A)| <= |A|
    for all g != h in H then |A| > n/2. Exhaustive over all transitive
    subgroups and all nonempty subsets, for every n <= n_max (n_max <= 7).
    """
    if not 1 <= n_max <= 7:
        raise ValueError("n_max must be between 1 and 7")
    subgroups_checked: dict[int, int] = {}
    transitive_checked: dict[int, int] = {}
    hypothesis_cases: dict[int, int] = {}
    counterexamples: list[tuple[int, tuple[str, ...], tuple[int, ...]]] = []
    for n in range(1, n_max + 1):
        if n <= 6:
            lattice = symgroup.subgroup_lattice(n)
            subgroups_checked[n] = len(lattice)
            groups = [H for H in lattice if symgroup.is_transitive(H, n)]
        else:
            groups = symgroup.transitive_subgroups(n)
            subgroups_checked[n] = len(groups)
        transitive_checked[n] = len(groups)
        hyp_count = 0
        ident = symgroup.p_identity(n)
        for H in groups:
            others = [h for h in H if h != ident]
            # image of a subset bitmask under each group element
            img = []
            for h in others:
                table = [0] * (1 << n)
                for a in range(1 << n):
                    m = 0
                    rest = a
                    while rest:
                        i = (rest & -rest).bit_length() - 1
                        m |= 1 << h[i]
                        rest &= rest - 1
                    table[a] = m
                img.append(table)
            for a in range(1, 1 << n):
                size = a.bit_count()
                if all((a ^ t[a]).bit_count() <= size for t in img):
                    hyp_count += 1
                    if 2 * size <= n:
                        gens = tuple(str(tuple(h)) for h in sorted(H))
                        pts = tuple(i for i in range(n) if a >> i & 1)
                        counterexamples.append((n, gens, pts))
        hypothesis_cases[n] = hyp_count
    return LemmaReport(
        n_max, subgroups_checked, transitive_checked, hypothesis_cases, counterexamples
    )

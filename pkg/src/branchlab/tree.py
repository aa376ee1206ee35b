"""Automorphisms of the d-regular rooted tree.

Vertices of the tree are finite words over the alphabet {0, ..., d-1},
represented as tuples of ints. An automorphism is stored in one of three
interchangeable forms:

* ``Node``: an explicit root permutation plus one child automorphism per
  letter (one unrolled level of wreath recursion).
* ``Word``: a freely reduced word in the named generators of a ``GroupDef``.
  Sections of words are computed through the defining recursions and stay
  words, so the word problem reduces to a finite closure of sections.
* ``Portrait``: a finite assignment of permutations to vertices, trivial
  below some depth. Finitary elements compose and invert exactly in this
  form.

All forms share the small interface ``root_perm`` / ``section_at`` / ``key``
on which the generic algorithms (apply, section, closure, measures) run.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .perms import Permutation

Vertex = tuple[int, ...]

DEFAULT_BUDGET = 1_000_000


class BudgetExceededError(RuntimeError):
    """A closure or enumeration ran past its state budget.

    Deliberately distinct from any boolean answer: exhausting the budget
    means "unknown at this budget", never "false".
    """

    def __init__(self, message: str, visited: int | None = None):
        super().__init__(message)
        self.visited = visited


def parse_vertex(text: str, d: int) -> Vertex:
    """Read a vertex from a digit string ("" is the root)."""
    if d > 10:
        raise ValueError("digit-string vertices only support alphabets up to size 10")
    out = []
    for ch in text:
        if not ch.isdigit() or int(ch) >= d:
            raise ValueError(f"bad letter {ch!r} in vertex {text!r} (alphabet size {d})")
        out.append(int(ch))
    return tuple(out)


def format_vertex(v: Vertex) -> str:
    return "".join(str(x) for x in v)


def level_vertices(d: int, k: int) -> list[Vertex]:
    """All level-k vertices in lexicographic order."""
    out = [()]
    for _ in range(k):
        out = [v + (x,) for v in out for x in range(d)]
    return out


def vertex_index(v: Vertex, d: int) -> int:
    i = 0
    for x in v:
        i = i * d + x
    return i


def index_vertex(i: int, d: int, k: int) -> Vertex:
    out = []
    for _ in range(k):
        out.append(i % d)
        i //= d
    return tuple(reversed(out))


class Automorphism:
    """Base interface shared by the three element forms."""

    __slots__ = ()

    @property
    def d(self) -> int:
        raise NotImplementedError

    def root_perm(self) -> Permutation:
        raise NotImplementedError

    def section_at(self, letter: int) -> "Automorphism":
        raise NotImplementedError

    def key(self):
        """Hashable identifier used for memoization and free reduction."""
        raise NotImplementedError

    def apply(self, v: Vertex) -> Vertex:
        """Image of the vertex v."""
        out = []
        cur: Automorphism = self
        for x in v:
            out.append(cur.root_perm()(x))
            cur = cur.section_at(x)
        return tuple(out)

    def section(self, v: Vertex) -> "Automorphism":
        """The induced action on the subtree below v (as an element)."""
        cur: Automorphism = self
        for x in v:
            cur = cur.section_at(x)
        return cur


class Node(Automorphism):
    """Root permutation plus one section per letter."""

    __slots__ = ("perm", "sections")

    def __init__(self, perm: Permutation, sections: Iterable[Automorphism]):
        sections = tuple(sections)
        if len(sections) != perm.degree:
            raise ValueError(f"need {perm.degree} sections, got {len(sections)}")
        for s in sections:
            if s.d != perm.degree:
                raise ValueError("section alphabet size differs from root")
        self.perm = perm
        self.sections = sections

    @property
    def d(self) -> int:
        return self.perm.degree

    def root_perm(self) -> Permutation:
        return self.perm

    def section_at(self, letter: int) -> Automorphism:
        return self.sections[letter]

    def key(self):
        return ("node", id(self))

    def __repr__(self) -> str:
        return f"Node({self.perm.cycle_text()}, {len(self.sections)} sections)"


class Portrait(Automorphism):
    """Finitary automorphism: finitely many vertex permutations, identity below.

    Only nontrivial permutations are stored, so two equal finitary elements
    always carry identical data and share a ``key``.
    """

    __slots__ = ("_d", "perms")

    def __init__(self, d: int, perms: Mapping[Vertex, Permutation] | None = None):
        self._d = d
        clean: dict[Vertex, Permutation] = {}
        for v, p in (perms or {}).items():
            v = tuple(v)
            if any(not 0 <= x < d for x in v):
                raise ValueError(f"vertex {v} has letters outside the alphabet")
            if p.degree != d:
                raise ValueError("permutation degree differs from alphabet size")
            if not p.is_identity():
                clean[v] = p
        self.perms = clean

    @property
    def d(self) -> int:
        return self._d

    @property
    def depth(self) -> int:
        """Least depth below which the portrait is guaranteed trivial."""
        if not self.perms:
            return 0
        return 1 + max(len(v) for v in self.perms)

    def root_perm(self) -> Permutation:
        return self.perms.get((), Permutation.identity(self._d))

    def section_at(self, letter: int) -> "Portrait":
        sub = {v[1:]: p for v, p in self.perms.items() if v and v[0] == letter}
        return Portrait(self._d, sub)

    def key(self):
        return ("portrait", self._d, frozenset((v, p.images) for v, p in self.perms.items()))

    def is_trivial(self) -> bool:
        return not self.perms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Portrait) and self._d == other._d and self.perms == other.perms
        )

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Portrait(d={self._d}, {len(self.perms)} vertex perms)"


def _reduce_syms(syms: Iterable[tuple[str, int]]) -> tuple[tuple[str, int], ...]:
    out: list[tuple[str, int]] = []
    for name, e in syms:
        if out and out[-1][0] == name and out[-1][1] == -e:
            out.pop()
        else:
            out.append((name, e))
    return tuple(out)


class Word(Automorphism):
    """Freely reduced word in the generators of a GroupDef.

    Free reduction cancels adjacent x and x^-1 only; no other rewriting is
    applied, so distinct words may denote equal automorphisms (use
    ``automaton.equal`` or ``automaton.is_trivial`` to decide).
    """

    __slots__ = ("group", "syms")

    def __init__(self, group: "GroupDef", syms: Iterable[tuple[str, int]]):
        syms = _reduce_syms(syms)
        for name, e in syms:
            if name not in group._declared and name not in group._derived:
                raise KeyError(f"unknown generator {name!r}")
            if e not in (1, -1):
                raise ValueError(f"bad exponent {e} for {name!r}")
        self.group = group
        self.syms = syms

    @property
    def d(self) -> int:
        return self.group.d

    def root_perm(self) -> Permutation:
        return self.group._word_root_perm(self.syms)

    def section_at(self, letter: int) -> "Word":
        return self.group._word_section(self.syms, letter)

    def key(self):
        return ("word", id(self.group), self.syms)

    def text(self) -> str:
        if not self.syms:
            return "e"
        return "*".join(name if e > 0 else f"{name}^-1" for name, e in self.syms)

    def __len__(self) -> int:
        return len(self.syms)

    def __mul__(self, other: "Word") -> "Word":
        return compose(self, other)

    def __invert__(self) -> "Word":
        return inverse(self)

    def __eq__(self, other) -> bool:
        """Literal word equality, not equality of automorphisms."""
        return isinstance(other, Word) and self.group is other.group and self.syms == other.syms

    def __hash__(self) -> int:
        return hash((id(self.group), self.syms))

    def __repr__(self) -> str:
        return f"Word({self.text()!r})"


class GroupDef:
    """A named finite generating set of tree automorphisms.

    Generators are declared first and defined afterwards so wreath recursions
    may refer forward to names later in the file. Bodies are arbitrary
    automorphisms; sections of words resolve through them and are interned
    back into word form, which keeps the closure machinery on one
    representation.

    Memoization caches live on the instance and only ever hold values that
    are deterministic functions of their keys, so concurrent readers may at
    worst recompute an entry.
    """

    def __init__(self, d: int, name: str | None = None):
        if d < 2:
            raise ValueError("alphabet size must be at least 2")
        self.d = d
        self.name = name
        self.generators: dict[str, Automorphism] = {}
        self._declared: set[str] = set()
        self._derived: dict[str, Automorphism] = {}
        self._interned: dict[object, str] = {}
        self._sec_cache: dict[tuple, tuple] = {}
        self._rp_cache: dict[tuple, Permutation] = {}
        self.scratch: dict[str, dict] = {}
        self.level_transitive: bool | None = None
        self.truncation_level: int | None = None

    # -- construction ------------------------------------------------------

    def declare(self, *names: str) -> None:
        for name in names:
            if name == "e" or not name.isidentifier():
                raise ValueError(f"bad generator name {name!r}")
            if name in self._declared:
                raise ValueError(f"generator {name!r} declared twice")
            self._declared.add(name)

    def define(self, name: str, body: Automorphism) -> None:
        if name not in self._declared:
            self.declare(name)
        if name in self.generators:
            raise ValueError(f"generator {name!r} defined twice")
        if body.d != self.d:
            raise ValueError("generator body has wrong alphabet size")
        self.generators[name] = body

    def add_generator(self, name: str, body: Automorphism) -> None:
        self.define(name, body)

    def body(self, name: str) -> Automorphism:
        if name in self.generators:
            return self.generators[name]
        if name in self._derived:
            return self._derived[name]
        raise KeyError(f"generator {name!r} has no definition")

    # -- element builders --------------------------------------------------

    def identity(self) -> Word:
        return Word(self, ())

    def gen(self, name: str) -> Word:
        return Word(self, ((name, 1),))

    def gens(self) -> list[Word]:
        return [self.gen(n) for n in self.generators]

    def word(self, spec) -> Word:
        """Build a word from "a*b^-1" text or an iterable of (name, exp)."""
        if isinstance(spec, Word):
            if spec.group is not self:
                raise ValueError("word belongs to a different group")
            return spec
        if isinstance(spec, str):
            text = spec.strip()
            if text in ("", "e"):
                return self.identity()
            syms = []
            for part in text.split("*"):
                part = part.strip()
                if part.endswith("^-1"):
                    syms.append((part[:-3], -1))
                elif part == "e":
                    continue
                else:
                    syms.append((part, 1))
            return Word(self, syms)
        return Word(self, spec)

    def wrap(self, aut: Automorphism) -> Word:
        """Present any same-alphabet automorphism as a word over this group."""
        if aut.d != self.d:
            raise ValueError("alphabet size mismatch")
        return Word(self, self._intern(aut, 1))

    # -- section resolution ------------------------------------------------

    def _intern(self, aut: Automorphism, exp: int) -> tuple[tuple[str, int], ...]:
        if isinstance(aut, Word) and aut.group is self:
            if exp > 0:
                return aut.syms
            return tuple((n, -e) for n, e in reversed(aut.syms))
        if isinstance(aut, Portrait) and aut.is_trivial():
            return ()
        k = aut.key()
        name = self._interned.get(k)
        if name is None:
            name = f"_q{len(self._derived)}"
            self._derived[name] = aut
            self._interned[k] = name
        return ((name, exp),)

    def _word_root_perm(self, syms: tuple[tuple[str, int], ...]) -> Permutation:
        cached = self._rp_cache.get(syms)
        if cached is not None:
            return cached
        p = Permutation.identity(self.d)
        for name, e in syms:
            bp = self.body(name).root_perm()
            p = p * (bp if e > 0 else bp.inverse())
        self._rp_cache[syms] = p
        return p

    def _word_section(self, syms: tuple[tuple[str, int], ...], letter: int) -> Word:
        ck = (syms, letter)
        cached = self._sec_cache.get(ck)
        if cached is not None:
            return Word(self, cached)
        # section(g*h, x) = section(g, h(x)) * section(h, x): walk the word
        # right to left, tracking the image of the letter.
        parts: list[tuple[tuple[str, int], ...]] = []
        c = letter
        for name, e in reversed(syms):
            body = self.body(name)
            if e > 0:
                sec = body.section_at(c)
                parts.append(self._intern(sec, 1))
                c = body.root_perm()(c)
            else:
                c = body.root_perm().inverse()(c)
                sec = body.section_at(c)
                parts.append(self._intern(sec, -1))
        flat: list[tuple[str, int]] = []
        for frag in reversed(parts):
            flat.extend(frag)
        reduced = _reduce_syms(flat)
        self._sec_cache[ck] = reduced
        return Word(self, reduced)

    def cache(self, tag: str) -> dict:
        return self.scratch.setdefault(tag, {})

    def __repr__(self) -> str:
        label = self.name or "?"
        return f"GroupDef({label}, d={self.d}, {len(self.generators)} generators)"


# -- generic operations ------------------------------------------------------


def compose(g: Automorphism, h: Automorphism) -> Automorphism:
    """Product g*h acting by apply(g*h, v) == apply(g, apply(h, v))."""
    if isinstance(g, Word) and isinstance(h, Word):
        if g.group is not h.group:
            raise TypeError("cannot compose words over different groups")
        return Word(g.group, g.syms + h.syms)
    if isinstance(g, Portrait) and isinstance(h, Portrait):
        if g.d != h.d:
            raise TypeError("cannot compose portraits on different alphabets")
        return _compose_portraits(g, h)
    raise TypeError(
        "compose needs two words over one GroupDef or two portraits; "
        "wrap other forms with GroupDef.wrap first"
    )


def inverse(g: Automorphism) -> Automorphism:
    if isinstance(g, Word):
        return Word(g.group, ((n, -e) for n, e in reversed(g.syms)))
    if isinstance(g, Portrait):
        return _inverse_portrait(g)
    if isinstance(g, Node):
        pinv = g.perm.inverse()
        return Node(pinv, tuple(inverse(g.sections[pinv(x)]) for x in range(g.d)))
    raise TypeError(f"cannot invert {type(g).__name__}")


def _compose_portraits(g: Portrait, h: Portrait) -> Portrait:
    d = g.d
    perms: dict[Vertex, Permutation] = {}

    def rec(gp: Portrait, hp: Portrait, prefix: Vertex) -> None:
        hr = hp.root_perm()
        p = gp.root_perm() * hr
        if not p.is_identity():
            perms[prefix] = p
        if gp.is_trivial() and hp.is_trivial():
            return
        for x in range(d):
            rec(gp.section_at(hr(x)), hp.section_at(x), prefix + (x,))

    rec(g, h, ())
    return Portrait(d, perms)


def _inverse_portrait(g: Portrait) -> Portrait:
    d = g.d
    perms: dict[Vertex, Permutation] = {}

    def rec(gp: Portrait, prefix: Vertex) -> None:
        ri = gp.root_perm().inverse()
        if not ri.is_identity():
            perms[prefix] = ri
        if gp.is_trivial():
            return
        for x in range(d):
            rec(gp.section_at(ri(x)), prefix + (x,))

    rec(g, ())
    return Portrait(d, perms)


def portrait_of(g: Automorphism, depth: int) -> Portrait:
    """Truncating conversion: agrees with g on all vertices of length <= depth."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    perms: dict[Vertex, Permutation] = {}

    def rec(cur: Automorphism, prefix: Vertex) -> None:
        if len(prefix) >= depth:
            return
        p = cur.root_perm()
        if not p.is_identity():
            perms[prefix] = p
        if len(prefix) + 1 < depth:
            for x in range(cur.d):
                rec(cur.section_at(x), prefix + (x,))

    rec(g, ())
    return Portrait(g.d, perms)


def iter_ball(group: GroupDef, radius: int, include_identity: bool = False) -> Iterator[Word]:
    """Freely reduced words of length <= radius in shortlex order.

    Symbol order is generator definition order, plain symbol before its
    inverse. Words are distinct as words; semantically equal elements may
    repeat.
    """
    symbols = [(n, e) for n in group.generators for e in (1, -1)]
    if include_identity:
        yield group.identity()
    frontier: list[tuple[tuple[str, int], ...]] = [()]
    for _ in range(radius):
        nxt = []
        for syms in frontier:
            for s in symbols:
                if syms and syms[-1][0] == s[0] and syms[-1][1] == -s[1]:
                    continue
                w = syms + (s,)
                nxt.append(w)
                yield Word(group, w)
        frontier = nxt

"""Permutations of a finite letter alphabet {0, ..., d-1}."""

from __future__ import annotations


class Permutation:
    """A bijection of {0, ..., d-1}, stored as its tuple of images.

    Composition follows function application: (p * q)(x) == p(q(x)).
    """

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation of 0..{len(images) - 1}: {images!r}")
        self.images = images

    @classmethod
    def identity(cls, d: int) -> "Permutation":
        return cls(range(d))

    @classmethod
    def from_cycles(cls, d: int, cycles) -> "Permutation":
        images = list(range(d))
        for cyc in cycles:
            cyc = tuple(cyc)
            if len(set(cyc)) != len(cyc):
                raise ValueError(f"repeated letter in cycle {cyc!r}")
            for x in cyc:
                if not 0 <= x < d:
                    raise ValueError(f"letter {x} out of range for alphabet of size {d}")
            for i, x in enumerate(cyc):
                images[x] = cyc[(i + 1) % len(cyc)]
        # cycles must be disjoint, otherwise the images are no longer a bijection
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return Permutation(self.images[y] for y in other.images)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for x, y in enumerate(self.images):
            inv[y] = x
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def fixed_letters(self) -> tuple[int, ...]:
        return tuple(x for x, y in enumerate(self.images) if x == y)

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its least letter, sorted."""
        seen = set()
        out = []
        for start in range(len(self.images)):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self.images[x]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_text(self) -> str:
        """Cycle notation as accepted by the .grp format.

        Identity is "()", a single cycle is "(0 1)", several cycles are
        wrapped as "((0 1)(2 3))".
        """
        cycs = self.cycles()
        if not cycs:
            return "()"
        if len(cycs) == 1:
            return "(" + " ".join(map(str, cycs[0])) + ")"
        return "(" + "".join("(" + " ".join(map(str, c)) + ")" for c in cycs) + ")"

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({self.images})"

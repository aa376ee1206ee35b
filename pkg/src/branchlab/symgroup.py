"""Finite symmetric groups: closures, the full subgroup lattice, transitivity.

Permutations of {0..n-1} are stored as bytes (index -> image), which keeps
hashing and set operations cheap. The lattice enumeration extends subgroups
one generator at a time; extensions are only attempted from one
representative per conjugacy class (extending a conjugate yields a conjugate
result), but every subgroup, conjugates included, is materialized in the
returned set, so downstream checks remain fully exhaustive.
"""

from __future__ import annotations

from itertools import permutations as _itertools_permutations


def perms_of(n: int) -> list[bytes]:
    return sorted(bytes(p) for p in _itertools_permutations(range(n)))


def p_identity(n: int) -> bytes:
    return bytes(range(n))


def p_mul(p: bytes, q: bytes) -> bytes:
    """(p*q)(x) == p(q(x))."""
    return bytes(p[x] for x in q)


def p_inv(p: bytes) -> bytes:
    out = bytearray(len(p))
    for x, y in enumerate(p):
        out[y] = x
    return bytes(out)


def mulclose(gens, n: int) -> frozenset[bytes]:
    """Subgroup generated by gens, via frontier breadth-first closure."""
    gens = [bytes(g) for g in gens]
    els = {p_identity(n)}
    frontier = [g for g in gens if g not in els]
    els.update(frontier)
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                b = p_mul(a, g)
                if b not in els:
                    els.add(b)
                    new.append(b)
        frontier = new
    return frozenset(els)


def is_transitive(H, n: int) -> bool:
    reached = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for h in H:
            y = h[x]
            if y not in reached:
                reached.add(y)
                stack.append(y)
    return len(reached) == n


def conjugate(H: frozenset[bytes], s: bytes) -> frozenset[bytes]:
    si = p_inv(s)
    return frozenset(p_mul(p_mul(s, h), si) for h in H)


def subgroup_lattice(n: int) -> set[frozenset[bytes]]:
    """Every subgroup of the symmetric group on n points (n <= 6)."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > 6:
        raise ValueError("full lattice enumeration is limited to n <= 6")
    sym = perms_of(n)
    full = frozenset(sym)
    ident = p_identity(n)
    trivial = frozenset({ident})
    seen: set[frozenset[bytes]] = {trivial}
    work: list[tuple[frozenset[bytes], tuple[bytes, ...]]] = [(trivial, ())]
    while work:
        H, gens = work.pop()
        if H == full:
            continue
        attempted = set(H)
        for g in sym:
            if g in attempted:
                continue
            K = mulclose(gens + (g,), n)
            # any element of the double coset H g H generates the same K
            if len(H) * len(H) <= 4096:
                for h1 in H:
                    h1g = p_mul(h1, g)
                    for h2 in H:
                        attempted.add(p_mul(h1g, h2))
            else:
                for h1 in H:
                    attempted.add(p_mul(h1, g))
            if K in seen:
                continue
            newly = [c for c in (conjugate(K, s) for s in sym) if c not in seen]
            seen.update(newly)
            seen.add(K)
            work.append((K, gens + (g,)))
    return seen


def transitive_subgroups(n: int) -> list[frozenset[bytes]]:
    """All transitive subgroups, exhaustively.

    For n <= 6 this filters the full lattice. For n = 7 every transitive
    subgroup has order divisible by 7 and therefore contains a conjugate of
    the standard 7-cycle, so enumerating all overgroups of that cycle is
    exhaustive up to conjugacy; conjugates are then materialized explicitly.
    """
    if n <= 6:
        groups = [H for H in subgroup_lattice(n) if is_transitive(H, n)]
    elif n == 7:
        sym = perms_of(7)
        cyc = bytes([1, 2, 3, 4, 5, 6, 0])
        base = mulclose([cyc], 7)
        seen = {base}
        work: list[tuple[frozenset[bytes], tuple[bytes, ...]]] = [(base, (cyc,))]
        full = frozenset(sym)
        while work:
            H, gens = work.pop()
            if H == full:
                continue
            attempted = set(H)
            for g in sym:
                if g in attempted:
                    continue
                K = mulclose(gens + (g,), 7)
                for h1 in H:
                    attempted.add(p_mul(h1, g))
                if K not in seen:
                    seen.add(K)
                    work.append((K, gens + (g,)))
        groups = set()
        for H in seen:
            groups.add(H)
            for s in sym:
                groups.update({conjugate(H, s)})
        groups = [H for H in groups if is_transitive(H, 7)]
    else:
        raise ValueError("transitive subgroup enumeration is limited to n <= 7")
    return sorted(groups, key=lambda H: (len(H), sorted(H)))

"""Exact boundary measures of fixed-point sets, and character utilities.

The boundary of the tree carries the uniform Bernoulli measure: the cylinder
below a level-n vertex has mass 1/d^n. For an element g the measure of the
set of fixed boundary points is computed exactly from the minimized section
automaton by absorption analysis:

* the identity state has measure 1,
* states that cannot reach the identity state along fixed-letter transitions
  have measure 0,
* the remaining states satisfy m(s) = (1/d) * sum of m(target) over fixed
  letters, a nonsingular linear system solved over Fraction.

Everything here is exact; no floats are produced anywhere.
"""

from __future__ import annotations

from fractions import Fraction

from .automaton import Machine, machine_of
from .tree import Automorphism, Vertex, Word, compose, inverse


def _fixed_edges(machine: Machine) -> list[list[tuple[int, int]]]:
    """Per state: (letter, target) pairs over letters fixed by the root perm."""
    out = []
    for i in range(machine.size):
        p = machine.perms[i]
        out.append([(x, machine.delta[i][x]) for x in p.fixed_letters()])
    return out


def _state_measures(machine: Machine) -> list[Fraction]:
    n = machine.size
    d = machine.d
    ids = machine.identity_state
    edges = _fixed_edges(machine)
    if ids is None:
        return [Fraction(0)] * n
    # states that reach the identity along fixed-letter edges
    rev: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for _, j in edges[i]:
            rev[j].append(i)
    alive = {ids}
    stack = [ids]
    while stack:
        j = stack.pop()
        for i in rev[j]:
            if i not in alive:
                alive.add(i)
                stack.append(i)
    measures = [Fraction(0)] * n
    measures[ids] = Fraction(1)
    transient = sorted(alive - {ids})
    if not transient:
        return measures
    pos = {s: r for r, s in enumerate(transient)}
    m = len(transient)
    aug = [[Fraction(0)] * (m + 1) for _ in range(m)]
    for r, s in enumerate(transient):
        aug[r][r] = Fraction(1)
        for _, j in edges[s]:
            if j == ids:
                aug[r][m] += Fraction(1, d)
            elif j in pos:
                aug[r][pos[j]] -= Fraction(1, d)
    _solve_in_place(aug)
    for r, s in enumerate(transient):
        measures[s] = aug[r][m]
    return measures


def _solve_in_place(aug: list[list[Fraction]]) -> None:
    """Gaussian elimination over Fraction; the last column is the RHS."""
    m = len(aug)
    for col in range(m):
        piv = next((r for r in range(col, m) if aug[r][col] != 0), None)
        if piv is None:
            raise ArithmeticError("singular fixed-measure system; this should not happen")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(m):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]


def _machine_for(g: Automorphism, budget: int | None) -> Machine:
    if isinstance(g, Word):
        cache = g.group.cache("machines")
        m = cache.get(g.syms)
        if m is None:
            m = machine_of(g, budget)
            cache[g.syms] = m
        return m
    return machine_of(g, budget)


def fix_measure(g: Automorphism, budget: int | None = None) -> Fraction:
    """Exact measure of the set of boundary points fixed by g."""
    if isinstance(g, Word):
        cache = g.group.cache("fix_measure")
        v = cache.get(g.syms)
        if v is None:
            machine = _machine_for(g, budget)
            v = _state_measures(machine)[machine.initial]
            cache[g.syms] = v
        return v
    machine = _machine_for(g, budget)
    return _state_measures(machine)[machine.initial]


def supp_measure(g: Automorphism, budget: int | None = None) -> Fraction:
    """Measure of the support (complement of the fixed set)."""
    return 1 - fix_measure(g, budget)


def fix_measure_level(g: Automorphism, k: int, budget: int | None = None) -> Fraction:
    """Fraction of level-k vertices fixed by g (monotone nonincreasing in k)."""
    machine = _machine_for(g, budget)
    d = machine.d
    edges = _fixed_edges(machine)
    vec = [Fraction(1)] * machine.size
    for _ in range(k):
        vec = [sum((vec[j] for _, j in edges[i]), Fraction(0)) / d for i in range(machine.size)]
    return vec[machine.initial]


def interior_measure(g: Automorphism, k: int, budget: int | None = None) -> Fraction:
    """Mass of level-k cylinders lying entirely inside the fixed set."""
    machine = _machine_for(g, budget)
    d = machine.d
    ids = machine.identity_state
    if ids is None:
        return Fraction(0)
    edges = _fixed_edges(machine)
    vec = [Fraction(1) if i == ids else Fraction(0) for i in range(machine.size)]
    for _ in range(k):
        vec = [sum((vec[j] for _, j in edges[i]), Fraction(0)) / d for i in range(machine.size)]
    return vec[machine.initial]


def fix_interior(g: Automorphism, k: int, budget: int | None = None) -> list[Vertex]:
    """Level-k vertices fixed by g whose section is trivial, in lex order.

    The cylinders below these vertices are inside the fixed set, so their
    total mass is a lower bound for fix_measure(g).
    """
    machine = _machine_for(g, budget)
    ids = machine.identity_state
    out: list[Vertex] = []
    if ids is None:
        return out

    def rec(state: int, prefix: tuple[int, ...]) -> None:
        if len(prefix) == k:
            if state == ids:
                out.append(prefix)
            return
        p = machine.perms[state]
        for x in p.fixed_letters():
            rec(machine.delta[state][x], prefix + (x,))

    rec(machine.initial, ())
    return out


def level_bounds(
    g: Automorphism, k_max: int, budget: int | None = None
) -> list[tuple[int, Fraction, Fraction]]:
    """Per level k: (k, interior mass, fixed-vertex fraction) sandwiching fix_measure."""
    machine = _machine_for(g, budget)
    d = machine.d
    edges = _fixed_edges(machine)
    ids = machine.identity_state
    upper = [Fraction(1)] * machine.size
    lower = [Fraction(1) if i == ids else Fraction(0) for i in range(machine.size)]
    out = [(0, lower[machine.initial], upper[machine.initial])]
    for k in range(1, k_max + 1):
        upper = [sum((upper[j] for _, j in edges[i]), Fraction(0)) / d for i in range(machine.size)]
        lower = [sum((lower[j] for _, j in edges[i]), Fraction(0)) / d for i in range(machine.size)]
        out.append((k, lower[machine.initial], upper[machine.initial]))
    return out


def char_value(g: Automorphism, budget: int | None = None) -> Fraction:
    """Character value of g: the exact measure of its fixed boundary set."""
    return fix_measure(g, budget)


def gram_matrix(words: list[Word], budget: int | None = None) -> list[list[Fraction]]:
    """Matrix of character values on pairwise quotients g_i * g_j^-1."""
    n = len(words)
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = fix_measure(compose(words[i], inverse(words[j])), budget)
            out[i][j] = v
            out[j][i] = v
    return out


def is_psd(matrix: list[list[Fraction]]) -> bool:
    """Exact positive semidefiniteness of a symmetric rational matrix.

    Pivoted symmetric elimination: repeatedly pick the largest diagonal
    entry; a negative diagonal refutes, a zero diagonal with a nonzero
    off-diagonal entry in its row refutes, otherwise eliminate and recurse
    on the Schur complement. (Leading principal minors alone do not decide
    semidefiniteness.)
    """
    n = len(matrix)
    a = [[Fraction(v) for v in row] for row in matrix]
    for row in a:
        if len(row) != n:
            raise ValueError("matrix is not square")
    for i in range(n):
        for j in range(i + 1, n):
            if a[i][j] != a[j][i]:
                raise ValueError("matrix is not symmetric")
    active = list(range(n))
    while active:
        piv = max(active, key=lambda i: a[i][i])
        if a[piv][piv] < 0:
            return False
        if a[piv][piv] == 0:
            if any(a[piv][j] != 0 for j in active if j != piv):
                return False
            active.remove(piv)
            continue
        p = a[piv][piv]
        rest = [i for i in active if i != piv]
        for i in rest:
            f = a[i][piv] / p
            if f == 0:
                continue
            for j in rest:
                a[i][j] -= f * a[piv][j]
        active = rest
    return True


def gram_psd_check(words: list[Word], budget: int | None = None) -> bool:
    """Check exact positive semidefiniteness of the character Gram matrix."""
    return is_psd(gram_matrix(words, budget))

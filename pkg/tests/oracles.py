"""Slow reference implementations used only as test oracles."""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations

from flatframe import linalg
from flatframe.rootsystem import reflect


def leibniz_det(m):
    n = len(m)
    total = Fraction(0)
    for p in permutations(range(n)):
        term = Fraction(linalg.permutation_sign(p))
        for i in range(n):
            term *= m[i][p[i]]
            if not term:
                break
        total += term
    return total


def weyl_group_maps(rs):
    """Weyl group elements as tuples of images of a fixed basis (exact)."""
    dim = rs.ambient_dim
    basis = [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
    start = tuple(basis)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for g in frontier:
            for a in rs.simple_roots:
                h = tuple(reflect(a, v) for v in g)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return list(seen)


def apply(g, v):
    dim = len(v)
    return tuple(sum(v[i] * g[i][k] for i in range(dim)) for k in range(dim))


def brute_frame_orbits(rs, lines):
    """Number of Weyl orbits on unordered independent sets of ``rank`` lines."""
    group = weyl_group_maps(rs)
    remaining = set()
    for combo in combinations(lines, rs.rank):
        if linalg.rank(list(combo)) == rs.rank:
            remaining.add(frozenset(combo))
    orbits = 0
    while remaining:
        f = remaining.pop()
        orbits += 1
        for g in group:
            remaining.discard(frozenset(linalg.primitive(apply(g, v)) for v in f))
    return orbits


def hall_ok(rows, demands):
    for k in range(1, len(rows) + 1):
        for sub in combinations(range(len(rows)), k):
            u = 0
            for i in sub:
                u |= rows[i]
            if u.bit_count() < sum(demands[i] for i in sub):
                return False
    return True

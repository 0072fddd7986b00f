"""Restricted root systems in exact integer coordinates.

A root system is built from a hard-coded list of simple roots and closed
under the simple reflections.  For ``BC_n`` the doubled roots ``2e_i`` are
appended afterwards since reflections never produce them from the simple
roots.  Coordinates are integers throughout; F4 and the E-series use doubled
coordinates to clear the halves.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import OrbitBudgetExceeded

IntVector = tuple[int, ...]

ORBIT_TAGS = ("short", "middle", "long", "doubled")
DEFAULT_ORBIT_CAP = 200_000


@dataclass(frozen=True)
class RestrictedRoot:
    vector: IntVector
    multiplicity: int
    orbit_tag: str
    coefficients: tuple[int, ...]

    @property
    def height(self) -> int:
        return sum(self.coefficients)


def _unit(d: int, i: int, scale: int = 1) -> list[int]:
    v = [0] * d
    v[i] = scale
    return v


def _sub(d: int, i: int, j: int) -> IntVector:
    v = [0] * d
    v[i] += 1
    v[j] -= 1
    return tuple(v)


def _simple_roots(type_label: str, rank: int) -> tuple[int, list[IntVector]]:
    """Ambient dimension and simple roots for a reduced type (BC uses B)."""
    n = rank
    if type_label == "A":
        return n + 1, [_sub(n + 1, i, i + 1) for i in range(n)]
    if type_label in ("B", "BC"):
        return n, [_sub(n, i, i + 1) for i in range(n - 1)] + [tuple(_unit(n, n - 1))]
    if type_label == "C":
        return n, [_sub(n, i, i + 1) for i in range(n - 1)] + [tuple(_unit(n, n - 1, 2))]
    if type_label == "D":
        if n < 2:
            raise ValueError("D_n needs n >= 2")
        last = [0] * n
        last[n - 2] = last[n - 1] = 1
        return n, [_sub(n, i, i + 1) for i in range(n - 1)] + [tuple(last)]
    if type_label == "G":
        return 3, [(1, -1, 0), (-2, 1, 1)]
    if type_label == "F":
        return 4, [(0, 2, -2, 0), (0, 0, 2, -2), (0, 0, 0, 2), (1, -1, -1, -1)]
    if type_label == "E":
        e8 = [(1, -1, -1, -1, -1, -1, -1, 1), (2, 2, 0, 0, 0, 0, 0, 0)]
        for i in range(6):
            v = [0] * 8
            v[i] = -2
            v[i + 1] = 2
            e8.append(tuple(v))
        return 8, e8[:n]
    raise ValueError(f"unknown root system type {type_label!r}")


def reflect(alpha: Sequence[int], v: Sequence[Fraction | int]) -> tuple[Fraction, ...]:
    """Reflection of ``v`` in the hyperplane orthogonal to ``alpha``."""
    c = Fraction(2 * linalg.dot(alpha, v), linalg.dot(alpha, alpha))
    return tuple(Fraction(x) - c * a for x, a in zip(v, alpha))


def _reflect_int(alpha: Sequence[int], norm: int, v: IntVector) -> IntVector:
    num = 2 * sum(a * x for a, x in zip(alpha, v))
    if num % norm:
        raise ArithmeticError("reflection left the integer lattice")
    c = num // norm
    return tuple(x - c * a for x, a in zip(v, alpha))


@dataclass(frozen=True)
class RestrictedRootSystem:
    """Positive restricted roots with multiplicities.

    ``positive_roots`` is in canonical order (height, then coefficient
    vector, with the first simple root first).  ``simple_indices`` point into
    it.  Components of a product are glued block-diagonally, so the type
    label of a product is the ``"x"``-joined label of its factors.
    """

    type_label: str
    rank: int
    ambient_dim: int
    positive_roots: tuple[RestrictedRoot, ...]
    simple_roots: tuple[IntVector, ...]
    components: tuple[tuple[int, int], ...] = field(default=())

    @property
    def simple_indices(self) -> tuple[int, ...]:
        lookup = {r.vector: i for i, r in enumerate(self.positive_roots)}
        return tuple(lookup[s] for s in self.simple_roots)

    @property
    def total_multiplicity(self) -> int:
        return sum(r.multiplicity for r in self.positive_roots)

    def reflect(self, i: int, v: Sequence[Fraction | int]) -> tuple[Fraction, ...]:
        return reflect(self.simple_roots[i], v)

    def weyl_generators(self):
        """The simple reflections as callables on exact vectors."""
        return [lambda v, a=a: reflect(a, v) for a in self.simple_roots]

    def simple_values(self, v: Sequence[Fraction | int]) -> tuple[Fraction | int, ...]:
        return tuple(linalg.dot(a, v) for a in self.simple_roots)

    def in_span(self, v: Sequence[Fraction | int]) -> bool:
        return linalg.rank(list(self.simple_roots) + [list(v)]) == self.rank

    def multiplicity_table(self) -> dict[str, int]:
        table: dict[str, int] = {}
        for r in self.positive_roots:
            table.setdefault(r.orbit_tag, r.multiplicity)
        return table


def _saturate(simple: Sequence[IntVector]) -> dict[IntVector, tuple[int, ...]]:
    """All roots, each with its coefficients over the simple roots.

    ``s_i(v) = v - c * alpha_i`` only changes coefficient ``i``, so the
    coefficients ride along the reflection closure.
    """
    norms = [linalg.dot(a, a) for a in simple]
    n = len(simple)
    roots = {a: tuple(int(k == i) for k in range(n)) for i, a in enumerate(simple)}
    queue = deque(simple)
    while queue:
        v = queue.popleft()
        cv = roots[v]
        for i, (a, nrm) in enumerate(zip(simple, norms)):
            w = _reflect_int(a, nrm, v)
            if w not in roots:
                # w = v - k * a; read k off a coordinate where a is nonzero
                j = next(j for j, x in enumerate(a) if x)
                c = list(cv)
                c[i] -= (v[j] - w[j]) // a[j]
                roots[w] = tuple(c)
                queue.append(w)
    return roots


def build_root_system(type_label: str, rank: int, multiplicities: dict[str, int]) -> RestrictedRootSystem:
    """Construct an irreducible restricted root system with multiplicities.

    ``type_label`` is one of ``A B C D BC E F G``; ``multiplicities`` maps
    orbit tags to positive integers.
    """
    ambient, simple = _simple_roots(type_label, rank)
    positives = [(v, c) for v, c in _saturate(simple).items() if all(x >= 0 for x in c)]
    doubled: set[IntVector] = set()
    if type_label == "BC":
        for v, c in list(positives):
            if linalg.dot(v, v) == 1:
                w = tuple(2 * x for x in v)
                positives.append((w, tuple(2 * x for x in c)))
                doubled.add(w)
    lengths = sorted({linalg.dot(v, v) for v, _ in positives if v not in doubled})

    def tag(v: IntVector) -> str:
        if v in doubled:
            return "doubled"
        if type_label == "BC":
            return "short" if linalg.dot(v, v) == 1 else "middle"
        if len(lengths) == 1:
            return "long"
        return "short" if linalg.dot(v, v) == lengths[0] else "long"

    out = []
    for v, c in positives:
        t = tag(v)
        if t not in multiplicities:
            raise ValueError(f"no multiplicity given for {t} roots of {type_label}{rank}")
        m = multiplicities[t]
        if m < 1:
            raise ValueError("multiplicities must be positive")
        out.append(RestrictedRoot(v, m, t, c))
    out.sort(key=lambda r: (r.height, tuple(-x for x in r.coefficients)))
    return RestrictedRootSystem(
        type_label=f"{type_label}{rank}",
        rank=rank,
        ambient_dim=ambient,
        positive_roots=tuple(out),
        simple_roots=tuple(simple),
        components=((0, ambient),),
    )


def product(systems: Sequence[RestrictedRootSystem]) -> RestrictedRootSystem:
    """Block-diagonal product; roots of factor k are padded with zeros."""
    total_dim = sum(s.ambient_dim for s in systems)
    roots: list[RestrictedRoot] = []
    simple: list[IntVector] = []
    components = []
    offset = 0
    coeff_offset = 0
    total_rank = sum(s.rank for s in systems)
    for s in systems:
        def pad(v, off=offset, d=s.ambient_dim):
            return (0,) * off + tuple(v) + (0,) * (total_dim - off - d)

        for r in s.positive_roots:
            c = (0,) * coeff_offset + r.coefficients + (0,) * (total_rank - coeff_offset - s.rank)
            roots.append(RestrictedRoot(pad(r.vector), r.multiplicity, r.orbit_tag, c))
        simple.extend(pad(a) for a in s.simple_roots)
        components.append((offset, offset + s.ambient_dim))
        offset += s.ambient_dim
        coeff_offset += s.rank
    roots.sort(key=lambda r: (r.height, tuple(-x for x in r.coefficients)))
    return RestrictedRootSystem(
        type_label="x".join(s.type_label for s in systems),
        rank=total_rank,
        ambient_dim=total_dim,
        positive_roots=tuple(roots),
        simple_roots=tuple(simple),
        components=tuple(components),
    )


def fundamental_coweights(rs: RestrictedRootSystem) -> list[tuple[Fraction, ...]]:
    """Vectors ``w_j`` in the span of the roots with ``<alpha_i, w_j> = delta_ij``."""
    simple = rs.simple_roots
    gram = [[linalg.dot(a, b) for b in simple] for a in simple]
    result = []
    for j in range(rs.rank):
        rhs = [1 if i == j else 0 for i in range(rs.rank)]
        coeffs = linalg.solve(gram, rhs)
        w = tuple(sum(c * a[k] for c, a in zip(coeffs, simple)) for k in range(rs.ambient_dim))
        result.append(w)
    return result


def weyl_orbit(rs: RestrictedRootSystem, v: Sequence[Fraction | int],
               cap: int = DEFAULT_ORBIT_CAP) -> set[tuple[Fraction, ...]]:
    """Orbit of ``v`` under the Weyl group, by breadth-first saturation."""
    start = tuple(Fraction(x) for x in v)
    seen = {start}
    queue = deque([start])
    gens = rs.simple_roots
    while queue:
        x = queue.popleft()
        for a in gens:
            y = reflect(a, x)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise OrbitBudgetExceeded(f"orbit exceeds cap {cap}")
                queue.append(y)
    return seen


def line_orbit(rs: RestrictedRootSystem, v: Sequence[Fraction | int],
               cap: int = DEFAULT_ORBIT_CAP) -> list[IntVector]:
    """Orbit of the line through ``v``; each line as its primitive normal form."""
    start = linalg.primitive(v)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for a in rs.simple_roots:
            y = linalg.primitive(reflect(a, x))
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise OrbitBudgetExceeded(f"line orbit exceeds cap {cap}")
                queue.append(y)
    return sorted(seen)

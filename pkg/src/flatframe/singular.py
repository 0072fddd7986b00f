"""Maximally singular rays, ``dim Q_v`` and frame reduction.

``Q_v`` is the sum of the root spaces ``p_alpha`` with ``alpha(v) != 0``, so
every quantity here is a multiplicity-weighted count over positive roots.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import linalg
from .catalog import SpaceDescriptor
from .errors import NoAdmissibleRay, NotAFrame, NotRankTwo, ZeroVector
from .rootsystem import fundamental_coweights, line_orbit

Vector = Sequence[int | Fraction]


@dataclass(frozen=True)
class SingularRay:
    vector: tuple[int, ...]
    vanishing_simple: frozenset[int]
    nonvanishing_roots: frozenset[int]


@dataclass(frozen=True)
class SingularizedFrame:
    vectors: tuple[tuple[int, ...], ...]
    containment: tuple[bool, ...]


def _check_nonzero(v: Vector) -> None:
    if not any(v):
        raise ZeroVector("v must be nonzero")


def nonvanishing_roots(desc: SpaceDescriptor, v: Vector) -> frozenset[int]:
    """Indices (canonical order) of positive roots with ``alpha(v) != 0``."""
    _check_nonzero(v)
    return frozenset(i for i, r in enumerate(desc.root_system.positive_roots)
                     if linalg.dot(r.vector, v) != 0)


@lru_cache(maxsize=None)
def maximally_singular_rays(desc: SpaceDescriptor) -> tuple[SingularRay, ...]:
    """One primitive ray per edge of the closed positive chamber.

    Each ray is the fundamental coweight ``w_j`` scaled by a positive factor,
    so it stays inside the chamber.
    """
    rs = desc.root_system
    out = []
    for j, w in enumerate(fundamental_coweights(rs)):
        den = 1
        for x in w:
            den = den * x.denominator // _gcd(den, x.denominator)
        ints = [int(x * den) for x in w]
        g = 0
        for x in ints:
            g = _gcd(g, abs(x))
        vec = tuple(x // g for x in ints)
        vanishing = frozenset(i for i in range(rs.rank) if i != j)
        out.append(SingularRay(vec, vanishing, nonvanishing_roots(desc, vec)))
    return tuple(out)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def q_dim(desc: SpaceDescriptor, v: Vector) -> int:
    _check_nonzero(v)
    return sum(r.multiplicity for r in desc.root_system.positive_roots if linalg.dot(r.vector, v) != 0)


def q_intersection_dim(desc: SpaceDescriptor, v: Vector, w: Vector) -> int:
    _check_nonzero(v)
    _check_nonzero(w)
    return sum(r.multiplicity for r in desc.root_system.positive_roots
               if linalg.dot(r.vector, v) != 0 and linalg.dot(r.vector, w) != 0)


def min_qdim(desc: SpaceDescriptor) -> int:
    return min(q_dim(desc, r.vector) for r in maximally_singular_rays(desc))


def t_invariant(desc: SpaceDescriptor) -> int:
    return desc.dim_x - min_qdim(desc)


def degree_bound(desc: SpaceDescriptor) -> int:
    """``max(6, t_X + 2)`` for an irreducible rank-2 space."""
    if desc.rank != 2 or desc.is_product:
        raise NotRankTwo(f"{desc.id} is not an irreducible rank-2 space")
    return max(6, t_invariant(desc) + 2)


def is_exceptional(desc: SpaceDescriptor) -> bool:
    """True when ``degree_bound`` differs from ``t_X + 2``."""
    return degree_bound(desc) != t_invariant(desc) + 2


@lru_cache(maxsize=None)
def singular_lines(desc: SpaceDescriptor) -> tuple[tuple[int, ...], ...]:
    """Every maximally singular line, as sorted primitive normal forms."""
    lines: set[tuple[int, ...]] = set()
    for ray in maximally_singular_rays(desc):
        lines.update(line_orbit(desc.root_system, ray.vector))
    return tuple(sorted(lines))


def is_maximally_singular(desc: SpaceDescriptor, v: Vector) -> bool:
    return linalg.primitive(v) in set(singular_lines(desc))


def _check_frame(desc: SpaceDescriptor, vectors: Sequence[Vector]) -> None:
    rs = desc.root_system
    if len(vectors) != rs.rank:
        raise NotAFrame(f"a frame of {desc.id} has {rs.rank} vectors, got {len(vectors)}")
    for v in vectors:
        if len(v) != rs.ambient_dim:
            raise NotAFrame(f"vector {tuple(v)} has wrong length for {desc.id}")
        if not any(v) or not rs.in_span(v):
            raise NotAFrame(f"vector {tuple(v)} is not a nonzero vector of the flat")
    if linalg.rank(vectors) != rs.rank:
        raise NotAFrame("vectors are linearly dependent")


def _cos2(v: Vector, w: Vector) -> Fraction:
    return Fraction(linalg.dot(v, w) ** 2) / (linalg.dot(v, v) * linalg.dot(w, w))


def singularize_frame(desc: SpaceDescriptor, frame: Sequence[Vector]) -> SingularizedFrame:
    """Replace each frame vector by a nearby maximally singular line.

    For ``v_i`` in order, candidates are lines outside the span of the lines
    already chosen whose nonvanishing root set lies inside that of ``v_i``.
    Among those the largest squared cosine to ``v_i`` wins, then the
    canonical line order.
    """
    _check_frame(desc, frame)
    lines = singular_lines(desc)
    nv = {ln: nonvanishing_roots(desc, ln) for ln in lines}
    chosen: list[tuple[int, ...]] = []
    witness = []
    for i, v in enumerate(frame):
        target = nonvanishing_roots(desc, v)
        best = None
        best_key = None
        for ln in lines:
            if not nv[ln] <= target:
                continue
            if linalg.rank(chosen + [ln]) != len(chosen) + 1:
                continue
            key = -_cos2(ln, v)
            if best_key is None or key < best_key:
                best, best_key = ln, key
        if best is None:
            raise NoAdmissibleRay(f"no admissible maximally singular line for vector {i}")
        chosen.append(best)
        witness.append(nv[best] <= target)
    return SingularizedFrame(tuple(chosen), tuple(witness))

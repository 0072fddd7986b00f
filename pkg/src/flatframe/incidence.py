"""Incidence matrices of frames and enumeration of singular frames.

Rows are stored as Python ints used as bit sets: bit ``j`` is column ``j``.
Columns are the root-space basis vectors, one block per positive root in
canonical order, ``multiplicity`` copies per block.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from . import linalg
from .catalog import SpaceDescriptor
from .errors import BudgetExceeded, MalformedMatrix, NotAFrame, OrbitBudgetExceeded
from .linalg import det_expansion  # noqa: F401  (re-exported)
from .rootsystem import reflect
from .singular import _check_frame, q_intersection_dim, singular_lines

GROUP_CAP = 200_000


@dataclass(frozen=True)
class ColumnBasis:
    entries: tuple[tuple[int, int], ...]
    block_masks: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.entries)


@lru_cache(maxsize=None)
def column_basis(desc: SpaceDescriptor) -> ColumnBasis:
    entries = []
    masks = []
    for i, r in enumerate(desc.root_system.positive_roots):
        start = len(entries)
        entries.extend((i, c) for c in range(r.multiplicity))
        masks.append(((1 << r.multiplicity) - 1) << start)
    return ColumnBasis(tuple(entries), tuple(masks))


@dataclass(frozen=True)
class IncidenceRow:
    bits: int
    n_cols: int
    owner: tuple

    @property
    def popcount(self) -> int:
        return self.bits.bit_count()

    def as_list(self) -> list[int]:
        return [(self.bits >> j) & 1 for j in range(self.n_cols)]


@dataclass
class IncidenceMatrix:
    rows: list[int]
    n_cols: int
    demands: list[int] = field(default_factory=list)
    space: str | None = None
    frame: list[list[int]] | None = None

    def __post_init__(self) -> None:
        if not self.demands:
            self.demands = [3] * len(self.rows)
        if len(self.demands) != len(self.rows):
            raise MalformedMatrix("one demand per row is required")
        if any(d < 1 for d in self.demands):
            raise MalformedMatrix("demands must be positive")
        if self.n_cols < 0 or any(r < 0 or r >> self.n_cols for r in self.rows):
            raise MalformedMatrix("row has bits outside the column range")

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def row_list(self, i: int) -> list[int]:
        return [(self.rows[i] >> j) & 1 for j in range(self.n_cols)]

    def as_lists(self) -> list[list[int]]:
        return [self.row_list(i) for i in range(self.n_rows)]

    def support(self, i: int) -> list[int]:
        r = self.rows[i]
        return [j for j in range(self.n_cols) if (r >> j) & 1]

    def nonzero_columns(self) -> int:
        acc = 0
        for r in self.rows:
            acc |= r
        return acc.bit_count()

    def private_count(self, i: int) -> int:
        """Number of 1s in row ``i`` shared with no other row."""
        others = 0
        for k, r in enumerate(self.rows):
            if k != i:
                others |= r
        return (self.rows[i] & ~others).bit_count()

    def to_json(self) -> dict:
        return {
            "space": self.space,
            "frame": self.frame,
            "rows": self.as_lists(),
            "demands": list(self.demands),
        }

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]], demands: Sequence[int] | None = None,
                   space: str | None = None, frame=None) -> "IncidenceMatrix":
        if not rows:
            raise MalformedMatrix("matrix has no rows")
        n = len(rows[0])
        masks = []
        for row in rows:
            if len(row) != n:
                raise MalformedMatrix("rows have different lengths")
            bits = 0
            for j, x in enumerate(row):
                if x not in (0, 1):
                    raise MalformedMatrix(f"entry {x!r} is not 0 or 1")
                if x:
                    bits |= 1 << j
            masks.append(bits)
        return cls(masks, n, list(demands) if demands else [], space,
                   [list(v) for v in frame] if frame else None)

    @classmethod
    def from_json(cls, data: dict | str) -> "IncidenceMatrix":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict) or "rows" not in data:
            raise MalformedMatrix("matrix JSON needs a 'rows' field")
        return cls.from_lists(data["rows"], data.get("demands"), data.get("space"), data.get("frame"))


def row_vector(desc: SpaceDescriptor, v: Sequence) -> IncidenceRow:
    from .singular import nonvanishing_roots

    basis = column_basis(desc)
    bits = 0
    for i in nonvanishing_roots(desc, v):
        bits |= basis.block_masks[i]
    return IncidenceRow(bits, len(basis), tuple(v))


def incidence_matrix(desc: SpaceDescriptor, frame: Sequence[Sequence], demands: Sequence[int] | None = None,
                     check: bool = True) -> IncidenceMatrix:
    _check_frame(desc, frame)
    rows = [row_vector(desc, v) for v in frame]
    m = IncidenceMatrix([r.bits for r in rows], len(column_basis(desc)), list(demands or []), desc.id,
                        [[int(x) for x in v] if all(float(x).is_integer() for x in v) else [str(x) for x in v]
                         for v in frame])
    if check:
        union = 0
        for r in m.rows:
            union |= r
        if union != (1 << m.n_cols) - 1:
            raise AssertionError("a column of a frame's incidence matrix is zero")
        for a, b in combinations(range(len(frame)), 2):
            if (m.rows[a] & m.rows[b]).bit_count() != q_intersection_dim(desc, frame[a], frame[b]):
                raise AssertionError("row overlap disagrees with dim(Q_v ∩ Q_w)")
    return m


# --- frame enumeration ---------------------------------------------------

@lru_cache(maxsize=None)
def line_permutations(desc: SpaceDescriptor) -> tuple[tuple[tuple[int, ...], ...], np.ndarray]:
    """Maximally singular lines and the Weyl group acting on their indices.

    Returns ``(lines, G)`` where row ``g`` of ``G`` maps line index ``i`` to
    ``G[g, i]``.  The group is the closure of the simple reflections.
    """
    lines = singular_lines(desc)
    index = {ln: i for i, ln in enumerate(lines)}
    gens = []
    for a in desc.root_system.simple_roots:
        gens.append(tuple(index[linalg.primitive(reflect(a, ln))] for ln in lines))
    ident = tuple(range(len(lines)))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[x] for x in p)
                if q not in seen:
                    seen.add(q)
                    if len(seen) > GROUP_CAP:
                        raise OrbitBudgetExceeded(f"Weyl group of {desc.id} exceeds {GROUP_CAP} elements")
                    nxt.append(q)
        frontier = nxt
    group = np.array(sorted(seen), dtype=np.int64)
    return lines, group


class _OrbitKeys:
    """Bitmask images of every line under every group element.

    Line ``i`` is bit ``63 - i % 64`` of word ``i // 64``, so comparing the
    word tuples of two equal-size sets lexicographically, larger first, is
    the same as comparing their sorted index tuples, smaller first.  The
    canonical form of a set is then a plain maximum over the group.
    """

    def __init__(self, group: np.ndarray, n_lines: int):
        self.n = n_lines
        self.n_words = (n_lines + 63) // 64
        words = group // 64
        bits = np.left_shift(np.uint64(1), (63 - group % 64).astype(np.uint64))
        self.images = [np.where(words == w, bits, np.uint64(0)) for w in range(self.n_words)]

    def extensions(self, rep: tuple[int, ...]) -> set[tuple[int, ...]]:
        """Canonical keys of ``rep + {l}`` for every line ``l`` outside ``rep``."""
        cand = [l for l in range(self.n) if l not in rep]
        if not cand:
            return set()
        keep = None
        best = []
        for img in self.images:
            base = np.bitwise_or.reduce(img[:, list(rep)], axis=1) if rep else np.zeros(img.shape[0], np.uint64)
            full = img[:, cand] | base[:, None]
            if keep is not None:
                full = np.where(keep, full, np.uint64(0))
            top = full.max(axis=0)
            keep = (full == top) if keep is None else keep & (full == top)
            best.append(top)
        return set(zip(*(b.tolist() for b in best)))

    def decode(self, key: tuple[int, ...]) -> tuple[int, ...]:
        idx = []
        for w, value in enumerate(key):
            while value:
                b = value.bit_length() - 1
                idx.append(w * 64 + 63 - b)
                value ^= 1 << b
        return tuple(idx)


class FrameStream:
    """Iterable over frames; ``budget_exceeded`` is set if the budget cut it short."""

    def __init__(self, frames: Iterator[tuple[tuple[int, ...], ...]], budget: int | None):
        self._frames = frames
        self.budget = budget
        self.budget_exceeded = False
        self.count = 0

    def __iter__(self):
        for f in self._frames:
            if self.budget is not None and self.count >= self.budget:
                self.budget_exceeded = True
                return
            self.count += 1
            yield f

    def take_all(self) -> list:
        out = list(self)
        if self.budget_exceeded:
            raise BudgetExceeded(f"frame budget {self.budget} exhausted after {self.count} frames")
        return out


@lru_cache(maxsize=None)
def frame_orbit_representatives(desc: SpaceDescriptor) -> tuple[tuple[int, ...], ...]:
    """Canonical line-index tuples, one per Weyl orbit of singular frames."""
    lines, group = line_permutations(desc)
    n = len(lines)
    r = desc.rank
    keys = _OrbitKeys(group, n)
    level: set[tuple[int, ...]] = {()}
    for k in range(1, r + 1):
        nxt: set[tuple[int, ...]] = set()
        seen: set[tuple[int, ...]] = set()
        for rep in sorted(level):
            for key in keys.extensions(rep) - seen:
                seen.add(key)
                canon = keys.decode(key)
                if linalg.rank([lines[i] for i in canon]) == k:
                    nxt.add(canon)
        level = nxt
    return tuple(sorted(level))


def enumerate_singular_frames(desc: SpaceDescriptor, up_to_weyl: bool = True,
                              budget: int | None = None) -> FrameStream:
    """Frames of maximally singular lines, in a deterministic order.

    With ``up_to_weyl`` one frame per orbit of the diagonal Weyl action is
    produced; otherwise every independent unordered set of lines.
    """
    lines = singular_lines(desc)
    if up_to_weyl:
        reps = frame_orbit_representatives(desc)
        gen = (tuple(lines[i] for i in rep) for rep in reps)
    else:
        def all_frames():
            for combo in combinations(range(len(lines)), desc.rank):
                vecs = [lines[i] for i in combo]
                if linalg.rank(vecs) == desc.rank:
                    yield tuple(vecs)
        gen = all_frames()
    return FrameStream(gen, budget)


# --- product splitting ---------------------------------------------------

def _block_rank(vectors: Sequence[Sequence], lo: int, hi: int) -> int:
    return linalg.rank([list(v[lo:hi]) for v in vectors]) if vectors else 0


def split_product_frame(frame: Sequence[Sequence], n1: int, split_at: int | None = None) -> tuple[int, ...]:
    """Permutation ``tau`` splitting a product frame into factor frames.

    ``frame`` is a list of vectors in coordinates where the first factor
    occupies ``[0, split_at)`` (default ``n1``).  The first ``n1`` entries of
    ``tau`` index vectors whose first-factor projections form a frame; the
    rest project to a frame of the second factor.
    """
    n = len(frame)
    cut = n1 if split_at is None else split_at
    dim = len(frame[0]) if frame else 0
    if any(len(v) != dim for v in frame):
        raise NotAFrame("vectors have different lengths")
    if linalg.rank(frame) != n:
        raise NotAFrame("vectors are linearly dependent")
    n2 = n - n1
    for subset in combinations(range(n), n1):
        rest = [i for i in range(n) if i not in subset]
        if _block_rank([frame[i] for i in subset], 0, cut) != n1:
            continue
        if _block_rank([frame[i] for i in rest], cut, dim) == n2:
            return tuple(subset) + tuple(rest)
    raise NotAFrame("no admissible split; the factor dimensions do not match the frame")


def split_descriptor_frame(desc: SpaceDescriptor, frame: Sequence[Sequence]) -> tuple[int, ...]:
    """``split_product_frame`` for a two-or-more factor product descriptor.

    Splits off the first factor against the product of the rest.
    """
    if not desc.is_product:
        raise NotAFrame(f"{desc.id} is not a product")
    _check_frame(desc, frame)
    first = desc.factors[0]
    return split_product_frame(frame, first.rank, split_at=first.root_system.ambient_dim)

"""Staged greedy column matching.

Stage ``t`` sorts the remaining rows by their count ``N(i, t)`` of 1s in
columns not yet taken, serves the scarcest row, and deletes its columns.
``faithful`` stops at the first starving row, ``repair`` tries short
exchange chains through earlier choices, ``augmenting`` searches alternating
paths of any length and is therefore complete.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Sequence

from . import linalg
from .catalog import SpaceDescriptor
from .errors import MalformedMatrix, NotZExpressible, UnsupportedParams
from .incidence import IncidenceMatrix, incidence_matrix, row_vector

MODES = ("faithful", "repair", "augmenting")
REPAIR_DEPTH = 3


@dataclass(frozen=True)
class StageFailure:
    stage: int
    row: int
    remaining: int


@dataclass
class MatchResult:
    status: str
    assignment: list[list[int]]
    failure: StageFailure | None = None
    trace: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def matched(self) -> bool:
        return self.status == "matched"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "assignment": self.assignment,
            "trace": self.trace,
            "failure": None if self.failure is None else {
                "stage": self.failure.stage, "row": self.failure.row, "remaining": self.failure.remaining},
        }


def _as_matrix(A) -> IncidenceMatrix:
    if isinstance(A, IncidenceMatrix):
        return A
    return IncidenceMatrix.from_lists(A)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class _Engine:
    def __init__(self, A: IncidenceMatrix, mode: str):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        if A.n_rows == 0:
            raise MalformedMatrix("matrix has no rows")
        self.A = A
        self.mode = mode
        self.used = 0
        self.owner: dict[int, int] = {}
        self.chosen: dict[int, list[int]] = {}
        self.trace: list[dict] = []
        self.stage = 0

    def remaining_count(self, i: int) -> int:
        return (self.A.rows[i] & ~self.used).bit_count()

    def _take(self, row: int, col: int) -> None:
        self.used |= 1 << col
        self.owner[col] = row
        self.chosen.setdefault(row, []).append(col)

    def select(self, row: int, pending: Sequence[int], allowed: int | None = None) -> None:
        """Take up to ``demand`` free columns of ``row``.

        Private columns (not seen by any pending row) first, then the least
        covered, then the lowest index.  ``allowed`` narrows the preferred
        pool; the rest of the row is used only to top up.
        """
        free = self.A.rows[row] & ~self.used
        others = [self.A.rows[i] & ~self.used for i in pending if i != row]

        def rank_key(c: int) -> tuple[int, int]:
            return sum((o >> c) & 1 for o in others), c

        pools = [free] if allowed is None else [free & allowed, free & ~allowed]
        need = self.A.demands[row]
        picked: list[int] = []
        for pool in pools:
            for c in sorted(_bits(pool), key=rank_key):
                if len(picked) == need:
                    break
                picked.append(c)
        for c in picked:
            self._take(row, c)

    def _augment(self, row: int, depth: int | None) -> bool:
        """Find one more column for ``row`` by an alternating path.

        ``depth`` bounds the number of exchanges (earlier rows handing a
        column over and taking another); ``None`` means unbounded.
        Breadth-first, so the shortest chain wins.
        """
        rows = self.A.rows
        came: dict[int, tuple[int, int] | None] = {row: None}
        queue = deque([(row, 0)])
        while queue:
            r, d = queue.popleft()
            for c in _bits(rows[r]):
                holder = self.owner.get(c)
                if holder is None:
                    self._apply_path(r, c, came)
                    return True
                if holder in came or (depth is not None and d + 1 > depth):
                    continue
                came[holder] = (r, c)
                queue.append((holder, d + 1))
        return False

    def _apply_path(self, r: int, take: int, came: dict[int, tuple[int, int] | None]) -> None:
        moves = []
        while True:
            link = came[r]
            give = None if link is None else link[1]
            moves.append([r, take, give])
            if give is not None:
                self.chosen[r].remove(give)
            self.chosen.setdefault(r, []).append(take)
            self.owner[take] = r
            self.used |= 1 << take
            if link is None:
                break
            r, take = link[0], give
        self.trace.append({"stage": self.stage, "exchange": moves})

    def serve(self, row: int, pending: Sequence[int], allowed: int | None = None) -> StageFailure | None:
        self.stage += 1
        n_before = self.remaining_count(row)
        self.select(row, pending, allowed)
        got = len(self.chosen.get(row, ()))
        need = self.A.demands[row]
        if got < need and self.mode != "faithful":
            depth = REPAIR_DEPTH if self.mode == "repair" else None
            while got < need and self._augment(row, depth):
                got += 1
        self.trace.append({"stage": self.stage, "row": row, "remaining": n_before,
                           "columns": sorted(self.chosen.get(row, ()))})
        if got < need:
            return StageFailure(self.stage, row, n_before)
        return None

    def run_group(self, rows: Sequence[int], allowed: dict[int, int] | None = None) -> StageFailure | None:
        pending = list(rows)
        while pending:
            pending.sort(key=lambda i: (self.remaining_count(i), i))
            top = pending[0]
            fail = self.serve(top, pending, None if allowed is None else allowed.get(top))
            pending.pop(0)
            if fail:
                return fail
        return None

    def result(self, failure: StageFailure | None, notes: list[str] | None = None) -> MatchResult:
        assignment = [sorted(self.chosen.get(i, ())) for i in range(self.A.n_rows)]
        status = "failed" if failure else "matched"
        return MatchResult(status, assignment, failure, self.trace, notes or [])


def staged_greedy(A, mode: str = "faithful") -> MatchResult:
    A = _as_matrix(A)
    eng = _Engine(A, mode)
    return eng.result(eng.run_group(range(A.n_rows)))


# --- SL(n+1, R) two-phase variant ---------------------------------------

@dataclass(frozen=True)
class ZDecomposition:
    base_rays: tuple[tuple[int, ...], ...]
    assignment: tuple[tuple[int, int | None], ...]
    columns: tuple[int, ...]
    permutation: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]


def _require_sl_real(desc: SpaceDescriptor) -> int:
    if desc.family != "SL" or desc.params[1] != "R" or desc.is_product:
        raise UnsupportedParams(f"{desc.id} is not SL(n+1,R)")
    return desc.rank


def base_rays(desc: SpaceDescriptor) -> tuple[tuple[int, ...], ...]:
    """``z_k = (n+1) e_k - (1, ..., 1)``: the Weyl images of the minimal vertex."""
    n1 = _require_sl_real(desc) + 1
    return tuple(tuple((n1 if j == k else 0) - 1 for j in range(n1)) for k in range(n1))


def z_coordinates(desc: SpaceDescriptor, v: Sequence) -> tuple[int, ...]:
    """Coordinates of the line of ``v`` as ``z_i`` or ``z_i + z_j``."""
    zs = base_rays(desc)
    n1 = len(zs)
    line = linalg.primitive(v)
    for i in range(n1):
        if linalg.primitive(zs[i]) == line:
            return tuple(int(k == i) for k in range(n1))
    for i, j in combinations(range(n1), 2):
        s = [a + b for a, b in zip(zs[i], zs[j])]
        if linalg.primitive(s) == line:
            return tuple(int(k in (i, j)) for k in range(n1))
    raise NotZExpressible(f"{tuple(v)} is neither z_i nor z_i + z_j up to sign and scale")


def z_decompose(desc: SpaceDescriptor, frame: Sequence[Sequence]) -> ZDecomposition:
    """Relabel ``z`` so that frame vector ``i`` owns a distinct first ray.

    Finds a nonsingular ``p x p`` submatrix of the coordinate matrix by exact
    minor search; a nonzero term of its Leibniz expansion gives the labels.
    """
    zs = base_rays(desc)
    mat = [z_coordinates(desc, v) for v in frame]
    p = len(mat)
    for cols in combinations(range(len(zs)), p):
        sub = [[row[c] for c in cols] for row in mat]
        if linalg.det(sub) == 0:
            continue
        for perm in permutations(range(p)):
            if all(sub[i][perm[i]] for i in range(p)):
                break
        assignment = []
        for i in range(p):
            first = cols[perm[i]]
            others = [k for k, x in enumerate(mat[i]) if x and k != first]
            assignment.append((first, others[0] if others else None))
        return ZDecomposition(zs, tuple(assignment), cols, perm, tuple(mat))
    raise NotZExpressible("coordinate matrix has no nonsingular maximal minor")


def sl_two_phase(desc: SpaceDescriptor, frame: Sequence[Sequence], mode: str = "repair") -> MatchResult:
    """Two-phase staged algorithm for frames of SL(n+1, R), n >= 5.

    Phase one serves rows with ``n`` ones, phase two rows with ``2n - 2``
    ones restricted first to ``Q_z`` of their first ray, and the remaining
    rows are finished by the plain stages.
    """
    n = _require_sl_real(desc)
    if n < 5:
        raise UnsupportedParams("the two-phase algorithm needs n >= 5")
    A = incidence_matrix(desc, frame)
    counts = [r.bit_count() for r in A.rows]
    small = [i for i in range(A.n_rows) if counts[i] <= 2 * n - 2]
    try:
        zd = z_decompose(desc, [frame[i] for i in small])
    except NotZExpressible as exc:
        res = staged_greedy(A, "augmenting")
        res.notes.append(f"fallback to augmenting: {exc}")
        return res
    allowed = {}
    for i, (first, _) in zip(small, zd.assignment):
        allowed[i] = row_vector(desc, zd.base_rays[first]).bits
    eng = _Engine(A, mode)
    phase1 = [i for i in small if counts[i] == n]
    phase2 = [i for i in small if counts[i] != n]
    rest = [i for i in range(A.n_rows) if i not in small]
    for rows, restrict in ((phase1, None), (phase2, allowed), (rest, None)):
        fail = eng.run_group(rows, restrict)
        if fail:
            return eng.result(fail)
    return eng.result(None)

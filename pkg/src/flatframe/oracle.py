"""Exact feasibility, certificates and per-space certification.

A matrix is feasible when every row ``i`` can get ``demand[i]`` distinct
columns from its support.  That is a max-flow question; when the flow falls
short the source side of a minimum cut is a row set violating Hall's
condition, which is returned as a checkable certificate.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import networkx as nx

from . import linalg
from .catalog import SpaceDescriptor, lookup
from .errors import MalformedMatrix, UnsupportedProfile
from .incidence import (IncidenceMatrix, enumerate_singular_frames, frame_orbit_representatives,
                        incidence_matrix, split_descriptor_frame)
from .matcher import MatchResult, staged_greedy
from .singular import maximally_singular_rays, min_qdim, singular_lines

EXHAUSTIVE_MAX_RANK = 6


@dataclass(frozen=True)
class InfeasibilityCertificate:
    row_subset: tuple[int, ...]
    neighborhood_size: int
    demand_sum: int

    def verify(self, A: IncidenceMatrix) -> bool:
        """Recount ``|N(S)|`` and the demand sum directly from ``A``."""
        if not self.row_subset or any(i < 0 or i >= A.n_rows for i in self.row_subset):
            return False
        union = 0
        for i in self.row_subset:
            union |= A.rows[i]
        need = sum(A.demands[i] for i in self.row_subset)
        return (union.bit_count() == self.neighborhood_size and need == self.demand_sum
                and self.neighborhood_size < self.demand_sum)

    def to_json(self) -> dict:
        return {"row_subset": list(self.row_subset), "neighborhood_size": self.neighborhood_size,
                "demand_sum": self.demand_sum}


def _as_matrix(A) -> IncidenceMatrix:
    return A if isinstance(A, IncidenceMatrix) else IncidenceMatrix.from_lists(A)


def feasible_matching(A) -> MatchResult | InfeasibilityCertificate:
    A = _as_matrix(A)
    if A.n_rows == 0:
        raise MalformedMatrix("matrix has no rows")
    g = nx.DiGraph()
    for i, row in enumerate(A.rows):
        g.add_edge("s", ("r", i), capacity=A.demands[i])
        for j in range(A.n_cols):
            if (row >> j) & 1:
                # uncapacitated middle edges make the min cut a Hall violator
                g.add_edge(("r", i), ("c", j))
    for j in range(A.n_cols):
        g.add_edge(("c", j), "t", capacity=1)
    total = sum(A.demands)
    if g.has_node("t"):
        value, flow = nx.maximum_flow(g, "s", "t")
    else:
        value, flow = 0, {}
    if value == total:
        assignment = []
        for i in range(A.n_rows):
            out = flow[("r", i)]
            assignment.append(sorted(node[1] for node, f in out.items() if f > 0))
        return MatchResult("matched", assignment)
    if g.has_node("t"):
        _, (source_side, _) = nx.minimum_cut(g, "s", "t")
        subset = tuple(sorted(n[1] for n in source_side if isinstance(n, tuple) and n[0] == "r"))
    else:
        subset = tuple(range(A.n_rows))
    union = 0
    for i in subset:
        union |= A.rows[i]
    return InfeasibilityCertificate(subset, union.bit_count(), sum(A.demands[i] for i in subset))


def hall_violator_bruteforce(A) -> tuple[int, ...] | None:
    """Smallest-first search over all row subsets; reference for tests."""
    A = _as_matrix(A)
    for k in range(1, A.n_rows + 1):
        for subset in combinations(range(A.n_rows), k):
            union = 0
            for i in subset:
                union |= A.rows[i]
            if union.bit_count() < sum(A.demands[i] for i in subset):
                return subset
    return None


def verify_match(A, r: MatchResult) -> bool:
    A = _as_matrix(A)
    if r.status != "matched" or len(r.assignment) != A.n_rows:
        return False
    seen: set[int] = set()
    for i, cols in enumerate(r.assignment):
        if len(cols) != A.demands[i] or len(set(cols)) != len(cols):
            return False
        for c in cols:
            if not (0 <= c < A.n_cols) or not (A.rows[i] >> c) & 1 or c in seen:
                return False
            seen.add(c)
    return True


# --- certification -------------------------------------------------------

@dataclass
class CertificationReport:
    space_id: str
    status: str
    frames_examined: int = 0
    counterexample: tuple | None = None  # (frame, matrix, certificate)
    greedy_agreement: float | None = None
    method: str = ""
    details: dict = field(default_factory=dict)
    factors: list["CertificationReport"] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "space_id": self.space_id,
            "status": self.status,
            "method": self.method,
            "frames_examined": self.frames_examined,
            "greedy_agreement": self.greedy_agreement,
            "details": self.details,
            "counterexample": None,
        }
        if self.counterexample:
            frame, A, cert = self.counterexample
            out["counterexample"] = {"frame": [list(v) for v in frame], "matrix": A.to_json(),
                                     "certificate": cert.to_json()}
        if self.factors:
            out["factors"] = [f.to_json() for f in self.factors]
        return out


def parabolic_max(desc: SpaceDescriptor, k: int) -> int:
    """Largest multiplicity sum of the positive roots inside a ``k``-dim subspace.

    The roots inside any subspace are the roots vanishing on one generic
    vector of its orthogonal complement, which is conjugate to a standard
    parabolic subsystem, so it is enough to scan ``k``-subsets of simple
    roots.
    """
    if k <= 0:
        return 0
    roots = desc.root_system.positive_roots
    best = 0
    for J in combinations(range(desc.rank), k):
        js = set(J)
        total = sum(r.multiplicity for r in roots
                    if all(c == 0 or i in js for i, c in enumerate(r.coefficients)))
        best = max(best, total)
    return best


def counting_bounds(desc: SpaceDescriptor) -> dict[int, str | None]:
    """For each subset size ``s``, the argument bounding ``|N(S)| >= 3s``.

    ``N(S)`` contains ``Q_v`` for every ``v`` in ``S``, and it misses only
    roots vanishing on the ``s``-dimensional span of ``S``; those lie in an
    ``(r - s)``-dimensional subspace.
    """
    m = desc.n_columns
    r = desc.rank
    q = min_qdim(desc)
    out: dict[int, str | None] = {}
    for s in range(1, r + 1):
        lost = parabolic_max(desc, r - s)
        if 3 * s <= q:
            out[s] = f"min dim Q_v = {q} >= {3 * s}"
        elif m - lost >= 3 * s:
            out[s] = f"{m} - {lost} columns >= {3 * s}"
        else:
            out[s] = None
    return out


def _vertex_frame(desc: SpaceDescriptor) -> list[tuple[int, ...]]:
    return [linalg.primitive(ray.vector) for ray in maximally_singular_rays(desc)]


def _refute_whole(desc: SpaceDescriptor, method: str, details: dict) -> CertificationReport:
    frame = _vertex_frame(desc)
    A = incidence_matrix(desc, frame)
    res = feasible_matching(A)
    if not isinstance(res, InfeasibilityCertificate):
        raise AssertionError(f"{desc.id}: counting refutation but the vertex frame is feasible")
    return CertificationReport(desc.id, "refuted", 1, (tuple(frame), A, res), None, method, details)


def _check_frame(args) -> tuple[int, bool, bool, bool, InfeasibilityCertificate | None, IncidenceMatrix]:
    desc_id, idx, frame = args
    desc = lookup(desc_id)
    A = incidence_matrix(desc, frame)
    res = feasible_matching(A)
    if isinstance(res, InfeasibilityCertificate):
        return idx, False, False, False, res, A
    greedy = staged_greedy(A, "repair")
    aug = greedy.matched or staged_greedy(A, "augmenting").matched
    return idx, True, greedy.matched, aug, None, A


def _exhaustive(desc: SpaceDescriptor, budget: int | None, workers: int) -> CertificationReport:
    stream = enumerate_singular_frames(desc, up_to_weyl=True, budget=budget)
    frames = list(stream)
    jobs = [(desc.id, i, f) for i, f in enumerate(frames)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_check_frame, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    else:
        results = []
        for job in jobs:
            results.append(_check_frame(job))
            if not results[-1][1]:
                break
    results.sort(key=lambda t: t[0])
    feasible = greedy_ok = 0
    greedy_gaps = []
    for idx, ok, g_ok, aug_ok, cert, A in results:
        if not ok:
            examined = idx + 1
            return CertificationReport(desc.id, "refuted", examined, (frames[idx], A, cert),
                                       greedy_ok / feasible if feasible else None, "exhaustive",
                                       {"greedy_gaps": greedy_gaps})
        feasible += 1
        greedy_ok += g_ok
        if not g_ok:
            greedy_gaps.append({"frame": [list(v) for v in frames[idx]], "augmenting_matched": aug_ok})
    status = "budget_exhausted" if stream.budget_exceeded else "certified"
    return CertificationReport(desc.id, status, len(results),
                               None, greedy_ok / feasible if feasible else None, "exhaustive",
                               {"greedy_gaps": greedy_gaps,
                                "orbit_representatives": len(frame_orbit_representatives(desc))})


def _pad(desc: SpaceDescriptor, k: int, v: Sequence) -> tuple:
    lo, hi = desc.root_system.components[k]
    return (0,) * lo + tuple(v) + (0,) * (desc.root_system.ambient_dim - hi)


def _certify_product(desc: SpaceDescriptor, budget: int | None, exhaustive: bool,
                     workers: int) -> CertificationReport:
    reports = [certify_property_e(f, budget, exhaustive, workers) for f in desc.factors]
    examined = sum(r.frames_examined for r in reports)
    bad = next((k for k, r in enumerate(reports) if r.status == "refuted"), None)
    if bad is not None:
        # the factor's bad frame, padded, next to vertex frames of the other factors
        frame: list[tuple] = []
        bad_rows = []
        for k, f in enumerate(desc.factors):
            vecs = reports[k].counterexample[0] if k == bad else _vertex_frame(f)
            if k == bad:
                bad_rows = [len(frame) + i for i in reports[k].counterexample[2].row_subset]
            frame.extend(_pad(desc, k, v) for v in vecs)
        A = incidence_matrix(desc, frame)
        union = 0
        for i in bad_rows:
            union |= A.rows[i]
        cert = InfeasibilityCertificate(tuple(bad_rows), union.bit_count(), sum(A.demands[i] for i in bad_rows))
        return CertificationReport(desc.id, "refuted", examined, (tuple(frame), A, cert), None,
                                   "product", {"refuted_factor": desc.factors[bad].id}, reports)
    if any(r.status != "certified" for r in reports):
        return CertificationReport(desc.id, "budget_exhausted", examined, None, None, "product", {}, reports)
    # assemble one 3r-frame from the factors and record the split of a mixed frame
    frame = []
    for k, f in enumerate(desc.factors):
        frame.extend(_pad(desc, k, v) for v in _vertex_frame(f))
    n = len(frame)
    mixed = [tuple(a + b for a, b in zip(frame[0], frame[-1]))] + frame[1:]
    details = {
        "block_frame": [list(v) for v in frame],
        "block_split": list(split_descriptor_frame(desc, frame)),
        "mixed_frame": [list(v) for v in mixed],
        "mixed_split": list(split_descriptor_frame(desc, mixed)) if linalg.rank(mixed) == n else None,
    }
    return CertificationReport(desc.id, "certified", examined, None, None, "product", details, reports)


def certify_property_e(desc: SpaceDescriptor | str, budget: int | None = None, exhaustive: bool = False,
                       workers: int = 1) -> CertificationReport:
    """Decide 3-per-row matchability for every singular frame of ``desc``.

    Counting arguments settle most spaces without enumeration; ``exhaustive``
    forces the frame-by-frame run (up to Weyl symmetry) whenever the space is
    not already refuted by counting.
    """
    if isinstance(desc, str):
        desc = lookup(desc)
    if desc.is_product:
        return _certify_product(desc, budget, exhaustive, workers)
    m, r = desc.n_columns, desc.rank
    if desc.dim_x < 4 * r:
        return _refute_whole(desc, "counting", {"dim_x": desc.dim_x, "bound": 4 * r, "columns": m})
    if r == 1:
        # dim_x >= 4 here, so the single row has m >= 3 ones
        A = incidence_matrix(desc, _vertex_frame(desc))
        return CertificationReport(desc.id, "certified", 1, None, 1.0, "rank-one",
                                   {"dim_x": desc.dim_x, "row_ones": A.rows[0].bit_count()})
    bounds = counting_bounds(desc)
    if not exhaustive and all(bounds.values()):
        return CertificationReport(desc.id, "certified", 0, None, None, "counting",
                                   {"bounds": {str(k): v for k, v in bounds.items()}})
    if r > EXHAUSTIVE_MAX_RANK:
        status = "certified" if all(bounds.values()) else "budget_exhausted"
        return CertificationReport(desc.id, status, 0, None, None, "counting",
                                   {"bounds": {str(k): v for k, v in bounds.items()},
                                    "note": f"exhaustive search is limited to rank <= {EXHAUSTIVE_MAX_RANK}"})
    report = _exhaustive(desc, budget, workers)
    report.details["bounds"] = {str(k): v for k, v in bounds.items()}
    return report


# --- weak matching -------------------------------------------------------

@dataclass(frozen=True)
class SideConditions:
    dim_x: int
    rank: int
    dim_w: int
    block: int
    w_cap_block: int
    w_cap_flat_perp: int
    after_choices: int


def sl5r_side_conditions(desc: SpaceDescriptor, singular_rows: int = 3, demand: int = 3) -> SideConditions:
    """Dimension counts for a codimension-one ``W``: ``dim(W ∩ U) >= dim W + dim U - dim X``."""
    dim_w = desc.dim_x - 1
    m = desc.n_columns
    w_p = dim_w + demand - desc.dim_x
    w_f = dim_w + m - desc.dim_x
    return SideConditions(desc.dim_x, desc.rank, dim_w, demand, w_p, w_f, w_f - 2 * singular_rows)


def certify_weak_matching(desc: SpaceDescriptor | str, profile: str = "regular-last",
                          budget: int | None = None) -> CertificationReport:
    """Frames with one regular vector: three columns for each singular row.

    ``regular-last`` treats the last frame vector as regular, so its row is
    all ones and only needs two directions from ``W ∩ F^perp``, which the
    side conditions supply.  Every independent set of ``rank - 1`` maximally
    singular lines (each extends to a frame) is checked.  ``all-regular``
    makes every row regular.
    """
    if isinstance(desc, str):
        desc = lookup(desc)
    m, r = desc.n_columns, desc.rank
    if profile == "all-regular":
        ok = m >= 2 * r
        A = IncidenceMatrix([(1 << m) - 1] * r, m, [2] * r, desc.id)
        res = feasible_matching(A)
        status = "certified" if ok and not isinstance(res, InfeasibilityCertificate) else "refuted"
        return CertificationReport(desc.id, status, 1, None, None, "all-regular", {"columns": m, "demand": 2 * r})
    if profile != "regular-last":
        raise UnsupportedProfile(f"unknown profile {profile!r}")
    if desc.is_product or r < 2:
        raise UnsupportedProfile("the regular-last profile needs an irreducible space of rank >= 2")
    lines = singular_lines(desc)
    examined = 0
    min_nonzero = None
    greedy_ok = 0
    for combo in combinations(range(len(lines)), r - 1):
        vecs = [lines[i] for i in combo]
        if linalg.rank(vecs) != r - 1:
            continue
        if budget is not None and examined >= budget:
            return CertificationReport(desc.id, "budget_exhausted", examined, None, None, "regular-last")
        ext = next(ln for ln in lines if linalg.rank(vecs + [ln]) == r)
        A_full = incidence_matrix(desc, vecs + [ext], check=False)
        A = IncidenceMatrix(A_full.rows[:-1], A_full.n_cols, [], desc.id, [list(v) for v in vecs])
        examined += 1
        nz = A.nonzero_columns()
        min_nonzero = nz if min_nonzero is None else min(min_nonzero, nz)
        res = feasible_matching(A)
        if isinstance(res, InfeasibilityCertificate):
            return CertificationReport(desc.id, "refuted", examined, (tuple(vecs), A, res), None, "regular-last",
                                       {"min_nonzero_columns": min_nonzero})
        greedy_ok += staged_greedy(A, "repair").matched
    side = sl5r_side_conditions(desc, r - 1)
    return CertificationReport(desc.id, "certified", examined, None, greedy_ok / examined if examined else None,
                               "regular-last", {
                                   "min_nonzero_columns": min_nonzero,
                                   "dim_w": side.dim_w,
                                   "dim_w_cap_p": side.w_cap_block,
                                   "dim_w_cap_flat_perp": side.w_cap_flat_perp,
                                   "flat_perp_left_after_choices": side.after_choices,
                               })

"""Catalogue of irreducible symmetric spaces of noncompact type.

Each entry carries its restricted root system with multiplicities, the
dimension of the space computed independently as ``dim G - dim K``, and the
minimum of ``dim Q_v`` over maximally singular ``v`` from a closed form.  A
descriptor is only handed out after both numbers have been checked against
the root data.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .errors import InconsistentCatalog, UnknownSpace, UnsupportedParams
from .rootsystem import (
    RestrictedRoot,
    RestrictedRootSystem,
    build_root_system,
    line_orbit,
    product,
    weyl_orbit as _weyl_orbit,
)

MAX_CLASSICAL_RANK = 12


@dataclass(frozen=True)
class SpaceDescriptor:
    id: str
    family: str
    params: tuple
    rank: int
    dim_x: int
    root_system: RestrictedRootSystem
    recorded_min_qdim: int
    factors: tuple["SpaceDescriptor", ...] = ()
    appendix_min_qdim: int | None = None
    appendix_relation: str | None = None  # "eq" or "ge"
    alias_of: str | None = None

    @property
    def is_product(self) -> bool:
        return bool(self.factors)

    @property
    def n_columns(self) -> int:
        return self.dim_x - self.rank

    def to_json(self) -> dict:
        rs = self.root_system
        return {
            "id": self.id,
            "family": self.family,
            "params": list(self.params),
            "rank": self.rank,
            "dim_x": self.dim_x,
            "roots": [{"coords": list(r.vector), "mult": r.multiplicity} for r in rs.positive_roots],
            "simple_root_indices": list(rs.simple_indices),
        }


@dataclass(frozen=True)
class _Entry:
    family: str
    params: tuple
    type_label: str
    rank: int
    mults: dict = field(hash=False)
    dim_x: int
    min_qdim: int
    appendix: tuple[int, str] | None = None
    alias_of: str | None = None


def _min_qdim(rs: RestrictedRootSystem) -> int:
    # alpha(w_j) != 0 exactly when alpha has a nonzero alpha_j coefficient
    return min(
        sum(r.multiplicity for r in rs.positive_roots if r.coefficients[j])
        for j in range(rs.rank)
    )


# --- grammar ---------------------------------------------------------------

_MINUS = str.maketrans({"−": "-", "–": "-"})
_SINGLE = re.compile(r"^(SL|Sp|SO\*|SO|SU|E6|E7|E8|F4|G2)\(([^()]*)\)$")
_HYP = re.compile(r"^H\^?\(?(\d+)\)?$")
_PRODUCT_SEP = re.compile(r"(?<=\))\s*[×xX]\s*")

_EXCEPTIONAL: dict[tuple[str, str], tuple[str, int, dict, int, int, tuple[int, str] | None]] = {
    # (group, form): (type, rank, multiplicities, dim_x, true min dim Q_v, appendix claim)
    ("E6", "C"): ("E", 6, {"long": 2}, 78, 32, (32, "eq")),
    ("E7", "C"): ("E", 7, {"long": 2}, 133, 54, (66, "eq")),
    ("E8", "C"): ("E", 8, {"long": 2}, 248, 114, (114, "eq")),
    ("F4", "C"): ("F", 4, {"long": 2, "short": 2}, 52, 30, (30, "eq")),
    ("G2", "C"): ("G", 2, {"long": 2, "short": 2}, 14, 10, (10, "eq")),
    ("E6", "6"): ("E", 6, {"long": 1}, 42, 16, (16, "eq")),
    ("E6", "2"): ("F", 4, {"long": 1, "short": 2}, 40, 21, (15, "ge")),
    ("E6", "-14"): ("BC", 2, {"middle": 6, "short": 8, "doubled": 1}, 32, 21, (9, "ge")),
    ("E6", "-26"): ("A", 2, {"long": 8}, 26, 16, (12, "ge")),
    ("E7", "7"): ("E", 7, {"long": 1}, 70, 27, (33, "eq")),
    ("E7", "-5"): ("F", 4, {"long": 1, "short": 4}, 64, 33, (15, "ge")),
    ("E7", "-25"): ("C", 3, {"short": 8, "long": 1}, 54, 27, (17, "ge")),
    ("E8", "8"): ("E", 8, {"long": 1}, 128, 57, (57, "eq")),
    ("E8", "-24"): ("F", 4, {"long": 1, "short": 8}, 112, 57, (27, "ge")),
    ("F4", "4"): ("F", 4, {"long": 1, "short": 1}, 28, 15, (15, "eq")),
    ("F4", "-20"): ("BC", 1, {"short": 8, "doubled": 7}, 16, 15, None),
    ("G2", "2"): ("G", 2, {"long": 1, "short": 1}, 8, 5, (5, "eq")),
}


def _ints(args: Sequence[str], text: str) -> tuple[int, ...]:
    try:
        return tuple(int(a) for a in args)
    except ValueError:
        raise UnknownSpace(f"cannot parse parameters of {text!r}") from None


def _check_rank(rank: int, text: str) -> None:
    if rank < 1 or rank > MAX_CLASSICAL_RANK:
        raise UnsupportedParams(f"{text}: rank {rank} outside 1..{MAX_CLASSICAL_RANK}")


def _sl(n1: int, field_: str, text: str) -> _Entry:
    n = n1 - 1
    _check_rank(n, text)
    d = {"R": 1, "C": 2, "H": 4}[field_]
    dim = {"R": n1 * (n1 + 1) // 2 - 1, "C": n1 * n1 - 1, "H": 2 * n1 * n1 - n1 - 1}[field_]
    return _Entry("SL", (n1, field_), "A", n, {"long": d}, dim, d * n, (d * n, "eq"))


def _sp_field(two_n: int, field_: str, text: str) -> _Entry:
    if two_n % 2:
        raise UnsupportedParams(f"{text}: Sp(2n,F) needs an even first parameter")
    n = two_n // 2
    _check_rank(n, text)
    if field_ == "R":
        return _Entry("Sp", (two_n, "R"), "C", n, {"short": 1, "long": 1}, n * (n + 1),
                      2 * n - 1, (2 * n - 1, "eq"))
    if field_ == "C":
        return _Entry("Sp", (two_n, "C"), "C", n, {"short": 2, "long": 2}, n * (2 * n + 1),
                      4 * n - 2, (4 * n - 2, "eq"))
    raise UnknownSpace(f"{text}: field must be R or C")


def _so_complex(big_n: int, text: str) -> _Entry:
    if big_n % 2:
        n = (big_n - 1) // 2
        _check_rank(n, text)
        return _Entry("SO", (big_n, "C"), "B", n, {"short": 2, "long": 2}, n * (2 * n + 1),
                      4 * n - 2, (4 * n - 2, "eq"))
    n = big_n // 2
    if n < 3:
        raise UnsupportedParams(f"{text}: SO(4,C) is not simple; use SL(2,C)×SL(2,C)")
    _check_rank(n, text)
    if n == 3:
        # isogenous to SL(4,C)
        return _Entry("SO", (big_n, "C"), "D", n, {"long": 2}, 15, 6, (6, "eq"), alias_of="SL(4,C)")
    return _Entry("SO", (big_n, "C"), "D", n, {"long": 2}, n * (2 * n - 1), 4 * n - 4, (4 * n - 4, "eq"))


def _su(m: int, n: int, text: str) -> _Entry:
    if n > m:
        raise UnsupportedParams(f"{text}: write SU(m,n) with m >= n")
    _check_rank(n, text)
    if (m, n) == (2, 2):
        e = _so_real(4, 2, text)
        return _Entry("SU", (2, 2), e.type_label, e.rank, e.mults, 8, e.min_qdim, None, alias_of="SO(4,2)")
    if m == n:
        return _Entry("SU", (m, n), "C", n, {"short": 2, "long": 1}, 2 * m * n,
                      2 * (m + n) - 3, (2 * (m + n) - 3, "eq"))
    return _Entry("SU", (m, n), "BC", n, {"middle": 2, "short": 2 * (m - n), "doubled": 1}, 2 * m * n,
                  2 * (m + n) - 3, (2 * (m + n) - 3, "eq"))


def _so_real(m: int, n: int, text: str) -> _Entry:
    if n > m:
        raise UnsupportedParams(f"{text}: write SO(m,n) with m >= n")
    if n < 1 or m + n < 3:
        raise UnsupportedParams(f"{text}: not a symmetric space of noncompact type")
    _check_rank(n, text)
    if m > n:
        mults = {"long": 1, "short": m - n} if n > 1 else {"long": m - 1}
        return _Entry("SO", (m, n), "B", n, mults, m * n, m + n - 2, (m + n - 2, "eq"))
    if n == 2:
        raise UnsupportedParams(f"{text}: SO(2,2) is not simple; use SO(2,1)×SO(2,1)")
    if n == 3:
        # isogenous to SL(4,R)
        return _Entry("SO", (3, 3), "D", 3, {"long": 1}, 9, 3, None, alias_of="SL(4,R)")
    return _Entry("SO", (m, n), "D", n, {"long": 1}, m * n, m + n - 2, (m + n - 2, "eq"))


def _sp_real(m: int, n: int, text: str) -> _Entry:
    if n > m:
        raise UnsupportedParams(f"{text}: write Sp(m,n) with m >= n")
    _check_rank(n, text)
    if (m, n) == (2, 2):
        return _Entry("Sp", (2, 2), "C", 2, {"short": 4, "long": 3}, 16, 10, (10, "ge"))
    if m == n:
        return _Entry("Sp", (m, n), "C", n, {"short": 4, "long": 3}, 4 * m * n,
                      4 * (m + n) - 5, (4 * (m + n) - 5, "eq"))
    return _Entry("Sp", (m, n), "BC", n, {"middle": 4, "short": 4 * (m - n), "doubled": 3}, 4 * m * n,
                  4 * (m + n) - 5, (4 * (m + n) - 5, "eq"))


def _so_star(two_n: int, text: str) -> _Entry:
    if two_n % 2 or two_n < 4:
        raise UnsupportedParams(f"{text}: SO*(2n) needs an even parameter >= 4")
    n = two_n // 2
    k = n // 2
    _check_rank(k, text)
    dim = n * (n - 1)
    if n % 2 == 0:
        # vertex (1,0,..,0) gives 8k-7, vertex (1,..,1) gives 2k^2-k
        true_min = min(8 * k - 7, 2 * k * k - k)
        appendix = (8 * k - 7, "eq") if k >= 3 else None
        alias = "SO(6,2)" if k == 2 else None
        mults = {"short": 4, "long": 1} if k > 1 else {"long": 1}
        return _Entry("SO*", (two_n,), "C", k, mults, dim, true_min, appendix, alias_of=alias)
    true_min = min(8 * k - 3, 2 * k * k + 3 * k)
    mults = {"middle": 4, "short": 4, "doubled": 1} if k > 1 else {"short": 4, "doubled": 1}
    return _Entry("SO*", (two_n,), "BC", k, mults, dim, true_min, None)


def _parse_single(text: str) -> _Entry:
    hyp = _HYP.match(text)
    if hyp:
        n = int(hyp.group(1))
        if n < 2:
            raise UnsupportedParams(f"{text}: hyperbolic space needs dimension >= 2")
        e = _so_real(n, 1, text)
        return _Entry("SO", (n, 1), e.type_label, e.rank, e.mults, e.dim_x, e.min_qdim, e.appendix,
                      alias_of=f"SO({n},1)")
    m = _SINGLE.match(text)
    if not m:
        raise UnknownSpace(f"unrecognised space identifier {text!r}")
    group, argstr = m.group(1), m.group(2)
    args = [a.strip() for a in argstr.split(",")]
    if group in ("E6", "E7", "E8", "F4", "G2"):
        key = (group, args[0]) if len(args) == 1 else None
        if key not in _EXCEPTIONAL:
            raise UnknownSpace(f"unknown real form {text!r}")
        t, r, mults, dim, qmin, appendix = _EXCEPTIONAL[key]
        return _Entry(group, (args[0],), t, r, mults, dim, qmin, appendix)
    if group == "SO*":
        return _so_star(_ints(args, text)[0] if len(args) == 1 else -1, text)
    if len(args) != 2:
        raise UnknownSpace(f"{text!r}: expected two parameters")
    if group == "SL":
        if args[1] not in ("R", "C", "H"):
            raise UnknownSpace(f"{text!r}: field must be R, C or H")
        return _sl(_ints(args[:1], text)[0], args[1], text)
    if group == "Sp":
        if args[1] in ("R", "C"):
            return _sp_field(_ints(args[:1], text)[0], args[1], text)
        return _sp_real(*_ints(args, text), text)
    if group == "SO":
        if args[1] == "C":
            return _so_complex(_ints(args[:1], text)[0], text)
        return _so_real(*_ints(args, text), text)
    if group == "SU":
        return _su(*_ints(args, text), text)
    raise UnknownSpace(f"unrecognised space identifier {text!r}")


def _canonical_id(e: _Entry) -> str:
    if e.family in ("E6", "E7", "E8", "F4", "G2"):
        return f"{e.family}({e.params[0]})"
    if e.family == "SO*":
        return f"SO*({e.params[0]})"
    return f"{e.family}({e.params[0]},{e.params[1]})"


def _validate(desc: SpaceDescriptor) -> None:
    rs = desc.root_system
    if desc.rank + rs.total_multiplicity != desc.dim_x:
        raise InconsistentCatalog(
            f"{desc.id}: rank {desc.rank} + multiplicities {rs.total_multiplicity} != dim {desc.dim_x}")
    got = _min_qdim(rs)
    if got != desc.recorded_min_qdim:
        raise InconsistentCatalog(f"{desc.id}: min dim Q_v is {got}, recorded {desc.recorded_min_qdim}")


@lru_cache(maxsize=None)
def lookup(space_id: str) -> SpaceDescriptor:
    """Parse ``space_id`` and return its validated descriptor.

    Products are written with ``×`` (or ``x``) between factors, e.g.
    ``"SL(3,R)×SO(4,1)"``.
    """
    text = space_id.translate(_MINUS).replace(" ", "")
    parts = _PRODUCT_SEP.split(text)
    if len(parts) > 1:
        factors = tuple(lookup(p) for p in parts)
        rs = product([f.root_system for f in factors])
        desc = SpaceDescriptor(
            id="×".join(f.id for f in factors),
            family="Product",
            params=tuple(f.id for f in factors),
            rank=rs.rank,
            dim_x=sum(f.dim_x for f in factors),
            root_system=rs,
            recorded_min_qdim=min(f.recorded_min_qdim for f in factors),
            factors=factors,
        )
        _validate(desc)
        return desc
    entry = _parse_single(text)
    rs = build_root_system(entry.type_label, entry.rank, entry.mults)
    appendix = entry.appendix or (None, None)
    desc = SpaceDescriptor(
        id=_canonical_id(entry),
        family=entry.family,
        params=entry.params,
        rank=entry.rank,
        dim_x=entry.dim_x,
        root_system=rs,
        recorded_min_qdim=entry.min_qdim,
        appendix_min_qdim=appendix[0],
        appendix_relation=appendix[1],
        alias_of=entry.alias_of,
    )
    _validate(desc)
    return desc


def positive_roots(desc: SpaceDescriptor) -> tuple[RestrictedRoot, ...]:
    return desc.root_system.positive_roots


def multiplicity_table(desc: SpaceDescriptor) -> dict[str, int]:
    """Orbit tag -> multiplicity, checked against both catalogue constraints."""
    if desc.is_product:
        raise InconsistentCatalog("multiplicity tables are per irreducible factor")
    _validate(desc)
    rs = desc.root_system
    table = rs.multiplicity_table()
    for r in rs.positive_roots:
        if table[r.orbit_tag] != r.multiplicity:
            raise InconsistentCatalog(f"{desc.id}: multiplicity not constant on {r.orbit_tag} roots")
    return table


def weyl_orbit(desc: SpaceDescriptor, v, cap: int | None = None):
    if cap is None:
        return _weyl_orbit(desc.root_system, v)
    return _weyl_orbit(desc.root_system, v, cap=cap)


def weyl_line_orbit(desc: SpaceDescriptor, v, cap: int | None = None):
    if cap is None:
        return line_orbit(desc.root_system, v)
    return line_orbit(desc.root_system, v, cap=cap)


def to_json(desc: SpaceDescriptor) -> str:
    return json.dumps(desc.to_json(), sort_keys=True)


# Spaces treated in the appendix plus the small cases it excludes.
CATALOG_IDS: tuple[str, ...] = (
    "SL(3,R)", "SL(4,R)", "SL(5,R)", "SL(6,R)", "SL(7,R)", "SL(9,R)",
    "SL(2,C)", "SL(3,C)", "SL(4,C)", "SL(5,C)",
    "SL(2,H)", "SL(3,H)", "SL(4,H)",
    "Sp(4,C)", "Sp(6,C)", "SO(7,C)", "SO(9,C)", "SO(8,C)", "SO(10,C)",
    "Sp(2,R)", "Sp(4,R)", "Sp(6,R)", "Sp(8,R)",
    "SU(2,1)", "SU(3,2)", "SU(3,3)", "SU(4,2)", "SU(2,2)",
    "SO(2,1)", "SO(3,1)", "SO(4,1)", "SO(3,2)", "SO(4,2)", "SO(4,3)", "SO(5,3)", "SO(5,4)",
    "SO(6,2)", "SO(3,3)", "SO(4,4)", "SO(5,5)", "SO(6,6)",
    "Sp(1,1)", "Sp(2,1)", "Sp(2,2)", "Sp(3,2)",
    "SO*(8)", "SO*(10)", "SO*(12)", "SO*(16)",
    "E6(C)", "E7(C)", "E8(C)", "F4(C)", "G2(C)",
    "E6(6)", "E6(2)", "E6(-14)", "E6(-26)",
    "E7(7)", "E7(-5)", "E7(-25)",
    "E8(8)", "E8(-24)",
    "F4(4)", "F4(-20)", "G2(2)",
)


def catalog_entries() -> list[SpaceDescriptor]:
    return [lookup(i) for i in CATALOG_IDS]


def rank_two_irreducibles(max_param: int = 8) -> list[SpaceDescriptor]:
    """Rank-2 irreducible spaces, one per isometry class.

    Isogenous duplicates are dropped: SO(3,2) is Sp(4,R), SU(2,2) is
    SO(4,2), SO*(8) is SO(6,2), SO(5,C) is Sp(4,C).
    """
    ids = ["SL(3,R)", "SL(3,C)", "SL(3,H)", "E6(-26)", "Sp(4,R)", "Sp(4,C)",
           "Sp(2,2)", "SO*(10)", "E6(-14)", "G2(2)", "G2(C)"]
    ids += [f"SO({m},2)" for m in range(4, max_param + 1)]
    ids += [f"SU({m},2)" for m in range(3, max_param + 1)]
    ids += [f"Sp({m},2)" for m in range(3, max_param + 1)]
    return [lookup(i) for i in ids]

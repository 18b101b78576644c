"""n-chains and spherical (n-1)-chains with coded ball-union cells.

A chain is a family of rational-ball unions indexed by the grid {0..m}^n
(full view) or by its boundary multi-indices (boundary view).  Views share
cell storage; spherical chains keep the single full-grid coding, with
interior entries ignored (and filled by a copy when a natural code is
materialized, so the formal mesh is unchanged).

Semi-decisions follow the fuel model; on Euclidean spaces they run exactly
on the integer lattice with spatial hashing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from . import codec, geometry
from .reals import ComputableReal, sqrt_upper
from .space import (BallCode, EuclideanSpace, Space, UnionCode, Verdict,
                    as_union, closed_unions_disjoint)

Index = tuple[int, ...]


@dataclass(frozen=True)
class FaceSelector:
    """A face of the index grid: coordinate ``axis`` (1-based) pinned to a side."""

    axis: int
    side: int

    def __post_init__(self):
        if self.side not in (0, 1):
            raise ValueError("side must be 0 or 1")
        if self.axis < 1:
            raise ValueError("axes are 1-based")


def boundary_indices(n: int, m: int) -> list[Index]:
    """All multi-indices of {0..m}^n with some coordinate in {0, m}."""
    if m == 0:
        return list(itertools.product((0,), repeat=n))
    seen: set[Index] = set()
    out: list[Index] = []
    for axis in range(n):
        for side in (0, m):
            for rest in itertools.product(range(m + 1), repeat=n - 1):
                idx = rest[:axis] + (side,) + rest[axis:]
                if idx not in seen:
                    seen.add(idx)
                    out.append(idx)
    out.sort()
    return out


def face_indices(n: int, m: int, face: FaceSelector) -> list[Index]:
    if face.axis > n:
        raise ValueError(f"face axis {face.axis} out of range for dimension {n}")
    pin = 0 if face.side == 0 else m
    axis = face.axis - 1
    return [rest[:axis] + (pin,) + rest[axis:]
            for rest in itertools.product(range(m + 1), repeat=n - 1)]


def is_boundary_index(idx: Index, m: int) -> bool:
    return any(c == 0 or c == m for c in idx)


class Chain:
    """A coded chain: cells indexed by {0..m}^n or its boundary."""

    def __init__(self, n: int, m: int, cells: dict[Index, UnionCode],
                 view: str = "full", face: FaceSelector | None = None):
        if n < 1:
            raise ValueError("chain dimension must be >= 1")
        if view not in ("full", "boundary", "face"):
            raise ValueError(f"unknown view {view!r}")
        self.n = n
        self.m = m
        self.cells = cells
        self.view = view
        self.face = face
        self._scaled = None

    # -- construction ---------------------------------------------------

    @staticmethod
    def full(n: int, m: int, cells: dict[Index, UnionCode]) -> "Chain":
        need = (m + 1) ** n
        if len(cells) != need:
            raise ValueError(f"full chain needs {need} cells, got {len(cells)}")
        return Chain(n, m, cells, "full")

    @staticmethod
    def boundary(n: int, m: int, cells: dict[Index, UnionCode]) -> "Chain":
        for idx in cells:
            if not is_boundary_index(idx, m):
                raise ValueError(f"{idx} is not a boundary index")
        return Chain(n, m, cells, "boundary")

    @staticmethod
    def from_code(l: int, n: int) -> "Chain":
        m = codec.grid_side(l)
        cells: dict[Index, UnionCode] = {}
        for idx in itertools.product(range(m + 1), repeat=n):
            cells[idx] = UnionCode.from_code(codec.grid_entry(l, idx))
        return Chain.full(n, m, cells)

    # -- views ------------------------------------------------------------

    def indices(self) -> list[Index]:
        if self.view == "full":
            return sorted(self.cells.keys())
        if self.view == "boundary":
            return boundary_indices(self.n, self.m)
        return face_indices(self.n, self.m, self.face)

    def cell(self, idx: Index) -> UnionCode:
        return self.cells[idx]

    def restrict_boundary(self) -> "Chain":
        """Boundary view sharing cell storage."""
        return Chain(self.n, self.m, self.cells, "boundary")

    def restrict_face(self, face: FaceSelector) -> "Chain":
        if face.axis > self.n:
            raise ValueError(f"face axis {face.axis} out of range")
        return Chain(self.n, self.m, self.cells, "face", face)

    # -- coding -----------------------------------------------------------

    def to_code(self) -> int:
        """The canonical ChainCode natural (interior filled on boundary views).

        Sequence/grid codes grow double-exponentially; call on small chains.
        """
        entries: dict[Index, int] = {}
        fill: int | None = None
        for idx in itertools.product(range(self.m + 1), repeat=self.n):
            cell = self.cells.get(idx)
            if cell is None:
                if fill is None:
                    fill = self.cells[self.indices()[0]].code
                entries[idx] = fill
            else:
                entries[idx] = cell.code
        return codec.grid_encode(entries, self.n, self.m)

    def to_jsonable(self) -> dict:
        """The spec wire form {n, m, cells: nested member-code arrays}."""
        def build(prefix: Index):
            if len(prefix) == self.n:
                cell = self.cells.get(prefix)
                return None if cell is None else cell.member_codes()
            return [build(prefix + (i,)) for i in range(self.m + 1)]
        return {"n": self.n, "m": self.m, "view": self.view,
                "cells": build(())}

    @staticmethod
    def from_jsonable(data: dict) -> "Chain":
        n, m = data["n"], data["m"]
        cells: dict[Index, UnionCode] = {}

        def walk(node, prefix: Index):
            if len(prefix) == n:
                if node is not None:
                    cells[prefix] = UnionCode(
                        [BallCode.from_code(c) for c in node])
                return
            for i, sub in enumerate(node):
                walk(sub, prefix + (i,))
        walk(data["cells"], ())
        view = data.get("view", "full")
        return Chain(n, m, cells, view if view in ("full", "boundary") else "full")

    # -- lattice bridge -----------------------------------------------

    def scaled(self, space: EuclideanSpace) -> "_ScaledChain":
        if self._scaled is None:
            self._scaled = _ScaledChain(space, self)
        return self._scaled


class _ScaledChain:
    """Chain cells on a shared integer lattice with a deduplicated ball table."""

    def __init__(self, space: EuclideanSpace, chain: Chain):
        keys: dict[tuple, int] = {}
        raw: list[tuple[tuple[Fraction, ...], Fraction]] = []
        members: dict[Index, tuple[int, ...]] = {}
        for idx in chain.indices():
            ids = []
            for ball in chain.cells[idx].members:
                key = (ball.center(space), ball.radius)
                bid = keys.get(key)
                if bid is None:
                    bid = len(raw)
                    keys[key] = bid
                    raw.append(key)
                ids.append(bid)
            members[idx] = tuple(ids)
        vals: list[Fraction] = []
        for center, radius in raw:
            vals.extend(center)
            vals.append(radius)
        scale = geometry.lattice_scale(vals)
        self.scale = scale
        self.centers = [geometry.scale_point(c, scale) for c, _ in raw]
        self.radii = [geometry.scale_value(r, scale) for _, r in raw]
        self.members = members
        self.cell_bbox: dict[Index, tuple[tuple[int, ...], tuple[int, ...]]] = {}
        dims = len(self.centers[0]) if self.centers else 0
        for idx, ids in members.items():
            lo = tuple(min(self.centers[i][d] - self.radii[i] for i in ids)
                       for d in range(dims))
            hi = tuple(max(self.centers[i][d] + self.radii[i] for i in ids)
                       for d in range(dims))
            self.cell_bbox[idx] = (lo, hi)

    def cells_disjoint(self, a: Index, b: Index) -> bool:
        lo_a, hi_a = self.cell_bbox[a]
        lo_b, hi_b = self.cell_bbox[b]
        if any(x > y for x, y in zip(lo_a, hi_b)) or \
           any(x > y for x, y in zip(lo_b, hi_a)):
            return True
        for i in self.members[a]:
            ci, ri = self.centers[i], self.radii[i]
            for j in self.members[b]:
                if not geometry.closed_balls_disjoint(ci, ri, self.centers[j],
                                                      self.radii[j]):
                    return False
        return True


# ---------------------------------------------------------------------------
# Formal diameter and mesh


def fdiam(space: Space, union) -> ComputableReal:
    """Formal diameter: max pairwise center distance plus twice the max radius."""
    union = as_union(union)
    balls = [(b.center(space), b.radius) for b in union.members]
    spread = 2 * max(r for _, r in balls)

    def approx(k: int) -> Fraction:
        best = Fraction(0)
        for i in range(len(balls)):
            for j in range(i + 1, len(balls)):
                d = space.point_dist_approx(balls[i][0], balls[j][0], k)
                if d > best:
                    best = d
        return best + spread

    return ComputableReal(approx)


def fdiam_upper(space: Space, union, k: int) -> Fraction:
    """A rational with fdiam <= value <= fdiam + 2^-(k-1)."""
    return fdiam(space, union).upper(k)


def fmesh(space: Space, chain: Chain) -> ComputableReal:
    """Max of the member cells' formal diameters (over the chain's view)."""
    reals = [fdiam(space, chain.cells[idx]) for idx in chain.indices()]
    return ComputableReal.max_of(reals)


def _cell_fdiam_upper_fast(sc: _ScaledChain, idx: Index, prec: int) -> Fraction:
    """Upper bound via the cell's center bounding box diagonal (exact sqrt)."""
    ids = sc.members[idx]
    dims = len(sc.centers[0])
    lo = [min(sc.centers[i][d] for i in ids) for d in range(dims)]
    hi = [max(sc.centers[i][d] for i in ids) for d in range(dims)]
    diag2 = Fraction(sum((b - a) ** 2 for a, b in zip(lo, hi)), sc.scale ** 2)
    spread = Fraction(2 * max(sc.radii[i] for i in ids), sc.scale)
    return sqrt_upper(diag2, prec) + spread


def fmesh_upper(space: Space, chain: Chain, prec: int = 12) -> Fraction:
    """Sound rational upper bound on fmesh (fast path on Euclidean spaces)."""
    if isinstance(space, EuclideanSpace):
        sc = chain.scaled(space)
        return max(_cell_fdiam_upper_fast(sc, idx, prec)
                   for idx in chain.indices())
    return fmesh(space, chain).upper(prec)


# ---------------------------------------------------------------------------
# Chain-hood


def _far_pairs(indices: Sequence[Index]) -> Iterator[tuple[Index, Index]]:
    for i in range(len(indices)):
        a = indices[i]
        for j in range(i + 1, len(indices)):
            b = indices[j]
            if any(abs(x - y) > 1 for x, y in zip(a, b)):
                yield a, b


def _chain_status_euclidean(space: EuclideanSpace, chain: Chain):
    """Exact decision: ("yes", None) or ("no", offending index pair)."""
    sc = chain.scaled(space)
    indices = chain.indices()
    extent = 1
    for lo, hi in sc.cell_bbox.values():
        extent = max(extent, max(b - a for a, b in zip(lo, hi)))
    index = geometry.BucketIndex(extent)
    order = {idx: i for i, idx in enumerate(indices)}
    for idx in indices:
        lo, hi = sc.cell_bbox[idx]
        index.insert(order[idx], lo, hi)
    for idx in indices:
        lo, hi = sc.cell_bbox[idx]
        for other_i in index.query(lo, hi):
            other = indices[other_i]
            if other_i <= order[idx]:
                continue
            if all(abs(x - y) <= 1 for x, y in zip(idx, other)):
                continue
            if not sc.cells_disjoint(idx, other):
                return "no", (idx, other)
    return "yes", None


def chain_status(space: Space, chain: Chain, fuel: int):
    """Three-valued chain-hood: "yes" / "no" (Euclidean exact) / "open"."""
    if fuel < 1:
        return "open", None
    if isinstance(space, EuclideanSpace):
        return _chain_status_euclidean(space, chain)
    for a, b in _far_pairs(chain.indices()):
        v = closed_unions_disjoint(space, chain.cells[a], chain.cells[b], fuel)
        if not v:
            return "open", (a, b)
    return "yes", None


def is_nchain(space: Space, chain: Chain, fuel: int) -> Verdict:
    """Semi-decide that the closed cells form an n-chain."""
    target = chain if chain.view == "full" else chain
    status, detail = chain_status(space, target, fuel)
    if status == "yes":
        return Verdict.found(fuel)
    return Verdict.not_yet()


def is_spherical_chain(space: Space, chain: Chain, fuel: int) -> Verdict:
    """Semi-decide that the closed boundary cells form a spherical (n-1)-chain."""
    status, detail = chain_status(space, chain.restrict_boundary(), fuel)
    if status == "yes":
        return Verdict.found(fuel)
    return Verdict.not_yet()


# ---------------------------------------------------------------------------
# Properness


def _adjacent_pairs(indices: Sequence[Index]) -> Iterator[tuple[Index, Index]]:
    # (a, a) pairs are vacuously proper (cells are nonempty) and skipped.
    present = set(indices)
    n = len(indices[0]) if indices else 0
    offsets = [off for off in itertools.product((-1, 0, 1), repeat=n)
               if any(off)]
    for a in indices:
        for off in offsets:
            b = tuple(x + o for x, o in zip(a, off))
            if b > a and b in present:
                yield a, b


def proper_status(space: Space, chain: Chain, eps: Fraction, fuel: int):
    """Witness search for eps-properness over the view's adjacent pairs.

    Returns ("yes", witnesses) or ("open", blocking pair).  Witness order:
    shared member balls first (distance zero), then member center pairs,
    then a dovetailed scan of enumerated points inside both cells.
    """
    if fuel < 1:
        return "open", None
    eps = Fraction(eps)
    indices = chain.indices()
    witnesses: dict[tuple[Index, Index], dict] = {}
    keys: dict[Index, set] = {}
    centers: dict[Index, list] = {}
    for idx in indices:
        cell = chain.cells[idx]
        keyset = set()
        pts = []
        for ball in cell.members:
            c = ball.center(space)
            keyset.add((c, ball.radius))
            pts.append(c)
        keys[idx] = keyset
        centers[idx] = pts
    for a, b in _adjacent_pairs(indices):
        shared = keys[a] & keys[b]
        if shared:
            c, r = next(iter(shared))
            witnesses[(a, b)] = {"kind": "shared-ball", "point": c}
            continue
        found = None
        for pa in centers[a]:
            for pb in centers[b]:
                cmp = space.point_dist_cmp(pa, pb, eps)
                if cmp is not None:
                    if cmp < 0:
                        found = (pa, pb)
                        break
                    continue
                for t in range(1, fuel + 1):
                    f = space.point_dist_approx(pa, pb, t)
                    if f + Fraction(1, 1 << t) <= eps:
                        found = (pa, pb)
                        break
                if found:
                    break
            if found:
                break
        if found is None:
            return "open", (a, b)
        witnesses[(a, b)] = {"kind": "center-pair", "points": found}
    return "yes", witnesses


def is_proper_at(space: Space, chain: Chain, eps, fuel: int) -> Verdict:
    """Semi-decide eps-properness at an arbitrary positive rational threshold."""
    status, detail = proper_status(space, chain, Fraction(eps), fuel)
    if status == "yes":
        return Verdict.found(fuel, pairs=len(detail))
    return Verdict.not_yet()


def is_proper(space: Space, chain: Chain, k: int, fuel: int) -> Verdict:
    """Semi-decide 2^-k-properness (boundary variant: pass a boundary view)."""
    return is_proper_at(space, chain, Fraction(1, 1 << k), fuel)


def is_proper_boundary(space: Space, chain: Chain, k: int, fuel: int) -> Verdict:
    return is_proper(space, chain.restrict_boundary(), k, fuel)


# ---------------------------------------------------------------------------
# zeta merges (exact index-set unions)


def _merge_cells(space_free_cells: Iterable[UnionCode]) -> UnionCode:
    out: list[BallCode] = []
    seen: set[int] = set()
    geo_seen: set = set()
    for cell in space_free_cells:
        for ball in cell.members:
            if ball._code is not None or ball._center_index is not None:
                key = ("c", ball.code)
                if key in seen:
                    continue
                seen.add(key)
            else:
                key = (ball._center, ball._radius)
                if key in geo_seen:
                    continue
                geo_seen.add(key)
            out.append(ball)
    return UnionCode(out)


def zeta(chain: Chain) -> UnionCode:
    """Union code with member set equal to the union of all cells' members."""
    return _merge_cells(chain.cells[idx] for idx in chain.indices())


def zeta_boundary(chain: Chain) -> UnionCode:
    """Member union over the boundary cells."""
    view = chain.restrict_boundary()
    return _merge_cells(view.cells[idx] for idx in view.indices())


def zeta_face(chain: Chain, face: FaceSelector) -> UnionCode:
    """Member union over one face's cells."""
    view = chain.restrict_face(face)
    return _merge_cells(view.cells[idx] for idx in view.indices())

"""Exact Euclidean geometry on an integer lattice.

All certifying predicates run here on scaled integer coordinates: a lattice
scale M turns rational centers/radii into ints, after which every test is
integer arithmetic (no rounding anywhere).  Boxes for the subdivision
engines carry a dyadic shift so the lattice refines only where needed.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Sequence

IntPoint = tuple[int, ...]


def lattice_scale(values: Iterable[Fraction]) -> int:
    """Least common multiple of the denominators of the given rationals."""
    m = 1
    for v in values:
        d = Fraction(v).denominator
        m = m * d // gcd(m, d)
    return m


def scale_point(point: Sequence[Fraction], scale: int) -> IntPoint:
    out = []
    for c in point:
        c = Fraction(c) * scale
        if c.denominator != 1:
            raise ValueError("coordinate not on the lattice")
        out.append(c.numerator)
    return tuple(out)


def scale_value(value, scale: int) -> int:
    v = Fraction(value) * scale
    if v.denominator != 1:
        raise ValueError("value not on the lattice")
    return v.numerator


def dist2(p: IntPoint, q: IntPoint) -> int:
    s = 0
    for a, b in zip(p, q):
        d = a - b
        s += d * d
    return s


def min_dist2_box(center: IntPoint, lo: IntPoint, hi: IntPoint) -> int:
    """Squared distance from a point to a closed box (0 if inside)."""
    s = 0
    for c, a, b in zip(center, lo, hi):
        if c < a:
            d = a - c
        elif c > b:
            d = c - b
        else:
            continue
        s += d * d
    return s


def max_dist2_box(center: IntPoint, lo: IntPoint, hi: IntPoint) -> int:
    """Squared distance from a point to the farthest box corner."""
    s = 0
    for c, a, b in zip(center, lo, hi):
        d = max(abs(c - a), abs(b - c))
        s += d * d
    return s


def closed_balls_disjoint(c1: IntPoint, r1: int, c2: IntPoint, r2: int) -> bool:
    rr = r1 + r2
    return dist2(c1, c2) > rr * rr


def open_balls_disjoint(c1: IntPoint, r1: int, c2: IntPoint, r2: int) -> bool:
    rr = r1 + r2
    return dist2(c1, c2) >= rr * rr


def closed_ball_in_open_ball(c1: IntPoint, r1: int, c2: IntPoint, r2: int) -> bool:
    """Whether the closed ball (c1, r1) sits strictly inside the open ball (c2, r2)."""
    if r1 >= r2:
        return False
    d = r2 - r1
    return dist2(c1, c2) < d * d


class BucketIndex:
    """Spatial hash over items with integer bounding boxes.

    Items whose boxes share a point always share a bucket, so a query that
    returns no candidates certifies emptiness of intersection.
    """

    def __init__(self, bucket_size: int):
        if bucket_size <= 0:
            raise ValueError("bucket size must be positive")
        self.size = bucket_size
        self._map: dict[IntPoint, list[int]] = {}

    def _cells(self, lo: IntPoint, hi: IntPoint):
        ranges = [range(a // self.size, b // self.size + 1)
                  for a, b in zip(lo, hi)]
        if len(ranges) == 1:
            for x in ranges[0]:
                yield (x,)
        elif len(ranges) == 2:
            for x in ranges[0]:
                for y in ranges[1]:
                    yield (x, y)
        else:
            def rec(i, prefix):
                if i == len(ranges):
                    yield tuple(prefix)
                    return
                for v in ranges[i]:
                    yield from rec(i + 1, prefix + [v])
            yield from rec(0, [])

    def insert(self, item: int, lo: IntPoint, hi: IntPoint) -> None:
        for cell in self._cells(lo, hi):
            self._map.setdefault(cell, []).append(item)

    def query(self, lo: IntPoint, hi: IntPoint) -> set[int]:
        out: set[int] = set()
        for cell in self._cells(lo, hi):
            hits = self._map.get(cell)
            if hits:
                out.update(hits)
        return out


class ScaledBalls:
    """A family of balls on a common lattice, with per-shift scaled caches."""

    def __init__(self, scale: int, centers: list[IntPoint], radii: list[int]):
        if len(centers) != len(radii):
            raise ValueError("centers/radii length mismatch")
        self.scale = scale
        self.centers = centers
        self.radii = radii
        self._shift_cache: dict[int, tuple[list[IntPoint], list[int]]] = {
            0: (centers, radii)}
        self._index: BucketIndex | None = None

    def __len__(self) -> int:
        return len(self.centers)

    @staticmethod
    def from_rationals(balls: Sequence[tuple[Sequence[Fraction], Fraction]],
                       scale: int | None = None) -> "ScaledBalls":
        if scale is None:
            vals: list[Fraction] = []
            for center, radius in balls:
                vals.extend(Fraction(c) for c in center)
                vals.append(Fraction(radius))
            scale = lattice_scale(vals)
        centers = [scale_point(c, scale) for c, _ in balls]
        radii = [scale_value(r, scale) for _, r in balls]
        return ScaledBalls(scale, centers, radii)

    def at_shift(self, shift: int) -> tuple[list[IntPoint], list[int]]:
        if shift not in self._shift_cache:
            centers = [tuple(c << shift for c in p) for p in self.centers]
            radii = [r << shift for r in self.radii]
            self._shift_cache[shift] = (centers, radii)
        return self._shift_cache[shift]

    def bbox(self) -> tuple[IntPoint, IntPoint]:
        n = len(self.centers[0])
        lo = tuple(min(c[d] - r for c, r in zip(self.centers, self.radii))
                   for d in range(n))
        hi = tuple(max(c[d] + r for c, r in zip(self.centers, self.radii))
                   for d in range(n))
        return lo, hi

    def index(self) -> BucketIndex:
        if self._index is None:
            size = max(max(self.radii), 1) * 2
            idx = BucketIndex(size)
            for i, (c, r) in enumerate(zip(self.centers, self.radii)):
                idx.insert(i, tuple(x - r for x in c), tuple(x + r for x in c))
            self._index = idx
        return self._index


Box = tuple[int, IntPoint, IntPoint]  # (shift, lo, hi) at scale << shift


def subdivide_verify(
    bbox: tuple[IntPoint, IntPoint],
    discard: Callable[[Box], bool],
    accept: Callable[[Box], bool],
    max_depth: int,
) -> tuple[bool, int]:
    """Depth-first box subdivision until every box is discarded or accepted.

    Returns (resolved, boxes_processed); ``resolved`` is False when
    ``max_depth`` ran out with boxes still undecided (semi-decision's
    "not yet"), never a refutation.
    """
    lo0, hi0 = bbox
    stack: list[tuple[Box, int]] = [((0, lo0, hi0), 0)]
    processed = 0
    while stack:
        (shift, lo, hi), depth = stack.pop()
        processed += 1
        box = (shift, lo, hi)
        if discard(box):
            continue
        if accept(box):
            continue
        if depth >= max_depth:
            return False, processed
        # split along the widest axis, rescaling when too thin to halve
        widths = [b - a for a, b in zip(lo, hi)]
        axis = widths.index(max(widths))
        if widths[axis] <= 1:
            shift += 1
            lo = tuple(a << 1 for a in lo)
            hi = tuple(b << 1 for b in hi)
        mid = (lo[axis] + hi[axis]) // 2
        hi_left = tuple(mid if d == axis else b for d, b in enumerate(hi))
        lo_right = tuple(mid if d == axis else a for d, a in enumerate(lo))
        stack.append(((shift, lo, hi_left), depth + 1))
        stack.append(((shift, lo_right, hi), depth + 1))
    return True, processed


def balls_discard_test(balls: ScaledBalls) -> Callable[[Box], bool]:
    """Discard boxes not meeting any closed ball of the family."""
    idx = balls.index()

    def discard(box: Box) -> bool:
        shift, lo, hi = box
        base_lo = tuple(a >> shift for a in lo)
        base_hi = tuple((b >> shift) + 1 for b in hi)
        cands = idx.query(base_lo, base_hi)
        if not cands:
            return True
        centers, radii = balls.at_shift(shift)
        for i in cands:
            r = radii[i]
            if min_dist2_box(centers[i], lo, hi) <= r * r:
                return False
        return True

    return discard


def balls_accept_test(balls: ScaledBalls) -> Callable[[Box], bool]:
    """Accept boxes strictly inside some open ball of the family."""
    idx = balls.index()

    def accept(box: Box) -> bool:
        shift, lo, hi = box
        base_lo = tuple(a >> shift for a in lo)
        base_hi = tuple((b >> shift) + 1 for b in hi)
        for i in idx.query(base_lo, base_hi):
            centers, radii = balls.at_shift(shift)
            r = radii[i]
            if max_dist2_box(centers[i], lo, hi) < r * r:
                return True
        return False

    return accept


def union_included(a: ScaledBalls, j: ScaledBalls, max_depth: int) -> tuple[bool, int]:
    """Certify union of closed a-balls inside union of open j-balls.

    The two families must share a lattice scale.
    """
    if a.scale != j.scale:
        raise ValueError("families must share a lattice scale")
    return subdivide_verify(a.bbox(), balls_discard_test(a),
                            balls_accept_test(j), max_depth)


def unions_closed_disjoint(a: ScaledBalls, b: ScaledBalls) -> tuple[bool, tuple[int, int] | None]:
    """Exact pairwise disjointness of two closed ball unions (shared scale).

    Returns (disjoint, offending pair).  In R^n closed balls meet iff the
    center distance is at most the radius sum, so this decides the set
    disjointness exactly.
    """
    if a.scale != b.scale:
        raise ValueError("families must share a lattice scale")
    big = a if len(a) >= len(b) else b
    small = b if big is a else a
    swapped = big is b
    idx = big.index()
    for s_i, (c, r) in enumerate(zip(small.centers, small.radii)):
        lo = tuple(x - r for x in c)
        hi = tuple(x + r for x in c)
        for b_i in idx.query(lo, hi):
            if not closed_balls_disjoint(c, r, big.centers[b_i], big.radii[b_i]):
                pair = (b_i, s_i) if swapped else (s_i, b_i)
                return False, pair
    return True, None

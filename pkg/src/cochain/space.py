"""Computable metric spaces and the fuel-based semi-decidable predicates.

A space is a dense point enumeration plus a distance approximator with the
2^-k contract.  Every computably-enumerable predicate is realized as a total
function of (inputs, fuel) returning a :class:`Verdict`: ``Yes`` is final and
sound, ``NotYet`` only means the stage budget ran out.  Verdicts are monotone
in fuel.

Builtin instances: Euclidean R^n (exact rational fast paths, subdivision ECP
oracle) and the Hilbert cube (exact rational distances, finite-dimensional
reduction for the ECP oracle).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import codec, geometry
from .reals import sqrt_approx

Point = tuple[Fraction, ...]


class SpaceCapabilityError(Exception):
    """Raised when an operation needs a capability the space lacks."""


@dataclass(frozen=True)
class Verdict:
    """Outcome of a fuel-bounded semi-decision."""

    yes: bool
    stage: Optional[int] = None
    witness: Optional[dict] = None

    def __bool__(self) -> bool:
        return self.yes

    @staticmethod
    def found(stage: int, **witness) -> "Verdict":
        return Verdict(True, stage, witness or None)

    @staticmethod
    def not_yet() -> "Verdict":
        return Verdict(False)


class BallCode:
    """A rational ball I_i = B(alpha_tau(i), q_tau'(i)).

    Carries either the natural code, the (center_index, radius_index) parts,
    or raw geometry (with indexes derived on demand through the space).
    """

    __slots__ = ("_code", "_center_index", "_radius_index", "_radius", "_center")

    def __init__(self, code: int | None = None, center_index: int | None = None,
                 radius_index: int | None = None, center: Point | None = None,
                 radius: Fraction | None = None):
        self._code = code
        self._center_index = center_index
        self._radius_index = radius_index
        self._center = center
        self._radius = Fraction(radius) if radius is not None else None
        if code is None and center_index is None and center is None:
            raise ValueError("ball needs a code, indexes, or geometry")

    @staticmethod
    def from_code(i: int) -> "BallCode":
        return BallCode(code=i)

    @staticmethod
    def from_parts(center_index: int, radius_index: int) -> "BallCode":
        return BallCode(center_index=center_index, radius_index=radius_index)

    @staticmethod
    def from_geometry(center: Sequence, radius) -> "BallCode":
        r = Fraction(radius)
        if r <= 0:
            raise ValueError("ball radius must be positive")
        return BallCode(center=tuple(Fraction(c) for c in center), radius=r)

    @property
    def code(self) -> int:
        if self._code is None:
            self._code = codec.pair(self.center_index, self.radius_index)
        return self._code

    @property
    def center_index(self) -> int:
        if self._center_index is None:
            if self._code is not None:
                self._center_index, self._radius_index = codec.unpair(self._code)
            else:
                raise ValueError("geometric ball needs a space to index its center")
        return self._center_index

    @property
    def radius_index(self) -> int:
        if self._radius_index is None:
            if self._code is not None:
                self._center_index, self._radius_index = codec.unpair(self._code)
            else:
                self._radius_index = codec.rational_index(self._radius)
        return self._radius_index

    @property
    def radius(self) -> Fraction:
        if self._radius is None:
            self._radius = codec.rational_at(self.radius_index)
        return self._radius

    def center(self, space: "Space") -> Point:
        if self._center is None:
            self._center = space.point_at(self.center_index)
        return self._center

    def resolve(self, space: "Space") -> "BallCode":
        """Fill the center index from geometry (needed before .code)."""
        if self._center_index is None and self._code is None:
            self._center_index = space.point_index(self._center)
        return self

    def __repr__(self) -> str:
        if self._center is not None:
            return f"BallCode(center={tuple(map(str, self._center))}, r={self._radius})"
        return f"BallCode({self._code if self._code is not None else '?'})"


class UnionCode:
    """A finite union J_j of rational balls, as its member list."""

    __slots__ = ("members", "_code")

    def __init__(self, members: Sequence[BallCode]):
        members = tuple(members)
        if not members:
            raise ValueError("empty unions are rejected")
        self.members = members
        self._code: int | None = None

    @staticmethod
    def from_code(j: int) -> "UnionCode":
        return UnionCode([BallCode.from_code(i) for i in codec.seq_decode(j)])

    @staticmethod
    def of(*balls: BallCode) -> "UnionCode":
        return UnionCode(balls)

    @property
    def code(self) -> int:
        if self._code is None:
            self._code = codec.seq_encode([b.code for b in self.members])
        return self._code

    def member_codes(self) -> list[int]:
        return [b.code for b in self.members]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def as_union(obj) -> UnionCode:
    """Accept a UnionCode, a BallCode, or a natural union code."""
    if isinstance(obj, UnionCode):
        return obj
    if isinstance(obj, BallCode):
        return UnionCode([obj])
    if isinstance(obj, int):
        return UnionCode.from_code(obj)
    raise TypeError(f"cannot interpret {obj!r} as a ball union")


# ---------------------------------------------------------------------------
# Spaces


class Space:
    """Base computable metric space.

    Subclasses (or instances built with :func:`generic_space`) provide the
    dense enumeration and the distance approximator; exact comparators and
    the ECP oracle are optional capabilities.
    """

    name = "space"
    has_ecp = False
    compact_closed_balls = False
    dim: Optional[int] = None

    def point_at(self, i: int) -> Point:
        raise NotImplementedError

    def point_index(self, point: Sequence) -> int:
        raise NotImplementedError

    def dist_approx(self, i: int, j: int, k: int) -> Fraction:
        raise NotImplementedError

    def dist_cmp(self, i: int, j: int, r: Fraction) -> Optional[int]:
        """Exact sign of d(alpha_i, alpha_j) - r, or None if unavailable."""
        return None

    # distances on raw points (same contracts, no indexing round trip)
    def point_dist_approx(self, p: Point, q: Point, k: int) -> Fraction:
        raise NotImplementedError

    def point_dist_cmp(self, p: Point, q: Point, r: Fraction) -> Optional[int]:
        return None

    def ecp_check(self, a: UnionCode, j: UnionCode, fuel: int) -> Verdict:
        raise SpaceCapabilityError(
            f"space {self.name!r} does not declare the effective covering property")

    def ball_center(self, ball: BallCode) -> Point:
        return ball.center(self)

    def decoded_union(self, union: UnionCode) -> list[tuple[Point, Fraction]]:
        return [(b.center(self), b.radius) for b in union.members]


class EuclideanSpace(Space):
    """R^n with the dense enumeration of rational vectors.

    Coordinates are coded by a signed variant of the positive-rational
    enumeration (0 -> 0, odd c -> +q, even c -> -q) folded with iterated
    pairing; everything is exact rational arithmetic.
    """

    has_ecp = True
    compact_closed_balls = True

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = n
        self.name = f"euclidean-{n}"
        self._point_cache: dict[int, Point] = {}

    # -- coordinate coding ------------------------------------------------

    @staticmethod
    def _signed_rational_at(c: int) -> Fraction:
        if c == 0:
            return Fraction(0)
        if c % 2 == 1:
            return codec.rational_at((c - 1) // 2)
        return -codec.rational_at((c - 2) // 2)

    @staticmethod
    def _signed_rational_index(r: Fraction) -> int:
        if r == 0:
            return 0
        if r > 0:
            return 2 * codec.rational_index(r) + 1
        return 2 * codec.rational_index(-r) + 2

    def point_at(self, i: int) -> Point:
        cached = self._point_cache.get(i)
        if cached is not None:
            return cached
        codes = []
        z = i
        for _ in range(self.dim - 1):
            a, z = codec.unpair(z)
            codes.append(a)
        codes.append(z)
        point = tuple(self._signed_rational_at(c) for c in codes)
        if len(self._point_cache) < 1 << 16:
            self._point_cache[i] = point
        return point

    def point_index(self, point: Sequence) -> int:
        coords = [Fraction(c) for c in point]
        if len(coords) != self.dim:
            raise ValueError("point dimension mismatch")
        codes = [self._signed_rational_index(c) for c in coords]
        z = codes[-1]
        for a in reversed(codes[:-1]):
            z = codec.pair(a, z)
        return z

    # -- distances ---------------------------------------------------------

    @staticmethod
    def _dist2(p: Point, q: Point) -> Fraction:
        return sum((a - b) * (a - b) for a, b in zip(p, q))

    def point_dist_approx(self, p: Point, q: Point, k: int) -> Fraction:
        d2 = self._dist2(p, q)
        if d2 == 0:
            return Fraction(0)
        return sqrt_approx(d2, k)

    def point_dist_cmp(self, p: Point, q: Point, r: Fraction) -> int:
        r = Fraction(r)
        d2 = self._dist2(p, q)
        if r < 0:
            return 1
        r2 = r * r
        return (d2 > r2) - (d2 < r2)

    def dist_approx(self, i: int, j: int, k: int) -> Fraction:
        return self.point_dist_approx(self.point_at(i), self.point_at(j), k)

    def dist_cmp(self, i: int, j: int, r: Fraction) -> int:
        return self.point_dist_cmp(self.point_at(i), self.point_at(j), r)

    # -- lattice bridge ------------------------------------------------

    def scaled_families(self, unions: Sequence[UnionCode],
                        scale: int | None = None) -> list[geometry.ScaledBalls]:
        decoded = [self.decoded_union(u) for u in unions]
        if scale is None:
            vals: list[Fraction] = []
            for balls in decoded:
                for center, radius in balls:
                    vals.extend(center)
                    vals.append(radius)
            scale = geometry.lattice_scale(vals)
        return [geometry.ScaledBalls.from_rationals(balls, scale)
                for balls in decoded]

    def ecp_check(self, a: UnionCode, j: UnionCode, fuel: int) -> Verdict:
        if fuel < 1:
            return Verdict.not_yet()
        fam_a, fam_j = self.scaled_families([a, j])
        ok, boxes = geometry.union_included(fam_a, fam_j, max_depth=fuel + 2)
        if ok:
            return Verdict.found(fuel, boxes=boxes)
        return Verdict.not_yet()


class HilbertCubeSpace(Space):
    """The Hilbert cube: [0,1]^N with d(x,y) = sum 2^-(i+1) |x_i - y_i|.

    Points are finitely-supported rational sequences; distances between
    enumerated points are exact rationals, so the approximator is exact.
    """

    has_ecp = True
    compact_closed_balls = True
    name = "hilbert-cube"
    dim = None

    @staticmethod
    def _rational01_at(c: int) -> Fraction:
        x, y = codec.unpair(c)
        if x + y == 0:
            return Fraction(0)
        return Fraction(x, x + y)

    @staticmethod
    def _rational01_index(r: Fraction) -> int:
        r = Fraction(r)
        if r < 0 or r > 1:
            raise ValueError("coordinates live in [0,1]")
        if r == 0:
            return codec.pair(0, 1)
        return codec.pair(r.numerator, r.denominator - r.numerator)

    def point_at(self, i: int) -> Point:
        codes = codec.seq_decode(i)
        coords = tuple(self._rational01_at(c) for c in codes)
        while coords and coords[-1] == 0:
            coords = coords[:-1]
        return coords

    def point_index(self, point: Sequence) -> int:
        coords = [Fraction(c) for c in point]
        while coords and coords[-1] == 0:
            coords.pop()
        if not coords:
            return codec.seq_encode([self._rational01_index(Fraction(0))])
        return codec.seq_encode([self._rational01_index(c) for c in coords])

    @staticmethod
    def distance(p: Sequence, q: Sequence) -> Fraction:
        d = Fraction(0)
        for idx in range(max(len(p), len(q))):
            a = Fraction(p[idx]) if idx < len(p) else Fraction(0)
            b = Fraction(q[idx]) if idx < len(q) else Fraction(0)
            d += Fraction(abs(a - b), 1 << (idx + 1))
        return d

    def point_dist_approx(self, p: Point, q: Point, k: int) -> Fraction:
        return self.distance(p, q)

    def point_dist_cmp(self, p: Point, q: Point, r: Fraction) -> int:
        d = self.distance(p, q)
        r = Fraction(r)
        return (d > r) - (d < r)

    def dist_approx(self, i: int, j: int, k: int) -> Fraction:
        return self.distance(self.point_at(i), self.point_at(j))

    def dist_cmp(self, i: int, j: int, r: Fraction) -> int:
        return self.point_dist_cmp(self.point_at(i), self.point_at(j), r)

    # -- ECP oracle: reduce to max support + aggregated tail ---------------

    def ecp_check(self, a: UnionCode, j: UnionCode, fuel: int) -> Verdict:
        if fuel < 1:
            return Verdict.not_yet()
        a_balls = self.decoded_union(a)
        j_balls = self.decoded_union(j)
        t_dims = max([1] + [len(c) for c, _ in a_balls + j_balls])
        weights = [Fraction(1, 1 << (d + 1)) for d in range(t_dims)] + [Fraction(1)]
        tail_max = Fraction(1, 1 << t_dims)

        def pad(center: Point) -> list[Fraction]:
            return list(center) + [Fraction(0)] * (t_dims - len(center))

        a_data = [(pad(c), Fraction(r)) for c, r in a_balls]
        j_data = [(pad(c), Fraction(r)) for c, r in j_balls]

        def bounds(box, center):
            lo_sum = Fraction(0)
            hi_sum = Fraction(0)
            for d in range(t_dims):
                lo, hi = box[d]
                c = center[d]
                below = lo - c
                above = c - hi
                gap = below if below > above else above
                if gap > 0:
                    lo_sum += weights[d] * gap
                hi_sum += weights[d] * max(abs(c - lo), abs(hi - c))
            lo_sum += box[t_dims][0]
            hi_sum += box[t_dims][1]
            return lo_sum, hi_sum

        root = tuple([(Fraction(0), Fraction(1))] * t_dims
                     + [(Fraction(0), tail_max)])
        stack = [(root, 0)]
        max_depth = (fuel + 2) * (t_dims + 1)
        while stack:
            box, depth = stack.pop()
            touched = False
            inside = False
            for c, r in a_data:
                lo_d, _ = bounds(box, c)
                if lo_d <= r:
                    touched = True
                    break
            if not touched:
                continue
            for c, r in j_data:
                _, hi_d = bounds(box, c)
                if hi_d < r:
                    inside = True
                    break
            if inside:
                continue
            if depth >= max_depth:
                return Verdict.not_yet()
            spans = [weights[d] * (box[d][1] - box[d][0])
                     for d in range(t_dims + 1)]
            axis = spans.index(max(spans))
            lo, hi = box[axis]
            mid = (lo + hi) / 2
            left = tuple((mid, hi) if d == axis else iv
                         for d, iv in enumerate(box))
            right = tuple((lo, mid) if d == axis else iv
                          for d, iv in enumerate(box))
            stack.append((left, depth + 1))
            stack.append((right, depth + 1))
        return Verdict.found(fuel)


class GenericSpace(Space):
    """A user-supplied computable metric space."""

    def __init__(self, name: str, point_at: Callable[[int], Point],
                 dist_approx: Callable[[int, int, int], Fraction],
                 ecp_oracle: Callable[[UnionCode, UnionCode, int], bool] | None = None,
                 compact_closed_balls: bool = False,
                 point_index: Callable[[Sequence], int] | None = None):
        self.name = name
        self._point_at = point_at
        self._dist_approx = dist_approx
        self._ecp_oracle = ecp_oracle
        self.has_ecp = ecp_oracle is not None
        self.compact_closed_balls = compact_closed_balls
        self._point_index = point_index

    def point_at(self, i: int) -> Point:
        return self._point_at(i)

    def point_index(self, point: Sequence) -> int:
        if self._point_index is None:
            raise SpaceCapabilityError("space has no point indexer")
        return self._point_index(point)

    def dist_approx(self, i: int, j: int, k: int) -> Fraction:
        return Fraction(self._dist_approx(i, j, k))

    def ecp_check(self, a: UnionCode, j: UnionCode, fuel: int) -> Verdict:
        if self._ecp_oracle is None:
            return super().ecp_check(a, j, fuel)
        if fuel >= 1 and self._ecp_oracle(a, j, fuel):
            return Verdict.found(fuel)
        return Verdict.not_yet()


def euclidean_space(n: int) -> EuclideanSpace:
    """Euclidean R^n; rejects n = 0."""
    return EuclideanSpace(n)


def hilbert_cube_space() -> HilbertCubeSpace:
    return HilbertCubeSpace()


# ---------------------------------------------------------------------------
# Semi-decidable predicates


def point_in_ball(space: Space, k: int, ball: BallCode, fuel: int) -> Verdict:
    """Semi-decide alpha_k in I_ball (strict interior)."""
    if fuel < 1:
        return Verdict.not_yet()
    center = ball.center(space)
    point = space.point_at(k)
    r = ball.radius
    cmp = space.point_dist_cmp(point, center, r)
    if cmp is not None:
        return Verdict.found(1) if cmp < 0 else Verdict.not_yet()
    for t in range(1, fuel + 1):
        f = space.point_dist_approx(point, center, t)
        if f + Fraction(1, 1 << t) <= r:
            return Verdict.found(t)
    return Verdict.not_yet()


def point_in_union(space: Space, k: int, union, fuel: int) -> Verdict:
    """Semi-decide alpha_k in J_union, dovetailing over members."""
    union = as_union(union)
    for t in range(1, fuel + 1):
        for pos, ball in enumerate(union.members):
            v = point_in_ball(space, k, ball, t)
            if v:
                return Verdict.found(t, member=pos)
    return Verdict.not_yet()


def raw_point_in_union(space: Space, point: Point, union: UnionCode,
                       fuel: int) -> Verdict:
    """Like :func:`point_in_union` for a raw point (no index round trip)."""
    for t in range(1, fuel + 1):
        for pos, ball in enumerate(union.members):
            r = ball.radius
            cmp = space.point_dist_cmp(point, ball.center(space), r)
            if cmp is not None:
                if cmp < 0:
                    return Verdict.found(t, member=pos)
                continue
            f = space.point_dist_approx(point, ball.center(space), t)
            if f + Fraction(1, 1 << t) <= r:
                return Verdict.found(t, member=pos)
    return Verdict.not_yet()


def closed_union_in_union(space: Space, a, j, fuel: int) -> Verdict:
    """The ECP oracle: semi-decide closure(J_a) inside J_j."""
    if not space.has_ecp:
        raise SpaceCapabilityError(
            f"space {space.name!r} does not declare the effective covering property")
    return space.ecp_check(as_union(a), as_union(j), fuel)


def _formal_separation(space: Space, a: UnionCode, b: UnionCode,
                       stage: int) -> bool:
    """All member pairs separated: d(centers) > r_a + r_b, certified at stage."""
    slack = Fraction(1, 1 << stage)
    for ba in a.members:
        ca = ba.center(space)
        for bb in b.members:
            cb = bb.center(space)
            rsum = ba.radius + bb.radius
            cmp = space.point_dist_cmp(ca, cb, rsum)
            if cmp is not None:
                if cmp <= 0:
                    return False
                continue
            f = space.point_dist_approx(ca, cb, stage)
            if f - slack < rsum:
                return False
    return True


def closed_unions_disjoint(space: Space, a, b, fuel: int) -> Verdict:
    """Semi-decide that the closed unions of a and b are disjoint.

    Formal separation of member pairs is sound in every metric space; it is
    also complete in geodesic spaces (both builtins), where closed balls
    intersect exactly when the center distance is within the radius sum.
    """
    if not space.compact_closed_balls:
        raise SpaceCapabilityError(
            f"space {space.name!r} does not declare compact closed balls")
    a = as_union(a)
    b = as_union(b)
    if isinstance(space, EuclideanSpace):
        if fuel < 1:
            return Verdict.not_yet()
        fam_a, fam_b = space.scaled_families([a, b])
        ok, pair = geometry.unions_closed_disjoint(fam_a, fam_b)
        if ok:
            return Verdict.found(1)
        return Verdict.not_yet()
    for t in range(1, fuel + 1):
        if _formal_separation(space, a, b, t):
            return Verdict.found(t)
    return Verdict.not_yet()

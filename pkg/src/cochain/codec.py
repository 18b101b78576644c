"""Natural-number codings: pairing, finite sequences, index sets, rationals, grids.

Every code in the library bottoms out here.  The concrete choices are pinned
so that codes are reproducible bit-for-bit across runs:

* ``pair`` is the Cantor pairing pi(x, y) = (x+y)(x+y+1)/2 + y.
* Finite sequences are length-prefixed right-nested pairs:
  ``seq_encode([a0..a_{N-1}]) = pair(N-1, pair(a0, pair(a1, ... a_{N-1})))``
  (a singleton encodes as ``pair(0, a0)``).
* The positive-rational enumeration q walks pairs (a, b) in Cantor order and
  emits (a+1)/(b+1); duplicates are kept (surjectivity is all that matters).
* The injection f: N^n -> N used by the grid coding is iterated pairing,
  ``f(j1..jn) = pair(j1, pair(j2, ...))`` with ``f(j) = j`` for n = 1.

Sequence and grid codes grow double-exponentially in length (iterated
pairing roughly doubles bit size per element); they are exercised on small
inputs and derived only on demand elsewhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence


def pair(x: int, y: int) -> int:
    """Cantor pairing, a bijection N^2 -> N."""
    if x < 0 or y < 0:
        raise ValueError("pair is defined on naturals")
    s = x + y
    return s * (s + 1) // 2 + y


def unpair(z: int) -> tuple[int, int]:
    """Inverse of :func:`pair`."""
    if z < 0:
        raise ValueError("unpair is defined on naturals")
    w = (isqrt(8 * z + 1) - 1) // 2
    t = w * (w + 1) // 2
    y = z - t
    return w - y, y


def tau(i: int) -> int:
    """First pairing component; the center index of ball code i."""
    return unpair(i)[0]


def tau_prime(i: int) -> int:
    """Second pairing component; the radius index of ball code i."""
    return unpair(i)[1]


# ---------------------------------------------------------------------------
# Finite sequences


def seq_encode(items: Sequence[int]) -> int:
    """Code a nonempty sequence of naturals."""
    if len(items) == 0:
        raise ValueError("empty sequences have no code")
    acc = items[-1]
    for a in reversed(items[:-1]):
        acc = pair(a, acc)
    return pair(len(items) - 1, acc)


def seq_decode(j: int) -> list[int]:
    """Decode a sequence code back to its items."""
    n, acc = unpair(j)
    items = []
    for _ in range(n):
        a, acc = unpair(acc)
        items.append(a)
    items.append(acc)
    return items


def seq_len(j: int) -> int:
    """Length of the coded sequence (eta(j) + 1)."""
    return unpair(j)[0] + 1


def seq_at(j: int, i: int) -> int:
    """The i-th item of the coded sequence; clamps i to the last index.

    Clamping keeps the accessor total, matching the convention that grid
    entries with out-of-range flat indices read the final element.
    """
    items = seq_decode(j)
    if i < 0:
        raise ValueError("negative index")
    return items[min(i, len(items) - 1)]


def index_set(j: int) -> frozenset[int]:
    """The set [j] of members of the coded sequence."""
    return frozenset(seq_decode(j))


def index_set_bound(j: int) -> int:
    """Computable bound: every member of [j] is <= this value.

    pair(x, y) >= max(x, y), so every unpairing component of j is <= j;
    the identity is a valid (monotone) bound.
    """
    return j


def set_encode(members: Iterable[int]) -> int:
    """Code whose index set equals the given nonempty set of naturals."""
    ordered = sorted(set(members))
    return seq_encode(ordered)


# ---------------------------------------------------------------------------
# Positive rationals


def rational_at(k: int) -> Fraction:
    """The k-th positive rational q_k: (a+1)/(b+1) with (a,b) = unpair(k)."""
    a, b = unpair(k)
    return Fraction(a + 1, b + 1)


def rational_index(r) -> int:
    """Some k with q_k = r; rejects r <= 0."""
    r = Fraction(r)
    if r <= 0:
        raise ValueError("q enumerates positive rationals only")
    return pair(r.numerator - 1, r.denominator - 1)


# ---------------------------------------------------------------------------
# n-dimensional grid coding


def grid_pack(index: Sequence[int]) -> int:
    """The fixed computable injection N^n -> N (iterated pairing)."""
    if len(index) == 0:
        raise ValueError("grid indices have dimension >= 1")
    acc = index[-1]
    for a in reversed(index[:-1]):
        acc = pair(a, acc)
    return acc


def grid_side(i: int) -> int:
    """The side bound m = i-hat of grid code i."""
    return tau_prime(i)


def grid_entry(i: int, index: Sequence[int]) -> int:
    """Entry (i)_{j1..jn} of the coded family."""
    m = grid_side(i)
    for j in index:
        if j < 0 or j > m:
            raise ValueError(f"grid index {index} out of range for side {m}")
    return seq_at(tau(i), grid_pack(index))


def grid_encode(entries: dict[tuple[int, ...], int], n: int, m: int) -> int:
    """Code a full n-dimensional family of side m.

    ``entries`` must assign a natural to every multi-index in {0..m}^n.
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")
    top = grid_pack((m,) * n)
    flat = [0] * (top + 1)
    count = 0
    for idx, value in entries.items():
        if len(idx) != n:
            raise ValueError("index dimension mismatch")
        flat[grid_pack(idx)] = value
        count += 1
    if count != (m + 1) ** n:
        raise ValueError("entries must cover the whole grid")
    return pair(seq_encode(flat), m)

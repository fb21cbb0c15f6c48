"""Orbit generation, direct sums, products, and decomposition into orbits.

Orbit elements are generated by breadth-first closure under the simple
reflections with exact deduplication.  Internally a weight is flattened to a
tuple of integers (the numerators of its 2*rank rational parts over a common
denominator); reflections only ever multiply coordinates by Cartan entries,
which keeps that representation closed and makes hashing cheap.

Products of orbits can be decomposed without materializing the full multiset
of pairwise sums: a sum point is formed, tested for dominance, tallied only
if dominant, and discarded.  A vectorized kernel handles the large products.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np

from .errors import (
    DomainError,
    GroupMismatchError,
    MalformedMultisetError,
    NonDominantError,
    SizeLimitError,
)
from .golden import GoldenNumber, value_fraction
from .groups import Group, Weight

__all__ = [
    "Orbit",
    "WeightMultiset",
    "Decomposition",
    "generate_orbit",
    "orbit_sum",
    "orbit_product",
    "decompose",
    "decompose_product",
]

MAX_MATERIALIZED_POINTS = 2_000_000

# Components above this bound would risk int64 overflow in the vectorized
# dominance test (it squares 2a+b); fall back to exact python beyond it.
_INT64_SAFE_BOUND = 10**7
_VECTOR_THRESHOLD = 250_000


# ---------------------------------------------------------------------------
# flat integer representation


def _flatten(weights, rank) -> tuple[list[tuple[int, ...]], int]:
    """Scale weights to a common denominator and flatten to integer tuples."""
    denom = 1
    for w in weights:
        for c in w.coords:
            denom = lcm(denom, c.rat.denominator, c.tau.denominator)
    flats = []
    for w in weights:
        flat = []
        for c in w.coords:
            flat.append(int(c.rat * denom))
            flat.append(int(c.tau * denom))
        flats.append(tuple(flat))
    return flats, denom


def _unflatten(group: Group, flat, denom: int) -> Weight:
    coords = tuple(
        GoldenNumber(Fraction(flat[2 * i], denom), Fraction(flat[2 * i + 1], denom))
        for i in range(group.rank)
    )
    return Weight(group, coords)


def _sign_pair(a: int, b: int) -> int:
    """Exact sign of a + b*tau for integers a, b."""
    s = 2 * a + b
    if s >= 0 and b >= 0:
        return 1 if (s or b) else 0
    if s <= 0 and b <= 0:
        return -1
    if s > 0:
        return 1 if s * s > 5 * b * b else -1
    return 1 if 5 * b * b > s * s else -1


def _flat_is_dominant(flat) -> bool:
    for i in range(0, len(flat), 2):
        if _sign_pair(flat[i], flat[i + 1]) < 0:
            return False
    return True


def _reflect_flat(flat, i, int_row):
    xa = flat[2 * i]
    xb = flat[2 * i + 1]
    if xa == 0 and xb == 0:
        return flat
    out = list(flat)
    for j, ca, cb in int_row:
        out[2 * j] -= xa * ca + xb * cb
        out[2 * j + 1] -= xa * cb + xb * ca + xb * cb
    return tuple(out)


def _orbit_flats(group: Group, seed_flat):
    """Closure of a flat weight under all simple reflections."""
    rows = group._int_rows
    rank = group.rank
    seen = {seed_flat}
    frontier = [seed_flat]
    while frontier:
        new = []
        for flat in frontier:
            for i in range(rank):
                image = _reflect_flat(flat, i, rows[i])
                if image not in seen:
                    seen.add(image)
                    new.append(image)
        frontier = new
    return seen


def _element_sort_key(flat):
    # descending real embedding, exact integer tie-break: deterministic
    floats = tuple(-(flat[i] + flat[i + 1] * 1.618033988749895)
                   for i in range(0, len(flat), 2))
    return floats, flat


# ---------------------------------------------------------------------------
# public types


@dataclass(frozen=True)
class Orbit:
    """A dominant weight together with all of its reflections."""

    group: Group
    dominant: Weight
    elements: tuple[Weight, ...]

    def __len__(self):
        return len(self.elements)

    def norm(self) -> GoldenNumber:
        return self.group.inner(self.dominant, self.dominant)

    def multiset(self) -> "WeightMultiset":
        return WeightMultiset(self.group, {w: 1 for w in self.elements})


@dataclass
class WeightMultiset:
    """A tally of weights of one group (weight -> positive count)."""

    group: Group
    tally: dict[Weight, int] = field(default_factory=dict)

    def add(self, w: Weight, count: int = 1):
        if w.group is not self.group:
            raise GroupMismatchError("cannot mix groups in one multiset")
        self.tally[w] = self.tally.get(w, 0) + count

    def total(self) -> int:
        return sum(self.tally.values())

    def __eq__(self, other):
        return (
            isinstance(other, WeightMultiset)
            and self.group is other.group
            and self.tally == other.tally
        )


@dataclass
class Decomposition:
    """Multiplicities of the orbits making up a weight multiset."""

    group: Group
    parts: dict[Weight, int] = field(default_factory=dict)

    def add(self, dominant: Weight, multiplicity: int = 1):
        self.parts[dominant] = self.parts.get(dominant, 0) + multiplicity

    def sorted_parts(self) -> list[tuple[Weight, int]]:
        """Parts ordered by descending exact norm, then ascending coords."""
        return sorted(self.parts.items(), key=_NormKey(self.group))

    def total_points(self) -> int:
        return sum(m * self.group.orbit_size(w) for w, m in self.parts.items())

    def __eq__(self, other):
        return (
            isinstance(other, Decomposition)
            and self.group is other.group
            and self.parts == other.parts
        )


class _NormKey:
    """Sort key: norm descending, then real-embedded coordinates ascending."""

    def __init__(self, group):
        self.group = group

    def __call__(self, item):
        w = item[0] if isinstance(item, tuple) else item
        return (
            -value_fraction(self.group.inner(w, w)),
            tuple(value_fraction(c) for c in w.coords),
        )


# ---------------------------------------------------------------------------
# operations


def generate_orbit(group: Group, dominant: Weight) -> Orbit:
    """All images of a dominant weight under the group, exactly deduplicated."""
    group._own(dominant)
    if not dominant.is_dominant:
        raise NonDominantError(f"orbit seed {dominant} is not dominant")
    flats, denom = _flatten([dominant], group.rank)
    seen = _orbit_flats(group, flats[0])
    ordered = sorted(seen, key=_element_sort_key)
    elements = tuple(_unflatten(group, f, denom) for f in ordered)
    return Orbit(group, dominant, elements)


def orbit_sum(orbits) -> WeightMultiset:
    """Multiset union of the element sets of the given orbits."""
    orbits = list(orbits)
    if not orbits:
        raise DomainError("orbit_sum of an empty list")
    group = orbits[0].group
    out = WeightMultiset(group)
    for orbit in orbits:
        if orbit.group is not group:
            raise GroupMismatchError("orbit_sum requires a single group")
        for w in orbit.elements:
            out.add(w)
    return out


def orbit_product(orbits, max_points: int = MAX_MATERIALIZED_POINTS) -> WeightMultiset:
    """Materialized multiset of all k-fold sums of orbit elements (k >= 2).

    Only for products small enough to hold in memory; the decomposition of a
    large product should go through :func:`decompose_product` instead.
    """
    orbits = list(orbits)
    if len(orbits) < 2:
        raise DomainError("orbit_product needs at least two orbits")
    group = orbits[0].group
    total = 1
    for orbit in orbits:
        if orbit.group is not group:
            raise GroupMismatchError("orbit_product requires a single group")
        total *= len(orbit.elements)
    if total > max_points:
        raise SizeLimitError(
            f"product has {total} points (> {max_points}); use decompose_product"
        )
    out = WeightMultiset(group)
    partial = {w: 1 for w in orbits[0].elements}
    for orbit in orbits[1:]:
        nxt: dict[Weight, int] = {}
        for w, count in partial.items():
            for v in orbit.elements:
                s = w + v
                nxt[s] = nxt.get(s, 0) + count
        partial = nxt
    out.tally = partial
    return out


def decompose(multiset: WeightMultiset) -> Decomposition:
    """Resolve a union of whole orbits into dominant points with multiplicity.

    Every orbit contributes exactly one dominant element, so the multiplicity
    of an orbit equals the count of its dominant point in the multiset.  The
    bookkeeping identity sum(mult * orbit size) == total count is enforced.
    """
    group = multiset.group
    out = Decomposition(group)
    covered = 0
    for w, count in multiset.tally.items():
        if w.is_dominant:
            out.add(w, count)
            covered += count * group.orbit_size(w)
    if covered != multiset.total():
        raise MalformedMultisetError(
            f"multiset is not a union of orbits: {covered} accounted, "
            f"{multiset.total()} present"
        )
    return out


def decompose_product(orbits) -> Decomposition:
    """Decomposition of a product of orbits via a streaming dominant tally.

    Left-associates: the running decomposition is multiplied by one more
    orbit at a time, so memory stays proportional to the number of dominant
    points rather than the product size.
    """
    orbits = list(orbits)
    if len(orbits) < 2:
        raise DomainError("decompose_product needs at least two orbits")
    group = orbits[0].group
    for orbit in orbits:
        if orbit.group is not group:
            raise GroupMismatchError("decompose_product requires a single group")
    result = _pair_decompose(orbits[0], orbits[1])
    for orbit in orbits[2:]:
        merged = Decomposition(group)
        for dominant, mult in result.parts.items():
            partial = _pair_decompose(generate_orbit(group, dominant), orbit)
            for w, m in partial.parts.items():
                merged.add(w, mult * m)
        result = merged
    return result


def _pair_decompose(left: Orbit, right: Orbit) -> Decomposition:
    group = left.group
    lf, ld = _flatten(left.elements, group.rank)
    rf, rd = _flatten(right.elements, group.rank)
    # rescale both sides to the common denominator so sums line up
    denom = lcm(ld, rd)
    if denom != ld:
        k = denom // ld
        lf = [tuple(v * k for v in f) for f in lf]
    if denom != rd:
        k = denom // rd
        rf = [tuple(v * k for v in f) for f in rf]
    n_pairs = len(lf) * len(rf)
    bound = max(
        max(abs(v) for f in lf for v in f),
        max(abs(v) for f in rf for v in f),
    )
    if n_pairs >= _VECTOR_THRESHOLD and bound < _INT64_SAFE_BOUND:
        tally = _vector_pair_tally(lf, rf)
    else:
        tally = _python_pair_tally(lf, rf)
    out = Decomposition(group)
    covered = 0
    for flat, count in tally.items():
        w = _unflatten(group, flat, denom)
        out.add(w, count)
        covered += count * group.orbit_size(w)
    if covered != n_pairs:
        raise MalformedMultisetError(
            f"dominant tally covers {covered} of {n_pairs} product points"
        )
    return out


def _python_pair_tally(lf, rf):
    tally: dict[tuple, int] = {}
    for a in lf:
        for b in rf:
            s = tuple(x + y for x, y in zip(a, b))
            if _flat_is_dominant(s):
                tally[s] = tally.get(s, 0) + 1
    return tally


def _vector_pair_tally(lf, rf, chunk_rows: int = 64):
    """Vectorized dominant tally over all pairwise sums (exact int64 math)."""
    A = np.asarray(lf, dtype=np.int64)
    B = np.asarray(rf, dtype=np.int64)
    tally: dict[tuple, int] = {}
    for start in range(0, A.shape[0], chunk_rows):
        block = A[start:start + chunk_rows]
        sums = block[:, None, :] + B[None, :, :]  # (c, nB, 2r)
        a = sums[..., 0::2]
        b = sums[..., 1::2]
        s = 2 * a + b
        ss = s * s
        bb = 5 * b * b
        nonneg = np.where(
            (s >= 0) & (b >= 0),
            True,
            np.where(
                (s <= 0) & (b <= 0),
                False,
                np.where(s > 0, ss >= bb, bb >= ss),
            ),
        )
        mask = nonneg.all(axis=-1)
        if not mask.any():
            continue
        rows = sums[mask]
        uniq, counts = np.unique(rows, axis=0, return_counts=True)
        for row, count in zip(uniq.tolist(), counts.tolist()):
            key = tuple(row)
            tally[key] = tally.get(key, 0) + count
    return tally

"""Weight systems below a seed point, by repeated subtraction of simple roots.

Starting from a dominant seed with Z[tau] coordinates, every point with some
positive coordinate ``l = a + b*tau`` spawns children ``point - k*(l/g)*alpha_i``
for ``k = 1..g`` with ``g = gcd(|a|, |b|)`` (and ``gcd(0, n) = n``).  For
``b = 0`` this is the familiar string of integer steps ``alpha_i, 2*alpha_i,
..., a*alpha_i``; for ``a = 0`` the steps are ``tau*alpha_i``; the gcd rule
interpolates between the two and extends to mixed-sign coefficients.

The closure of the seed under this rule is recorded as a tree (really a DAG):
each distinct weight is expanded once, arrivals at an already-known weight
are kept as revisit markers, and the visited weights with all coordinates
non-negative are the dominant points of the lower orbits nested inside the
seed orbit.
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd

import numpy as np

from .errors import DomainError, NonDominantError, SizeLimitError
from .golden import GoldenNumber, TAU, value_fraction
from .groups import Group, Weight, H3
from .orbits import _NormKey, _sign_pair

__all__ = [
    "SubtractionNode",
    "SubtractionEdge",
    "SubtractionTree",
    "subtraction_children",
    "build_tree",
    "weight_system_dominants",
    "closed_form_lower_orbits",
    "tree_to_dot",
    "tree_to_json",
]

MAX_TREE_NODES = 1_000_000

_TREE_GROUPS = ("H2", "H3", "H4")


@dataclass(frozen=True)
class SubtractionNode:
    weight: Weight
    first_visit: bool


@dataclass(frozen=True)
class SubtractionEdge:
    source: Weight
    target: Weight
    multiple: GoldenNumber
    root_index: int  # 1-based

    def label(self) -> str:
        return f"{self.multiple}·α{self.root_index}"


@dataclass
class SubtractionTree:
    group: Group
    seed: Weight
    nodes: list[SubtractionNode]
    edges: list[SubtractionEdge]
    arrivals: dict[Weight, int]
    lower_dominants: list[tuple[Weight, int]]

    def node_weights(self) -> set[Weight]:
        return {n.weight for n in self.nodes if n.first_visit}

    def terminals(self) -> list[Weight]:
        sources = {e.source for e in self.edges}
        return [n.weight for n in self.nodes
                if n.first_visit and n.weight not in sources]

    def dominant_weights(self) -> set[Weight]:
        return {w for w, _ in self.lower_dominants}


def subtraction_children(group: Group, point: Weight) -> list[SubtractionEdge]:
    """Subtraction edges leaving one point (empty if no coordinate is positive)."""
    group._own(point)
    if not point.is_ztau:
        raise DomainError(
            f"subtraction requires Z[tau] coordinates, got {point}"
        )
    edges = []
    for i, coord in enumerate(point.coords):
        if coord.sign() <= 0:
            continue
        a = int(coord.rat)
        b = int(coord.tau)
        g = gcd(abs(a), abs(b))
        step = coord / g
        alpha = group.simple_roots[i]
        for k in range(1, g + 1):
            multiple = step * k
            target = point - alpha.scaled(multiple)
            edges.append(SubtractionEdge(point, target, multiple, i + 1))
    return edges


def build_tree(group: Group, seed: Weight, max_nodes: int = MAX_TREE_NODES) -> SubtractionTree:
    """Breadth-first closure of a dominant Z[tau] seed under root subtraction."""
    group._own(seed)
    if group.tag not in _TREE_GROUPS:
        raise DomainError(f"weight systems are generated for {_TREE_GROUPS} only")
    if not seed.is_dominant:
        raise NonDominantError(f"seed {seed} is not dominant")
    if seed.is_zero:
        raise DomainError("seed must be nonzero")
    if not seed.is_ztau:
        raise DomainError(f"seed {seed} must have Z[tau] coordinates")

    rank = group.rank
    rows = group._int_rows
    seed_flat = tuple(
        part for c in seed.coords for part in (int(c.rat), int(c.tau))
    )
    # events: (source, target, multiple-pair, index, is_first_visit)
    events: list[tuple] = []
    arrivals_flat: dict[tuple, int] = {seed_flat: 0}
    queue = [seed_flat]
    head = 0
    while head < len(queue):
        current = queue[head]
        head += 1
        for i in range(rank):
            a = current[2 * i]
            b = current[2 * i + 1]
            if _sign_pair(a, b) <= 0:
                continue
            g = gcd(abs(a), abs(b))
            sa = a // g
            sb = b // g
            for k in range(1, g + 1):
                ma = k * sa
                mb = k * sb
                target = list(current)
                for j, ca, cb in rows[i]:
                    target[2 * j] -= ma * ca + mb * cb
                    target[2 * j + 1] -= ma * cb + mb * ca + mb * cb
                target = tuple(target)
                if target in arrivals_flat:
                    arrivals_flat[target] += 1
                    events.append((current, target, (ma, mb), i, False))
                    continue
                arrivals_flat[target] = 1
                events.append((current, target, (ma, mb), i, True))
                queue.append(target)
                if len(queue) > max_nodes:
                    raise SizeLimitError(
                        f"weight system exceeds {max_nodes} nodes; raise max_nodes"
                    )

    weights: dict[tuple, Weight] = {}

    def materialize(flat) -> Weight:
        w = weights.get(flat)
        if w is None:
            w = Weight(group, tuple(
                GoldenNumber(flat[2 * i], flat[2 * i + 1]) for i in range(rank)
            ))
            weights[flat] = w
        return w

    nodes = [SubtractionNode(materialize(seed_flat), True)]
    edges = []
    for source, target, (ma, mb), i, first in events:
        edge = SubtractionEdge(
            materialize(source), materialize(target), GoldenNumber(ma, mb), i + 1
        )
        edges.append(edge)
        nodes.append(SubtractionNode(edge.target, first))
    arrivals = {materialize(f): n for f, n in arrivals_flat.items()}
    dominants = [
        (materialize(f), max(1, arrivals_flat[f]))
        for f in queue
        if all(_sign_pair(f[2 * i], f[2 * i + 1]) >= 0 for i in range(rank))
    ]
    dominants.sort(key=_NormKey(group))
    return SubtractionTree(group, seed, nodes, edges, arrivals, dominants)


def weight_system_dominants(group: Group, seed: Weight,
                            max_nodes: int = MAX_TREE_NODES) -> list[tuple[Weight, int]]:
    """Lower-orbit dominants of a seed, without recording the tree.

    Same closure as :func:`build_tree`, but vectorized level by level and
    keeping only the visited set and arrival counts of dominant points, so
    it scales to weight systems far beyond what edge recording allows.
    """
    group._own(seed)
    if group.tag not in _TREE_GROUPS:
        raise DomainError(f"weight systems are generated for {_TREE_GROUPS} only")
    if not seed.is_dominant:
        raise NonDominantError(f"seed {seed} is not dominant")
    if seed.is_zero:
        raise DomainError("seed must be nonzero")
    if not seed.is_ztau:
        raise DomainError(f"seed {seed} must have Z[tau] coordinates")

    rank = group.rank
    width = 2 * rank
    # response of the flat vector to subtracting (ma + mb*tau) * alpha_i:
    # x -> x - ma*U[i] - mb*V[i]
    U = np.zeros((rank, width), dtype=np.int64)
    V = np.zeros((rank, width), dtype=np.int64)
    for i, row in enumerate(group._int_rows):
        for j, ca, cb in row:
            U[i, 2 * j] = ca
            U[i, 2 * j + 1] = cb
            V[i, 2 * j] = cb
            V[i, 2 * j + 1] = ca + cb
    adj_a = np.array([[e[0] for e in row] for row in group._adjugate_int],
                     dtype=np.int64)
    adj_b = np.array([[e[1] for e in row] for row in group._adjugate_int],
                     dtype=np.int64)

    seed_flat = np.array(
        [part for c in seed.coords for part in (int(c.rat), int(c.tau))],
        dtype=np.int64,
    )
    # Every path from the seed to a point x subtracts the same total root
    # multiple M(x) (a Z[tau] value), so grouping pending points by M and
    # consuming groups in ascending real order of M makes each group final
    # when popped: all of its arrivals have already happened, and no global
    # visited set is needed.
    buckets: dict[tuple[int, int], list[np.ndarray]] = {}
    heap: list[_MultipleKey] = []
    pending_rows = 0

    def push(key: tuple[int, int], rows: np.ndarray):
        nonlocal pending_rows
        pending_rows += len(rows)
        pending = buckets.get(key)
        if pending is None:
            buckets[key] = [rows]
            heapq.heappush(heap, _MultipleKey(key))
        else:
            pending.append(rows)

    push((0, 0), seed_flat[None, :])
    dominant_counts: dict[bytes, int] = {}
    seed_key = seed_flat.tobytes()
    n_nodes = 0
    while heap:
        key = heapq.heappop(heap).pair
        chunks = buckets.pop(key)
        merged = np.concatenate(chunks, axis=0) if len(chunks) > 1 else chunks[0]
        pending_rows -= len(merged)
        uniq, counts = _unique_rows(merged)
        n_nodes += len(uniq)
        if n_nodes > max_nodes or pending_rows > 8 * max_nodes:
            raise SizeLimitError(
                f"weight system exceeds {max_nodes} nodes; raise max_nodes"
            )
        dom_mask = _dominant_mask(uniq)
        for row, count in zip(uniq[dom_mask], counts[dom_mask]):
            dominant_counts[row.tobytes()] = int(count)
        # points with a negative root coordinate can never reach a dominant
        # point again (subtraction only lowers root coordinates, and dominant
        # points have nonnegative ones), so the closure is pruned to the
        # positive root cone without affecting the dominant tally
        frontier = uniq[_cone_mask(uniq, adj_a, adj_b)]
        if not len(frontier):
            continue
        child_blocks = []
        total_blocks = []
        for i in range(rank):
            a = frontier[:, 2 * i]
            b = frontier[:, 2 * i + 1]
            positive = _positive_mask(a, b)
            if not positive.any():
                continue
            fa = a[positive]
            fb = b[positive]
            base = frontier[positive]
            g = np.gcd(np.abs(fa), np.abs(fb))
            sa = fa // g
            sb = fb // g
            reps = np.repeat(np.arange(len(base)), g)
            ends = np.cumsum(g)
            k = np.arange(int(ends[-1])) - np.repeat(ends - g, g) + 1
            ma = k * sa[reps]
            mb = k * sb[reps]
            child_blocks.append(base[reps] - ma[:, None] * U[i] - mb[:, None] * V[i])
            total_blocks.append(np.stack((ma + key[0], mb + key[1]), axis=1))
        if not child_blocks:
            continue
        children = np.concatenate(child_blocks, axis=0)
        totals = np.concatenate(total_blocks, axis=0)
        # group children by their total subtracted multiple
        tkeys = _pack_rows(totals)
        if tkeys is None:
            tkeys = totals[:, 0] * (1 << 32) + totals[:, 1]  # |totals| << 2**31
        order = np.argsort(tkeys, kind="stable")
        sorted_keys = tkeys[order]
        rows_sorted = children[order]
        totals_sorted = totals[order]
        boundaries = np.nonzero(np.diff(sorted_keys))[0] + 1
        starts = np.concatenate(([0], boundaries)).tolist()
        stops = np.concatenate((boundaries, [len(sorted_keys)])).tolist()
        for s, e in zip(starts, stops):
            push((int(totals_sorted[s, 0]), int(totals_sorted[s, 1])),
                 rows_sorted[s:e])
    adjugate = group._adjugate_int
    decorated = []
    for key_bytes, count in dominant_counts.items():
        flat = np.frombuffer(key_bytes, dtype=np.int64)
        pairs = [(int(flat[2 * i]), int(flat[2 * i + 1])) for i in range(rank)]
        # det * <x,x> as an integer pair: the sort key needs no Fractions
        na = nb = 0
        for i, (ai, bi) in enumerate(pairs):
            ta = tb = 0
            for j, (aj, bj) in enumerate(pairs):
                ca, cb = adjugate[i][j]
                ta += ca * aj + cb * bj
                tb += ca * bj + cb * aj + cb * bj
            na += ai * ta + bi * tb
            nb += ai * tb + bi * ta + bi * tb
        w = Weight(group, tuple(GoldenNumber(a, b) for a, b in pairs))
        sort_key = (
            -value_fraction(GoldenNumber(na, nb)),
            tuple(value_fraction(c) for c in w.coords),
        )
        item = (w, count if key_bytes != seed_key else max(1, count - 1))
        decorated.append((sort_key, item))
    decorated.sort(key=lambda pair: pair[0])
    return [item for _, item in decorated]


class _MultipleKey:
    """Heap key ordering Z[tau] totals by their exact real value."""

    __slots__ = ("pair",)

    def __init__(self, pair: tuple[int, int]):
        self.pair = pair

    def __lt__(self, other: "_MultipleKey") -> bool:
        da = self.pair[0] - other.pair[0]
        db = self.pair[1] - other.pair[1]
        return _sign_pair(da, db) < 0


def _pack_rows(rows: np.ndarray) -> np.ndarray | None:
    """Pack small-integer rows into single int64 keys (None if too wide)."""
    if not len(rows):
        return np.empty(0, dtype=np.int64)
    bound = int(np.abs(rows).max())
    bits = max(2, (2 * bound + 1).bit_length())
    if bits * rows.shape[1] > 63:
        return None
    keys = np.zeros(len(rows), dtype=np.int64)
    offset = 1 << (bits - 1)
    for lane in range(rows.shape[1]):
        keys = (keys << bits) | (rows[:, lane] + offset)
    return keys


def _unique_rows(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Distinct rows with occurrence counts (packed fast path when narrow)."""
    keys = _pack_rows(rows)
    if keys is None:
        return np.unique(rows, axis=0, return_counts=True)
    _, first, counts = np.unique(keys, return_index=True, return_counts=True)
    return rows[first], counts


def _positive_mask(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    s = 2 * a + b
    ss = s * s
    bb = 5 * b * b
    return np.where(
        (s >= 0) & (b >= 0),
        (s != 0) | (b != 0),
        np.where((s <= 0) & (b <= 0), False, np.where(s > 0, ss > bb, bb > ss)),
    )


def _nonneg_lanes(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    s = 2 * a + b
    ss = s * s
    bb = 5 * b * b
    return np.where(
        (s >= 0) & (b >= 0),
        True,
        np.where((s <= 0) & (b <= 0), (s == 0) & (b == 0),
                 np.where(s > 0, ss > bb, bb > ss)),
    )


def _dominant_mask(rows: np.ndarray) -> np.ndarray:
    return _nonneg_lanes(rows[:, 0::2], rows[:, 1::2]).all(axis=1)


def _cone_mask(rows: np.ndarray, adj_a: np.ndarray, adj_b: np.ndarray) -> np.ndarray:
    """Rows whose root coordinates (adjugate * x; det > 0) are all >= 0."""
    a = rows[:, 0::2]
    b = rows[:, 1::2]
    ca = a @ adj_a.T + b @ adj_b.T
    cb = b @ adj_a.T + (a + b) @ adj_b.T
    return _nonneg_lanes(ca, cb).all(axis=1)


# ---------------------------------------------------------------------------
# closed-form catalogue of lower-orbit dominants for the six H3 seed families


def _fl(x) -> int:
    return floor(Fraction(x))


def _family_a00(a):
    rows = [(a - 2 * k, k, 0) for k in range(0, a // 2 + 1)]
    if a % 2 == 0:
        rows.append((0, Fraction(a, 2) * (TAU - 1), 0))
    if a % 2 == 1 and a > 3:
        rows.append((0, (a // 2) * TAU - _fl(Fraction(a + 2, 2)), TAU))
    return rows


def _family_0a0(a):
    rows = [(k, a - 2 * k, k * TAU) for k in range(0, a // 2 + 1)]
    if a % 2 == 0:
        half = Fraction(a, 2)
        rows.append((0, 0, 0))
        rows.append((half * (TAU - 1), 0, half))
        rows.append((a, half * (TAU - 1), 0))
    if a % 2 == 1 and a > 3:
        drop = (a // 2) * TAU - _fl(Fraction(a + 2, 2))
        rows.append((drop, TAU + 1, (a // 2) - TAU))
        rows.append((a, drop, TAU))
    return rows


def _family_00a(a):
    rows = [(0, k * TAU, a - 2 * k) for k in range(0, a // 2 + 1)]
    if a % 2 == 0:
        half = Fraction(a, 2)
        rows.append((0, half * (TAU - 1), 0))
        rows.append((half * TAU, 0, half * (TAU - 1)))
    if a % 2 == 1 and a > 3:
        drop = (a // 2) * TAU - _fl(Fraction(a + 2, 2))
        rows.append(((a // 2) * TAU, TAU, drop))
        rows.append((TAU + 1, drop, 0))
    return rows


def _family_aa0(a):
    rows = [(a, a, 0), (0, 0, a * TAU), (a, a * (TAU - 1), 0)]
    if a > 1:
        for k in range(1, a // 2 + 1):
            rows.append((a - 2 * k, a + k, 0))
            rows.append((a + k, a - 2 * k, k * TAU))
    if a % 2 == 0:
        half = Fraction(a, 2)
        rows.append((half * (2 * TAU - 1), 0, half * (2 - TAU)))
        rows.append((0, half * (TAU - 1), 0))
        rows.append((half * 4, half * (TAU - 1), 0))
        rows.append((0, half * (2 - TAU), a))
    if a > 4:
        rows.append((a, (a - 1) * TAU - (a + 1), 2 * TAU))
    if a % 2 == 1 and a > 3:
        drop = (a // 2) * TAU - _fl(Fraction(a, 2) + 1)
        rows.append((2 * a, drop, TAU))
        rows.append((0, drop, TAU))
    if a > 8:
        rows.append((a, (a - 2) * TAU - (a + 2), 4 * TAU))
    return rows


def _family_a0a(a):
    rows = [(a, 0, a), (a * TAU, 0, 0)]
    if a > 1:
        for k in range(1, a // 2 + 1):
            rows.append((a - 2 * k, k, a))
            rows.append((a, k * TAU, a - 2 * k))
    if a % 2 == 1 and a > 1:
        for k in range(0, (a - 2) // 4 + 1):
            rows.append((0, (a - 2 * k - 1) * TAU - _fl(Fraction(a, 2) + k + 1),
                         (2 * k + 1) * (TAU + 1)))
    if a % 2 == 0:
        half = Fraction(a, 2)
        rows.append((0, half, 0))
        rows.append((half * (TAU + 2), 0, half * (TAU - 1)))
        rows.append((half, 0, half * (2 - TAU)))
        rows.append((half * (TAU - 1), 0, half * (2 * TAU - 1)))
        for k in range(0, a // 4 + 1):
            rows.append((0, (a - 2 * k) * TAU - half - k, 2 * k * (TAU + 1)))
    if a % 2 == 1 and a > 1:
        rows.append((TAU + 2, (a // 2) * TAU - 1, 0))
    if a % 2 == 1 and a > 3:
        drop = (a // 2) * TAU - _fl(Fraction(a, 2) + 1)
        rows.append(((a // 2) * TAU + a, TAU, drop))
        rows.append((drop, TAU + 1, (a - 1) * TAU - _fl(Fraction(a, 2) + 1)))
    if a % 2 == 0 and a > 4:
        rows.append((2 * TAU + 4, (Fraction(a, 2) - 1) * TAU - 2, 0))
    if a % 2 == 1 and a > 5:
        rows.append((3 * TAU + 6, _fl(Fraction(a, 2) - 1) * TAU - 3, 0))
    return rows


def _family_0aa(a):
    rows = [(0, a, a), (a * (TAU + 1), 0, 0)]
    if a > 1:
        for k in range(1, a // 2 + 1):
            rows.append((k, a - 2 * k, k * TAU + a))
            rows.append((0, k * TAU + a, a - 2 * k))
    if a % 2 == 0:
        half = Fraction(a, 2)
        rows.append((0, 0, a))
        rows.append((half * (2 * TAU - 1), 0, half * TAU))
        rows.append((0, half * (TAU - 1), 0))
        for k in range(0, a // 4 + 1):
            rows.append(((half - k) * (TAU + 1), 2 * k * (TAU + 1),
                         (a - 2 * k) * TAU - _fl(half + k)))
            rows.append((a, (a - 2 * k) * TAU - half - k, 2 * k * (TAU + 1)))
    if a % 2 == 1 and a > 1:
        for k in range(0, (a - 3) // 4 + 1):
            rows.append((_fl(Fraction(a, 2) - k) * (TAU + 1),
                         (2 * k + 1) * (TAU + 1),
                         (a - 2 * k - 1) * TAU - _fl(Fraction(a, 2) + k + 1)))
            rows.append((a,
                         (a - 2 * k - 1) * TAU - _fl(Fraction(a, 2) + k + 1),
                         (2 * k + 1) * (TAU + 1)))
    if a % 2 == 1 and a > 3:
        rows.append(((a - 1) * TAU - _fl(Fraction(a, 2) + 1), 2 * TAU + 1,
                     _fl(Fraction(a, 2) - 1) * TAU - 1))
    return rows


_FAMILIES = {
    "(a,0,0)": _family_a00,
    "(0,a,0)": _family_0a0,
    "(0,0,a)": _family_00a,
    "(a,a,0)": _family_aa0,
    "(a,0,a)": _family_a0a,
    "(0,a,a)": _family_0aa,
}


def closed_form_lower_orbits(family: str, a: int) -> set[Weight]:
    """Evaluate the closed-form lower-orbit catalogue rows for one family.

    ``family`` is one of ``(a,0,0)``, ``(0,a,0)``, ``(0,0,a)``, ``(a,a,0)``,
    ``(a,0,a)``, ``(0,a,a)`` and ``1 <= a <= 9``.  Row conditions are honored
    literally; the output is meant for cross-checking :func:`build_tree`.
    """
    key = family.replace(" ", "")
    if key not in _FAMILIES:
        raise DomainError(f"unknown family {family!r}; choose from {sorted(_FAMILIES)}")
    if not 1 <= a <= 9:
        raise DomainError("family parameter must be in 1..9")
    rows = _FAMILIES[key](a)
    out = set()
    for row in rows:
        coords = tuple(
            v if isinstance(v, GoldenNumber) else GoldenNumber(Fraction(v))
            for v in row
        )
        out.add(Weight(H3, coords))
    return out


# ---------------------------------------------------------------------------
# export


def tree_to_dot(tree: SubtractionTree) -> str:
    """DOT rendering: one node per distinct weight, revisited weights in gray."""
    lines = ["digraph weight_system {", "  rankdir=TB;", "  node [shape=box];"]
    order = [n.weight for n in tree.nodes if n.first_visit]
    ids = {w: f"n{i}" for i, w in enumerate(order)}
    for w in order:
        style = ' color=gray fontcolor=gray' if tree.arrivals[w] > 1 else ""
        lines.append(f'  {ids[w]} [label="({w.text()})"{style}];')
    for e in tree.edges:
        lines.append(f'  {ids[e.source]} -> {ids[e.target]} [label="{e.label()}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def tree_to_json(tree: SubtractionTree) -> str:
    payload = {
        "group": tree.group.tag,
        "seed": list(tree.seed.texts()),
        "nodes": [
            {
                "coords": list(n.weight.texts()),
                "first_visit": n.first_visit,
            }
            for n in tree.nodes
        ],
        "edges": [
            {
                "from": list(e.source.texts()),
                "to": list(e.target.texts()),
                "multiple": str(e.multiple),
                "root_index": e.root_index,
            }
            for e in tree.edges
        ],
        "lower_dominants": [
            {"coords": list(w.texts()), "count": c}
            for w, c in tree.lower_dominants
        ],
    }
    return json.dumps(payload, indent=2) + "\n"

"""Two-colorings of Z^d as color oracles, and their sensitivity measures.

Internally axes are 0-based (they index numpy columns and the JSON file
format); reports shown to people use 1-based axes.

Every coloring answers ``blue_batch(points)`` for an ``(N, d)`` integer
array. Kinds that admit an exactness argument also expose
``representatives()``: per-axis finite value lists such that every point of
Z^d, together with its 2d neighbors, has the same colors as some point of
the product box. The map to a representative acts coordinate-wise and
commutes with +-1 steps, so these lists compose through doubling,
reflection and repetition.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .errors import NonTrivialityError, PreconditionError, ResourceLimitError

DEFAULT_PROBE_CAP = 10**8
DEFAULT_WIDTH_CAP = 64
SCAN_CHUNK = 1 << 15
BOX_PREFERENCE_POINTS = 1 << 20
SAMPLER = "numpy.random.Generator(PCG64)"


class Color(IntEnum):
    RED = 0
    BLUE = 1


class Coloring:
    """Abstract two-coloring of Z^d; subclasses implement ``blue_batch``."""

    d: int
    kind = "abstract"

    def blue_batch(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def color(self, point: Sequence[int]) -> Color:
        p = _as_points(point, self.d)
        return Color(int(self.blue_batch(p)[0]))

    def representatives(self) -> list[np.ndarray] | None:
        return None

    def group_structure(self) -> list[tuple[np.ndarray, "Coloring"]] | None:
        """Coordinate groups (g, C_g) with: blue iff some C_g(x[g]) is blue."""
        return None

    def to_spec(self) -> dict:
        raise PreconditionError(f"{self.kind} colorings have no file form")

    def fingerprint(self) -> str:
        try:
            text = json.dumps(self.to_spec(), sort_keys=True)
        except PreconditionError:
            text = repr(self)
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def _as_points(points, d: int) -> np.ndarray:
    arr = np.asarray(points, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != d:
        raise PreconditionError(f"points must have dimension {d}")
    return np.ascontiguousarray(arr)


@dataclass(frozen=True)
class Slice:
    """Points with x[axis] == c and x[i] == 0 for every i in zeros (0-based)."""

    axis: int
    c: int
    zeros: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "zeros", frozenset(int(z) for z in self.zeros))
        if self.c == 0:
            raise PreconditionError("slice constant must be nonzero")
        if self.axis in self.zeros:
            raise PreconditionError("slice axis cannot also be a zero coordinate")

    def contains(self, point: Sequence[int]) -> bool:
        return point[self.axis] == self.c and all(point[z] == 0 for z in self.zeros)

    def intersects(self, other: "Slice") -> bool:
        """Two slices meet iff no coordinate is pinned to two different values."""
        pins = {self.axis: self.c, **{z: 0 for z in self.zeros}}
        for coord, val in [(other.axis, other.c), *[(z, 0) for z in other.zeros]]:
            if coord in pins and pins[coord] != val:
                return False
        return True

    def to_spec(self) -> dict:
        return {"axis": self.axis, "c": self.c, "zeros": sorted(self.zeros)}


class SlicedColoring(Coloring):
    """Blue exactly on a union of slices."""

    kind = "sliced"

    def __init__(self, d: int, slices: Sequence[Slice]):
        self.d = int(d)
        self.slices = tuple(slices)
        for s in self.slices:
            if not 0 <= s.axis < d or any(not 0 <= z < d for z in s.zeros):
                raise PreconditionError("slice coordinate out of range")
        self._axes = np.array([s.axis for s in self.slices], dtype=np.int64)
        self._cs = np.array([s.c for s in self.slices], dtype=np.int64)
        ptr = [0]
        idx: list[int] = []
        for s in self.slices:
            idx.extend(sorted(s.zeros))
            ptr.append(len(idx))
        self._zptr = np.array(ptr, dtype=np.int64)
        self._zidx = np.array(idx, dtype=np.int64)

    def blue_batch(self, points):
        p = _as_points(points, self.d)
        if not self.slices:
            return np.zeros(p.shape[0], dtype=bool)
        return _kernels.sliced_blue(p, self._axes, self._cs, self._zptr, self._zidx).astype(bool)

    def relevant_values(self, axis: int) -> list[int]:
        return sorted({0} | {s.c for s in self.slices if s.axis == axis})

    def representatives(self):
        out = []
        for j in range(self.d):
            rel = self.relevant_values(j)
            vals = {v + dv for v in rel for dv in (-1, 0, 1)}
            vals.add(max(rel) + 3)
            out.append(np.array(sorted(vals), dtype=np.int64))
        return out

    def group_structure(self):
        if not self.slices:
            return None
        parent = list(range(self.d))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for s in self.slices:
            for z in s.zeros:
                parent[find(z)] = find(s.axis)
        members: dict[int, list[int]] = {}
        for s in self.slices:
            members.setdefault(find(s.axis), [])
        for j in range(self.d):
            if find(j) in members:
                members[find(j)].append(j)
        if len(members) < 2:
            return None
        groups = []
        for root in sorted(members, key=lambda r: members[r][0]):
            coords = members[root]
            local = {g: i for i, g in enumerate(coords)}
            sub = [
                Slice(local[s.axis], s.c, frozenset(local[z] for z in s.zeros))
                for s in self.slices
                if find(s.axis) == root
            ]
            groups.append((np.array(coords, dtype=np.int64), SlicedColoring(len(coords), sub)))
        return groups

    def conformance_problems(self) -> list[str]:
        """Why this is not a sliced coloring in the strict sense (empty if it is)."""
        problems = []
        if len(self.slices) != self.d:
            problems.append(f"expected exactly {self.d} slices, found {len(self.slices)}")
        axes = [s.axis for s in self.slices]
        if sorted(axes) != list(range(self.d)):
            problems.append("slices must have one distinct nonzero axis per dimension")
        if any(abs(s.c) < 3 for s in self.slices):
            problems.append("every slice constant must have magnitude >= 3")
        return problems

    def slice_on_axis(self, axis: int) -> Slice:
        for s in self.slices:
            if s.axis == axis:
                return s
        raise PreconditionError(f"no slice on axis {axis}")

    def to_spec(self):
        return {"kind": "sliced", "d": self.d, "slices": [s.to_spec() for s in self.slices]}

    def __repr__(self):
        return f"SlicedColoring(d={self.d}, slices={len(self.slices)})"


class MirrorPeriodicColoring(Coloring):
    """A (b_1+1) x ... x (b_d+1) box tiled alternately with its mirror image."""

    kind = "mirror-periodic"

    def __init__(self, b: Sequence[int], base):
        self.b = tuple(int(v) for v in b)
        if any(v < 1 for v in self.b):
            raise PreconditionError("box sizes must be positive")
        self.d = len(self.b)
        base = np.asarray(base, dtype=bool).reshape(tuple(v + 1 for v in self.b))
        base.setflags(write=False)
        self.base = base
        self._b = np.array(self.b, dtype=np.int64)

    @property
    def period(self) -> tuple[int, ...]:
        return tuple(2 * (v + 1) for v in self.b)

    def fold(self, points) -> np.ndarray:
        """Map points to their base-box cell."""
        p = _as_points(points, self.d)
        z = np.mod(p, 2 * (self._b + 1))
        return np.where(z <= self._b, z, 2 * self._b + 1 - z)

    def blue_batch(self, points):
        y = self.fold(points)
        return self.base[tuple(y.T)]

    def representatives(self):
        return [np.arange(p, dtype=np.int64) for p in self.period]

    def to_spec(self):
        flat = self.base.reshape(-1).astype(np.uint8)
        value = int.from_bytes(np.packbits(flat, bitorder="little").tobytes(), "little")
        digits = max(1, (flat.size + 3) // 4)
        return {"kind": "mirror-periodic", "b": list(self.b), "colors": format(value, f"0{digits}X")}

    def __repr__(self):
        return f"MirrorPeriodicColoring(b={self.b})"


class RepeatedColoring(Coloring):
    """``copies`` consecutive coordinate groups; blue iff some group is blue in ``inner``."""

    kind = "repeated"

    def __init__(self, inner: Coloring, copies: int):
        if copies < 1:
            raise PreconditionError("copies must be >= 1")
        self.inner = inner
        self.copies = int(copies)
        self.k = inner.d
        self.d = inner.d * self.copies

    def blue_batch(self, points):
        p = _as_points(points, self.d)
        inner = self.inner.blue_batch(p.reshape(-1, self.k))
        return inner.reshape(-1, self.copies).any(axis=1)

    def representatives(self):
        reps = self.inner.representatives()
        return None if reps is None else reps * self.copies

    def group_structure(self):
        return [
            (np.arange(i * self.k, (i + 1) * self.k, dtype=np.int64), self.inner)
            for i in range(self.copies)
        ]

    def to_spec(self):
        return {"kind": "repeated", "inner": self.inner.to_spec(), "copies": self.copies}

    def __repr__(self):
        return f"RepeatedColoring({self.inner!r}, copies={self.copies})"


class DoubledColoring(Coloring):
    """Every point of ``inner`` blown up to a 2 x ... x 2 cube: y -> ceil(y/2)."""

    kind = "doubled"

    def __init__(self, inner: Coloring):
        self.inner = inner
        self.d = inner.d

    def blue_batch(self, points):
        p = _as_points(points, self.d)
        return self.inner.blue_batch(-((-p) // 2))

    def representatives(self):
        reps = self.inner.representatives()
        if reps is None:
            return None
        return [np.unique(np.concatenate([2 * r - 1, 2 * r])) for r in reps]

    def group_structure(self):
        groups = self.inner.group_structure()
        if groups is None:
            return None
        return [(coords, DoubledColoring(g)) for coords, g in groups]

    def to_spec(self):
        return {"kind": "doubled", "inner": self.inner.to_spec()}

    def __repr__(self):
        return f"DoubledColoring({self.inner!r})"


class ReflectedColoring(Coloring):
    kind = "reflected"

    def __init__(self, inner: Coloring, signs: Sequence[int]):
        signs = tuple(int(s) for s in signs)
        if len(signs) != inner.d or any(s not in (1, -1) for s in signs):
            raise PreconditionError("signs must be +1/-1, one per axis")
        self.inner = inner
        self.signs = signs
        self.d = inner.d
        self._s = np.array(signs, dtype=np.int64)

    def blue_batch(self, points):
        p = _as_points(points, self.d)
        return self.inner.blue_batch(p * self._s)

    def representatives(self):
        reps = self.inner.representatives()
        if reps is None:
            return None
        return [np.unique(s * r) for s, r in zip(self.signs, reps)]

    def group_structure(self):
        groups = self.inner.group_structure()
        if groups is None:
            return None
        return [(coords, ReflectedColoring(g, [self.signs[j] for j in coords.tolist()]))
                for coords, g in groups]

    def to_spec(self):
        return {"kind": "reflected", "inner": self.inner.to_spec(), "signs": list(self.signs)}

    def __repr__(self):
        return f"ReflectedColoring({self.inner!r}, signs={self.signs})"


class OracleColoring(Coloring):
    """A coloring given by a vectorized callback.

    ``representatives`` may be supplied when the caller knows a finite
    exactness box (same contract as the built-in kinds); without it only
    box scans and sampling apply.
    """

    kind = "oracle"

    def __init__(self, d: int, fn: Callable[[np.ndarray], np.ndarray], name: str = "oracle",
                 representatives: Sequence[Sequence[int]] | None = None):
        self.d = int(d)
        self._fn = fn
        self.name = name
        self._reps = None if representatives is None else [
            np.array(sorted(set(r)), dtype=np.int64) for r in representatives
        ]

    def blue_batch(self, points):
        p = _as_points(points, self.d)
        return np.asarray(self._fn(p), dtype=bool).reshape(-1)

    def representatives(self):
        return self._reps

    def __repr__(self):
        return f"OracleColoring(d={self.d}, name={self.name!r})"


def constant_coloring(d: int, blue: bool = False) -> OracleColoring:
    name = "all-blue" if blue else "all-red"
    return OracleColoring(d, lambda p: np.full(p.shape[0], blue), name, [[0]] * d)


def checkerboard(d: int) -> OracleColoring:
    """Blue where the coordinate sum is odd."""
    return OracleColoring(d, lambda p: (p.sum(axis=1) & 1) == 1, "checkerboard", [[0, 1]] * d)


def double_coloring(c: Coloring) -> DoubledColoring:
    return DoubledColoring(c)


def reflect(c: Coloring, signs: Sequence[int]) -> ReflectedColoring:
    return ReflectedColoring(c, signs)


# ---------------------------------------------------------------- pointwise

def _neighbor_diffs(c: Coloring, points: np.ndarray):
    """(blue, s, r) for a batch of points."""
    blue = c.blue_batch(points)
    s = np.zeros(points.shape[0], dtype=np.int64)
    r = np.zeros(points.shape[0], dtype=np.int64)
    for j in range(c.d):
        hit = np.zeros(points.shape[0], dtype=bool)
        for delta in (-1, 1):
            moved = points.copy()
            moved[:, j] += delta
            diff = c.blue_batch(moved) != blue
            s += diff
            hit |= diff
        r += hit
    return blue, s, r


def point_sensitivity(c: Coloring, point: Sequence[int]) -> int:
    _, s, _ = _neighbor_diffs(c, _as_points(point, c.d))
    return int(s[0])


def axis_sensitivity(c: Coloring, point: Sequence[int]) -> int:
    _, _, r = _neighbor_diffs(c, _as_points(point, c.d))
    return int(r[0])


# ---------------------------------------------------------------- min-width

@dataclass
class MinWidth:
    k: int
    distances: list[int]
    signs: list[int]

    def witness(self, axis: int, d: int) -> list[int]:
        p = [0] * d
        p[axis] = self.signs[axis] * self.distances[axis]
        return p


def min_width(c: Coloring, cap: int = DEFAULT_WIDTH_CAP) -> MinWidth:
    """Nearest blue axis point per axis; ties between the two sides go to +."""
    if cap < 1:
        raise PreconditionError("cap must be >= 1")
    t = np.arange(1, cap + 1, dtype=np.int64)
    dists, signs = [], []
    for j in range(c.d):
        pts = np.zeros((2 * cap, c.d), dtype=np.int64)
        pts[:cap, j] = t
        pts[cap:, j] = -t
        blue = c.blue_batch(pts)
        pos = np.nonzero(blue[:cap])[0]
        neg = np.nonzero(blue[cap:])[0]
        best_pos = int(pos[0]) + 1 if pos.size else None
        best_neg = int(neg[0]) + 1 if neg.size else None
        if best_pos is None and best_neg is None:
            raise NonTrivialityError(f"no blue within cap {cap} on axis {j + 1}")
        if best_neg is None or (best_pos is not None and best_pos <= best_neg):
            dists.append(best_pos)
            signs.append(1)
        else:
            dists.append(best_neg)
            signs.append(-1)
    return MinWidth(max(dists) if dists else 0, dists, signs)


@dataclass
class NontrivialityReport:
    passed: bool
    origin_red: bool
    width: MinWidth | None
    reason: str | None = None

    def to_dict(self) -> dict:
        out = {"passed": self.passed, "origin_red": self.origin_red, "reason": self.reason}
        if self.width is not None:
            out["min_width"] = self.width.k
            out["axis_distances"] = self.width.distances
            out["axis_signs"] = self.width.signs
        return out


def check_nontrivial(c: Coloring, cap: int = DEFAULT_WIDTH_CAP) -> NontrivialityReport:
    origin_red = c.color([0] * c.d) == Color.RED
    if not origin_red:
        return NontrivialityReport(False, False, None, "origin not red")
    try:
        width = min_width(c, cap)
    except NonTrivialityError as exc:
        return NontrivialityReport(False, True, None, str(exc))
    return NontrivialityReport(True, True, width)


def require_nontrivial(c: Coloring, cap: int = DEFAULT_WIDTH_CAP) -> MinWidth:
    rep = check_nontrivial(c, cap)
    if not rep.passed:
        raise NonTrivialityError(rep.reason)
    return rep.width


# ---------------------------------------------------------------- reports

@dataclass
class ColoringReport:
    d: int
    s: int
    r: int
    sR: int
    sB: int
    mode: str
    witnesses: dict[str, list[int] | None] = field(default_factory=dict)
    min_width: int | None = None
    points: int = 0
    seed: int | None = None

    def to_dict(self) -> dict:
        out = {
            "d": self.d, "s": self.s, "r": self.r, "sR": self.sR, "sB": self.sB,
            "min_width": self.min_width, "mode": self.mode, "points": self.points,
            "witnesses": self.witnesses,
        }
        if self.seed is not None:
            out["seed"] = self.seed
            out["sampler"] = SAMPLER
        return out

    def replay(self, c: Coloring) -> bool:
        """Re-probe every witness point; each must reproduce its value."""
        for key, want in (("s", self.s), ("r", self.r), ("sR", self.sR), ("sB", self.sB)):
            p = self.witnesses.get(key)
            if p is None:
                if want != 0:
                    return False
                continue
            pts = _as_points(p, c.d)
            blue, s, r = _neighbor_diffs(c, pts)
            got = int(s[0]) if key == "s" else int(r[0])
            if got != want:
                return False
            if key == "sR" and blue[0] or key == "sB" and not blue[0]:
                return False
        return True


class _Best:
    """Running maximum with first-seen witness (scan order = lexicographic)."""

    def __init__(self):
        self.value = 0
        self.point = None

    def offer(self, values: np.ndarray, points: np.ndarray, mask=None):
        if mask is not None:
            if not mask.any():
                return
            idx = np.nonzero(mask)[0]
            values, points = values[idx], points[idx]
        if values.size == 0:
            return
        j = int(np.argmax(values))
        if self.point is None or values[j] > self.value:
            self.value = int(values[j])
            self.point = [int(v) for v in points[j]]


def _scan(c: Coloring, point_chunks, mode: str, with_width: bool = True, **extra) -> ColoringReport:
    best = {k: _Best() for k in ("s", "r", "sR", "sB")}
    total = 0
    for pts in point_chunks:
        blue, s, r = _neighbor_diffs(c, pts)
        best["s"].offer(s, pts)
        best["r"].offer(r, pts)
        best["sR"].offer(r, pts, ~blue)
        best["sB"].offer(r, pts, blue)
        total += pts.shape[0]
    rep = ColoringReport(
        c.d, best["s"].value, best["r"].value, best["sR"].value, best["sB"].value, mode,
        {k: b.point for k, b in best.items()}, points=total, **extra,
    )
    if with_width:
        rep.min_width = _width_or_none(c)
    return rep


def _width_or_none(c: Coloring) -> int | None:
    rep = check_nontrivial(c)
    return rep.width.k if rep.passed else None


def _box_chunks(values: list[np.ndarray], chunk: int = SCAN_CHUNK):
    shape = tuple(len(v) for v in values)
    total = int(np.prod(shape, dtype=object))
    for start in range(0, total, chunk):
        flat = np.arange(start, min(total, start + chunk), dtype=np.int64)
        idx = np.unravel_index(flat, shape)
        yield np.stack([values[j][idx[j]] for j in range(len(values))], axis=1)


def _check_budget(npoints: int, d: int, probe_cap: int):
    probes = npoints * (2 * d + 1)
    if probes > probe_cap:
        raise ResourceLimitError(f"scan needs {probes} probes, cap is {probe_cap}")


def representative_box(c: Coloring) -> list[np.ndarray]:
    reps = c.representatives()
    if reps is None:
        raise PreconditionError(f"{c.kind} coloring has no representative box")
    return reps


def exact_report_periodic(c: MirrorPeriodicColoring, probe_cap: int = DEFAULT_PROBE_CAP) -> ColoringReport:
    """Scan one full period box; by periodicity its maxima are the global maxima."""
    if not isinstance(c, MirrorPeriodicColoring):
        raise PreconditionError("exact_report_periodic needs a mirror-periodic coloring")
    box = [np.arange(p, dtype=np.int64) for p in c.period]
    _check_budget(int(np.prod(c.period, dtype=object)), c.d, probe_cap)
    return _scan(c, _box_chunks(box), "exact-period")


def box_report(c: Coloring, lo: int | Sequence[int], hi: int | Sequence[int],
               probe_cap: int = DEFAULT_PROBE_CAP) -> ColoringReport:
    """Exhaustive scan of the box lo..hi (inclusive); values are lower bounds in general."""
    lo = np.broadcast_to(np.asarray(lo, dtype=np.int64), (c.d,))
    hi = np.broadcast_to(np.asarray(hi, dtype=np.int64), (c.d,))
    box = [np.arange(a, b + 1, dtype=np.int64) for a, b in zip(lo, hi)]
    _check_budget(int(np.prod([len(v) for v in box], dtype=object)), c.d, probe_cap)
    return _scan(c, _box_chunks(box), "box-scan")


def _group_tables(c: Coloring, probe_cap: int):
    """Per-group maxima over red and blue points, for the factorized scan."""
    out = []
    for coords, inner in c.group_structure():
        reps = representative_box(inner)
        _check_budget(int(np.prod([len(v) for v in reps], dtype=object)), inner.d, probe_cap)
        best = {k: _Best() for k in ("rR", "sR", "rB", "sB", "red", "blue")}
        for pts in _box_chunks(reps):
            blue, s, r = _neighbor_diffs(inner, pts)
            best["rR"].offer(r, pts, ~blue)
            best["sR"].offer(s, pts, ~blue)
            best["rB"].offer(r, pts, blue)
            best["sB"].offer(s, pts, blue)
            zeros = np.zeros(pts.shape[0], dtype=np.int64)
            best["red"].offer(zeros, pts, ~blue)
            best["blue"].offer(zeros, pts, blue)
        out.append((coords, best, int(np.prod([len(v) for v in reps]))))
    return out


def _factorized_report(c: Coloring, probe_cap: int) -> ColoringReport:
    """Exact maxima for colorings that are blue iff some coordinate group is blue.

    A move changes one group only. At a point where every group is red the
    sensitivities add up over groups; at a point with exactly one blue group
    only that group's moves can reach red; with two or more blue groups no
    move changes the color.
    """
    raw = _group_tables(c, probe_cap)
    tables = [(co, t) for co, t, _ in raw]
    d = c.d

    def assemble(parts):
        p = [0] * d
        for coords, local in parts:
            for g, v in zip(coords.tolist(), local):
                p[g] = v
        return p

    all_have_red = all(t["red"].point is not None for _, t in tables)
    red = {"r": None, "s": None}
    if all_have_red:
        for key, tk in (("r", "rR"), ("s", "sR")):
            value = sum(t[tk].value for _, t in tables)
            red[key] = (value, assemble([(co, t[tk].point) for co, t in tables]))
    blue = {"r": None, "s": None}
    for gi, (coords, t) in enumerate(tables):
        if t["blue"].point is None:
            continue
        others = [(co, o["red"].point) for gj, (co, o) in enumerate(tables) if gj != gi]
        if any(p is None for _, p in others):
            continue
        for key, tk in (("r", "rB"), ("s", "sB")):
            cand = (t[tk].value, assemble([(coords, t[tk].point), *others]))
            if blue[key] is None or cand[0] > blue[key][0]:
                blue[key] = cand
    blue_groups = [t for _, t in tables if t["blue"].point is not None]
    if blue["r"] is None and len(blue_groups) >= 2:
        # only points with several blue groups exist; none of them is sensitive
        parts = [(co, t["blue"].point) for co, t in tables if t["blue"].point is not None]
        parts += [(co, t["red"].point) for co, t in tables if t["blue"].point is None]
        p = assemble(parts)
        blue = {"r": (0, p), "s": (0, p)}

    def pick(*cands):
        cands = [x for x in cands if x is not None]
        if not cands:
            return 0, None
        return max(cands, key=lambda x: x[0])

    s_val, s_pt = pick(red["s"], blue["s"])
    r_val, r_pt = pick(red["r"], blue["r"])
    sr_val, sr_pt = pick(red["r"])
    sb_val, sb_pt = pick(blue["r"])
    points = sum(n for _, _, n in raw)
    rep = ColoringReport(d, s_val, r_val, sr_val, sb_val, "exact-representative",
                         {"s": s_pt, "r": r_pt, "sR": sr_pt, "sB": sb_pt}, points=points)
    rep.min_width = _width_or_none(c)
    return rep


def exact_report(c: Coloring, probe_cap: int = DEFAULT_PROBE_CAP, method: str = "auto") -> ColoringReport:
    """Exact s, r, s^R, s^B over all of Z^d, for kinds with an exactness argument.

    ``method``: ``"box"`` scans the whole representative product box;
    ``"factorized"`` scans each independent coordinate group's box and
    combines; ``"auto"`` takes the full box when it has at most
    ``BOX_PREFERENCE_POINTS`` points or there are no groups.
    """
    if isinstance(c, MirrorPeriodicColoring) and method == "auto":
        return exact_report_periodic(c, probe_cap)
    reps = c.representatives()
    if reps is None:
        raise PreconditionError(f"no exact mode for {c.kind} colorings")
    npoints = int(np.prod([len(v) for v in reps], dtype=object))
    fits = npoints <= BOX_PREFERENCE_POINTS and npoints * (2 * c.d + 1) <= probe_cap
    groups = c.group_structure()
    if method == "box" or (method == "auto" and (fits or groups is None)):
        _check_budget(npoints, c.d, probe_cap)
        return _scan(c, _box_chunks(reps), "exact-representative")
    if method in ("auto", "factorized"):
        if groups is None:
            raise PreconditionError(f"{c!r} has no independent coordinate groups")
        return _factorized_report(c, probe_cap)
    raise PreconditionError(f"unknown method {method!r}")


def exact_report_sliced(c: SlicedColoring, probe_cap: int = DEFAULT_PROBE_CAP, method: str = "auto") -> ColoringReport:
    if not isinstance(c, SlicedColoring):
        raise PreconditionError("exact_report_sliced needs a sliced coloring")
    return exact_report(c, probe_cap, method)


def sampled_report(
    c: Coloring,
    box=None,
    samples: int = 0,
    seed: int = 0,
    witnesses: Sequence[Sequence[int]] = (),
    values: Sequence[Sequence[int]] | None = None,
) -> ColoringReport:
    """Maxima over uniform random points plus the given witness points.

    Points are drawn from ``box`` = ``(lo, hi)`` (inclusive; scalars or
    per-axis sequences) or, when ``values`` is given, from the product of
    those per-axis value lists (e.g. a representative box). Results are
    lower bounds on the true maxima, reproducible from ``seed``.
    """
    if samples < 0:
        raise PreconditionError("samples must be >= 0")
    rng = np.random.default_rng(seed)
    if values is None:
        if box is None:
            box = (-8, 8)
        lo = np.broadcast_to(np.asarray(box[0], dtype=np.int64), (c.d,))
        hi = np.broadcast_to(np.asarray(box[1], dtype=np.int64), (c.d,))
        values = [np.arange(a, b + 1, dtype=np.int64) for a, b in zip(lo, hi)]
    else:
        values = [np.asarray(v, dtype=np.int64) for v in values]
    if len(values) != c.d:
        raise PreconditionError("box dimension mismatch")

    def chunks():
        if len(witnesses):
            yield _as_points(witnesses, c.d)
        left = samples
        while left > 0:
            m = min(SCAN_CHUNK, left)
            cols = [v[rng.integers(0, len(v), size=m)] for v in values]
            yield np.stack(cols, axis=1)
            left -= m

    return _scan(c, chunks(), "sampled", seed=seed)


def repeated_coloring(inner: Coloring, copies: int, box=None, probe_cap: int = DEFAULT_PROBE_CAP) -> RepeatedColoring:
    """Product coloring; the inner red sensitivity must be exactly 1.

    The precondition is measured exactly when ``inner`` has an exact mode,
    otherwise over the caller's ``box`` = (lo, hi).
    """
    if inner.representatives() is not None:
        rep = exact_report(inner, probe_cap)
    elif box is not None:
        rep = box_report(inner, box[0], box[1], probe_cap)
    else:
        raise PreconditionError("inner coloring has no exact mode; pass a box")
    if rep.sR != 1:
        raise PreconditionError(f"inner coloring has s^R = {rep.sR}, expected 1")
    return RepeatedColoring(inner, copies)


# ---------------------------------------------------------------- file format

def coloring_from_spec(spec: dict) -> Coloring:
    kind = spec.get("kind")
    if kind == "sliced":
        slices = [Slice(int(s["axis"]), int(s["c"]), frozenset(s.get("zeros", ()))) for s in spec["slices"]]
        return SlicedColoring(int(spec["d"]), slices)
    if kind == "mirror-periodic":
        b = [int(v) for v in spec["b"]]
        cells = int(np.prod([v + 1 for v in b]))
        value = int(str(spec["colors"]), 16)
        if value >> cells:
            raise PreconditionError("colors has more bits than box cells")
        raw = value.to_bytes(max(1, (cells + 7) // 8), "little")
        flat = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:cells]
        return MirrorPeriodicColoring(b, flat.astype(bool))
    if kind == "repeated":
        return RepeatedColoring(coloring_from_spec(spec["inner"]), int(spec["copies"]))
    if kind == "doubled":
        return DoubledColoring(coloring_from_spec(spec["inner"]))
    if kind == "reflected":
        return ReflectedColoring(coloring_from_spec(spec["inner"]), spec["signs"])
    raise PreconditionError(f"unknown coloring kind {kind!r}")


def load_coloring(path) -> Coloring:
    with open(path) as fh:
        return coloring_from_spec(json.load(fh))


def dump_coloring(c: Coloring) -> str:
    return json.dumps(c.to_spec(), indent=2) + "\n"

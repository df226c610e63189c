"""Bound constants and inequality checks on concrete functions and colorings.

Every check returns a :class:`~senslat.checks.CheckReport` whose inequalities
carry exact integers or rationals wherever the quantities allow it.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction


from . import boolfn as bf
from .checks import CheckReport
from .errors import PreconditionError, ResourceLimitError
from .lattice import (
    DEFAULT_PROBE_CAP,
    ColoringReport,
    RepeatedColoring,
    SlicedColoring,
    axis_sensitivity,
    exact_report,
)

ALPHA = math.exp(-2.0)
ALPHA_SLACK = 1e-12
MAX_GRAPH_VERTICES = 32
E_TERMS = 40


# ---------------------------------------------------------------- constants

@dataclass(frozen=True)
class KKConstant:
    l: int
    value: Fraction

    @property
    def approx(self) -> float:
        return float(self.value)

    def to_dict(self) -> dict:
        return {"l": self.l, "rational": f"{self.value.numerator}/{self.value.denominator}",
                "approx": self.approx}


def kk_constant(l: int) -> KKConstant:
    """c_l = (1 + 1/(l-1))^(l-1) / (l-1)! exactly; c_1 = 1."""
    if l < 1:
        raise PreconditionError("l must be >= 1")
    if l == 1:
        return KKConstant(1, Fraction(1))
    m = l - 1
    return KKConstant(l, (1 + Fraction(1, m)) ** m / math.factorial(m))


def e_bounds(terms: int = E_TERMS) -> tuple[Fraction, Fraction]:
    """Rationals lo < e < hi from the series sum 1/k!, k = 0..terms.

    The tail after term N is below 1/(N! * N).
    """
    if terms < 2:
        raise PreconditionError("terms must be >= 2")
    lo = sum((Fraction(1, math.factorial(k)) for k in range(terms + 1)), Fraction(0))
    hi = lo + Fraction(1, math.factorial(terms) * terms)
    return lo, hi


def kk_strict_check(lmax: int = 50, terms: int = E_TERMS) -> CheckReport:
    """c_l < e/(l-1)! for 2 <= l <= lmax, in exact arithmetic.

    Comparing against the lower rational bound on e makes each passing
    comparison a proof of the strict inequality.
    """
    lo, hi = e_bounds(terms)
    rep = CheckReport("kk-constant-strict")
    for l in range(2, lmax + 1):
        fact = math.factorial(l - 1)
        rep.add(f"c_{l} < e_lo/({l}-1)!", kk_constant(l).value, "<", lo / fact)
    rep.details = {"e_lo": float(lo), "e_hi": float(hi), "terms": terms,
                   "e_lo_rational": f"{lo.numerator}/{lo.denominator}"}
    return rep


def corollary_bound(s: int) -> float:
    """e^(s+1) * sqrt(s / 2 pi)."""
    return math.exp(s + 1) * math.sqrt(s / (2 * math.pi))


# ---------------------------------------------------------------- functions

def kk_check(f: bf.TruthTable, candidate_cap: int = bf.DEFAULT_CANDIDATE_CAP) -> CheckReport:
    """bs_l(f) <= c_l s(f)^l for l = 1..s(f), plus the e^(s+1) corollary."""
    f = bf._require_table(f, "kk_check")
    sens = bf.sensitivity(f)
    s = sens.s
    rep = CheckReport("kk")
    rep.details = {"n": f.n, "table": f.to_hex(), "fingerprint": f.fingerprint(), "s": s}
    if s == 0:
        rep.details.update(bs=0, bs_l={})
        rep.findings.append("constant function: every bound holds trivially, corollary not applicable at s = 0")
        return rep
    values, argx = bf.block_profile(f, s, candidate_cap)
    bs_l = {}
    for l in range(1, s + 1):
        c = kk_constant(l).value
        bs_l[l] = int(values[l])
        rep.add(f"bs_{l} <= c_{l} * s^{l}", int(values[l]), "<=", c * s**l)
    bs = int(values[s])
    rep.add("bs < e^(s+1) * sqrt(s/(2 pi))", bs, "<", corollary_bound(s))
    rep.details.update(bs=bs, bs_l={str(k): v for k, v in bs_l.items()},
                       bs_input=int(argx[s]))
    return rep


def _sweep_range(args) -> dict:
    n, start, stop = args
    counterexamples = []
    worst = Fraction(0)
    worst_table = None
    checked = 0
    for value in range(start, stop):
        f = bf.TruthTable.from_int(n, value)
        s = int(bf.sensitivity_bitmap(f).max())
        checked += 1
        if s == 0:
            continue
        values, _ = bf.block_profile(f, n)
        bs = int(values[n])
        problems = []
        if int(values[1]) != s:
            problems.append("bs_1 != s")
        if int(values[s]) != bs:
            problems.append("bs_s != bs")
        for l in range(1, s + 1):
            c = kk_constant(l).value
            ratio = Fraction(int(values[l])) / (c * s**l)
            if ratio > 1:
                problems.append(f"bs_{l} > c_{l} s^{l}")
            if ratio > worst:
                worst, worst_table = ratio, value
        if not bs < corollary_bound(s):
            problems.append("corollary")
        if problems:
            counterexamples.append({"table": f.to_hex(), "problems": problems})
    return {"checked": checked, "counterexamples": counterexamples,
            "worst_ratio": worst, "worst_table": worst_table}


def partition(total: int, parts: int) -> list[tuple[int, int]]:
    """Split range(total) into ``parts`` contiguous near-equal pieces."""
    parts = max(1, min(parts, total))
    edges = [total * i // parts for i in range(parts + 1)]
    return [(edges[i], edges[i + 1]) for i in range(parts) if edges[i] < edges[i + 1]]


def default_threads() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def kk_sweep(n: int = 4, threads: int | None = None, chunks: int = 64) -> CheckReport:
    """kk_check plus bs_1 = s and bs_s = bs over every function on n <= 4 variables.

    The table range is cut into fixed chunks independent of ``threads``, so
    the merged report is the same for every worker count.
    """
    if not 1 <= n <= 4:
        raise ResourceLimitError("the exhaustive sweep supports n <= 4")
    threads = threads or default_threads()
    total = 1 << (1 << n)
    jobs = [(n, a, b) for a, b in partition(total, chunks)]
    if threads == 1:
        results = [_sweep_range(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_sweep_range, jobs))
    checked = sum(r["checked"] for r in results)
    bad = [c for r in results for c in r["counterexamples"]]
    worst = max(results, key=lambda r: (r["worst_ratio"], -(r["worst_table"] or 0)))
    rep = CheckReport("kk-sweep")
    rep.add("functions checked == 2^(2^n)", checked, "==", total)
    rep.add("counterexamples == 0", len(bad), "==", 0)
    rep.details = {
        "n": n,
        "counterexamples": bad[:20],
        "worst_ratio": worst["worst_ratio"],
        "worst_table": None if worst["worst_table"] is None
        else bf.TruthTable.from_int(n, worst["worst_table"]).to_hex(),
        "constants": {str(l): kk_constant(l).to_dict() for l in range(1, n + 1)},
    }
    return rep


# ---------------------------------------------------------------- colorings

def lattice_lower_bound_check(report: ColoringReport, d: int | None = None, k: int | None = None) -> CheckReport:
    """s(C) >= d^(1/k) / e^2, and the sharper (1/k)(d/c_k)^(1/k) it comes from."""
    d = report.d if d is None else d
    k = report.min_width if k is None else k
    if k is None or k < 1:
        raise PreconditionError("the report has no min-width; the coloring must be non-trivial")
    rep = CheckReport("lattice-lower-bound")
    bound = ALPHA * d ** (1.0 / k)
    rep.add("s(C) >= d^(1/k) / e^2", report.s, ">=", bound, ALPHA_SLACK)
    inter = (1.0 / k) * (d / float(kk_constant(k).value)) ** (1.0 / k)
    rep.add("s(C) >= (1/k) (d/c_k)^(1/k)", report.s, ">=", inter, ALPHA_SLACK)
    if k == 1:
        rep.add("s(C) >= d (origin sees blue on every axis)", report.s, ">=", d)
    rep.details = {"d": d, "k": k, "s": report.s, "alpha": ALPHA, "bound": bound,
                   "intermediate": inter, "mode": report.mode}
    return rep


# ---------------------------------------------------------------- graphs

def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def max_independent_set_masks(adj: list[int]) -> tuple[int, list[int]]:
    """Exact maximum independent set for a graph given as neighbor bitmasks.

    Branches on the lowest candidate vertex, include first; prunes when the
    current size plus the remaining candidates cannot beat the best. Ties
    resolve to the lexicographically first set in that order.
    """
    nv = len(adj)
    if nv > MAX_GRAPH_VERTICES:
        raise ResourceLimitError(f"graph has {nv} vertices, exact search supports <= {MAX_GRAPH_VERTICES}")
    for v, a in enumerate(adj):
        if (a >> v) & 1:
            raise PreconditionError(f"vertex {v} has a self-loop")
    best: list[int] = []

    def rec(cand: int, chosen: list[int]):
        nonlocal best
        if len(chosen) + bin(cand).count("1") <= len(best):
            return
        if not cand:
            best = chosen[:]
            return
        v = (cand & -cand).bit_length() - 1
        chosen.append(v)
        rec(cand & ~adj[v] & ~(1 << v), chosen)
        chosen.pop()
        rec(cand & ~(1 << v), chosen)

    rec((1 << nv) - 1, [])
    return len(best), best


def max_clique_masks(adj: list[int]) -> tuple[int, list[int]]:
    """Maximum clique via the independent-set search on the complement."""
    full = (1 << len(adj)) - 1
    comp = [(full & ~a) & ~(1 << v) for v, a in enumerate(adj)]
    return max_independent_set_masks(comp)


@dataclass
class SliceGraph:
    """Vertices are slices (indexed by their axis); i -> j iff axis i is in j's zero set."""

    d: int
    edges: list[tuple[int, int]]

    @property
    def undirected(self) -> list[int]:
        adj = [0] * self.d
        for i, j in self.edges:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return adj

    def out_degrees(self) -> list[int]:
        deg = [0] * self.d
        for i, _ in self.edges:
            deg[i] += 1
        return deg

    def in_degrees(self) -> list[int]:
        deg = [0] * self.d
        for _, j in self.edges:
            deg[j] += 1
        return deg

    def undirected_edge_count(self) -> int:
        return sum(bin(a).count("1") for a in self.undirected) // 2

    def components(self) -> list[list[int]]:
        adj = self.undirected
        seen = 0
        out = []
        for v in range(self.d):
            if (seen >> v) & 1:
                continue
            comp, frontier = 1 << v, 1 << v
            while frontier:
                nxt = 0
                for u in _bits(frontier):
                    nxt |= adj[u]
                frontier = nxt & ~comp
                comp |= frontier
            seen |= comp
            out.append(list(_bits(comp)))
        return out

    def to_dict(self) -> dict:
        return {"d": self.d, "edges": [list(e) for e in self.edges]}


def _require_conformant(c: SlicedColoring):
    if not isinstance(c, SlicedColoring):
        raise PreconditionError("needs a sliced coloring")
    problems = c.conformance_problems()
    if problems:
        raise PreconditionError("; ".join(problems))


def slice_graph(c: SlicedColoring) -> SliceGraph:
    _require_conformant(c)
    edges = []
    for j in range(c.d):
        for i in sorted(c.slice_on_axis(j).zeros):
            edges.append((i, j))
    edges.sort()
    return SliceGraph(c.d, edges)


def max_independent_set(g: SliceGraph) -> tuple[int, list[int]]:
    return max_independent_set_masks(g.undirected)


def turan_bound(nv: int, edges: int) -> Fraction:
    """nv / (average degree + 1), a lower bound on the independence number."""
    if nv == 0:
        return Fraction(0)
    return Fraction(nv) / (Fraction(2 * edges, nv) + 1)


def common_point(c: SlicedColoring, axes) -> list[int] | None:
    """A point lying in every slice on ``axes``, or None if their pins clash."""
    pins: dict[int, int] = {}
    for a in axes:
        s = c.slice_on_axis(a)
        for coord, val in [(s.axis, s.c), *[(z, 0) for z in s.zeros]]:
            if pins.setdefault(coord, val) != val:
                return None
    p = [0] * c.d
    for coord, val in pins.items():
        p[coord] = val
    return p


def max_mutual_intersection(c: SlicedColoring) -> tuple[int, list[int], list[int]]:
    """(size, slice axes, common point) for the largest set of slices sharing a point.

    Pins are coordinate equalities, so slices that pairwise intersect also
    share a point; the search is a maximum clique of pairwise intersection.
    """
    _require_conformant(c)
    adj = [0] * c.d
    for i in range(c.d):
        si = c.slice_on_axis(i)
        for j in range(c.d):
            if i != j and si.intersects(c.slice_on_axis(j)):
                adj[i] |= 1 << j
    size, axes = max_clique_masks(adj)
    point = common_point(c, axes)
    if point is None:
        raise AssertionError("pairwise intersecting slices without a common point")
    return size, axes, point


def bumped_point(c: SlicedColoring, axes, point) -> list[int]:
    """Push ``point`` one step past each slice constant on ``axes`` (away from 0)."""
    p = list(point)
    for a in axes:
        s = c.slice_on_axis(a)
        p[a] = s.c + (1 if s.c > 0 else -1)
    return p


def _measured(c, report, probe_cap):
    if report is not None:
        return report
    return exact_report(c, probe_cap)


def sliced_bound_check(c: SlicedColoring, report: ColoringReport | None = None,
                       probe_cap: int = DEFAULT_PROBE_CAP) -> CheckReport:
    """d <= s^R (2 s^B - 1) and d <= 2r^2 - r with every intermediate step."""
    g = slice_graph(c)
    rep_c = _measured(c, report, probe_cap)
    d, sR, sB, r = c.d, rep_c.sR, rep_c.sB, rep_c.r
    alpha, indep = max_independent_set(g)
    mmi, axes, point = max_mutual_intersection(c)
    edges = g.undirected_edge_count()
    turan = turan_bound(d, edges)
    in_deg = g.in_degrees()
    out_deg = g.out_degrees()

    rep = CheckReport("sliced-bound")
    rep.add("max |B_i| <= s^B - 1", max(in_deg), "<=", sB - 1)
    rep.add("average degree <= 2(s^B - 1)", Fraction(2 * edges, d), "<=", 2 * (sB - 1))
    rep.add("independence number >= d/(average degree + 1)", alpha, ">=", turan)
    rep.add("independence number <= s^R", alpha, "<=", sR)
    rep.add("independence number == max mutual intersection", alpha, "==", mmi)
    rep.add("d <= s^R (2 s^B - 1)", d, "<=", sR * (2 * sB - 1))
    rep.add("d <= 2 r^2 - r", d, "<=", 2 * r * r - r)

    bumped = bumped_point(c, axes, point)
    witness_r = axis_sensitivity(c, bumped)
    if max(out_deg) > sB - 1:
        rep.findings.append(f"max out-degree {max(out_deg)} exceeds s^B - 1 = {sB - 1}")
    rep.details = {
        "d": d, "sR": sR, "sB": sB, "r": r, "mode": rep_c.mode,
        "graph": g.to_dict(),
        "components": g.components(),
        "max_in_degree": max(in_deg), "max_out_degree": max(out_deg),
        "independence_number": alpha, "independent_set": indep,
        "turan_bound": turan,
        "max_mutual_intersection": mmi, "intersecting_slices": axes,
        "common_point": point,
        "bumped_point": bumped, "bumped_point_red": not bool(c.blue_batch([bumped])[0]),
        "bumped_point_r": witness_r,
        "tight": d == sR * (2 * sB - 1),
        "report_witnesses": rep_c.witnesses,
    }
    return rep


def repeated_bound_check(c: RepeatedColoring, inner_report: ColoringReport | None = None,
                         report: ColoringReport | None = None,
                         probe_cap: int = DEFAULT_PROBE_CAP) -> CheckReport:
    """s^R = copies, s^B equal to the inner s^B, and d <= s^R (2 s^B - 1)."""
    if not isinstance(c, RepeatedColoring):
        raise PreconditionError("needs a repeated coloring")
    inner = _measured(c.inner, inner_report, probe_cap)
    outer = _measured(c, report, probe_cap)
    rep = CheckReport("repeated-bound")
    rep.add("inner s^R == 1", inner.sR, "==", 1)
    rep.add("s^R(C) == copies", outer.sR, "==", c.copies)
    rep.add("s^B(C) == s^B(inner)", outer.sB, "==", inner.sB)
    rep.add("d <= s^R (2 s^B - 1)", c.d, "<=", outer.sR * (2 * outer.sB - 1))
    k = c.inner.d
    inner_ok = k <= 2 * inner.sB - 1
    if not inner_ok:
        rep.findings.append(
            f"inner dimension {k} exceeds 2 s^B - 1 = {2 * inner.sB - 1} with s^R = 1")
    rep.details = {
        "d": c.d, "copies": c.copies, "inner_d": k,
        "inner": inner.to_dict(), "outer": outer.to_dict(),
        "inner_dimension_bound": {"lhs": k, "rhs": 2 * inner.sB - 1, "holds": inner_ok},
    }
    return rep

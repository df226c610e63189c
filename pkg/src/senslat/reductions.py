"""Both directions between Boolean functions and lattice colorings.

``function_to_coloring`` turns disjoint sensitive blocks of a function into
a mirror-tiled coloring whose sensitivity is at most the function's.
``coloring_to_function`` turns a non-trivial coloring into a function whose
block sensitivity is at least d and whose sensitivity is at most the
min-width times the coloring's sensitivity.

Each returns a :class:`ReductionCertificate` that can be re-verified from
its embedded witnesses without rerunning any scan.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import boolfn as bf
from .checks import Inequality
from .errors import NotSensitiveError, PreconditionError, ResourceLimitError
from .lattice import (
    DEFAULT_PROBE_CAP,
    DEFAULT_WIDTH_CAP,
    Color,
    Coloring,
    MirrorPeriodicColoring,
    _neighbor_diffs,
    coloring_from_spec,
    exact_report,
    exact_report_periodic,
    min_width,
    point_sensitivity,
    axis_sensitivity,
    reflect,
    require_nontrivial,
)

BLOCK_ORDER = "ascending variable index"


@dataclass
class ReductionCertificate:
    direction: str
    source: dict
    target: dict
    inequalities: list[Inequality] = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(q.holds for q in self.inequalities)

    def to_dict(self) -> dict:
        return {
            "direction": self.direction,
            "source": self.source,
            "target": self.target,
            "inequalities": [q.to_dict() for q in self.inequalities],
            "witnesses": self.witnesses,
            "notes": self.notes,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "ReductionCertificate":
        return cls(
            data["direction"], data["source"], data["target"],
            [Inequality.from_dict(q) for q in data["inequalities"]],
            data.get("witnesses", {}), data.get("notes", {}),
        )

    def verify(self) -> list[str]:
        """Re-evaluate every claim from the embedded witnesses; returns problems found."""
        if self.direction == "function-to-coloring":
            return _verify_f2c(self)
        if self.direction == "coloring-to-function":
            return _verify_c2f(self)
        return [f"unknown direction {self.direction!r}"]


# ------------------------------------------------------------ function -> coloring

def _base_inputs(blocks: list[int], b: list[int]) -> np.ndarray:
    """Input index for every base-box cell m: the first m_i bits of each block set."""
    prefix = []
    for mask in blocks:
        bits = [1 << v for v in range(mask.bit_length()) if (mask >> v) & 1]
        acc = [0]
        for bit in bits:
            acc.append(acc[-1] | bit)
        prefix.append(np.array(acc, dtype=np.int64))
    cells = np.indices([v + 1 for v in b]).reshape(len(b), -1)
    out = np.zeros(cells.shape[1], dtype=np.int64)
    for i, pre in enumerate(prefix):
        out |= pre[cells[i]]
    return out.reshape([v + 1 for v in b])


def _validate_blocks(f: bf.TruthTable, blocks, x_star: int) -> list[int]:
    blocks = [int(m) for m in blocks]
    if not blocks:
        raise PreconditionError("need at least one block")
    used = 0
    for m in blocks:
        if m <= 0 or m >> f.n:
            raise PreconditionError(f"block {m} is empty or outside 1..{f.n}")
        if m & used:
            raise PreconditionError("blocks are not disjoint")
        used |= m
        if not bf.is_sensitive(f, x_star, m):
            raise NotSensitiveError(f"block {list(bf.block_vars(m))} is not sensitive at the base input")
    return blocks


def function_to_coloring(
    f: bf.TruthTable,
    blocks,
    x_star: int,
    probe_cap: int = DEFAULT_PROBE_CAP,
) -> tuple[MirrorPeriodicColoring, ReductionCertificate]:
    """Mirror-periodic coloring in d = len(blocks) dimensions with s(C) <= s(f).

    The function is first shifted so that ``x_star`` becomes the all-zeros
    input; if its value there is 1 the output is complemented as well
    (neither changes any sensitivity measure).
    """
    f = bf._require_table(f, "function_to_coloring")
    x_star = bf._check_input(f, x_star)
    blocks = _validate_blocks(f, blocks, x_star)
    g = bf.complement_inputs(f, x_star)
    swapped = bool(g.bits[0])
    if swapped:
        g = bf.complement_output(g)
    b = [bin(m).count("1") for m in blocks]
    inputs = _base_inputs(blocks, b)
    coloring = MirrorPeriodicColoring(b, g.bits[inputs].astype(bool))

    report = exact_report_periodic(coloring, probe_cap)
    sens = bf.sensitivity(f)
    d = len(blocks)
    origin = [0] * d
    axis_points = [[b[i] if j == i else 0 for j in range(d)] for i in range(d)]

    # every sensitive lattice step is a single bit flip of g
    period_pts = np.stack(
        np.meshgrid(*[np.arange(p) for p in coloring.period], indexing="ij"), axis=-1
    ).reshape(-1, d)
    _, s_pts, _ = _neighbor_diffs(coloring, period_pts)
    g_sens = bf.sensitivity_bitmap(g)
    s_inputs = g_sens[inputs[tuple(coloring.fold(period_pts).T)]]
    pointwise_excess = int((s_pts - s_inputs).max())

    cert = ReductionCertificate(
        "function-to-coloring",
        {"kind": "truth-table", "table": f.dumps(), "fingerprint": f.fingerprint(),
         "blocks": blocks, "block_vars": [list(bf.block_vars(m)) for m in blocks],
         "x_star": x_star, "x_star_bits": bf.format_input(x_star, f.n)},
        {"kind": "coloring", "spec": coloring.to_spec(), "fingerprint": coloring.fingerprint()},
    )
    cert.inequalities = [
        Inequality("d == number of disjoint sensitive blocks", d, "==", len(blocks)),
        Inequality("origin is red", int(coloring.color(origin) == Color.RED), "==", 1),
        Inequality("blue points on every axis", sum(coloring.color(p) == Color.BLUE for p in axis_points), "==", d),
        Inequality("s(C) <= s(f)", report.s, "<=", sens.s),
        Inequality("max over period of s(C,p) - s(f, input(p)) <= 0", pointwise_excess, "<=", 0),
    ]
    cert.witnesses = {
        "origin": origin,
        "axis_blue": axis_points,
        "s_C": {"value": report.s, "point": report.witnesses["s"]},
        "r_C": {"value": report.r, "point": report.witnesses["r"]},
        "s_f": {"value": sens.s, "input": sens.at},
    }
    cert.notes = {
        "block_order": BLOCK_ORDER,
        "output_complemented": swapped,
        "scan_mode": report.mode,
        "period": list(coloring.period),
    }
    return coloring, cert


def _verify_f2c(cert: ReductionCertificate) -> list[str]:
    problems = []
    f = bf.TruthTable.parse(cert.source["table"])
    coloring = coloring_from_spec(cert.target["spec"])
    rebuilt, _ = _rebuild_f2c(f, cert.source["blocks"], cert.source["x_star"])
    if rebuilt.to_spec() != coloring.to_spec():
        problems.append("target coloring does not match the construction")
    w = cert.witnesses
    if coloring.color(w["origin"]) != Color.RED:
        problems.append("origin is not red")
    for p in w["axis_blue"]:
        if coloring.color(p) != Color.BLUE:
            problems.append(f"axis point {p} is not blue")
    s_c = point_sensitivity(coloring, w["s_C"]["point"])
    if s_c != w["s_C"]["value"]:
        problems.append("s(C) witness does not replay")
    s_f = bf.sensitivity_at(f, w["s_f"]["input"])
    if s_f != w["s_f"]["value"]:
        problems.append("s(f) witness does not replay")
    if not s_c <= s_f:
        problems.append("s(C) <= s(f) fails on the witnesses")
    problems += [f"claimed inequality fails: {q.name}" for q in cert.inequalities if not q.holds]
    return problems


def _rebuild_f2c(f, blocks, x_star):
    g = bf.complement_inputs(f, x_star)
    if g.bits[0]:
        g = bf.complement_output(g)
    b = [bin(int(m)).count("1") for m in blocks]
    inputs = _base_inputs([int(m) for m in blocks], b)
    return MirrorPeriodicColoring(b, g.bits[inputs].astype(bool)), g


# ------------------------------------------------------------ coloring -> function

def block_layout(b: list[int]) -> list[int]:
    """Consecutive block masks of sizes b_1, b_2, ... over the input bits."""
    out, off = [], 0
    for size in b:
        out.append(((1 << size) - 1) << off)
        off += size
    return out


def _ones_per_block(idx: np.ndarray, b: list[int]) -> np.ndarray:
    z = np.empty((idx.shape[0], len(b)), dtype=np.int64)
    off = 0
    for i, size in enumerate(b):
        z[:, i] = np.bitwise_count((idx >> off) & ((1 << size) - 1))
        off += size
    return z


class BlockCountFunction(bf.BooleanOracle):
    """f(y) = color of the lattice point whose i-th coordinate counts the ones in block i."""

    def __init__(self, coloring: Coloring, b: list[int]):
        self.coloring = coloring
        self.b = list(b)
        super().__init__(sum(b), self._eval, name=f"block-count:{coloring.fingerprint()}")

    def _eval(self, x: int) -> int:
        z = _ones_per_block(np.array([x], dtype=np.int64), self.b)
        return int(self.coloring.blue_batch(z)[0])


def coloring_to_function(
    c: Coloring,
    cap: int = DEFAULT_WIDTH_CAP,
    table_cap: int = bf.MAX_TABLE_VARS,
    probe_cap: int = DEFAULT_PROBE_CAP,
    samples: int = 4096,
    seed: int = 0,
):
    """Function on sum(b_i) bits with bs >= d and s(f) <= k * s(C).

    Axes whose nearest blue point is on the negative side are reflected
    first (ties go to +). Returns ``(f, blocks, certificate)``; ``f`` is a
    :class:`TruthTable` when sum(b_i) <= ``table_cap``, otherwise a
    :class:`BlockCountFunction` and the s(f) bound is only sampled.
    """
    width = require_nontrivial(c, cap)
    signs = width.signs
    cr = reflect(c, signs) if any(s < 0 for s in signs) else c
    b = list(width.distances)
    k = width.k
    d = c.d
    nbits = sum(b)
    blocks = block_layout(b)

    if nbits <= table_cap:
        idx = np.arange(1 << nbits, dtype=np.int64)
        f = bf.TruthTable(nbits, cr.blue_batch(_ones_per_block(idx, b)).astype(np.uint8))
    else:
        f = BlockCountFunction(cr, b)

    try:
        rep = exact_report(c, probe_cap)
    except (PreconditionError, ResourceLimitError):
        rep = None

    f0 = bf.eval_at(f, 0)
    block_hits = sum(bf.eval_at(f, m) == 1 for m in blocks)
    cert = ReductionCertificate(
        "coloring-to-function",
        {"kind": "coloring", "spec": _spec_or_none(c), "fingerprint": c.fingerprint()},
        {"kind": "truth-table" if isinstance(f, bf.TruthTable) else "oracle",
         "n": nbits, "fingerprint": f.fingerprint(),
         "table": f.dumps() if isinstance(f, bf.TruthTable) else None},
    )
    ineq = [
        Inequality("f(0) == 0", f0, "==", 0),
        Inequality("sensitive disjoint axis blocks at 0 (so bs(f) >= d)", block_hits, ">=", d),
    ]
    witnesses = {
        "blocks": blocks,
        "block_sizes": b,
        "reflect_signs": signs,
        "axis_blue": [width.witness(i, d) for i in range(d)],
    }
    if isinstance(f, bf.TruthTable):
        sens = bf.sensitivity(f)
        s_f, s_mode = sens.s, "exact"
        witnesses["s_f"] = {"value": sens.s, "input": sens.at}
    else:
        rng = np.random.default_rng(seed)
        best, at = 0, 0
        for x in bf.random_inputs(rng, nbits, samples):
            v = bf.sensitivity_at(f, x)
            if v > best:
                best, at = v, x
        s_f, s_mode = best, "sampled"
        witnesses["s_f"] = {"value": best, "input": at}
    if rep is not None:
        ineq.append(Inequality("s(f) <= k * s(C)", s_f, "<=", k * rep.s))
        ineq.append(Inequality("s(f) <= k * r(C)", s_f, "<=", k * rep.r))
        witnesses["s_C"] = {"value": rep.s, "point": rep.witnesses["s"]}
        witnesses["r_C"] = {"value": rep.r, "point": rep.witnesses["r"]}
    cert.inequalities = ineq
    cert.witnesses = witnesses
    cert.notes = {
        "min_width": k,
        "s_f_mode": s_mode,
        "coloring_mode": None if rep is None else rep.mode,
        "block_order": "consecutive input bits, block i holds b_i bits",
        "seed": seed if s_mode == "sampled" else None,
    }
    return f, blocks, cert


def _spec_or_none(c: Coloring):
    try:
        return c.to_spec()
    except PreconditionError:
        return None


def _verify_c2f(cert: ReductionCertificate) -> list[str]:
    problems = []
    w = cert.witnesses
    spec = cert.source.get("spec")
    if spec is None:
        return ["source coloring has no file form; cannot re-verify"]
    c = coloring_from_spec(spec)
    width = min_width(c)
    if list(width.distances) != list(w["block_sizes"]) or list(width.signs) != list(w["reflect_signs"]):
        problems.append("block sizes / reflection do not match the coloring's min-width data")
    for p in w["axis_blue"]:
        if c.color(p) != Color.BLUE:
            problems.append(f"axis point {p} is not blue")
    if cert.target.get("table"):
        f = bf.TruthTable.parse(cert.target["table"])
    else:
        cr = reflect(c, width.signs) if any(s < 0 for s in width.signs) else c
        f = BlockCountFunction(cr, list(width.distances))
    if bf.eval_at(f, 0) != 0:
        problems.append("f(0) != 0")
    used = 0
    for m in w["blocks"]:
        if m & used:
            problems.append("blocks overlap")
        used |= m
        if bf.eval_at(f, m) != 1:
            problems.append(f"block {m} is not sensitive at 0")
    if bf.sensitivity_at(f, w["s_f"]["input"]) != w["s_f"]["value"]:
        problems.append("s(f) witness does not replay")
    for key, fn in (("s_C", point_sensitivity), ("r_C", axis_sensitivity)):
        if key in w and fn(c, w[key]["point"]) != w[key]["value"]:
            problems.append(f"{key} witness does not replay")
    problems += [f"claimed inequality fails: {q.name}" for q in cert.inequalities if not q.holds]
    return problems


def block_symmetry_check(f, blocks, trials: int = 100, seed: int = 0, samples: int = 256) -> bool:
    """True iff f is unchanged by ``trials`` random bit permutations inside each block.

    Tables are compared in full; oracles on ``samples`` random inputs.
    """
    rng = np.random.default_rng(seed)
    n = f.n
    for mask in blocks:
        pos = [v for v in range(n) if (mask >> v) & 1]
        if len(pos) < 2:
            continue
        for _ in range(trials):
            shuffled = rng.permutation(pos)
            perm = list(range(n))
            for src, dst in zip(pos, shuffled):
                perm[src] = int(dst)
            if isinstance(f, bf.TruthTable):
                if bf.permute_variables(f, perm) != f:
                    return False
            else:
                for x in bf.random_inputs(rng, n, samples):
                    y = 0
                    for i in range(n):
                        if (x >> i) & 1:
                            y |= 1 << perm[i]
                    if bf.eval_at(f, x) != bf.eval_at(f, y):
                        return False
    return True

"""Exhaustive and random search for functions with large bs relative to s.

Results are per-sensitivity maxima of block sensitivity. Ties go to the
smallest truth-table integer, so merged results do not depend on how the
work was split.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import boolfn as bf
from .bounds import corollary_bound, default_threads, partition
from .checks import encode_number
from .errors import ResourceLimitError

MAX_EXHAUSTIVE_VARS = 4
MAX_RANDOM_VARS = 12
SAMPLE_CHUNK_BITS = 1 << 22


@dataclass
class SeparationRecord:
    n: int
    table: str
    fingerprint: str
    s: int
    bs: int
    witness_input: int
    blocks: list[int]

    @property
    def ratio(self) -> Fraction | None:
        return Fraction(self.bs, self.s * self.s) if self.s else None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "table": self.table,
            "fingerprint": self.fingerprint,
            "s": self.s,
            "bs": self.bs,
            "ratio": None if self.ratio is None else encode_number(self.ratio),
            "witness_input": self.witness_input,
            "witness_bits": bf.format_input(self.witness_input, self.n),
            "blocks": self.blocks,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "SeparationRecord":
        return cls(data["n"], data["table"], data["fingerprint"], data["s"], data["bs"],
                   data["witness_input"], list(data["blocks"]))

    def function(self) -> bf.TruthTable:
        return bf.TruthTable.from_hex(self.n, self.table)

    def replay(self) -> bool:
        """Recompute s and bs from the table and re-check the witness family."""
        f = self.function()
        if f.fingerprint() != self.fingerprint:
            return False
        if bf.sensitivity(f).s != self.s:
            return False
        bs, _, _ = bf.block_sensitivity(f)
        if bs != self.bs or len(self.blocks) != bs:
            return False
        used = 0
        for b in self.blocks:
            if b & used or not bf.is_sensitive(f, self.witness_input, b):
                return False
            used |= b
        return True


def make_record(f: bf.TruthTable) -> SeparationRecord:
    s = bf.sensitivity(f).s
    bs, x, family = bf.block_sensitivity(f)
    return SeparationRecord(f.n, f.to_hex(), f.fingerprint(), s, bs, x, list(family))


@dataclass
class ScanResult:
    n: int
    best: dict[int, tuple[int, int]] = field(default_factory=dict)  # s -> (bs, table int)
    evaluated: int = 0
    tripwire: list[str] = field(default_factory=list)
    seed: int | None = None
    samples: int | None = None

    def offer(self, s: int, bs: int, value: int):
        cur = self.best.get(s)
        if cur is None or bs > cur[0] or (bs == cur[0] and value < cur[1]):
            self.best[s] = (bs, value)
        if s > 0 and not bs < corollary_bound(s):
            self.tripwire.append(bf.TruthTable.from_int(self.n, value).to_hex())

    def merge(self, other: "ScanResult"):
        for s, (bs, value) in other.best.items():
            self.offer(s, bs, value)
        self.evaluated += other.evaluated
        self.tripwire.extend(t for t in other.tripwire if t not in self.tripwire)

    def maxima(self) -> dict[int, int]:
        return {s: bs for s, (bs, _) in sorted(self.best.items())}

    def records(self) -> list[SeparationRecord]:
        return [make_record(bf.TruthTable.from_int(self.n, v)) for _, (_, v) in sorted(self.best.items())]

    def best_record(self) -> SeparationRecord | None:
        """Largest bs/s^2; ties to larger bs, then smaller table."""
        cands = [(Fraction(bs, s * s), bs, -v) for s, (bs, v) in self.best.items() if s > 0]
        if not cands:
            return None
        _, _, neg = max(cands)
        return make_record(bf.TruthTable.from_int(self.n, -neg))

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "evaluated": self.evaluated,
            "maxima": {str(s): bs for s, bs in self.maxima().items()},
            "records": [r.to_dict() for r in self.records()],
            "tripwire_violations": sorted(self.tripwire),
        }
        if self.seed is not None:
            out["seed"] = self.seed
            out["samples"] = self.samples
            out["sampler"] = "numpy.random.Generator(PCG64), table bits uniform"
        return out


def _measure_value(n: int, value: int) -> tuple[int, int]:
    f = bf.TruthTable.from_int(n, value)
    s = int(bf.sensitivity_bitmap(f).max())
    if s == 0:
        return 0, 0
    values, _ = bf.block_profile(f, s)
    return s, int(values[s])


def _scan_range(args) -> ScanResult:
    n, start, stop = args
    out = ScanResult(n)
    for value in range(start, stop):
        s, bs = _measure_value(n, value)
        out.offer(s, bs, value)
        out.evaluated += 1
    return out


def exhaustive_scan(n: int, threads: int | None = None, chunks: int = 64) -> ScanResult:
    """Every function on n <= 4 variables."""
    if not 1 <= n <= MAX_EXHAUSTIVE_VARS:
        raise ResourceLimitError(f"exhaustive scan supports 1 <= n <= {MAX_EXHAUSTIVE_VARS}")
    threads = threads or default_threads()
    jobs = [(n, a, b) for a, b in partition(1 << (1 << n), chunks)]
    if threads == 1:
        parts = [_scan_range(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_scan_range, jobs))
    out = ScanResult(n)
    for p in parts:
        out.merge(p)
    return out


def _random_tables(rng: np.random.Generator, n: int, samples: int):
    """Yield table integers; each table's bits are independent fair coins."""
    size = 1 << n
    per_chunk = max(1, SAMPLE_CHUNK_BITS // size)
    left = samples
    while left > 0:
        m = min(per_chunk, left)
        bits = rng.integers(0, 2, size=(m, size), dtype=np.uint8)
        packed = np.packbits(bits, axis=1, bitorder="little")
        for row in packed:
            yield int.from_bytes(row.tobytes(), "little")
        left -= m


def random_scan(n: int, samples: int, seed: int = 0) -> ScanResult:
    """``samples`` uniform random functions on n <= 12 variables, reproducible from ``seed``."""
    if not 1 <= n <= MAX_RANDOM_VARS:
        raise ResourceLimitError(f"random scan supports 1 <= n <= {MAX_RANDOM_VARS}")
    if samples < 0:
        raise ValueError("samples must be >= 0")
    rng = np.random.default_rng(seed)
    out = ScanResult(n, seed=seed, samples=samples)
    seen: set[int] = set()
    for value in _random_tables(rng, n, samples):
        if value in seen:
            continue
        seen.add(value)
        s, bs = _measure_value(n, value)
        out.offer(s, bs, value)
        out.evaluated += 1
    return out


def write_records(records, stream):
    for r in records:
        stream.write(r.to_json() + "\n")


def read_records(stream) -> list[SeparationRecord]:
    return [SeparationRecord.from_dict(json.loads(line)) for line in stream if line.strip()]

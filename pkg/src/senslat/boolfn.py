"""Boolean functions as truth tables and their sensitivity-type measures.

Input convention: the input x = (x1, ..., xn) has index sum(x_i * 2**(i-1)),
so x1 is the least significant bit. Blocks are integer bitmasks over the
same bit positions (bit i-1 stands for variable i).
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import NotSensitiveError, PreconditionError, ResourceLimitError

MAX_TABLE_VARS = 24
DEFAULT_CANDIDATE_CAP = 1 << 16


class TruthTable:
    """Immutable table of the 2**n output bits of a Boolean function."""

    __slots__ = ("n", "_bits")

    def __init__(self, n: int, bits):
        if not 1 <= n <= MAX_TABLE_VARS:
            raise PreconditionError(f"n must be in 1..{MAX_TABLE_VARS}, got {n}")
        arr = np.array(bits, dtype=np.uint8).reshape(-1)
        if arr.shape[0] != 1 << n:
            raise PreconditionError(f"expected {1 << n} bits, got {arr.shape[0]}")
        if arr.size and arr.max() > 1:
            raise PreconditionError("table entries must be 0 or 1")
        arr.setflags(write=False)
        self.n = n
        self._bits = arr

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    @property
    def size(self) -> int:
        return 1 << self.n

    @classmethod
    def from_int(cls, n: int, value: int) -> "TruthTable":
        size = 1 << n
        if value < 0 or value >> size:
            raise PreconditionError(f"table value does not fit in {size} bits")
        raw = value.to_bytes(max(1, (size + 7) // 8), "little")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:size]
        return cls(n, bits)

    @classmethod
    def from_hex(cls, n: int, text: str) -> "TruthTable":
        text = text.strip().lower().removeprefix("0x")
        try:
            value = int(text, 16)
        except ValueError:
            raise PreconditionError(f"not a hex string: {text!r}") from None
        return cls.from_int(n, value)

    @classmethod
    def from_function(cls, n: int, fn: Callable[[int], int]) -> "TruthTable":
        return cls(n, [1 if fn(x) else 0 for x in range(1 << n)])

    @classmethod
    def from_accepted(cls, n: int, inputs: Iterable[int]) -> "TruthTable":
        bits = np.zeros(1 << n, dtype=np.uint8)
        bits[list(inputs)] = 1
        return cls(n, bits)

    @classmethod
    def parse(cls, text: str) -> "TruthTable":
        """Read the two-line text format: ``n=<k>`` then the hex table."""
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln and not ln.startswith("#")]
        if len(lines) != 2 or not lines[0].startswith("n="):
            raise PreconditionError("expected a 'n=<k>' line followed by a hex line")
        return cls.from_hex(int(lines[0][2:]), lines[1])

    def to_int(self) -> int:
        packed = np.packbits(self._bits, bitorder="little")
        return int.from_bytes(packed.tobytes(), "little")

    def to_hex(self) -> str:
        digits = max(1, self.size // 4)
        return format(self.to_int(), f"0{digits}X")

    def dumps(self) -> str:
        return f"n={self.n}\n{self.to_hex()}\n"

    def fingerprint(self) -> str:
        return hashlib.sha256(f"n={self.n}:{self.to_hex()}".encode()).hexdigest()[:16]

    def __call__(self, x: int) -> int:
        return eval_at(self, x)

    def __eq__(self, other):
        if not isinstance(other, TruthTable):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._bits, other._bits)

    def __hash__(self):
        return hash((self.n, self._bits.tobytes()))

    def __repr__(self):
        if self.n <= 6:
            return f"TruthTable(n={self.n}, hex={self.to_hex()!r})"
        return f"TruthTable(n={self.n}, fingerprint={self.fingerprint()!r})"


class BooleanOracle:
    """A function given by an evaluation callback, for n too large to tabulate.

    Pointwise queries work; whole-domain measures refuse with
    :class:`ResourceLimitError`.
    """

    def __init__(self, n: int, fn: Callable[[int], int], name: str = "oracle"):
        self.n = n
        self._fn = fn
        self.name = name

    def __call__(self, x: int) -> int:
        return eval_at(self, x)

    def fingerprint(self) -> str:
        return hashlib.sha256(f"oracle:{self.name}:n={self.n}".encode()).hexdigest()[:16]

    def __repr__(self):
        return f"BooleanOracle(n={self.n}, name={self.name!r})"


BooleanFunction = TruthTable | BooleanOracle


def _check_input(f, x: int) -> int:
    x = int(x)
    if not 0 <= x < (1 << f.n):
        raise IndexError(f"input index {x} out of range for n={f.n}")
    return x


def _require_table(f, what: str) -> TruthTable:
    if not isinstance(f, TruthTable):
        raise ResourceLimitError(f"{what} needs an explicit truth table (n <= {MAX_TABLE_VARS})")
    return f


def eval_at(f: BooleanFunction, x: int) -> int:
    x = _check_input(f, x)
    if isinstance(f, TruthTable):
        return int(f.bits[x])
    return 1 if f._fn(x) else 0


def parse_input(text: str) -> int:
    """Read an input written as a bit string x1x2...xn (left to right)."""
    text = text.strip()
    if not text or set(text) - {"0", "1"}:
        raise PreconditionError(f"not a bit string: {text!r}")
    return sum(1 << i for i, ch in enumerate(text) if ch == "1")


def format_input(x: int, n: int) -> str:
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))


def random_inputs(rng: np.random.Generator, n: int, size: int) -> list[int]:
    """Uniform random input indices for any n (drawn 32 bits at a time)."""
    out = [0] * size
    shift = 0
    while shift < n:
        width = min(32, n - shift)
        chunk = rng.integers(0, 1 << width, size=size, dtype=np.int64).tolist()
        out = [o | (v << shift) for o, v in zip(out, chunk)]
        shift += width
    return out


def block_vars(mask: int) -> tuple[int, ...]:
    """1-based variable indices of a block mask."""
    return tuple(i + 1 for i in range(mask.bit_length()) if (mask >> i) & 1)


def block_from_vars(variables: Iterable[int]) -> int:
    mask = 0
    for v in variables:
        if v < 1:
            raise PreconditionError(f"variables are 1-based, got {v}")
        mask |= 1 << (v - 1)
    return mask


@lru_cache(maxsize=64)
def candidate_masks(n: int, max_size: int) -> np.ndarray:
    """All nonempty masks over n bits with popcount <= max_size, ascending."""
    max_size = min(max_size, n)
    if max_size < 1:
        out = np.zeros(0, dtype=np.int64)
    elif max_size >= n or n <= 20:
        allm = np.arange(1, 1 << n, dtype=np.int64)
        out = allm[np.bitwise_count(allm) <= max_size]
    else:
        found = [
            sum(1 << i for i in combo)
            for size in range(1, max_size + 1)
            for combo in itertools.combinations(range(n), size)
        ]
        out = np.array(sorted(found), dtype=np.int64)
    out.setflags(write=False)
    return out


def sensitivity_at(f: BooleanFunction, x: int) -> int:
    x = _check_input(f, x)
    fx = eval_at(f, x)
    return sum(eval_at(f, x ^ (1 << i)) != fx for i in range(f.n))


def sensitivity_bitmap(f: TruthTable) -> np.ndarray:
    """s(f, x) for every input x at once (bit-parallel kernel)."""
    f = _require_table(f, "sensitivity_bitmap")
    return _kernels.sensitivity_counts(f.bits, f.n)


@dataclass(frozen=True)
class Sensitivity:
    s: int
    s0: int
    s1: int
    at: int
    at0: int | None
    at1: int | None


def sensitivity(f: TruthTable) -> Sensitivity:
    """Sensitivity and its 0-/1-restricted versions, with smallest witnesses.

    A restriction over an empty input set (constant functions) is 0 with no
    witness.
    """
    f = _require_table(f, "sensitivity")
    counts = sensitivity_bitmap(f)
    out = {}
    for val in (0, 1):
        idx = np.nonzero(f.bits == val)[0]
        if idx.size:
            j = int(np.argmax(counts[idx]))
            out[val] = (int(counts[idx[j]]), int(idx[j]))
        else:
            out[val] = (0, None)
    at = int(np.argmax(counts))
    return Sensitivity(int(counts[at]), out[0][0], out[1][0], at, out[0][1], out[1][1])


def sensitive_blocks_at(f: BooleanFunction, x: int, max_size: int) -> list[int]:
    x = _check_input(f, x)
    if not 1 <= max_size <= f.n:
        raise PreconditionError(f"max_size must be in 1..{f.n}")
    masks = candidate_masks(f.n, max_size)
    if isinstance(f, TruthTable):
        hits = masks[f.bits[x ^ masks] != f.bits[x]]
        return [int(m) for m in hits]
    fx = eval_at(f, x)
    return [int(m) for m in masks if eval_at(f, x ^ int(m)) != fx]


def is_sensitive(f: BooleanFunction, x: int, mask: int) -> bool:
    return mask != 0 and eval_at(f, x ^ mask) != eval_at(f, x)


def is_minimal_block(f: BooleanFunction, x: int, mask: int) -> bool:
    x = _check_input(f, x)
    if not is_sensitive(f, x, mask):
        raise NotSensitiveError(f"block {block_vars(mask)} is not sensitive at {x}")
    sub = (mask - 1) & mask
    while sub:
        if is_sensitive(f, x, sub):
            return False
        sub = (sub - 1) & mask
    return True


def _resolve_cap(f, max_size: int | None) -> int:
    if max_size is None:
        if not isinstance(f, TruthTable):
            raise ResourceLimitError("oracle functions need an explicit max_size")
        max_size = sensitivity(f).s
    return max(0, min(max_size, f.n))


def minimal_blocks_at(f: BooleanFunction, x: int, max_size: int) -> np.ndarray:
    """Minimal sensitive blocks at x with popcount <= max_size, ascending."""
    x = _check_input(f, x)
    masks = candidate_masks(f.n, max_size)
    if isinstance(f, TruthTable):
        return _kernels.minimal_sensitive_blocks(f.bits, f.n, x, masks)
    fx = eval_at(f, x)
    minimal: list[int] = []
    for m in masks.tolist():
        if eval_at(f, x ^ m) != fx and not any((c & m) == c for c in minimal):
            minimal.append(m)
    return np.asarray(minimal, dtype=np.int64)


def block_sensitivity_at(
    f: BooleanFunction,
    x: int,
    max_size: int | None = None,
    candidate_cap: int = DEFAULT_CANDIDATE_CAP,
) -> tuple[int, tuple[int, ...]]:
    """Exact bs(f, x) with a witness family of disjoint sensitive blocks.

    Blocks are searched up to ``max_size`` (default s(f)); replacing a block
    by a minimal sensitive sub-block keeps a family disjoint, so only
    minimal blocks enter the packing search.
    """
    cap = _resolve_cap(f, max_size)
    if cap == 0:
        return 0, ()
    minimal = minimal_blocks_at(f, x, cap)
    if minimal.size > candidate_cap:
        raise ResourceLimitError(f"{minimal.size} candidate blocks exceed cap {candidate_cap}")
    value, chosen = _kernels.max_packing(minimal)
    return int(value), tuple(int(minimal[i]) for i in chosen)


def block_profile(
    f: TruthTable,
    lmax: int | None = None,
    candidate_cap: int = DEFAULT_CANDIDATE_CAP,
) -> tuple[np.ndarray, np.ndarray]:
    """(values, argx) with values[l] = bs_l(f) for l = 1..lmax (default s(f))."""
    f = _require_table(f, "block_profile")
    lmax = _resolve_cap(f, lmax)
    masks = candidate_masks(f.n, lmax)
    try:
        return _kernels.block_profile(f.bits, f.n, masks, lmax, candidate_cap)
    except OverflowError as exc:
        raise ResourceLimitError(str(exc)) from None


def block_sensitivity(
    f: TruthTable,
    max_size: int | None = None,
    candidate_cap: int = DEFAULT_CANDIDATE_CAP,
) -> tuple[int, int, tuple[int, ...]]:
    """bs(f) as (value, smallest maximizing input, witness family)."""
    f = _require_table(f, "block_sensitivity")
    cap = _resolve_cap(f, max_size)
    if cap == 0:
        return 0, 0, ()
    values, argx = block_profile(f, cap, candidate_cap)
    x = int(argx[cap])
    value, family = block_sensitivity_at(f, x, cap, candidate_cap)
    assert value == values[cap]
    return int(values[cap]), x, family


def l_block_sensitivity(
    f: TruthTable,
    l: int,
    max_size: int | None = None,
    candidate_cap: int = DEFAULT_CANDIDATE_CAP,
) -> int:
    """bs_l(f). Block sizes are capped at min(l, max_size); max_size defaults to s(f)."""
    f = _require_table(f, "l_block_sensitivity")
    if not 1 <= l <= f.n:
        raise PreconditionError(f"l must be in 1..{f.n}")
    cap = min(l, _resolve_cap(f, max_size))
    if cap == 0:
        return 0
    values, _ = block_profile(f, cap, candidate_cap)
    return int(values[cap])


def complement_inputs(f: TruthTable, mask: int) -> TruthTable:
    """g(x) = f(x XOR mask)."""
    f = _require_table(f, "complement_inputs")
    if mask < 0 or mask >> f.n:
        raise PreconditionError("mask has bits outside 1..n")
    idx = np.arange(f.size, dtype=np.int64) ^ mask
    return TruthTable(f.n, f.bits[idx])


def complement_output(f: TruthTable) -> TruthTable:
    f = _require_table(f, "complement_output")
    return TruthTable(f.n, 1 - f.bits)


def permute_variables(f: TruthTable, perm: Sequence[int]) -> TruthTable:
    """g(x) = f(y) where y takes bit i of x to position perm[i] (0-based)."""
    f = _require_table(f, "permute_variables")
    if sorted(perm) != list(range(f.n)):
        raise PreconditionError("perm must be a permutation of 0..n-1")
    x = np.arange(f.size, dtype=np.int64)
    y = np.zeros_like(x)
    for i, p in enumerate(perm):
        y |= ((x >> i) & 1) << p
    return TruthTable(f.n, f.bits[y])


@dataclass
class MeasureReport:
    n: int
    s: int
    s0: int
    s1: int
    bs: int
    bs_l: dict[int, int]
    witnesses: dict[str, dict] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "s": self.s,
            "s0": self.s0,
            "s1": self.s1,
            "bs": self.bs,
            "bs_l": {str(k): v for k, v in sorted(self.bs_l.items())},
            "witnesses": self.witnesses,
        }

    def replay(self, f: TruthTable) -> bool:
        """Recompute every witnessed value straight from the table."""
        for key in ("s", "s0", "s1"):
            w = self.witnesses.get(key)
            if w is None:
                if getattr(self, key) != 0:
                    return False
                continue
            if sensitivity_at(f, w["input"]) != getattr(self, key):
                return False
            if key != "s" and eval_at(f, w["input"]) != int(key[1]):
                return False
        w = self.witnesses.get("bs")
        if w is None:
            return self.bs == 0
        blocks = w["blocks"]
        used = 0
        for b in blocks:
            if b & used or not is_sensitive(f, w["input"], b):
                return False
            used |= b
        return len(blocks) == self.bs


def measure(f: TruthTable, candidate_cap: int = DEFAULT_CANDIDATE_CAP) -> MeasureReport:
    f = _require_table(f, "measure")
    sens = sensitivity(f)
    witnesses: dict[str, dict] = {}
    for key, x in (("s", sens.at), ("s0", sens.at0), ("s1", sens.at1)):
        witnesses[key] = None if x is None else {"input": x, "bits": format_input(x, f.n)}
    bs_l: dict[int, int] = {}
    bs = 0
    if sens.s > 0:
        values, argx = block_profile(f, sens.s, candidate_cap)
        bs_l = {l: int(values[l]) for l in range(1, sens.s + 1)}
        x = int(argx[sens.s])
        bs, family = block_sensitivity_at(f, x, sens.s, candidate_cap)
        witnesses["bs"] = {
            "input": x,
            "bits": format_input(x, f.n),
            "blocks": list(family),
            "block_vars": [list(block_vars(b)) for b in family],
        }
    else:
        witnesses["bs"] = None
    return MeasureReport(f.n, sens.s, sens.s0, sens.s1, bs, bs_l, witnesses)

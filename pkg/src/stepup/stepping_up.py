"""Binary delta encoding of vertices and its order axioms.

Vertices of the lifted structures are integers in [0, 2^D); delta(u, v) is
the highest bit position where u and v differ.  The classical stepping-up
facts about delta sequences of increasing tuples are exposed as executable
predicates (check_property) so the test suite can sweep them; they are
theorems of the encoding and must hold on every valid input.

Delta indices are 0-based internally.  Where an operation speaks the
"delta_1 .. delta_{r-1}" numbering (classify, find_monotone_run), its public
index argument/return is 1-based and documented as such.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

MAX_BIT_WIDTH = 63  # labels must fit a machine word


class WidthError(ValueError):
    """Bit width missing, mismatched, or out of [1, 63]."""


def _check_width(D: int) -> None:
    if not 1 <= D <= MAX_BIT_WIDTH:
        raise WidthError(f"bit width must be in [1, {MAX_BIT_WIDTH}], got {D}")


@dataclass(frozen=True)
class VertexLabel:
    """A vertex of V = {0, .., 2^D - 1}, viewed as a D-bit string."""

    value: int
    bit_width: int

    def __post_init__(self) -> None:
        _check_width(self.bit_width)
        if not 0 <= self.value < (1 << self.bit_width):
            raise ValueError(
                f"label {self.value} out of range for bit width {self.bit_width}"
            )

    def bit(self, i: int) -> int:
        if not 0 <= i < self.bit_width:
            raise IndexError(f"bit index {i} out of range [0, {self.bit_width})")
        return (self.value >> i) & 1


class ExtremumClass(enum.Enum):
    LOCAL_MIN = "local_min"
    LOCAL_MAX = "local_max"
    LOCAL_MONOTONE = "local_monotone"


def delta_value(u: int, v: int) -> int:
    """delta on raw labels: highest differing bit position.  u != v."""
    if u == v:
        raise ValueError("delta requires distinct labels")
    return (u ^ v).bit_length() - 1


def delta(u: VertexLabel, v: VertexLabel) -> int:
    """Highest bit position where u and v differ (symmetric)."""
    if u.bit_width != v.bit_width:
        raise WidthError(
            f"bit widths differ: {u.bit_width} vs {v.bit_width}"
        )
    return delta_value(u.value, v.value)


@dataclass(frozen=True)
class DeltaSequence:
    """Consecutive deltas (delta_1, .., delta_{r-1}) of an increasing tuple.

    `deltas[i]` (0-based) is delta(source[i], source[i+1]); consecutive
    entries always differ.
    """

    source: tuple[int, ...]
    bit_width: int
    deltas: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.deltas)


def delta_sequence(S, bit_width: int | None = None) -> DeltaSequence:
    """Delta sequence of a strictly increasing tuple of labels (len >= 2)."""
    vals = [s.value if isinstance(s, VertexLabel) else int(s) for s in S]
    if len(vals) < 2:
        raise ValueError("need at least 2 vertices")
    for a, b in zip(vals, vals[1:]):
        if a >= b:
            raise ValueError("input must be strictly increasing")
    if bit_width is None:
        widths = {s.bit_width for s in S if isinstance(s, VertexLabel)}
        if len(widths) > 1:
            raise WidthError(f"mixed bit widths {sorted(widths)}")
        bit_width = widths.pop() if widths else max(vals[-1].bit_length(), 1)
    _check_width(bit_width)
    if vals[-1] >= 1 << bit_width:
        raise ValueError(f"label {vals[-1]} exceeds bit width {bit_width}")
    ds = tuple(delta_value(a, b) for a, b in zip(vals, vals[1:]))
    return DeltaSequence(tuple(vals), bit_width, ds)


def classify(seq: DeltaSequence, i: int) -> ExtremumClass:
    """Classify delta_i of the sequence; i is 1-based and interior
    (2 <= i <= len(seq) - 1)."""
    r1 = len(seq.deltas)
    if not 2 <= i <= r1 - 1:
        raise IndexError(f"interior index required: 2 <= i <= {r1 - 1}, got {i}")
    a, b, c = seq.deltas[i - 2], seq.deltas[i - 1], seq.deltas[i]
    if a > b < c:
        return ExtremumClass.LOCAL_MIN
    if a < b > c:
        return ExtremumClass.LOCAL_MAX
    return ExtremumClass.LOCAL_MONOTONE


def is_monotone(values) -> bool:
    """Strictly increasing or strictly decreasing."""
    vals = list(values)
    if len(vals) <= 1:
        return True
    return all(a < b for a, b in zip(vals, vals[1:])) or all(
        a > b for a, b in zip(vals, vals[1:])
    )


def check_property(which: str, tup) -> bool:
    """Evaluate one of the four order axioms of the delta encoding on an
    increasing tuple.  These hold for every valid input; the predicate exists
    to power randomized sweeps.

    I   (arity 3):  delta(u,v) != delta(v,w)
    II  (arity >=2): delta(first,last) = max of consecutive deltas
    III (arity 4):  delta(v1,v2) > delta(v2,v3)  implies  delta(v1,v2) != delta(v3,v4)
    IV  (any arity): a monotone delta sequence stays monotone on every
                     sub-tuple (checked over all 4-element sub-tuples)
    """
    seq = delta_sequence(tup)
    vals = seq.source
    r = len(vals)
    if which == "I":
        if r != 3:
            raise ValueError(f"property I needs a 3-tuple, got arity {r}")
        return seq.deltas[0] != seq.deltas[1]
    if which == "II":
        return delta_value(vals[0], vals[-1]) == max(seq.deltas)
    if which == "III":
        if r != 4:
            raise ValueError(f"property III needs a 4-tuple, got arity {r}")
        d12, d23, d34 = seq.deltas
        if d12 > d23:
            return d12 != d34
        return True
    if which == "IV":
        if not is_monotone(seq.deltas):
            return True
        if r < 4:
            return True
        from itertools import combinations

        for sub in combinations(vals, 4):
            if not is_monotone(delta_sequence(sub, seq.bit_width).deltas):
                return False
        return True
    raise ValueError(f"unknown property {which!r}; expected I, II, III or IV")


def find_monotone_run(seq: DeltaSequence, n: int) -> int | None:
    """Smallest 1-based start index j with (delta_j, .., delta_{j+n-1})
    strictly increasing or strictly decreasing; None if there is none."""
    if n < 2:
        raise ValueError("run length must be >= 2")
    idx = find_monotone_run_raw(np.asarray(seq.deltas, np.int64), n)
    return None if idx < 0 else idx + 1


def find_monotone_run_raw(deltas: np.ndarray, n: int) -> int:
    """0-based variant on a raw delta array; -1 if absent."""
    m = len(deltas)
    if m < n:
        return -1
    sign = np.sign(np.diff(deltas))
    # run of n deltas = n-1 equal consecutive signs, none zero
    run = 1
    for i in range(len(sign)):
        if sign[i] != 0 and (i == 0 or sign[i] != sign[i - 1]):
            run = 1
        elif sign[i] != 0:
            run += 1
        else:
            run = 0
        if run >= n - 1:
            return i - (n - 2)
    return -1


# ---------------------------------------------------------------------------
# Bulk vectorized sweeps (used by the randomized axiom checks)

def random_increasing_tuples(
    count: int, arity: int, D: int, seed: int
) -> np.ndarray:
    """(count, arity) strictly increasing random tuples over [0, 2^D)."""
    _check_width(D)
    rng = np.random.default_rng(seed)
    out = np.empty((0, arity), np.int64)
    need = count
    while need > 0:
        draw = rng.integers(0, 1 << D, size=(int(need * 1.1) + 16, arity))
        draw.sort(axis=1)
        good = (np.diff(draw, axis=1) > 0).all(axis=1)
        out = np.vstack([out, draw[good][:need]])
        need = count - len(out)
    return out


def _delta_cols(t: np.ndarray, i: int, j: int) -> np.ndarray:
    from .kernels import delta_arr

    return delta_arr(t[:, i], t[:, j])


def count_property_violations(which: str, tuples: np.ndarray) -> int:
    """Vectorized violation count of axiom I, II or III over tuple rows."""
    arity = tuples.shape[1]
    if which == "I":
        if arity != 3:
            raise ValueError("property I needs 3-tuples")
        return int((_delta_cols(tuples, 0, 1) == _delta_cols(tuples, 1, 2)).sum())
    if which == "II":
        ends = _delta_cols(tuples, 0, arity - 1)
        mx = _delta_cols(tuples, 0, 1)
        for i in range(1, arity - 1):
            mx = np.maximum(mx, _delta_cols(tuples, i, i + 1))
        return int((ends != mx).sum())
    if which == "III":
        if arity != 4:
            raise ValueError("property III needs 4-tuples")
        d12 = _delta_cols(tuples, 0, 1)
        d23 = _delta_cols(tuples, 1, 2)
        d34 = _delta_cols(tuples, 2, 3)
        return int(((d12 > d23) & (d12 == d34)).sum())
    raise ValueError(f"bulk check supports I, II, III; got {which!r}")

"""Meet-in-the-middle binary CVP: index one side's binary sums, query with the other's residuals.

Every binary ``y`` splits uniquely as ``y_left + y_right``, so
``B y - t = v_left - (t - v_right)``: the lattice comes within ``r`` of ``t``
exactly when some indexed ``v_left`` comes within ``r`` of a query
``t - v_right``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._numeric import FLOAT_TOL, Number
from .ann import Backend, build_index
from .common import CapExceeded, Decision
from .lattice import CvpInstance, lp_distance_pow

MEMORY_CAP_BYTES = 4 * 2**30


@dataclass(frozen=True)
class SplitConfig:
    """Column split; ``left`` (0-based column indices) is the indexed side."""

    a: Fraction
    left: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self):
        if not 0 < self.a < 1:
            raise ValueError("split fraction must lie in (0, 1)")
        both = set(self.left) | set(self.right)
        if set(self.left) & set(self.right) or both != set(range(len(both))):
            raise ValueError("left and right must partition the columns")

    @property
    def n(self) -> int:
        return len(self.left) + len(self.right)


def split_columns(n: int, a: Number, left: Sequence[int] | None = None) -> SplitConfig:
    """Split with |left| = floor(a n); by default the first columns go left."""
    a = Fraction(a).limit_denominator(10**6) if isinstance(a, float) else Fraction(a)
    size = math.floor(a * n)
    if left is None:
        left = tuple(range(size))
    else:
        left = tuple(sorted(left))
        if len(left) != size:
            raise ValueError(f"left side must hold floor(a n) = {size} columns")
    right = tuple(i for i in range(n) if i not in set(left))
    return SplitConfig(a, left, right)


def choose_split(n: int, C_measured: float | None = None,
                 rho_measured: float | None = None) -> SplitConfig:
    """Default a = 1/2; with both exponents given, balance C a = (1 + rho)(1 - a)."""
    if n < 2:
        raise ValueError("need n >= 2 to split")
    if C_measured is None or rho_measured is None:
        return split_columns(n, Fraction(1, 2))
    C, rho = Fraction(C_measured), Fraction(rho_measured)
    return split_columns(n, (1 + rho) / (C + 1 + rho))


@dataclass
class MitmResult:
    decision: Decision
    witness: tuple[int, ...] | None = None
    witness_dist_pow: Number | None = None
    stats: dict = field(default_factory=dict)


def _binary_rows(k: int) -> np.ndarray:
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product((0, 1), repeat=k)), dtype=np.int64)


def solve_binary_cvp_mitm(inst: CvpInstance, split: SplitConfig, backend: Backend = "exact",
                          seed: int = 0, audit: bool = False,
                          memory_cap: int = MEMORY_CAP_BYTES) -> MitmResult:
    """Decide the binary-coefficient CVP instance by splitting the basis columns.

    In audit mode every query is issued, so ``queries == 2**|right|`` holds
    exactly; otherwise the sweep stops at the first verified witness.
    """
    if split.n != inst.n:
        raise ValueError("split does not match the instance rank")
    left, right = list(split.left), list(split.right)
    d = inst.d
    if (1 << len(left)) * max(d, 1) * 8 > memory_cap:
        raise CapExceeded(f"left side 2^{len(left)} x {d} floats exceeds the memory cap")
    B = inst.basis.to_dense(float)
    t = np.array([float(v) for v in inst.target.to_dense()], dtype=float)
    left_rows = _binary_rows(len(left))
    points = left_rows @ B[:, left].T if left else np.zeros((1, d))
    gamma = float(inst.gamma)
    index = build_index(points, 0.0, gamma, float(inst.p), backend, seed,
                        r_pow=float(inst.r_pow))
    no_pow = float(inst.no_pow)
    stats = {
        "backend": backend,
        "a": str(split.a),
        "left": len(left),
        "right": len(right),
        "points": index.size,
        "queries": 0,
        "candidates": 0,
    }
    if index.lsh is not None:
        stats.update(lsh_tables=index.lsh.tables, lsh_funcs=index.lsh.funcs,
                     lsh_width=index.lsh.width)
    witness = None
    witness_dist = None
    band = False
    nq = 1 << len(right)
    chunk = 1 << 12
    for start in range(0, nq, chunk):
        shifts = np.arange(len(right) - 1, -1, -1)
        rows = (np.arange(start, min(nq, start + chunk))[:, None] >> shifts[None, :]) & 1
        queries = t - (rows @ B[:, right].T if right else np.zeros((len(rows), d)))
        for row, res in zip(rows, index.query_many(queries)):
            stats["queries"] += 1
            stats["candidates"] += res.candidates
            if res.found and witness is None:
                y = [0] * inst.n
                for col, bit in zip(left, left_rows[res.witness]):
                    y[col] = int(bit)
                for col, bit in zip(right, row):
                    y[col] = int(bit)
                witness = tuple(y)
                witness_dist = lp_distance_pow(inst.basis, witness, inst.target, inst.p)
            elif not res.found and res.nearest_pow is not None:
                if res.nearest_pow <= no_pow + FLOAT_TOL * max(no_pow, 1.0):
                    band = True
            if witness is not None and not audit:
                break
        if witness is not None and not audit:
            break
    if witness is not None:
        decision = Decision.YES
    elif band:
        decision = Decision.PROMISE_VIOLATION
    else:
        decision = Decision.NO
    return MitmResult(decision, witness, witness_dist, stats)

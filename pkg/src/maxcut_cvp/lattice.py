"""Sparse lattice bases, targets, l_p distances and the CVP promise model.

Two arithmetic modes coexist. When every entry is a Fraction and ``p`` is an
integer, distances are exact rationals and compared exactly. Otherwise values
are floats and comparisons use the relative tolerance ``FLOAT_TOL``.
Distances are always handled as p-th powers so no roots are taken.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, TextIO

import numpy as np

from ._numeric import (
    FLOAT_TOL,
    Number,
    format_number,
    integer_exponent,
    is_exact,
    leq,
    parse_number,
    real_pow,
)
from .common import Decision, ParseError

Coordinates = tuple[int, ...]


@dataclass(frozen=True)
class SparseVector:
    dim: int
    entries: tuple[tuple[int, Number], ...] = ()

    def __post_init__(self):
        cleaned = tuple((int(i), v) for i, v in self.entries if v != 0)
        prev = 0
        for i, _ in cleaned:
            if i <= prev or i > self.dim:
                raise ValueError("sparse indices must be strictly increasing within 1..dim")
            prev = i
        object.__setattr__(self, "entries", cleaned)

    @classmethod
    def from_dict(cls, dim: int, values: dict[int, Number]) -> SparseVector:
        return cls(dim, tuple(sorted(values.items())))

    @classmethod
    def from_dense(cls, values: Sequence[Number]) -> SparseVector:
        return cls(len(values), tuple((i + 1, v) for i, v in enumerate(values) if v != 0))

    @property
    def nnz(self) -> int:
        return len(self.entries)

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for _, v in self.entries)

    def to_dense(self) -> list[Number]:
        out: list[Number] = [Fraction(0)] * self.dim
        for i, v in self.entries:
            out[i - 1] = v
        return out


@dataclass(frozen=True)
class SparseBasis:
    dim: int
    columns: tuple[SparseVector, ...]

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        if any(col.dim != self.dim for col in self.columns):
            raise ValueError("basis column dimension mismatch")

    @property
    def rank(self) -> int:
        return len(self.columns)

    @property
    def nnz(self) -> int:
        return sum(col.nnz for col in self.columns)

    @property
    def exact(self) -> bool:
        return all(col.exact for col in self.columns)

    def to_dense(self, dtype=float) -> np.ndarray:
        """Dense ``dim x rank`` matrix."""
        mat = np.zeros((self.dim, self.rank), dtype=dtype)
        for j, col in enumerate(self.columns):
            for i, v in col.entries:
                mat[i - 1, j] = dtype(v) if dtype is not object else v
        return mat


@dataclass(frozen=True)
class CvpInstance:
    """gamma-approximate CVP_p instance ``(B, t, r)``.

    ``r_pow`` and ``gamma_pow`` hold r**p and gamma**p; they stay exact where
    the roots r and gamma would be irrational.
    """

    basis: SparseBasis
    target: SparseVector
    p: Fraction
    r_pow: Number
    gamma_pow: Number = Fraction(1)
    iota: Fraction | None = None
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        if self.p < 1:
            raise ValueError("p must be >= 1")
        if self.target.dim != self.basis.dim:
            raise ValueError("target dimension differs from basis dimension")
        if not self.r_pow > 0:
            raise ValueError("r must be positive")
        if self.gamma_pow < 1:
            raise ValueError("gamma must be >= 1")
        if self.iota is not None and self.iota <= 1:
            raise ValueError("iota must exceed 1")

    @property
    def d(self) -> int:
        return self.basis.dim

    @property
    def n(self) -> int:
        return self.basis.rank

    @property
    def r(self) -> Number:
        return real_pow(self.r_pow, 1 / self.p)

    @property
    def gamma(self) -> Number:
        return real_pow(self.gamma_pow, 1 / self.p)

    @property
    def no_pow(self) -> Number:
        """(gamma * r) ** p: distances above this are NO."""
        return self.gamma_pow * self.r_pow

    @property
    def exact(self) -> bool:
        """True when lattice data, target and r**p are rational and p is an integer."""
        return (
            integer_exponent(self.p) is not None
            and self.basis.exact
            and self.target.exact
            and is_exact(self.r_pow)
        )


def lp_distance_pow(b: SparseBasis, y: Sequence[int], t: SparseVector, p: Number) -> Number:
    """``||B y - t||_p ** p``.

    Exact Fraction for integer ``p`` with rational data, float otherwise.
    """
    if len(y) != b.rank:
        raise ValueError(f"coordinate length {len(y)} != rank {b.rank}")
    if t.dim != b.dim:
        raise ValueError("target dimension differs from basis dimension")
    resid: dict[int, Number] = {}
    for yi, col in zip(y, b.columns):
        if yi:
            for i, v in col.entries:
                resid[i] = resid.get(i, 0) + yi * v
    for i, v in t.entries:
        resid[i] = resid.get(i, 0) - v
    k = integer_exponent(p)
    values = resid.values()
    if k is not None and all(is_exact(v) for v in values):
        return sum((Fraction(abs(v)) ** k for v in values), Fraction(0))
    pf = float(p)
    return math.fsum(abs(float(v)) ** pf for v in values)


def lp_distance_pow_dense(a: np.ndarray, x: np.ndarray, p: float) -> np.ndarray | float:
    """Row-wise ``||a - x||_p ** p`` for float arrays."""
    diff = np.abs(np.asarray(a, dtype=float) - np.asarray(x, dtype=float))
    if p == 1:
        return diff.sum(axis=-1)
    if p == 2:
        return np.einsum("...i,...i->...", diff, diff)
    return (diff**p).sum(axis=-1)


def _primitive(vec: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in vec.values():
        g = math.gcd(g, v)
    if g > 1:
        return {i: v // g for i, v in vec.items()}
    return vec


def exact_rank(columns: Sequence[SparseVector]) -> int:
    """Rank over the rationals by integer-preserving elimination on sparse columns.

    Floats are taken at their exact binary value.
    """
    pivots: dict[int, dict[int, int]] = {}
    for col in columns:
        fracs = {i: Fraction(v) for i, v in col.entries}
        if not fracs:
            continue
        scale = math.lcm(*(f.denominator for f in fracs.values()))
        vec = _primitive({i: int(f * scale) for i, f in fracs.items()})
        while vec:
            lead = min(vec)
            piv = pivots.get(lead)
            if piv is None:
                pivots[lead] = vec
                break
            a, b = piv[lead], vec[lead]
            merged: dict[int, int] = {}
            for i in vec.keys() | piv.keys():
                val = a * vec.get(i, 0) - b * piv.get(i, 0)
                if val:
                    merged[i] = val
            vec = _primitive(merged)
    return len(pivots)


def check_linear_independence(b: SparseBasis) -> bool:
    return exact_rank(b.columns) == b.rank


def binarize(y: Sequence[int]) -> Coordinates:
    """Map each coordinate to 0 if it is <= 0 and to 1 otherwise."""
    return tuple(0 if yi <= 0 else 1 for yi in y)


def is_binary(y: Sequence[int]) -> bool:
    return all(yi in (0, 1) for yi in y)


def decide_cvp(inst: CvpInstance, dist_pow: Number) -> Decision:
    """Classify a minimum distance (as a p-th power) against r and gamma*r."""
    if leq(dist_pow, inst.r_pow):
        return Decision.YES
    if not leq(dist_pow, inst.no_pow):
        return Decision.NO
    return Decision.PROMISE_VIOLATION


def band_width_ok(inst: CvpInstance, min_rel: float = 1e-6) -> bool:
    """Float-mode guard: the excluded band must dominate rounding noise."""
    if inst.exact:
        return True
    return float(inst.gamma_pow) - 1.0 >= min_rel


# text format -------------------------------------------------------------


def write_cvp(stream: TextIO, inst: CvpInstance, gamma: Number | None = None) -> None:
    """Write ``inst``; ``gamma`` overrides the stamped factor (e.g. the limit value)."""
    f = format_number
    g = inst.gamma if gamma is None else gamma
    header = f"cvp {inst.d} {inst.n} {f(inst.p)} {f(inst.r)} {f(g)}"
    if inst.iota is not None:
        header += f" {f(inst.iota)}"
    stream.write(header + "\n")
    for j, col in enumerate(inst.basis.columns, start=1):
        for i, v in col.entries:
            stream.write(f"b {j} {i} {f(v)}\n")
    for i, v in inst.target.entries:
        stream.write(f"t {i} {f(v)}\n")


def read_cvp(stream: TextIO) -> CvpInstance:
    header = None
    cols: dict[int, dict[int, Number]] = {}
    target: dict[int, Number] = {}
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "cvp":
                if header is not None:
                    raise ParseError(f"line {lineno}: duplicate header")
                if len(parts) not in (6, 7):
                    raise ParseError(f"line {lineno}: header needs 5 or 6 fields")
                d, n = int(parts[1]), int(parts[2])
                p = Fraction(parts[3])
                r, gamma = parse_number(parts[4]), parse_number(parts[5])
                iota = Fraction(parts[6]) if len(parts) == 7 else None
                header = (d, n, p, r, gamma, iota)
            elif parts[0] in ("b", "t"):
                if header is None:
                    raise ParseError(f"line {lineno}: record before header")
                d, n = header[0], header[1]
                if parts[0] == "b":
                    if len(parts) != 4:
                        raise ParseError(f"line {lineno}: basis entry needs 3 fields")
                    j, i, v = int(parts[1]), int(parts[2]), parse_number(parts[3])
                    if not (1 <= j <= n and 1 <= i <= d):
                        raise ParseError(f"line {lineno}: index out of range")
                    if i in cols.setdefault(j, {}):
                        raise ParseError(f"line {lineno}: duplicate basis entry")
                    cols[j][i] = v
                else:
                    if len(parts) != 3:
                        raise ParseError(f"line {lineno}: target entry needs 2 fields")
                    i, v = int(parts[1]), parse_number(parts[2])
                    if not 1 <= i <= d:
                        raise ParseError(f"line {lineno}: index out of range")
                    if i in target:
                        raise ParseError(f"line {lineno}: duplicate target entry")
                    target[i] = v
            else:
                raise ParseError(f"line {lineno}: unknown record {parts[0]!r}")
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"line {lineno}: {exc}") from exc
    if header is None:
        raise ParseError("missing header")
    d, n, p, r, gamma, iota = header
    basis = SparseBasis(d, tuple(SparseVector.from_dict(d, cols.get(j, {})) for j in range(1, n + 1)))
    try:
        return CvpInstance(
            basis,
            SparseVector.from_dict(d, target),
            p,
            real_pow(r, p),
            real_pow(gamma, p),
            iota,
        )
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


__all__ = [
    "Coordinates",
    "CvpInstance",
    "FLOAT_TOL",
    "SparseBasis",
    "SparseVector",
    "band_width_ok",
    "binarize",
    "check_linear_independence",
    "decide_cvp",
    "exact_rank",
    "is_binary",
    "lp_distance_pow",
    "read_cvp",
    "write_cvp",
]


def as_float(inst: CvpInstance) -> CvpInstance:
    """Copy of ``inst`` with every number converted to float (forces float mode)."""

    def vec(v: SparseVector) -> SparseVector:
        return SparseVector(v.dim, tuple((i, float(x)) for i, x in v.entries))

    basis = SparseBasis(inst.basis.dim, tuple(vec(c) for c in inst.basis.columns))
    return CvpInstance(basis, vec(inst.target), inst.p, float(inst.r_pow),
                       float(inst.gamma_pow), inst.iota, dict(inst.meta))

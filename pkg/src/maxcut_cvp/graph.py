"""Weighted graphs, partitions, cut arithmetic and the gap Max-Cut promise.

Vertices are labelled ``1..n`` as in the text format. Weights and ratios are
exact :class:`~fractions.Fraction` values throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Sequence, TextIO

import numpy as np

from ._numeric import Number, exact_pow, format_number, parse_rational
from .common import CapExceeded, Decision, ParseError

DEFAULT_CAP = 24

Edge = tuple[int, int, Fraction]


@dataclass(frozen=True)
class WeightedGraph:
    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        edges = tuple((int(u), int(v), Fraction(w)) for u, v, w in self.edges)
        object.__setattr__(self, "edges", edges)
        covered = set()
        for k, (u, v, w) in enumerate(edges, start=1):
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge {k} ({u},{v}) out of range 1..{self.n}")
            if u == v:
                raise ValueError(f"edge {k} is a self-loop on vertex {u}")
            if w <= 0:
                raise ValueError(f"edge {k} has non-positive weight {w}")
            covered.update((u, v))
        if len(covered) != self.n:
            missing = sorted(set(range(1, self.n + 1)) - covered)
            raise ValueError(f"isolated vertices {missing}: every vertex must lie on an edge")

    @classmethod
    def unweighted(cls, n: int, pairs: Iterable[tuple[int, int]]) -> WeightedGraph:
        return cls(n, tuple((u, v, Fraction(1)) for u, v in pairs))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def weights(self) -> tuple[Fraction, ...]:
        return tuple(w for _, _, w in self.edges)

    @cached_property
    def w_tot(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    @property
    def w_min(self) -> Fraction:
        return min(self.weights)

    @cached_property
    def is_unit(self) -> bool:
        return all(w == 1 for w in self.weights)

    @property
    def is_normalized(self) -> bool:
        return self.w_min == 1

    def degree(self, i: int) -> int:
        return sum((u == i) + (v == i) for u, v, _ in self.edges)


@dataclass(frozen=True)
class GapSpec:
    """Promise parameters for (1-eps, 1-eps^c) gap Max-Cut, plus the norm exponent."""

    epsilon: Fraction
    c: Fraction
    p: Fraction = Fraction(2)

    def __post_init__(self):
        for name in ("epsilon", "c", "p"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if not 0 < self.c <= 1:
            raise ValueError("c must lie in (0, 1]")
        if self.p < 1:
            raise ValueError("p must be >= 1")

    @property
    def eps_c(self) -> Number:
        """epsilon**c, exact when rational."""
        exact = exact_pow(self.epsilon, self.c)
        return exact if exact is not None else float(self.epsilon) ** float(self.c)

    @property
    def completeness(self) -> Fraction:
        return 1 - self.epsilon

    @property
    def soundness(self) -> Number:
        return 1 - self.eps_c


@dataclass(frozen=True)
class Partition:
    """Vertex subset P; the cut is (P, [n] - P)."""

    n: int
    members: frozenset[int]

    def __post_init__(self):
        members = frozenset(int(i) for i in self.members)
        if any(not 1 <= i <= self.n for i in members):
            raise ValueError("partition members must lie in 1..n")
        object.__setattr__(self, "members", members)

    @classmethod
    def from_membership(cls, vec: Sequence[int]) -> Partition:
        if any(b not in (0, 1) for b in vec):
            raise ValueError("membership vector must be 0/1")
        return cls(len(vec), frozenset(i + 1 for i, b in enumerate(vec) if b))

    def membership(self) -> tuple[int, ...]:
        return tuple(int(i in self.members) for i in range(1, self.n + 1))

    def complement(self) -> Partition:
        return Partition(self.n, frozenset(range(1, self.n + 1)) - self.members)

    def cuts(self, u: int, v: int) -> bool:
        return (u in self.members) != (v in self.members)


def normalize_weights(g: WeightedGraph) -> WeightedGraph:
    """Divide every weight by the minimum weight so the smallest becomes 1."""
    w_min = g.w_min
    if w_min <= 0:
        raise ValueError("weights must be positive")
    if w_min == 1:
        return g
    return WeightedGraph(g.n, tuple((u, v, w / w_min) for u, v, w in g.edges))


def cut_value(g: WeightedGraph, part: Partition) -> Fraction:
    if part.n != g.n:
        raise ValueError("partition and graph disagree on n")
    return sum((w for u, v, w in g.edges if part.cuts(u, v)), Fraction(0))


def cut_count(g: WeightedGraph, part: Partition) -> int:
    return sum(1 for u, v, _ in g.edges if part.cuts(u, v))


def _integer_weights(g: WeightedGraph) -> tuple[list[int], int]:
    scale = math.lcm(*(w.denominator for w in g.weights))
    return [int(w * scale) for w in g.weights], scale


def max_cut(g: WeightedGraph, cap: int = DEFAULT_CAP) -> tuple[Fraction, Partition]:
    """Exact maximum cut value and a maximising partition by exhaustive search.

    Vertex 1 is pinned outside P, so 2**(n-1) partitions are scanned. Among
    equal cuts the partition whose membership bits (vertex 2 first) form the
    smallest binary number wins.
    """
    if g.n > cap:
        raise CapExceeded(f"brute-force Max-Cut refuses n={g.n} > cap {cap}")
    weights, scale = _integer_weights(g)
    if g.n == 1:
        return Fraction(0), Partition(1, frozenset())
    free = g.n - 1
    total = 1 << free
    best_val, best_mask = -1, 0
    if sum(weights) < 2**62:
        us = np.array([u for u, _, _ in g.edges], dtype=np.int64)
        vs = np.array([v for _, v, _ in g.edges], dtype=np.int64)
        ws = np.array(weights, dtype=np.int64)
        # vertex i (i >= 2) is bit (n - i) so mask order equals lexicographic order
        shift_u = np.where(us == 1, -1, g.n - us)
        shift_v = np.where(vs == 1, -1, g.n - vs)
        chunk = 1 << 18
        for start in range(0, total, chunk):
            masks = np.arange(start, min(total, start + chunk), dtype=np.int64)
            vals = np.zeros(masks.shape, dtype=np.int64)
            for su, sv, w in zip(shift_u, shift_v, ws):
                bu = (masks >> su) & 1 if su >= 0 else 0
                bv = (masks >> sv) & 1 if sv >= 0 else 0
                vals += w * (bu ^ bv)
            idx = int(np.argmax(vals))
            if int(vals[idx]) > best_val:
                best_val, best_mask = int(vals[idx]), int(masks[idx])
    else:
        for mask in range(total):
            side = [0] + [(mask >> (g.n - i)) & 1 for i in range(2, g.n + 1)]
            val = sum(w for (u, v, _), w in zip(g.edges, weights) if side[u - 1] != side[v - 1])
            if val > best_val:
                best_val, best_mask = val, mask
    members = frozenset(i for i in range(2, g.n + 1) if (best_mask >> (g.n - i)) & 1)
    return Fraction(best_val, scale), Partition(g.n, members)


def max_cut_ratio(g: WeightedGraph, cap: int = DEFAULT_CAP) -> Fraction:
    value, _ = max_cut(g, cap)
    return value / g.w_tot


def classify_ratio(ratio: Fraction, spec: GapSpec) -> Decision:
    if ratio >= spec.completeness:
        return Decision.YES
    if ratio < spec.soundness:
        return Decision.NO
    return Decision.PROMISE_VIOLATION


def decide_gap_maxcut(g: WeightedGraph, spec: GapSpec, cap: int = DEFAULT_CAP) -> Decision:
    """YES iff the exact max-cut ratio reaches 1 - eps.

    A ratio inside [1 - eps^c, 1 - eps) breaks the promise and is reported as
    ``Decision.PROMISE_VIOLATION``.
    """
    return classify_ratio(max_cut_ratio(g, cap), spec)


# text format -------------------------------------------------------------


def read_graph(stream: TextIO) -> tuple[WeightedGraph, GapSpec]:
    header = None
    edges: list[Edge] = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "maxcut":
                if header is not None:
                    raise ParseError(f"line {lineno}: duplicate header")
                if len(parts) != 6:
                    raise ParseError(f"line {lineno}: header needs 5 fields")
                n, m = int(parts[1]), int(parts[2])
                p, eps, c = (parse_rational(t) for t in parts[3:6])
                header = (n, m, p, eps, c)
            elif parts[0] == "e":
                if header is None:
                    raise ParseError(f"line {lineno}: edge before header")
                if len(parts) != 4:
                    raise ParseError(f"line {lineno}: edge needs 3 fields")
                u, v, w = int(parts[1]), int(parts[2]), parse_rational(parts[3])
                if not (1 <= u <= header[0] and 1 <= v <= header[0]):
                    raise ParseError(f"line {lineno}: vertex index out of range")
                if u == v:
                    raise ParseError(f"line {lineno}: self-loop")
                edges.append((u, v, w))
            else:
                raise ParseError(f"line {lineno}: unknown record {parts[0]!r}")
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"line {lineno}: {exc}") from exc
    if header is None:
        raise ParseError("missing header")
    n, m, p, eps, c = header
    if len(edges) != m:
        raise ParseError(f"header promises {m} edges, found {len(edges)}")
    try:
        return WeightedGraph(n, tuple(edges)), GapSpec(eps, c, p)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def write_graph(stream: TextIO, g: WeightedGraph, spec: GapSpec) -> None:
    f = format_number
    stream.write(f"maxcut {g.n} {g.m} {f(spec.p)} {f(spec.epsilon)} {f(spec.c)}\n")
    for u, v, w in g.edges:
        stream.write(f"e {u} {v} {f(w)}\n")

"""Seeded generators for planted YES and brute-force certified NO gap Max-Cut instances."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .common import BudgetExhausted, CapExceeded
from .graph import DEFAULT_CAP, GapSpec, WeightedGraph, max_cut_ratio, normalize_weights

WEIGHT_GRID = 8


@dataclass(frozen=True)
class PlantSpec:
    n: int
    m: int
    epsilon: Fraction
    c: Fraction = Fraction(1, 2)
    p: Fraction = Fraction(2)
    seed: int = 0
    w_max: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("epsilon", "c", "p", "w_max"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.n < 2:
            raise ValueError("need at least two vertices")
        if self.m < self.n - 1:
            raise ValueError("need m >= n - 1 to cover every vertex")
        if self.w_max < 1:
            raise ValueError("weight range is [1, w_max] with w_max >= 1")
        self.gap  # validates epsilon, c, p

    @property
    def gap(self) -> GapSpec:
        return GapSpec(self.epsilon, self.c, self.p)

    @property
    def crossing(self) -> int:
        """ceil((1 - eps) m) edges planted across the hidden cut."""
        k = (1 - self.epsilon) * self.m
        return -(-k.numerator // k.denominator)


def _weights(rng: random.Random, count: int, w_max: Fraction) -> list[Fraction]:
    if w_max == 1:
        return [Fraction(1)] * count
    lo, hi = WEIGHT_GRID, int(w_max * WEIGHT_GRID)
    return [Fraction(rng.randint(lo, hi), WEIGHT_GRID) for _ in range(count)]


def _orient(rng: random.Random, u: int, v: int) -> tuple[int, int]:
    return (u, v) if rng.random() < 0.5 else (v, u)


def generate_planted_yes(spec: PlantSpec) -> WeightedGraph:
    """Random graph built around a hidden bipartition cutting at least a 1-eps weight fraction.

    A star from one vertex of each side to every vertex of the other side
    covers all vertices with crossing edges.
    """
    rng = random.Random(spec.seed)
    n, m, k = spec.n, spec.m, spec.crossing
    if k < n - 1:
        raise ValueError(f"only {k} crossing edges, need n-1 = {n - 1} to cover every vertex")
    verts = list(range(1, n + 1))
    rng.shuffle(verts)
    size = rng.randint(1, n - 1)
    side_a, side_b = sorted(verts[:size]), sorted(verts[size:])
    internal = m - k
    if internal and max(len(side_a), len(side_b)) < 2:
        raise ValueError("no side has two vertices to host uncut edges")
    ca, cb = rng.choice(side_a), rng.choice(side_b)
    cross = [(ca, v) for v in side_b] + [(u, cb) for u in side_a if u != ca]
    while len(cross) < k:
        cross.append((rng.choice(side_a), rng.choice(side_b)))
    hosts = [s for s in (side_a, side_b) if len(s) >= 2]
    inner = []
    for _ in range(internal):
        u, v = rng.sample(rng.choice(hosts), 2)
        inner.append((u, v))
    weights = sorted(_weights(rng, m, spec.w_max), reverse=True)
    # heaviest weights on crossing edges: fraction >= k/m >= 1 - eps
    edges = [(*_orient(rng, u, v), w) for (u, v), w in zip(cross + inner, weights)]
    rng.shuffle(edges)
    return normalize_weights(WeightedGraph(n, tuple(edges)))


def _random_graph(rng: random.Random, n: int, m: int, w_max: Fraction) -> WeightedGraph:
    order = list(range(1, n + 1))
    rng.shuffle(order)
    pairs = [(order[i], rng.choice(order[:i])) for i in range(1, n)]
    used = {frozenset(p) for p in pairs}
    all_pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    spare = [p for p in all_pairs if frozenset(p) not in used]
    rng.shuffle(spare)
    extra = m - len(pairs)
    if extra <= len(spare):
        pairs += spare[:extra]
    else:
        pairs += spare
        pairs += [rng.choice(all_pairs) for _ in range(m - len(pairs))]
    rng.shuffle(pairs)
    weights = _weights(rng, m, w_max)
    edges = tuple((*_orient(rng, u, v), w) for (u, v), w in zip(pairs, weights))
    return normalize_weights(WeightedGraph(n, edges))


def generate_certified_no(spec: PlantSpec, max_attempts: int = 1000,
                          cap: int = DEFAULT_CAP) -> WeightedGraph:
    """Rejection-sample random graphs until brute force certifies ratio < 1 - eps^c."""
    if spec.n > cap:
        raise CapExceeded(f"certification needs n <= {cap}")
    rng = random.Random(spec.seed)
    bound = spec.gap.soundness
    for _ in range(max_attempts):
        g = _random_graph(rng, spec.n, spec.m, spec.w_max)
        if max_cut_ratio(g, cap) < bound:
            return g
    raise BudgetExhausted(f"no certified NO instance in {max_attempts} attempts")

"""Gap Max-Cut to gamma-CVP_p: the edge-rhombus gadget reduction.

Edge ``E_k = (u, v)`` owns rows ``2k-1`` and ``2k``. Column ``u`` gets
``(-1, iota*w'_k)`` there, column ``v`` gets ``(+1, iota*w'_k)`` and the target
gets ``(0, iota*w'_k)`` with ``w'_k = w_k ** (1/p)``. A partition P maps to the
lattice point ``sum_{i in P} B[:, i]``; a cut edge then sits at distance 1 from
the target on its plane and an uncut edge at distance ``iota*w'_k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

from ._numeric import Number, is_exact, real_pow
from .common import ReductionError
from .graph import GapSpec, Partition, WeightedGraph, cut_count, normalize_weights
from .lattice import CvpInstance, SparseBasis, SparseVector, band_width_ok

Mode = Literal["auto", "unweighted", "weighted"]

DEFAULT_SLACK = 0.05
MAX_IOTA_DOUBLINGS = 2000


@dataclass(frozen=True)
class ReductionParams:
    iota: Fraction
    mode: Mode = "auto"

    def __post_init__(self):
        object.__setattr__(self, "iota", Fraction(self.iota))
        if self.iota <= 1:
            raise ValueError("iota must exceed 1")
        if self.mode not in ("auto", "unweighted", "weighted"):
            raise ValueError(f"unknown mode {self.mode!r}")


def _iota_pow(iota: Fraction, p: Fraction) -> Number:
    return real_pow(Fraction(iota), p)


def r_pow_of(g: WeightedGraph, spec: GapSpec, iota: Fraction) -> Number:
    """r**p = m(1 - eps) + iota^p * eps * w_tot."""
    eps = spec.epsilon
    return g.m * (1 - eps) + _iota_pow(iota, spec.p) * eps * g.w_tot


def no_pow_of(g: WeightedGraph, spec: GapSpec, iota: Fraction) -> Number:
    """(gamma r)**p = m(1 - eps^c) + iota^p * eps^c * w_tot."""
    ec = spec.eps_c
    ip = _iota_pow(iota, spec.p)
    if not is_exact(ec, ip):
        ec, ip = float(ec), float(ip)
        return g.m * (1 - ec) + ip * ec * float(g.w_tot)
    return g.m * (1 - ec) + ip * ec * g.w_tot


def gamma_pow_of(g: WeightedGraph, spec: GapSpec, iota: Fraction) -> Number:
    no, r = no_pow_of(g, spec, iota), r_pow_of(g, spec, iota)
    if is_exact(no, r):
        return no / r
    return float(no) / float(r)


def gamma_of(g: WeightedGraph, spec: GapSpec, iota: Fraction) -> Number:
    """Approximation factor stamped by the reduction at gadget parameter ``iota``."""
    return real_pow(gamma_pow_of(g, spec, iota), 1 / spec.p)


def limit_gamma(spec: GapSpec) -> Number:
    """eps ** ((c - 1) / p): the supremum of gamma_of over iota."""
    return real_pow(spec.epsilon, (spec.c - 1) / spec.p)


def choose_iota(g: WeightedGraph, spec: GapSpec, target_slack: float = DEFAULT_SLACK) -> Fraction:
    """Smallest power of two ``iota >= 2`` with gamma(iota) >= (1 - slack) * limit."""
    if not 0 < target_slack <= 1:
        raise ValueError("target_slack must lie in (0, 1]")
    goal = (1 - target_slack) * float(limit_gamma(spec))
    iota = Fraction(2)
    for _ in range(MAX_IOTA_DOUBLINGS):
        if float(gamma_of(g, spec, iota)) >= goal:
            return iota
        iota *= 2
    raise ReductionError(f"no iota up to 2^{MAX_IOTA_DOUBLINGS} reaches slack {target_slack}")


def _adjusted_weight(w: Fraction, p: Fraction) -> Number:
    return real_pow(w, 1 / p)


def _scale(iota: Fraction, wp: Number) -> Number:
    if is_exact(wp):
        return iota * wp
    return float(iota) * wp


def _build(g: WeightedGraph, spec: GapSpec, iota: Fraction, r_pow: Number, gamma_pow: Number,
           check_band: bool) -> CvpInstance:
    d = 2 * g.m
    cols: list[dict[int, Number]] = [{} for _ in range(g.n)]
    target: dict[int, Number] = {}
    heights: dict[Fraction, Number] = {}
    for k, (u, v, w) in enumerate(g.edges, start=1):
        height = heights.get(w)
        if height is None:
            height = heights[w] = _scale(iota, _adjusted_weight(w, spec.p))
        cols[u - 1][2 * k - 1] = Fraction(-1)
        cols[u - 1][2 * k] = height
        cols[v - 1][2 * k - 1] = Fraction(1)
        cols[v - 1][2 * k] = height
        target[2 * k] = height
    basis = SparseBasis(d, tuple(SparseVector.from_dict(d, c) for c in cols))
    inst = CvpInstance(
        basis,
        SparseVector.from_dict(d, target),
        spec.p,
        r_pow,
        gamma_pow,
        iota,
        meta={"limit_gamma": limit_gamma(spec)},
    )
    if check_band and not band_width_ok(inst):
        raise ReductionError(
            "float-mode instance with gamma^p - 1 < 1e-6: decision band is below numeric noise"
        )
    return inst


def reduce_unweighted(g: WeightedGraph, spec: GapSpec, params: ReductionParams,
                      check_band: bool = True) -> CvpInstance:
    if not g.is_unit:
        raise ReductionError("unweighted reduction needs unit weights")
    iota, m = params.iota, g.m
    ip = _iota_pow(iota, spec.p)
    r_pow = m * (1 + spec.epsilon * (ip - 1))
    ec = spec.eps_c
    if is_exact(ec, ip):
        no_pow = m * (1 + ec * (ip - 1))
        gamma_pow = no_pow / r_pow
    else:
        gamma_pow = m * (1 + float(ec) * (float(ip) - 1)) / float(r_pow)
    return _build(g, spec, iota, r_pow, gamma_pow, check_band)


def reduce_weighted(g: WeightedGraph, spec: GapSpec, params: ReductionParams,
                    check_band: bool = True) -> CvpInstance:
    if not g.is_normalized:
        raise ReductionError("weighted reduction needs normalized weights (minimum weight 1)")
    iota = params.iota
    return _build(g, spec, iota, r_pow_of(g, spec, iota), gamma_pow_of(g, spec, iota), check_band)


def reduce_graph(g: WeightedGraph, spec: GapSpec, params: ReductionParams,
                 check_band: bool = True) -> CvpInstance:
    """Dispatch on ``params.mode``; ``auto`` normalizes and picks by unit weights."""
    mode = params.mode
    if mode == "auto":
        g = normalize_weights(g)
        mode = "unweighted" if g.is_unit else "weighted"
    if mode == "unweighted":
        return reduce_unweighted(g, spec, params, check_band)
    return reduce_weighted(g, spec, params, check_band)


def binary_distance_pow(g: WeightedGraph, part: Partition, iota: Fraction, p: Fraction) -> Number:
    """dist^p of the lattice point for ``part``: #cut edges + iota^p * uncut weight."""
    uncut = sum((w for u, v, w in g.edges if not part.cuts(u, v)), Fraction(0))
    ip = _iota_pow(iota, p)
    if not is_exact(ip):
        return cut_count(g, part) + ip * float(uncut)
    return cut_count(g, part) + ip * uncut


def partition_of(y: Sequence[int]) -> Partition:
    """Decode binary coordinates into the vertex partition p_i = y_i."""
    return Partition.from_membership(list(y))

"""End-to-end reduce-then-solve pipeline and the query-count benchmark."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from ._numeric import Number, format_number
from .common import Decision
from .graph import GapSpec, WeightedGraph, cut_value, normalize_weights
from .lattice import CvpInstance, as_float, decide_cvp
from .mitm import split_columns, solve_binary_cvp_mitm
from .oracles import brute_binary_cvp
from .reduction import DEFAULT_SLACK, ReductionParams, choose_iota, limit_gamma, partition_of, reduce_graph

Solver = Literal["oracle", "mitm"]


@dataclass
class PipelineReport:
    decision: Decision
    fields: list[tuple[str, object]] = field(default_factory=list)
    witness_ok: bool | None = None

    def lines(self) -> list[str]:
        out = [f"decision {self.decision}"]
        for key, value in self.fields:
            if isinstance(value, (Fraction, float)):
                value = format_number(value)
            out.append(f"{key} {value}")
        return out

    def get(self, key: str):
        for k, v in self.fields:
            if k == key:
                return v
        raise KeyError(key)


def run_pipeline(g: WeightedGraph, spec: GapSpec, *, iota: Fraction | None = None,
                 slack: float = DEFAULT_SLACK, mode: str = "auto", solver: Solver = "oracle",
                 backend: str = "exact", a: Number = Fraction(1, 2), seed: int = 0,
                 audit: bool = False, threads: int = 1, float_mode: bool = False) -> PipelineReport:
    """Reduce ``g`` to binary CVP, solve it, and carry the decision back unchanged.

    A YES witness is decoded into a partition and re-checked against the graph.
    """
    g = normalize_weights(g)
    if iota is None:
        iota = choose_iota(g, spec, slack)
    inst: CvpInstance = reduce_graph(g, spec, ReductionParams(Fraction(iota), mode))
    if float_mode:
        inst = as_float(inst)
    fields: list[tuple[str, object]] = [
        ("mode", "unweighted" if g.is_unit else "weighted"),
        ("iota", Fraction(iota)),
        ("r_pow", inst.r_pow),
        ("r", inst.r),
        ("gamma", inst.gamma),
        ("limit_gamma", limit_gamma(spec)),
        ("solver", solver if solver == "oracle" else f"mitm-{backend}"),
    ]
    if solver == "oracle":
        dist, witness = brute_binary_cvp(inst, threads=threads)
        decision = decide_cvp(inst, dist)
        fields.append(("dist_pow", dist))
        fields.append(("stat queries", 1 << inst.n))
        if decision is not Decision.YES:
            witness = None
    elif solver == "mitm":
        res = solve_binary_cvp_mitm(inst, split_columns(inst.n, a), backend, seed, audit)
        decision, witness = res.decision, res.witness
        for key in ("points", "queries", "candidates"):
            fields.append((f"stat {key}", res.stats[key]))
        if witness is not None:
            fields.append(("dist_pow", res.witness_dist_pow))
    else:
        raise ValueError(f"unknown solver {solver!r}")
    report = PipelineReport(decision, fields)
    if witness is not None:
        part = partition_of(witness)
        ratio = cut_value(g, part) / g.w_tot
        report.witness_ok = ratio >= spec.completeness
        fields.append(("witness", "".join(map(str, witness))))
        fields.append(("witness_ratio", ratio))
        fields.append(("witness_ok", int(report.witness_ok)))
    return report


def bench(ns, seeds, spec: GapSpec, *, backend: str = "exact", a: Number = Fraction(1, 2),
          slack: float = DEFAULT_SLACK, degree: int = 2, w_max: Fraction = Fraction(1)):
    """Yield one record per (n, seed): audit-mode NN query and index sizes on planted YES graphs."""
    from .generate import PlantSpec, generate_planted_yes

    for n in ns:
        for seed in seeds:
            plant = PlantSpec(n, degree * n, spec.epsilon, spec.c, spec.p, seed, w_max)
            g = generate_planted_yes(plant)
            report = run_pipeline(g, spec, slack=slack, solver="mitm", backend=backend, a=a,
                                  seed=seed, audit=True)
            yield {
                "n": n,
                "m": g.m,
                "seed": seed,
                "decision": str(report.decision),
                "points": report.get("stat points"),
                "queries": report.get("stat queries"),
                "candidates": report.get("stat candidates"),
            }

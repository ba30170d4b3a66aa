"""Decision-version near-neighbour index with an exact scan and a p-stable LSH backend.

A query asks whether some indexed point lies within ``r`` of ``x`` under the
promise that the nearest point is either within ``r`` or beyond ``gamma*r``.
Both backends verify candidate distances before answering YES, so a YES always
comes with a witness and the LSH backend has no false positives.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterator, Literal

import numpy as np

from ._numeric import FLOAT_TOL

log = logging.getLogger(__name__)

Backend = Literal["exact", "lsh"]

TARGET_FAILURE = 2.0**-10
_SCAN_BYTES = 1 << 26


def collision_probability(dist: float, width: float, p: int) -> float:
    """Probability that two points at ``dist`` share one p-stable hash of bucket ``width``."""
    if dist <= 0:
        return 1.0
    u = width / dist
    if p == 2:
        tail = 0.5 * math.erfc(u / math.sqrt(2.0))
        return 1.0 - 2.0 * tail - 2.0 / (math.sqrt(2.0 * math.pi) * u) * (1.0 - math.exp(-u * u / 2.0))
    if p == 1:
        return 2.0 * math.atan(u) / math.pi - math.log1p(u * u) / (math.pi * u)
    raise ValueError("p-stable hashing is only available for p in {1, 2}")


@dataclass(frozen=True)
class LshParams:
    tables: int
    funcs: int
    width: float
    seed: int
    p1: float = float("nan")
    p2: float = float("nan")
    rho_hat: float = float("nan")


def tune_lsh(n_points: int, r: float, gamma: float, p: int, seed: int = 0,
             width: float | None = None, failure: float = TARGET_FAILURE) -> LshParams:
    """Textbook K/L choice, then extra tables until the near-point miss rate is below ``failure``."""
    width = 4.0 * r if width is None else width
    p1 = collision_probability(r, width, p)
    p2 = collision_probability(gamma * r, width, p)
    rho_hat = math.log(1 / p1) / math.log(1 / p2)
    funcs = max(1, math.ceil(math.log(max(n_points, 1)) / math.log(1 / p2)))
    tables = math.ceil(n_points**rho_hat * 3)
    hit = p1**funcs
    needed = math.ceil(math.log(failure) / math.log1p(-hit)) if hit < 1 else 1
    tables = max(tables, needed, 1)
    log.debug("lsh tuning N=%d K=%d L=%d W=%g p1=%.4f p2=%.4f rho=%.4f",
              n_points, funcs, tables, width, p1, p2, rho_hat)
    return LshParams(tables, funcs, width, seed, p1, p2, rho_hat)


@dataclass
class QueryResult:
    found: bool
    witness: int | None = None
    dist_pow: float | None = None
    nearest_pow: float | None = None
    candidates: int = 0


@dataclass
class NnIndex:
    points: np.ndarray
    r_pow: float
    gamma: float
    p: float
    backend: Backend
    lsh: LshParams | None = None
    _proj: np.ndarray | None = field(default=None, repr=False)
    _offset: np.ndarray | None = field(default=None, repr=False)
    _tables: list[dict[bytes, np.ndarray]] = field(default_factory=list, repr=False)

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def r(self) -> float:
        return self.r_pow ** (1.0 / self.p)

    def _dist_pow(self, idx: np.ndarray, x: np.ndarray) -> np.ndarray:
        diff = np.abs(self.points[idx] - x)
        if self.p == 1:
            return diff.sum(axis=-1)
        if self.p == 2:
            return np.einsum("ij,ij->i", diff, diff)
        return (diff**self.p).sum(axis=-1)

    def _within(self, dist_pow: float) -> bool:
        return dist_pow <= self.r_pow + FLOAT_TOL * max(self.r_pow, 1.0)

    def _hash(self, X: np.ndarray) -> np.ndarray:
        return np.floor((X @ self._proj + self._offset) / self.lsh.width).astype(np.int64)

    def bucket_counts(self) -> np.ndarray:
        """How many buckets each indexed point belongs to (one per table)."""
        counts = np.zeros(self.size, dtype=np.int64)
        for table in self._tables:
            for members in table.values():
                counts[members] += 1
        return counts

    def table_digest(self) -> list[list[tuple[bytes, tuple[int, ...]]]]:
        return [sorted((k, tuple(int(i) for i in v)) for k, v in t.items()) for t in self._tables]

    def query(self, x) -> QueryResult:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError(f"query dimension {x.shape} != index dimension {self.dim}")
        if self.backend == "exact":
            return self._query_exact(x)
        return self._query_lsh(x, self._hash(x[None, :])[0])

    def query_many(self, X) -> Iterator[QueryResult]:
        """Answer rows of ``X`` in order; hashing is batched."""
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.dim:
            raise ValueError("query batch has the wrong dimension")
        if self.backend == "exact":
            step = max(1, _SCAN_BYTES // max(1, 8 * self.dim * self.size))
            if step == 1:
                for x in X:
                    yield self._query_exact(x)
                return
            for start in range(0, len(X), step):
                block = X[start:start + step]
                diff = np.abs(block[:, None, :] - self.points[None, :, :])
                if self.p == 1:
                    d = diff.sum(axis=-1)
                elif self.p == 2:
                    d = np.einsum("qnd,qnd->qn", diff, diff)
                else:
                    d = (diff**self.p).sum(axis=-1)
                best = np.argmin(d, axis=1)
                for row, j in enumerate(best):
                    dist = float(d[row, j])
                    found = self._within(dist)
                    yield QueryResult(found, int(j) if found else None,
                                      dist if found else None, dist, self.size)
            return
        chunk = 1024
        for start in range(0, len(X), chunk):
            block = X[start:start + chunk]
            hashes = self._hash(block)
            for x, h in zip(block, hashes):
                yield self._query_lsh(x, h)

    def _query_exact(self, x: np.ndarray) -> QueryResult:
        step = max(1, _SCAN_BYTES // max(1, 8 * self.dim))
        best_i, best_d = -1, math.inf
        for start in range(0, self.size, step):
            idx = np.arange(start, min(self.size, start + step))
            d = self._dist_pow(idx, x)
            j = int(np.argmin(d))
            if d[j] < best_d:
                best_i, best_d = start + j, float(d[j])
        found = self._within(best_d)
        return QueryResult(found, best_i if found else None, best_d if found else None,
                           best_d, self.size)

    def _query_lsh(self, x: np.ndarray, h: np.ndarray) -> QueryResult:
        K = self.lsh.funcs
        seen: set[int] = set()
        nearest = math.inf
        checked = 0
        for t, table in enumerate(self._tables):
            members = table.get(h[t * K:(t + 1) * K].tobytes())
            if members is None:
                continue
            fresh = np.array([i for i in members if i not in seen], dtype=np.int64)
            if not len(fresh):
                continue
            seen.update(fresh.tolist())
            d = self._dist_pow(fresh, x)
            checked += len(fresh)
            j = int(np.argmin(d))
            nearest = min(nearest, float(d[j]))
            ok = np.nonzero(d <= self.r_pow + FLOAT_TOL * max(self.r_pow, 1.0))[0]
            if len(ok):
                w = int(ok[0])
                return QueryResult(True, int(fresh[w]), float(d[w]), nearest, checked)
        return QueryResult(False, None, None, nearest if checked else None, checked)


def build_index(points, r: float, gamma: float, p: float, backend: Backend = "exact",
                seed: int = 0, *, r_pow: float | None = None, width: float | None = None,
                tables: int | None = None, funcs: int | None = None) -> NnIndex:
    """Preprocess ``points`` (N x d) for (r, gamma*r) decision queries.

    ``r_pow`` overrides ``r ** p`` when the caller already holds the p-th power.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or len(pts) == 0:
        raise ValueError("index needs a non-empty N x d point array")
    p = float(p)
    if p < 1:
        raise ValueError("p must be >= 1")
    r_pow = float(r) ** p if r_pow is None else float(r_pow)
    r = r_pow ** (1.0 / p)
    if backend == "exact":
        return NnIndex(pts, r_pow, float(gamma), p, "exact")
    if backend != "lsh":
        raise ValueError(f"unknown backend {backend!r}")
    if p not in (1.0, 2.0):
        raise ValueError("lsh backend supports only p = 1 or p = 2")
    if gamma <= 1:
        raise ValueError("lsh backend needs gamma > 1")
    params = tune_lsh(len(pts), r, float(gamma), int(p), seed, width)
    if tables is not None or funcs is not None:
        params = LshParams(tables or params.tables, funcs or params.funcs, params.width, seed,
                           params.p1, params.p2, params.rho_hat)
    rng = np.random.default_rng(seed)
    total = params.tables * params.funcs
    if p == 2:
        proj = rng.standard_normal((pts.shape[1], total))
    else:
        proj = rng.standard_cauchy((pts.shape[1], total))
    offset = rng.uniform(0.0, params.width, total)
    idx = NnIndex(pts, r_pow, float(gamma), p, "lsh", params, proj, offset)
    H = idx._hash(pts)
    K = params.funcs
    for t in range(params.tables):
        keys = np.ascontiguousarray(H[:, t * K:(t + 1) * K])
        uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)
        order = np.argsort(inverse, kind="stable")
        splits = np.cumsum(np.bincount(inverse, minlength=len(uniq)))[:-1]
        table = {}
        for key, members in zip(uniq, np.split(order, splits)):
            table[np.ascontiguousarray(key).tobytes()] = members
        idx._tables.append(table)
    return idx

import math

import numpy as np
import pytest

from maxcut_cvp.ann import build_index, collision_probability, tune_lsh

PTS = [(0.0, 0.0), (10.0, 0.0)]


def naive_min(points, x, p):
    best = None
    for a in points:
        d = sum(abs(ai - xi) ** p for ai, xi in zip(a, x))
        best = d if best is None else min(best, d)
    return best


def test_examples_exact():
    idx = build_index(PTS, 2, 2, 2)
    assert idx.size == 2
    assert idx.query((1, 0)).found
    assert not idx.query((5, 0)).found
    assert not idx.query((3, 0)).found


def test_examples_lsh():
    idx = build_index(PTS, 2, 2, 2, backend="lsh", seed=7)
    assert not idx.query((5, 0)).found
    res = idx.query((1, 0))
    if res.found:
        assert res.witness == 0 and res.dist_pow == pytest.approx(1.0)


def test_lsh_tables_deterministic():
    a = build_index(PTS, 2, 2, 2, backend="lsh", seed=7)
    b = build_index(PTS, 2, 2, 2, backend="lsh", seed=7)
    assert a.table_digest() == b.table_digest()
    assert np.array_equal(a._proj, b._proj)
    c = build_index(PTS, 2, 2, 2, backend="lsh", seed=8)
    assert not np.array_equal(a._proj, c._proj)


@pytest.mark.parametrize("p", [1, 2])
def test_bucket_count_equals_tables(p):
    rng = np.random.default_rng(0)
    pts = rng.integers(0, 2, size=(2**10, 12)).astype(float)
    idx = build_index(pts, 1.5, 2.0, p, backend="lsh", seed=3)
    assert np.all(idx.bucket_counts() == idx.lsh.tables)


def test_errors():
    with pytest.raises(ValueError):
        build_index(np.zeros((0, 2)), 1, 2, 2)
    with pytest.raises(ValueError):
        build_index(PTS, 1, 2, 3, backend="lsh")
    with pytest.raises(ValueError):
        build_index(PTS, 1, 1, 2, backend="lsh")
    with pytest.raises(ValueError):
        build_index(PTS, 1, 2, 2).query((1, 2, 3))


@pytest.mark.parametrize("p", [1, 2, 3])
def test_exact_matches_naive_scan(p):
    rng = np.random.default_rng(p)
    pts = rng.integers(-3, 4, size=(60, 5)).astype(float)
    Q = rng.integers(-3, 4, size=(200, 5)).astype(float)
    r = 3.0
    idx = build_index(pts, r, 2, p)
    batched = list(idx.query_many(Q))
    for q, res in zip(Q, batched):
        m = naive_min(pts.tolist(), q.tolist(), p)
        single = idx.query(q)
        assert res.found == (m <= r**p + 1e-9)
        assert single.found == res.found
        assert res.nearest_pow == pytest.approx(m)


@pytest.mark.parametrize("p", [1, 2])
def test_collision_probability_monte_carlo(p):
    rng = np.random.default_rng(11)
    width, dist, trials = 4.0, 1.7, 200_000
    a = rng.standard_normal(trials) if p == 2 else rng.standard_cauchy(trials)
    b = rng.uniform(0, width, trials)
    same = np.floor(b / width) == np.floor((a * dist + b) / width)
    assert same.mean() == pytest.approx(collision_probability(dist, width, p), abs=0.005)


def test_tuning_formula():
    params = tune_lsh(1024, 1.0, 2.0, 2)
    assert params.width == 4.0
    assert params.funcs == math.ceil(math.log(1024) / math.log(1 / params.p2))
    assert params.tables >= math.ceil(1024**params.rho_hat * 3)
    assert (1 - params.p1**params.funcs) ** params.tables <= 2**-10


@pytest.mark.parametrize("p", [1, 2])
def test_no_false_positives_and_low_miss_rate(p):
    rng = np.random.default_rng(20 + p)
    d, n, gamma, r = 16, 512, 1.5, 2.0
    pts = rng.standard_normal((n, d)) * 6
    idx = build_index(pts, r, gamma, p, backend="lsh", seed=5)
    misses = 0
    trials = 1000
    for t in range(trials):
        base = pts[rng.integers(n)]
        step = rng.standard_normal(d)
        step *= (r * rng.uniform(0, 1)) / np.linalg.norm(step, ord=p)
        res = idx.query(base + step)
        if res.found:
            w = pts[res.witness]
            assert np.sum(np.abs(w - base - step) ** p) <= r**p + 1e-9
        else:
            misses += 1
    assert misses / trials <= 0.01
    far = 0
    for _ in range(300):
        q = rng.standard_normal(d) * 40
        truth = naive_min(pts.tolist(), q.tolist(), p)
        res = idx.query(q)
        if res.found:
            assert res.dist_pow <= r**p + 1e-9
        if truth >= (gamma * r) ** p:
            far += 1
            assert not res.found
    assert far > 0


def test_same_seed_same_answers():
    rng = np.random.default_rng(4)
    pts = rng.standard_normal((200, 6))
    Q = rng.standard_normal((100, 6))
    a = build_index(pts, 1.0, 1.5, 2, backend="lsh", seed=9)
    b = build_index(pts, 1.0, 1.5, 2, backend="lsh", seed=9)
    assert [r.found for r in a.query_many(Q)] == [r.found for r in b.query_many(Q)]
    assert [r.witness for r in a.query_many(Q)] == [b.query(q).witness for q in Q]

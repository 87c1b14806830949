"""Exactness tests for the Z/p^N elimination core, against brute force."""

import itertools
import random

import numpy as np
import pytest

from wittkit.linalg import SpanZpN, howell_rows, left_kernel, solve_combination

CASES = [(2, 2), (2, 3), (3, 2)]  # (p, N) with small moduli so brute force is feasible


def brute_row_span(rows, m):
    rows = [tuple(int(x) % m for x in r) for r in rows]
    if not rows:
        return {tuple()}
    n = len(rows[0])
    span = set()
    for coeffs in itertools.product(range(m), repeat=len(rows)):
        v = [0] * n
        for c, r in zip(coeffs, rows):
            for j in range(n):
                v[j] = (v[j] + c * r[j]) % m
        span.add(tuple(v))
    return span


def random_matrix(rng, rows, cols, m):
    return np.array(
        [[rng.randrange(m) for _ in range(cols)] for _ in range(rows)], dtype=np.int64
    )


@pytest.mark.parametrize("p,N", CASES)
def test_howell_preserves_row_span(p, N):
    m = p**N
    rng = random.Random(1000 * p + N)
    for _ in range(25):
        A = random_matrix(rng, rng.randrange(1, 4), rng.randrange(1, 5), m)
        H = howell_rows(A, p, N)
        assert brute_row_span(A, m) == brute_row_span(H, m)


@pytest.mark.parametrize("p,N", CASES)
def test_span_reduce_decides_membership(p, N):
    m = p**N
    rng = random.Random(2000 * p + N)
    for _ in range(15):
        A = random_matrix(rng, rng.randrange(1, 4), 4, m)
        span = SpanZpN(A, p, N)
        members = brute_row_span(A, m)
        for _ in range(20):
            v = np.array([rng.randrange(m) for _ in range(4)], dtype=np.int64)
            reduced = span.reduce(v)
            assert span.contains(v) == (tuple(int(x) for x in v) in members)
            if span.contains(v):
                assert not reduced.any()
            # the reduction is a span-equivalent representative either way
            assert (tuple(int(x) for x in (v - reduced) % m)) in members


@pytest.mark.parametrize("p,N", CASES)
def test_left_kernel_exact(p, N):
    m = p**N
    rng = random.Random(3000 * p + N)
    for _ in range(15):
        r, c = rng.randrange(1, 4), rng.randrange(1, 4)
        A = random_matrix(rng, r, c, m)
        K = left_kernel(A, p, N)
        for row in K:
            assert not ((row @ A) % m).any()
        brute = {
            y
            for y in itertools.product(range(m), repeat=r)
            if all(sum(y[i] * int(A[i][j]) for i in range(r)) % m == 0 for j in range(c))
        }
        assert brute_row_span(K, m) == brute if len(K) else brute == {tuple([0] * r)}


@pytest.mark.parametrize("p,N", CASES)
def test_solve_combination_sound_and_complete(p, N):
    m = p**N
    rng = random.Random(4000 * p + N)
    for _ in range(25):
        g, n = rng.randrange(1, 4), rng.randrange(1, 4)
        G = random_matrix(rng, g, n, m)
        target = np.array([rng.randrange(m) for _ in range(n)], dtype=np.int64)
        coeffs = solve_combination(G, target, p, N)
        in_span = tuple(int(x) for x in target) in brute_row_span(G, m)
        assert (coeffs is not None) == in_span
        if coeffs is not None:
            assert np.array_equal((coeffs @ G) % m, target % m)


def test_empty_and_zero_edge_cases():
    p, N = 3, 2
    m = p**N
    empty = np.zeros((0, 3), dtype=np.int64)
    assert howell_rows(empty, p, N).shape[0] == 0
    assert left_kernel(empty, p, N).shape == (0, 0)
    zero_target = np.zeros(3, dtype=np.int64)
    coeffs = solve_combination(empty, zero_target, p, N)
    assert coeffs is not None and coeffs.shape == (0,)
    assert solve_combination(empty, np.array([1, 0, 0]), p, N) is None
    span = SpanZpN(empty, p, N)
    assert not span.contains(np.array([1, 2, 3], dtype=np.int64))
    assert span.contains(zero_target)

"""Exact minimum-cost bipartite assignment.

The Hungarian algorithm with potentials, written against exact rationals.
scipy's linear_sum_assignment would go through floats and blur the exact
cost comparisons the mechanisms depend on, so we keep this in-house.
"""

from __future__ import annotations

from fractions import Fraction


def min_cost_assignment(cost: list) -> tuple:
    """Assign each row to a distinct column minimizing total cost.

    `cost` is an n x m matrix (list of rows) of Fractions with n <= m.
    Returns (columns, total) where columns[i] is the column of row i.
    """
    n = len(cost)
    if n == 0:
        return [], Fraction(0)
    m = len(cost[0])
    if n > m:
        raise ValueError("need at least as many columns as rows")
    big = sum((abs(c) for row in cost for c in row), Fraction(0)) + 1

    u = [Fraction(0)] * (n + 1)
    v = [Fraction(0)] * (m + 1)
    p = [0] * (m + 1)  # p[j]: row matched to column j, 1-based; 0 = free
    way = [0] * (m + 1)

    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [big] * (m + 1)
        used = [False] * (m + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = big
            j1 = 0
            for j in range(1, m + 1):
                if used[j]:
                    continue
                cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(m + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1

    columns = [0] * n
    for j in range(1, m + 1):
        if p[j]:
            columns[p[j] - 1] = j - 1
    total = sum((cost[i][columns[i]] for i in range(n)), Fraction(0))
    return columns, total

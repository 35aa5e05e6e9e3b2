"""Exact minimum-cost perfect matching on square cost matrices.

Shortest-augmenting-path solver with dual variables (the Jonker-Volgenant
family, without the heuristic initialization).  Costs must be finite and
nonnegative; a slack of EPS absorbs float32-derived rounding when validating
inputs and preferring unmatched columns among tied path lengths.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .store import DataError

EPS = 1e-12


@dataclass(frozen=True)
class Matching:
    """A perfect matching: perm[i] is the column assigned to row i."""

    perm: tuple[int, ...]
    total_cost: float


def _validated(cost) -> np.ndarray:
    c = np.asarray(cost, dtype=np.float64)
    if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] == 0:
        raise DataError("cost matrix must be square and non-empty")
    if not np.isfinite(c).all():
        raise DataError("cost matrix must be finite")
    if (c < -EPS).any():
        raise DataError("cost matrix must be nonnegative")
    return np.clip(c, 0.0, None)


def _total(c: np.ndarray, perm) -> float:
    return float(c[np.arange(c.shape[0]), list(perm)].sum())


def solve(cost) -> Matching:
    """Minimum-total-cost perfect matching (one column per row, one row per column)."""
    c = _validated(cost)
    n = c.shape[0]
    u = np.zeros(n)
    v = np.zeros(n)
    col4row = np.full(n, -1, dtype=np.int64)  # column matched to each row
    row4col = np.full(n, -1, dtype=np.int64)

    for cur_row in range(n):
        shortest = np.full(n, np.inf)
        path = np.full(n, -1, dtype=np.int64)
        on_row_tree = np.zeros(n, dtype=bool)
        on_col_tree = np.zeros(n, dtype=bool)
        min_val = 0.0
        i = cur_row
        sink = -1
        while sink == -1:
            on_row_tree[i] = True
            cols = np.flatnonzero(~on_col_tree)
            reduced = min_val + c[i, cols] - u[i] - v[cols]
            better = reduced < shortest[cols]
            shortest[cols[better]] = reduced[better]
            path[cols[better]] = i
            vals = shortest[cols]
            lowest = vals.min()
            if not np.isfinite(lowest):
                raise DataError("infeasible cost matrix")
            tied = cols[vals <= lowest + EPS]
            unmatched = tied[row4col[tied] == -1]
            j = int(unmatched[0]) if unmatched.size else int(tied[0])
            min_val = float(shortest[j])
            on_col_tree[j] = True
            if row4col[j] == -1:
                sink = j
            else:
                i = int(row4col[j])
        # dual update keeps reduced costs nonnegative on tree arcs
        u[cur_row] += min_val
        rows = np.flatnonzero(on_row_tree)
        rows = rows[rows != cur_row]
        u[rows] += min_val - shortest[col4row[rows]]
        cols = np.flatnonzero(on_col_tree)
        v[cols] -= min_val - shortest[cols]
        # augment along the alternating path back to cur_row
        j = sink
        while True:
            i = int(path[j])
            row4col[j] = i
            col4row[i], j = j, col4row[i]
            if i == cur_row:
                break

    perm = tuple(int(x) for x in col4row)
    return Matching(perm, _total(c, perm))


def brute_force(cost) -> Matching:
    """Exhaustive oracle over all k! permutations; ties go to the smallest perm."""
    c = _validated(cost)
    n = c.shape[0]
    if n > 9:
        raise DataError("brute_force limited to k <= 9")
    best_perm = None
    best_cost = np.inf
    for perm in itertools.permutations(range(n)):
        t = _total(c, perm)
        if t < best_cost:
            best_cost = t
            best_perm = perm
    return Matching(tuple(best_perm), best_cost)

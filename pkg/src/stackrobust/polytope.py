"""H-polytopes and a small dense LP solver.

The solver is a two-phase tableau simplex with Bland's smallest-index rule,
which cannot cycle.  Problems here have a handful of variables, so clarity
and determinism matter more than speed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import Infeasible, Unbounded

_PIVOT_TOL = 1e-11


@dataclass(frozen=True, eq=False)
class HPolytope:
    """The set ``{y : normals @ y <= offsets}``.

    ``labels`` records where each row came from (``"response:k"`` for an
    indifference row against response ``k``, ``"nonneg:i"`` and
    ``"simplex"`` for facets of the reduced simplex).
    """

    normals: np.ndarray
    offsets: np.ndarray
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        C = np.array(self.normals, dtype=float)
        d = np.array(self.offsets, dtype=float).ravel()
        if C.ndim == 1:
            C = C.reshape(-1, 1) if d.size != 1 else C.reshape(1, -1)
        if C.shape[0] != d.shape[0]:
            raise ValueError(f"{C.shape[0]} rows but {d.shape[0]} offsets")
        labels = tuple(self.labels) if self.labels else tuple(f"row:{i}" for i in range(len(d)))
        if len(labels) != len(d):
            raise ValueError("one label per row is required")
        C.setflags(write=False)
        d.setflags(write=False)
        object.__setattr__(self, "normals", C)
        object.__setattr__(self, "offsets", d)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    def __len__(self) -> int:
        return self.offsets.shape[0]

    def slacks(self, y) -> np.ndarray:
        return self.offsets - self.normals @ np.asarray(y, dtype=float)

    def contains(self, y, tol: float = 1e-9) -> bool:
        return bool((self.slacks(y) >= -tol * (1.0 + np.abs(self.offsets))).all())

    def intersect(self, other: HPolytope) -> HPolytope:
        return HPolytope(
            np.vstack([self.normals, other.normals]),
            np.concatenate([self.offsets, other.offsets]),
            self.labels + other.labels,
        )

    def subset(self, rows) -> HPolytope:
        rows = np.asarray(rows, dtype=int)
        return HPolytope(
            self.normals[rows].reshape(len(rows), self.dim),
            self.offsets[rows],
            tuple(self.labels[i] for i in rows),
        )

    def drop_vacuous(self, tol: float = 0.0) -> HPolytope:
        """Remove all-zero rows that every point satisfies.

        A zero row with a negative offset is kept: it makes the set empty.
        """
        zero = ~np.any(np.abs(self.normals) > tol, axis=1)
        keep = ~(zero & (self.offsets >= 0))
        if keep.all():
            return self
        return self.subset(np.flatnonzero(keep))


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    for i in range(T.shape[0]):
        if i != row and T[i, col] != 0.0:
            T[i] -= T[i, col] * T[row]


def _bland(T: np.ndarray, basis: list[int], cost: np.ndarray, max_iter: int) -> str:
    """Maximise ``cost @ z`` over the tableau in place."""
    for _ in range(max_iter):
        reduced = cost - cost[basis] @ T[:, :-1]
        entering = np.flatnonzero(reduced > 1e-10 * (1.0 + np.abs(cost).max()))
        if entering.size == 0:
            return "optimal"
        col = entering[0]
        column = T[:, col]
        ok = column > _PIVOT_TOL
        if not ok.any():
            return "unbounded"
        ratios = np.full(T.shape[0], np.inf)
        ratios[ok] = T[ok, -1] / column[ok]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + 1e-12 * (1.0 + abs(best)))
        row = min(ties, key=lambda i: basis[i])
        _pivot(T, row, col)
        basis[row] = col
    raise RuntimeError("simplex iteration limit reached")


def lp_solve(objective, polytope: HPolytope, max_iter: int = 10_000) -> tuple[np.ndarray, float]:
    """Maximise ``objective @ y`` subject to ``polytope``.

    Returns ``(y, value)``.  Raises :class:`Infeasible` for an empty
    polytope and :class:`Unbounded` when the objective grows without bound.
    """
    c = np.asarray(objective, dtype=float).ravel()
    C, d = polytope.normals, polytope.offsets
    rows, dim = C.shape
    if c.shape[0] != dim:
        raise ValueError(f"objective has {c.shape[0]} entries, polytope dimension is {dim}")
    if rows == 0:
        if np.any(c != 0):
            raise Unbounded("no constraints")
        return np.zeros(dim), 0.0

    # Free y = u - v; one slack per row; artificials for rows with d < 0.
    sign = np.where(d < 0, -1.0, 1.0)
    neg = np.flatnonzero(d < 0)
    n_core = 2 * dim + rows
    ncols = n_core + neg.size
    T = np.zeros((rows, ncols + 1))
    T[:, :dim] = C * sign[:, None]
    T[:, dim : 2 * dim] = -C * sign[:, None]
    T[:, 2 * dim : n_core] = np.diag(sign)
    T[neg, n_core + np.arange(neg.size)] = 1.0
    T[:, -1] = d * sign
    basis = [2 * dim + i for i in range(rows)]
    for k, i in enumerate(neg):
        basis[i] = n_core + k

    scale = 1.0 + np.abs(d).max() + np.abs(C).max()
    if neg.size:
        phase1 = np.zeros(ncols)
        phase1[n_core:] = -1.0
        _bland(T, basis, phase1, max_iter)
        if -phase1[basis] @ T[:, -1] > 1e-9 * scale:
            raise Infeasible("polytope is empty")
        # Drive zero-valued artificials out of the basis, drop redundant rows.
        keep = []
        for i in range(rows):
            if basis[i] >= n_core:
                cand = np.flatnonzero(np.abs(T[i, :n_core]) > _PIVOT_TOL)
                if cand.size == 0:
                    continue
                _pivot(T, i, cand[0])
                basis[i] = int(cand[0])
            keep.append(i)
        T = np.hstack([T[keep, :n_core], T[keep, -1:]])
        basis = [basis[i] for i in keep]

    cost = np.zeros(n_core)
    cost[:dim] = c
    cost[dim : 2 * dim] = -c
    if _bland(T, basis, cost, max_iter) == "unbounded":
        raise Unbounded("objective is unbounded over the polytope")

    z = np.zeros(n_core)
    z[basis] = T[:, -1]
    y = z[:dim] - z[dim : 2 * dim]
    return y, float(c @ y)


def chebyshev_center(polytope: HPolytope) -> tuple[np.ndarray, float]:
    """Centre and radius of the largest Euclidean ball inside the polytope."""
    norms = np.linalg.norm(polytope.normals, axis=1)
    lifted = HPolytope(
        np.vstack([np.hstack([polytope.normals, norms[:, None]]), np.append(np.zeros(polytope.dim), -1.0)]),
        np.append(polytope.offsets, 0.0),
    )
    obj = np.append(np.zeros(polytope.dim), 1.0)
    sol, radius = lp_solve(obj, lifted)
    return sol[:-1], radius

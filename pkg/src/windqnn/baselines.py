"""From-scratch classical regressors: k-nearest neighbors, CART, OLS.

All three consume min-max-scaled features (the same scaler the quantum
models use) and predict power in kW directly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np


class SingularMatrixError(ValueError):
    """Design matrix is rank deficient; the message names the offending column."""


# --- k-nearest neighbors -----------------------------------------------------

@dataclass(frozen=True)
class KnnModel:
    k: int
    features: np.ndarray
    targets: np.ndarray


def fit_knn(features: np.ndarray, targets: np.ndarray, k: int = 5) -> KnnModel:
    features = np.asarray(features, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if not 1 <= k <= targets.shape[0]:
        raise ValueError(f"k must be in [1, {targets.shape[0]}], got {k}")
    return KnnModel(k=k, features=features, targets=targets)


def predict_knn(model: KnnModel, queries: np.ndarray) -> np.ndarray:
    """Mean target of the k nearest training rows by Euclidean distance.

    Distance ties break toward the lower training-row index (stable sort).
    """
    queries = np.atleast_2d(np.asarray(queries, dtype=float))
    out = np.empty(queries.shape[0])
    # chunked so the (chunk, n_train, n_features) difference array stays small
    chunk = max(1, 10**6 // model.features.shape[0])
    for start in range(0, queries.shape[0], chunk):
        q = queries[start : start + chunk]
        d2 = ((q[:, None, :] - model.features[None, :, :]) ** 2).sum(axis=2)
        nearest = np.argsort(d2, axis=1, kind="stable")[:, : model.k]
        out[start : start + chunk] = model.targets[nearest].mean(axis=1)
    return out


# --- CART regression tree ----------------------------------------------------

@dataclass
class TreeNode:
    value: float
    feature: Optional[int] = None
    threshold: Optional[float] = None
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


@dataclass(frozen=True)
class CartModel:
    root: TreeNode
    n_features: int


def _best_split(features: np.ndarray, targets: np.ndarray):
    """Exhaustive scan over (feature, midpoint threshold) pairs by SSE.

    Prefix sums give each candidate's child SSEs in O(1); ties resolve to
    the lowest feature index, then the lowest threshold, by scan order.
    """
    n = targets.shape[0]
    best = None  # (sse, feature, threshold, sorted order, split position)
    for f in range(features.shape[1]):
        order = np.argsort(features[:, f], kind="stable")
        values = features[order, f]
        t = targets[order]
        s1 = np.cumsum(t)
        s2 = np.cumsum(t * t)
        total1, total2 = s1[-1], s2[-1]
        cut = np.nonzero(values[1:] > values[:-1])[0] + 1  # split before index i
        if cut.size == 0:
            continue
        left1, left2 = s1[cut - 1], s2[cut - 1]
        n_left = cut.astype(float)
        n_right = n - n_left
        sse = (left2 - left1**2 / n_left) + (
            (total2 - left2) - (total1 - left1) ** 2 / n_right
        )
        i = int(np.argmin(sse))  # first minimum = lowest threshold
        if best is None or sse[i] < best[0]:
            thr = 0.5 * (values[cut[i] - 1] + values[cut[i]])
            best = (float(sse[i]), f, thr, order, int(cut[i]))
    return best


def fit_cart(
    features: np.ndarray,
    targets: np.ndarray,
    max_depth: Optional[int] = None,
    min_samples_split: int = 2,
) -> CartModel:
    """Greedy variance-reduction tree; leaves predict their training mean."""
    features = np.asarray(features, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if targets.shape[0] == 0:
        raise ValueError("cannot fit a tree on an empty training set")
    if min_samples_split < 2:
        raise ValueError(f"min_samples_split must be >= 2, got {min_samples_split}")

    root = TreeNode(value=float(targets.mean()))
    stack: List[tuple] = [(root, np.arange(targets.shape[0]), 0)]
    while stack:
        node, idx, depth = stack.pop()
        t = targets[idx]
        node.value = float(t.mean())
        if idx.shape[0] < min_samples_split:
            continue
        if np.all(t == t[0]):
            continue
        if max_depth is not None and depth >= max_depth:
            continue
        found = _best_split(features[idx], t)
        if found is None:
            continue
        _, f, thr, order, pos = found
        node.feature = f
        node.threshold = thr
        node.left = TreeNode(value=0.0)
        node.right = TreeNode(value=0.0)
        stack.append((node.left, idx[order[:pos]], depth + 1))
        stack.append((node.right, idx[order[pos:]], depth + 1))
    return CartModel(root=root, n_features=features.shape[1])


def predict_cart(model: CartModel, queries: np.ndarray) -> np.ndarray:
    """Route each query to its leaf; prediction is the leaf's training mean."""
    queries = np.atleast_2d(np.asarray(queries, dtype=float))
    out = np.empty(queries.shape[0])
    stack = [(model.root, np.arange(queries.shape[0]))]
    while stack:
        node, idx = stack.pop()
        if idx.size == 0:
            continue
        if node.is_leaf:
            out[idx] = node.value
            continue
        goes_left = queries[idx, node.feature] <= node.threshold
        stack.append((node.left, idx[goes_left]))
        stack.append((node.right, idx[~goes_left]))
    return out


# --- ordinary least squares --------------------------------------------------

@dataclass(frozen=True)
class OlsModel:
    coefficients: np.ndarray
    intercept: float


def fit_ols(
    features: np.ndarray,
    targets: np.ndarray,
    column_names: Optional[List[str]] = None,
) -> OlsModel:
    """Least squares with intercept via SVD (never the raw normal equations)."""
    features = np.asarray(features, dtype=float)
    targets = np.asarray(targets, dtype=float)
    n, d = features.shape
    if n <= d:
        raise ValueError(f"need more samples than features, got {n} rows for {d} columns")
    names = column_names or [f"x{i}" for i in range(d)]
    design = np.column_stack([features, np.ones(n)])
    rank = np.linalg.matrix_rank(design)
    if rank < d + 1:
        # name the first column that fails to extend the rank
        seen = 0
        for j in range(d):
            new = np.linalg.matrix_rank(design[:, : j + 1])
            if new == seen:
                raise SingularMatrixError(
                    f"design matrix is rank deficient at column {names[j]!r}"
                )
            seen = new
        raise SingularMatrixError("design matrix is rank deficient at the intercept")
    solution = np.linalg.lstsq(design, targets, rcond=None)[0]
    return OlsModel(coefficients=solution[:-1], intercept=float(solution[-1]))


def predict_ols(model: OlsModel, queries: np.ndarray) -> np.ndarray:
    queries = np.atleast_2d(np.asarray(queries, dtype=float))
    return queries @ model.coefficients + model.intercept

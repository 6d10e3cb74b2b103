"""Raw linear systems A x = b and their exact constraint-state labels."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rank import numerical_rank
from .residuals import JacobianMatrix


@dataclass(frozen=True)
class LinearSystem:
    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.asarray(self.b, dtype=float).reshape(-1)
        if A.shape[0] != b.shape[0]:
            raise ValueError(f"A has {A.shape[0]} rows but b has {b.shape[0]} entries")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValueError("linear system has non-finite entries")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def shape(self):
        return self.A.shape

    def residual(self, x):
        return self.A @ np.asarray(x, dtype=float) - self.b

    def jacobian(self):
        """J = A, rows labelled E1..Em and columns x1..xn."""
        m, n = self.A.shape
        return JacobianMatrix(self.A.copy(), [(f"E{i + 1}", 0) for i in range(m)],
                              [(f"x{j + 1}", 0) for j in range(n)])


def classify_linear(system, tol=None):
    """Labels from the solution-set definitions, decided by exact rank tests.

    consistent      rank(A) == rank([A|b])
    Under           consistent and rank(A) < n (infinitely many solutions)
    ConsistentlyOver  consistent and rank(A) < m (a strict subset has the same solutions)
    Over            inconsistent, or consistently over-constrained
    Well            consistent, neither Under nor Over
    """
    A, b = system.A, system.b
    m, n = A.shape
    rA = numerical_rank(A, tol).rank
    rAb = numerical_rank(np.column_stack([A, b]), tol).rank
    consistent = rA == rAb
    labels = []
    if not consistent:
        labels += ["Inconsistent", "Over"]
    else:
        if rA < n:
            labels.append("Under")
        if rA < m:
            labels += ["ConsistentlyOver", "Over"]
        if not labels:
            labels.append("Well")
    return {"labels": labels, "consistent": consistent, "rank": rA, "augmented_rank": rAb,
            "rows": m, "columns": n}

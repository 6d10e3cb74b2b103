"""Witness configurations: checking them and sampling generic ones."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonConvergenceError
from .model import check_layout
from .residuals import jacobian, residual, rowmap

DEGENERATE_KINDS = frozenset({"VectorParallel", "PointOnPlane", "PointOnLine", "Coaxial", "UnitNorm"})


@dataclass(frozen=True)
class WitnessPolicy:
    degenerate_kinds: frozenset = field(default=DEGENERATE_KINDS)
    tol: float = 1e-8
    max_projection_iters: int = 50

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("witness tolerance must be positive")
        object.__setattr__(self, "degenerate_kinds", frozenset(self.degenerate_kinds))


def degenerate_rows(model, policy):
    kinds = {c.id: c.kind for c in model.constraints}
    return np.array([i for i, (cid, _) in enumerate(rowmap(model))
                     if kinds[cid] in policy.degenerate_kinds], dtype=int)


def is_witness(model, x, policy=None):
    """True iff every degenerate-kind row vanishes to ``policy.tol``.

    Returns ``(ok, violations)``; each violation is a dict with the row index,
    constraint id, equation index and residual value.
    """
    policy = policy or WitnessPolicy()
    check_layout(model, x)
    F = residual(model, x)
    violations = []
    for i in degenerate_rows(model, policy):
        if not abs(F.values[i]) < policy.tol:
            cid, k = F.rowmap[i]
            violations.append({"row": int(i), "constraint": cid, "equation": k,
                               "value": float(F.values[i])})
    return not violations, violations


def project_to_witness(model, x, policy=None):
    """Damped Gauss-Newton on the degenerate rows only (min-norm steps)."""
    policy = policy or WitnessPolicy()
    rows = degenerate_rows(model, policy)
    if rows.size == 0:
        return x
    X = x.values.copy()

    def res(X):
        return residual(model, x.with_values(X)).values[rows]

    # polish well past policy.tol: a degenerate row left at 1e-9 shows up
    # as a spurious singular value far above the rank tolerance
    target = min(policy.tol, 1e-15 * max(1.0, np.max(np.abs(X))))
    r = res(X)
    for _ in range(policy.max_projection_iters):
        if np.max(np.abs(r)) <= target:
            return x.with_values(X)
        J = jacobian(model, x.with_values(X)).entries[rows]
        step = np.linalg.lstsq(J, -r, rcond=None)[0]
        norm0 = np.linalg.norm(r)
        alpha = 1.0
        while alpha > 1e-6:
            trial = X + alpha * step
            rt = res(trial)
            if np.linalg.norm(rt) < norm0:
                break
            alpha *= 0.5
        else:
            break
        X, r = trial, rt
    if np.max(np.abs(r)) < policy.tol:
        return x.with_values(X)
    raise NonConvergenceError(
        f"witness projection did not converge in {policy.max_projection_iters} iterations "
        f"(max residual {np.max(np.abs(r)):.3e})")


def perturb_to_witness(model, x0, policy=None, seed=0):
    """Random perturbation in [-0.1, 0.1] per parameter, projected back so
    all degenerate constraints hold again. Deterministic for a given seed."""
    policy = policy or WitnessPolicy()
    check_layout(model, x0)
    rng = np.random.default_rng(seed)
    delta = rng.uniform(-0.1, 0.1, size=len(x0.values))
    return project_to_witness(model, x0.with_values(x0.values + delta), policy)

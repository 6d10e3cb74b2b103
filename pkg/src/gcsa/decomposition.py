"""Over-constrained and well-constrained part detection.

Greedy detectors (seeded scans) sit next to exhaustive oracles that realize
the same goals exactly at desk scale; comparing the two exposes the cases
where the seed choice makes the greedy scan miss the optimum.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations

import numpy as np

from ._kernels import submatrix_ranks
from .errors import ScaleError
from .model import Configuration, GcsModel, pack_parameters
from .rank import State, numerical_rank, rigid_generators, state_from_counts
from .residuals import JacobianMatrix, jacobian, scalar_equation_count

MAX_CIRCUIT_ROWS = 25
MAX_PART_ENTITIES = 12
_CHUNK = 65536


class GroupKind(str, Enum):
    FULL_BASIS = "FullBasis"
    SUPPORT = "Support"
    CIRCUIT = "Circuit"


@dataclass(frozen=True)
class DependencyGroup:
    rows: tuple
    kind: GroupKind
    labels: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(sorted(int(r) for r in self.rows)))

    def __len__(self):
        return len(self.rows)

    def to_list(self):
        return list(self.labels) if self.labels else list(self.rows)


@dataclass(frozen=True)
class WcPartition:
    parts: tuple
    leftover: tuple = field(default=())

    def to_dict(self):
        return {"parts": [list(p) for p in self.parts], "leftover": list(self.leftover)}

    @property
    def largest(self):
        return max((len(p) for p in self.parts), default=0)


def _matrix(J):
    return J.entries if isinstance(J, JacobianMatrix) else np.asarray(J, dtype=float)


def _labels(J, rows):
    if isinstance(J, JacobianMatrix):
        names = J.row_labels
        return tuple(names[r] for r in sorted(rows))
    return ()


def _global_tol(A, tol):
    if tol is not None:
        return tol
    return numerical_rank(A).tol_used


def _rank(A, rows, tol):
    if not rows:
        return 0
    s = np.linalg.svd(A[list(rows)], compute_uv=False)
    return int(np.sum(s > tol))


def _scan_order(m, seed_row, order):
    if order is None:
        return [(seed_row + k) % m for k in range(m)]
    return [seed_row] + [r for r in order if r != seed_row]


def greedy_max_independent(J, seed_row=0, order=None, tol=None):
    """Maximal independent row set grown from ``seed_row``.

    Rows are scanned in ``order`` (default: natural order wrapping around
    from the seed); a row is kept when it raises the rank of the set.
    """
    A = _matrix(J)
    m = A.shape[0]
    if not 0 <= seed_row < m:
        raise IndexError(f"seed row {seed_row} out of range for {m} rows")
    tol = _global_tol(A, tol)
    basis = []
    for r in _scan_order(m, seed_row, order):
        if _rank(A, basis + [r], tol) == len(basis) + 1:
            basis.append(r)
    return basis


def greedy_dependency_groups(J, seed_row=0, mode=GroupKind.FULL_BASIS, order=None, tol=None):
    """One dependency group per row left outside the greedy independent set.

    ``FullBasis`` pairs the row with the whole independent set; ``Support``
    keeps only the basis rows with a nonzero combination coefficient.
    """
    mode = GroupKind(mode)
    A = _matrix(J)
    tol = _global_tol(A, tol)
    basis = greedy_max_independent(A, seed_row, order, tol)
    groups = []
    for r in range(A.shape[0]):
        if r in basis:
            continue
        if mode is GroupKind.FULL_BASIS:
            rows = basis + [r]
        else:
            B = A[basis]
            coef = np.linalg.lstsq(B.T, A[r], rcond=None)[0]
            weight = np.abs(coef) * np.linalg.norm(B, axis=1)
            scale = max(np.linalg.norm(A[r]), np.max(weight, initial=0.0))
            rows = [b for b, w in zip(basis, weight) if w > 1e-8 * scale] + [r]
        groups.append(DependencyGroup(rows, mode, _labels(J, rows)))
    return groups


def is_circuit(A, rows, tol=None):
    """Dependent, with every proper subset independent."""
    A = _matrix(A)
    tol = _global_tol(A, tol)
    rows = list(rows)
    k = len(rows)
    if _rank(A, rows, tol) != k - 1:
        return False
    return all(_rank(A, rows[:i] + rows[i + 1:], tol) == k - 1 for i in range(k))


def exact_minimal_dependency_groups(J, max_size=None, tol=None, backend=None):
    """All circuits (minimal dependent row sets) with at most ``max_size`` rows.

    Subsets are enumerated by increasing size; supersets of circuits already
    found are skipped, so every remaining dependent subset is a circuit.
    """
    A = _matrix(J)
    m = A.shape[0]
    if m > MAX_CIRCUIT_ROWS:
        raise ScaleError(f"exact circuit enumeration limited to {MAX_CIRCUIT_ROWS} rows, got {m}")
    tol = _global_tol(A, tol)
    rank = _rank(A, list(range(m)), tol)
    limit = min(m, rank + 1) if max_size is None else min(m, max_size)
    found = []
    found_masks = []
    for k in range(1, limit + 1):
        batch = []
        for comb in combinations(range(m), k):
            mask = 0
            for r in comb:
                mask |= 1 << r
            if any(f & mask == f for f in found_masks):
                continue
            batch.append(comb)
            if len(batch) == _CHUNK:
                _collect(A, batch, k, tol, backend, found, found_masks)
                batch = []
        if batch:
            _collect(A, batch, k, tol, backend, found, found_masks)
    return [DependencyGroup(rows, GroupKind.CIRCUIT, _labels(J, rows)) for rows in found]


def _collect(A, batch, k, tol, backend, found, found_masks):
    masks = np.zeros((len(batch), A.shape[0]), dtype=bool)
    for i, comb in enumerate(batch):
        masks[i, list(comb)] = True
    ranks = submatrix_ranks(A, masks, abs_tol=tol, backend=backend)
    for comb, r in zip(batch, ranks):
        if r < k:
            found.append(comb)
            mask = 0
            for row in comb:
                mask |= 1 << row
            found_masks.append(mask)


def induced_subsystem(model, entities):
    """Sub-model on ``entities`` keeping every constraint that lies inside."""
    keep = set(entities)
    for eid in keep:
        model.entity(eid)  # raises LookupError for unknown ids
    ents = [e for e in model.entities if e.id in keep]
    cons = [c for c in model.constraints if all(r in keep for r in c.refs)]
    return GcsModel(ents, cons, model.scheme, model.collinearity)


def restrict_configuration(model, x, sub):
    """Restriction of ``x`` to the columns of sub-model ``sub``."""
    values = [x.block(e.id) for e in sub.entities]
    aux = [c.id for c in sub.aux_constraints()]
    values.append(np.array([x.values[x.aux_index(cid)] for cid in aux]))
    layout = {}
    off = 0
    for e in sub.entities:
        n = x.layout[e.id][1]
        layout[e.id] = (off, n)
        off += n
    return Configuration(np.concatenate(values), layout, tuple(aux))


class _PartEvaluator:
    """Classifies induced subsystems from blocks of the full J and of the
    rigid-generator matrix, so no sub-model needs to be rebuilt."""

    def __init__(self, model, x, tol=None, backend=None):
        self.model = model
        self.x = x if x is not None else pack_parameters(model)
        self.J = jacobian(model, self.x)
        self.R = rigid_generators(model, self.x).matrix
        self.tol = tol
        self.backend = backend
        self.ids = model.entity_ids
        n = len(self.x.values)
        self.entity_cols = {}
        for eid in self.ids:
            off, k = self.x.layout[eid]
            mask = np.zeros(n, dtype=bool)
            mask[off:off + k] = True
            self.entity_cols[eid] = mask
        self.cons = []
        row = 0
        for c in model.constraints:
            k = scalar_equation_count(c)
            rows = np.zeros(self.J.row_size, dtype=bool)
            rows[row:row + k] = True
            aux = np.zeros(n, dtype=bool)
            if c.id in self.x.aux:
                aux[self.x.aux_index(c.id)] = True
            implicit = c.kind == "Coaxial" or (c.kind == "VectorParallel"
                                               and model.collinearity == "cross")
            self.cons.append((set(c.refs), rows, aux, implicit))
            row += k

    def states(self, subsets):
        m, n = self.J.entries.shape
        B = len(subsets)
        rmask = np.zeros((B, m), dtype=bool)
        cmask = np.zeros((B, n), dtype=bool)
        implicit = np.zeros(B, dtype=int)
        for b, subset in enumerate(subsets):
            s = set(subset)
            for eid in s:
                cmask[b] |= self.entity_cols[eid]
            for refs, rows, aux, imp in self.cons:
                if refs <= s:
                    rmask[b] |= rows
                    cmask[b] |= aux
                    implicit[b] += imp
        ranks = submatrix_ranks(self.J.entries, rmask, cmask, self.tol, self.backend)
        dors = submatrix_ranks(self.R, cmask, None, self.tol, self.backend)
        n_aux = (cmask & self.J.aux_mask).sum(axis=1)
        return [state_from_counts(int(ranks[b]), int(rmask[b].sum()),
                                  int(cmask[b].sum() - n_aux[b]), int(dors[b]), int(implicit[b]))
                for b in range(B)]

    def is_well(self, subset):
        return self.states([subset])[0] is State.WELL


def greedy_wc_parts(model, x=None, seed_order=(), tol=None, backend=None):
    """Seeded greedy growth of well-constrained parts.

    Part k starts from ``seed_order[k]`` (falling back to the first remaining
    entity), then scans the remaining entities once in declaration order,
    adding each one that keeps the part well-constrained.
    """
    ev = _PartEvaluator(model, x, tol, backend)
    remaining = list(ev.ids)
    seeds = list(seed_order)
    for s in seeds:
        model.entity(s)
    parts, leftover = [], []
    while remaining:
        while seeds and seeds[0] not in remaining:
            seeds.pop(0)
        seed = seeds.pop(0) if seeds else remaining[0]
        part = [seed]
        for eid in remaining:
            if eid != seed and ev.is_well(part + [eid]):
                part.append(eid)
        if ev.is_well(part):
            parts.append(tuple(e for e in ev.ids if e in part))
        else:
            leftover.extend(part)
        remaining = [e for e in remaining if e not in part]
    return WcPartition(tuple(parts), tuple(e for e in ev.ids if e in leftover))


def exact_max_wc_parts(model, x=None, tol=None, backend=None):
    """Largest well-constrained subset first, repeated on what is left.

    Subsets of the remaining entities are tried in decreasing size (ties in
    lexicographic declaration order); the first well-constrained one is
    committed, which makes it maximal among the remaining entities.
    """
    if len(model.entities) > MAX_PART_ENTITIES:
        raise ScaleError(f"exact part search limited to {MAX_PART_ENTITIES} entities, "
                         f"got {len(model.entities)}")
    ev = _PartEvaluator(model, x, tol, backend)
    remaining = list(ev.ids)
    parts = []
    while remaining:
        chosen = None
        for k in range(len(remaining), 0, -1):
            subsets = list(combinations(remaining, k))
            states = ev.states(subsets)
            hit = next((s for s, st in zip(subsets, states) if st is State.WELL), None)
            if hit is not None:
                chosen = hit
                break
        if chosen is None:
            break
        parts.append(tuple(chosen))
        remaining = [e for e in remaining if e not in chosen]
    return WcPartition(tuple(parts), tuple(remaining))


def is_maximal_part(model, x, part, pool=None, tol=None):
    """No well-constrained strict superset of ``part`` inside ``pool``."""
    ev = _PartEvaluator(model, x, tol)
    pool = list(pool if pool is not None else ev.ids)
    extra = [e for e in pool if e not in part]
    supersets = [tuple(part) + c for k in range(1, len(extra) + 1) for c in combinations(extra, k)]
    if not supersets:
        return True
    return not any(st is State.WELL for st in ev.states(supersets))

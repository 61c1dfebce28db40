"""Sparse exact linear algebra over the rationals.

Vectors are dicts mapping an arbitrary hashable row key to a nonzero
Fraction.  The central object is an incremental echelon solver: columns
are fed one at a time, each is reduced against the pivots recorded so
far, and a new pivot is kept when a nonzero entry survives.  Solving
expresses a target as a combination of previously added columns.
"""

from __future__ import annotations

from fractions import Fraction

_ZERO = Fraction(0)

Vec = dict


def vec_add(u: Vec, v: Vec, c: Fraction) -> Vec:
    """u + c*v, dropping zeros."""
    if not c:
        return dict(u)
    out = dict(u)
    for k, x in v.items():
        s = out.get(k, _ZERO) + c * x
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vec_scale(u: Vec, c: Fraction) -> Vec:
    if not c:
        return {}
    return {k: c * x for k, x in u.items()}


class LinSolver:
    """Incremental exact echelon form.

    Each added column is stored (after reduction) together with the
    expression of the reduced column in terms of the original ones, so
    membership questions come with explicit coefficients.
    """

    def __init__(self):
        # pivot row key -> (reduced vector with that pivot = 1, expression)
        self.pivots: dict = {}
        self.n_cols = 0

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce(self, vec: Vec) -> tuple[Vec, Vec]:
        """Reduce vec against current pivots; return (residual, combo)
        where vec = residual + sum combo[j] * column_j."""
        combo: Vec = {}
        cur = dict(vec)
        while True:
            hit = None
            for key in cur:
                if key in self.pivots:
                    hit = key
                    break
            if hit is None:
                return cur, combo
            c = cur[hit]
            pvec, pexpr = self.pivots[hit]
            cur = vec_add(cur, pvec, -c)
            combo = vec_add(combo, pexpr, c)

    def add_column(self, vec: Vec) -> bool:
        """Feed one column; return True if it increased the rank."""
        idx = self.n_cols
        self.n_cols += 1
        residual, combo = self._reduce(vec)
        if not residual:
            return False
        pivot_key = min(residual, key=lambda k: (str(type(k)), str(k)))
        inv = Fraction(1) / residual[pivot_key]
        pvec = vec_scale(residual, inv)
        pexpr = vec_scale(combo, -inv)
        pexpr[idx] = pexpr.get(idx, _ZERO) + inv
        if not pexpr[idx]:
            del pexpr[idx]
        self.pivots[pivot_key] = (pvec, pexpr)
        return True

    def solve(self, target: Vec) -> Vec | None:
        """Coefficients over the added columns reproducing target, or None."""
        residual, combo = self._reduce(target)
        if residual:
            return None
        return combo

    def contains(self, target: Vec) -> bool:
        residual, _combo = self._reduce(target)
        return not residual

    def residual(self, target: Vec) -> Vec:
        """target minus its projection onto the span of the added columns."""
        residual, _combo = self._reduce(target)
        return residual


def rank_of(columns) -> int:
    solver = LinSolver()
    for col in columns:
        solver.add_column(col)
    return solver.rank


def nullspace_dim(columns) -> int:
    """Number of columns minus rank."""
    solver = LinSolver()
    n = 0
    for col in columns:
        n += 1
        solver.add_column(col)
    return n - solver.rank


def kernel_dim_of_operator(apply_op, basis_keys) -> int:
    """dim ker of a linear map given by apply_op: key -> Vec over basis_keys."""
    solver = LinSolver()
    n = 0
    for key in basis_keys:
        n += 1
        solver.add_column(apply_op(key))
    return n - solver.rank


def image_contains(columns, targets) -> bool:
    """Do the targets all lie in the span of the columns?"""
    solver = LinSolver()
    for col in columns:
        solver.add_column(col)
    return all(solver.contains(t) for t in targets)


def kernel_basis(columns) -> list[Vec]:
    """Basis of the kernel of the matrix with the given columns, as
    coefficient vectors over 0-based column indices.  Each dependent
    column contributes the relation e_idx - (combination reproducing it)."""
    solver = LinSolver()
    out = []
    for idx, col in enumerate(columns):
        if solver.add_column(col):
            continue
        combo = solver.solve(col)
        rel: Vec = {idx: Fraction(1)}
        for j, c in (combo or {}).items():
            s = rel.get(j, _ZERO) - c
            if s:
                rel[j] = s
            else:
                rel.pop(j, None)
        out.append(rel)
    return out

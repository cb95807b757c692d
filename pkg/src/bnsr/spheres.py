"""Exact set algebra on character spheres.

Subsets of the sphere of nonzero-character classes are represented as
finite unions of relatively open rational polyhedral cones ("cells"): each
cell is a list of homogeneous integer linear forms with relation = or >,
the origin being excluded implicitly.  All decisions (nonemptiness, set
equality, inclusion) are exact: strict feasibility goes through rational
Fourier-Motzkin elimination with witness reconstruction, and set equality
refines both operands over the common hyperplane arrangement and compares
cell membership at interior witness points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from .groups import Direction, Group

Form = tuple[int, ...]


def _normalize_form(vec: Sequence) -> Form:
    fracs = [Fraction(v) for v in vec]
    if all(f == 0 for f in fracs):
        raise ValueError("zero linear form")
    denom = 1
    for f in fracs:
        denom = denom * f.denominator // gcd(denom, f.denominator)
    ints = [int(f * denom) for f in fracs]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    return tuple(v // g for v in ints)


def _hyperplane_form(form: Form) -> Form:
    """Sign-canonical representative of {f = 0}: first nonzero entry positive."""
    for v in form:
        if v != 0:
            return form if v > 0 else tuple(-x for x in form)
    raise ValueError("zero linear form")


def _neg(form: Form) -> Form:
    return tuple(-x for x in form)


def _dot(form: Form, point) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(form, point)), Fraction(0))


@dataclass(frozen=True)
class Cell:
    """Relatively open cone {f = 0 for eqs, f > 0 for gts} minus the origin."""

    eqs: tuple[Form, ...]
    gts: tuple[Form, ...]

    def contains(self, point) -> bool:
        return all(_dot(f, point) == 0 for f in self.eqs) and all(
            _dot(f, point) > 0 for f in self.gts
        )


def make_cell(eqs: Iterable, gts: Iterable) -> Cell:
    e = tuple(sorted({_hyperplane_form(_normalize_form(f)) for f in eqs}))
    g = tuple(sorted({_normalize_form(f) for f in gts}))
    return Cell(e, g)


# ---------------------------------------------------------------------------
# strict feasibility by exact elimination


def _rref(rows: list[list[Fraction]], width: int):
    """Reduced row echelon form; returns (rows, pivot column list)."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(width):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def _kernel_basis(eqs: Sequence[Form], dim: int) -> list[tuple[Fraction, ...]]:
    rows = [[Fraction(v) for v in f] for f in eqs]
    red, pivots = _rref(rows, dim)
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * dim
        vec[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            vec[pc] = -row[fc]
        basis.append(tuple(vec))
    return basis


def _fm_witness(constraints: list[Form], nvars: int):
    """A rational point with f . y > 0 for all homogeneous f, or None."""
    levels = []
    current = [tuple(c) for c in constraints]
    for var in reversed(range(nvars)):
        lowers, uppers, passthrough = [], [], []
        for c in current:
            cv = c[var]
            if cv > 0:
                lowers.append(c)
            elif cv < 0:
                uppers.append(c)
            else:
                passthrough.append(c)
        derived = set(passthrough)
        for lo in lowers:
            for up in uppers:
                combo = tuple(lo[var] * up[i] - up[var] * lo[i] for i in range(var))
                if all(x == 0 for x in combo):
                    return None
                g = 0
                for x in combo:
                    g = gcd(g, abs(x))
                derived.add(tuple(x // g for x in combo))
        levels.append((var, lowers, uppers))
        current = [c[:var] for c in derived]
        for c in current:
            if all(x == 0 for x in c):
                return None
    point = [Fraction(0)] * nvars
    for var, lowers, uppers in reversed(levels):
        lo_vals = []
        for c in lowers:
            rest = sum((Fraction(c[i]) * point[i] for i in range(var)), Fraction(0))
            lo_vals.append(-rest / c[var])
        hi_vals = []
        for c in uppers:
            rest = sum((Fraction(c[i]) * point[i] for i in range(var)), Fraction(0))
            hi_vals.append(rest / -c[var])
        lo = max(lo_vals) if lo_vals else None
        hi = min(hi_vals) if hi_vals else None
        if lo is not None and hi is not None:
            point[var] = (lo + hi) / 2
        elif lo is not None:
            point[var] = lo + 1
        elif hi is not None:
            point[var] = hi - 1
        else:
            point[var] = Fraction(0)
    return tuple(point)


def _primitive_point(point: Sequence[Fraction]) -> tuple[int, ...]:
    denom = 1
    for f in point:
        denom = denom * f.denominator // gcd(denom, f.denominator)
    ints = [int(f * denom) for f in point]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    return tuple(v // g for v in ints)


@lru_cache(maxsize=1 << 15)
def _feasible_cached(dim: int, eqs: tuple[Form, ...], gts: tuple[Form, ...]):
    kernel = _kernel_basis(eqs, dim) if eqs else None
    if eqs:
        if not kernel:
            return None
        if not gts:
            return _primitive_point(kernel[0])
        projected = []
        for f in gts:
            row = tuple(_dot(f, vec) for vec in kernel)
            if all(x == 0 for x in row):
                return None
            projected.append(_normalize_form(row))
        y = _fm_witness(projected, len(kernel))
        if y is None:
            return None
        point = [sum((vec[i] * yi for vec, yi in zip(kernel, y)), Fraction(0)) for i in range(dim)]
        return _primitive_point(point)
    if not gts:
        if dim == 0:
            return None
        return tuple(1 if i == 0 else 0 for i in range(dim))
    y = _fm_witness(list(gts), dim)
    return None if y is None else _primitive_point(y)


def cell_witness(dim: int, cell: Cell):
    """An exact interior point of the cell, or None if the cell is empty."""
    return _feasible_cached(dim, cell.eqs, cell.gts)


# ---------------------------------------------------------------------------
# cone sets


@dataclass(frozen=True)
class ConeSet:
    """Finite union of relatively open cone cells in R^dim minus the origin.

    Structural equality (==) compares cell lists; use :func:`equals` for set
    equality.
    """

    dim: int
    cells: tuple[Cell, ...]

    @property
    def is_empty_presentation(self) -> bool:
        return not self.cells


def cone_set(dim: int, cells: Iterable[Cell], validate: bool = True) -> ConeSet:
    out = []
    seen = set()
    for cell in cells:
        for f in cell.eqs + cell.gts:
            if len(f) != dim:
                raise ValueError(f"form {f} does not have dimension {dim}")
        if cell in seen:
            continue
        if validate and cell_witness(dim, cell) is None:
            continue
        seen.add(cell)
        out.append(cell)
    return ConeSet(dim, tuple(out))


def empty_set(dim: int) -> ConeSet:
    return ConeSet(dim, ())


def full_sphere(group: Group) -> ConeSet:
    """The whole character sphere, as 2*dim lexicographic half-subspace cells.

    A trivial character space (dimension 0) yields the empty set.
    """
    return full_sphere_dim(group.char_dim)


def full_sphere_dim(dim: int) -> ConeSet:
    if dim == 0:
        return empty_set(0)
    cells = []
    for i in range(dim):
        eqs = [tuple(1 if j == k else 0 for j in range(dim)) for k in range(i)]
        axis = tuple(1 if j == i else 0 for j in range(dim))
        cells.append(make_cell(eqs, [axis]))
        cells.append(make_cell(eqs, [_neg(axis)]))
    return ConeSet(dim, tuple(cells))


def _as_point(u) -> tuple:
    if isinstance(u, Direction):
        return u.vector
    return tuple(u)


def member(A: ConeSet, u) -> bool:
    point = _as_point(u)
    if len(point) != A.dim:
        raise ValueError(f"direction has dimension {len(point)}, set has {A.dim}")
    if all(x == 0 for x in point):
        raise ValueError("the origin is not a sphere point")
    return any(cell.contains(point) for cell in A.cells)


def _check_same_dim(A: ConeSet, B: ConeSet):
    if A.dim != B.dim:
        raise ValueError(f"ambient mismatch: {A.dim} vs {B.dim}")


def union(A: ConeSet, B: ConeSet) -> ConeSet:
    _check_same_dim(A, B)
    return cone_set(A.dim, A.cells + B.cells, validate=False)


def intersect(A: ConeSet, B: ConeSet) -> ConeSet:
    _check_same_dim(A, B)
    cells = []
    for a in A.cells:
        for b in B.cells:
            cells.append(make_cell(a.eqs + b.eqs, a.gts + b.gts))
    return cone_set(A.dim, cells, validate=True)


def _forms_of(sets: Iterable[ConeSet]) -> tuple[Form, ...]:
    forms = set()
    for s in sets:
        for cell in s.cells:
            for f in cell.eqs:
                forms.add(_hyperplane_form(f))
            for f in cell.gts:
                forms.add(_hyperplane_form(f))
    return tuple(sorted(forms))


def arrangement_cells(dim: int, forms: Sequence[Form]):
    """All nonempty sign cells of the hyperplane arrangement, with witnesses.

    Cells are built incrementally, one hyperplane at a time; the side
    containing the previous witness is free, the other two sides cost one
    exact feasibility decision each.
    """
    if dim == 0:
        return []
    base = Cell((), ())
    cells = [(base, cell_witness(dim, base))]
    for h in forms:
        nxt = []
        for cell, w in cells:
            s = _dot(h, w)
            zero_cell = make_cell(cell.eqs + (h,), cell.gts)
            plus_cell = make_cell(cell.eqs, cell.gts + (h,))
            minus_cell = make_cell(cell.eqs, cell.gts + (_neg(h),))
            for cand, has_w in ((zero_cell, s == 0), (plus_cell, s > 0), (minus_cell, s < 0)):
                if has_w:
                    nxt.append((cand, w))
                else:
                    w2 = cell_witness(dim, cand)
                    if w2 is not None:
                        nxt.append((cand, w2))
        cells = nxt
    return cells


def _contains_point(A: ConeSet, point) -> bool:
    return any(cell.contains(point) for cell in A.cells)


def complement(A: ConeSet) -> ConeSet:
    """Complement within the sphere, refined over A's own arrangement."""
    cells = [
        cell
        for cell, w in arrangement_cells(A.dim, _forms_of([A]))
        if not _contains_point(A, w)
    ]
    return ConeSet(A.dim, tuple(cells))


def subset(A: ConeSet, B: ConeSet) -> bool:
    _check_same_dim(A, B)
    for cell, w in arrangement_cells(A.dim, _forms_of([A, B])):
        if _contains_point(A, w) and not _contains_point(B, w):
            return False
    return True


def equals(A: ConeSet, B: ConeSet) -> bool:
    _check_same_dim(A, B)
    for cell, w in arrangement_cells(A.dim, _forms_of([A, B])):
        if _contains_point(A, w) != _contains_point(B, w):
            return False
    return True


def difference(A: ConeSet, B: ConeSet) -> ConeSet:
    _check_same_dim(A, B)
    cells = [
        cell
        for cell, w in arrangement_cells(A.dim, _forms_of([A, B]))
        if _contains_point(A, w) and not _contains_point(B, w)
    ]
    return ConeSet(A.dim, tuple(cells))


# ---------------------------------------------------------------------------
# embeddings and joins


def _pad_form(f: Form, offset: int, total: int) -> Form:
    out = [0] * total
    out[offset : offset + len(f)] = list(f)
    return tuple(out)


def _embed_cells(A: ConeSet, offset: int, total: int):
    other = [i for i in range(total) if not (offset <= i < offset + A.dim)]
    zero_eqs = [tuple(1 if j == i else 0 for j in range(total)) for i in other]
    for cell in A.cells:
        yield make_cell(
            [_pad_form(f, offset, total) for f in cell.eqs] + zero_eqs,
            [_pad_form(f, offset, total) for f in cell.gts],
        )


def embed(A: ConeSet, side: str, left: Group, right: Group) -> ConeSet:
    """Embed a factor-sphere subset into the product sphere (other block = 0)."""
    dl, dr = left.char_dim, right.char_dim
    total = dl + dr
    if side == "left":
        if A.dim != dl:
            raise ValueError(f"left factor has dimension {dl}, set has {A.dim}")
        offset = 0
    elif side == "right":
        if A.dim != dr:
            raise ValueError(f"right factor has dimension {dr}, set has {A.dim}")
        offset = dl
    else:
        raise ValueError("side must be 'left' or 'right'")
    return ConeSet(total, tuple(_embed_cells(A, offset, total)))


def join(P: ConeSet, Q: ConeSet) -> ConeSet:
    """Join inside the product sphere: sum-classes plus both embedded sets.

    The sum-class part is the set of nonzero (x, y) with x in some cell of P
    and y in some cell of Q; since relatively open cone cells exclude the
    origin of their own factor, plain cell products describe it exactly, and
    the points with one vanishing half land in the embedded copies.
    """
    total = P.dim + Q.dim
    cells = []
    for p in P.cells:
        for q in Q.cells:
            cells.append(
                Cell(
                    tuple(sorted({_pad_form(f, 0, total) for f in p.eqs} | {_pad_form(f, P.dim, total) for f in q.eqs})),
                    tuple(sorted({_pad_form(f, 0, total) for f in p.gts} | {_pad_form(f, P.dim, total) for f in q.gts})),
                )
            )
    cells.extend(_embed_cells(P, 0, total))
    cells.extend(_embed_cells(Q, P.dim, total))
    return cone_set(total, cells, validate=False)


@dataclass
class SigmaFormulaInput:
    """Labeled complements for both factors in all degrees 0..n."""

    g_complements: dict[int, ConeSet]
    h_complements: dict[int, ConeSet]

    def validate(self, n: int):
        for p in range(n + 1):
            if p not in self.g_complements or p not in self.h_complements:
                raise ValueError(f"missing complement in degree {p}")
        gdims = {s.dim for s in self.g_complements.values()}
        hdims = {s.dim for s in self.h_complements.values()}
        if len(gdims) != 1 or len(hdims) != 1:
            raise ValueError("inconsistent ambient dimensions")
        return next(iter(gdims)), next(iter(hdims))


def product_formula_rhs(inputs: SigmaFormulaInput, n: int) -> ConeSet:
    """Union over p of join(left complement in degree p, right in degree n-p)."""
    dl, dr = inputs.validate(n)
    out = empty_set(dl + dr)
    for p in range(n + 1):
        out = union(out, join(inputs.g_complements[p], inputs.h_complements[n - p]))
    return out


def meinert_check(lhs_complement: ConeSet, rhs: ConeSet) -> bool:
    """The inclusion direction that always holds: lhs complement inside rhs."""
    return subset(lhs_complement, rhs)


def homotopical_combine(
    sigma_gh_z: ConeSet, sigma_g: ConeSet, sigma_h: ConeSet, left: Group, right: Group
) -> ConeSet:
    """Homotopical set from homological data over the product:
    (sigma_gh_z minus both embedded factor spheres) union both embedded
    homotopical factor sets."""
    emb_sg = embed(full_sphere(left), "left", left, right)
    emb_sh = embed(full_sphere(right), "right", left, right)
    core = difference(sigma_gh_z, union(emb_sg, emb_sh))
    return union(core, union(embed(sigma_g, "left", left, right), embed(sigma_h, "right", left, right)))


# ---------------------------------------------------------------------------
# serialization


def cone_set_to_obj(A: ConeSet) -> dict:
    return {
        "dim": A.dim,
        "cells": [
            {"eq": [[str(v) for v in f] for f in cell.eqs], "gt": [[str(v) for v in f] for f in cell.gts]}
            for cell in A.cells
        ],
    }


def cone_set_from_obj(data: dict) -> ConeSet:
    dim = int(data["dim"])
    cells = []
    for item in data.get("cells", []):
        cells.append(
            make_cell(
                [[Fraction(v) for v in f] for f in item.get("eq", [])],
                [[Fraction(v) for v in f] for f in item.get("gt", [])],
            )
        )
    return cone_set(dim, cells, validate=True)

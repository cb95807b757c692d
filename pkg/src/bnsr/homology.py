"""Finite-window truncations of valuation filtrations and their homology.

Infinite group-ring complexes are probed through explicit finite windows: a
per-factor radius with a per-degree margin so that boundaries stay inside.
On the windows everything is exact: rank computations over fields, Smith
normal form over the integers, threshold searches for extremal filling
values, and grid probes for the controlled-acyclicity condition.  Negative
verdicts are window evidence (a larger window can only reveal more
fillings), which is what the reports record.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .groups import Group
from .linalg import smith_normal_form  # re-exported
from .resolutions import BasisCell, Chain, Resolution
from .rings import CoefficientRing, INTEGERS
from .valuations import INF, Valuation

NEG_INF = float("-inf")


# ---------------------------------------------------------------------------
# windows


@dataclass(frozen=True)
class Window:
    """Per-factor radius; basis elements are clipped so boundaries stay inside.

    A translated cell g*x is admitted when the whole boundary itinerary of x
    (its footprint of translations, computed recursively from the boundary
    table) stays inside the per-factor balls.  Degree-0 windows are the full
    balls, and the admitted set in each degree is closed under taking
    boundaries, so every truncation is a subcomplex and the untruncated
    window complex is the contractible ball complex.
    """

    radii: tuple[int, ...]

    def ball_arg(self, group: Group):
        factors = group.factors()
        if len(factors) != len(self.radii):
            raise ValueError(
                f"window has {len(self.radii)} factor radii, group has {len(factors)}"
            )
        return self.radii if len(self.radii) > 1 else self.radii[0]

    def fits(self, group: Group, g) -> bool:
        parts = group.element_parts(g)
        return all(
            f.distance(part) <= r for f, part, r in zip(group.factors(), parts, self.radii)
        )


def window_for(F: Resolution, radius) -> Window:
    nfac = len(F.group.factors())
    radii = (radius,) * nfac if isinstance(radius, int) else tuple(radius)
    if len(radii) != nfac:
        raise ValueError("need one radius per group factor")
    return Window(radii)


def cell_footprint(F: Resolution, cell: BasisCell) -> tuple:
    """Translations reachable from a cell through iterated boundaries."""
    memo = getattr(F, "_footprints", None)
    if memo is None:
        memo = {}
        F._footprints = memo
    got = memo.get(cell)
    if got is not None:
        return got
    if cell.degree == 0:
        fp = (F.group.identity(),)
    else:
        acc = {F.group.identity()}
        for (h, y), _ in F.boundary_table[cell].items():
            for p in cell_footprint(F, y):
                acc.add(F.group.multiply(h, p))
        fp = tuple(sorted(acc))
    memo[cell] = fp
    return fp


def window_admits(F: Resolution, W: Window, g, cell: BasisCell) -> bool:
    mul = F.group.multiply
    return all(W.fits(F.group, mul(g, p)) for p in cell_footprint(F, cell))


def window_cell_elements(F: Resolution, W: Window, cell: BasisCell):
    for g in F.group.ball(W.ball_arg(F.group)):
        if window_admits(F, W, g, cell):
            yield g


def window_chain_supported(F: Resolution, W: Window, chain: Chain) -> bool:
    return all(window_admits(F, W, g, cell) for (g, cell) in chain.terms)


# ---------------------------------------------------------------------------
# finite complexes


class FiniteComplex:
    """Chain complex with ordered basis per degree and sparse exact columns.

    ``columns[d][j]`` maps a row index into ``basis[d-1]`` to a coefficient;
    the augmented variant has a single slot in degree -1 fed by the
    augmentation row.
    """

    def __init__(self, ring: CoefficientRing, basis: dict, columns: dict, augmented: bool = False):
        self.ring = ring
        self.basis = basis
        self.columns = columns
        self.augmented = augmented
        self.index = {d: {key: i for i, key in enumerate(b)} for d, b in basis.items()}

    def degrees(self):
        return sorted(self.basis)

    def dim(self, d: int) -> int:
        return len(self.basis.get(d, ()))

    def column_items(self, d: int):
        return list(enumerate(self.columns.get(d, ())))

    def boundary_rank(self, d: int) -> int:
        cols = self.columns.get(d)
        if not cols:
            return 0
        return linalg.rank_columns(list(enumerate(cols)), self.ring)

    def compose_is_zero(self) -> bool:
        ring = self.ring
        for d, cols in self.columns.items():
            lower = self.columns.get(d - 1)
            if lower is None:
                continue
            for col in cols:
                acc: dict = {}
                for i, c in col.items():
                    for i2, c2 in lower[i].items():
                        s = ring.add(acc.get(i2, ring.zero()), ring.mul(c, c2))
                        if ring.is_zero(s):
                            acc.pop(i2, None)
                        else:
                            acc[i2] = s
                if acc:
                    return False
        return True

    def chain_vector(self, chain: Chain, degree: int) -> dict:
        """Sparse row-index vector of a chain inside this complex."""
        idx = self.index.get(degree, {})
        out = {}
        for key, c in chain.items():
            i = idx.get(key)
            if i is None:
                raise ValueError(f"chain term {key} is outside the complex window")
            out[i] = c
        return out


def truncate(
    F: Resolution,
    v: Valuation,
    t,
    W: Window,
    augmented: bool = False,
    degrees: Sequence[int] | None = None,
) -> FiniteComplex:
    """Window complex of the elements with value at least t.

    ``t`` may be -inf for the plain window complex.  Basic valuations make
    the result a subcomplex; a boundary term falling below the threshold or
    outside the window is reported as an error.
    """
    degs = sorted(set(degrees if degrees is not None else F.degrees()))
    basis: dict = {}
    for d in degs:
        items = []
        for cell in F.cells(d):
            for g in window_cell_elements(F, W, cell):
                if v.of_key(g, cell) >= t:
                    items.append((g, cell))
        items.sort(key=lambda key: (key[1], key[0]))
        basis[d] = items
    columns: dict = {}
    mul = F.group.multiply
    ring = F.ring
    for d in degs:
        if d - 1 not in basis:
            continue
        idx = {key: i for i, key in enumerate(basis[d - 1])}
        cols = []
        for (g, cell) in basis[d]:
            col: dict = {}
            for (h, cell2), c in F.boundary_table[cell].items():
                key = (mul(g, h), cell2)
                i = idx.get(key)
                if i is None:
                    raise ValueError(
                        f"boundary term {key} escapes the window/threshold; "
                        "window is not boundary-closed for this valuation"
                    )
                col[i] = ring.add(col.get(i, ring.zero()), c)
            cols.append({i: c for i, c in col.items() if not ring.is_zero(c)})
        columns[d] = cols
    if augmented:
        basis[-1] = [("aug",)]
        if 0 in basis:
            columns[0] = [{0: F.augmentation_table[cell]} for (_, cell) in basis[0]]
    return FiniteComplex(ring, basis, columns, augmented=augmented)


# ---------------------------------------------------------------------------
# homology dimensions, integer invariants


def homology_dims(C: FiniteComplex) -> list[int]:
    """Per-degree homology dimensions over a field, degrees 0..top."""
    if not C.ring.is_field:
        raise ValueError("homology_dims needs field coefficients; use the Smith normal form path over Z")
    out = []
    for p in C.degrees():
        if p < 0:
            continue
        n = C.dim(p)
        r_out = C.boundary_rank(p)
        r_in = C.boundary_rank(p + 1)
        out.append(n - r_out - r_in)
    return out


def dense_boundary(C: FiniteComplex, d: int) -> list[list]:
    rows = C.dim(d - 1)
    cols = C.columns.get(d, [])
    M = [[0] * len(cols) for _ in range(rows)]
    for j, col in enumerate(cols):
        for i, c in col.items():
            M[i][j] = c
    return M


def class_order(z: Chain, C: FiniteComplex):
    """Order of the homology class of a cycle in an integer window complex.

    Returns ("zero", 1), ("torsion", k) or ("infinite", 0).
    """
    if C.ring != INTEGERS:
        raise ValueError("class_order works over integer coefficients")
    if z.is_zero:
        return ("zero", 1)
    p = z.degree
    vec = C.chain_vector(z, p)
    cols_p = C.columns.get(p)
    if cols_p is not None:
        acc: dict = {}
        for i, c in vec.items():
            for i2, c2 in cols_p[i].items():
                acc[i2] = acc.get(i2, 0) + c * c2
        if any(val != 0 for val in acc.values()):
            raise ValueError("chain is not a cycle in the window complex")
    dense = dense_boundary(C, p + 1)
    zvec = [0] * C.dim(p)
    for i, c in vec.items():
        zvec[i] = c
    if not dense or not dense[0]:
        return ("zero", 1) if all(x == 0 for x in zvec) else ("infinite", 0)
    return linalg.class_order(dense, zvec)


# ---------------------------------------------------------------------------
# zero-map tests and the controlled-acyclicity probe


def _cycles_of(C: FiniteComplex, p: int):
    """Cycle-space basis at degree p, as sparse vectors over basis[p] keys."""
    ncells = C.dim(p)
    cols = C.columns.get(p)
    if cols is None:
        combos = [{j: C.ring.one()} for j in range(ncells)]
    elif C.ring == INTEGERS:
        M = dense_boundary(C, p)
        basis = linalg.integer_kernel_basis(M)
        combos = [{j: vec[j] for j in range(ncells) if vec[j] != 0} for vec in basis]
    else:
        combos = linalg.kernel_columns(list(enumerate(cols)), C.ring)
    keys = C.basis[p]
    return [{keys[j]: c for j, c in combo.items()} for combo in combos]


def _is_unit_incidence(cols, ring) -> bool:
    one = ring.one()
    minus = ring.neg(one)
    for col in cols:
        if len(col) > 2 or any(v != one and v != minus for v in col.values()):
            return False
        if len(col) == 2:
            a, b = col.values()
            if not ((a == one and b == minus) or (a == minus and b == one)):
                return False
    return True


def inclusion_map_is_zero(
    F: Resolution,
    v: Valuation,
    t,
    lam,
    p: int,
    W: Window,
    augmented: bool = True,
    _complexes=None,
) -> bool:
    """Whether every degree-p cycle above level t bounds above level t - lam."""
    if lam < 0:
        raise ValueError("lag must be nonnegative")
    if _complexes is not None:
        C_t, C_tl = _complexes
    else:
        degs_t = [p] if (p == 0) else [p - 1, p]
        C_t = truncate(F, v, t, W, augmented=augmented and p == 0, degrees=degs_t)
        C_tl = truncate(F, v, t - lam, W, degrees=[p, p + 1])
    return _zero_map(C_t, C_tl, p, augmented=augmented)


def _zero_map(C_t: FiniteComplex, C_tl: FiniteComplex, p: int, augmented: bool) -> bool:
    ring = C_tl.ring
    cols_fill = C_tl.columns.get(p + 1, [])
    two_entry = all(len(col) == 2 for col in cols_fill)
    if p == 0 and augmented and two_entry and _is_unit_incidence(cols_fill, ring):
        # augmented H_0 is governed by graph components: a difference of
        # window vertices bounds iff they are connected at the lower level
        verts = C_t.basis.get(0, [])
        if len(verts) <= 1:
            return True
        uf = linalg._UnionFind()
        keys = C_tl.basis[p]
        for col in cols_fill:
            i1, i2 = col.keys()
            uf.union(keys[i1], keys[i2])
        root = uf.find(verts[0])
        return all(uf.find(vk) == root for vk in verts[1:])

    cycles = _cycles_of(C_t, p) if not (p == 0 and augmented) else _augmented_cycles(C_t)
    if not cycles:
        return True
    idx = C_tl.index.get(p, {})
    remapped = []
    for cyc in cycles:
        vec = {}
        for key, c in cyc.items():
            i = idx.get(key)
            if i is None:
                raise ValueError("cycle support escapes the lower window complex")
            vec[i] = c
        remapped.append(vec)
    if ring == INTEGERS:
        M = dense_boundary(C_tl, p + 1)
        for vec in remapped:
            z = [0] * C_tl.dim(p)
            for i, c in vec.items():
                z[i] = c
            if not M or not M[0]:
                if any(x != 0 for x in z):
                    return False
            elif not linalg.integer_solvable(M, z):
                return False
        return True
    base = list(enumerate(cols_fill))
    r0 = linalg.rank_columns(base, ring)
    aug = base + [(("cycle", i), vec) for i, vec in enumerate(remapped)]
    return linalg.rank_columns(aug, ring) == r0


def _augmented_cycles(C_t: FiniteComplex):
    """Kernel of the augmentation row: differences against a base vertex."""
    ring = C_t.ring
    verts = C_t.basis.get(0, [])
    eps = [col.get(0, ring.zero()) for col in C_t.columns.get(0, [])]
    if not verts:
        return []
    if not eps:
        return [{key: ring.one()} for key in verts]
    pivot = next((i for i, e in enumerate(eps) if not ring.is_zero(e)), None)
    if pivot is None:
        return [{key: ring.one()} for key in verts]
    cycles = []
    for i, key in enumerate(verts):
        if i == pivot:
            continue
        e = eps[i]
        if ring.is_zero(e):
            cycles.append({key: ring.one()})
        else:
            # e_i * pivot_vertex - e_pivot * vertex_i spans the kernel with the pivot
            cycles.append({verts[pivot]: e, key: ring.neg(eps[pivot])})
    return cycles


def window_values(F: Resolution, v: Valuation, W: Window, degrees: Sequence[int]) -> list[Fraction]:
    vals = set()
    for d in degrees:
        if d not in F.cells_by_degree:
            continue
        for cell in F.cells(d):
            for g in window_cell_elements(F, W, cell):
                vals.add(v.of_key(g, cell))
    return sorted(vals)


@dataclass
class CAProbeReport:
    group: dict
    character: list
    ring: str
    n: int
    window: dict
    lambda_grid: list
    t_samples: list
    verdicts: list = field(default_factory=list)
    per_pt_lambda: dict = field(default_factory=dict)
    uniform_lambda: object = None
    passed: bool = False
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "character": self.character,
            "ring": self.ring,
            "n": self.n,
            "window": self.window,
            "lambda_grid": [str(x) for x in self.lambda_grid],
            "t_samples": [str(x) for x in self.t_samples],
            "verdicts": [
                {"p": p, "t": str(t), "lambda": str(lam), "zero_map": z}
                for (p, t, lam, z) in self.verdicts
            ],
            "per_pt_lambda": {
                f"p={p},t={t}": (str(lam) if lam is not None else None)
                for (p, t), lam in sorted(self.per_pt_lambda.items(), key=lambda kv: (kv[0][0], kv[0][1]))
            },
            "uniform_lambda": str(self.uniform_lambda) if self.uniform_lambda is not None else None,
            "passed": self.passed,
            "note": self.note,
        }

    def verdict(self, p: int, t, lam) -> bool | None:
        for (pp, tt, ll, z) in self.verdicts:
            if pp == p and tt == t and ll == lam:
                return z
        return None


def ca_probe(
    F: Resolution,
    v: Valuation,
    n: int,
    W: Window,
    lambda_max: int,
    t_samples=None,
    lambda_grid=None,
    augmented: bool = True,
) -> CAProbeReport:
    """Grid evaluation of the zero-map condition for all degrees below n.

    A uniform lag within the grid is a positive window certificate; a grid
    with no uniform lag is window evidence against (the report says which).
    """
    window_info = {"radii": list(W.radii)}
    report = CAProbeReport(
        group=F.group.to_dict(),
        character=[str(c) for c in v.character.coeffs],
        ring=F.ring.tag,
        n=n,
        window=window_info,
        lambda_grid=[],
        t_samples=[],
    )
    if n == 0:
        report.passed = True
        report.uniform_lambda = 0
        report.note = "vacuous: degree -1 control always holds"
        return report

    lams = list(lambda_grid) if lambda_grid is not None else list(range(lambda_max + 1))
    values = window_values(F, v, W, range(min(n, F.max_degree) + 1))
    if t_samples is None:
        ts = values
    elif isinstance(t_samples, int):
        if t_samples >= len(values):
            ts = values
        else:
            step = (len(values) - 1) / (t_samples - 1) if t_samples > 1 else 0
            ts = sorted({values[round(i * step)] for i in range(t_samples)})
    else:
        ts = sorted(Fraction(x) for x in t_samples)
    report.lambda_grid = lams
    report.t_samples = ts

    cache: dict = {}

    def trunc(t_val, degs, aug):
        key = (t_val, tuple(degs), aug)
        got = cache.get(key)
        if got is None:
            got = truncate(F, v, t_val, W, augmented=aug, degrees=degs)
            cache[key] = got
        return got

    for p in range(0, n):
        for t in ts:
            degs_t = [p] if p == 0 else [p - 1, p]
            C_t = trunc(t, degs_t, augmented and p == 0)
            found = None
            for lam in lams:
                C_tl = trunc(t - lam, [p, p + 1], False)
                ok = _zero_map(C_t, C_tl, p, augmented=augmented)
                report.verdicts.append((p, t, lam, ok))
                if ok:
                    found = lam
                    break
            report.per_pt_lambda[(p, t)] = found

    minima = list(report.per_pt_lambda.values())
    if all(m is not None for m in minima) and minima:
        report.uniform_lambda = max(minima)
        report.passed = True
        report.note = (
            f"window certificate: uniform lag {report.uniform_lambda} works for all "
            f"sampled thresholds (radii {W.radii})"
        )
    else:
        report.passed = False
        report.note = (
            f"window evidence against: no uniform lag up to {max(lams)} covers all "
            f"sampled thresholds (radii {W.radii})"
        )
    return report


# ---------------------------------------------------------------------------
# extremal fillings


def _filling_columns(F: Resolution, v: Valuation, degree: int, W: Window):
    """Candidate filling columns (key, boundary vector, value) at a degree."""
    cols = []
    mul = F.group.multiply
    for cell in F.cells(degree):
        bd = F.boundary_table[cell]
        for g in window_cell_elements(F, W, cell):
            col = {(mul(g, h), y): c for (h, y), c in bd.items()}
            cols.append(((g, cell), col, v.of_key(g, cell)))
    return cols


def max_filling_value(
    F: Resolution,
    v: Valuation,
    target: Chain,
    W: Window,
    return_chain: bool = False,
    known_filling: Chain | None = None,
):
    """Highest value of a window filling of ``target`` (-inf when none exists).

    Descending threshold search over the finite set of basis values: a
    binary search locates the largest threshold at which the restricted
    linear system stays solvable.  A ``known_filling`` (checked) seeds the
    search from its value, saving the initial existence solve.
    """
    if target.is_zero:
        return (INF, Chain(F.ring)) if return_chain else INF
    p = target.degree
    if p + 1 not in F.cells_by_degree:
        return (NEG_INF, None) if return_chain else NEG_INF
    if not window_chain_supported(F, W, target):
        raise ValueError("target chain is not supported in the window")
    cols = _filling_columns(F, v, p + 1, W)
    values = sorted({val for (_, _, val) in cols})
    rhs = dict(target.terms)

    def solve_at(threshold):
        usable = [(key, col) for (key, col, val) in cols if val >= threshold]
        return linalg.solve_columns(usable, rhs, F.ring)

    best_sol = None
    lo = 0
    if known_filling is not None and not known_filling.is_zero:
        if F.boundary(known_filling) == target and window_chain_supported(F, W, known_filling):
            # every term of a window filling is an admitted column, so its
            # value sits in the threshold list
            best_sol = dict(known_filling.terms)
            lo = values.index(v.value(known_filling))
    if best_sol is None:
        if not values:
            return (NEG_INF, None) if return_chain else NEG_INF
        best_sol = solve_at(values[0])
        if best_sol is None:
            return (NEG_INF, None) if return_chain else NEG_INF
    hi = len(values) - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        sol = solve_at(values[mid])
        if sol is not None:
            lo, best_sol = mid, sol
        else:
            hi = mid - 1
    if return_chain:
        return values[lo], Chain(F.ring, dict(best_sol))
    return values[lo]


def eta(F: Resolution, v: Valuation, z: Chain, W: Window):
    """Filling defect of a cycle: its value minus the best filling value.

    Window-restricted version of the infimum over all fillings; within the
    window the extremum is attained since value sets are finite.
    """
    if z.is_zero:
        raise ValueError("eta needs a nonzero cycle")
    if z.degree > 0 and not F.boundary(z).is_zero:
        raise ValueError("eta needs a cycle")
    mv = max_filling_value(F, v, z, W)
    if mv == NEG_INF:
        raise ValueError("cycle does not bound inside the window")
    return v.value(z) - mv


def gap_lower_bound(F: Resolution, w: Valuation, target: Chain, W: Window, known_filling: Chain | None = None):
    """Exact minimal boundary-value gap over every window filling of target."""
    if target.is_zero:
        return INF
    mv = max_filling_value(F, w, target, W, known_filling=known_filling)
    if mv == NEG_INF:
        raise ValueError("target does not bound inside the window")
    return w.value(target) - mv


# ---------------------------------------------------------------------------
# tensor complexes and the Kunneth dimension check


def tensor_complex(C: FiniteComplex, Cp: FiniteComplex) -> FiniteComplex:
    if C.ring != Cp.ring:
        raise ValueError("ring mismatch")
    if C.augmented or Cp.augmented:
        raise ValueError("tensor_complex expects non-augmented complexes")
    ring = C.ring
    basis: dict = {}
    for dl in C.degrees():
        for dr in Cp.degrees():
            basis.setdefault(dl + dr, []).extend(
                (dl, i, dr, j) for i in range(C.dim(dl)) for j in range(Cp.dim(dr))
            )
    index = {d: {key: i for i, key in enumerate(b)} for d, b in basis.items()}
    columns: dict = {}
    for d, keys in basis.items():
        if d - 1 not in basis:
            continue
        idx = index[d - 1]
        cols = []
        for (dl, i, dr, j) in keys:
            col: dict = {}
            left_cols = C.columns.get(dl)
            if left_cols is not None and dl - 1 in C.basis:
                for i2, c in left_cols[i].items():
                    col[idx[(dl - 1, i2, dr, j)]] = c
            right_cols = Cp.columns.get(dr)
            if right_cols is not None and dr - 1 in Cp.basis:
                sign = ring.from_int(1 if dl % 2 == 0 else -1)
                for j2, c in right_cols[j].items():
                    key2 = idx[(dl, i, dr - 1, j2)]
                    col[key2] = ring.add(col.get(key2, ring.zero()), ring.mul(sign, c))
            cols.append({k: c for k, c in col.items() if not ring.is_zero(c)})
        columns[d] = cols
    return FiniteComplex(ring, basis, columns)


def kunneth_dims_check(C: FiniteComplex, Cp: FiniteComplex) -> bool:
    """Compare homology dimensions of the tensor complex with the convolution."""
    if not C.ring.is_field:
        raise ValueError("field coefficients required")
    dims_l = {p: d for p, d in zip([q for q in C.degrees() if q >= 0], homology_dims(C))}
    dims_r = {p: d for p, d in zip([q for q in Cp.degrees() if q >= 0], homology_dims(Cp))}
    T = tensor_complex(C, Cp)
    dims_t = {p: d for p, d in zip([q for q in T.degrees() if q >= 0], homology_dims(T))}
    for p in dims_t:
        expected = sum(dims_l.get(a, 0) * dims_r.get(p - a, 0) for a in range(p + 1))
        if dims_t[p] != expected:
            return False
    return True

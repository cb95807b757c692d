"""Exact sparse linear algebra over Q, prime fields and Z.

Systems arrive column-wise: a column is a sparse dict mapping row keys to
nonzero ring elements.  Boundary maps of group-ring resolutions are signed
incidence matrices in low degrees, so solvability gets a union-find fast
path; everything else goes through sparse Gaussian elimination with
min-degree pivoting.  Integer-only questions (torsion, class orders) use a
dense Smith normal form.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd
from typing import Sequence

from .rings import CoefficientRing

GROUND = object()  # virtual vertex for single-entry incidence columns


def _field_ops(ring: CoefficientRing):
    if ring.tag == "Q":
        zero = Fraction(0)
        return zero, lambda a, b: a - b, lambda a, b: a * b, lambda a, b: a / b
    if ring.is_field:
        p = ring.p
        return (
            0,
            lambda a, b: (a - b) % p,
            lambda a, b: (a * b) % p,
            lambda a, b: (a * pow(b, p - 2, p)) % p,
        )
    raise ValueError(f"{ring} is not a field")


def _as_edges(cols, ring):
    """Interpret columns as signed graph edges, or return None.

    A usable column has one entry +1/-1 (edge to the virtual ground) or two
    entries +1 and -1 (edge tail -> head).  Such systems are solvable over Z
    exactly when solvable over Q, so the fast path also serves ring Z.
    """
    one = ring.one()
    minus = ring.neg(one)
    edges = []
    for key, col in cols:
        items = [(r, v) for r, v in col.items()]
        if len(items) == 1:
            r, v = items[0]
            if v == one:
                edges.append((key, GROUND, r))
            elif v == minus:
                edges.append((key, r, GROUND))
            else:
                return None
        elif len(items) == 2:
            (r1, v1), (r2, v2) = items
            if v1 == one and v2 == minus:
                edges.append((key, r2, r1))
            elif v1 == minus and v2 == one:
                edges.append((key, r1, r2))
            else:
                return None
        elif len(items) == 0:
            continue
        else:
            return None
    return edges


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        parent = self.parent
        if x not in parent:
            parent[x] = x
            return x
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra is rb or ra == rb:
            return False
        self.parent[rb] = ra
        return True


def _solve_edges(edges, rhs, ring):
    """Solve an incidence system via spanning-forest flows.

    A column with tail u and head v is the vector e_head - e_tail (the
    ground vertex contributes nothing).  Setting non-tree flows to zero, the
    flow on each tree edge is forced by the rhs sum over the subtree it
    separates, and a component is consistent iff its total rhs vanishes
    (unless it touches ground, which has no equation).
    """
    zero = ring.zero()
    uf = _UnionFind()
    adj: dict = {}  # node -> list of (key, neighbor, sign of column at node)
    for key, tail, head in edges:
        if uf.union(tail, head):
            adj.setdefault(tail, []).append((key, head, -1))
            adj.setdefault(head, []).append((key, tail, 1))
    for r in rhs:
        uf.find(r)

    components: dict = {}
    for v in uf.parent:
        components.setdefault(uf.find(v), []).append(v)

    solution = {}
    for members in components.values():
        root = members[0]
        for v in members:
            if v is GROUND:
                root = GROUND
                break
        order = []
        parent_link: dict = {root: None}
        stack = [root]
        while stack:
            node = stack.pop()
            order.append(node)
            for key, other, sign in adj.get(node, ()):
                if other not in parent_link:
                    parent_link[other] = (key, node, -sign)  # sign at the child
                    stack.append(other)
        subtree = {node: rhs.get(node, zero) for node in order}
        for node in reversed(order):
            link = parent_link[node]
            if link is None:
                if node is not GROUND and subtree[node] != zero:
                    return None
                continue
            key, parent, sign_at_node = link
            flow = subtree[node] if sign_at_node == 1 else ring.neg(subtree[node])
            if flow != zero:
                solution[key] = flow
            subtree[parent] = ring.add(subtree[parent], subtree[node])
    return solution


def solve_columns(cols, rhs: dict, ring: CoefficientRing):
    """Find y with sum_k y[k] * col_k = rhs, or None if infeasible.

    ``cols`` is a dict or list of (key, sparse column).  Exact over Q and
    prime fields; incidence systems are also accepted over Z.
    """
    items = list(cols.items()) if isinstance(cols, dict) else list(cols)
    zero = ring.zero()
    b = {r: ring.normalize(v) for r, v in rhs.items() if not ring.is_zero(v)}
    edges = _as_edges(items, ring)
    if edges is not None:
        return _solve_edges(edges, b, ring)
    pivots, solution, _ = _eliminate(items, b, ring, want_solution=True)
    return solution


def rank_columns(cols, ring: CoefficientRing) -> int:
    """Rank of the column family over a field (or incidence rank over Z)."""
    items = list(cols.items()) if isinstance(cols, dict) else list(cols)
    edges = _as_edges(items, ring)
    if edges is not None:
        uf = _UnionFind()
        rank = 0
        for _, tail, head in edges:
            if uf.union(tail, head):
                rank += 1
        return rank
    pivots, _, _ = _eliminate(items, None, ring, want_solution=False)
    return pivots


def _eliminate(items, rhs, ring, want_solution: bool):
    """Sparse Gaussian elimination with lazy min-degree row pivoting.

    Returns (pivot count, solution dict or None, infeasible flag).  When
    ``rhs`` is None only the rank is computed.  Over Q the elimination runs
    fraction-free on integers (columns and rhs are denominator-cleared, rows
    are gcd-normalized) and only the back substitution produces Fractions.
    """
    if ring.tag == "Q":
        return _eliminate_int(items, rhs, want_solution)
    if ring.is_field:
        return _eliminate_modp(items, rhs, ring, want_solution)
    raise ValueError(f"generic elimination needs a field, got {ring}")


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _eliminate_int(items, rhs, want_solution: bool):
    rows: dict[int, dict[int, int]] = {}
    colindex: dict[int, set] = {}
    row_ids: dict = {}
    col_keys = []
    col_scale = []

    def row_id(r):
        rid = row_ids.get(r)
        if rid is None:
            rid = len(row_ids)
            row_ids[r] = rid
        return rid

    for key, col in items:
        cid = len(col_keys)
        col_keys.append(key)
        scale = 1
        vals = []
        for r, v in col.items():
            f = Fraction(v)
            if f == 0:
                continue
            vals.append((r, f))
            scale = _lcm(scale, f.denominator)
        col_scale.append(scale)
        for r, f in vals:
            rid = row_id(r)
            rows.setdefault(rid, {})[cid] = int(f * scale)
            colindex.setdefault(cid, set()).add(rid)
        colindex.setdefault(cid, set())

    b: dict[int, int] = {}
    rhs_scale = 1
    if rhs is not None:
        cleaned = [(r, Fraction(v)) for r, v in rhs.items() if Fraction(v) != 0]
        for _, f in cleaned:
            rhs_scale = _lcm(rhs_scale, f.denominator)
        for r, f in cleaned:
            b[row_id(r)] = int(f * rhs_scale)
        for rid in b:
            rows.setdefault(rid, {})

    heap = [(len(support), rid) for rid, support in rows.items()]
    heapq.heapify(heap)
    pivot_trail = []
    npivots = 0

    while heap:
        ln, rid = heapq.heappop(heap)
        row = rows.get(rid)
        if row is None or len(row) != ln:
            continue
        if ln == 0:
            if b.get(rid, 0) != 0:
                return npivots, None, True
            del rows[rid]
            continue
        # pivot column: fewest other rows touched, then stable order
        cid = min(row, key=lambda c: (len(colindex[c]), c))
        pval = row[cid]
        brow = b.get(rid, 0)
        victims = [r2 for r2 in colindex[cid] if r2 != rid]
        for r2 in victims:
            row2 = rows[r2]
            a = row2[cid]
            g0 = gcd(a, pval)
            ml, mr = pval // g0, a // g0
            g = 0
            for c2, v2 in row.items():
                cur = row2.get(c2)
                nv = (ml * cur - mr * v2) if cur is not None else -mr * v2
                if nv == 0:
                    if cur is not None:
                        del row2[c2]
                        colindex[c2].discard(r2)
                else:
                    if cur is None:
                        colindex[c2].add(r2)
                    row2[c2] = nv
                    g = gcd(g, nv)
            for c2 in row2:
                if c2 not in row:
                    nv = ml * row2[c2]
                    row2[c2] = nv
                    g = gcd(g, nv)
            nb = 0
            if rhs is not None:
                nb = ml * b.get(r2, 0) - mr * brow
                g = gcd(g, nb)
            if not row2:
                if nb != 0:
                    return npivots, None, True
                b.pop(r2, None)
                del rows[r2]
            else:
                if g > 1:
                    for c2 in row2:
                        row2[c2] //= g
                    nb //= g
                if rhs is not None:
                    if nb == 0:
                        b.pop(r2, None)
                    else:
                        b[r2] = nb
                heapq.heappush(heap, (len(row2), r2))
        for c2 in row:
            colindex[c2].discard(rid)
        del rows[rid]
        npivots += 1
        if want_solution:
            pivot_trail.append((rid, cid, row, brow))
            b.pop(rid, None)

    if rhs is not None:
        for rid, row in rows.items():
            if not row and b.get(rid, 0) != 0:
                return npivots, None, True

    if not want_solution:
        return npivots, None, False

    y: dict[int, Fraction] = {}
    for rid, cid, row, brow in reversed(pivot_trail):
        acc = Fraction(brow)
        for c2, v2 in row.items():
            if c2 != cid and c2 in y:
                acc -= v2 * y[c2]
        if acc != 0:
            y[cid] = acc / row[cid]
    solution = {}
    for c, val in y.items():
        adjusted = val * col_scale[c] / rhs_scale
        if adjusted != 0:
            solution[col_keys[c]] = adjusted
    return npivots, solution, False


def _eliminate_modp(items, rhs, ring, want_solution: bool):
    zero, sub, mul, div = _field_ops(ring)
    rows: dict[int, dict[int, object]] = {}
    colindex: dict[int, set] = {}
    row_ids: dict = {}
    col_keys = []

    def row_id(r):
        rid = row_ids.get(r)
        if rid is None:
            rid = len(row_ids)
            row_ids[r] = rid
        return rid

    for key, col in items:
        cid = len(col_keys)
        col_keys.append(key)
        for r, v in col.items():
            v = ring.normalize(v)
            if v == zero:
                continue
            rid = row_id(r)
            rows.setdefault(rid, {})[cid] = v
            colindex.setdefault(cid, set()).add(rid)
        colindex.setdefault(cid, set())

    b = {}
    if rhs is not None:
        for r, v in rhs.items():
            v = ring.normalize(v)
            if v != zero:
                b[row_id(r)] = v
        for rid in b:
            rows.setdefault(rid, {})

    heap = [(len(support), rid) for rid, support in rows.items()]
    heapq.heapify(heap)
    pivot_trail = []
    npivots = 0

    while heap:
        ln, rid = heapq.heappop(heap)
        row = rows.get(rid)
        if row is None or len(row) != ln:
            continue
        if ln == 0:
            if b.get(rid, zero) != zero:
                return npivots, None, True
            del rows[rid]
            continue
        cid = min(row, key=lambda c: (len(colindex[c]), c))
        pval = row[cid]
        victims = [r2 for r2 in colindex[cid] if r2 != rid]
        for r2 in victims:
            row2 = rows[r2]
            factor = div(row2[cid], pval)
            for c2, v2 in row.items():
                cur = row2.get(c2)
                if cur is None:
                    nv = sub(zero, mul(factor, v2))
                    if nv != zero:
                        row2[c2] = nv
                        colindex[c2].add(r2)
                else:
                    nv = sub(cur, mul(factor, v2))
                    if nv == zero:
                        del row2[c2]
                        colindex[c2].discard(r2)
                    else:
                        row2[c2] = nv
            if rhs is not None:
                nb = sub(b.get(r2, zero), mul(factor, b.get(rid, zero)))
                if nb == zero:
                    b.pop(r2, None)
                else:
                    b[r2] = nb
            if not row2:
                if b.get(r2, zero) != zero:
                    return npivots, None, True
                del rows[r2]
            else:
                heapq.heappush(heap, (len(row2), r2))
        for c2 in row:
            colindex[c2].discard(rid)
        del rows[rid]
        npivots += 1
        if want_solution:
            pivot_trail.append((rid, cid, row, b.pop(rid, zero)))

    if rhs is not None:
        for rid, row in rows.items():
            if not row and b.get(rid, zero) != zero:
                return npivots, None, True

    if not want_solution:
        return npivots, None, False

    y: dict[int, object] = {}
    for rid, cid, row, brow in reversed(pivot_trail):
        acc = brow
        for c2, v2 in row.items():
            if c2 != cid and c2 in y:
                acc = sub(acc, mul(v2, y[c2]))
        if acc != zero:
            y[cid] = div(acc, row[cid])
    return npivots, {col_keys[c]: v for c, v in y.items()}, False


def kernel_columns(cols, ring: CoefficientRing):
    """Basis of the null space: combinations of column keys summing to zero."""
    items = list(cols.items()) if isinstance(cols, dict) else list(cols)
    zero, sub, mul, div = _field_ops(ring)
    pivots: dict = {}  # row -> (creation index, vector, combo)
    kernel = []
    for key, col in items:
        vec = {r: ring.normalize(v) for r, v in col.items() if not ring.is_zero(v)}
        combo = {key: ring.one()}
        while True:
            hit = None
            for r in vec:
                p = pivots.get(r)
                if p is not None and (hit is None or p[0] < hit[1][0]):
                    hit = (r, p)
            if hit is None:
                break
            r, (_, pvec, pcombo) = hit
            factor = vec[r]  # pivot vectors are normalized to 1 at their row
            for r2, v2 in pvec.items():
                nv = sub(vec.get(r2, zero), mul(factor, v2))
                if nv == zero:
                    vec.pop(r2, None)
                else:
                    vec[r2] = nv
            for k2, v2 in pcombo.items():
                nv = sub(combo.get(k2, zero), mul(factor, v2))
                if nv == zero:
                    combo.pop(k2, None)
                else:
                    combo[k2] = nv
        if not vec:
            kernel.append(combo)
        else:
            r = min(vec, key=_row_sort_key)
            pval = vec[r]
            vec = {r2: div(v2, pval) for r2, v2 in vec.items()}
            combo = {k2: div(v2, pval) for k2, v2 in combo.items()}
            pivots[r] = (len(pivots), vec, combo)
    return kernel


def _row_sort_key(r):
    return (str(type(r)), repr(r))


# ---------------------------------------------------------------------------
# dense integer linear algebra


def _identity(n: int):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                Oi = out[i]
                for j in range(m):
                    Oi[j] += a * Bt[j]
    return out


def smith_normal_form(M: Sequence[Sequence[int]]):
    """Diagonalize an integer matrix: returns (factors, U, V) with U M V = D.

    U and V are unimodular and the diagonal entries satisfy d1 | d2 | ...;
    ``factors`` is the full diagonal (zeros included).
    """
    m = len(M)
    n = len(M[0]) if m else 0
    D = [[int(x) for x in row] for row in M]
    U = _identity(m)
    V = _identity(n)
    if m == 0 or n == 0:
        return [], U, V

    def row_op(i, j, q):  # row_i -= q * row_j
        D[i] = [a - q * b for a, b in zip(D[i], D[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for row in D:
            row[i] -= q * row[j]
        for row in V:
            row[i] -= q * row[j]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def clear_at(k):
        while True:
            # move a minimal nonzero entry of the trailing block to (k, k)
            best = None
            for i in range(k, m):
                for j in range(k, n):
                    if D[i][j] != 0 and (best is None or abs(D[i][j]) < best[0]):
                        best = (abs(D[i][j]), i, j)
            if best is None:
                return False
            _, bi, bj = best
            if bi != k:
                swap_rows(k, bi)
            if bj != k:
                swap_cols(k, bj)
            done = True
            for i in range(k + 1, m):
                if D[i][k] != 0:
                    q = D[i][k] // D[k][k]
                    row_op(i, k, q)
                    if D[i][k] != 0:
                        done = False
            for j in range(k + 1, n):
                if D[k][j] != 0:
                    q = D[k][j] // D[k][k]
                    col_op(j, k, q)
                    if D[k][j] != 0:
                        done = False
            if done:
                return True

    r = min(m, n)
    for k in range(r):
        if not clear_at(k):
            break

    # enforce divisibility d_k | d_{k+1}
    changed = True
    while changed:
        changed = False
        for k in range(r - 1):
            a, b = D[k][k], D[k + 1][k + 1]
            if a != 0 and b % a != 0:
                row_op(k, k + 1, -1)  # row_k += row_{k+1}
                clear_at(k)
                changed = True
    for k in range(r):
        if D[k][k] < 0:
            D[k] = [-x for x in D[k]]
            U[k] = [-x for x in U[k]]
    factors = [D[k][k] for k in range(r)]
    return factors, U, V


def integer_solve(M: Sequence[Sequence[int]], z: Sequence[int]):
    """An integer solution y of M y = z, or None."""
    m = len(M)
    n = len(M[0]) if m else 0
    if m == 0 or n == 0:
        return ([0] * n) if all(x == 0 for x in z) else None
    factors, U, V = smith_normal_form(M)
    w = [sum(U[i][j] * z[j] for j in range(m)) for i in range(m)]
    x = [0] * n
    for i in range(m):
        d = factors[i] if i < len(factors) else 0
        if d == 0:
            if w[i] != 0:
                return None
        elif w[i] % d != 0:
            return None
        elif i < n:
            x[i] = w[i] // d
    return [sum(V[i][j] * x[j] for j in range(n)) for i in range(n)]


def integer_solvable(M: Sequence[Sequence[int]], z: Sequence[int]) -> bool:
    """Whether M y = z has an integer solution."""
    if not M:
        return all(x == 0 for x in z)
    return integer_solve(M, z) is not None


def integer_kernel_basis(M: Sequence[Sequence[int]]):
    """Basis of the integer kernel {y : M y = 0} (columns of M index y)."""
    m = len(M)
    n = len(M[0]) if m else 0
    if n == 0:
        return []
    if m == 0:
        return [[1 if j == i else 0 for j in range(n)] for i in range(n)]
    factors, U, V = smith_normal_form(M)
    basis = []
    for j in range(n):
        d = factors[j] if j < len(factors) else 0
        if d == 0:
            basis.append([V[i][j] for i in range(n)])
    return basis


def class_order(M: Sequence[Sequence[int]], z: Sequence[int]):
    """Order of z modulo the integer column span of M.

    Returns ("zero", 1) when z is in the span, ("torsion", k) when k >= 2 is
    minimal with k*z in the span, and ("infinite", 0) otherwise.
    """
    m = len(M)
    if m == 0:
        return ("zero", 1) if all(x == 0 for x in z) else ("infinite", 0)
    factors, U, V = smith_normal_form(M)
    w = [sum(U[i][j] * z[j] for j in range(m)) for i in range(m)]
    k = 1
    for i in range(m):
        d = factors[i] if i < len(factors) else 0
        if d == 0:
            if w[i] != 0:
                return ("infinite", 0)
        elif w[i] % d != 0:
            g = gcd(d, w[i] % d)
            step = d // g
            k = k * step // gcd(k, step)
    return ("zero", 1) if k == 1 else ("torsion", k)

"""Exact linear algebra over a Field, backed by flint's rref.

Vectors are sparse dicts ``{index: scalar}`` on input and dense lists on
output.  Everything here is exact; singular systems are reported, never
approximated.
"""

import flint


def from_columns(F, nrows, cols):
    """Dense flint matrix whose j-th column is the sparse dict ``cols[j]``."""
    ncols = len(cols)
    entries = [0] * (nrows * ncols)
    for j, col in enumerate(cols):
        for i, v in col.items():
            entries[i * ncols + j] = v
    return F.matrix(nrows, ncols, entries)


def from_rows(F, ncols, rows):
    nrows = len(rows)
    entries = [0] * (nrows * ncols)
    for i, row in enumerate(rows):
        base = i * ncols
        for j, v in row.items():
            entries[base + j] = v
    return F.matrix(nrows, ncols, entries)


def _rref(M):
    R, rank = M.rref()
    ncols = M.ncols()
    flat = R.entries()
    pivots = []
    for i in range(rank):
        row = flat[i * ncols:(i + 1) * ncols]
        for j, v in enumerate(row):
            if v != 0:
                pivots.append(j)
                break
    return flat, rank, pivots


def rank(M):
    if M.nrows() == 0 or M.ncols() == 0:
        return 0
    return M.rank()


def kernel(F, M):
    """Basis of the right kernel {x : Mx = 0} as dense lists."""
    ncols = M.ncols()
    if ncols == 0:
        return []
    if M.nrows() == 0:
        return [[F.one if i == j else F.zero for i in range(ncols)] for j in range(ncols)]
    flat, r, pivots = _rref(M)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [F.zero] * ncols
        v[f] = F.one
        for i, p in enumerate(pivots):
            c = flat[i * ncols + f]
            if c != 0:
                v[p] = -c
        basis.append(v)
    return basis


def solve_many(F, M, rhs):
    """Solve ``M x = b`` for every sparse column ``b`` in ``rhs``.

    Returns a list with one dense solution (free variables set to zero) or
    None per right-hand side.
    """
    nrows, ncols = M.nrows(), M.ncols()
    k = len(rhs)
    if k == 0:
        return []
    if ncols == 0:
        return [[] if not any(v != 0 for v in b.values()) else None for b in rhs]
    if nrows == 0:
        return [[F.zero] * ncols for _ in rhs]
    total = ncols + k
    entries = [0] * (nrows * total)
    flatM = M.entries()
    for i in range(nrows):
        entries[i * total:i * total + ncols] = flatM[i * ncols:(i + 1) * ncols]
    for j, b in enumerate(rhs):
        for i, v in b.items():
            entries[i * total + ncols + j] = v
    A = F.matrix(nrows, total, entries)
    R, r = A.rref()
    flat = R.entries()
    piv_of_row = []
    for i in range(r):
        row = flat[i * total:(i + 1) * total]
        for j, v in enumerate(row):
            if v != 0:
                piv_of_row.append(j)
                break
    out = []
    for j in range(k):
        col = ncols + j
        x = [F.zero] * ncols
        ok = True
        for i, p in enumerate(piv_of_row):
            v = flat[i * total + col]
            if p < ncols:
                x[p] = v
            elif v != 0:
                # a row that is zero on the coefficient block but not here
                ok = False
                break
        out.append(x if ok else None)
    return out


def solve(F, M, b):
    return solve_many(F, M, [b])[0]


def inverse(F, M):
    """Inverse of a square matrix, or None when singular."""
    n = M.nrows()
    if n == 0:
        return M
    if rank(M) < n:
        return None
    return M.inv()


def det(M):
    return M.det()


def independent_columns(F, nrows, cols):
    """Indices of a maximal set of linearly independent sparse columns (greedy, in order)."""
    if not cols:
        return []
    M = from_columns(F, nrows, cols)
    _, _, pivots = _rref(M)
    return pivots


def smith_diagonal(int_rows, ncols):
    """Nonzero diagonal entries of the Smith normal form of an integer matrix."""
    if not int_rows or ncols == 0:
        return []
    M = flint.fmpz_mat(len(int_rows), ncols, [int(v) for row in int_rows for v in row])
    S = M.snf()
    diag = []
    for i in range(min(S.nrows(), S.ncols())):
        v = int(S[i, i])
        if v != 0:
            diag.append(v)
    return diag

"""Brute-force references that share no code with the package.

Everything here works on plain labels (i, k) meaning the path of length k
starting at vertex i, with Fraction scalars over Q and ints mod p otherwise.
Nothing from flint or from derpic.linalg is used.
"""

from fractions import Fraction


class Scalars:
    def __init__(self, p=0):
        self.p = p

    def norm(self, x):
        if self.p:
            return int(x) % self.p
        return Fraction(x)

    def inv(self, x):
        if self.p:
            return pow(int(x), self.p - 2, self.p)
        return 1 / Fraction(x)


def rank(rows, p=0):
    """Rank of a list of rows (lists) by plain Gaussian elimination."""
    S = Scalars(p)
    M = [[S.norm(x) for x in r] for r in rows]
    if not M:
        return 0
    ncols = len(M[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        iv = S.inv(M[r][c])
        M[r] = [S.norm(x * iv) for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [S.norm(a - f * b) for a, b in zip(M[i], M[r])]
        r += 1
        if r == len(M):
            break
    return r


class Paths:
    """The cyclic Nakayama algebra with N vertices and paths of length <= L."""

    def __init__(self, N, L, p=0):
        self.N, self.L, self.S = N, L, Scalars(p)

    def paths(self, i, j):
        """Labels of the paths from vertex i to vertex j."""
        return [(i, k) for k in range(self.L + 1) if (i + k) % self.N == j % self.N]

    def mul(self, x, y):
        """x * y = (x after y) on dicts {label: scalar}."""
        out = {}
        for (j, k2), a in x.items():
            for (i, k), b in y.items():
                if (i + k) % self.N != j or k + k2 > self.L:
                    continue
                lab = (i, k + k2)
                out[lab] = self.S.norm(out.get(lab, 0) + a * b)
        return {lab: c for lab, c in out.items() if c != 0}


def plain_complex(X):
    """(terms, diff) with label-keyed scalar dicts, read off a ProjComplex."""
    A = X.algebra
    F = A.field
    terms = {d: list(t) for d, t in X.terms.items()}
    diff = {}
    for d, M in X.diff.items():
        diff[d] = {(r, c): {A.labels[b]: F.to_fraction(v) for b, v in x.items()}
                   for r, row in M.items() for c, x in row.items()}
    return terms, diff


def _map_vars(P, Xt, Yt, s):
    """Coordinates of a degree-s map: (d, r, c, label) entries."""
    out = []
    for d, src in Xt.items():
        tgt = Yt.get(d + s, [])
        for c, i in enumerate(src):
            for r, j in enumerate(tgt):
                for lab in P.paths(i, j):
                    out.append((d, r, c, lab))
    return out


def _defect_rows(P, X, Y, s):
    """Matrix (as list of rows) of f -> d f - (-1)^s f d on degree-s maps."""
    Xt, Xd = X
    Yt, Yd = Y
    src = _map_vars(P, Xt, Yt, s)
    tgt = _map_vars(P, Xt, Yt, s + 1)
    pos = {v: k for k, v in enumerate(tgt)}
    cols = []
    sign = -1 if s % 2 == 0 else 1
    for d, r, c, lab in src:
        col = [0] * len(tgt)
        f = {lab: 1}
        # d_Y f: entry (r2, c) of degree d, map X_d -> Y_{d+s+1}
        for (r2, rr), u in Yd.get(d + s, {}).items():
            if rr != r:
                continue
            for lab2, v in P.mul(u, f).items():
                k = pos[(d, r2, c, lab2)]
                col[k] = P.S.norm(col[k] + v)
        # f d_X: from X_{d-1}, entries (c, c2) of the degree d-1 differential
        for (cc, c2), u in Xd.get(d - 1, {}).items():
            if cc != c:
                continue
            for lab2, v in P.mul(f, u).items():
                k = pos[(d - 1, r, c2, lab2)]
                col[k] = P.S.norm(col[k] - sign * v)
        cols.append(col)
    return cols, len(src)


def hom_dimension(X, Y, s=0, plain=None):
    """dim Hom_K(X, Y[s]) as (cycles) - (boundaries), computed from scratch."""
    A = X.algebra
    P = plain or Paths(len(A.idempotents), max(k for _, k in A.labels), A.field.p)
    PX, PY = plain_complex(X), plain_complex(Y)
    Z, nz = _defect_rows(P, PX, PY, s)
    B, _ = _defect_rows(P, PX, PY, s - 1)
    return (nz - rank(Z, P.S.p)) - rank(B, P.S.p)


def center_dimension(N, L, p=0):
    """dim of the center of the Nakayama algebra, by the commutator kernel."""
    P = Paths(N, L, p)
    basis = [(i, k) for i in range(N) for k in range(L + 1)]
    gens = [{(i, 0): 1} for i in range(N)] + [{(i, 1): 1} for i in range(N) if L >= 1]
    rows = []
    for z in basis:
        col = []
        for g in gens:
            c = dict(P.mul({z: 1}, g))
            for lab, v in P.mul(g, {z: 1}).items():
                c[lab] = c.get(lab, 0) - v
            col.extend(P.S.norm(c.get(lab, 0)) for lab in basis)
        rows.append(col)
    return len(basis) - rank(rows, p)


def nu_label(lab, N, L, p=1):
    i, k = lab
    return ((i - p * L) % N, k)


def orbit_family(n, N, L, l, lab):
    """The equivariant matrix family of s_{g^l} P(w): entry [g + l][g] = nu^g(w)."""
    return {((g + l) % n, g): {nu_label(lab, N, L, g): 1} for g in range(n)}


def family_compose(P, F1, F2, n):
    out = {}
    for (a, b), x in F1.items():
        for (b2, c), y in F2.items():
            if b2 != b:
                continue
            prod = P.mul(x, y)
            cur = out.setdefault((a, c), {})
            for lab, v in prod.items():
                cur[lab] = P.S.norm(cur.get(lab, 0) + v)
    return {k: {lab: v for lab, v in x.items() if v != 0} for k, x in out.items()
            if any(v != 0 for v in x.values())}


def family_element(F, n):
    """Read (l, w) components of an equivariant family off its column g = 0."""
    out = {}
    for (a, c), x in F.items():
        if c == 0:
            for lab, v in x.items():
                out[(a, lab)] = v
    return out

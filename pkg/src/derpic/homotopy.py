"""Bounded complexes of finitely generated projective right modules.

A term in degree d is a list of idempotent positions i, each naming the
summand P_i = e_i A.  The differential from degree d to d+1 is a sparse
matrix ``{row: {col: element}}`` whose (r, c) entry lies in
e_{target(r)} A e_{source(c)} and acts by left multiplication.

Conventions:
  * differentials raise degree;
  * a map of degree s has defect D(f) = d f - (-1)^s f d;
  * X[k]_d = X_{d+k} with differential (-1)^k d;
  * cone(f)_d = X_{d+1} + Y_d with differential [[-d_X, 0], [f, d_Y]].
"""

import random as _random

from . import linalg
from .algebra import add, axpy, scale


class ComplexError(ValueError):
    pass


# ---------------------------------------------------------------------------
# sparse matrices over an algebra

def mat_mul(A, M, N):
    """M N for M: Y -> Z and N: X -> Y (rows of M index Z, columns of N index X)."""
    out = {}
    for r, row in M.items():
        acc = {}
        for k, a in row.items():
            nrow = N.get(k)
            if not nrow:
                continue
            for c, b in nrow.items():
                prod = A.mul(a, b)
                if prod:
                    cur = acc.get(c)
                    if cur is None:
                        acc[c] = prod
                    else:
                        axpy(cur, A.field.one, prod)
                        if not cur:
                            del acc[c]
        if acc:
            out[r] = acc
    return out


def mat_add(M, N, c=None):
    """M + c N (c defaults to 1)."""
    out = {r: dict(row) for r, row in M.items()}
    for r, row in N.items():
        tgt = out.setdefault(r, {})
        for k, v in row.items():
            v2 = v if c is None else scale(c, v)
            cur = tgt.get(k)
            new = v2 if cur is None else add(cur, v2)
            if new:
                tgt[k] = new
            else:
                tgt.pop(k, None)
        if not tgt:
            del out[r]
    return out


def mat_scale(c, M):
    if c == 0:
        return {}
    return {r: {k: scale(c, v) for k, v in row.items()} for r, row in M.items()}


def mat_identity(A, terms):
    return {k: {k: A.e(p)} for k, p in enumerate(terms)}


def mat_clean(M):
    out = {}
    for r, row in M.items():
        row = {k: v for k, v in row.items() if v}
        if row:
            out[r] = row
    return out


def mat_apply_map(f, M):
    """Apply an algebra map entrywise."""
    out = {}
    for r, row in M.items():
        new = {}
        for k, v in row.items():
            img = f(v)
            if img:
                new[k] = img
        if new:
            out[r] = new
    return out


# ---------------------------------------------------------------------------
# complexes

class ProjComplex:
    def __init__(self, algebra, terms, diff=None, check=True):
        self.algebra = algebra
        self.terms = {int(d): list(t) for d, t in terms.items() if t}
        diff = diff or {}
        self.diff = {}
        for d, M in diff.items():
            M = mat_clean(M)
            if M:
                self.diff[int(d)] = M
        if self.terms:
            self.lo = min(self.terms)
            self.hi = max(self.terms)
        else:
            self.lo, self.hi = 0, -1
        self._cache = {}
        if check:
            self.validate()

    def term(self, d):
        return self.terms.get(d, [])

    def d(self, d):
        return self.diff.get(d, {})

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def is_zero(self):
        return not self.terms

    def rank(self):
        return sum(len(t) for t in self.terms.values())

    def validate(self):
        A = self.algebra
        for d, M in self.diff.items():
            src, tgt = self.term(d), self.term(d + 1)
            for r, row in M.items():
                if not 0 <= r < len(tgt):
                    raise ComplexError(f"differential row {r} out of range in degree {d}")
                for c, v in row.items():
                    if not 0 <= c < len(src):
                        raise ComplexError(f"differential column {c} out of range in degree {d}")
                    if not A.in_corner(v, src[c], tgt[r]):
                        raise ComplexError(f"entry ({r},{c}) in degree {d} has wrong end points")
        for d in self.diff:
            sq = mat_mul(A, self.d(d + 1), self.d(d))
            if sq:
                r = min(sq)
                c = min(sq[r])
                raise ComplexError(f"d^2 != 0: entry ({r},{c}) from degree {d} is {A.to_str(sq[r][c])}")

    def __eq__(self, other):
        return (isinstance(other, ProjComplex) and other.algebra is self.algebra
                and self.terms == other.terms and self.diff == other.diff)

    def __hash__(self):
        return id(self)

    def __repr__(self):
        parts = []
        for d in self.degrees():
            parts.append(f"{d}:{self.term(d)}")
        return "ProjComplex(" + " ".join(parts) + ")"


def make_complex(A, summands, differentials=None):
    return ProjComplex(A, summands, differentials or {})


def zero_complex(A):
    return ProjComplex(A, {}, {})


def stalk(A, i, degree=0):
    return ProjComplex(A, {degree: [i]}, {})


def shift(X, k):
    if k == 0:
        return X
    sign = -X.algebra.field.one if k % 2 else X.algebra.field.one
    terms = {d - k: t for d, t in X.terms.items()}
    diff = {d - k: mat_scale(sign, M) for d, M in X.diff.items()}
    return ProjComplex(X.algebra, terms, diff, check=False)


def direct_sum(Xs):
    """Direct sum with summand order X_0, X_1, ...; also returns per-degree offsets."""
    Xs = list(Xs)
    A = Xs[0].algebra
    degs = set()
    for X in Xs:
        degs.update(X.terms)
    terms, diff, offsets = {}, {}, []
    for d in degs:
        terms[d] = []
    for X in Xs:
        off = {d: len(terms[d]) for d in degs}
        offsets.append(off)
        for d, t in X.terms.items():
            terms[d].extend(t)
    for idx, X in enumerate(Xs):
        off = offsets[idx]
        for d, M in X.diff.items():
            tgt = diff.setdefault(d, {})
            for r, row in M.items():
                tgt.setdefault(r + off.get(d + 1, 0), {}).update(
                    {c + off[d]: v for c, v in row.items()})
    return ProjComplex(A, terms, diff, check=False), offsets


def oplus(*Xs):
    return direct_sum(Xs)[0]


def k0_class(X):
    """Alternating count of summands per isomorphism class of indecomposable projective."""
    A = X.algebra
    pos = {c: k for k, c in enumerate(A.class_reps)}
    vec = [0] * len(A.class_reps)
    for d, t in X.terms.items():
        sign = -1 if d % 2 else 1
        for i in t:
            vec[pos[A.iso_class[i]]] += sign
    return tuple(vec)


def class_profile(X):
    A = X.algebra
    return {d: sorted(A.iso_class[i] for i in t) for d, t in X.terms.items()}


def is_minimal(X):
    A = X.algebra
    for d, M in X.diff.items():
        src, tgt = X.term(d), X.term(d + 1)
        for r, row in M.items():
            for c, v in row.items():
                if A.scalar_part(v, src[c], tgt[r]) != 0:
                    return False
    return True


# ---------------------------------------------------------------------------
# graded maps

class ChainMap:
    """A map of degree ``shift``: comps[d] sends X_d to Y_{d+shift}."""

    def __init__(self, src, tgt, comps, shift=0, check=True):
        self.src = src
        self.tgt = tgt
        self.shift = shift
        self.comps = {}
        for d, M in comps.items():
            M = mat_clean(M)
            if M:
                self.comps[int(d)] = M
        if check:
            self.validate()

    @property
    def algebra(self):
        return self.src.algebra

    def comp(self, d):
        return self.comps.get(d, {})

    def validate(self):
        A = self.algebra
        for d, M in self.comps.items():
            s, t = self.src.term(d), self.tgt.term(d + self.shift)
            for r, row in M.items():
                if not 0 <= r < len(t):
                    raise ComplexError(f"map row {r} out of range in degree {d}")
                for c, v in row.items():
                    if not 0 <= c < len(s):
                        raise ComplexError(f"map column {c} out of range in degree {d}")
                    if not A.in_corner(v, s[c], t[r]):
                        raise ComplexError(f"map entry ({r},{c}) in degree {d} has wrong end points")

    def compose(self, other):
        """self o other."""
        A = self.algebra
        comps = {}
        for d, M in other.comps.items():
            N = self.comp(d + other.shift)
            if N:
                comps[d] = mat_mul(A, N, M)
        return ChainMap(other.src, self.tgt, comps, self.shift + other.shift, check=False)

    def __add__(self, other):
        return self.plus(other)

    def plus(self, other, c=None):
        if other.shift != self.shift:
            raise ValueError("degree mismatch")
        comps = {d: dict(M) for d, M in self.comps.items()}
        for d, M in other.comps.items():
            comps[d] = mat_add(comps.get(d, {}), M, c)
        return ChainMap(self.src, self.tgt, comps, self.shift, check=False)

    def __sub__(self, other):
        return self.plus(other, -self.algebra.field.one)

    def scaled(self, c):
        return ChainMap(self.src, self.tgt, {d: mat_scale(c, M) for d, M in self.comps.items()},
                        self.shift, check=False)

    def is_zero(self):
        return not self.comps

    def __eq__(self, other):
        return (isinstance(other, ChainMap) and self.shift == other.shift
                and self.comps == other.comps)

    def __hash__(self):
        return id(self)

    def defect(self):
        A = self.algebra
        X, Y, s = self.src, self.tgt, self.shift
        sign = -A.field.one if s % 2 else A.field.one
        comps = {}
        degs = set(self.comps) | {d + 1 for d in self.comps}
        for d in degs:
            left = mat_mul(A, Y.d(d - 1 + s), self.comp(d - 1))     # X_{d-1} -> Y_{d+s}
            right = mat_mul(A, self.comp(d), X.d(d - 1))             # X_{d-1} -> Y_{d+s}
            M = mat_add(left, right, -sign)
            if M:
                comps[d - 1] = M
        return ChainMap(X, Y, comps, s + 1, check=False)

    def is_chain(self):
        return self.defect().is_zero()

    def __repr__(self):
        return f"ChainMap(shift={self.shift}, degrees={sorted(self.comps)})"


def identity(X):
    return ChainMap(X, X, {d: mat_identity(X.algebra, t) for d, t in X.terms.items()}, check=False)


def zero_map(X, Y, s=0):
    return ChainMap(X, Y, {}, s, check=False)


def as_shifted(f):
    """The degree-0 chain map X -> Y[s] with the same matrices as a degree-s map f."""
    return ChainMap(f.src, shift(f.tgt, f.shift), f.comps, 0, check=False)


def differential_as_map(X):
    """d viewed as a degree-1 map X -> X."""
    return ChainMap(X, X, X.diff, 1, check=False)


# ---------------------------------------------------------------------------
# linear structure of the space of graded maps

class GradedSpace:
    """Coordinates on the space of degree-s module maps X -> Y."""

    def __init__(self, X, Y, s):
        self.X, self.Y, self.s = X, Y, s
        A = X.algebra
        self.coords = []
        self.index = {}
        for d in X.degrees():
            src = X.term(d)
            tgt = Y.term(d + s)
            for r, y in enumerate(tgt):
                for c, x in enumerate(src):
                    for b in A.corners[(x, y)]:
                        self.index[(d, r, c, b)] = len(self.coords)
                        self.coords.append((d, r, c, b))

    def __len__(self):
        return len(self.coords)

    def vec(self, f):
        out = {}
        for d, M in f.comps.items():
            for r, row in M.items():
                for c, v in row.items():
                    for b, x in v.items():
                        out[self.index[(d, r, c, b)]] = x
        return out

    def map(self, x):
        comps = {}
        for k, v in (x.items() if isinstance(x, dict) else enumerate(x)):
            if v == 0:
                continue
            d, r, c, b = self.coords[k]
            comps.setdefault(d, {}).setdefault(r, {}).setdefault(c, {})[b] = v
        return ChainMap(self.X, self.Y, comps, self.s, check=False)

    def basis_map(self, k):
        d, r, c, b = self.coords[k]
        A = self.X.algebra
        return ChainMap(self.X, self.Y, {d: {r: {c: {b: A.field.one}}}}, self.s, check=False)


def defect_columns(space, target, sign=None):
    """Sparse columns of D on the basis of ``space``, in the coordinates of ``target``.

    With ``sign`` given the operator is h -> d h - sign * h d instead.
    """
    X, Y, s = space.X, space.Y, space.s
    A = X.algebra
    F = A.field
    if sign is None:
        sign = -F.one if s % 2 else F.one
    cols = []
    for (d, r, c, b) in space.coords:
        col = {}
        bb = {b: F.one}
        # d_Y after the entry
        for r2, row in Y.d(d + s).items():
            a = row.get(r)
            if a is None:
                continue
            for k, v in A.mul(a, bb).items():
                j = target.index[(d, r2, c, k)]
                col[j] = col.get(j, F.zero) + v
        # the entry after d_X, with sign -(-1)^s
        for c2, a in X.d(d - 1).get(c, {}).items():
            for k, v in A.mul(bb, a).items():
                j = target.index[(d - 1, r, c2, k)]
                col[j] = col.get(j, F.zero) - sign * v
        cols.append({j: v for j, v in col.items() if v != 0})
    return cols


class HomK:
    """Hom in the homotopy category from X to Y[s], with chain-map representatives."""

    def __init__(self, X, Y, s):
        self.X, self.Y, self.s = X, Y, s
        F = X.algebra.field
        self.space = GradedSpace(X, Y, s)
        up = GradedSpace(X, Y, s + 1)
        self.down = GradedSpace(X, Y, s - 1)
        n = len(self.space)
        if n == 0:
            self.boundaries = []
            self.reps = []
            self.rep_vecs = []
            self.cycles = []
            return
        Dcols = defect_columns(self.space, up)
        Dmat = linalg.from_columns(F, len(up), Dcols)
        cycles = linalg.kernel(F, Dmat) if len(up) else [
            [F.one if i == j else F.zero for i in range(n)] for j in range(n)]
        cycles = [{i: v for i, v in enumerate(z) if v != 0} for z in cycles]
        self.cycles = cycles
        bnd = [c for c in defect_columns(self.down, self.space) if c]
        if bnd:
            bnd = [bnd[i] for i in linalg.independent_columns(F, n, bnd)]
        self.boundaries = bnd
        piv = linalg.independent_columns(F, n, bnd + cycles)
        self.rep_vecs = [cycles[j - len(bnd)] for j in piv if j >= len(bnd)]
        self.reps = [self.space.map(v) for v in self.rep_vecs]

    @property
    def dim(self):
        return len(self.reps)

    def combination(self, coeffs):
        F = self.X.algebra.field
        out = {}
        for c, v in zip(coeffs, self.rep_vecs):
            axpy(out, F(c), v)
        return self.space.map(out)

    def coordinates(self, f):
        """Coordinates of the class of the chain map f in the representative basis (None if f is not a chain map)."""
        if f.shift != self.s:
            raise ValueError("degree mismatch")
        F = self.X.algebra.field
        if not f.is_chain():
            return None
        if not self.reps:
            return []
        v = self.space.vec(f)
        M = linalg.from_columns(F, len(self.space), self.boundaries + self.rep_vecs)
        x = linalg.solve(F, M, v)
        if x is None:
            raise ArithmeticError("cycle not in span of boundaries and representatives")
        return x[len(self.boundaries):]

    def is_null(self, f):
        c = self.coordinates(f)
        return c is not None and all(v == 0 for v in c)


def hom_k(X, Y, s=0):
    key = (id(Y), s)
    hit = X._cache.get(key)
    if hit is not None and hit[0] is Y:
        return hit[1]
    H = HomK(X, Y, s)
    X._cache[key] = (Y, H)
    return H


def null_homotopy_witness(f):
    """A map h of degree s-1 with D(h) = f, or None."""
    X, Y = f.src, f.tgt
    F = X.algebra.field
    if not f.is_chain():
        return None
    space = GradedSpace(X, Y, f.shift)
    down = GradedSpace(X, Y, f.shift - 1)
    v = space.vec(f)
    if not v:
        return zero_map(X, Y, f.shift - 1)
    if len(down) == 0:
        return None
    M = linalg.from_columns(F, len(space), defect_columns(down, space))
    x = linalg.solve(F, M, v)
    if x is None:
        return None
    h = down.map(x)
    assert (h.defect() - f).is_zero()
    return h


def homotopic(f, g):
    return null_homotopy_witness(f - g) is not None


def random_chain_map(X, Y, rng, s=0, bound=3):
    """A random cycle of degree s (not reduced modulo boundaries)."""
    H = hom_k(X, Y, s)
    F = X.algebra.field
    out = {}
    for z in H.cycles:
        axpy(out, F.random(rng, bound), z)
    return H.space.map(out)


# ---------------------------------------------------------------------------
# cones

def cone(f):
    """Cone of a degree-0 chain map with the triangle maps Y -> cone -> X[1]."""
    if f.shift != 0:
        raise ValueError("cone needs a degree-0 map")
    if not f.is_chain():
        raise ComplexError("cone of a non-chain map")
    X, Y = f.src, f.tgt
    A = X.algebra
    minus = -A.field.one
    degs = {d - 1 for d in X.terms} | set(Y.terms)
    terms = {d: X.term(d + 1) + Y.term(d) for d in degs}
    diff = {}
    for d in degs:
        nx = len(X.term(d + 1))
        nx1 = len(X.term(d + 2))
        M = {}
        for r, row in X.d(d + 1).items():
            M.setdefault(r, {}).update({c: scale(minus, v) for c, v in row.items()})
        for r, row in f.comp(d + 1).items():
            M.setdefault(nx1 + r, {}).update({c: v for c, v in row.items()})
        for r, row in Y.d(d).items():
            M.setdefault(nx1 + r, {}).update({nx + c: v for c, v in row.items()})
        if M:
            diff[d] = M
    C = ProjComplex(A, terms, diff, check=False)
    inc = {}
    proj = {}
    for d in degs:
        nx = len(X.term(d + 1))
        ny = len(Y.term(d))
        if ny:
            inc[d] = {nx + k: {k: A.e(p)} for k, p in enumerate(Y.term(d))}
        if nx:
            proj[d] = {k: {k: A.e(p)} for k, p in enumerate(X.term(d + 1))}
    X1 = shift(X, 1)
    return C, ChainMap(Y, C, inc, check=False), ChainMap(C, X1, proj, check=False)


# ---------------------------------------------------------------------------
# minimal models

def _find_pivot(X):
    A = X.algebra
    for d in sorted(X.diff):
        src, tgt = X.term(d), X.term(d + 1)
        for r, row in sorted(X.diff[d].items()):
            for c, v in sorted(row.items()):
                if A.scalar_part(v, src[c], tgt[r]) != 0:
                    return d, r, c
    return None


def _eliminate(X, d, r, c):
    """Cancel the invertible entry (r, c) of d_d; returns (X', to, from)."""
    A = X.algebra
    minus = -A.field.one
    Md = X.d(d)
    src, tgt = X.term(d), X.term(d + 1)
    phinv = A.invert_in_corner(Md[r][c], src[c], tgt[r])
    keep_c = [k for k in range(len(src)) if k != c]
    keep_r = [k for k in range(len(tgt)) if k != r]
    new_c = {k: j for j, k in enumerate(keep_c)}
    new_r = {k: j for j, k in enumerate(keep_r)}
    terms = dict(X.terms)
    terms[d] = [src[k] for k in keep_c]
    terms[d + 1] = [tgt[k] for k in keep_r]
    diff = dict(X.diff)
    # gamma phi^{-1} for each surviving row
    gphi = {}
    for k2 in keep_r:
        g = Md.get(k2, {}).get(c)
        if g:
            gphi[k2] = A.mul(g, phinv)
    delta = Md.get(r, {})
    newd = {}
    for k2 in keep_r:
        row = {}
        for k, v in Md.get(k2, {}).items():
            if k != c:
                row[new_c[k]] = dict(v)
        if k2 in gphi:
            for k, dv in delta.items():
                if k == c:
                    continue
                corr = A.mul(gphi[k2], dv)
                row[new_c[k]] = add(row.get(new_c[k], {}), scale(minus, corr))
        if row:
            newd[new_r[k2]] = row
    diff[d] = newd
    prev = X.d(d - 1)
    diff[d - 1] = {new_c[k]: dict(row) for k, row in prev.items() if k != c}
    nxt = X.d(d + 1)
    diff[d + 1] = {k: {new_r[j]: v for j, v in row.items() if j != r} for k, row in nxt.items()}
    Xn = ProjComplex(A, terms, diff, check=False)

    to = {}
    frm = {}
    for e, t in X.terms.items():
        if e == d:
            to[e] = {new_c[k]: {k: A.e(src[k])} for k in keep_c}
            fr = {k: {new_c[k]: A.e(src[k])} for k in keep_c}
            row_c = {}
            for k, dv in delta.items():
                if k != c:
                    row_c[new_c[k]] = scale(minus, A.mul(phinv, dv))
            if row_c:
                fr[c] = row_c
            frm[e] = fr
        elif e == d + 1:
            tt = {}
            for k2 in keep_r:
                row = {k2: A.e(tgt[k2])}
                if k2 in gphi:
                    row[r] = scale(minus, gphi[k2])
                tt[new_r[k2]] = row
            to[e] = tt
            frm[e] = {k2: {new_r[k2]: A.e(tgt[k2])} for k2 in keep_r}
        else:
            to[e] = mat_identity(A, t)
            frm[e] = mat_identity(A, t)
    return Xn, ChainMap(X, Xn, to, check=False), ChainMap(Xn, X, frm, check=False)


def minimal_model(X):
    """(X_min, to_min, from_min) with to_min o from_min = Id strictly and from_min o to_min homotopic to Id."""
    cur = X
    to = identity(X)
    frm = identity(X)
    while True:
        piv = _find_pivot(cur)
        if piv is None:
            break
        cur, t, f = _eliminate(cur, *piv)
        to = t.compose(to)
        frm = frm.compose(f)
    # rebuild so that the minimal complex is a fresh, validated object
    Xm = ProjComplex(X.algebra, cur.terms, cur.diff)
    to = ChainMap(X, Xm, to.comps, check=False)
    frm = ChainMap(Xm, X, frm.comps, check=False)
    return Xm, to, frm


# ---------------------------------------------------------------------------
# invertibility and homotopy equivalence

def reduction(f_d, src, tgt, A):
    """Per iso class, the scalar matrix of f_d modulo the radical: {class: (rows, cols, entries)}."""
    out = {}
    for cls in A.class_reps:
        rows = [r for r, y in enumerate(tgt) if A.iso_class[y] == cls]
        cols = [c for c, x in enumerate(src) if A.iso_class[x] == cls]
        if not rows and not cols:
            continue
        ent = [[A.scalar_part(f_d.get(r, {}).get(c, {}), src[c], tgt[r]) for c in cols] for r in rows]
        out[cls] = (rows, cols, ent)
    return out


def degree_invertible(f, d):
    A = f.algebra
    src, tgt = f.src.term(d), f.tgt.term(d + f.shift)
    F = A.field
    for cls, (rows, cols, ent) in reduction(f.comp(d), src, tgt, A).items():
        if len(rows) != len(cols):
            return False
        M = F.matrix(len(rows), len(cols), [v for row in ent for v in row])
        if linalg.rank(M) < len(rows):
            return False
    return True


def invert_module_map(A, M, src, tgt):
    """Inverse of the module map M: (+P_src) -> (+P_tgt), by an exact linear solve; None if not invertible."""
    F = A.field
    # unknown g: tgt -> src
    coords = []
    index = {}
    for r, x in enumerate(src):
        for c, y in enumerate(tgt):
            for b in A.corners[(y, x)]:
                index[(r, c, b)] = len(coords)
                coords.append((r, c, b))
    # M g = Id_tgt: equation coordinates (r', c, b') for r' in tgt
    eq_index = {}
    for r2, y2 in enumerate(tgt):
        for c, y in enumerate(tgt):
            for b in A.corners[(y, y2)]:
                eq_index[(r2, c, b)] = len(eq_index)
    cols = []
    for (r, c, b) in coords:
        col = {}
        for r2, row in M.items():
            a = row.get(r)
            if a is None:
                continue
            for k, v in A.mul(a, {b: F.one}).items():
                j = eq_index[(r2, c, k)]
                col[j] = col.get(j, F.zero) + v
        cols.append({j: v for j, v in col.items() if v != 0})
    rhs = {}
    for c, y in enumerate(tgt):
        rhs[eq_index[(c, c, A.idempotents[y])]] = F.one
    if not coords:
        return {} if not tgt else None
    x = linalg.solve(F, linalg.from_columns(F, len(eq_index), cols), rhs)
    if x is None:
        return None
    G = {}
    for k, v in enumerate(x):
        if v != 0:
            r, c, b = coords[k]
            G.setdefault(r, {}).setdefault(c, {})[b] = v
    if mat_mul(A, G, M) != mat_identity(A, src):
        return None
    return G


def strict_inverse(f):
    """Degreewise inverse of a degree-0 chain map, or None."""
    A = f.algebra
    comps = {}
    degs = set(f.src.terms) | set(f.tgt.terms)
    for d in degs:
        src, tgt = f.src.term(d), f.tgt.term(d)
        G = invert_module_map(A, f.comp(d), src, tgt)
        if G is None:
            return None
        if G:
            comps[d] = G
    return ChainMap(f.tgt, f.src, comps, check=False)


class Equivalence:
    def __init__(self, ok, forward=None, backward=None, certified=True, reason=""):
        self.ok = ok
        self.forward = forward
        self.backward = backward
        self.certified = certified
        self.reason = reason

    def __bool__(self):
        return bool(self.ok)

    def __repr__(self):
        return f"Equivalence(ok={self.ok}, certified={self.certified}, reason={self.reason!r})"


def _candidate_iso(H, rng, tries, exhaustive_limit):
    F = H.X.algebra.field
    dim = H.dim
    if F.p and F.p ** dim <= exhaustive_limit:
        import itertools
        for coeffs in itertools.product(range(F.p), repeat=dim):
            yield [F(c) for c in coeffs], True
        return
    for _ in range(tries):
        yield [F.random(rng, 10 ** 6) for _ in range(dim)], False


def default_tries(F):
    """Random combinations to try; small fields give invertible ones less often."""
    return 6 if F.p == 0 or F.p > 50 else 48


def minimal_iso(Xm, Ym, rng=None, tries=None, exhaustive_limit=4096):
    """Search for a chain isomorphism between minimal complexes."""
    if class_profile(Xm) != class_profile(Ym):
        return Equivalence(False, reason="summands of minimal models differ")
    if Xm.is_zero():
        return Equivalence(True, zero_map(Xm, Ym), zero_map(Ym, Xm))
    rng = rng or _random.Random(0)
    H = hom_k(Xm, Ym, 0)
    if H.dim == 0:
        return Equivalence(False, reason="no chain maps")
    exhaustive = False
    tries = tries or default_tries(Xm.algebra.field)
    for coeffs, exhaustive in _candidate_iso(H, rng, tries, exhaustive_limit):
        f = H.combination(coeffs)
        if all(degree_invertible(f, d) for d in Xm.terms):
            g = strict_inverse(f)
            if g is None:
                continue
            return Equivalence(True, f, g)
    return Equivalence(False, certified=exhaustive,
                       reason="no degreewise invertible chain map found"
                       + ("" if exhaustive else " among random combinations"))


def homotopy_equivalent(X, Y, rng=None, tries=None):
    """Decide X ~ Y through minimal models; a positive answer carries maps X -> Y -> X."""
    if X.algebra is not Y.algebra:
        raise ValueError("complexes over different algebras")
    if k0_class(X) != k0_class(Y):
        return Equivalence(False, reason="K0 classes differ")
    Xm, tx, fx = minimal_model(X)
    Ym, ty, fy = minimal_model(Y)
    res = minimal_iso(Xm, Ym, rng, tries)
    if not res.ok:
        return res
    fwd = fy.compose(res.forward).compose(tx)
    bwd = fx.compose(res.backward).compose(ty)
    return Equivalence(True, fwd, bwd)


def is_homotopy_iso(f):
    """True iff the degree-0 chain map f is invertible in the homotopy category."""
    if f.shift != 0 or not f.is_chain():
        return False
    X, Y = f.src, f.tgt
    Xm, tx, fx = minimal_model(X)
    Ym, ty, fy = minimal_model(Y)
    g = ty.compose(f).compose(fx)
    if class_profile(Xm) != class_profile(Ym):
        return False
    return all(degree_invertible(g, d) for d in Xm.terms)


# ---------------------------------------------------------------------------
# idempotents

def split_idempotent(X, e, max_iter=None):
    """Split a homotopy idempotent: returns (N, iota, pi) with pi iota = Id_N and iota pi ~ e."""
    A = X.algebra
    F = A.field
    if e.shift != 0 or not e.is_chain():
        raise ValueError("e must be a degree-0 chain map")
    Xm, to, frm = minimal_model(X)
    em = to.compose(e).compose(frm)
    limit = max_iter or max(4, Xm.rank() ** 2)
    three, two = F(3), F(2)
    for _ in range(limit):
        e2 = em.compose(em)
        if e2 == em:
            break
        e3 = e2.compose(em)
        em = e2.scaled(three) - e3.scaled(two)
    else:
        raise ArithmeticError("idempotent lifting did not converge")
    iota_c, pi_c, terms = {}, {}, {}
    for d, t in Xm.terms.items():
        E = em.comp(d)
        red = reduction(E, t, t, A)
        cols, rows = [], []
        for cls, (rr, cc, ent) in red.items():
            if not cc:
                continue
            colvecs = [{i: ent[i][j] for i in range(len(rr)) if ent[i][j] != 0} for j in range(len(cc))]
            jc = linalg.independent_columns(F, len(rr), colvecs)
            if not jc:
                continue
            sub = [{i: row[j] for i, j in enumerate(jc) if row[j] != 0} for row in ent]
            jr = linalg.independent_columns(F, len(jc), sub)
            cols.extend(cc[j] for j in jc)
            rows.extend(rr[i] for i in jr)
        if not cols:
            continue
        terms[d] = [t[k] for k in cols]
        incl = {k: {j: A.e(t[k])} for j, k in enumerate(cols)}
        proj = {j: {k: A.e(t[k])} for j, k in enumerate(rows)}
        iota = mat_mul(A, E, incl)
        pre = mat_mul(A, proj, E)
        M = mat_mul(A, pre, incl)
        src_terms = [t[k] for k in cols]
        tgt_terms = [t[k] for k in rows]
        Minv = invert_module_map(A, M, src_terms, tgt_terms)
        if Minv is None:
            raise ArithmeticError("split of idempotent failed")
        iota_c[d] = iota
        pi_c[d] = mat_mul(A, Minv, pre)
    N0 = ProjComplex(A, terms, {}, check=False)
    diff = {}
    for d in terms:
        if d + 1 in terms:
            M = mat_mul(A, pi_c[d + 1], mat_mul(A, Xm.d(d), iota_c[d]))
            if M:
                diff[d] = M
    N = ProjComplex(A, terms, diff)
    iota = ChainMap(N, Xm, iota_c, check=False)
    pi = ChainMap(Xm, N, pi_c, check=False)
    if not (pi.compose(iota) == identity(N)):
        raise ArithmeticError("pi iota != Id")
    if not (iota.compose(pi) == em):
        raise ArithmeticError("iota pi != e")
    if not (iota.is_chain() and pi.is_chain()):
        raise ArithmeticError("split maps are not chain maps")
    del N0
    return N, frm.compose(iota), pi.compose(to)


# ---------------------------------------------------------------------------
# the group action and the pushdown

def twist(X, p, action):
    """^{g^p}X: summand e_i -> e_{nu^p(i)}, entries -> nu^p(entry)."""
    p %= action.n
    if p == 0:
        return X
    nu = action.pow[p]
    terms = {d: [action.vertex(p, i) for i in t] for d, t in X.terms.items()}
    diff = {d: mat_apply_map(nu, M) for d, M in X.diff.items()}
    return ProjComplex(X.algebra, terms, diff, check=False)


def twist_map(f, p, action, src=None, tgt=None):
    p %= action.n
    if p == 0 and src is None and tgt is None:
        return f
    nu = action.pow[p]
    src = src or twist(f.src, p, action)
    tgt = tgt or twist(f.tgt, p, action)
    return ChainMap(src, tgt, {d: mat_apply_map(nu, M) for d, M in f.comps.items()}, f.shift, check=False)


def twist_identification(X, p, q, action):
    """Identity chain map twist(twist(X, p), q) -> twist(X, p + q) (the two are equal as data)."""
    a = twist(twist(X, p, action), q, action)
    b = twist(X, p + q, action)
    if a != b:
        raise ArithmeticError("twists do not compose")
    return ChainMap(a, b, identity(a).comps, check=False)


def pushdown(X, O):
    """P_* X over the orbit algebra O: e_i -> Pe_i, entries u -> P(u)."""
    terms = dict(X.terms)
    diff = {d: {r: {c: O.embed(0, v) for c, v in row.items()} for r, row in M.items()}
            for d, M in X.diff.items()}
    return ProjComplex(O, terms, diff, check=False)


def pushdown_map(f, O, src=None, tgt=None):
    src = src or pushdown(f.src, O)
    tgt = tgt or pushdown(f.tgt, O)
    comps = {d: {r: {c: O.embed(0, v) for c, v in row.items()} for r, row in M.items()}
             for d, M in f.comps.items()}
    return ChainMap(src, tgt, comps, f.shift, check=False)


def s_bullet(Y, l, O, src=None, tgt=None):
    """s_{*, g^l, Y}: P_* twist(Y, l) -> P_* Y, diagonal with entries (l, e_{nu^l y})."""
    act = O.action
    A = O.base
    src = src or pushdown(twist(Y, l, act), O)
    tgt = tgt or pushdown(Y, O)
    comps = {}
    for d, t in Y.terms.items():
        comps[d] = {k: {k: O.embed(l, A.e(act.vertex(l, y)))} for k, y in enumerate(t)}
    return ChainMap(src, tgt, comps, check=False)


def decompose_52(f, X, Y, O):
    """{l: f_l} with f_l: X -> twist(Y, l) and f = sum_l s_{*,g^l,Y} o P_*(f_l)."""
    act = O.action
    parts = {}
    for d, M in f.comps.items():
        for r, row in M.items():
            for c, v in row.items():
                for b, x in v.items():
                    l, w = O.split(b)
                    parts.setdefault(l, {}).setdefault(d, {}).setdefault(r, {}).setdefault(c, {})[w] = x
    out = {}
    for l in range(O.n):
        tw = twist(Y, l, act)
        out[l] = ChainMap(X, tw, parts.get(l, {}), f.shift)
    PX, PY = f.src, f.tgt
    total = zero_map(PX, PY, f.shift)
    for l, fl in out.items():
        piece = s_bullet(Y, l, O, tgt=PY).compose(pushdown_map(fl, O, src=PX))
        total = total + piece
    if total != f:
        raise ArithmeticError("decomposition does not reconstruct the map")
    return out


# ---------------------------------------------------------------------------
# random test objects

def random_corner_element(A, i, j, rng, bound=3):
    F = A.field
    out = {}
    for b in A.corners[(i, j)]:
        c = F.random(rng, bound)
        if c != 0:
            out[b] = c
    return out


def random_piece(A, rng):
    r = len(A.idempotents)
    kind = rng.randrange(3)
    deg = rng.randint(-1, 1)
    if kind == 0:
        return stalk(A, rng.randrange(r), deg)
    b = rng.randrange(A.dim)
    i, j = A.source[b], A.target[b]
    u = random_corner_element(A, i, j, rng)
    if not u:
        u = A.basis(b)
    if kind == 1:
        return ProjComplex(A, {deg: [i], deg + 1: [j]}, {deg: {0: {0: u}}})
    for _ in range(6):
        b2 = rng.randrange(A.dim)
        if A.source[b2] != j:
            continue
        v = A.basis(b2)
        if A.mul(v, u) == {}:
            k = A.target[b2]
            return ProjComplex(A, {deg - 1: [i], deg: [j], deg + 1: [k]},
                               {deg - 1: {0: {0: u}}, deg: {0: {0: v}}})
    return ProjComplex(A, {deg: [i], deg + 1: [j]}, {deg: {0: {0: u}}})


def random_complex(A, rng=None, pieces=2, with_cone=True):
    rng = rng or _random.Random(0)
    X = oplus(*[random_piece(A, rng) for _ in range(pieces)])
    if with_cone and rng.random() < 0.5:
        Y = random_piece(A, rng)
        f = random_chain_map(Y, X, rng)
        X = cone(f)[0]
    return X

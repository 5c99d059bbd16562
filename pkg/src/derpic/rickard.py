"""The standard equivalence F_theta attached to tilting data.

A complex U over B becomes a bicomplex V: column b is the direct sum of the
images X_j over the summands e_j of U_b, tau_0 is the internal differential
and tau_1 = (-1)^(a+b) theta(d_U) on V_{a,b}.  Since theta is multiplicative
only up to homotopy, tau_1 squares to zero only up to homotopy; the higher
maps tau_l (from column b to b+l, internal degree 1-l) are found by exact
linear solves of

    tau_0 tau_l + tau_l tau_0 = - sum_{0<i<l} tau_i tau_{l-i},

and F_theta(U) is the total complex.  Maps are lifted in the same way.
"""

from . import linalg
from .homotopy import (ChainMap, GradedSpace, ProjComplex, defect_columns,
                       direct_sum, twist, twist_map, zero_complex,
                       zero_map)
from .tilting import Adjuster, GEquivalenceDatum, TiltingFunctorData


class LiftError(ArithmeticError):
    pass


class Bicomplex:
    """Columns C_b (complexes over A) with maps tau[l][b]: C_b -> C_{b+l} of degree 1-l (l >= 1)."""

    def __init__(self, algebra, columns, taus):
        self.algebra = algebra
        self.columns = {b: C for b, C in columns.items() if not C.is_zero()}
        self.taus = taus

    def col(self, b):
        C = self.columns.get(b)
        return C if C is not None else zero_complex(self.algebra)

    @property
    def span(self):
        if not self.columns:
            return 0
        return max(self.columns) - min(self.columns)

    def tau(self, l, b):
        if l == 0:
            C = self.col(b)
            return ChainMap(C, C, C.diff, 1, check=False)
        f = self.taus.get(l, {}).get(b)
        if f is None:
            return zero_map(self.col(b), self.col(b + l), 1 - l)
        return f

    def level_defect(self, l, b):
        """sum_{i=0}^{l} tau_i tau_{l-i} starting at column b."""
        out = zero_map(self.col(b), self.col(b + l), 2 - l)
        for i in range(l + 1):
            g = self.tau(i, b + l - i).compose(self.tau(l - i, b))
            out = out + ChainMap(out.src, out.tgt, g.comps, g.shift, check=False)
        return out

    def check_levels(self):
        """The first (l, b) at which the level identity fails, or None."""
        for l in range(self.span + 2):
            for b in list(self.columns):
                if not self.level_defect(l, b).is_zero():
                    return (l, b)
        return None


class LiftedMap:
    """alpha[i][b]: C_b -> C'_{b+i} of internal degree -i."""

    def __init__(self, src, tgt, alphas):
        self.src = src
        self.tgt = tgt
        self.alphas = alphas

    def alpha(self, i, b):
        f = self.alphas.get(i, {}).get(b)
        if f is None:
            return zero_map(self.src.col(b), self.tgt.col(b + i), -i)
        return f

    def level_defect(self, l, b):
        """sum_i alpha_i tau_{l-i} - sum_i tau'_i alpha_{l-i} from column b."""
        out = zero_map(self.src.col(b), self.tgt.col(b + l), 1 - l)
        for i in range(l + 1):
            g = self.alpha(i, b + l - i).compose(self.src.tau(l - i, b))
            h = self.tgt.tau(i, b + l - i).compose(self.alpha(l - i, b))
            diff = g.comps and h.comps and (g - h) or (g if g.comps else h.scaled(-self.src.algebra.field.one))
            out = out + ChainMap(out.src, out.tgt, diff.comps, 1 - l, check=False)
        return out


def _solve_operator(C, D, s, rhs, sign, permute=None):
    """h: C -> D of degree s with d_D h - sign * h d_C = rhs (rhs of degree s+1)."""
    F = C.algebra.field
    space = GradedSpace(C, D, s)
    target = GradedSpace(C, D, s + 1)
    v = target.vec(rhs)
    if not v:
        return zero_map(C, D, s)
    if not len(space):
        return None
    cols = defect_columns(space, target, sign)
    order = list(range(len(cols)))
    if permute is not None:
        permute.shuffle(order)
    M = linalg.from_columns(F, len(target), [cols[k] for k in order])
    x = linalg.solve(F, M, v)
    if x is None:
        return None
    sol = {order[k]: c for k, c in enumerate(x) if c != 0}
    return space.map(sol)


def lift_tau(algebra, columns, tau1, permute=None):
    """Complete (columns, tau_0, tau_1) to a bicomplex by solving for tau_2, tau_3, ..."""
    F = algebra.field
    B = Bicomplex(algebra, columns, {1: dict(tau1)})
    for b in B.columns:
        if not B.level_defect(1, b).is_zero():
            raise LiftError(f"tau_0 tau_1 + tau_1 tau_0 != 0 at column {b}")
    for l in range(2, B.span + 1):
        B.taus[l] = {}
        for b in sorted(B.columns):
            if b + l not in B.columns:
                continue
            rhs = B.level_defect(l, b)            # tau_l is still zero here
            if rhs.is_zero():
                continue
            C, D = B.col(b), B.col(b + l)
            h = _solve_operator(C, D, 1 - l, rhs.scaled(-F.one), -F.one, permute)
            if h is None:
                raise LiftError(f"level {l} is obstructed at column {b}")
            B.taus[l][b] = h
    return B


def lift_map(src, tgt, alpha0, permute=None):
    """Extend alpha_0 (per column, degree 0) to a map of bicomplexes."""
    F = src.algebra.field
    L = LiftedMap(src, tgt, {0: dict(alpha0)})
    cols = sorted(src.columns)
    for b in cols:
        if not L.level_defect(0, b).is_zero():
            raise LiftError(f"alpha_0 is not a chain map at column {b}")
    top = max(list(src.columns) + list(tgt.columns) or [0]) - min(list(src.columns) + list(tgt.columns) or [0])
    for l in range(1, top + 1):
        L.alphas[l] = {}
        for b in cols:
            if b + l not in tgt.columns:
                continue
            rhs = L.level_defect(l, b)             # alpha_l is still zero here
            if rhs.is_zero():
                continue
            # alpha_l tau_0 - tau'_0 alpha_l = -rhs, i.e. d' h - h d = rhs
            C, D = src.col(b), tgt.col(b + l)
            h = _solve_operator(C, D, -l, rhs, F.one, permute)
            if h is None:
                raise LiftError(f"map level {l} is obstructed at column {b}")
            L.alphas[l][b] = h
    return L


def _tot_layout(Bc):
    """Per total degree n: list of (b, a) blocks in column order and the offsets."""
    layout = {}
    for b in sorted(Bc.columns):
        C = Bc.columns[b]
        for a in C.degrees():
            if C.term(a):
                layout.setdefault(a + b, []).append((b, a))
    offsets = {}
    terms = {}
    for n, blocks in layout.items():
        pos = 0
        terms[n] = []
        for b, a in blocks:
            offsets[(b, a)] = pos
            t = Bc.columns[b].term(a)
            terms[n].extend(t)
            pos += len(t)
    return terms, offsets


def _place(out, M, roff, coff):
    for r, row in M.items():
        dst = out.setdefault(r + roff, {})
        for c, v in row.items():
            dst[c + coff] = v


def tot(Bc):
    terms, offsets = _tot_layout(Bc)
    diff = {}
    for (b, a), coff in offsets.items():
        n = a + b
        for l in range(Bc.span + 1):
            f = Bc.tau(l, b)
            M = f.comp(a)
            if not M:
                continue
            roff = offsets[(b + l, a + f.shift)]
            _place(diff.setdefault(n, {}), M, roff, coff)
    X = ProjComplex(Bc.algebra, terms, diff, check=False)
    X.validate()
    X._layout = offsets
    return X


def tot_map(Lm, X=None, Y=None):
    X = X or tot(Lm.src)
    Y = Y or tot(Lm.tgt)
    so, to = X._layout, Y._layout
    comps = {}
    for (b, a), coff in so.items():
        n = a + b
        for i, per in Lm.alphas.items():
            f = per.get(b)
            if f is None:
                continue
            M = f.comp(a)
            if M:
                _place(comps.setdefault(n, {}), M, to[(b + i, a - i)], coff)
    return ChainMap(X, Y, comps, check=False)


def twist_bicomplex(Bc, p, action):
    cols = {b: twist(C, p, action) for b, C in Bc.columns.items()}
    taus = {l: {b: twist_map(f, p, action, src=cols[b], tgt=cols[b + l]) for b, f in per.items()}
            for l, per in Bc.taus.items()}
    return Bicomplex(Bc.algebra, cols, taus)


# ---------------------------------------------------------------------------
# F_theta

def _column(theta, terms):
    A = theta.target
    if not terms:
        return zero_complex(A), []
    return direct_sum([theta.images[p] for p in terms])


def _block_map(theta, M, src_terms, tgt_terms, C, D, so, to, signs=None):
    """theta applied entrywise to a matrix over B, as a map of columns."""
    comps = {}
    for r, row in M.items():
        for c, x in row.items():
            f = theta.apply(x, src_terms[c], tgt_terms[r])
            for a, N in f.comps.items():
                sgn = signs(a) if signs else None
                if sgn is not None and sgn != 1:
                    N = {rr: {cc: {k: -v for k, v in e.items()} for cc, e in rw.items()} for rr, rw in N.items()}
                roff = to[r].get(a, 0)
                coff = so[c].get(a, 0)
                _place(comps.setdefault(a, {}), N, roff, coff)
    return ChainMap(C, D, comps, check=False)


def bicomplex_of(theta, U, permute=None):
    """The lifted bicomplex of U; cached on U per theta unless a permutation is requested."""
    key = ("rickard", id(theta))
    if permute is None:
        hit = U._cache.get(key)
        if hit is not None and hit[0] is theta:
            return hit[1]
    cols, offs = {}, {}
    for b in U.degrees():
        cols[b], offs[b] = _column(theta, U.term(b))
    tau1 = {}
    for b, M in U.diff.items():
        sign_b = b

        def signs(a, sign_b=sign_b):
            return -1 if (a + sign_b) % 2 else 1
        tau1[b] = _block_map(theta, M, U.term(b), U.term(b + 1), cols[b], cols[b + 1],
                             offs[b], offs[b + 1], signs)
    Bc = lift_tau(theta.target, cols, tau1, permute)
    Bc.offsets = offs
    if permute is None:
        U._cache[key] = (theta, Bc)
    return Bc


def f_theta_object(theta, U, permute=None):
    key = ("rickard_tot", id(theta))
    if permute is None:
        hit = U._cache.get(key)
        if hit is not None and hit[0] is theta:
            return hit[1]
    X = tot(bicomplex_of(theta, U, permute))
    if permute is None:
        U._cache[key] = (theta, X)
    return X


def f_theta_map(theta, f, X=None, Y=None):
    """F_theta of a degree-0 chain map f: U -> U'."""
    if f.shift != 0:
        raise ValueError("f_theta_map needs a degree-0 chain map")
    U, V = f.src, f.tgt
    Bu, Bv = bicomplex_of(theta, U), bicomplex_of(theta, V)
    alpha0 = {}
    for b, M in f.comps.items():
        alpha0[b] = _block_map(theta, M, U.term(b), V.term(b), Bu.col(b), Bv.col(b),
                               Bu.offsets[b], Bv.offsets[b])
    L = lift_map(Bu, Bv, alpha0)
    return tot_map(L, X or f_theta_object(theta, U), Y or f_theta_object(theta, V))


# ---------------------------------------------------------------------------
# composing equivalence data

def compose_data(d1, d2):
    """(theta1, psi1) after (theta2, psi2): theta'' = F_theta1 o theta2, psi'' = eta F(psi2)."""
    th1, ps1 = d1.theta, d1.psi
    th2, ps2 = d2.theta, d2.psi
    if th2.target is not th1.source:
        raise ValueError("middle algebras differ")
    C = th2.source
    images = [f_theta_object(th1, X) for X in th2.images]
    morph = {}
    for c, f in th2.morphisms.items():
        i, j = C.source[c], C.target[c]
        morph[c] = f_theta_map(th1, f, images[i], images[j])
    theta = TiltingFunctorData(C, th1.target, images, morph)
    act_C, act_A = ps2.act_B, ps1.act_A
    comps = []
    for j in range(len(C.idempotents)):
        nj = act_C.vertex(1, j)
        V = th2.images[j]
        TV = ps2.comps[j].tgt                       # ^g V over the middle algebra
        Fpsi = f_theta_map(th1, ps2.comps[j], images[nj], f_theta_object(th1, TV))
        eta = twist_comparison(th1, ps1, V, TV)
        g = eta.compose(Fpsi)
        tgt = twist(images[j], 1, act_A)
        if eta.tgt != tgt:
            raise ArithmeticError("twisted total complex differs from twist of total complex")
        comps.append(ChainMap(images[nj], tgt, g.comps, check=False))
    return GEquivalenceDatum(theta, Adjuster(theta, act_C, act_A, comps))


def twist_comparison(theta, psi, V, TV):
    """eta_V: F(^g V) -> ^g F(V), lifted from psi on every summand."""
    act_A = psi.act_A
    Bt = bicomplex_of(theta, TV)
    Bv = bicomplex_of(theta, V)
    target = twist_bicomplex(Bv, 1, act_A)
    alpha0 = {}
    for b in TV.degrees():
        terms_t, terms_v = TV.term(b), V.term(b)
        C, D = Bt.col(b), target.col(b)
        comps = {}
        for k, (pt, pv) in enumerate(zip(terms_t, terms_v)):
            f = psi.comps[pv]                       # theta(nu pv) -> ^g theta(pv)
            for a, N in f.comps.items():
                _place(comps.setdefault(a, {}), N, Bv.offsets[b][k].get(a + f.shift, 0),
                       Bt.offsets[b][k].get(a, 0))
        alpha0[b] = ChainMap(C, D, comps, check=False)
    L = lift_map(Bt, target, alpha0)
    X = f_theta_object(theta, TV)
    Y = tot(target)
    return tot_map(L, X, Y)

"""Orbit algebras A/G for a cyclic group G = <g | g^n> acting through one automorphism.

The basis element ``(l, w)`` stands for ``s_{g^l} P(w)``.  As a G-equivariant
matrix family it has entries ``f[g + l][g] = nu^g(w)`` and zeros elsewhere,
and composing such families gives

    (l, u) * (l', v) = (l + l', nu^{l'}(u) * v).

If w goes from i to j, then (l, w) goes from Pe_i to Pe_{nu^{-l}(j)} and has
G-degree g^{-l}.
"""

from . import linalg
from .algebra import AlgebraMap, BasedAlgebra, axpy, is_local, verify_algebra_map


class CyclicAction:
    """The group Z_n acting on ``algebra`` with the generator acting by ``nu``."""

    def __init__(self, algebra, nu, n):
        self.algebra = algebra
        self.nu = nu
        self.n = n
        self.pow = [nu.power(0)]
        for _ in range(1, n + 1):
            self.pow.append(nu.compose(self.pow[-1]))
        if not self.pow[n].is_identity():
            raise ValueError(f"nu^{n} is not the identity")
        if nu.rank() != algebra.dim:
            raise ValueError("nu is not bijective")
        # action on idempotent positions
        self.perm = []
        for p in range(n):
            perm = self.pow[p].permutes_idempotents()
            if perm is None:
                raise ValueError("nu does not permute the basis idempotents")
            self.perm.append(perm)

    def apply(self, p, x):
        return self.pow[p % self.n](x)

    def vertex(self, p, i):
        """Position of nu^p(e_i)."""
        return self.perm[p % self.n][i]


class Inhomogeneous:
    def __repr__(self):
        return "Inhomogeneous"

    def __eq__(self, other):
        return isinstance(other, Inhomogeneous)

    def __hash__(self):
        return hash("Inhomogeneous")


INHOMOGENEOUS = Inhomogeneous()


class OrbitAlgebra(BasedAlgebra):
    def __init__(self, action):
        A = action.algebra
        n = action.n
        self.base = A
        self.action = action
        self.n = n
        d = A.dim
        labels = [(l, A.labels[w]) for l in range(n) for w in range(d)]
        nu_basis = [[action.pow[p].images[w] for w in range(d)] for p in range(n)]
        table = {}
        for l in range(n):
            for u in range(d):
                for l2 in range(n):
                    img = nu_basis[l2][u]
                    for v in range(d):
                        prod = A.mul(img, {v: A.field.one})
                        if prod:
                            off = ((l + l2) % n) * d
                            table[(l * d + u, l2 * d + v)] = {off + c: x for c, x in prod.items()}
        idems = list(A.idempotents)
        desc = {"kind": "orbit", "base": A.descriptor, "n": n}
        super().__init__(A.field, labels, table, idems, descriptor=desc)

    def elem_index(self, l, w):
        return (l % self.n) * self.base.dim + w

    def split(self, b):
        return divmod(b, self.base.dim)

    def embed(self, l, x):
        """s_{g^l} P(x) for an element x of the base algebra."""
        off = (l % self.n) * self.base.dim
        return {off + w: c for w, c in x.items()}

    def label_str(self, b):
        l, w = self.split(b)
        return f"s{l}.{self.base.label_str(w)}"


def make_orbit_algebra(action):
    return OrbitAlgebra(action)


def decompose_51(O, f):
    """{l: f_l} with f = sum_l s_{g^l} P(f_l)."""
    out = {}
    for b, c in f.items():
        l, w = O.split(b)
        out.setdefault(l, {})[w] = c
    return out


def compose_51(O, parts):
    out = {}
    for l, x in parts.items():
        axpy(out, O.field.one, O.embed(l, x))
    return out


# ---------------------------------------------------------------------------
# the matrix-family oracle

def matrix_family(O, f):
    """The G-equivariant family (f[h][g]) of an orbit element, keyed by (h, g)."""
    act = O.action
    fam = {}
    for l, x in decompose_51(O, f).items():
        for g in range(O.n):
            h = (g + l) % O.n
            fam[(h, g)] = act.apply(g, x)
    return fam


def family_product(O, fam1, fam2):
    """(f1 f2)[h][g] = sum_k f1[h][k] f2[k][g]."""
    A = O.base
    out = {}
    for (h, k), x in fam1.items():
        for (k2, g), y in fam2.items():
            if k2 != k:
                continue
            prod = A.mul(x, y)
            if prod:
                axpy(out.setdefault((h, g), {}), A.field.one, prod)
    return {key: v for key, v in out.items() if v}


def family_to_element(O, fam):
    """Read back an equivariant family from its column g = 0, after checking equivariance."""
    act = O.action
    parts = {}
    for (h, g), x in fam.items():
        if g == 0:
            parts[h] = x
    for (h, g), x in fam.items():
        want = act.apply(g, parts.get((h - g) % O.n, {}))
        if want != x:
            raise ArithmeticError("matrix family is not equivariant")
    return compose_51(O, parts)


def check_against_oracle(O, pairs=None):
    """Compare the closed-form product with family composition; returns the first mismatch or None."""
    if pairs is None:
        pairs = ((a, b) for a in range(O.dim) for b in range(O.dim))
    fams = {}
    for a, b in pairs:
        for x in (a, b):
            if x not in fams:
                fams[x] = matrix_family(O, O.basis(x))
        via_family = family_product(O, fams[a], fams[b])
        closed = matrix_family(O, O.mul(O.basis(a), O.basis(b)))
        if via_family != closed:
            return (a, b)
    return None


# ---------------------------------------------------------------------------
# grading

def g_degree(O, f):
    """Exponent d with f of degree g^d, or INHOMOGENEOUS.  The zero element gets degree 0."""
    degs = {(-O.split(b)[0]) % O.n for b in f}
    if not degs:
        return 0
    if len(degs) > 1:
        return INHOMOGENEOUS
    return degs.pop()


# ---------------------------------------------------------------------------
# the induced symmetric form

FORM_VARIANTS = ("k+l+1", "k+l")


def orbit_form(O, form, variant="k+l+1"):
    """The form <s_{g^k}Pa, s_{g^l}Pb> = delta(g^e = 1) <nu^l a, b> with e = k+l+1 or k+l."""
    shift = 1 if variant == "k+l+1" else 0
    A = O.base
    act = O.action
    rows = []
    for x in range(O.dim):
        k, a = O.split(x)
        row = {}
        for y in range(O.dim):
            l, b = O.split(y)
            if (k + l + shift) % O.n:
                continue
            v = form(A.mul(act.pow[l].images[a], {b: A.field.one}))
            if v != 0:
                row[y] = v
        rows.append(row)
    return rows


def chk_form(O, rows):
    """Symmetry, nondegeneracy and associativity of a Gram matrix given by sparse rows.

    Associativity <xy, z> = <x, yz> on all triples is equivalent to
    <x, y> = <xy, 1> on all pairs, which is what is tested.
    """
    F = O.field
    sym = all(rows[y].get(x, F.zero) == v for x in range(O.dim) for y, v in rows[x].items())
    if sym:
        sym = all(rows[x].get(y, F.zero) == v for y in range(O.dim) for x, v in rows[y].items())
    G = linalg.from_rows(F, O.dim, rows)
    nondeg = linalg.rank(G) == O.dim
    one = O.one()

    def pair(x, y):
        out = F.zero
        for a, ca in x.items():
            row = rows[a]
            for b, cb in y.items():
                v = row.get(b)
                if v is not None:
                    out += ca * cb * v
        return out

    assoc = True
    for x in range(O.dim):
        for y in range(O.dim):
            xy = O.mul(O.basis(x), O.basis(y))
            if rows[x].get(y, F.zero) != pair(xy, one):
                assoc = False
                break
        if not assoc:
            break
    return {"symmetric": sym, "nondegenerate": nondeg, "associative": assoc}


def orbit_form_check(O, form):
    """Test both delta conventions; report which pass all three properties."""
    results = {}
    for variant in FORM_VARIANTS:
        results[variant] = chk_form(O, orbit_form(O, form, variant))
    passing = [v for v in FORM_VARIANTS if all(results[v].values())]
    return {"variants": results, "passing": passing}


# ---------------------------------------------------------------------------
# corners

class Corner:
    """f O f for f a sum of basis idempotents, with its inclusion into O."""

    def __init__(self, algebra, inclusion, positions, full):
        self.algebra = algebra
        self.inclusion = inclusion          # corner basis index -> ambient basis index
        self.positions = positions          # ambient idempotent positions in f
        self.full = full


def idempotent_positions(O, f):
    pos = []
    for b, c in f.items():
        if b not in O.idem_pos or c != O.field.one:
            return None
        pos.append(O.idem_pos[b])
    return sorted(pos)


def ideal_dimension(O, positions):
    """Dimension of the two-sided ideal generated by sum of the named idempotents."""
    cols = []
    seen = set()
    for p in positions:
        e = O.idempotents[p]
        leaving = [b for b in range(O.dim) if O.source[b] == p]
        arriving = [b for b in range(O.dim) if O.target[b] == p]
        for x in leaving:
            for y in arriving:
                prod = O.mul(O.basis(x), O.mul(O.basis(e), O.basis(y)))
                if prod:
                    key = tuple(sorted(prod.items(), key=lambda kv: kv[0]))
                    if key not in seen:
                        seen.add(key)
                        cols.append(prod)
    return linalg.rank(linalg.from_columns(O.field, O.dim, cols)) if cols else 0


def corner(O, f):
    """The corner algebra f O f and whether O f O = O."""
    if O.mul(f, f) != f:
        raise ValueError("f is not idempotent")
    pos = idempotent_positions(O, f)
    if pos is None:
        raise ValueError("corner needs a sum of basis idempotents")
    pset = set(pos)
    incl = [b for b in range(O.dim) if O.source[b] in pset and O.target[b] in pset]
    back = {b: i for i, b in enumerate(incl)}
    table = {}
    for i, a in enumerate(incl):
        for j, b in enumerate(incl):
            prod = O.mul_basis(a, b)
            if prod:
                table[(i, j)] = {back[c]: v for c, v in prod}
    idems = [back[O.idempotents[p]] for p in pos]
    labels = [O.labels[b] for b in incl]
    C = BasedAlgebra(O.field, labels, table, idems,
                     descriptor={"kind": "corner", "of": O.descriptor, "idempotents": pos})
    full = ideal_dimension(O, pos) == O.dim
    return Corner(C, incl, pos, full)


def local_corners(O):
    """is_local of every corner Pe_i O Pe_i."""
    return [is_local(corner(O, O.e(p)).algebra) for p in range(len(O.idempotents))]


def morita_corner_map(O, small):
    """Algebra map N(m, tm) -> f O f for f = Pe_0 + ... + Pe_{m-1}.

    ``small`` is N(m, tm) presented with one orbit (n = 1).  The arrows r -> r+1
    with r < m-1 go to (0, beta_r); the arrow m-1 -> 0 goes to (l, beta_{m-1})
    where 1 + l*t = 0 mod n, which brings the end point m back to 0.
    """
    A = O.base
    m, t, n = A.m, A.t, O.n
    f = {}
    for r in range(m):
        f[A.idempotents[r]] = O.field.one
    cor = corner(O, f)
    back = {b: i for i, b in enumerate(cor.inclusion)}

    def local(x):
        return {back[b]: c for b, c in x.items()}

    lift = next(l for l in range(n) if (1 + l * t) % n == 0)
    idem = [local(O.e(r)) for r in range(m)]
    arrows = []
    for r in range(m):
        l = 0 if r < m - 1 else lift
        arrows.append(local(O.embed(l, A.path_elem(r, 1))))
    phi = AlgebraMap.from_generators(small, cor.algebra, idem, arrows)
    return cor, phi, verify_algebra_map(small, cor.algebra, phi)

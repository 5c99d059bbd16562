"""Finite-dimensional algebras with a distinguished basis.

Elements are sparse dicts ``{basis index: scalar}`` with no zero values.
The basis always contains a complete set of orthogonal idempotents, and every
basis element lies in exactly one corner ``e_j A e_i``; we say it goes from
``i`` to ``j``.  Paths compose right to left, so ``b * a`` means "first a,
then b".
"""

from fractions import Fraction
from math import gcd

from . import linalg
from .fields import Field


# ---------------------------------------------------------------------------
# sparse element helpers

def add(x, y):
    out = dict(x)
    for k, v in y.items():
        w = out.get(k)
        if w is None:
            out[k] = v
        else:
            w = w + v
            if w == 0:
                del out[k]
            else:
                out[k] = w
    return out


def scale(c, x):
    if c == 0:
        return {}
    return {k: c * v for k, v in x.items()}


def sub(x, y):
    return add(x, {k: -v for k, v in y.items()})


def axpy(acc, c, x):
    """In-place ``acc += c * x``."""
    if c == 0:
        return acc
    for k, v in x.items():
        w = acc.get(k)
        w = c * v if w is None else w + c * v
        if w == 0:
            acc.pop(k, None)
        else:
            acc[k] = w
    return acc


class NotAUnit:
    """Returned by :func:`invert_unit` for non-invertible elements."""

    def __repr__(self):
        return "NotAUnit"

    def __eq__(self, other):
        return isinstance(other, NotAUnit)

    def __hash__(self):
        return hash("NotAUnit")


class BasedAlgebra:
    """An algebra given by a basis, structure constants and basis idempotents.

    ``table`` maps a pair of basis indices ``(a, b)`` to the product ``a*b``
    as a sparse dict; missing pairs multiply to zero.  ``idempotents`` lists
    the basis indices of a complete set of orthogonal idempotents.
    """

    def __init__(self, field, labels, table, idempotents, descriptor=None):
        self.field = field
        self.labels = list(labels)
        self.dim = len(self.labels)
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        self.descriptor = descriptor
        self._mul = [dict() for _ in range(self.dim)]
        monomial = True
        for (a, b), prod in table.items():
            prod = {c: v for c, v in prod.items() if v != 0}
            if prod:
                self._mul[a][b] = tuple(prod.items())
                if len(prod) > 1:
                    monomial = False
        self.monomial = monomial
        self.idempotents = list(idempotents)
        self.idem_pos = {b: p for p, b in enumerate(self.idempotents)}
        self._locate_corners()
        self._find_units()

    # -- structure --------------------------------------------------------

    def _locate_corners(self):
        r = len(self.idempotents)
        self.source = [None] * self.dim
        self.target = [None] * self.dim
        for b in range(self.dim):
            for p, e in enumerate(self.idempotents):
                if self._mul[e].get(b) == ((b, self.field.one),):
                    if self.target[b] is not None:
                        raise ValueError(f"basis element {self.labels[b]} has two targets")
                    self.target[b] = p
                if self._mul[b].get(e) == ((b, self.field.one),):
                    if self.source[b] is not None:
                        raise ValueError(f"basis element {self.labels[b]} has two sources")
                    self.source[b] = p
            if self.source[b] is None or self.target[b] is None:
                raise ValueError(f"basis element {self.labels[b]} lies in no corner")
        self.corners = {(i, j): [] for i in range(r) for j in range(r)}
        for b in range(self.dim):
            self.corners[(self.source[b], self.target[b])].append(b)

    def _find_units(self):
        """Basis elements that are isomorphisms between their end points.

        For every such ``b`` (from i to j) we record a basis element ``b'``
        and a scalar ``c`` with ``c*b'*b = e_i``.  The remaining basis
        elements span the radical for all algebras built in this package.
        """
        F = self.field
        self.unit_inverse = {}
        for (i, j), elems in self.corners.items():
            back = self.corners[(j, i)]
            ei = self.idempotents[i]
            for b in elems:
                for b2 in back:
                    coeff = dict(self._mul[b2].get(b, ())).get(ei)
                    if coeff is not None and coeff != 0:
                        self.unit_inverse[b] = (b2, F.one / coeff)
                        break
        r = len(self.idempotents)
        parent = list(range(r))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for b in self.unit_inverse:
            a, c = find(self.source[b]), find(self.target[b])
            if a != c:
                parent[max(a, c)] = min(a, c)
        self.iso_class = [find(x) for x in range(r)]
        self.class_reps = sorted(set(self.iso_class))
        # fixed isomorphisms x -> rep and rep -> x
        self.to_rep = {}
        self.from_rep = {}
        for x in range(r):
            rep = self.iso_class[x]
            if rep == x:
                self.to_rep[x] = self.e(x)
                self.from_rep[x] = self.e(x)
                continue
            u = self._iso_between(x, rep)
            self.to_rep[x] = u
            self.from_rep[x] = self.invert_in_corner(u, x, rep)

    def _iso_between(self, x, y):
        """An isomorphism P_x -> P_y as an element of e_y A e_x (x, y isomorphic)."""
        for b in self.corners[(x, y)]:
            if b in self.unit_inverse:
                return {b: self.field.one}
        # compose through the class representative search (breadth first)
        seen = {x: self.e(x)}
        frontier = [x]
        while frontier:
            nxt = []
            for z in frontier:
                for w in range(len(self.idempotents)):
                    if w in seen:
                        continue
                    for b in self.corners[(z, w)]:
                        if b in self.unit_inverse:
                            seen[w] = self.mul({b: self.field.one}, seen[z])
                            nxt.append(w)
                            break
            frontier = nxt
            if y in seen:
                return seen[y]
        raise ValueError("idempotents are not isomorphic")

    # -- elements ---------------------------------------------------------

    def basis(self, b):
        return {b: self.field.one}

    def e(self, p):
        """The idempotent at position ``p`` of the idempotent list."""
        return {self.idempotents[p]: self.field.one}

    def one(self):
        return {e: self.field.one for e in self.idempotents}

    def mul_basis(self, a, b):
        return self._mul[a].get(b, ())

    def mul(self, x, y):
        out = {}
        mul = self._mul
        for a, ca in x.items():
            row = mul[a]
            if not row:
                continue
            for b, cb in y.items():
                prod = row.get(b)
                if prod is None:
                    continue
                c0 = ca * cb
                for c, v in prod:
                    w = out.get(c)
                    w = c0 * v if w is None else w + c0 * v
                    if w == 0:
                        del out[c]
                    else:
                        out[c] = w
        return out

    def power(self, x, k):
        out = self.one()
        for _ in range(k):
            out = self.mul(out, x)
        return out

    def corner_of(self, x):
        """The unique corner containing the nonzero element x, as (source, target)."""
        spots = {(self.source[b], self.target[b]) for b in x}
        if len(spots) != 1:
            raise ValueError("element does not lie in a single corner")
        return spots.pop()

    def in_corner(self, x, i, j):
        return all(self.source[b] == i and self.target[b] == j for b in x)

    def is_nilpotent(self, x):
        y = dict(x)
        for _ in range(self.dim + 1):
            if not y:
                return True
            y = self.mul(y, x)
        return not y

    def commutes(self, x, y):
        return self.mul(x, y) == self.mul(y, x)

    def is_central(self, z):
        return all(self.commutes(z, self.basis(b)) for b in range(self.dim))

    def invert_in_corner(self, a, i, j):
        """Inverse of an isomorphism a in e_j A e_i, as an element of e_i A e_j."""
        F = self.field
        lead = None
        for b, c in a.items():
            if b in self.unit_inverse:
                lead = (b, c)
                break
        if lead is None:
            raise ZeroDivisionError("element is not an isomorphism")
        b, c = lead
        b2, k = self.unit_inverse[b]
        u = {b2: k / c}                      # u*a = e_i + nilpotent
        ua = self.mul(u, a)
        nil = sub(ua, self.e(i))
        inv = self.e(i)
        term = self.e(i)
        for _ in range(self.dim + 1):
            term = scale(-F.one, self.mul(term, nil))
            if not term:
                break
            inv = add(inv, term)
        else:
            if term:
                raise ZeroDivisionError("element is not an isomorphism")
        return self.mul(inv, u)

    def scalar_part(self, a, x, y):
        """Residue of a in e_y A e_x modulo the radical, read off via the class representatives."""
        if x is None:
            return self.field.zero
        rep = self.iso_class[x]
        if self.iso_class[y] != rep:
            return self.field.zero
        v = self.mul(self.to_rep[y], self.mul(a, self.from_rep[x]))
        return v.get(self.idempotents[rep], self.field.zero)

    def label_str(self, b):
        return str(self.labels[b])

    def to_str(self, x):
        if not x:
            return "0"
        return " + ".join(f"{v}*{self.labels[b]}" for b, v in sorted(x.items()))


class NakayamaAlgebra(BasedAlgebra):
    """The cyclic Nakayama algebra with N = n*m vertices and paths of length at most L = t*m.

    The basis element with label ``(i, k)`` is the path of length k starting
    at vertex i; ``(i, 0)`` is the idempotent e_i.
    """

    def __init__(self, n, m, t, field):
        self.n, self.m, self.t = n, m, t
        N, L = n * m, t * m
        self.N, self.L = N, L
        labels = [(i, k) for i in range(N) for k in range(L + 1)]
        idx = {lab: p for p, lab in enumerate(labels)}
        table = {}
        one = field.one
        for i in range(N):
            for k in range(L + 1):
                j = (i + k) % N
                for k2 in range(L + 1 - k):
                    # (j, k2) * (i, k) = (i, k + k2)
                    table[(idx[(j, k2)], idx[(i, k)])] = {idx[(i, k + k2)]: one}
        idems = [idx[(i, 0)] for i in range(N)]
        desc = {"kind": "nakayama", "n": n, "m": m, "t": t, "field": field.descriptor()}
        super().__init__(field, labels, table, idems, descriptor=desc)

    def path(self, i, k):
        return (i % self.N) * (self.L + 1) + k

    def arrow(self, i):
        return self.path(i, 1)

    def path_elem(self, i, k):
        if k > self.L:
            return {}
        return {self.path(i, k): self.field.one}

    def label_str(self, b):
        i, k = self.labels[b]
        return f"e{i}" if k == 0 else f"b[{i},{k}]"


def make_nakayama(n, m, t, field="Q"):
    """The Nakayama algebra N(nm, tm) over the given field."""
    for v, name in ((n, "n"), (m, "m"), (t, "t")):
        if int(v) != v or v <= 0:
            raise ValueError(f"{name} must be a positive integer")
    if gcd(n, t) != 1:
        raise ValueError(f"gcd(n, t) = {gcd(n, t)} != 1")
    return NakayamaAlgebra(int(n), int(m), int(t), Field.parse(field))


def field_algebra(field="Q"):
    """The ground field as a one-dimensional based algebra."""
    F = Field.parse(field)
    return BasedAlgebra(F, ["1"], {(0, 0): {0: F.one}}, [0],
                        descriptor={"kind": "field", "field": F.descriptor()})


def _check_element(A, x):
    if not isinstance(x, dict) or any(not (isinstance(b, int) and 0 <= b < A.dim) for b in x):
        raise ValueError("element is not over this algebra")


def multiply(A, a, b):
    _check_element(A, a)
    _check_element(A, b)
    return A.mul(a, b)


def check_associative(A):
    """Exhaustive associativity check on all basis triples; returns the first failure or None."""
    for a in range(A.dim):
        for b in range(A.dim):
            ab = dict(A.mul_basis(a, b))
            for c in range(A.dim):
                left = A.mul(ab, A.basis(c))
                right = A.mul(A.basis(a), dict(A.mul_basis(b, c)))
                if left != right:
                    return (a, b, c)
    return None


def left_mult_matrix(A, x):
    cols = [A.mul(x, A.basis(b)) for b in range(A.dim)]
    return linalg.from_columns(A.field, A.dim, cols)


def center_basis(A):
    """Basis of the center, as the kernel of z -> (zb - bz)_b."""
    d = A.dim
    cols = []
    for z in range(d):
        col = {}
        zb = A.basis(z)
        for b in range(d):
            diff = sub(A.mul(zb, A.basis(b)), A.mul(A.basis(b), zb))
            for c, v in diff.items():
                col[b * d + c] = v
        cols.append(col)
    M = linalg.from_columns(A.field, d * d, cols)
    out = []
    for v in linalg.kernel(A.field, M):
        out.append({i: c for i, c in enumerate(v) if c != 0})
    return out


def invert_unit(A, a):
    """Two-sided inverse of a, or a NotAUnit value."""
    _check_element(A, a)
    L = left_mult_matrix(A, a)
    x = linalg.solve(A.field, L, A.one())
    if x is None:
        return NotAUnit()
    b = {i: c for i, c in enumerate(x) if c != 0}
    if A.mul(b, a) != A.one() or A.mul(a, b) != A.one():
        return NotAUnit()
    return b


def is_local(A):
    """True iff A is local.

    A based algebra is local exactly when it has a single basis idempotent
    and the remaining basis elements span a nilpotent ideal; all algebras in
    this package have their radical spanned by non-idempotent basis elements
    of this kind, so that is what is checked.
    """
    if len(A.idempotents) != 1:
        return False
    e = A.idempotents[0]
    rest = [b for b in range(A.dim) if b != e]
    rest_set = set(rest)
    for a in range(A.dim):
        for b in rest:
            for c, _ in A.mul_basis(a, b):
                if c not in rest_set:
                    return False
            for c, _ in A.mul_basis(b, a):
                if c not in rest_set:
                    return False
    # nilpotency of the span: products of dim+1 radical basis elements vanish
    layer = {b for b in rest}
    for _ in range(A.dim + 1):
        if not layer:
            return True
        nxt = set()
        for x in layer:
            for y in rest:
                for c, _ in A.mul_basis(x, y):
                    nxt.add(c)
        layer = nxt
    return not layer


# ---------------------------------------------------------------------------
# algebra maps

class AlgebraMap:
    """A linear map given by the images of all source basis elements.

    Maps out of a Nakayama algebra may also be described by the images of
    the idempotents and arrows; ``gens`` keeps that description so that
    :func:`verify_algebra_map` can test the defining relations directly.
    """

    def __init__(self, source, target, images, gens=None):
        self.source = source
        self.target = target
        self.images = [dict(x) for x in images]
        self.gens = gens

    @classmethod
    def from_generators(cls, A, B, idem_images, arrow_images):
        """Extend images of e_i and of the arrows of a Nakayama algebra A along paths."""
        images = []
        for (i, k) in A.labels:
            if k == 0:
                img = dict(idem_images[i])
            else:
                img = dict(arrow_images[i])
                for s in range(1, k):
                    img = B.mul(arrow_images[(i + s) % A.N], img)
            images.append(img)
        return cls(A, B, images, gens=(list(idem_images), list(arrow_images)))

    def __call__(self, x):
        out = {}
        for b, c in x.items():
            axpy(out, c, self.images[b])
        return out

    def compose(self, other):
        """self o other."""
        imgs = [self(x) for x in other.images]
        return AlgebraMap(other.source, self.target, imgs)

    def power(self, k):
        f = AlgebraMap(self.source, self.source, [self.source.basis(b) for b in range(self.source.dim)])
        for _ in range(k):
            f = self.compose(f)
        return f

    def is_identity(self):
        return self.source is self.target and all(
            self.images[b] == self.source.basis(b) for b in range(self.source.dim))

    def matrix(self):
        return linalg.from_columns(self.target.field, self.target.dim, self.images)

    def rank(self):
        return linalg.rank(self.matrix())

    def inverse(self):
        F = self.target.field
        M = self.matrix()
        Minv = linalg.inverse(F, M)
        if Minv is None or self.source.dim != self.target.dim:
            raise ValueError("map is not bijective")
        n = self.source.dim
        flat = Minv.entries()
        imgs = []
        for j in range(n):
            imgs.append({i: flat[i * n + j] for i in range(n) if flat[i * n + j] != 0})
        return AlgebraMap(self.target, self.source, imgs)

    def permutes_idempotents(self):
        """Position permutation of basis idempotents, or None if some image is not a basis idempotent."""
        A, B = self.source, self.target
        perm = []
        for e in A.idempotents:
            img = self.images[e]
            if len(img) != 1:
                return None
            (b, c), = img.items()
            if c != B.field.one or b not in B.idem_pos:
                return None
            perm.append(B.idem_pos[b])
        return perm


class MapCheck:
    def __init__(self, ok, rank=None, bijective=None, reason=""):
        self.ok = ok
        self.rank = rank
        self.bijective = bijective
        self.reason = reason

    def __bool__(self):
        return bool(self.ok)

    def __repr__(self):
        return f"MapCheck(ok={self.ok}, rank={self.rank}, bijective={self.bijective}, reason={self.reason!r})"


def verify_algebra_map(A, B, f):
    """Check that f : A -> B is a unital algebra homomorphism; also report its rank."""
    if f.gens is not None and isinstance(A, NakayamaAlgebra):
        idem, arrows = f.gens
        for i in range(A.N):
            for j in range(A.N):
                prod = B.mul(idem[i], idem[j])
                want = idem[i] if i == j else {}
                if prod != want:
                    return MapCheck(False, reason=f"images of e{i}, e{j} are not orthogonal idempotents")
        total = {}
        for i in range(A.N):
            total = add(total, idem[i])
        if total != B.one():
            return MapCheck(False, reason="images of idempotents do not sum to 1")
        for i in range(A.N):
            a = arrows[i]
            if B.mul(idem[(i + 1) % A.N], B.mul(a, idem[i])) != a:
                return MapCheck(False, reason=f"image of arrow {i} has the wrong end points")
        for i in range(A.N):
            img = dict(arrows[i])
            for s in range(1, A.L + 1):
                img = B.mul(arrows[(i + s) % A.N], img)
            if img:
                return MapCheck(False, reason=f"relation of length {A.L + 1} at vertex {i} not killed")
    if f(A.one()) != B.one():
        return MapCheck(False, reason="not unital")
    for a in range(A.dim):
        fa = f.images[a]
        for b in range(A.dim):
            prod = dict(A.mul_basis(a, b))
            if f(prod) != B.mul(fa, f.images[b]):
                return MapCheck(False, reason=f"not multiplicative on ({A.labels[a]}, {A.labels[b]})")
    r = f.rank()
    return MapCheck(True, rank=r, bijective=(r == A.dim == B.dim))


# ---------------------------------------------------------------------------
# Frobenius structure

class FrobeniusForm:
    def __init__(self, A, eps):
        self.algebra = A
        self.eps = dict(eps)

    def __call__(self, x):
        out = self.algebra.field.zero
        for b, c in x.items():
            v = self.eps.get(b)
            if v is not None:
                out += c * v
        return out

    def pair(self, x, y):
        return self(self.algebra.mul(x, y))

    def gram(self):
        A = self.algebra
        rows = []
        for a in range(A.dim):
            row = {}
            for b in range(A.dim):
                v = self(dict(A.mul_basis(a, b)))
                if v != 0:
                    row[b] = v
            rows.append(row)
        return linalg.from_rows(A.field, A.dim, rows)


def nakayama_closed_form(A, p=1):
    """The map e_i -> e_{i-p*tm}, beta_i -> beta_{i-p*tm} on a Nakayama algebra."""
    N, L = A.N, A.L
    imgs = [{A.path(i - p * L, k): A.field.one} for (i, k) in A.labels]
    idem = [{A.path(i - p * L, 0): A.field.one} for i in range(N)]
    arr = [{A.path(i - p * L, 1): A.field.one} for i in range(N)]
    return AlgebraMap(A, A, imgs, gens=(idem, arr))


def frobenius_pair(A):
    """The form eps = indicator of maximal paths and the Nakayama automorphism it induces.

    Returns ``(form, nu, order)``.  nu is obtained by solving
    <a, b> = <b, nu(a)> on the basis and then compared with the closed form
    i -> i - tm.
    """
    if not isinstance(A, NakayamaAlgebra):
        raise TypeError("frobenius_pair needs a Nakayama presentation")
    F = A.field
    eps = {A.path(i, A.L): F.one for i in range(A.N)}
    form = FrobeniusForm(A, eps)
    G = form.gram()
    Ginv = linalg.inverse(F, G)
    if Ginv is None:
        raise ArithmeticError("Gram matrix of the form is singular")
    X = Ginv * G.transpose()
    d = A.dim
    flat = X.entries()
    imgs = [{i: flat[i * d + a] for i in range(d) if flat[i * d + a] != 0} for a in range(d)]
    nu = AlgebraMap(A, A, imgs)
    closed = nakayama_closed_form(A)
    if nu.images != closed.images:
        raise ArithmeticError("solved Nakayama automorphism differs from the closed form")
    nu.gens = closed.gens
    order = None
    f = nu
    for k in range(1, 2 * A.N + 2):
        if f.is_identity():
            order = k
            break
        f = nu.compose(f)
    return form, nu, order


# ---------------------------------------------------------------------------
# roots of central units

def binomial_root_coefficient(n, i):
    """prod_{j<i} (1/n - j) / i!  as an exact fraction."""
    c = Fraction(1)
    for j in range(i):
        c *= Fraction(1, n) - j
        c /= j + 1
    return c


def nth_root_central_unit(A, a, n):
    """A central b with b**n == a, via the truncated binomial series for (1+Q)^(1/n)."""
    F = A.field
    if F.char and n % F.char == 0:
        raise ValueError("characteristic divides n")
    _check_element(A, a)
    if not A.is_central(a):
        raise ValueError("element is not central")
    if isinstance(invert_unit(A, a), NotAUnit):
        raise ValueError("element is not a unit")
    kappa = a.get(A.idempotents[0], F.zero)
    if any(a.get(e, F.zero) != kappa for e in A.idempotents):
        raise ValueError("element is not of the form kappa*(1+Q) with Q nilpotent")
    Q = sub(scale(F.one / kappa, a), A.one())
    if not A.is_nilpotent(Q):
        raise ValueError("element is not of the form kappa*(1+Q) with Q nilpotent")
    root = F.nth_root(kappa, n)
    if root is None:
        raise ValueError(f"scalar part {kappa} has no {n}-th root in {F!r}")
    b = {}
    term = A.one()
    i = 0
    while term:
        b = axpy(b, F(binomial_root_coefficient(n, i)), term)
        term = A.mul(term, Q)
        i += 1
    b = scale(root, b)
    if A.power(b, n) != a:
        raise ArithmeticError("series root does not reproduce the element")
    return b

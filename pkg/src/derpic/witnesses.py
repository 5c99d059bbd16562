"""The concrete catalog over N(nm, tm): complexes X_i, Y_{i,k}, the tilting
data theta_l and eps_l with their adjusters, the Morita corner of the orbit
algebra, the automorphisms b, gamma, sigma attached to a central unit, and
the suite certifying that each listed generator is a well-defined datum.
"""

import random as _random
from math import gcd

from .algebra import (AlgebraMap, add, axpy, frobenius_pair, invert_unit,
                      make_nakayama, nth_root_central_unit, scale,
                      verify_algebra_map)
from .fields import Field
from .homotopy import ChainMap, ProjComplex, pushdown, shift, stalk, twist
from .orbit import CyclicAction, make_orbit_algebra, morita_corner_map
from .tilting import (Adjuster, Report, TiltingFunctorData, build_mu,
                      canonical_adjuster, check_orthogonality,
                      compute_equivariance_error, generation_check,
                      is_morita, precompose, shifted, verify_adjuster,
                      verify_tilting_functor, yoneda)


class World:
    def __init__(self, n, m, t, field="Q"):
        if gcd(n, t) != 1:
            raise ValueError(f"gcd(n, t) = {gcd(n, t)} != 1")
        self.n, self.m, self.t = n, m, t
        self.field = Field.parse(field)
        self.A = make_nakayama(n, m, t, self.field)
        self.N, self.L = self.A.N, self.A.L
        self.form, self.nu, self.order = frobenius_pair(self.A)
        if self.order != n:
            raise ArithmeticError(f"nu has order {self.order}, expected {n}")
        self.action = CyclicAction(self.A, self.nu, n)
        self._orbit = None
        self._small = None

    @property
    def orbit(self):
        if self._orbit is None:
            self._orbit = make_orbit_algebra(self.action)
        return self._orbit

    @property
    def small(self):
        """N(m, tm)."""
        if self._small is None:
            self._small = make_nakayama(1, self.m, self.t, self.field)
        return self._small

    def params(self):
        return {"n": self.n, "m": self.m, "t": self.t, "field": self.field.descriptor()}

    def path(self, i, k):
        return self.A.path_elem(i, k)


def build_world(n, m, t, field="Q"):
    return World(n, m, t, field)


# ---------------------------------------------------------------------------
# complexes

def build_X(w, i):
    """P_{i-tm} -> P_{i-tm+1} -> P_{i+1} in degrees -2, -1, 0."""
    N, L = w.N, w.L
    terms = {-2: [(i - L) % N], -1: [(i - L + 1) % N], 0: [(i + 1) % N]}
    diff = {-2: {0: {0: w.path(i - L, 1)}}, -1: {0: {0: w.path(i - L + 1, L)}}}
    return ProjComplex(w.A, terms, diff)


def build_Y(w, i, k):
    """P_i -> P_{i+k} in degrees 0, 1."""
    if not 1 <= k <= w.m - 1:
        raise ValueError("need 1 <= k <= m-1")
    return ProjComplex(w.A, {0: [i % w.N], 1: [(i + k) % w.N]}, {0: {0: {0: w.path(i, k)}}})


def build_X_Y(w, i, k=None):
    return build_X(w, i) if k is None else build_Y(w, i, k)


def _deg0(src, tgt, elem):
    """Chain map concentrated in degree 0 between the degree-0 terms (single summands)."""
    return ChainMap(src, tgt, {0: {0: {0: elem}}} if elem else {})


def H_summands(w, l):
    out = []
    for i in range(w.N):
        out.append(build_X(w, i) if (i - l) % w.m == 0 else stalk(w.A, i))
    return out


def build_H_theta(w, l):
    """The summands of H_l and the datum theta_l: e_i -> summand, beta_i -> degree-0 map."""
    if w.m <= 1:
        raise ValueError("H_l needs m > 1")
    N, m = w.N, w.m
    summ = H_summands(w, l)
    images = []
    for i in range(N):
        if (i - l) % m == 0:
            images.append(summ[(i + 1) % N])
        elif (i - 1 - l) % m == 0:
            images.append(summ[(i - 1) % N])          # the X-summand with index i-1
        else:
            images.append(summ[i])
    arrows = []
    for i in range(N):
        src, tgt = images[i], images[(i + 1) % N]
        if (i - l) % m == 0:
            elem = w.A.e((i + 1) % N)                  # P_{i+1} -> X_i in degree 0
        elif (i - 1 - l) % m == 0:
            elem = w.path(i, 1) if m > 2 else w.path(i, 2)
        elif (i + 1 - l) % m == 0:
            elem = w.path(i, 2)
        else:
            elem = w.path(i, 1)
        arrows.append(_deg0(src, tgt, elem))
    theta = TiltingFunctorData.from_generators(w.A, w.A, images, arrows)
    return summ, theta


def Q_summands(w, l):
    out = []
    for i in range(w.N):
        if (i - l) % w.m == 0:
            out.append(stalk(w.A, i))
            for k in range(1, w.m):
                out.append(build_Y(w, i, k))
    return out


def build_Q_eps(w, l):
    """The summands of Q_l and the datum eps_l (t = 1)."""
    if w.m <= 1 or w.t != 1:
        raise ValueError("Q_l needs m > 1 and t = 1")
    N, m = w.N, w.m
    summ = Q_summands(w, l)
    index = {}
    pos = 0
    for i in range(N):
        if (i - l) % m == 0:
            index[(i, 0)] = pos
            pos += 1
            for k in range(1, m):
                index[(i, k)] = pos
                pos += 1
    images = []
    kinds = []
    for i in range(N):
        if (i - l) % m == 0:
            images.append(summ[index[(i, 0)]])
            kinds.append(("P", i))
        else:
            k = (l - i) % m
            j = (i + k) % N
            images.append(summ[index[(j, m - k)]])
            kinds.append(("Y", k))
    arrows = []
    A = w.A
    for i in range(N):
        src, tgt = images[i], images[(i + 1) % N]
        kind = kinds[i]
        if kind[0] == "P":
            arrows.append(_deg0(src, tgt, w.path(i, m)))
        elif kind[1] == 1:
            arrows.append(_deg0(src, tgt, A.e((i + 1) % N)))
        else:
            k = kind[1]
            comps = {0: {0: {0: A.e((i + k) % N)}}, 1: {0: {0: w.path(i + m, 1)}}}
            arrows.append(ChainMap(src, tgt, comps))
    eps = TiltingFunctorData.from_generators(A, A, images, arrows)
    return summ, eps


def build_psi_phi(w, theta, kind="h"):
    """The adjuster made of identity matrices theta(nu e_j) = ^g theta(e_j).

    ``theta`` is either a datum or a level l, in which case theta_l
    (kind "h") or eps_l (kind "q") is built first.
    """
    if isinstance(theta, int):
        theta = (build_H_theta(w, theta) if kind == "h" else build_Q_eps(w, theta))[1]
    return canonical_adjuster(theta, w.action, w.action)


def yoneda_datum(w):
    th = yoneda(w.A)
    return th, canonical_adjuster(th, w.action, w.action)


def shift_datum(w, k=1):
    th = shifted(yoneda(w.A), k)
    return th, canonical_adjuster(th, w.action, w.action)


def rotation(w, r=1):
    """The graph automorphism e_i -> e_{i+r}, beta_i -> beta_{i+r}."""
    A = w.A
    idem = [A.e((i + r) % w.N) for i in range(w.N)]
    arr = [w.path(i + r, 1) for i in range(w.N)]
    return AlgebraMap.from_generators(A, A, idem, arr)


def scaling(w, coeffs):
    """beta_i -> c_i beta_i (the c_i must be units)."""
    A = w.A
    idem = [A.e(i) for i in range(w.N)]
    arr = [scale(w.field(coeffs[i]), w.path(i, 1)) for i in range(w.N)]
    return AlgebraMap.from_generators(A, A, idem, arr)


def automorphism_datum(w, sigma):
    th = precompose(yoneda(w.A), sigma)
    return th, canonical_adjuster(th, w.action, w.action)


def picard_data(w):
    """Rotation and a nu-periodic scaling; both commute with nu."""
    out = [("rotation", rotation(w, 1))]
    if w.field.p != 2:
        g = gcd(w.N, w.L)
        coeffs = [(-1 if i % g == 0 else 1) for i in range(w.N)]
        out.append(("scaling", scaling(w, coeffs)))
    return out


# ---------------------------------------------------------------------------
# Morita corner

def corner_morita(w):
    cor, phi, chk = morita_corner_map(w.orbit, w.small)
    return cor, phi, chk


# ---------------------------------------------------------------------------
# central units and the automorphisms attached to them

def u_element(w, start=None, stop=None):
    """sum_{i in range} beta_{i, nm}; the full sum when no range is given."""
    A = w.A
    nm = w.N
    if nm > w.L:
        return {}
    rng = range(w.N) if start is None else range(start, stop)
    out = {}
    for i in rng:
        axpy(out, A.field.one, w.path(i, nm))
    return out


def u_coefficients(w, a):
    """c_k with a = sum c_k u^k (None if a is not of this form)."""
    A = w.A
    F = A.field
    u = u_element(w)
    kmax = w.t // w.n
    coeffs = [a.get(A.path(0, k * w.N), F.zero) for k in range(kmax + 1)]
    rebuilt = {}
    power = A.one()
    for c in coeffs:
        axpy(rebuilt, c, power)
        power = A.mul(power, u)
    return coeffs if rebuilt == a else None


def norm(w, b):
    """b nu(b) ... nu^{n-1}(b)."""
    A = w.A
    out = A.one()
    for p in range(w.n):
        out = A.mul(out, w.action.apply(p, b))
    return out


def conj_by(w, b):
    """The automorphism x -> b nu(x) b^{-1} as an AlgebraMap."""
    A = w.A
    binv = invert_unit(A, b)
    imgs = [A.mul(b, A.mul(w.nu.images[x], binv)) for x in range(A.dim)]
    idem = [imgs[A.idempotents[i]] for i in range(w.N)]
    arr = [imgs[A.arrow(i)] for i in range(w.N)]
    return AlgebraMap(A, A, imgs, gens=(idem, arr))


def gamma_table(w, a):
    """The closed-form gamma on generators."""
    A = w.A
    ainv = invert_unit(A, a)
    N, L, m = w.N, w.L, w.m
    idem = [A.e((i - L) % N) for i in range(N)]
    arr = []
    for i in range(N):
        if i == L % N and i == ((w.t + 1) * m) % N:
            arr.append(A.mul(a, A.mul(ainv, w.path(i - L, 1))))
        elif i == L % N:
            arr.append(A.mul(a, w.path(0, 1)))
        elif i == ((w.t + 1) * m) % N:
            arr.append(A.mul(ainv, w.path(m, 1)))
        else:
            arr.append(w.path(i - L, 1))
    return AlgebraMap.from_generators(A, A, idem, arr)


def sigma_from_unit(w, a):
    """sigma fixing idempotents; sigma^{-1}(beta_i) = a^{-1} beta_i for i = (1+k)tm, 0 <= k < p."""
    A = w.A
    N, L, n, t = w.N, w.L, w.n, w.t
    p = next(q for q in range(1, n) if (q * t - 1) % n == 0)
    special = {((1 + k) * L) % N for k in range(p)}
    ainv = invert_unit(A, a)
    idem = [A.e(i) for i in range(N)]
    inv_arr = [A.mul(ainv, w.path(i, 1)) if i in special else w.path(i, 1) for i in range(N)]
    arr = [A.mul(a, w.path(i, 1)) if i in special else w.path(i, 1) for i in range(N)]
    sigma_inv = AlgebraMap.from_generators(A, A, idem, inv_arr)
    sigma = AlgebraMap.from_generators(A, A, idem, arr)
    return sigma, sigma_inv, p


class Lemma4Data:
    def __init__(self, a, b, gamma, sigma, sigma_inv, checks):
        self.a, self.b, self.gamma = a, b, gamma
        self.sigma, self.sigma_inv = sigma, sigma_inv
        self.checks = checks

    @property
    def ok(self):
        return all(self.checks.values())


def on_generators(w, f, g):
    A = w.A
    gens = list(A.idempotents) + [A.arrow(i) for i in range(w.N)]
    return all(f.images[x] == g.images[x] for x in gens)


def lemma4_sigma(w, a):
    """(b, gamma, sigma) for a central unit a with constant term 1."""
    A = w.A
    if w.n <= 1:
        raise ValueError("needs n > 1")
    coeffs = u_coefficients(w, a)
    if coeffs is None:
        raise ValueError("a is not a polynomial in u")
    if coeffs[0] != A.field.one:
        raise ValueError("normalize a so that its constant term is 1")
    ubar = u_element(w, 1, w.m + 1)
    b = dict(A.one())
    power = A.one()
    for c in coeffs[1:]:
        power = A.mul(power, ubar)
        axpy(b, c, power)
    checks = {}
    checks["norm"] = norm(w, b) == a
    gamma = conj_by(w, b)
    checks["gamma_is_automorphism"] = bool(verify_algebra_map(A, A, gamma).bijective)
    checks["gamma_table"] = on_generators(w, gamma, gamma_table(w, a))
    sigma, sigma_inv, p = sigma_from_unit(w, a)
    checks["sigma_is_automorphism"] = bool(verify_algebra_map(A, A, sigma).bijective)
    checks["sigma_inverse"] = sigma.compose(sigma_inv).is_identity() and sigma_inv.compose(sigma).is_identity()
    checks["conjugation"] = on_generators(w, sigma_inv.compose(w.nu).compose(sigma), gamma)
    return Lemma4Data(a, b, gamma, sigma, sigma_inv, checks)


def approximate_adjuster(w, theta, unit):
    """phi_j = left multiplication by the e_{nu j} component of ``unit`` on stalk data."""
    A = w.A
    comps = []
    for j in range(w.N):
        nj = w.action.vertex(1, j)
        src = theta.images[nj]
        tgt = twist(theta.images[j], 1, w.action)
        elem = A.mul(A.e(nj), A.mul(unit, A.e(nj)))
        comps.append(ChainMap(src, tgt, {0: {0: {0: elem}}}, check=False))
    return Adjuster(theta, w.action, w.action, comps)


def sample_central_units(w, rng, count=10):
    """Random central units of the form kappa * (polynomial in u) with kappa an n-th power."""
    A = w.A
    F = A.field
    u = u_element(w)
    out = []
    for _ in range(count):
        kb = F.random(rng, 4, nonzero=True)
        kappa = kb ** w.n
        a = dict(A.one())
        power = A.one()
        for _k in range(1, w.t // w.n + 1):
            power = A.mul(power, u)
            axpy(a, F.random(rng, 4), power)
        out.append(scale(kappa, a))
    return out


# ---------------------------------------------------------------------------
# the suite

def lemma2_instance(w, Xs):
    """Tilting status of a G-stable set and of its pushdown."""
    O = w.orbit
    down = check_orthogonality(Xs).ok and generation_check(Xs).status == "certified"
    PX = [pushdown(X, O) for X in Xs]
    up = check_orthogonality(PX).ok and generation_check(PX).status == "certified"
    return down, up


def broken_set(w, Xs):
    """Add the shifts by 1 of the nu-orbit of the first summand (stays G-stable, breaks orthogonality)."""
    orbit = sorted({w.action.vertex(p, 0) for p in range(w.n)})
    return list(Xs) + [shift(Xs[k], 1) for k in orbit]


def datum_report(w, name, theta, psi, generation=True, mu=True):
    rep = Report(name, w.params())
    rep.absorb("tilting", verify_tilting_functor(theta, generation=generation))
    rep.absorb("adjuster", verify_adjuster(theta, psi))
    err = compute_equivariance_error(theta, psi)
    rep.require("equivariance_error_is_one", err.ok and err.alpha == w.A.one(),
                w.A.to_str(err.alpha) if err.alpha is not None else None)
    if mu:
        O = w.orbit
        m = build_mu(theta, psi, O, O)
        rep.absorb("mu_tilting", verify_tilting_functor(m, generation=generation))
        left, right = is_morita(theta), is_morita(m)
        rep.require("morita_agrees", left == right, {"theta": left, "mu": right})
    return rep.done()


def theorem6_suite(w, seed=0, generation=True):
    rep = Report("theorem6", dict(w.params(), seed=seed))
    rng = _random.Random(seed)
    rep.require("nu_order", w.order == w.n, w.order)
    th, psi = yoneda_datum(w)
    rep.absorb("yoneda", datum_report(w, "yoneda", th, psi, generation))
    th, psi = shift_datum(w)
    rep.absorb("shift", datum_report(w, "shift", th, psi, generation))
    for name, sigma in picard_data(w):
        th, psi = automorphism_datum(w, sigma)
        rep.absorb(name, datum_report(w, name, th, psi, generation))
    if w.m > 1:
        for l in range(w.m):
            summ, th = build_H_theta(w, l)
            psi = build_psi_phi(w, th)
            rep.absorb(f"theta_{l}", datum_report(w, f"theta_{l}", th, psi, generation))
            down, up = lemma2_instance(w, summ)
            bdown, bup = lemma2_instance(w, broken_set(w, summ))
            rep.require(f"lemma2_theta_{l}", down and up and not bdown and not bup,
                        {"set": [down, up], "broken": [bdown, bup]})
        if w.t == 1:
            for l in range(w.m):
                summ, th = build_Q_eps(w, l)
                psi = build_psi_phi(w, th)
                rep.absorb(f"eps_{l}", datum_report(w, f"eps_{l}", th, psi, generation))
                down, up = lemma2_instance(w, summ)
                bdown, bup = lemma2_instance(w, broken_set(w, summ))
                rep.require(f"lemma2_eps_{l}", down and up and not bdown and not bup,
                            {"set": [down, up], "broken": [bdown, bup]})
    F = w.field
    if F.p and w.n % F.p == 0:
        rep.details["branch"] = "char divides n"
        sub_rep = lemma4_report(w, rng)
        rep.absorb("lemma4", sub_rep)
    else:
        rep.details["branch"] = "char does not divide n"
        roots = []
        for a in sample_central_units(w, rng, 10):
            b = nth_root_central_unit(w.A, a, w.n)
            roots.append(w.A.power(b, w.n) == a)
        rep.require("nth_roots", all(roots), sum(roots))
    return rep.done()


def lemma4_report(w, rng=None):
    """The conjugating automorphism data for a central unit, and the adjuster it produces for Yoneda."""
    rng = rng or _random.Random(0)
    rep = Report("lemma4", w.params())
    A = w.A
    F = A.field
    u = u_element(w)
    if not u:
        rep.details["degenerate"] = "u = 0, so the center is the scalars and a = 1"
        a = A.one()
    else:
        a = add(A.one(), scale(F.random(rng, 3, nonzero=True), u))
    data = lemma4_sigma(w, a)
    for k, v in data.checks.items():
        rep.require(k, v)
    res = correction_pipeline(w, data)
    for k, v in res.items():
        rep.require(k, v)
    return rep.done()


def correction_pipeline(w, data):
    """theta = Yoneda o sigma^{-1} with phi = b^{-1} has error a^{-1}; eps = sigma(b) corrects it."""
    from .tilting import build_adjuster_from_correction, check_sigma_correction
    A = w.A
    theta = precompose(yoneda(A), data.sigma_inv)
    binv = invert_unit(A, data.b)
    phi = approximate_adjuster(w, theta, binv)
    out = {}
    out["phi_natural"] = verify_adjuster(theta, phi).details.get("naturality") is True
    err = compute_equivariance_error(theta, phi)
    ainv = invert_unit(A, data.a)
    out["error_is_a_inverse"] = err.ok and err.alpha == ainv
    eps = data.sigma(data.b)
    out["correction"] = check_sigma_correction(w.action, err.alpha, data.sigma, eps)
    ts, psi = build_adjuster_from_correction(theta, phi, data.sigma, eps)
    out["corrected_adjuster"] = verify_adjuster(ts, psi).ok
    if data.a != A.one():
        bad_eps = A.one()
        out["wrong_correction_rejected"] = not check_sigma_correction(w.action, err.alpha, data.sigma, bad_eps)
        _, bad_psi = build_adjuster_from_correction(theta, phi, data.sigma, bad_eps)
        out["wrong_adjuster_rejected"] = not verify_adjuster(ts, bad_psi).ok
    return out

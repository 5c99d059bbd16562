"""Tilting functor data and its certification.

A ``TiltingFunctorData`` assigns to each idempotent e_j of a based algebra B
a complex X_j over A and to each basis element b of B (from i to j) a
degree-0 chain map X_i -> X_j.  Everything is checked at the level of the
homotopy category: the induced maps e_j B e_i -> Hom_K(X_i, X_j) are
bijective and multiplicative, the X_j are self-orthogonal, and they
generate (through cones, shifts and summands) every indecomposable
projective up to homotopy.
"""

import time

from . import linalg
from .algebra import NotAUnit, add, axpy, invert_unit
from .homotopy import (ChainMap, ProjComplex, as_shifted, cone, hom_k,
                       homotopy_equivalent, identity, is_homotopy_iso,
                       k0_class, minimal_model, pushdown, pushdown_map,
                       s_bullet, shift, split_idempotent, stalk, twist,
                       twist_map, zero_map)


class TiltingFunctorData:
    def __init__(self, source, target, images, morphisms):
        self.source = source
        self.target = target
        self.images = list(images)
        self.morphisms = dict(morphisms)
        for p, e in enumerate(source.idempotents):
            if e not in self.morphisms:
                self.morphisms[e] = identity(self.images[p])

    @classmethod
    def from_generators(cls, B, A, images, arrow_maps):
        """Extend images of the arrows of a Nakayama algebra B along paths."""
        morph = {}
        for b, (i, k) in enumerate(B.labels):
            if k == 0:
                morph[b] = identity(images[i])
                continue
            f = arrow_maps[i]
            for s in range(1, k):
                f = arrow_maps[(i + s) % B.N].compose(f)
            morph[b] = ChainMap(images[i], images[(i + k) % B.N], f.comps, check=False)
        return cls(B, A, images, morph)

    def image(self, p):
        return self.images[p]

    def apply(self, x, i=None, j=None):
        """theta of an element of one corner e_j B e_i, as a chain map X_i -> X_j."""
        B = self.source
        if i is None:
            i, j = B.corner_of(x)
        out = zero_map(self.images[i], self.images[j])
        for b, c in x.items():
            out = out.plus(self.morphisms[b], c)
        return ChainMap(self.images[i], self.images[j], out.comps, check=False)


def yoneda(A):
    images = [stalk(A, p) for p in range(len(A.idempotents))]
    morph = {}
    for b in range(A.dim):
        i, j = A.source[b], A.target[b]
        morph[b] = ChainMap(images[i], images[j], {0: {0: {0: A.basis(b)}}}, check=False)
    return TiltingFunctorData(A, A, images, morph)


def shifted(theta, k):
    """theta followed by the shift [k]."""
    images = [shift(X, k) for X in theta.images]
    morph = {}
    for b, f in theta.morphisms.items():
        i, j = theta.source.source[b], theta.source.target[b]
        morph[b] = ChainMap(images[i], images[j], {d - k: M for d, M in f.comps.items()}, check=False)
    return TiltingFunctorData(theta.source, theta.target, images, morph)


def precompose(theta, sigma):
    """theta o sigma for an automorphism sigma of the source permuting the idempotents."""
    B = theta.source
    perm = sigma.permutes_idempotents()
    if perm is None:
        raise ValueError("sigma must permute the basis idempotents")
    images = [theta.images[perm[p]] for p in range(len(B.idempotents))]
    morph = {}
    for b in range(B.dim):
        i, j = B.source[b], B.target[b]
        f = theta.apply(sigma.images[b], perm[i], perm[j])
        morph[b] = ChainMap(images[i], images[j], f.comps, check=False)
    return TiltingFunctorData(B, theta.target, images, morph)


# ---------------------------------------------------------------------------
# reports

class Report:
    """A named pass/fail/inconclusive record with free-form details."""

    def __init__(self, check, params=None):
        self.check = check
        self.params = dict(params or {})
        self.status = "pass"
        self.details = {}
        self._t0 = time.perf_counter()
        self.elapsed_ms = 0

    def fail(self, key, value):
        self.status = "fail"
        self.details[key] = value

    def inconclusive(self, key, value):
        if self.status == "pass":
            self.status = "inconclusive"
        self.details[key] = value

    def absorb(self, key, sub):
        self.details[key] = sub.as_dict()
        if sub.status == "fail":
            self.status = "fail"
        elif sub.status == "inconclusive" and self.status == "pass":
            self.status = "inconclusive"

    def require(self, key, ok, value=None):
        if ok:
            self.details.setdefault(key, value if value is not None else True)
        else:
            self.fail(key, value if value is not None else False)
        return ok

    def done(self):
        self.elapsed_ms = int((time.perf_counter() - self._t0) * 1000)
        return self

    @property
    def ok(self):
        return self.status == "pass"

    def as_dict(self):
        return {"check": self.check, "params": self.params, "status": self.status,
                "details": self.details, "elapsed_ms": self.elapsed_ms}


# ---------------------------------------------------------------------------
# orthogonality and generation

def shift_window(U, V):
    """Degrees s for which a degree-s map U -> V can be nonzero."""
    if U.is_zero() or V.is_zero():
        return range(0)
    return range(V.lo - U.hi, V.hi - U.lo + 1)


def check_orthogonality(Xs):
    rep = Report("orthogonality")
    uniq = []
    for X in Xs:
        if not any(X is Y for Y in uniq):
            uniq.append(X)
    viol = []
    checked = 0
    for a, U in enumerate(uniq):
        for b, V in enumerate(uniq):
            for s in shift_window(U, V):
                if s == 0:
                    continue
                checked += 1
                dim = hom_k(U, V, s).dim
                if dim:
                    viol.append([a, b, s, dim])
    rep.details["pairs_checked"] = checked
    if viol:
        rep.fail("violations", viol)
    return rep.done()


class GenerationResult:
    def __init__(self, status, witness=None, depth=None, found=None, reason="", k0=None):
        self.status = status          # "certified", "k0fail", "inconclusive"
        self.witness = witness or []
        self.depth = depth
        self.found = found or {}
        self.reason = reason
        self.k0 = k0

    def __repr__(self):
        return f"GenerationResult({self.status}, depth={self.depth}, reason={self.reason!r})"


def k0_spans(Xs, A):
    rows = [list(k0_class(X)) for X in Xs]
    diag = linalg.smith_diagonal(rows, len(A.class_reps))
    ok = len(diag) == len(A.class_reps) and all(abs(v) == 1 for v in diag)
    return ok, diag


def components(X):
    """Positions of the connected blocks of X, as lists of (degree, index)."""
    parent = {}
    for d, t in X.terms.items():
        for k in range(len(t)):
            parent[(d, k)] = (d, k)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for d, M in X.diff.items():
        for r, row in M.items():
            for c in row:
                a, b = find((d, c)), find((d + 1, r))
                if a != b:
                    parent[a] = b
    groups = {}
    for node in sorted(parent):
        groups.setdefault(find(node), []).append(node)
    return list(groups.values())


def block_projection(X, block):
    A = X.algebra
    comps = {}
    for d, k in block:
        comps.setdefault(d, {})[k] = {k: A.e(X.term(d)[k])}
    return ChainMap(X, X, comps, check=False)


def split_components(X):
    """Split a minimal complex into its connected blocks via split_idempotent."""
    blocks = components(X)
    if len(blocks) <= 1:
        return [X] if not X.is_zero() else []
    out = []
    for block in blocks:
        N, _, _ = split_idempotent(X, block_projection(X, block))
        out.append(N)
    return out


def _key(X):
    return (tuple(sorted((d, tuple(t)) for d, t in X.terms.items())),
            repr(sorted((d, sorted((r, sorted((c, sorted(v.items())) for c, v in row.items()))
                                   for r, row in M.items())) for d, M in X.diff.items())))


def _stalk_class(X):
    if len(X.terms) == 1:
        (d, t), = X.terms.items()
        if len(t) == 1:
            return X.algebra.iso_class[t[0]], d
    return None


def generation_check(Xs, targets=None, budget=2000, max_depth=3):
    """Certify that the thick closure of Xs contains every P_j (up to shift and isomorphism)."""
    A = Xs[0].algebra
    if targets is None:
        targets = list(range(len(A.idempotents)))
    want = {A.iso_class[j] for j in targets}
    ok, diag = k0_spans(Xs, A)
    if not ok:
        return GenerationResult("k0fail", reason=f"K0 classes span a lattice with invariants {diag}", k0=diag)

    pool = []          # (complex, depth)
    seen = {}
    script = []
    found = {}

    def add_object(X, depth, origin):
        idx = len(pool)
        sc = _stalk_class(X)
        k = ("stalk",) + sc if sc is not None else _key(X)
        if k in seen:
            return seen[k]
        seen[k] = idx
        pool.append((X, depth))
        script.append(dict(origin, result=idx, depth=depth))
        if sc is not None and sc[0] in want and sc[0] not in found:
            found[sc[0]] = idx
        return idx

    for a, X in enumerate(Xs):
        Xm = minimal_model(X)[0]
        parts = split_components(Xm)
        for c, part in enumerate(parts):
            add_object(part, 0, {"op": "input", "src": a, "component": c})

    cones = 0
    depth = 0
    frontier_start = 0
    while len(found) < len(want) and depth < max_depth:
        depth += 1
        frontier_end = len(pool)
        if frontier_start >= frontier_end:
            break
        n_now = len(pool)
        pairs = [(u, v) for u in range(n_now) for v in range(n_now)
                 if max(pool[u][1], pool[v][1]) == depth - 1]
        # small objects first
        pairs.sort(key=lambda uv: (pool[uv[0]][0].rank() + pool[uv[1]][0].rank(), uv))
        stop = False
        for u, v in pairs:
            U, V = pool[u][0], pool[v][0]
            for s in shift_window(U, V):
                H = hom_k(U, V, s)
                for r, f in enumerate(H.reps):
                    if cones >= budget:
                        stop = True
                        break
                    cones += 1
                    C = cone(as_shifted(f))[0]
                    Cm = minimal_model(C)[0]
                    for c, part in enumerate(split_components(Cm)):
                        add_object(part, depth, {"op": "cone", "src": u, "dst": v, "shift": s,
                                                 "map": r, "component": c})
                    if len(found) == len(want):
                        stop = True
                        break
                if stop:
                    break
            if stop:
                break
        frontier_start = frontier_end
        if cones >= budget:
            break
    if len(found) < len(want):
        missing = sorted(want - set(found))
        return GenerationResult("inconclusive", script, None, found,
                                reason=f"budget exhausted after {cones} cones; missing classes {missing}")
    # keep only the steps needed for the found targets
    needed = set()
    by_result = {st["result"]: st for st in script}
    stack = list(found.values())
    while stack:
        k = stack.pop()
        if k in needed:
            continue
        needed.add(k)
        st = by_result.get(k)
        if st and st["op"] == "cone":
            stack.extend([st["src"], st["dst"]])
    steps = [st for st in script if st["result"] in needed]
    wdepth = max(pool[k][1] for k in found.values())
    return GenerationResult("certified", steps, wdepth, found,
                            reason=f"{cones} cones tried")


def replay_witness(Xs, result):
    """Re-execute a generation witness script; True iff every step reproduces its recorded object."""
    objs = {}
    for st in result.witness:
        if st["op"] == "input":
            Xm = minimal_model(Xs[st["src"]])[0]
            parts = split_components(Xm)
        else:
            U, V = objs[st["src"]], objs[st["dst"]]
            H = hom_k(U, V, st["shift"])
            f = H.reps[st["map"]]
            if not f.is_chain():
                return False
            parts = split_components(minimal_model(cone(as_shifted(f))[0])[0])
        part = parts[st["component"]]
        objs[st["result"]] = part
    for cls, k in result.found.items():
        sc = _stalk_class(objs[k])
        if sc is None or sc[0] != cls:
            return False
    return True


# ---------------------------------------------------------------------------
# tilting functor certification

def corner_map_check(theta):
    """For every idempotent pair, rank of e_j B e_i -> Hom_K(X_i, X_j) against both dimensions."""
    B = theta.source
    F = B.field
    rows = []
    ok = True
    r = len(B.idempotents)
    for i in range(r):
        for j in range(r):
            H = hom_k(theta.images[i], theta.images[j], 0)
            corner = B.corners[(i, j)]
            vecs = []
            for b in corner:
                c = H.coordinates(theta.morphisms[b])
                if c is None:
                    ok = False
                    rows.append([i, j, "not a chain map"])
                    c = [F.zero] * H.dim
                vecs.append({k: v for k, v in enumerate(c) if v != 0})
            rank = linalg.rank(linalg.from_columns(F, H.dim, vecs)) if vecs and H.dim else 0
            if not (rank == len(corner) == H.dim):
                ok = False
                rows.append([i, j, len(corner), H.dim, rank])
    return ok, rows


def multiplicativity_check(theta, limit=None):
    """theta(a) theta(b) ~ theta(ab) on every composable pair of basis elements."""
    B = theta.source
    F = B.field
    by_space = {}
    count = 0
    for b in range(B.dim):
        for a in range(B.dim):
            if B.source[a] != B.target[b]:
                continue
            if a in B.idem_pos or b in B.idem_pos:
                continue
            i, k = B.source[b], B.target[a]
            lhs = theta.morphisms[a].compose(theta.morphisms[b])
            rhs = theta.apply(dict(B.mul_basis(a, b)), i, k)
            diff = lhs - rhs
            by_space.setdefault((i, k), []).append(((a, b), diff))
            count += 1
            if limit and count >= limit:
                break
    bad = []
    for (i, k), items in by_space.items():
        H = hom_k(theta.images[i], theta.images[k], 0)
        rhs = []
        for pair, diff in items:
            if not diff.is_chain():
                bad.append(list(pair))
                continue
            rhs.append((pair, H.space.vec(diff)))
        if not rhs:
            continue
        if not H.boundaries:
            bad.extend(list(p) for p, v in rhs if v)
            continue
        M = linalg.from_columns(F, len(H.space), H.boundaries)
        sols = linalg.solve_many(F, M, [v for _, v in rhs])
        bad.extend(list(p) for (p, _), x in zip(rhs, sols) if x is None)
    return not bad, count, bad


def verify_tilting_functor(theta, generation=True, budget=2000, max_depth=3):
    rep = Report("tilting_functor", {"source_dim": theta.source.dim})
    B = theta.source
    for b, f in theta.morphisms.items():
        if not (f.shift == 0 and f.is_chain()):
            rep.fail("chain_maps", B.label_str(b))
            break
    units = all(theta.morphisms[e] == identity(theta.images[p]) or
                hom_k(theta.images[p], theta.images[p]).is_null(theta.morphisms[e] - identity(theta.images[p]))
                for p, e in enumerate(B.idempotents))
    rep.require("units", units)
    ok, rows = corner_map_check(theta)
    rep.require("corner_bijective", ok, True if ok else rows[:10])
    rep.details["end_dim"] = sum(hom_k(theta.images[i], theta.images[j]).dim
                                 for i in range(len(B.idempotents)) for j in range(len(B.idempotents)))
    ok, count, bad = multiplicativity_check(theta)
    rep.details["pairs_multiplied"] = count
    rep.require("multiplicative", ok, True if ok else bad[:10])
    rep.absorb("orthogonality", check_orthogonality(theta.images))
    if generation:
        gen = generation_check(theta.images, budget=budget, max_depth=max_depth)
        rep.details["generation"] = {"status": gen.status, "depth": gen.depth, "reason": gen.reason,
                                     "witness": gen.witness}
        if gen.status == "k0fail":
            rep.fail("generation_status", "k0fail")
        elif gen.status == "inconclusive":
            rep.inconclusive("generation_status", "inconclusive")
        else:
            rep.details["generation_replayed"] = replay_witness(theta.images, gen)
            if not rep.details["generation_replayed"]:
                rep.fail("generation_replayed", False)
    return rep.done()


def is_morita(theta):
    """True iff every image is homotopy equivalent to a complex concentrated in degree 0."""
    for X in theta.images:
        Xm = minimal_model(X)[0]
        if any(d != 0 for d in Xm.terms):
            return False
    return True


# ---------------------------------------------------------------------------
# adjusters

class Adjuster:
    """psi_j: theta(nu_B j) -> ^g theta(j) for every idempotent position j of the source.

    ``act_B`` acts on the source algebra and ``act_A`` on the target algebra.
    """

    def __init__(self, theta, act_B, act_A, comps):
        self.theta = theta
        self.act_B = act_B
        self.act_A = act_A
        self.comps = list(comps)
        self._pow = {}

    @property
    def n(self):
        return self.act_B.n

    def power(self, p, j):
        """psi_{g^p, j}: theta(nu^p j) -> ^{g^p} theta(j)."""
        key = (p, j)
        if key in self._pow:
            return self._pow[key]
        theta = self.theta
        if p == 0:
            out = identity(theta.images[j])
        elif p == 1:
            out = self.comps[j]
        else:
            nj = self.act_B.vertex(1, j)
            prev = self.power(p - 1, nj)                 # theta(nu^p j) -> ^{g^{p-1}} theta(nu j)
            head = twist_map(self.comps[j], p - 1, self.act_A, src=prev.tgt)
            out = head.compose(prev)
            out = ChainMap(prev.src, twist(theta.images[j], p, self.act_A), out.comps, check=False)
        self._pow[key] = out
        return out


def canonical_adjuster(theta, act_B, act_A):
    """Identity matrices theta(nu j) -> ^g theta(j), valid when the two complexes coincide as data."""
    comps = []
    for j in range(len(theta.source.idempotents)):
        src = theta.images[act_B.vertex(1, j)]
        tgt = twist(theta.images[j], 1, act_A)
        if src != tgt:
            raise ValueError(f"theta(nu e_{j}) and ^g theta(e_{j}) differ as data")
        comps.append(ChainMap(src, tgt, identity(src).comps, check=False))
    return Adjuster(theta, act_B, act_A, comps)


def naturality_failures(psi, p=1):
    B = psi.theta.source
    theta = psi.theta
    bad = []
    nu_p = psi.act_B.pow[p % psi.n]
    for b in range(B.dim):
        if b in B.idem_pos:
            continue
        i, j = B.source[b], B.target[b]
        nb = nu_p(B.basis(b))
        ni, nj = psi.act_B.vertex(p, i), psi.act_B.vertex(p, j)
        lhs = psi.power(p, j).compose(theta.apply(nb, ni, nj))
        tb = twist_map(theta.morphisms[b], p, psi.act_A, src=psi.power(p, i).tgt, tgt=psi.power(p, j).tgt)
        rhs = tb.compose(psi.power(p, i))
        diff = ChainMap(lhs.src, lhs.tgt, (lhs - rhs).comps, check=False)
        H = hom_k(diff.src, diff.tgt, 0)
        if not H.is_null(diff):
            bad.append(B.label_str(b))
    return bad


def verify_adjuster(theta, psi, composite_pairs=None):
    rep = Report("adjuster", {"n": psi.n})
    r = len(theta.source.idempotents)
    for j in range(r):
        f = psi.comps[j]
        if not f.is_chain():
            rep.fail("chain_maps", j)
            return rep.done()
    isos = [j for j in range(r) if not is_homotopy_iso(psi.comps[j])]
    rep.require("isomorphisms", not isos, True if not isos else isos)
    bad = naturality_failures(psi, 1)
    rep.require("naturality", not bad, True if not bad else bad[:10])
    closed = []
    for j in range(r):
        f = psi.power(psi.n, j)
        X = theta.images[j]
        diff = ChainMap(X, X, (f - identity(X)).comps, check=False)
        # the n-fold composite lands in ^{g^n} X = X
        if not hom_k(X, X, 0).is_null(diff):
            closed.append(j)
    rep.require("cocycle", not closed, True if not closed else closed)
    # every composite pair (g^a, g^b): psi_{g^{a+b}} = ^{g^b}psi_{g^a} psi_{g^b}-style naturality at g^p
    for p in (composite_pairs or []):
        bad = naturality_failures(psi, p)
        rep.require(f"naturality_g^{p}", not bad, True if not bad else bad[:10])
    return rep.done()


# ---------------------------------------------------------------------------
# equivariance errors and corrections

def theta_preimage(theta, f, j):
    """The element c of e_j B e_j with theta(c) ~ f, for f in End_K(X_j)."""
    B = theta.source
    F = B.field
    X = theta.images[j]
    H = hom_k(X, X, 0)
    corner = B.corners[(j, j)]
    cols = []
    for b in corner:
        c = H.coordinates(theta.morphisms[b])
        cols.append({k: v for k, v in enumerate(c) if v != 0})
    target = H.coordinates(ChainMap(X, X, f.comps, check=False))
    if target is None:
        return None
    x = linalg.solve(F, linalg.from_columns(F, H.dim, cols), {k: v for k, v in enumerate(target) if v != 0})
    if x is None:
        return None
    return {corner[k]: v for k, v in enumerate(x) if v != 0}


class ErrorResult:
    def __init__(self, alpha, central, unit):
        self.alpha = alpha
        self.central = central
        self.unit = unit

    @property
    def ok(self):
        return self.alpha is not None and self.central and self.unit


def compute_equivariance_error(theta, phi):
    """alpha in Z(B)* with phi_{g^n, j} ~ theta(alpha e_j) for all j."""
    B = theta.source
    alpha = {}
    for j in range(len(B.idempotents)):
        c = theta_preimage(theta, phi.power(phi.n, j), j)
        if c is None:
            return ErrorResult(None, False, False)
        alpha = add(alpha, c)
    central = B.is_central(alpha)
    unit = not isinstance(invert_unit(B, alpha), NotAUnit)
    return ErrorResult(alpha, central, unit)


def correction_composite(act, eps, p):
    """eps_{g^p} = nu^{p-1}(eps_g) eps_{g^{p-1}} as elements."""
    B = act.algebra
    out = B.one()
    for q in range(p):
        out = B.mul(act.apply(q, eps), out)
    return out


def check_sigma_correction(act, alpha, sigma, eps):
    """alpha . eps_{g^n} = 1 (sigma fixes idempotents up to the action, so components match)."""
    B = act.algebra
    if sigma is not None and sigma.permutes_idempotents() is None:
        return False
    return B.mul(alpha, correction_composite(act, eps, act.n)) == B.one()


def build_adjuster_from_correction(theta, phi, sigma, eps):
    """psi_x = phi_{sigma x} o theta(eps_x) for the functor theta o sigma."""
    B = theta.source
    ts = precompose(theta, sigma)
    perm = sigma.permutes_idempotents()
    act_B, act_A = phi.act_B, phi.act_A
    comps = []
    for x in range(len(B.idempotents)):
        nx = act_B.vertex(1, x)
        sx = perm[x]
        snx = perm[nx]
        nsx = act_B.vertex(1, sx)
        e_x = B.mul(B.e(nsx), B.mul(eps, B.e(snx)))
        te = theta.apply(e_x, snx, nsx) if e_x else zero_map(theta.images[snx], theta.images[nsx])
        f = phi.comps[sx].compose(te)
        src = ts.images[nx]
        tgt = twist(ts.images[x], 1, act_A)
        comps.append(ChainMap(src, tgt, f.comps, check=False))
    return ts, Adjuster(ts, act_B, act_A, comps)


# ---------------------------------------------------------------------------
# the functor mu on the orbit algebra

def build_mu(theta, psi, OB, OA):
    """mu(P y) = P_* theta(y); mu(s_{g^l} P w) = s_{*,g^l} o P_* psi_{g^l, y} o P_* theta(w)."""
    B = theta.source
    act = psi.act_B
    images = [pushdown(X, OA) for X in theta.images]
    morph = {}
    for ob in range(OB.dim):
        l, w = OB.split(ob)
        x, j = B.source[w], B.target[w]
        y = act.vertex(-l, j)
        tw = psi.power(l, y)                          # theta(nu^l y) -> ^{g^l} theta(y)
        Ptw = pushdown_map(tw, OA)
        Pth = pushdown_map(theta.morphisms[w], OA, src=images[x], tgt=Ptw.src)
        sb = s_bullet(theta.images[y], l, OA, src=Ptw.tgt, tgt=images[y])
        f = sb.compose(Ptw).compose(Pth)
        morph[ob] = ChainMap(images[x], images[y], f.comps, check=False)
    return TiltingFunctorData(OB, OA, images, morph)


class GEquivalenceDatum:
    """A tilting functor together with an equivariance adjuster."""

    def __init__(self, theta, psi):
        self.theta = theta
        self.psi = psi

    def mu(self, OB, OA):
        return build_mu(self.theta, self.psi, OB, OA)

    def verify(self, generation=True):
        rep = Report("datum", {"source_dim": self.theta.source.dim})
        rep.absorb("tilting", verify_tilting_functor(self.theta, generation=generation))
        rep.absorb("adjuster", verify_adjuster(self.theta, self.psi))
        return rep.done()


# ---------------------------------------------------------------------------
# G-gradings of complexes over an orbit algebra
#
# Slot l of the summand Pe_c O is {(l, w) : w ends at nu^l c}, a copy of
# P_{nu^l c}.  A grading gives every slot of every summand a degree in Z_n.
# An entry (l', v) sends slot a to slot a + l' and acts there as nu^a(v).

class Grading:
    def __init__(self, X, O, deg):
        self.complex = X
        self.orbit = O
        self.deg = deg                  # (d, k) -> list over slots

    def slots(self, g):
        """{d: [(k, l)]} of the slots with degree g, in a fixed order."""
        n = self.orbit.n
        out = {}
        for d in self.complex.degrees():
            row = [(k, l) for k in range(len(self.complex.term(d))) for l in range(n)
                   if self.deg[(d, k)][l] % n == g % n]
            if row:
                out[d] = row
        return out


def canonical_grading(X, O, delta=None):
    """Slot l of summand k has degree delta_k - l."""
    delta = delta or {}
    n = O.n
    deg = {(d, k): [(delta.get((d, k), 0) - l) % n for l in range(n)]
           for d in X.degrees() for k in range(len(X.term(d)))}
    return Grading(X, O, deg)


def trivial_grading(X, O):
    deg = {(d, k): [0] * O.n for d in X.degrees() for k in range(len(X.term(d)))}
    return Grading(X, O, deg)


def _slot_entry(O, elem, a, b):
    """The A-entry from slot a to slot b read off an orbit entry."""
    A = O.base
    act = O.action
    out = {}
    for x, c in elem.items():
        l, w = O.split(x)
        if (a + l) % O.n == b % O.n:
            axpy(out, c, act.apply(a, {w: A.field.one}))
    return out


def _restrict_matrix(O, M, src_slots, tgt_slots):
    out = {}
    for r, (kr, lr) in enumerate(tgt_slots):
        for c, (kc, lc) in enumerate(src_slots):
            elem = M.get(kr, {}).get(kc)
            if not elem:
                continue
            v = _slot_entry(O, elem, lc, lr)
            if v:
                out.setdefault(r, {})[c] = v
    return out


def graded_part(grading, g):
    """The A-complex of the degree-g slots, with the slot list per degree."""
    X, O = grading.complex, grading.orbit
    act = O.action
    slots = grading.slots(g)
    terms = {d: [act.vertex(l, X.term(d)[k]) for k, l in row] for d, row in slots.items()}
    diff = {}
    for d, M in X.diff.items():
        if d in slots and d + 1 in slots:
            R = _restrict_matrix(O, M, slots[d], slots[d + 1])
            if R:
                diff[d] = R
    return ProjComplex(O.base, terms, diff, check=False), slots


def restrict_map(f, gsrc, gtgt, a, b, src=None, tgt=None):
    """The A-chain map from the degree-a slots of the source to the degree-b slots of the target."""
    O = gsrc.orbit
    S, ss = graded_part(gsrc, a)
    T, ts = graded_part(gtgt, b)
    comps = {}
    for d, M in f.comps.items():
        if d in ss and d + f.shift in ts:
            R = _restrict_matrix(O, M, ss[d], ts[d + f.shift])
            if R:
                comps[d] = R
    return ChainMap(src or S, tgt or T, comps, shift=f.shift, check=False)


def degree_audit(O, mats, gsrc, gtgt, h, shift=0):
    """Entries of {d: matrix} that do not raise every slot degree by exactly h."""
    n = O.n
    bad = []
    for d, M in mats.items():
        for r, row in M.items():
            for c, elem in row.items():
                for x in elem:
                    l, _ = O.split(x)
                    for a in range(n):
                        if (gtgt.deg[(d + shift, r)][(a + l) % n] - gsrc.deg[(d, c)][a] - h) % n:
                            bad.append([d, r, c, O.label_str(x)])
                            break
    return bad


class GradedTilting:
    """A tilting functor over the orbit algebra with gradings on its images."""

    def __init__(self, mu, gradings, audit):
        self.mu = mu
        self.gradings = gradings
        self.audit = audit

    @property
    def ok(self):
        return not self.audit

    def rerun_audit(self):
        self.audit = audit_graded(self.mu, self.gradings)
        return self.ok


def audit_graded(mu, gradings):
    OB, OA = mu.source, mu.target
    bad = []
    for j, X in enumerate(mu.images):
        for v in degree_audit(OA, X.diff, gradings[j], gradings[j], 0, shift=1):
            bad.append(["differential", j] + v)
    for ob, f in mu.morphisms.items():
        h = g_degree_of(OB, ob)
        i, j = OB.source[ob], OB.target[ob]
        for v in degree_audit(OA, f.comps, gradings[i], gradings[j], h):
            bad.append(["morphism", OB.label_str(ob)] + v)
    return bad


def g_degree_of(O, b):
    return (-O.split(b)[0]) % O.n


def grade_mu(mu, gradings=None):
    """Equip the images of mu with gradings (canonical by default) and audit every entry."""
    OA = mu.target
    if gradings is None:
        gradings = [canonical_grading(X, OA) for X in mu.images]
    return GradedTilting(mu, gradings, audit_graded(mu, gradings))


def grade_datum(theta, psi, OB, OA):
    return grade_mu(build_mu(theta, psi, OB, OA))


def xi_map(U, grading, PU):
    """The isomorphism U -> P_*(U~) sending summand k to its degree-0 slots."""
    OA = grading.orbit
    slots = grading.slots(0)
    comps = {}
    for d, row in slots.items():
        for r, (k, l) in enumerate(row):
            c = U.term(d)[k]
            comps.setdefault(d, {}).setdefault(r, {})[k] = OA.embed(-l, OA.base.e(c))
    return ChainMap(U, PU, comps, check=False)


class Ungraded:
    def __init__(self, datum, xis, report):
        self.datum = datum
        self.xis = xis
        self.report = report


def ungrade_tilde(G, check=True):
    """Recover (theta~, psi~) from a graded functor over the orbit algebra, with the four conditions."""
    mu = G.mu
    OB, OA = mu.source, mu.target
    B = OB.base
    act_B, act_A = OB.action, OA.action
    rep = Report("ungrade", {"source_dim": B.dim})
    if not G.ok:
        rep.fail("degree_preserving", G.audit[:10])
        return Ungraded(None, None, rep.done())
    r = len(B.idempotents)
    parts = [graded_part(G.gradings[j], 0)[0] for j in range(r)]
    morph = {}
    for b in range(B.dim):
        i, j = B.source[b], B.target[b]
        ob = OB.elem_index(0, b)
        morph[b] = restrict_map(mu.morphisms[ob], G.gradings[i], G.gradings[j], 0, 0,
                                src=parts[i], tgt=parts[j])
    theta = TiltingFunctorData(B, OA.base, parts, morph)
    comps = []
    twist_ok = True
    for y in range(r):
        ny = act_B.vertex(1, y)
        s = OB.elem_index(1, B.idempotents[ny])
        target = twist(parts[y], 1, act_A)
        f = restrict_map(mu.morphisms[s], G.gradings[ny], G.gradings[y], 0, -1)
        if f.tgt != target:
            twist_ok = False
        comps.append(ChainMap(parts[ny], target, f.comps, check=False))
    psi = Adjuster(theta, act_B, act_A, comps)
    datum = GEquivalenceDatum(theta, psi)
    PU = [pushdown(X, OA) for X in parts]
    xis = [xi_map(mu.images[j], G.gradings[j], PU[j]) for j in range(r)]
    if not check:
        return Ungraded(datum, xis, rep.done())
    # 1) xi is an isomorphism
    bad = [j for j in range(r) if not is_homotopy_iso(xis[j])]
    rep.require("xi_isomorphism", not bad, True if not bad else bad)
    if bad:
        return Ungraded(datum, xis, rep.done())
    # 2) theta~ is an equivalence onto its image
    ok, rows = corner_map_check(theta)
    rep.require("theta_corner_bijective", ok, True if ok else rows[:10])
    ok, _, badm = multiplicativity_check(theta)
    rep.require("theta_multiplicative", ok, True if ok else badm[:10])
    # 3) psi~ is an adjuster
    rep.require("psi_targets_are_twists", twist_ok)
    rep.absorb("psi_adjuster", verify_adjuster(theta, psi))
    # 4) xi identifies mu with mu_{theta~, psi~}
    mu2 = build_mu(theta, psi, OB, OA)
    bad = xi_naturality_failures(mu, mu2, xis)
    rep.require("xi_natural", not bad, True if not bad else bad[:10])
    return Ungraded(datum, xis, rep.done())


def xi_naturality_failures(mu, mu2, xis):
    """Basis elements f with xi_y mu(f) not homotopic to mu2(f) xi_x."""
    OB = mu.source
    F = OB.field
    groups = {}
    for ob in range(OB.dim):
        x, y = OB.source[ob], OB.target[ob]
        lhs = xis[y].compose(mu.morphisms[ob])
        rhs = mu2.morphisms[ob].compose(xis[x])
        diff = ChainMap(mu.images[x], mu2.images[y], (lhs - rhs).comps, check=False)
        groups.setdefault((x, y), []).append((ob, diff))
    bad = []
    for (x, y), items in groups.items():
        H = hom_k(mu.images[x], mu2.images[y], 0)
        vecs = []
        for ob, diff in items:
            if not diff.is_chain():
                bad.append(OB.label_str(ob))
                continue
            vecs.append((ob, H.space.vec(diff)))
        if not H.boundaries:
            bad.extend(OB.label_str(ob) for ob, v in vecs if v)
            continue
        M = linalg.from_columns(F, len(H.space), H.boundaries)
        sols = linalg.solve_many(F, M, [v for _, v in vecs])
        bad.extend(OB.label_str(ob) for (ob, _), s in zip(vecs, sols) if s is None)
    return bad


def round_trip(theta, psi, OB, OA, rng=None):
    """grade, ungrade, regrade: conditions of the ungrading plus homotopy-equivalent images."""
    rep = Report("graded_round_trip", {"source_dim": theta.source.dim})
    G = grade_datum(theta, psi, OB, OA)
    rep.require("degree_preserving", G.ok, True if G.ok else G.audit[:10])
    U = ungrade_tilde(G)
    rep.absorb("conditions", U.report)
    if U.datum is None:
        return rep.done()
    same = [homotopy_equivalent(X, Y, rng).ok for X, Y in zip(theta.images, U.datum.theta.images)]
    rep.require("theta_images_equivalent", all(same), same)
    G2 = grade_mu(U.datum.mu(OB, OA))
    rep.require("regraded_degree_preserving", G2.ok)
    same = [homotopy_equivalent(X, Y, rng).ok for X, Y in zip(G.mu.images, G2.mu.images)]
    rep.require("mu_images_equivalent", all(same), same)
    return rep.done()

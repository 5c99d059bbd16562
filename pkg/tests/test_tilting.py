import random

import pytest

from derpic.algebra import add, invert_unit, scale
from derpic.homotopy import (ChainMap, hom_k, homotopy_equivalent, pushdown,
                             shift, stalk, twist, zero_map)
from derpic.tilting import (Adjuster, GEquivalenceDatum, GradedTilting,
                            TiltingFunctorData, audit_graded,
                            build_adjuster_from_correction, build_mu,
                            canonical_grading,
                            check_orthogonality, check_sigma_correction,
                            compute_equivariance_error, generation_check,
                            grade_datum, grade_mu, is_morita, replay_witness,
                            round_trip, shifted, trivial_grading, ungrade_tilde,
                            verify_adjuster, verify_tilting_functor, yoneda)
from derpic.witnesses import (H_summands, approximate_adjuster, build_H_theta,
                              build_psi_phi, build_Q_eps, u_element,
                              yoneda_datum)

from conftest import world


def W321():
    return world(3, 2, 1)


def theta0():
    return build_H_theta(W321(), 0)


# -- orthogonality and generation --------------------------------------------

def test_orthogonality_stalks():
    A = W321().A
    assert check_orthogonality([stalk(A, i) for i in range(6)]).ok


def test_orthogonality_H0():
    summ, _ = theta0()
    assert check_orthogonality(summ).ok


def test_orthogonality_violation_at_shift_one():
    A = W321().A
    P = stalk(A, 0)
    rep = check_orthogonality([P, shift(P, 1)])
    assert not rep.ok
    assert [1, 0, 1, 1] in rep.details["violations"]


def test_generation_H0():
    summ, _ = theta0()
    res = generation_check(summ)
    assert res.status == "certified"
    assert res.depth <= 2
    assert replay_witness(summ, res)


def test_generation_Q0():
    w = world(2, 2, 1)
    summ, _ = build_Q_eps(w, 0)
    res = generation_check(summ)
    assert res.status == "certified"
    assert res.depth == 1


def test_generation_k0fail():
    A = W321().A
    res = generation_check([stalk(A, 0)])
    assert res.status == "k0fail"


def test_generation_inconclusive_under_tiny_budget():
    summ, _ = theta0()
    res = generation_check(summ, budget=0, max_depth=0)
    assert res.status == "inconclusive"


# -- tilting functors --------------------------------------------------------

def test_yoneda_passes():
    rep = verify_tilting_functor(yoneda(W321().A))
    assert rep.ok
    assert rep.details["end_dim"] == 18


def test_theta0_passes():
    _, th = theta0()
    rep = verify_tilting_functor(th)
    assert rep.ok, rep.details
    assert rep.details["end_dim"] == 18


def test_zeroed_morphism_fails_corner():
    _, th = theta0()
    A = th.source
    b = A.arrow(2)
    morph = dict(th.morphisms)
    f = morph[b]
    morph[b] = zero_map(f.src, f.tgt)
    bad = TiltingFunctorData(th.source, th.target, th.images, morph)
    rep = verify_tilting_functor(bad, generation=False)
    assert rep.status == "fail"
    assert rep.details["corner_bijective"] is not True


def test_is_morita():
    A = W321().A
    assert is_morita(yoneda(A))
    assert not is_morita(theta0()[1])
    assert not is_morita(shifted(yoneda(A), 1))


# -- adjusters ---------------------------------------------------------------

def test_canonical_adjusters_pass():
    w = W321()
    th, psi = yoneda_datum(w)
    assert verify_adjuster(th, psi).ok
    _, th = theta0()
    psi = build_psi_phi(w, 0)
    rep = verify_adjuster(th, psi, composite_pairs=[2])
    assert rep.ok, rep.details
    assert compute_equivariance_error(th, psi).alpha == w.A.one()


def test_psi_components_are_identity_matrices():
    w = W321()
    _, th = theta0()
    psi = build_psi_phi(w, th)
    for j in range(w.N):
        f = psi.comps[j]
        for d, t in f.src.terms.items():
            assert f.comps[d] == {k: {k: w.A.e(i)} for k, i in enumerate(t)}


def test_scaled_adjuster_breaks_cocycle():
    w = W321()
    th, psi = yoneda_datum(w)
    comps = list(psi.comps)
    comps[0] = comps[0].scaled(w.field(2))
    bad = Adjuster(th, psi.act_B, psi.act_A, comps)
    rep = verify_adjuster(th, bad)
    assert rep.details["cocycle"] != True  # noqa: E712
    assert rep.status == "fail"


def test_error_of_scaled_adjuster():
    # phi scaled by a central unit c has error c^n
    w = world(2, 1, 3)
    A = w.A
    th = yoneda(A)
    u = u_element(w)
    c = add(scale(w.field(2), A.one()), u)
    phi = approximate_adjuster(w, th, c)
    err = compute_equivariance_error(th, phi)
    assert err.ok
    assert err.alpha == A.power(c, w.n)


def test_sigma_correction_examples():
    w = world(2, 1, 3)
    A = w.A
    ident = w.nu.power(0)
    assert check_sigma_correction(w.action, A.one(), ident, A.one())
    c = add(scale(w.field(3), A.one()), u_element(w))
    alpha = A.power(c, w.n)
    assert check_sigma_correction(w.action, alpha, ident, invert_unit(A, c))
    assert not check_sigma_correction(w.action, alpha, ident, A.one())


def test_trivial_correction_recovers_phi():
    w = W321()
    th, phi = yoneda_datum(w)
    ts, psi = build_adjuster_from_correction(th, phi, w.nu.power(0), w.A.one())
    assert [f.comps for f in psi.comps] == [f.comps for f in phi.comps]
    assert verify_adjuster(ts, psi).ok


def test_wrong_correction_fails():
    w = world(2, 1, 3)
    A = w.A
    th = yoneda(A)
    c = add(A.one(), u_element(w))
    phi = approximate_adjuster(w, th, c)
    ts, psi = build_adjuster_from_correction(th, phi, w.nu.power(0), A.one())
    assert not verify_adjuster(ts, psi).ok
    ts, psi = build_adjuster_from_correction(th, phi, w.nu.power(0), invert_unit(A, c))
    assert verify_adjuster(ts, psi).ok


# -- mu over the orbit algebra -----------------------------------------------

def test_mu_of_yoneda():
    w = W321()
    O = w.orbit
    th, psi = yoneda_datum(w)
    mu = build_mu(th, psi, O, O)
    rep = verify_tilting_functor(mu)
    assert rep.ok
    assert rep.details["end_dim"] == 54
    assert is_morita(mu)
    # the images are exactly the representables of O
    assert [X.terms for X in mu.images] == [{0: [j]} for j in range(6)]


def test_mu_of_theta0():
    w = W321()
    O = w.orbit
    _, th = theta0()
    psi = build_psi_phi(w, th)
    mu = GEquivalenceDatum(th, psi).mu(O, O)
    rep = verify_tilting_functor(mu)
    assert rep.ok, rep.details
    assert rep.details["end_dim"] == 54
    assert not is_morita(mu)


def test_datum_verify():
    w = world(2, 2, 1)
    _, th = build_Q_eps(w, 1)
    assert GEquivalenceDatum(th, build_psi_phi(w, 1, "q")).verify().ok


# -- gradings ----------------------------------------------------------------

def test_grade_yoneda_and_theta0():
    w = W321()
    O = w.orbit
    th, psi = yoneda_datum(w)
    assert grade_datum(th, psi, O, O).ok
    _, th = theta0()
    assert grade_datum(th, build_psi_phi(w, th), O, O).ok


def test_injected_entry_fails_audit():
    w = W321()
    O = w.orbit
    th, psi = yoneda_datum(w)
    G = grade_datum(th, psi, O, O)
    mu = G.mu
    b = O.elem_index(0, w.A.idempotents[0])
    f = mu.morphisms[b]
    comps = {d: {r: {c: dict(v) for c, v in row.items()} for r, row in M.items()} for d, M in f.comps.items()}
    entry = comps[0][0][0]
    # (2, beta_{0,2}) lies in the same corner as e_0 but has G-degree g^{-2}
    extra = O.embed(2, w.A.path_elem(0, 2))
    assert O.source[min(extra)] == O.target[min(extra)] == 0
    for k, v in extra.items():
        entry[k] = v
    morph = dict(mu.morphisms)
    morph[b] = ChainMap(f.src, f.tgt, comps, check=False)
    bad = GradedTilting(TiltingFunctorData(mu.source, mu.target, mu.images, morph), G.gradings, [])
    assert not bad.rerun_audit()
    assert audit_graded(bad.mu, G.gradings)


def test_ungrade_yoneda():
    w = W321()
    O = w.orbit
    th, psi = yoneda_datum(w)
    U = ungrade_tilde(grade_datum(th, psi, O, O))
    assert U.report.ok, U.report.details
    assert [X.terms for X in U.datum.theta.images] == [X.terms for X in th.images]


def test_round_trip_theta0():
    w = W321()
    O = w.orbit
    _, th = theta0()
    rep = round_trip(th, build_psi_phi(w, th), O, O, random.Random(0))
    assert rep.ok, rep.details
    for key in ("xi_isomorphism", "theta_corner_bijective", "theta_multiplicative",
                "psi_targets_are_twists", "xi_natural"):
        assert rep.details["conditions"]["details"][key] is True


def test_trivial_grading_breaks_xi():
    w = W321()
    O = w.orbit
    _, th = theta0()
    mu = build_mu(th, build_psi_phi(w, th), O, O)
    G = grade_mu(mu, [trivial_grading(X, O) for X in mu.images])
    assert not G.ok
    # skip the audit so that the ungrading itself runs on the trivial grading
    U = ungrade_tilde(GradedTilting(mu, G.gradings, []))
    assert U.report.status == "fail"
    assert U.report.details["xi_isomorphism"] is not True


@pytest.mark.parametrize("delta", [1, 2])
def test_uniform_delta_round_trip(delta):
    w = W321()
    O = w.orbit
    _, th = theta0()
    mu = build_mu(th, build_psi_phi(w, th), O, O)
    grads = []
    for X in mu.images:
        dl = {(d, k): delta for d in X.degrees() for k in range(len(X.term(d)))}
        grads.append(canonical_grading(X, O, dl))
    G = grade_mu(mu, grads)
    assert G.ok
    U = ungrade_tilde(G)
    assert U.report.ok, U.report.details
    # the degree-0 slots are now slot delta, so the recovered images are twists
    rng = random.Random(1)
    assert all(homotopy_equivalent(twist(X, delta, w.action), Y, rng).ok
               for X, Y in zip(th.images, U.datum.theta.images))


def test_pushdown_preserves_orthogonality():
    w = W321()
    O = w.orbit
    summ = H_summands(w, 1)
    assert check_orthogonality([pushdown(X, O) for X in summ]).ok
    assert hom_k(pushdown(summ[0], O), pushdown(summ[0], O)).dim >= 1

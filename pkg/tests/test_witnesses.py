import random

import pytest

from derpic.algebra import add, nth_root_central_unit, scale
from derpic.homotopy import hom_k, stalk
from derpic.tilting import (check_orthogonality, compute_equivariance_error,
                            generation_check, verify_adjuster,
                            verify_tilting_functor)
from derpic.witnesses import (broken_set, build_H_theta, build_psi_phi,
                              build_Q_eps, build_world, build_X, build_X_Y,
                              build_Y, corner_morita, correction_pipeline,
                              gamma_table, lemma2_instance, lemma4_sigma,
                              norm, on_generators, picard_data,
                              sample_central_units, theorem6_suite,
                              u_element, verify_algebra_map)

from conftest import world


def test_world_counts():
    w = world(3, 2, 1)
    assert (w.A.dim, w.orbit.dim) == (18, 54)
    w = world(2, 1, 3, "F2")
    assert (w.A.dim, w.orbit.dim) == (8, 16)


def test_world_rejects_gcd():
    with pytest.raises(ValueError, match="gcd"):
        build_world(2, 2, 2)


def test_X_and_Y():
    w = world(3, 2, 1)
    assert build_X(w, 0).terms == {-2: [4], -1: [5], 0: [1]}
    w2 = world(2, 2, 1)
    Y = build_Y(w2, 0, 1)
    assert Y.terms == {0: [0], 1: [1]}
    assert Y.d(0) == {0: {0: w2.A.path_elem(0, 1)}}
    assert build_X_Y(w2, 0, 1) == Y
    with pytest.raises(ValueError):
        build_Y(w2, 0, 2)


def test_H0_summands_and_theta():
    w = world(3, 2, 1)
    summ, th = build_H_theta(w, 0)
    stalks = sorted(X.terms[0][0] for X in summ if len(X.terms) == 1)
    xs = sorted(X.terms[0][0] - 1 for X in summ if len(X.terms) == 3)
    assert stalks == [1, 3, 5]
    assert xs == [0, 2, 4]                        # X_i ends in P_{i+1}
    assert th.images[0].terms == {0: [1]}
    assert th.images[1] == build_X(w, 0)


def test_H0_datum():
    w = world(3, 2, 1)
    _, th = build_H_theta(w, 0)
    rep = verify_tilting_functor(th)
    assert rep.ok
    assert rep.details["end_dim"] == 18
    assert rep.details["generation"]["depth"] <= 2


def test_Q0_datum():
    w = world(2, 2, 1)
    summ, th = build_Q_eps(w, 0)
    assert [X.terms for X in summ] == [{0: [0]}, {0: [0], 1: [1]}, {0: [2]}, {0: [2], 1: [3]}]
    rep = verify_tilting_functor(th)
    assert rep.ok
    assert rep.details["end_dim"] == 12
    assert rep.details["generation"]["depth"] == 1


def test_Q_needs_t_one():
    with pytest.raises(ValueError):
        build_Q_eps(world(2, 2, 3), 0)
    with pytest.raises(ValueError):
        build_H_theta(world(2, 1, 3), 0)


def test_adjusters_of_catalog():
    w = world(3, 2, 1)
    for l in range(w.m):
        _, th = build_H_theta(w, l)
        psi = build_psi_phi(w, l)
        assert verify_adjuster(th, psi, composite_pairs=[2]).ok
    w = world(2, 2, 1)
    for l in range(w.m):
        _, th = build_Q_eps(w, l)
        psi = build_psi_phi(w, l, "q")
        assert verify_adjuster(th, psi).ok
        assert compute_equivariance_error(th, psi).alpha == w.A.one()


def test_corner_morita():
    c, phi, chk = corner_morita(world(3, 2, 1))
    assert c.algebra.dim == 6 and chk.bijective and c.full
    c, phi, chk = corner_morita(world(2, 1, 3))
    assert c.algebra.dim == 4 and chk.bijective and c.full


def test_picard_data_are_automorphisms():
    for params in [(3, 2, 1, "Q"), (2, 2, 3, "F5"), (2, 1, 3, "F2")]:
        w = world(*params)
        for name, sigma in picard_data(w):
            chk = verify_algebra_map(w.A, w.A, sigma)
            assert chk.bijective, name
            # commutes with nu
            assert on_generators(w, sigma.compose(w.nu), w.nu.compose(sigma))


def test_lemma4_example():
    w = world(2, 1, 3, "F2")
    A = w.A
    u = u_element(w)
    assert u == add(A.path_elem(0, 2), A.path_elem(1, 2))
    a = add(A.one(), u)
    data = lemma4_sigma(w, a)
    assert data.b == add(A.one(), A.path_elem(1, 2))
    assert norm(w, data.b) == a
    assert data.ok, data.checks
    assert on_generators(w, data.sigma_inv.compose(w.nu).compose(data.sigma), data.gamma)
    assert on_generators(w, data.gamma, gamma_table(w, a))


def test_lemma4_trivial_unit():
    w = world(2, 1, 3, "F2")
    data = lemma4_sigma(w, w.A.one())
    assert data.b == w.A.one()
    assert data.gamma.images == w.nu.images
    assert data.sigma.is_identity()


def test_lemma4_needs_normalized_unit():
    w = world(2, 1, 3, "Q")
    with pytest.raises(ValueError):
        lemma4_sigma(w, scale(w.field(2), w.A.one()))


def test_correction_pipeline():
    w = world(2, 1, 3, "F2")
    a = add(w.A.one(), u_element(w))
    res = correction_pipeline(w, lemma4_sigma(w, a))
    assert all(res.values()), res
    assert res["wrong_correction_rejected"] and res["wrong_adjuster_rejected"]


@pytest.mark.parametrize("params", [(2, 1, 3, "Q"), (3, 2, 1, "Q"), (2, 2, 3, "F3")])
def test_roots_of_sampled_units(params):
    w = world(*params)
    for a in sample_central_units(w, random.Random(0), 10):
        b = nth_root_central_unit(w.A, a, w.n)
        assert w.A.power(b, w.n) == a


def test_lemma2_instance_and_broken_set():
    w = world(3, 2, 1)
    summ, _ = build_H_theta(w, 0)
    assert lemma2_instance(w, summ) == (True, True)
    bad = broken_set(w, summ)
    assert not check_orthogonality(bad).ok
    assert lemma2_instance(w, bad) == (False, False)


def test_stalk_set_is_tilting_both_sides():
    w = world(2, 2, 1)
    Ps = [stalk(w.A, j) for j in range(w.N)]
    assert lemma2_instance(w, Ps) == (True, True)
    assert generation_check([Ps[0]]).status == "k0fail"


def test_end_of_H_by_sweep():
    w = world(2, 3, 1)
    for l in range(w.m):
        summ, _ = build_H_theta(w, l)
        total = sum(hom_k(X, Y).dim for X in summ for Y in summ)
        assert total == w.A.dim


def test_theorem6_examples():
    rep = theorem6_suite(world(3, 2, 1), generation=False)
    assert rep.ok, rep.details
    assert rep.details["branch"] == "char does not divide n"
    assert {"theta_0", "theta_1", "eps_0", "eps_1"} <= set(rep.details)
    rep = theorem6_suite(world(2, 2, 3), generation=False)
    assert rep.ok
    assert "theta_0" in rep.details and "eps_0" not in rep.details
    rep = theorem6_suite(world(2, 1, 3, "F2"), generation=False)
    assert rep.ok
    assert rep.details["branch"] == "char divides n"
    assert "lemma4" in rep.details and "theta_0" not in rep.details

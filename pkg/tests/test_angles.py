import random
from fractions import Fraction

import pytest

from index3d import angles as an
from index3d import qnormal as qn
from index3d.linalg import StrictSolution, mat_vec
from index3d.tri import decode_isosig, gluing_data_from_triangulation

from conftest import FIXTURES, fixture_gluing

FIG8 = fixture_gluing("fig8")
M009 = fixture_gluing("m009")


def _check_structure(g, alpha, vanishing):
    for row, rhs in zip(*an.angle_system(g, vanishing)):
        assert sum(Fraction(a) * x for a, x in zip(alpha, row)) == rhs


def test_solver_succeeds_on_every_fixture():
    for name in FIXTURES:
        g = fixture_gluing(name)
        alpha = an.solve_vanishing_holonomy(g)
        _check_structure(g, alpha, vanishing=True)


def test_m009_taut_vector_is_a_valid_solution():
    taut = [Fraction(x) for x in (0, 1, 0, 0, 1, 0, 0, 1, 0)]
    _check_structure(M009, taut, vanishing=True)


def test_fig8_alpha0_satisfies_edge_and_tet_equations():
    alpha0 = [Fraction(x) for x in (-1, 2, 0, 1, 0, 0)]
    _check_structure(FIG8, alpha0, vanishing=False)


def test_fig8_holonomy_family():
    # rho(mu) = -1 + t1 + t2 + t3 and rho(lambda) = 2 - 4 t1 - 2 t2 in
    # pi-units over the general solution family.
    alpha0 = (-1, 2, 0, 1, 0, 0)
    alpha1 = (2, -2, 0, -1, 0, 1)
    alpha2 = (1, -1, 0, -1, 1, 0)
    alpha3 = (1, -2, 1, 0, 0, 0)
    rng = random.Random(2)
    for _ in range(10):
        t1, t2, t3 = (Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(3))
        alpha = [Fraction(a0) + t1 * a1 + t2 * a2 + t3 * a3
                 for a0, a1, a2, a3 in zip(alpha0, alpha1, alpha2, alpha3)]
        _check_structure(FIG8, alpha, vanishing=False)
        assert an.rotational_holonomy(FIG8, alpha, [1, 0]) == -1 + t1 + t2 + t3
        assert an.rotational_holonomy(FIG8, alpha, [0, 1]) == 2 - 4 * t1 - 2 * t2


def test_vanishing_holonomy_really_vanishes():
    for name in FIXTURES:
        g = fixture_gluing(name)
        alpha = an.solve_vanishing_holonomy(g)
        for k in range(g.r):
            mu = [1 if i == 2 * k else 0 for i in range(2 * g.r)]
            la = [1 if i == 2 * k + 1 else 0 for i in range(2 * g.r)]
            assert an.rotational_holonomy(g, alpha, mu) == 0
            assert an.rotational_holonomy(g, alpha, la) == 0


def test_strict_exists_fig8_and_m009():
    for g in (FIG8, M009):
        res = an.strict_exists_vanishing_holonomy(g)
        assert isinstance(res, StrictSolution)
        assert all(x > 0 for x in res.x)
        rows, rhs = an.angle_system(g, vanishing_holonomy=True)
        assert mat_vec(rows, res.x) == rhs


def test_strict_witnesses_trefoil_and_cPcbbbdei():
    for name in ("trefoil", "cPcbbbdei"):
        g = fixture_gluing(name)
        res = an.strict_exists_vanishing_holonomy(g)
        assert isinstance(res, an.FarkasWitness)
        S = res.quad_vector
        assert any(x != 0 for x in S)
        assert all(x >= 0 for x in S)
        assert qn.is_qnormal(g, S)
        assert res.chi >= 0
        assert res.chi == qn.chi(g, S)


def test_euler_via_angles_examples():
    alpha = an.generalized_angle_structure(FIG8)
    K = [0, 0, 2, 0, 1, 0]
    assert an.euler_via_angles(FIG8, alpha, K) == -1
    for E in FIG8.edge_rows:
        assert an.euler_via_angles(FIG8, alpha, list(E)) == -2
    assert an.euler_via_angles(FIG8, alpha, FIG8.meridian(0)) == 0


def test_euler_independent_of_angle_structure():
    rng = random.Random(5)
    for name in FIXTURES:
        g = fixture_gluing(name)
        a1 = an.solve_vanishing_holonomy(g)
        a2 = an.generalized_angle_structure(g)
        gens = [list(r) for r in g.edge_rows] + qn.tet_solutions(g.n) \
            + [g.meridian(k) for k in range(g.r)] + [g.longitude(k) for k in range(g.r)]
        for _ in range(50):
            S = [0] * (3 * g.n)
            for gen in gens:
                c = rng.randint(-2, 2)
                S = [s + c * x for s, x in zip(S, gen)]
            assert an.euler_via_angles(g, a1, S) == an.euler_via_angles(g, a2, S)


def test_closed_classes_drop_the_boundary_term():
    # combinatorial Gauss-Bonnet: for closed classes chi = -alpha . S exactly
    rng = random.Random(11)
    for name in FIXTURES:
        g = fixture_gluing(name)
        alpha = an.generalized_angle_structure(g)
        gens = [list(r) for r in g.edge_rows] + qn.tet_solutions(g.n)
        for _ in range(20):
            S = [0] * (3 * g.n)
            for gen in gens:
                c = rng.randint(-2, 2)
                S = [s + c * x for s, x in zip(S, gen)]
            assert an.euler_via_angles(g, alpha, S) == \
                -sum(Fraction(a) * x for a, x in zip(alpha, S))


def test_no_cusp_rows_requires_closed_class():
    g = gluing_data_from_triangulation(decode_isosig("cPcbbbiht"))
    alpha = an.generalized_angle_structure(g)
    closed = [a + b for a, b in zip(g.edge_rows[0], qn.tet_solution(2, 1))]
    assert an.euler_via_angles(g, alpha, closed) == -3
    with pytest.raises(an.MissingCuspRows):
        an.solve_vanishing_holonomy(g)

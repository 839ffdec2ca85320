"""Q-normal surface classes.

The integer solutions of the Q-matching equations B S = 0 carry a
Neumann-Zagier pairing omega(x, y) = C(x).y, a boundary map, a formal Euler
characteristic, a double-arc quadratic form, and an integer quotient
structure Q/(E+T) whose invariants classify classes up to edge and
tetrahedral solutions.  Degrees of index terms are computed here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import angles
from .angles import MissingCuspRows
from .linalg import (dot, hermite_normal_form, hnf_pivots, integer_kernel,
                     integer_membership, smith_normal_form)
from .series import HalfInt
from .tri import GluingData, cmap, qmatching_matrix


class RankMismatch(Exception):
    """The edge-image lattice does not have the expected rank n - r."""


def parse_quad_vector(text):
    return [int(tok) for tok in text.split()]


def tet_solution(n, j):
    return angles.tet_solution(n, j)


def tet_solutions(n):
    return [angles.tet_solution(n, j) for j in range(n)]


def is_qnormal(g: GluingData, S):
    if len(S) != 3 * g.n:
        raise ValueError("quad vector length %d, expected %d" % (len(S), 3 * g.n))
    return all(dot(row, S) == 0 for row in qmatching_matrix(g))


def symplectic(g: GluingData, x, y):
    """The Neumann-Zagier pairing omega(x, y) = C(x) . y."""
    if len(x) != 3 * g.n or len(y) != 3 * g.n:
        raise ValueError("quad vectors must have length %d" % (3 * g.n))
    return dot(cmap(x), y)


def boundary(g: GluingData, S):
    """Coefficients of boundary(S) in the (mu_k, lambda_k) basis.

    The peripheral solutions themselves have doubled boundary:
    boundary(sum_k p_k M_k + q_k L_k) = 2 sum_k (p_k mu_k + q_k lambda_k).
    """
    return angles.boundary_coefficients(g, S)


def chi(g: GluingData, S):
    """Formal Euler characteristic, exact.

    With cusp rows present this is -alpha . S for a cached angle structure
    with vanishing peripheral rotational holonomy.  Without cusp rows it is
    defined for closed classes only.
    """
    if g.has_cusp_rows:
        alpha = angles.solve_vanishing_holonomy(g)
        return -sum(Fraction(a) * s for a, s in zip(alpha, S))
    if not angles.is_closed_class(g, S):
        raise MissingCuspRows("chi of a spun class needs cusp rows")
    alpha = angles.generalized_angle_structure(g)
    return -sum(Fraction(a) * s for a, s in zip(alpha, S))


def chi_int(g: GluingData, S):
    value = chi(g, S)
    if value.denominator != 1:
        raise ArithmeticError("chi(%r) = %s is not an integer" % (S, value))
    return int(value)


def chi_decomposition(g: GluingData, S):
    """chi via the -2 sum(x_i) - sum(y_j) decomposition formula; the
    cross-check path against the angle-structure computation."""
    from .linalg import NoSolution, rational_solve, transpose
    cols = [list(r) for r in g.edge_rows] + tet_solutions(g.n)
    if g.has_cusp_rows:
        cols += [list(r) for r in g.cusp_rows]
    sol = rational_solve(transpose(cols), [Fraction(x) for x in S])
    if isinstance(sol, NoSolution):
        raise ValueError("class is not in the span of edge/tet/peripheral solutions")
    ne = len(g.edge_rows)
    return -2 * sum(sol[:ne]) - sum(sol[ne:ne + g.n])


def double_arc(S):
    """delta(S) = sum_j (a_j b_j + b_j c_j + c_j a_j)."""
    total = 0
    for j in range(0, len(S), 3):
        a, b, c = S[j], S[j + 1], S[j + 2]
        total += a * b + b * c + c * a
    return total


def double_arc_bilinear(S, S2):
    """The symmetric bilinear form with delta(S+S') = delta(S) + delta(S')
    + 2 delta(S, S')."""
    total = Fraction(0)
    for j in range(0, len(S), 3):
        a, b, c = S[j], S[j + 1], S[j + 2]
        a2, b2, c2 = S2[j], S2[j + 1], S2[j + 2]
        total += Fraction(a * b2 + b * c2 + c * a2 + a2 * b + b2 * c + c2 * a, 2)
    return total


def minimal_rep(S):
    """The minimal nonnegative coset representative mod tetrahedral
    solutions: subtract min(a_j, b_j, c_j) in every block."""
    out = []
    for j in range(0, len(S), 3):
        m = min(S[j], S[j + 1], S[j + 2])
        out.extend((S[j] - m, S[j + 1] - m, S[j + 2] - m))
    return out


def degree(g: GluingData, S):
    """Lowest q^(1/2)-degree of the index term of S, with its leading sign.

    Returns (HalfInt, sign) where the degree is -chi(S*) + delta(S*) for the
    minimal representative S*, and the sign is (-1)^chi(S*).
    """
    star = minimal_rep(S)
    c = chi_int(g, star)
    d = -c + double_arc(star)
    return HalfInt(d), (-1 if c % 2 else 1)


def raw_degree(g: GluingData, S):
    """-chi(S) + delta(S) without passing to the minimal representative;
    superadditive on classes with nonnegative coordinates."""
    return -chi(g, S) + double_arc(S)


def project_mod_tets(S):
    """The isomorphism Z^{3n}/T -> Z^{2n}, (a, b, c) -> (a-c, b-c)."""
    out = []
    for j in range(0, len(S), 3):
        out.extend((S[j] - S[j + 2], S[j + 1] - S[j + 2]))
    return out


@dataclass
class LatticeStructure:
    """Integer structure of the Q-normal solution lattice."""
    qnormal_basis: list        # Z-basis of ker B
    edge_image_basis: list     # HNF basis of the image of the E_i in Z^{3n}/T
    edge_image_lifts: list     # lifts of that basis back to Z^{3n}
    edge_image_rank: int
    quotient_invariants: dict  # {"torsion": [d > 1 ...], "free_rank": int}
    snf_col_transform: list    # V with U R V = D for the relation matrix R
    snf_diagonal: list         # the full diagonal of D (zeros included)


_LATTICE_CACHE = {}


def lattice_structure(g: GluingData) -> LatticeStructure:
    key = g.key()
    hit = _LATTICE_CACHE.get(key)
    if hit is not None:
        return hit

    B = qmatching_matrix(g)
    kernel = integer_kernel(B)
    if g.has_cusp_rows and len(kernel) != 2 * g.n + g.r:
        raise RankMismatch("ker B has rank %d, expected %d" % (len(kernel), 2 * g.n + g.r))

    projected = [project_mod_tets(row) for row in g.edge_rows]
    H, U = hermite_normal_form(projected)
    pivots = hnf_pivots(H)
    rank = len(pivots)
    if rank != g.n - g.r:
        raise RankMismatch("edge-image rank %d, expected n - r = %d" % (rank, g.n - g.r))
    basis = [H[i] for i, _ in pivots]
    lifts = []
    for i, _ in pivots:
        lift = [sum(U[i][k] * g.edge_rows[k][q] for k in range(len(g.edge_rows)))
                for q in range(3 * g.n)]
        lifts.append(lift)

    # Relations: edge and tetrahedral solutions in kernel coordinates.
    relations = []
    for gen in list(g.edge_rows) + tet_solutions(g.n):
        ok, coeffs = integer_membership(list(gen), kernel)
        if not ok:
            raise RankMismatch("generator does not lie in the integer kernel lattice")
        relations.append(coeffs)
    invariants, _, V = smith_normal_form(relations)
    k = len(kernel)
    diag = invariants + [0] * (k - len(invariants))
    result = LatticeStructure(
        qnormal_basis=kernel,
        edge_image_basis=basis,
        edge_image_lifts=lifts,
        edge_image_rank=rank,
        quotient_invariants={"torsion": [d for d in invariants if d > 1],
                             "free_rank": k - len(invariants)},
        snf_col_transform=V,
        snf_diagonal=diag,
    )
    _LATTICE_CACHE[key] = result
    return result


@dataclass
class ClassDescriptor:
    """Boundary coefficients and torsion residues of a Q-normal class."""
    boundary: list
    torsion_coords: list


def class_of(g: GluingData, S) -> ClassDescriptor:
    ls = lattice_structure(g)
    ok, coords = integer_membership(list(S), ls.qnormal_basis)
    if not ok:
        raise ValueError("vector is not an integer Q-normal class")
    V = ls.snf_col_transform
    k = len(coords)
    y = [sum(coords[i] * V[i][j] for i in range(k)) for j in range(k)]
    torsion = [y[j] % d for j, d in enumerate(ls.snf_diagonal) if d > 1]
    return ClassDescriptor(boundary=boundary(g, S), torsion_coords=torsion)


def same_class(g: GluingData, S, S2):
    """Do S and S' differ by an integer combination of edge and tetrahedral
    solutions?"""
    diff = [a - b for a, b in zip(S, S2)]
    gens = [list(r) for r in g.edge_rows] + tet_solutions(g.n)
    return integer_membership(diff, gens)[0]

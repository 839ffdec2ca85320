"""Generalised, strict, and vanishing-holonomy angle structures.

Angles are exact rationals in units of pi: a generalised angle structure is
a vector alpha with per-tetrahedron sum 1 and edge-row weighted sums 2.
Adding the condition that every cusp row pairs to zero gives vanishing
peripheral rotational holonomy, which always has a solution and makes the
formal Euler characteristic of any Q-normal class the single dot product
-alpha . S.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import (FarkasCertificate, NoSolution, StrictSolution, dot,
                     lp_feasible_strict, matrix_rank, primitive_integer_vector,
                     rational_solve)
from .tri import GluingData, cmap


class MissingCuspRows(Exception):
    """The operation needs peripheral (cusp) rows that are not present."""


class InternalInconsistency(Exception):
    """A linear system that theory guarantees solvable failed to solve;
    the gluing data is corrupted."""


def tet_solution(n, j):
    """The tetrahedral solution T_j: (1,1,1) in block j, zero elsewhere."""
    v = [0] * (3 * n)
    v[3 * j] = v[3 * j + 1] = v[3 * j + 2] = 1
    return v


def angle_system(g: GluingData, vanishing_holonomy: bool):
    """(matrix, rhs) for generalised angle structures in pi-units.

    Rows: edge rows (sum 2), tetrahedron rows (sum 1), and, when requested,
    the cusp rows (sum 0).
    """
    rows = [list(r) for r in g.edge_rows]
    rhs = [Fraction(2)] * len(rows)
    for j in range(g.n):
        rows.append(tet_solution(g.n, j))
        rhs.append(Fraction(1))
    if vanishing_holonomy:
        if not g.has_cusp_rows:
            raise MissingCuspRows("vanishing-holonomy structures need cusp rows")
        for row in g.cusp_rows:
            rows.append(list(row))
            rhs.append(Fraction(0))
    return rows, rhs


_VANISHING_CACHE = {}
_GENERAL_CACHE = {}


def solve_vanishing_holonomy(g: GluingData):
    """An exact generalised angle structure with zero rotational holonomy on
    every peripheral curve.  One always exists for valid gluing data."""
    key = g.key()
    hit = _VANISHING_CACHE.get(key)
    if hit is not None:
        return hit
    rows, rhs = angle_system(g, vanishing_holonomy=True)
    sol = rational_solve(rows, rhs)
    if isinstance(sol, NoSolution):
        raise InternalInconsistency("the vanishing-holonomy angle system is unsolvable; "
                                    "the gluing data is corrupted")
    _VANISHING_CACHE[key] = sol
    return sol


def generalized_angle_structure(g: GluingData):
    """Any exact generalised angle structure (edge and tetrahedron equations
    only); valid for Euler characteristics of closed classes."""
    key = g.key()
    hit = _GENERAL_CACHE.get(key)
    if hit is not None:
        return hit
    rows, rhs = angle_system(g, vanishing_holonomy=False)
    sol = rational_solve(rows, rhs)
    if isinstance(sol, NoSolution):
        raise InternalInconsistency("the angle system is unsolvable; the gluing data is corrupted")
    _GENERAL_CACHE[key] = sol
    return sol


def rotational_holonomy(g: GluingData, alpha, gamma):
    """Rotational holonomy (in pi-units) of the peripheral class with
    coefficients gamma = (p_1, q_1, ..., p_r, q_r) in the mu/lambda basis."""
    if not g.has_cusp_rows:
        raise MissingCuspRows("rotational holonomy needs cusp rows")
    if len(gamma) != 2 * g.r:
        raise ValueError("expected %d peripheral coefficients" % (2 * g.r))
    total = Fraction(0)
    for k in range(g.r):
        total += Fraction(gamma[2 * k]) * dot(g.meridian(k), alpha)
        total += Fraction(gamma[2 * k + 1]) * dot(g.longitude(k), alpha)
    return total


def boundary_coefficients(g: GluingData, S):
    """Coefficients of the boundary class of S in the (mu_k, lambda_k) basis:
    boundary(S) = sum_k ( -omega(S, L_k) mu_k + omega(S, M_k) lambda_k )."""
    if not g.has_cusp_rows:
        raise MissingCuspRows("boundary coefficients need cusp rows")
    cS = cmap(S)
    out = []
    for k in range(g.r):
        out.append(-dot(cS, g.longitude(k)))
        out.append(dot(cS, g.meridian(k)))
    return out


def euler_via_angles(g: GluingData, alpha, S):
    """chi(S) = -alpha . S + rho_alpha(boundary S)/2, exact in pi-units.

    Independent of the choice of generalised angle structure alpha.  Needs
    cusp rows unless the boundary of S vanishes; for a closed class the
    boundary term is zero with any alpha.
    """
    base = -sum(Fraction(a) * s for a, s in zip(alpha, S))
    if g.has_cusp_rows:
        coeffs = boundary_coefficients(g, S)
        return base + rotational_holonomy(g, alpha, coeffs) / 2
    if not is_closed_class(g, S):
        raise MissingCuspRows("boundary term of a spun class needs cusp rows")
    return base


def is_closed_class(g: GluingData, S):
    """Does S lie in the span of the edge and tetrahedral solutions?

    This characterises closed normal classes without peripheral data.
    """
    rows = [list(r) for r in g.edge_rows] + [tet_solution(g.n, j) for j in range(g.n)]
    base_rank = matrix_rank(rows)
    return matrix_rank(rows + [list(S)]) == base_rank


@dataclass
class FarkasWitness:
    """A nonzero nonnegative Q-normal class with chi >= 0 obstructing a
    strict vanishing-holonomy angle structure."""
    quad_vector: list
    chi: Fraction


def strict_exists_vanishing_holonomy(g: GluingData):
    """Either a strict rational angle structure with vanishing peripheral
    rotational holonomy, or a FarkasWitness decoding the obstruction."""
    rows, rhs = angle_system(g, vanishing_holonomy=True)
    res = lp_feasible_strict(rows, rhs)
    if isinstance(res, StrictSolution):
        return res
    return _decode_witness(g, rows, res)


def strict_angle_structure(g: GluingData):
    """A strict generalised angle structure (no holonomy conditions), or a
    FarkasWitness; a strict structure certifies 1-efficiency for closed
    classes."""
    rows, rhs = angle_system(g, vanishing_holonomy=False)
    res = lp_feasible_strict(rows, rhs)
    if isinstance(res, StrictSolution):
        return res
    return _decode_witness(g, rows, res)


def _decode_witness(g, rows, cert: FarkasCertificate):
    # The certificate pairs the angle-system rows: S = M^T z is a
    # nonnegative Q-normal class, and z.b = -chi(S) <= 0.
    S = [sum(Fraction(cert.z[i]) * rows[i][q] for i in range(len(rows)))
         for q in range(3 * g.n)]
    S = primitive_integer_vector(S)
    alpha = generalized_angle_structure(g)
    return FarkasWitness(quad_vector=S, chi=euler_via_angles(g, alpha, S))

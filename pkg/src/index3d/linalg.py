"""Exact integer and rational linear algebra.

Matrices are lists of row lists over Python ints (arbitrary precision);
rational data uses fractions.Fraction.  Everything here is deterministic and
exact: Hermite/Smith normal forms with unimodular transforms, integer
kernels and membership, rational solving with Fredholm certificates, strict
LP feasibility with Farkas certificates, and double-description extreme-ray
enumeration for cones {x >= 0, Ax = 0}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class DimensionTooLarge(Exception):
    """Cone dimension exceeds the configured double-description cap."""


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    if not A:
        return []
    cols = len(B[0]) if B else 0
    return [[sum(a[k] * B[k][j] for k in range(len(a))) for j in range(cols)] for a in A]


def mat_vec(A, x):
    return [sum(r[j] * x[j] for j in range(len(x))) for r in A]


def dot(x, y):
    return sum(a * b for a, b in zip(x, y))


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def primitive_integer_vector(v):
    """Scale a rational vector to a primitive integer vector, keeping sign."""
    v = [Fraction(x) for x in v]
    if all(x == 0 for x in v):
        return [0] * len(v)
    lcm = 1
    for x in v:
        d = x.denominator
        lcm = lcm // gcd(lcm, d) * d
    ints = [int(x * lcm) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return [x // g for x in ints]


# ---------------------------------------------------------------------------
# Hermite and Smith normal forms
# ---------------------------------------------------------------------------

def hermite_normal_form(M):
    """Row-style HNF: returns (H, U) with U*M = H and U unimodular.

    H is in row echelon form with positive pivots and entries above each
    pivot reduced into [0, pivot).
    """
    if not M:
        return [], []
    rows, cols = len(M), len(M[0])
    H = [list(r) for r in M]
    U = identity_matrix(rows)
    pivot_row = 0
    pivots = []
    for col in range(cols):
        # Clear below pivot_row in this column by gcd row operations.
        nz = [i for i in range(pivot_row, rows) if H[i][col] != 0]
        if not nz:
            continue
        i0 = nz[0]
        H[pivot_row], H[i0] = H[i0], H[pivot_row]
        U[pivot_row], U[i0] = U[i0], U[pivot_row]
        for i in range(pivot_row + 1, rows):
            while H[i][col] != 0:
                q = H[pivot_row][col] // H[i][col]
                H[pivot_row] = [a - q * b for a, b in zip(H[pivot_row], H[i])]
                U[pivot_row] = [a - q * b for a, b in zip(U[pivot_row], U[i])]
                H[pivot_row], H[i] = H[i], H[pivot_row]
                U[pivot_row], U[i] = U[i], U[pivot_row]
        if H[pivot_row][col] < 0:
            H[pivot_row] = [-a for a in H[pivot_row]]
            U[pivot_row] = [-a for a in U[pivot_row]]
        pivots.append((pivot_row, col))
        pivot_row += 1
        if pivot_row == rows:
            break
    # Reduce entries above each pivot into [0, pivot).
    for r, c in pivots:
        p = H[r][c]
        for i in range(r):
            q = H[i][c] // p
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
    return H, U


def hnf_pivots(H):
    """(row, col) pivot positions of a row-echelon integer matrix."""
    out = []
    for i, row in enumerate(H):
        for j, x in enumerate(row):
            if x != 0:
                out.append((i, j))
                break
    return out


def matrix_rank(M):
    """Rank over Q via exact fraction-free row elimination."""
    if not M or not M[0]:
        return 0
    A = [[Fraction(x) for x in row] for row in M]
    rows, cols = len(A), len(A[0])
    rank = 0
    for col in range(cols):
        sel = next((i for i in range(rank, rows) if A[i][col] != 0), None)
        if sel is None:
            continue
        A[rank], A[sel] = A[sel], A[rank]
        inv = 1 / A[rank][col]
        A[rank] = [x * inv for x in A[rank]]
        for i in range(rank + 1, rows):
            if A[i][col] != 0:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


def _egcd(a, b):
    """(g, u, v) with u*a + v*b = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    if old_r < 0:
        old_r, old_u, old_v = -old_r, -old_u, -old_v
    return old_r, old_u, old_v


def smith_normal_form(M):
    """Smith normal form: returns (invariants, U, V) with U*M*V diagonal.

    ``invariants`` is the list of nonzero diagonal entries d_1 | d_2 | ...;
    U and V are unimodular.  Pivoting uses extended-gcd 2x2 blocks, so each
    clearing pass strictly reduces the pivot unless it already divides.
    """
    if not M or not M[0]:
        return [], identity_matrix(len(M)), identity_matrix(len(M[0]) if M else 0)
    rows, cols = len(M), len(M[0])
    A = [list(r) for r in M]
    U = identity_matrix(rows)
    V = identity_matrix(cols)

    def row_gcd_op(t, i):
        """Unimodular rows (t, i) update making A[t][t] = gcd, A[i][t] = 0.

        When the pivot already divides the entry this is a plain subtraction
        leaving row t untouched, which is what guarantees termination.
        """
        a, b = A[t][t], A[i][t]
        if b == 0:
            return
        if a != 0 and b % a == 0:
            q = b // a
            A[i] = [x - q * y for x, y in zip(A[i], A[t])]
            U[i] = [x - q * y for x, y in zip(U[i], U[t])]
            return
        g, u, v = _egcd(a, b)
        p, q = -(b // g), a // g  # second row of the unimodular block
        A[t], A[i] = ([u * x + v * y for x, y in zip(A[t], A[i])],
                      [p * x + q * y for x, y in zip(A[t], A[i])])
        U[t], U[i] = ([u * x + v * y for x, y in zip(U[t], U[i])],
                      [p * x + q * y for x, y in zip(U[t], U[i])])

    def col_gcd_op(t, j):
        """Unimodular columns (t, j) update making A[t][t] = gcd, A[t][j] = 0."""
        a, b = A[t][t], A[t][j]
        if b == 0:
            return
        if a != 0 and b % a == 0:
            q = b // a
            for r in A:
                r[j] -= q * r[t]
            for r in V:
                r[j] -= q * r[t]
            return
        g, u, v = _egcd(a, b)
        p, q = -(b // g), a // g
        for r in A:
            r[t], r[j] = u * r[t] + v * r[j], p * r[t] + q * r[j]
        for r in V:
            r[t], r[j] = u * r[t] + v * r[j], p * r[t] + q * r[j]

    t = 0
    while t < min(rows, cols):
        pivot = next(((i, j) for i in range(t, rows) for j in range(t, cols)
                      if A[i][j] != 0), None)
        if pivot is None:
            break
        if pivot[0] != t:
            A[t], A[pivot[0]] = A[pivot[0]], A[t]
            U[t], U[pivot[0]] = U[pivot[0]], U[t]
        if pivot[1] != t:
            for r in A:
                r[t], r[pivot[1]] = r[pivot[1]], r[t]
            for r in V:
                r[t], r[pivot[1]] = r[pivot[1]], r[t]
        while True:
            for i in range(t + 1, rows):
                row_gcd_op(t, i)
            for j in range(t + 1, cols):
                col_gcd_op(t, j)
            if all(A[i][t] == 0 for i in range(t + 1, rows)) \
                    and all(A[t][j] == 0 for j in range(t + 1, cols)):
                break
        # Enforce divisibility of the remaining block by the pivot.
        offender = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                         if A[i][j] % A[t][t] != 0), None)
        if offender is not None:
            i = offender[0]
            A[t] = [a + b for a, b in zip(A[t], A[i])]
            U[t] = [a + b for a, b in zip(U[t], U[i])]
            continue
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    invariants = [A[i][i] for i in range(min(rows, cols)) if A[i][i] != 0]
    return invariants, U, V


# ---------------------------------------------------------------------------
# Integer kernels and membership
# ---------------------------------------------------------------------------

def integer_kernel(M):
    """A Z-basis of {x integer : M x = 0}."""
    if not M or not M[0]:
        cols = len(M[0]) if M else 0
        return identity_matrix(cols)
    H, U = hermite_normal_form(transpose(M))
    return [U[i] for i, row in enumerate(H) if all(x == 0 for x in row)]


def integer_membership(v, generators):
    """Is v an integer combination of the generator vectors?

    Returns (True, coefficients) with coefficients indexed like
    ``generators``, or (False, None).
    """
    gens = [list(g) for g in generators]
    if not gens:
        return (all(x == 0 for x in v), [] if all(x == 0 for x in v) else None)
    H, U = hermite_normal_form(gens)
    piv = hnf_pivots(H)
    r = list(v)
    coeffs_H = [0] * len(H)
    for i, j in piv:
        if r[j] % H[i][j] != 0:
            return False, None
        q = r[j] // H[i][j]
        coeffs_H[i] = q
        r = [a - q * b for a, b in zip(r, H[i])]
    if any(x != 0 for x in r):
        return False, None
    coeffs = [sum(coeffs_H[i] * U[i][k] for i in range(len(H))) for k in range(len(gens))]
    return True, coeffs


# ---------------------------------------------------------------------------
# Rational solving
# ---------------------------------------------------------------------------

@dataclass
class NoSolution:
    """Fredholm certificate: z with z^T M = 0 and z^T b != 0."""
    certificate: list


def rational_solve(M, b):
    """Solve M x = b exactly over the rationals.

    Returns a list of Fractions, or NoSolution carrying a certificate vector
    z with z^T M = 0 and z^T b != 0.
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    A = [[Fraction(x) for x in M[i]] + [Fraction(0)] * rows + [Fraction(b[i])]
         for i in range(rows)]
    for i in range(rows):
        A[i][cols + i] = Fraction(1)
    width = cols + rows + 1
    pivots = []
    pr = 0
    for col in range(cols):
        sel = next((i for i in range(pr, rows) if A[i][col] != 0), None)
        if sel is None:
            continue
        A[pr], A[sel] = A[sel], A[pr]
        inv = 1 / A[pr][col]
        A[pr] = [x * inv for x in A[pr]]
        for i in range(rows):
            if i != pr and A[i][col] != 0:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[pr])]
        pivots.append((pr, col))
        pr += 1
    for i in range(pr, rows):
        if A[i][width - 1] != 0:
            return NoSolution(certificate=[A[i][cols + k] for k in range(rows)])
    x = [Fraction(0)] * cols
    for i, col in pivots:
        x[col] = A[i][width - 1]
    return x


# ---------------------------------------------------------------------------
# Strict LP feasibility via exact two-phase simplex
# ---------------------------------------------------------------------------

@dataclass
class StrictSolution:
    """An exact rational point with M x = b and every coordinate > 0."""
    x: list


@dataclass
class FarkasCertificate:
    """A vector z with M^T z >= 0 and z.b <= 0 ruling out {Mx = b, x > 0}.

    Either M^T z != 0, or z.b < 0 (in which case even Mx = b alone is
    infeasible).
    """
    z: list

    def verify(self, M, b):
        w = mat_vec(transpose(M), self.z)
        zb = dot(self.z, b)
        if any(x < 0 for x in w) or zb > 0:
            return False
        return any(x != 0 for x in w) or zb < 0


class _Simplex:
    """Dense exact simplex tableau with Bland's rule.

    Solves min c.x  s.t.  A x = b, x >= 0 with b >= 0, via artificials that
    stay in the tableau so the basis inverse (and hence the dual vector) can
    be read off the artificial columns.
    """

    def __init__(self, A, b, c):
        self.m = len(A)
        self.n = len(A[0]) if self.m else 0
        T = []
        for i in range(self.m):
            row = [Fraction(x) for x in A[i]]
            rhs = Fraction(b[i])
            if rhs < 0:
                row = [-x for x in row]
                rhs = -rhs
            art = [Fraction(1) if k == i else Fraction(0) for k in range(self.m)]
            T.append(row + art + [rhs])
        self.T = T
        self.c = [Fraction(x) for x in c]
        self.basis = [self.n + i for i in range(self.m)]

    def _pivot(self, row, col):
        T = self.T
        piv = T[row][col]
        T[row] = [x / piv for x in T[row]]
        for i in range(self.m):
            if i != row and T[i][col] != 0:
                f = T[i][col]
                T[i] = [x - f * y for x, y in zip(T[i], T[row])]
        self.basis[row] = col

    def _solve_phase(self, cost, allowed):
        """Bland-rule simplex for the given column costs over allowed columns.

        Reduced cost of column j is c_j - c_B . (tableau column j), since the
        tableau holds B^{-1} A.
        """
        basis_set = set(self.basis)
        while True:
            cb = [cost[v] for v in self.basis]
            entering = None
            for j in allowed:
                if j in basis_set:
                    continue
                red = cost[j] - sum(cb[i] * self.T[i][j] for i in range(self.m))
                if red < 0:
                    entering = j
                    break
            if entering is None:
                return
            ratios = []
            for i in range(self.m):
                a = self.T[i][entering]
                if a > 0:
                    ratios.append((self.T[i][-1] / a, self.basis[i], i))
            if not ratios:
                raise ArithmeticError("unbounded LP phase")
            ratios.sort(key=lambda t: (t[0], t[1]))
            leaving_row = ratios[0][2]
            basis_set.discard(self.basis[leaving_row])
            basis_set.add(entering)
            self._pivot(leaving_row, entering)

    def _dual(self, cost):
        """y with y^T = c_B^T B^{-1}, read through the artificial columns."""
        return [sum(cost[self.basis[i]] * self.T[i][self.n + k] for i in range(self.m))
                for k in range(self.m)]

    def solve(self):
        """Two-phase optimisation.

        Returns (status, x, y): status "infeasible" with the phase-1 dual y,
        or "optimal" with the primal x and the phase-2 dual y.
        """
        phase1 = [Fraction(0)] * self.n + [Fraction(1)] * self.m + [Fraction(0)]
        self._solve_phase(phase1, range(self.n))
        obj1 = sum(phase1[self.basis[i]] * self.T[i][-1] for i in range(self.m))
        if obj1 > 0:
            return "infeasible", None, self._dual(phase1)
        # Drive leftover artificials (basic at level 0) out of the basis so
        # phase 2 cannot regrow them.  A row with no structural entry is a
        # redundant constraint and its artificial can safely stay.
        for i in range(self.m):
            if self.basis[i] >= self.n:
                j = next((j for j in range(self.n) if self.T[i][j] != 0), None)
                if j is not None:
                    self._pivot(i, j)
        phase2 = list(self.c) + [Fraction(0)] * self.m + [Fraction(0)]
        self._solve_phase(phase2, range(self.n))
        x = [Fraction(0)] * self.n
        for i in range(self.m):
            if self.basis[i] < self.n:
                x[self.basis[i]] = self.T[i][-1]
        return "optimal", x, self._dual(phase2)


def lp_feasible_strict(M, b):
    """Exact test for {x : M x = b, x > 0}.

    Returns StrictSolution(x) or FarkasCertificate(z); the two outcomes are
    mutually exclusive and each re-verifies exactly.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    if m == 0:
        return StrictSolution([Fraction(1)] * n)
    # Substitute x = s + eps*1 with s >= 0, 0 <= eps <= 1 and maximise eps:
    # rows [M | M.1 | 0][s, eps, tau]^T = b and eps + tau = 1.
    ones = [sum(row) for row in M]
    A = [list(M[i]) + [ones[i], 0] for i in range(m)]
    A.append([0] * n + [1, 1])
    rhs = list(b) + [Fraction(1)]
    cost = [Fraction(0)] * n + [Fraction(-1), Fraction(0)]
    sx = _Simplex(A, rhs, cost)
    status, x, y = sx.solve()
    # Row i of the tableau was negated when rhs[i] < 0; undo that in the dual.
    signs = [1 if Fraction(rhs[i]) >= 0 else -1 for i in range(m + 1)]
    if status == "infeasible":
        z = [-y[i] * signs[i] for i in range(m)]
        return FarkasCertificate(z=z)
    eps = x[n]
    if eps > 0:
        return StrictSolution(x=[x[j] + eps for j in range(n)])
    z = [-y[i] * signs[i] for i in range(m)]
    return FarkasCertificate(z=z)


# ---------------------------------------------------------------------------
# Double description
# ---------------------------------------------------------------------------

def dd_vertex_enumeration(equalities, ncols, dimension_cap=24):
    """Extreme rays of the pointed cone {x in R^ncols : x >= 0, E x = 0}.

    Uses the double-description method with exact arithmetic, processing the
    equality constraints in input order; adjacency of rays is decided by a
    rank test on the common tight constraints.  Rays are returned as
    primitive integer vectors, sorted.
    """
    if ncols > dimension_cap:
        raise DimensionTooLarge("cone has %d coordinates, cap is %d" % (ncols, dimension_cap))
    rays = [tuple(1 if i == j else 0 for j in range(ncols)) for i in range(ncols)]
    processed = []

    def adjacent(r, s):
        # Tight constraints at both rays: the processed equalities plus the
        # shared zero slots.  Unit rows contribute |zero| to the rank, so we
        # only need the equalities restricted to the surviving columns.
        alive = [j for j in range(ncols) if r[j] != 0 or s[j] != 0]
        nzero = ncols - len(alive)
        sub = [[e[j] for j in alive] for e in processed]
        return nzero + matrix_rank(sub) == ncols - 2

    for eq in equalities:
        vals = [dot(eq, r) for r in rays]
        keep = [r for r, v in zip(rays, vals) if v == 0]
        plus = [(r, v) for r, v in zip(rays, vals) if v > 0]
        minus = [(r, v) for r, v in zip(rays, vals) if v < 0]
        new = list(keep)
        for rp, vp in plus:
            for rm, vm in minus:
                if not adjacent(rp, rm):
                    continue
                combo = [vp * rm[j] - vm * rp[j] for j in range(ncols)]
                new.append(tuple(primitive_integer_vector(combo)))
        processed.append(list(eq))
        rays = sorted(set(new))
    return [list(r) for r in rays]

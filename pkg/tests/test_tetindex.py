import itertools
import random

from index3d.series import HalfInt, TruncatedSeries, pochhammer_inverse
from index3d.tetindex import j_min_degree, j_product, tet_index_I, tet_index_J


def naive_tet_index(m, e, order):
    """Independent oracle: direct summation with naive polynomial arithmetic,
    no early termination cleverness beyond a generous fixed n range."""
    acc = TruncatedSeries.zero(order)
    for n in range(max(0, -e), 60):
        lead = n * (n + 1) - (2 * n + e) * m
        if lead >= order.twice + 120:
            continue
        tail = HalfInt(max(order.twice - lead, 0))
        piece = pochhammer_inverse(n, tail) * pochhammer_inverse(n + e, tail)
        shifted = TruncatedSeries({t + lead: c for t, c in piece.to_machine()["terms"]},
                                  HalfInt(tail.twice + lead))
        if n % 2:
            shifted = shifted.scale(-1)
        if shifted.order.twice >= order.twice:
            acc = acc + shifted.truncate(order)
    return acc


def test_I00_first_terms_match_hand_expansion():
    # n = 0, 1, 2 of the defining sum give 1 - q - 2q^2 - 2q^3 - ...
    s = tet_index_I(0, 0, HalfInt.whole(4))
    assert s.to_machine()["terms"] == [[0, 1], [2, -1], [4, -2], [6, -2]]


def test_I_matches_direct_summation_oracle():
    for m, e in [(0, 0), (0, -1), (1, 0), (-2, 1), (2, -2), (-1, -1), (3, 2)]:
        order = HalfInt.whole(8)
        assert tet_index_I(m, e, order) == naive_tet_index(m, e, order)


def test_I_negative_e_starts_at_n_one():
    s = tet_index_I(0, -1, HalfInt.whole(4))
    assert s.leading() == (HalfInt.whole(1), -1)


def test_leading_term_qab_over_two():
    for a, b in [(1, 1), (2, 1), (2, 3), (0, 4)]:
        s = tet_index_I(-a, b, HalfInt(a * b + 6))
        lead, coeff = s.leading()
        assert lead == HalfInt(a * b) and coeff == 1


def test_J_spec_values():
    assert tet_index_J(1, 1, 0, HalfInt.whole(2)).leading() == (HalfInt(1), 1)
    order = HalfInt.whole(8)
    assert tet_index_J(0, 0, 0, order) == tet_index_I(0, 0, order)


def test_J_permutation_symmetry():
    rng = random.Random(11)
    order = HalfInt.whole(6)
    for _ in range(25):
        a, b, c = (rng.randint(-4, 4) for _ in range(3))
        base = tet_index_J(a, b, c, order)
        for p in itertools.permutations((a, b, c)):
            assert tet_index_J(*p, order) == base


def test_J_shift_rule():
    rng = random.Random(5)
    order = HalfInt.whole(6)
    for _ in range(20):
        a, b, c = (rng.randint(-4, 4) for _ in range(3))
        for s in range(-3, 4):
            lhs = tet_index_J(a, b, c, order)
            rhs = tet_index_J(a + s, b + s, c + s, HalfInt(order.twice - s)).mul_sign_power(s)
            assert lhs == rhs.truncate(order)


def test_j_min_degree_spec_examples():
    assert j_min_degree(3, 2, 0) == (HalfInt(6), 1)       # q-degree ab/2 = 3
    assert j_min_degree(0, 0, 0) == (HalfInt(0), 1)
    d, sign = j_min_degree(-2, -1, 0)
    assert (d, sign) == (HalfInt(4), 1)
    lead, coeff = tet_index_J(-2, -1, 0, HalfInt.whole(3)).leading()
    assert lead == d and coeff == sign


def test_j_min_degree_matches_leading_term_on_grid():
    order_pad = 8
    for a in range(-4, 5):
        for b in range(-4, 5):
            for c in range(-4, 5):
                d, sign = j_min_degree(a, b, c)
                s = tet_index_J(a, b, c, HalfInt(d.twice + order_pad))
                lead, coeff = s.leading()
                assert lead == d and coeff == sign, (a, b, c)


def test_j_product_spec_examples():
    assert j_product([], HalfInt.whole(5)) == TruncatedSeries.one(HalfInt.whole(5))
    zero_vec = j_product([0, 0, 0, 0, 0, 0], HalfInt.whole(5))
    sq = tet_index_I(0, 0, HalfInt.whole(8))
    assert zero_vec == (sq * sq).truncate(HalfInt.whole(5))
    # fig-8 edge solution: leading exponent is the summed minimal degree.
    s = j_product([2, 1, 0, 2, 1, 0], HalfInt.whole(4))
    want = j_min_degree(2, 1, 0)[0].twice * 2
    assert s.leading()[0] == HalfInt(want) == HalfInt(4)
    # single tetrahedral solution obeys the shift rule
    lhs = j_product([1, 1, 1], HalfInt.whole(5))
    rhs = tet_index_J(0, 0, 0, HalfInt(11)).mul_sign_power(-1)
    assert lhs == rhs.truncate(HalfInt.whole(5))


def test_j_product_budget_matches_full_product():
    rng = random.Random(3)
    for _ in range(10):
        quads = [rng.randint(-2, 3) for _ in range(6)]
        order = HalfInt.whole(6)
        full = tet_index_J(*quads[:3], HalfInt.whole(14)) * tet_index_J(*quads[3:], HalfInt.whole(14))
        assert j_product(quads, order) == full.truncate(order)


def _sum_over_e(fn, order, bound=40):
    acc = {}
    for e in range(-bound, bound + 1):
        contribution = fn(e)
        if contribution is None:
            continue
        shift, series = contribution
        for t, c in series.to_machine()["terms"]:
            t2 = t + shift
            if t2 < order.twice:
                acc[t2] = acc.get(t2, 0) + c
    return TruncatedSeries(acc, order)


def test_quadratic_identity():
    # sum_e I(m,e) I(m,e+c) q^e = delta_{c,0}; the e-cutoff comes from the
    # term's minimal degree 2e + deg I(m,e) + deg I(m,e+c).
    order = HalfInt.whole(8)
    for m in range(-3, 4):
        for c in range(-3, 4):
            def term(e, m=m, c=c):
                lead = 2 * e + j_min_degree(-m, e, 0)[0].twice \
                    + j_min_degree(-m, e + c, 0)[0].twice
                if lead >= order.twice:
                    return None
                inner = HalfInt(order.twice - 2 * e)
                return 2 * e, tet_index_I(m, e, inner) * tet_index_I(m, e + c, inner)

            got = _sum_over_e(term, order)
            want = TruncatedSeries.one(order) if c == 0 else TruncatedSeries.zero(order)
            assert got == want, (m, c)


def test_pentagon_identity():
    order = HalfInt.whole(6)
    vals = (-1, 0, 1)
    for m1, m2, x1, x2, x3 in itertools.product(vals, repeat=5):
        def term(e0):
            lead = 2 * e0 + j_min_degree(-m1, x1 + e0, 0)[0].twice \
                + j_min_degree(-m2, x2 + e0, 0)[0].twice \
                + j_min_degree(-(m1 + m2), x3 + e0, 0)[0].twice
            if lead >= order.twice:
                return None
            inner = HalfInt(order.twice - 2 * e0)
            prod = tet_index_I(m1, x1 + e0, inner) * tet_index_I(m2, x2 + e0, inner) \
                * tet_index_I(m1 + m2, x3 + e0, inner)
            return 2 * e0, prod

        lhs = _sum_over_e(term, order, bound=25)
        inner = HalfInt(order.twice + 2 * abs(x3) + 8)
        rhs_prod = tet_index_I(m1 - x2 + x3, x1 - x3, inner) \
            * tet_index_I(m2 - x1 + x3, x2 - x3, inner)
        rhs = TruncatedSeries({t - 2 * x3: c for t, c in rhs_prod.to_machine()["terms"]},
                              HalfInt(rhs_prod.order.twice - 2 * x3)).truncate(order)
        assert lhs == rhs, (m1, m2, x1, x2, x3)


def test_generating_function_vanishes():
    # sum_e I(0, e) q^e = 0 below q^12.
    order = HalfInt.whole(12)

    def term(e):
        lead = 2 * e + j_min_degree(0, e, 0)[0].twice
        if lead >= order.twice:
            return None
        return 2 * e, tet_index_I(0, e, HalfInt(order.twice - 2 * e))

    assert _sum_over_e(term, order).is_zero()


class _Bivariate:
    """Laurent polynomials in z with TruncatedSeries q-coefficients, kept on
    a fixed z-window; an independent oracle for the generating function."""

    def __init__(self, coeffs, zmin, zmax, order):
        self.c = {z: coeffs.get(z, TruncatedSeries.zero(order)) for z in range(zmin, zmax + 1)}
        self.zmin, self.zmax, self.order = zmin, zmax, order

    def times_one_minus(self, a_twice, zshift):
        """Multiply by (1 - q^(a_twice/2) z^zshift), clipping to the window."""
        out = {}
        for z, s in self.c.items():
            out[z] = out.get(z, TruncatedSeries.zero(self.order)) + s
            z2 = z + zshift
            if self.zmin <= z2 <= self.zmax:
                moved = TruncatedSeries({t + a_twice: -c for t, c in s.to_machine()["terms"]},
                                        HalfInt(s.order.twice + a_twice)).truncate(self.order)
                out[z2] = out.get(z2, TruncatedSeries.zero(self.order)) + moved
        return _Bivariate(out, self.zmin, self.zmax, self.order)

    def divide_one_minus(self, a_twice, zshift):
        """Divide by (1 - q^(a_twice/2) z^zshift) via long division from the
        lowest z-power that the factor can feed."""
        out = dict(self.c)
        zs = range(self.zmin, self.zmax + 1) if zshift > 0 else range(self.zmax, self.zmin - 1, -1)
        for z in zs:
            src = z - zshift
            if self.zmin <= src <= self.zmax:
                s = out[src]
                moved = TruncatedSeries({t + a_twice: c for t, c in s.to_machine()["terms"]},
                                        HalfInt(s.order.twice + a_twice)).truncate(self.order)
                out[z] = out[z] + moved
        return _Bivariate(out, self.zmin, self.zmax, self.order)


def test_generating_function_product_oracle():
    # Expand (q^{1-m/2} z^{-1}; q)_inf / (q^{-m/2} z; q)_inf by plain
    # truncated products and long division; its z^e coefficient must equal
    # I(m, e).  Uses m <= 0 so all q-exponents stay nonnegative; positive m
    # is covered by the duality test below.
    order = HalfInt.whole(6)
    for m in (0, -1, -2):
        # z^{-k} terms carry q-degree ~ k(k+1)/2, so a window this wide
        # captures every contribution below the order.
        kmax = 1 + next(k for k in range(1, 30) if k * (k + 1) > order.twice)
        window = 4 + kmax
        gf = _Bivariate({0: TruncatedSeries.one(order)}, -window, window, order)
        n = 0
        while 2 * (n + 1) - m <= order.twice + 2 * window:
            gf = gf.times_one_minus(2 * (n + 1) - m, -1)
            n += 1
        n = 0
        while 2 * n - m <= order.twice + 2 * window:
            gf = gf.divide_one_minus(2 * n - m, 1)
            n += 1
        for e in range(-3, 4):
            assert gf.c[e] == tet_index_I(m, e, order), (m, e)


def test_duality_identity():
    # I(m, e) = I(-e, -m): both equal J(-m, e, 0) = J(e, -m, 0).
    order = HalfInt.whole(7)
    for m in range(-3, 4):
        for e in range(-3, 4):
            assert tet_index_I(m, e, order) == tet_index_I(-e, -m, order)

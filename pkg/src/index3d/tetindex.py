"""The tetrahedral index and its symmetric form.

I(m, e) is the basic q-series attached to an ideal tetrahedron,

    I(m, e) = sum_{n >= max(0, -e)} (-1)^n q^{n(n+1)/2 - (n + e/2) m}
                                     / ( (q)_n (q)_{n+e} ),

and J(a, b, c) = (-q^(1/2))^(-b) I(b-c, a-b) is its normalisation, symmetric
under all permutations of (a, b, c).  Both are computed exactly below a
requested truncation order.
"""

from __future__ import annotations

import threading

from .series import HalfInt, TruncatedSeries, pochhammer_inverse, _as_halfint

_MEMO = {}
_MEMO_LOCK = threading.Lock()


def tet_index_I(m, e, order):
    """The tetrahedral index I(m, e) truncated below ``order``."""
    order = _as_halfint(order)
    # Compute at the next bucket boundary and truncate, so callers with
    # nearby orders share memoised values.
    bucket = order.twice + (-order.twice) % 8
    if bucket != order.twice:
        return tet_index_I(m, e, HalfInt(bucket)).truncate(order)
    key = (m, e, order.twice)
    hit = _MEMO.get(key)
    if hit is not None:
        return hit

    bound = order.twice
    acc = {}
    n = max(0, -e)
    # Doubled leading exponent of the n-th summand: a convex quadratic in n,
    # so once past its vertex we may stop as soon as it clears the bound.
    # vertex at n = (2m - 1)/2; "two terms past" gives a safe margin.
    while True:
        lead = n * (n + 1) - (2 * n + e) * m
        if lead >= bound:
            if 2 * n > 2 * m - 1 + 4:
                break
            n += 1
            continue
        tail = HalfInt(bound - lead)
        piece = pochhammer_inverse(n, tail) * pochhammer_inverse(n + e, tail)
        sign = -1 if n % 2 else 1
        for t, c in piece._terms.items():
            t2 = t + lead
            if t2 < bound:
                acc[t2] = acc.get(t2, 0) + sign * c
        n += 1

    result = TruncatedSeries(acc, order)
    with _MEMO_LOCK:
        _MEMO[key] = result
    return result


def tet_index_J(a, b, c, order):
    """J(a, b, c) = (-q^(1/2))^(-b) I(b-c, a-b) truncated below ``order``."""
    order = _as_halfint(order)
    inner = tet_index_I(b - c, a - b, HalfInt(order.twice + b))
    return inner.mul_sign_power(-b)


def j_min_degree(a, b, c):
    """Lowest q^(1/2)-degree and leading sign of J(a, b, c).

    Returns (HalfInt degree, sign) where the leading term is
    sign * q^(degree) with degree = ((a-m)(b-m)+(b-m)(c-m)+(c-m)(a-m)-m)/2
    as a q-exponent and sign = (-1)^m, m = min(a, b, c).
    """
    m = min(a, b, c)
    a, b, c = a - m, b - m, c - m
    twice = a * b + b * c + c * a - m
    return HalfInt(twice), (-1 if m % 2 else 1)


def j_product(quads, order):
    """Product of J(a_j, b_j, c_j) over the triples of a quad vector.

    Each factor is expanded only as far as needed for the product to be
    reliable below ``order``, using the minimal degrees of the other factors
    as the budget.
    """
    order = _as_halfint(order)
    if len(quads) % 3 != 0:
        raise ValueError("quad vector length must be a multiple of 3")
    triples = [tuple(quads[3 * j:3 * j + 3]) for j in range(len(quads) // 3)]
    if not triples:
        return TruncatedSeries.one(order)
    degs = [j_min_degree(*t)[0].twice for t in triples]
    total = sum(degs)
    if total >= order.twice:
        # Every term of the product sits at or above the cutoff.
        return TruncatedSeries.zero(order)
    result = None
    for triple, d in zip(triples, degs):
        factor = tet_index_J(*triple, HalfInt(order.twice - (total - d)))
        result = factor if result is None else result * factor
    if result.order.twice < order.twice:
        raise AssertionError("factor budgeting failed to reach the requested order")
    return result.truncate(order)

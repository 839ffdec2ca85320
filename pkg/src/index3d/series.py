"""Exact truncated Laurent series in q^(1/2) with integer coefficients.

Exponents live on the half-integer lattice and are stored as doubled
integers, so every operation is exact integer arithmetic.  A series carries
an exclusive truncation order: coefficients at exponents >= order are
unknown, and arithmetic propagates orders pessimistically.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import total_ordering


@total_ordering
class HalfInt:
    """A half-integer n/2 stored as the integer ``twice`` = n."""

    __slots__ = ("twice",)

    def __init__(self, twice):
        if not isinstance(twice, int):
            raise TypeError("HalfInt stores a doubled integer exponent")
        object.__setattr__(self, "twice", twice)

    @classmethod
    def whole(cls, n):
        """The half-integer with value n (an ordinary integer)."""
        return cls(2 * n)

    def __setattr__(self, name, value):
        raise AttributeError("HalfInt is immutable")

    def __add__(self, other):
        return HalfInt(self.twice + _twice_of(other))

    __radd__ = __add__

    def __sub__(self, other):
        return HalfInt(self.twice - _twice_of(other))

    def __rsub__(self, other):
        return HalfInt(_twice_of(other) - self.twice)

    def __neg__(self):
        return HalfInt(-self.twice)

    def __eq__(self, other):
        try:
            return self.twice == _twice_of(other)
        except TypeError:
            return NotImplemented

    def __lt__(self, other):
        return self.twice < _twice_of(other)

    def __hash__(self):
        return hash(("HalfInt", self.twice))

    def __bool__(self):
        return self.twice != 0

    @property
    def is_integer(self):
        return self.twice % 2 == 0

    def as_fraction(self):
        return Fraction(self.twice, 2)

    def __str__(self):
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return "%d/2" % self.twice

    def __repr__(self):
        return "HalfInt(%d)" % self.twice


def _twice_of(x):
    if isinstance(x, HalfInt):
        return x.twice
    if isinstance(x, int):
        return 2 * x
    raise TypeError("expected HalfInt or int, got %r" % (x,))


def _as_halfint(x):
    if isinstance(x, HalfInt):
        return x
    if isinstance(x, int):
        return HalfInt.whole(x)
    raise TypeError("expected HalfInt or int, got %r" % (x,))


class TruncatedSeries:
    """A Laurent series in q^(1/2) known exactly below a truncation order.

    ``terms`` maps doubled exponents to nonzero integer coefficients, and
    every stored exponent is < ``order``.  Two series are equal iff both the
    orders and the term maps agree.
    """

    __slots__ = ("order", "_terms")

    def __init__(self, terms, order):
        order = _as_halfint(order)
        clean = {}
        for t, c in terms.items():
            t = _twice_of(t) if not isinstance(t, int) else t
            if c != 0 and t < order.twice:
                clean[t] = clean.get(t, 0) + c
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "_terms", {t: c for t, c in clean.items() if c != 0})

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, order):
        return cls({}, order)

    @classmethod
    def one(cls, order):
        return cls({0: 1}, order)

    @classmethod
    def monomial(cls, coeff, exponent, order):
        return cls({_twice_of(exponent): coeff}, order)

    # -- views ------------------------------------------------------------

    def coefficient(self, exponent):
        t = _twice_of(exponent)
        if t >= self.order.twice:
            raise ValueError("coefficient at %s is beyond the truncation order" % _as_halfint(exponent))
        return self._terms.get(t, 0)

    def terms(self):
        """Sorted (HalfInt exponent, coefficient) pairs."""
        return [(HalfInt(t), c) for t, c in sorted(self._terms.items())]

    def is_zero(self):
        return not self._terms

    def min_exponent(self):
        """Smallest stored exponent; HalfInt(0) for the zero series."""
        if not self._terms:
            return HalfInt(0)
        return HalfInt(min(self._terms))

    def leading(self):
        """(exponent, coefficient) of the lowest-degree stored term."""
        if not self._terms:
            raise ValueError("zero series has no leading term")
        t = min(self._terms)
        return HalfInt(t), self._terms[t]

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        order = min(self.order, other.order)
        out = dict(self._terms)
        for t, c in other._terms.items():
            out[t] = out.get(t, 0) + c
        return TruncatedSeries(out, order)

    def __neg__(self):
        return TruncatedSeries({t: -c for t, c in self._terms.items()}, self.order)

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        # The reliable window of a product shrinks with negative exponents:
        # order = min(a.order + minexp(b), b.order + minexp(a)).
        order = HalfInt(min(self.order.twice + other.min_exponent().twice,
                            other.order.twice + self.min_exponent().twice))
        bound = order.twice
        out = {}
        for t1, c1 in self._terms.items():
            for t2, c2 in other._terms.items():
                t = t1 + t2
                if t < bound:
                    out[t] = out.get(t, 0) + c1 * c2
        return TruncatedSeries(out, order)

    def scale(self, k):
        """Multiply all coefficients by the integer k."""
        return TruncatedSeries({t: k * c for t, c in self._terms.items()}, self.order)

    def mul_sign_power(self, k):
        """Multiply by (-q^(1/2))^k for an integer k."""
        if not isinstance(k, int):
            raise TypeError("the power of (-q^(1/2)) must be an integer")
        sign = -1 if k % 2 else 1
        return TruncatedSeries({t + k: sign * c for t, c in self._terms.items()},
                               HalfInt(self.order.twice + k))

    def truncate(self, order):
        """Restrict to a (smaller or equal) truncation order."""
        order = _as_halfint(order)
        if order.twice > self.order.twice:
            raise ValueError("cannot extend a truncated series to a larger order")
        return TruncatedSeries(self._terms, order)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self._terms == other._terms

    def __hash__(self):
        return hash((self.order, tuple(sorted(self._terms.items()))))

    # -- rendering --------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0 + O(q^(%s))" % self.order
        bits = ["%d*q^(%s)" % (c, HalfInt(t)) for t, c in sorted(self._terms.items())]
        return " + ".join(bits) + " + O(q^(%s))" % self.order

    def __repr__(self):
        return "TruncatedSeries(%s)" % self

    def to_machine(self):
        """Machine form: {"twice_order": N, "terms": [[twice_exp, coeff], ...]}."""
        return {"twice_order": self.order.twice,
                "terms": [[t, c] for t, c in sorted(self._terms.items())]}

    def to_machine_json(self):
        return json.dumps(self.to_machine(), separators=(",", ":"), sort_keys=True)

    @classmethod
    def from_machine(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        return cls({int(t): int(c) for t, c in data["terms"]}, HalfInt(int(data["twice_order"])))


_POCHHAMMER_CACHE = {}


def pochhammer_inverse(n, order):
    """1/(q)_n = 1 / prod_{i=1..n} (1 - q^i), expanded below ``order``.

    The coefficient of q^e counts partitions of e into parts <= n.
    """
    if n < 0:
        raise ValueError("pochhammer_inverse needs n >= 0")
    order = _as_halfint(order)
    key = (n, order.twice)
    cached = _POCHHAMMER_CACHE.get(key)
    if cached is not None:
        return cached
    # Exponents are plain integers e with 2e < order.twice.
    emax = (order.twice - 1) // 2 if order.twice > 0 else -1
    coeffs = [0] * (emax + 1)
    if emax >= 0:
        coeffs[0] = 1
        for part in range(1, n + 1):
            for e in range(part, emax + 1):
                coeffs[e] += coeffs[e - part]
    result = TruncatedSeries({2 * e: c for e, c in enumerate(coeffs) if c}, order)
    _POCHHAMMER_CACHE[key] = result
    return result

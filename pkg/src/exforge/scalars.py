"""Exact arithmetic in cyclotomic fields Q(zeta_N).

An element keeps its own order N and a coefficient vector in the power
basis 1, z, ..., z^(phi(N)-1), reduced modulo the N-th cyclotomic
polynomial.  Binary operations lift both operands to the lcm of the two
orders.  Internally the coefficients live in a flint ``fmpq_poly``.
"""

import os
from fractions import Fraction
from functools import lru_cache
from math import gcd

import flint

DEFAULT_MAX_ORDER = 120


class CycloError(ArithmeticError):
    pass


def max_order():
    raw = os.environ.get("EXFORGE_MAX_CYCLOTOMIC_ORDER")
    if raw is None:
        return DEFAULT_MAX_ORDER
    return int(raw)


def lcm(a, b):
    return a // gcd(a, b) * b


def check_order(n):
    if n < 1:
        raise CycloError(f"cyclotomic order must be positive, got {n}")
    if n > max_order():
        raise CycloError(f"cyclotomic order {n} exceeds the configured maximum {max_order()}")


@lru_cache(maxsize=None)
def euler_phi(n):
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def cyclotomic_poly(n):
    """Phi_n as a flint fmpq_poly."""
    return flint.fmpq_poly(flint.fmpz_poly.cyclotomic(n).coeffs())


@lru_cache(maxsize=None)
def cyclotomic_coeffs(n):
    """Integer coefficients of Phi_n, constant term first."""
    return tuple(int(c) for c in flint.fmpz_poly.cyclotomic(n).coeffs())


@lru_cache(maxsize=None)
def power_table(n):
    """Integer rows r[k] with z^k = sum_l r[k][l] z^l for 0 <= k < n.

    Covers every exponent that can show up when two reduced
    polynomials are multiplied, since 2*phi(n) - 1 <= n for n > 2.
    """
    phi = euler_phi(n)
    size = max(n, 2 * phi - 1)
    rows = []
    x = flint.fmpz_poly([0, 1])
    mod = flint.fmpz_poly.cyclotomic(n)
    p = flint.fmpz_poly([1])
    for _ in range(size):
        r = [int(c) for c in (p % mod).coeffs()]
        rows.append(tuple(r + [0] * (phi - len(r))))
        p = p * x
    return tuple(rows)


@lru_cache(maxsize=None)
def _ramanujan_trace(n):
    """Trace of z^k from Q(zeta_n) to Q, for k in range(phi(n))."""
    out = []
    for k in range(euler_phi(n)):
        d = n // gcd(n, k) if k else 1
        out.append(_mobius(d) * euler_phi(n) // euler_phi(d))
    return tuple(out)


def _mobius(n):
    res, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            res = -res
        p += 1
    return -res if n > 1 else res


def _to_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    return Fraction(x)


class Cyclo:
    """Immutable element of Q(zeta_N)."""

    __slots__ = ("order", "_poly")

    def __init__(self, value=0, order=1):
        check_order(order)
        self.order = order
        if isinstance(value, flint.fmpq_poly):
            poly = value
        elif isinstance(value, (list, tuple)):
            poly = flint.fmpq_poly([flint.fmpq(f.numerator, f.denominator)
                                    for f in map(_to_fraction, value)])
        else:
            f = _to_fraction(value)
            poly = flint.fmpq_poly([flint.fmpq(f.numerator, f.denominator)])
        if poly.degree() >= euler_phi(order):
            poly = poly % cyclotomic_poly(order)
        self._poly = poly

    # construction helpers

    @classmethod
    def _raw(cls, poly, order):
        obj = cls.__new__(cls)
        obj.order = order
        obj._poly = poly
        return obj

    @property
    def coeffs(self):
        cs = [_to_fraction(c) for c in self._poly.coeffs()]
        return cs + [Fraction(0)] * (euler_phi(self.order) - len(cs))

    def lift(self, order):
        if order % self.order:
            raise CycloError(f"cannot lift order {self.order} to {order}")
        check_order(order)
        if order == self.order:
            return self
        step = order // self.order
        cs = self._poly.coeffs()
        spread = [0] * (step * (len(cs) - 1) + 1) if cs else []
        for i, c in enumerate(cs):
            spread[step * i] = c
        poly = flint.fmpq_poly(spread) % cyclotomic_poly(order)
        return Cyclo._raw(poly, order)

    def _pair(self, other):
        if not isinstance(other, Cyclo):
            other = Cyclo(other)
        if other.order == self.order:
            return self._poly, other._poly, self.order
        n = lcm(self.order, other.order)
        check_order(n)
        return self.lift(n)._poly, other.lift(n)._poly, n

    # arithmetic

    def __add__(self, other):
        a, b, n = self._pair(other)
        return Cyclo._raw(a + b, n)

    __radd__ = __add__

    def __sub__(self, other):
        a, b, n = self._pair(other)
        return Cyclo._raw(a - b, n)

    def __rsub__(self, other):
        a, b, n = self._pair(other)
        return Cyclo._raw(b - a, n)

    def __neg__(self):
        return Cyclo._raw(-self._poly, self.order)

    def __mul__(self, other):
        a, b, n = self._pair(other)
        p = a * b
        if p.degree() >= euler_phi(n):
            p = p % cyclotomic_poly(n)
        return Cyclo._raw(p, n)

    __rmul__ = __mul__

    def inverse(self):
        if self._poly.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self._poly.degree() == 0:
            return Cyclo._raw(flint.fmpq_poly([1 / self._poly[0]]), self.order)
        g, s, _ = self._poly.xgcd(cyclotomic_poly(self.order))
        # g is a nonzero constant since Phi_N is irreducible
        return Cyclo._raw((s / g[0]) % cyclotomic_poly(self.order), self.order)

    def __truediv__(self, other):
        if not isinstance(other, Cyclo):
            other = Cyclo(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Cyclo(other) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = Cyclo(1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # predicates

    def is_zero(self):
        return self._poly.is_zero()

    def is_rational(self):
        return self._poly.degree() <= 0

    def __bool__(self):
        return not self._poly.is_zero()

    def __eq__(self, other):
        if not isinstance(other, (Cyclo, int, Fraction)):
            return NotImplemented
        a, b, _ = self._pair(other)
        return a == b

    def __hash__(self):
        return hash(self.normalized_trace())

    def normalized_trace(self):
        """Tr(a) / [Q(zeta_N):Q]; independent of the order the element is written in."""
        tr = _ramanujan_trace(self.order)
        total = Fraction(0)
        for c, t in zip(self.coeffs, tr):
            total += c * t
        return total / euler_phi(self.order)

    def conj(self):
        """Complex conjugation z -> z^-1."""
        n = self.order
        out = Cyclo(0, n)
        z = root_of_unity(-1, n)
        for k, c in enumerate(self.coeffs):
            if c:
                out = out + z ** k * c
        return out

    def to_fraction(self):
        if not self.is_rational():
            raise CycloError("element is not rational")
        return self.coeffs[0]

    def __complex__(self):
        import cmath
        z = cmath.exp(2j * cmath.pi / self.order)
        return sum(complex(float(c)) * z ** k for k, c in enumerate(self.coeffs))

    def __repr__(self):
        if self.is_rational():
            return f"Cyclo({self.coeffs[0]})"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*z{self.order}^{k}" if k else f"{c}")
        return "Cyclo(" + " + ".join(terms) + ")"

    # serialization

    def to_json(self):
        return {"order": self.order, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data):
        return cls([Fraction(c) for c in data["coeffs"]], data["order"])


def root_of_unity(k, n):
    """zeta_n^k in canonical form."""
    check_order(n)
    k %= n
    row = power_table(n)[k]
    return Cyclo(list(row), n)


def as_cyclo(x, order=1):
    if isinstance(x, Cyclo):
        return x if order == 1 or x.order == order else x.lift(lcm(x.order, order))
    return Cyclo(x, order)


OMEGA = root_of_unity(1, 3)
I = root_of_unity(1, 4)

"""Bivariate truncated Taylor series.

A ``Jet2`` of order K stores c[i][j] (i+j <= K) with

    f(u0 + h, v0 + k) = sum c[i][j] h^i k^j.

Partial derivatives are recovered as i! j! c[i][j].  Products are Cauchy
products truncated at total degree K; analytic functions are applied by
composing their univariate Taylor series with (a - a0).

Binary operations between jets of different order truncate to the lower
order, which is what a derivative jet (order K-1) mixed with a value jet
needs.  Mixing jets at different base points is an error.
"""
from __future__ import annotations

import math
from functools import lru_cache
from numbers import Real

import numpy as np

DEFAULT_ORDER = 7


class JetError(ArithmeticError):
    """Domain violation, order overflow or incompatible jets."""


@lru_cache(maxsize=None)
def _mask(order: int) -> np.ndarray:
    i, j = np.indices((order + 1, order + 1))
    m = (i + j) <= order
    m.setflags(write=False)
    return m


def _cauchy(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    # embed the 2-D product in a 1-D convolution; row stride 2n-1 prevents carry
    n = order + 1
    w = 2 * n - 1
    pa = np.zeros((n, w))
    pb = np.zeros((n, w))
    pa[:, :n] = a
    pb[:, :n] = b
    full = np.convolve(pa.ravel(), pb.ravel())[: n * w].reshape(n, w)[:, :n]
    return np.where(_mask(order), full, 0.0)


class Jet2:
    __slots__ = ("_c", "order", "base")
    __array_priority__ = 1000

    def __init__(self, coeffs, base=(0.0, 0.0)):
        c = np.array(coeffs, dtype=float)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise JetError("coefficient array must be square")
        order = c.shape[0] - 1
        c[~_mask(order)] = 0.0
        c.setflags(write=False)
        self._c = c
        self.order = order
        self.base = (float(base[0]), float(base[1]))

    # construction -----------------------------------------------------
    @classmethod
    def const(cls, value, base=(0.0, 0.0), order=DEFAULT_ORDER):
        c = np.zeros((order + 1, order + 1))
        c[0, 0] = value
        return cls(c, base)

    @classmethod
    def var(cls, which, base=(0.0, 0.0), order=DEFAULT_ORDER):
        if which not in ("u", "v"):
            raise JetError(f"unknown jet variable {which!r}")
        c = np.zeros((order + 1, order + 1))
        if which == "u":
            c[0, 0] = base[0]
            if order >= 1:
                c[1, 0] = 1.0
        else:
            c[0, 0] = base[1]
            if order >= 1:
                c[0, 1] = 1.0
        return cls(c, base)

    @classmethod
    def _raw(cls, c, order, base):
        obj = object.__new__(cls)
        c.setflags(write=False)
        obj._c = c
        obj.order = order
        obj.base = base
        return obj

    # access -----------------------------------------------------------
    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def value(self) -> float:
        return float(self._c[0, 0])

    def deriv(self, i: int, j: int) -> float:
        if i < 0 or j < 0 or i + j > self.order:
            raise JetError(f"derivative ({i},{j}) exceeds jet order {self.order}")
        return math.factorial(i) * math.factorial(j) * float(self._c[i, j])

    def diff(self, which: str) -> "Jet2":
        """Partial derivative as a jet of order K-1."""
        if self.order < 1:
            raise JetError("cannot differentiate an order-0 jet")
        k = self.order
        if which == "u":
            c = self._c[1:, :k] * np.arange(1, k + 1)[:, None]
        elif which == "v":
            c = self._c[:k, 1:] * np.arange(1, k + 1)[None, :]
        else:
            raise JetError(f"unknown jet variable {which!r}")
        return Jet2._raw(np.where(_mask(k - 1), c, 0.0), k - 1, self.base)

    def truncate(self, order: int) -> "Jet2":
        if order > self.order:
            raise JetError("cannot raise jet order by truncation")
        if order == self.order:
            return self
        return Jet2._raw(self._c[: order + 1, : order + 1].copy(), order, self.base)

    def integrate_u(self, at_base: float = 0.0) -> "Jet2":
        """Antiderivative in u taking the value at_base at the base point.

        Intended for jets independent of v; the result keeps order K.
        """
        k = self.order
        c = np.zeros_like(self._c)
        c[1:, :] = self._c[:k, :] / np.arange(1, k + 1)[:, None]
        c[0, 0] = at_base
        return Jet2(c, self.base)

    def __repr__(self):
        return f"Jet2(order={self.order}, base={self.base}, value={self.value!r})"

    # arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Jet2):
            if other.base != self.base:
                raise JetError(f"jet base mismatch: {self.base} vs {other.base}")
            k = min(self.order, other.order)
            return self.truncate(k)._c, other.truncate(k)._c, k
        if isinstance(other, (Real, np.floating, np.integer)):
            c = np.zeros_like(self._c)
            c[0, 0] = float(other)
            return self._c, c, self.order
        return None

    def __add__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        a, b, k = co
        return Jet2._raw(a + b, k, self.base)

    __radd__ = __add__

    def __sub__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        a, b, k = co
        return Jet2._raw(a - b, k, self.base)

    def __rsub__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        a, b, k = co
        return Jet2._raw(b - a, k, self.base)

    def __neg__(self):
        return Jet2._raw(-self._c, self.order, self.base)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, (Real, np.floating, np.integer)):
            return Jet2._raw(self._c * float(other), self.order, self.base)
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        a, b, k = co
        return Jet2._raw(_cauchy(a, b, k), k, self.base)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (Real, np.floating, np.integer)):
            if other == 0:
                raise JetError("division by zero")
            return Jet2._raw(self._c / float(other), self.order, self.base)
        if not isinstance(other, Jet2):
            return NotImplemented
        q = self * reciprocal(other)
        c = q._c.copy()
        c[0, 0] = self._c[0, 0] / other._c[0, 0]
        return Jet2._raw(c, q.order, q.base)

    def __rtruediv__(self, other):
        if not isinstance(other, (Real, np.floating, np.integer)):
            return NotImplemented
        r = reciprocal(self) * float(other)
        c = r._c.copy()
        c[0, 0] = float(other) / self._c[0, 0]
        return Jet2._raw(c, r.order, r.base)

    def __pow__(self, exponent):
        if isinstance(exponent, (int, np.integer)) or (
            isinstance(exponent, float) and exponent.is_integer() and abs(exponent) < 2**31
        ):
            return ipow(self, int(exponent))
        return power(self, float(exponent))

    def __abs__(self):
        return absolute(self)


# univariate composition --------------------------------------------------

def _compose_series(a: Jet2, d) -> Jet2:
    """sum_n d[n] (a - a0)^n by Horner; d[0] becomes the exact constant term."""
    x = a - a.value
    acc = Jet2.const(d[-1], a.base, a.order)
    for dn in reversed(d[:-1]):
        acc = acc * x + dn
    c = acc._c.copy()
    c[0, 0] = d[0]
    return Jet2._raw(c, a.order, a.base)


def _check(a):
    if not isinstance(a, Jet2):
        raise TypeError(f"expected Jet2, got {type(a).__name__}")


def exp(a: Jet2) -> Jet2:
    _check(a)
    e0 = math.exp(a.value)
    return _compose_series(a, [e0 / math.factorial(n) for n in range(a.order + 1)])


def log(a: Jet2) -> Jet2:
    _check(a)
    a0 = a.value
    if not a0 > 0:
        raise JetError(f"ln of jet with constant term {a0!r}")
    d = [math.log(a0)] + [(-1) ** (n + 1) / (n * a0**n) for n in range(1, a.order + 1)]
    return _compose_series(a, d)


def power(a: Jet2, rho: float) -> Jet2:
    """a**rho for real rho via the binomial series (positive base unless rho is a nonnegative integer)."""
    _check(a)
    a0 = a.value
    if float(rho).is_integer() and rho >= 0:
        return ipow(a, int(rho))
    if float(rho).is_integer() and a0 != 0:
        return ipow(a, int(rho))
    if not a0 > 0:
        raise JetError(f"non-integer power of jet with constant term {a0!r}")
    d = []
    coef = 1.0
    for n in range(a.order + 1):
        d.append(coef * a0 ** (rho - n))
        coef *= (rho - n) / (n + 1)
    d[0] = math.pow(a0, rho)
    return _compose_series(a, d)


def sqrt(a: Jet2) -> Jet2:
    _check(a)
    a0 = a.value
    if not a0 > 0:
        raise JetError(f"sqrt of jet with constant term {a0!r}")
    r = power(a, 0.5)
    c = r._c.copy()
    c[0, 0] = math.sqrt(a0)
    return Jet2._raw(c, r.order, r.base)


def reciprocal(a: Jet2) -> Jet2:
    _check(a)
    a0 = a.value
    if a0 == 0:
        raise JetError("division by a jet with zero constant term")
    return _compose_series(a, [(-1) ** n / a0 ** (n + 1) for n in range(a.order + 1)])


def _trig_series(a: Jet2, phase: int):
    # derivatives of sin cycle through sin, cos, -sin, -cos
    a0 = a.value
    cyc = (math.sin(a0), math.cos(a0), -math.sin(a0), -math.cos(a0))
    return [cyc[(n + phase) % 4] / math.factorial(n) for n in range(a.order + 1)]


def sin(a: Jet2) -> Jet2:
    _check(a)
    return _compose_series(a, _trig_series(a, 0))


def cos(a: Jet2) -> Jet2:
    _check(a)
    return _compose_series(a, _trig_series(a, 1))


def sign(a: Jet2) -> int:
    _check(a)
    if a.value == 0:
        raise JetError("sign of a jet with zero constant term")
    return 1 if a.value > 0 else -1


def absolute(a: Jet2) -> Jet2:
    return a if sign(a) > 0 else -a


def ipow(x, n: int):
    """x**n by repeated squaring; works for floats and jets alike."""
    if n < 0:
        return 1.0 / ipow(x, -n)
    result = None
    base = x
    while n:
        if n & 1:
            result = base if result is None else result * base
        n >>= 1
        if n:
            base = base * base
    if result is None:
        return Jet2.const(1.0, x.base, x.order) if isinstance(x, Jet2) else 1.0
    return result


# multivariate composition ------------------------------------------------

def compose(a: Jet2, A: Jet2, B: Jet2, tol: float = 1e-9) -> Jet2:
    """a(A, B): substitute h = A - A0, k = B - B0 into the Taylor polynomial of a.

    A0, B0 must match a's base point; the result lives at A's base.
    """
    u0, v0 = a.base
    if abs(A.value - u0) > tol * max(1.0, abs(u0)) or abs(B.value - v0) > tol * max(1.0, abs(v0)):
        raise JetError("composition inner jets do not start at the outer base point")
    k = min(a.order, A.order, B.order)
    h = (A - A.value).truncate(k)
    kk = (B - B.value).truncate(k)
    hp = [Jet2.const(1.0, h.base, k)]
    kp = [Jet2.const(1.0, h.base, k)]
    for _ in range(k):
        hp.append(hp[-1] * h)
        kp.append(kp[-1] * kk)
    c = a._c
    acc = Jet2.const(0.0, h.base, k)
    for i in range(k + 1):
        row = None
        for j in range(k + 1 - i):
            if c[i, j] != 0.0:
                term = kp[j] * float(c[i, j])
                row = term if row is None else row + term
        if row is not None:
            acc = acc + (row if i == 0 else hp[i] * row)
    return acc


def scale_variables(a: Jet2, su: float, sv: float, new_base=None) -> Jet2:
    """Coefficients of (h, k) -> a(u0 + su*h, v0 + sv*k), placed at new_base."""
    i, j = np.indices(a._c.shape)
    c = a._c * (float(su) ** i) * (float(sv) ** j)
    return Jet2(c, a.base if new_base is None else new_base)


def rebase(a: Jet2, base) -> Jet2:
    """Same coefficients, relabelled base point (a shift of the coordinates)."""
    return Jet2._raw(a._c.copy(), a.order, (float(base[0]), float(base[1])))


def swap_uv(a: Jet2) -> Jet2:
    return Jet2._raw(a._c.T.copy(), a.order, (a.base[1], a.base[0]))


def allclose(a: Jet2, b, rtol: float = 1e-12, atol: float = 0.0) -> bool:
    if isinstance(b, Jet2):
        k = min(a.order, b.order)
        bc = b.truncate(k)._c
    else:
        k = a.order
        bc = np.zeros_like(a._c)
        bc[0, 0] = float(b)
    return bool(np.allclose(a.truncate(k)._c, bc, rtol=rtol, atol=atol))

"""Univariate rational polynomials, minimal polynomials and Sturm certification."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
import math

from gmpy2 import mpq

from .errors import InputShapeError
from .linalg import linear_solve
from .rational import QArray, Scalar, q, qstr, tdot


class Polynomial:
    """Polynomial in one variable ``t``; coefficients stored lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def t(cls) -> "Polynomial":
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> "Polynomial":
        return cls([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # zero polynomial has degree -1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Scalar:
        return self.coeffs[-1] if self.coeffs else mpq(0)

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (mpq(0),) * (n - len(self.coeffs))
        b = other.coeffs + (mpq(0),) * (n - len(other.coeffs))
        return Polynomial([x + y for x, y in zip(a, b)])

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return Polynomial([c * q(other) for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Polynomial([])
        out = [mpq(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __call__(self, x):
        acc = mpq(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divmod(self, other: "Polynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quo = [mpq(0)] * max(len(rem) - other.degree, 0)
        inv = 1 / other.lc
        while len(rem) - 1 >= other.degree and rem:
            shift = len(rem) - 1 - other.degree
            f = rem[-1] * inv
            quo[shift] = f
            for i, c in enumerate(other.coeffs):
                rem[i + shift] -= f * c
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return Polynomial(quo), Polynomial(rem)

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[1]

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self * (1 / self.lc)

    def primitive(self) -> "Polynomial":
        """Positive rescaling to coprime integer coefficients (sign-preserving)."""
        if self.is_zero():
            return self
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (int(c.denominator) for c in self.coeffs), 1)
        ints = [int(c * den) for c in self.coeffs]
        g = reduce(math.gcd, ints, 0)
        return Polynomial([mpq(i, g) for i in ints])

    def derivative(self) -> "Polynomial":
        return Polynomial([c * i for i, c in enumerate(self.coeffs)][1:])

    def gcd(self, other: "Polynomial") -> "Polynomial":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def pseudo_remainder(self, other: "Polynomial") -> "Polynomial":
        """Remainder of |lc(other)|^(deg a - deg b + 1) · a by other."""
        d = self.degree - other.degree + 1
        if d <= 0:
            return self
        scaled = self * (abs(other.lc) ** d)
        return scaled % other

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for deg in range(self.degree, -1, -1):
            c = self.coeffs[deg]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if deg == 0:
                body = qstr(a)
            else:
                mono = "t" if deg == 1 else f"t^{deg}"
                body = mono if a == 1 else f"{qstr(a)}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"


def minimal_polynomial(M) -> Polynomial:
    """Monic minimal polynomial via linear dependence of powers of M."""
    M = QArray.of(M)
    n = M.shape[0]
    if M.ndim != 2 or M.shape != (n, n):
        raise InputShapeError("minimal polynomial of a non-square array")
    powers = [QArray.eye(n)]
    for k in range(1, n + 1):
        nxt = tdot(powers[-1], M, 1)
        cols = QArray.stack([p.reshape(n * n) for p in powers], axis=1)
        sol = linear_solve(cols, nxt.reshape(n * n))
        if sol.consistent:
            coeffs = [-c for c in sol.particular.to_objects()] + [mpq(1)]
            return Polynomial(coeffs)
        powers.append(nxt)
    raise AssertionError("Cayley-Hamilton bound exceeded")  # pragma: no cover


def sturm_chain(p: Polynomial) -> list[Polynomial]:
    chain = [p.primitive(), p.derivative().primitive()]
    while not chain[-1].is_zero() and chain[-1].degree > 0:
        r = chain[-2].pseudo_remainder(chain[-1])
        if r.is_zero():
            break
        chain.append((-r).primitive())
    return [c for c in chain if not c.is_zero()]


def _sign_changes(signs) -> int:
    s = [x for x in signs if x != 0]
    return sum(1 for a, b in zip(s, s[1:]) if a != b)


def count_real_roots(p: Polynomial) -> int:
    """Number of distinct real roots of p, by a Sturm chain over (−∞, ∞)."""
    if p.degree <= 0:
        return 0
    chain = sturm_chain(p)
    at_pos = [1 if c.lc > 0 else -1 for c in chain]
    at_neg = [(1 if c.lc > 0 else -1) * (-1) ** c.degree for c in chain]
    return _sign_changes(at_neg) - _sign_changes(at_pos)


@dataclass(frozen=True)
class SemisimpleCertificate:
    verdict: bool
    min_poly: Polynomial
    squarefree: bool
    real_root_count: int

    @property
    def obstruction(self) -> Polynomial | None:
        if self.verdict:
            return None
        return self.min_poly


def real_semisimple_test(M) -> SemisimpleCertificate:
    """Is M diagonalizable over ℝ? Decided exactly from its minimal polynomial."""
    p = minimal_polynomial(M)
    squarefree = p.gcd(p.derivative()).degree == 0
    roots = count_real_roots(p)
    return SemisimpleCertificate(squarefree and roots == p.degree, p, squarefree, roots)

"""Exact rational scalars and dense rational arrays.

Scalars are ``gmpy2.mpq``. Arrays are stored as an integer numerator array
with one shared positive denominator. Numerators live in ``int64`` while a
conservative magnitude bound proves no overflow can occur, and silently
promote to Python integers (``object`` dtype) otherwise, so every operation
stays exact.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np
from gmpy2 import mpq

Scalar = type(mpq(0))

_LIMIT = 1 << 62
_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


def q(x) -> Scalar:
    """Coerce ``x`` to an exact rational; floats are refused."""
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (bool, np.bool_)):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (float, np.floating)):
        raise TypeError(f"refusing inexact float {x!r}")
    if isinstance(x, str):
        if not _RATIONAL_RE.match(x):
            raise ValueError(f"not a rational literal: {x!r}")
        return mpq(x.replace(" ", ""))
    if isinstance(x, (int, np.integer)):
        return mpq(int(x))
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def qstr(x) -> str:
    """Canonical text form: ``"p"`` or ``"p/q"`` in lowest terms."""
    x = q(x)
    if x.denominator == 1:
        return str(int(x.numerator))
    return f"{int(x.numerator)}/{int(x.denominator)}"


def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(int(v)) for v in a.flat)
    return int(np.abs(a).max())


def _as_object(a: np.ndarray) -> np.ndarray:
    if a.dtype == object:
        return a
    out = np.empty(a.shape, dtype=object)
    out.flat[:] = [int(v) for v in a.flat]
    return out


def _shrink(a: np.ndarray) -> np.ndarray:
    if a.dtype == object and _maxabs(a) < _LIMIT:
        return a.astype(np.int64)
    return a


def _gcd_all(a: np.ndarray, start: int) -> int:
    if a.size == 0:
        return start
    if a.dtype == object:
        return reduce(math.gcd, (int(v) for v in a.flat), start)
    return math.gcd(int(np.gcd.reduce(a.ravel())), start)


class QArray:
    """Immutable dense array of exact rationals."""

    __slots__ = ("num", "den")

    def __init__(self, num, den: int = 1):
        num = np.asarray(num)
        if num.dtype != object and num.dtype != np.int64:
            if not np.issubdtype(num.dtype, np.integer):
                raise TypeError(f"numerator array must be integral, got {num.dtype}")
            num = num.astype(np.int64)
        den = int(den)
        if den <= 0:
            raise ValueError("denominator must be positive")
        g = _gcd_all(num, den)
        if g == 0 or not num.any():
            num = np.zeros(num.shape, dtype=np.int64)
            den = 1
        elif g > 1:
            num = num // g if num.dtype != object else np.vectorize(lambda v: v // g, otypes=[object])(num)
            den //= g
        num = _shrink(num)
        num.setflags(write=False)
        self.num = num
        self.den = den

    # construction -----------------------------------------------------
    @classmethod
    def of(cls, data) -> "QArray":
        """Build from a nested sequence (or array) of rational-like values."""
        if isinstance(data, QArray):
            return data
        arr = np.array(data, dtype=object)
        flat = [q(v) for v in arr.flat]
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (int(v.denominator) for v in flat), 1)
        out = np.empty(arr.shape, dtype=object)
        out.flat[:] = [int(v.numerator) * (den // int(v.denominator)) for v in flat]
        return cls(out, den)

    @classmethod
    def zeros(cls, shape) -> "QArray":
        return cls(np.zeros(shape, dtype=np.int64))

    @classmethod
    def eye(cls, n: int) -> "QArray":
        return cls(np.eye(n, dtype=np.int64))

    @classmethod
    def stack(cls, items: Sequence["QArray"], axis: int = 0) -> "QArray":
        items = [QArray.of(i) for i in items]
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (i.den for i in items), 1)
        nums = [_scale(i.num, den // i.den) for i in items]
        if any(n.dtype == object for n in nums):
            nums = [_as_object(n) for n in nums]
        return cls(np.stack(nums, axis=axis), den)

    @classmethod
    def concat(cls, items: Sequence["QArray"], axis: int = 0) -> "QArray":
        items = [QArray.of(i) for i in items]
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (i.den for i in items), 1)
        nums = [_scale(i.num, den // i.den) for i in items]
        if any(n.dtype == object for n in nums):
            nums = [_as_object(n) for n in nums]
        return cls(np.concatenate(nums, axis=axis), den)

    # basic protocol ---------------------------------------------------
    @property
    def shape(self):
        return self.num.shape

    @property
    def ndim(self) -> int:
        return self.num.ndim

    @property
    def size(self) -> int:
        return self.num.size

    def __len__(self) -> int:
        return len(self.num)

    def __getitem__(self, idx):
        r = self.num[idx]
        if np.ndim(r) == 0:
            return mpq(int(r), self.den)
        return QArray(r, self.den)

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def __repr__(self) -> str:
        return f"QArray({self.tolist()!r})"

    def tolist(self):
        return _tolist(self.to_objects())

    def to_objects(self) -> np.ndarray:
        out = np.empty(self.shape, dtype=object)
        d = self.den
        out.flat[:] = [mpq(int(v), d) for v in self.num.flat]
        return out

    def to_float(self) -> np.ndarray:
        return np.array([float(mpq(int(v), self.den)) for v in self.num.flat], dtype=float).reshape(self.shape)

    def item(self) -> Scalar:
        if self.size != 1:
            raise ValueError("item() needs a single-entry array")
        return mpq(int(self.num.reshape(-1)[0]), self.den)

    def is_zero(self) -> bool:
        return not self.num.any()

    def equals(self, other) -> bool:
        other = QArray.of(other)
        if self.shape != other.shape:
            return False
        return self.den == other.den and bool(np.array_equal(self.num, other.num))

    def __eq__(self, other):  # pragma: no cover - guard against numpy semantics
        if not isinstance(other, QArray):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def nonzero_entries(self):
        """Yield ``(index, value)`` for nonzero entries in row-major order."""
        for idx in zip(*np.nonzero(self.num)):
            idx = tuple(int(i) for i in idx)
            yield idx, mpq(int(self.num[idx]), self.den)

    def first_nonzero(self):
        for item in self.nonzero_entries():
            return item
        return None

    def count_nonzero(self) -> int:
        return int(np.count_nonzero(self.num))

    # shape manipulation -------------------------------------------------
    def reshape(self, *shape) -> "QArray":
        return QArray(self.num.reshape(*shape), self.den)

    def transpose(self, *axes) -> "QArray":
        return QArray(self.num.transpose(*axes), self.den)

    @property
    def T(self) -> "QArray":
        return self.transpose()

    def moveaxis(self, src, dst) -> "QArray":
        return QArray(np.moveaxis(self.num, src, dst), self.den)

    # arithmetic -------------------------------------------------------
    def __neg__(self) -> "QArray":
        return QArray(-self.num, self.den)

    def __add__(self, other) -> "QArray":
        other = _coerce(other, self.shape)
        den = self.den * other.den // math.gcd(self.den, other.den)
        return QArray(_add(_scale(self.num, den // self.den), _scale(other.num, den // other.den)), den)

    __radd__ = __add__

    def __sub__(self, other) -> "QArray":
        return self + (-_coerce(other, self.shape))

    def __rsub__(self, other) -> "QArray":
        return (-self) + other

    def __mul__(self, s) -> "QArray":
        if isinstance(s, QArray):
            raise TypeError("use tdot/einsum for array products")
        s = q(s)
        return QArray(_scale(self.num, int(s.numerator)), self.den * int(s.denominator))

    __rmul__ = __mul__

    def __truediv__(self, s) -> "QArray":
        s = q(s)
        if s == 0:
            raise ZeroDivisionError("division of an array by zero")
        return self * (1 / s)

    def __matmul__(self, other) -> "QArray":
        other = QArray.of(other)
        return tdot(self, other, ([self.ndim - 1], [0]))

    def sum(self, axis=None):
        r = self.num.sum(axis=axis) if self.num.dtype != object else _as_object(self.num).sum(axis=axis)
        if np.ndim(r) == 0:
            return mpq(int(r), self.den)
        return QArray(np.asarray(r), self.den)


def _tolist(a):
    if isinstance(a, np.ndarray):
        return [_tolist(x) for x in a]
    return a


def _coerce(other, shape) -> QArray:
    if isinstance(other, QArray):
        return other
    if np.ndim(other) == 0 and not isinstance(other, (list, tuple, np.ndarray)):
        s = q(other)
        return QArray(np.full(shape, int(s.numerator), dtype=object), int(s.denominator))
    return QArray.of(other)


def _scale(a: np.ndarray, k: int) -> np.ndarray:
    if k == 1:
        return a
    if a.dtype != object and abs(k) < _LIMIT and _maxabs(a) * abs(k) < _LIMIT:
        return a * k
    return _as_object(a) * k


def _add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype != object and b.dtype != object and _maxabs(a) + _maxabs(b) < _LIMIT:
        return a + b
    return _as_object(a) + _as_object(b)


def tdot(a: QArray, b: QArray, axes) -> QArray:
    """Exact ``numpy.tensordot``."""
    a, b = QArray.of(a), QArray.of(b)
    if isinstance(axes, int):
        ka = list(range(a.ndim - axes, a.ndim))
    else:
        ka = list(np.atleast_1d(axes[0]))
    terms = math.prod(a.shape[i] for i in ka) if ka else 1
    na, nb = a.num, b.num
    if na.dtype == object or nb.dtype == object or _maxabs(na) * _maxabs(nb) * max(terms, 1) >= _LIMIT:
        na, nb = _as_object(na), _as_object(nb)
    return QArray(np.tensordot(na, nb, axes=axes), a.den * b.den)


def einsum(subscripts: str, *operands) -> QArray:
    """Exact ``numpy.einsum`` with explicit output subscripts."""
    ops = [QArray.of(o) for o in operands]
    if "->" not in subscripts:
        raise ValueError("einsum requires explicit output subscripts")
    lhs, out = subscripts.replace(" ", "").split("->")
    sizes: dict[str, int] = {}
    for spec, op in zip(lhs.split(","), ops):
        for ch, dim in zip(spec, op.shape):
            sizes[ch] = dim
    terms = math.prod(sizes[ch] for ch in sizes if ch not in out) or 1
    nums = [o.num for o in ops]
    bound = math.prod(_maxabs(n) for n in nums) * terms
    if any(n.dtype == object for n in nums) or bound >= _LIMIT:
        nums = [_as_object(n) for n in nums]
        res = np.einsum(subscripts, *nums)
    else:
        res = np.einsum(subscripts, *nums, optimize=len(nums) > 2)
    den = math.prod(o.den for o in ops)
    return QArray(np.asarray(res), den)


def as_rows(m: QArray) -> list[list[Scalar]]:
    """Matrix as a list of rows of exact scalars."""
    return [list(r) for r in QArray.of(m).to_objects()]


def vec(values: Iterable) -> QArray:
    return QArray.of(list(values))

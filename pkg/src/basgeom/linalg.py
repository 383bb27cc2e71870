"""Exact linear algebra over the rationals: echelon forms, solves, subspaces."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from gmpy2 import mpq

from .errors import InputShapeError
from .rational import QArray, Scalar, as_rows, q, tdot

ZERO = mpq(0)
ONE = mpq(1)


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row-echelon form. Returns ``(nonzero_rows, pivot_columns)``."""
    m = [[q(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    for r in m:
        if len(r) != ncols:
            raise InputShapeError("ragged matrix")
    pivots: list[int] = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        row = [x * inv for x in m[r]]
        m[r] = row
        nz = [j for j in range(c, ncols) if row[j] != 0]
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f != 0:
                    mi = m[i]
                    for j in nz:
                        mi[j] -= f * row[j]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def _kernel_from_rref(red, pivots, ncols):
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fcol in free:
        v = [ZERO] * ncols
        v[fcol] = ONE
        for row, pc in zip(red, pivots):
            v[pc] = -row[fcol]
        basis.append(v)
    return basis


def _gram_reduce(rows: list[list], ncols: int):
    """For a tall system replace A by AᵀA, which has the same kernel over ℚ."""
    a = QArray.of(rows) if rows else QArray.zeros((0, ncols))
    return as_rows(tdot(a.T, a, 1))


def kernel(A, ncols: int | None = None) -> QArray:
    """Basis of {x : A x = 0}, rows in reduced echelon form."""
    if isinstance(A, QArray):
        if A.ndim != 2:
            raise InputShapeError("kernel expects a matrix")
        ncols = A.shape[1]
        if A.shape[0] > 2 * ncols:
            rows = as_rows(tdot(A.T, A, 1))
        else:
            rows = as_rows(A)
    else:
        rows = [[q(x) for x in r] for r in A]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if len(rows) > 2 * ncols:
            rows = _gram_reduce(rows, ncols)
    if ncols == 0:
        return QArray.zeros((0, 0))
    red, piv = rref(rows, ncols)
    basis = _kernel_from_rref(red, piv, ncols)
    if not basis:
        return QArray.zeros((0, ncols))
    red2, _ = rref(basis, ncols)
    return QArray.of(red2)


@dataclass(frozen=True)
class Solution:
    particular: QArray | None
    kernel: QArray

    @property
    def consistent(self) -> bool:
        return self.particular is not None


def linear_solve(A, b) -> Solution:
    """Exact solution set of ``A x = b``."""
    A = QArray.of(A)
    b = QArray.of(b)
    if A.ndim != 2 or b.ndim != 1 or A.shape[0] != b.shape[0]:
        raise InputShapeError(f"shape mismatch: A {A.shape}, b {b.shape}")
    m, n = A.shape
    ker = kernel(A) if m else QArray.of([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])
    if m == 0:
        return Solution(QArray.zeros((n,)), ker)
    rows = as_rows(A)
    bb = list(b.to_objects())
    aug = [r + [bv] for r, bv in zip(rows, bb)]
    red, piv = rref(aug, n + 1)
    if piv and piv[-1] == n:
        return Solution(None, ker)
    x = [ZERO] * n
    for row, pc in zip(red, piv):
        x[pc] = row[n]
    return Solution(QArray.of(x), ker)


def rank(A) -> int:
    A = QArray.of(A)
    if A.size == 0:
        return 0
    rows = as_rows(A)
    if A.shape[0] > 2 * A.shape[1]:
        rows = as_rows(tdot(A.T, A, 1))
    return len(rref(rows, A.shape[1])[1])


def inverse(M) -> QArray:
    M = QArray.of(M)
    n = M.shape[0]
    if M.shape != (n, n):
        raise InputShapeError("inverse of a non-square matrix")
    rows = as_rows(M)
    aug = [r + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(rows)]
    red, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return QArray.of([r[n:] for r in red])


def det(M) -> Scalar:
    rows = as_rows(QArray.of(M))
    n = len(rows)
    d = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return ZERO
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            d = -d
        d *= rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, n):
            f = rows[i][c] * inv
            if f:
                for j in range(c, n):
                    rows[i][j] -= f * rows[c][j]
    return d


def leading_minors(M) -> list[Scalar]:
    """All leading principal minors, via elimination without pivoting."""
    rows = as_rows(QArray.of(M))
    n = len(rows)
    out = []
    prod = ONE
    for c in range(n):
        piv = rows[c][c]
        prod *= piv
        out.append(prod)
        if piv == 0:
            # fall back to explicit determinants for the rest
            out.extend(det([r[: k + 1] for r in as_rows(QArray.of(M))[: k + 1]]) for k in range(c + 1, n))
            return out
        inv = 1 / piv
        for i in range(c + 1, n):
            f = rows[i][c] * inv
            if f:
                for j in range(c, n):
                    rows[i][j] -= f * rows[c][j]
    return out


def is_positive_definite(G) -> bool:
    G = QArray.of(G)
    if not G.equals(G.T):
        return False
    return all(m > 0 for m in leading_minors(G))


class Subspace:
    """A linear subspace of ℚⁿ stored by a reduced row-echelon basis."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, vectors, ambient_dim: int):
        rows = as_rows(QArray.of(vectors)) if len(vectors) else []
        red, piv = rref(rows, ambient_dim) if rows else ([], [])
        self.ambient_dim = ambient_dim
        self.basis = QArray.of(red) if red else QArray.zeros((0, ambient_dim))
        self.pivots = tuple(piv)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(QArray.eye(n), n)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls([], n)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def vectors(self) -> list[QArray]:
        return [self.basis[i] for i in range(self.dim)]

    def coords(self, v) -> QArray | None:
        """Coordinates of ``v`` in the echelon basis, or None if v is outside."""
        v = QArray.of(v)
        if self.dim == 0:
            return QArray.zeros((0,)) if v.is_zero() else None
        c = QArray.of([v[p] for p in self.pivots])
        if (tdot(c, self.basis, 1) - v).is_zero():
            return c
        return None

    def contains(self, v) -> bool:
        return self.coords(v) is not None

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.vectors())

    def __add__(self, other: "Subspace") -> "Subspace":
        vs = self.vectors() + other.vectors()
        return Subspace(QArray.stack(vs) if vs else [], self.ambient_dim)

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim)
        stacked = QArray.stack([*self.vectors(), *[-w for w in other.vectors()]])
        ker = kernel(stacked.T)
        vs = [tdot(ker[i][: self.dim], self.basis, 1) for i in range(ker.shape[0])]
        return Subspace(QArray.stack(vs) if vs else [], self.ambient_dim)

    def complement(self) -> "Subspace":
        """Span of the unit vectors at non-pivot positions."""
        piv = set(self.pivots)
        rows = [[ONE if j == i else ZERO for j in range(self.ambient_dim)] for i in range(self.ambient_dim) if i not in piv]
        return Subspace(rows, self.ambient_dim)

    def orthogonal_complement(self, G) -> "Subspace":
        """{x : G(v, x) = 0 for v in self}."""
        G = QArray.of(G)
        if self.dim == 0:
            return Subspace.full(self.ambient_dim)
        k = kernel(tdot(self.basis, G, 1))
        return Subspace(k if k.shape[0] else [], self.ambient_dim)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and self.basis.equals(other.basis)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, basis={self.basis.tolist()})"

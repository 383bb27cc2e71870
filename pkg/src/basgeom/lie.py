"""Lie algebras given by exact structure constants.

Convention: ``c[k, i, j]`` is the coefficient of ``x_k`` in ``[x_i, x_j]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from gmpy2 import mpq

from .errors import InputShapeError, NotALieAlgebraError, NotASubalgebraError
from .linalg import Subspace, kernel
from .rational import QArray, Scalar, einsum, q, tdot


class LieAlgebra:
    """Finite-dimensional real Lie algebra with rational structure constants."""

    __slots__ = ("names", "c", "_ad")

    def __init__(self, names: Sequence[str], c, *, validate: bool = True):
        names = tuple(str(n) for n in names)
        c = QArray.of(c)
        n = len(names)
        if len(set(names)) != n:
            raise InputShapeError(f"basis names are not distinct: {names}")
        if c.shape != (n, n, n):
            raise InputShapeError(f"structure constants must have shape {(n, n, n)}, got {c.shape}")
        self.names = names
        self.c = c
        self._ad = None
        if validate:
            check_lie(self)

    @classmethod
    def from_brackets(cls, names: Sequence[str], brackets: Mapping, *, validate: bool = True) -> "LieAlgebra":
        """Build from ``{(x, y): {z: coeff, ...}}``; antisymmetry is filled in.

        Entries may name basis elements or give integer indices.
        """
        names = list(names)
        index = {nm: i for i, nm in enumerate(names)}
        n = len(names)
        arr = np.full((n, n, n), mpq(0), dtype=object)

        def idx(x):
            if isinstance(x, (int, np.integer)):
                return int(x)
            if x not in index:
                raise InputShapeError(f"unknown basis element {x!r}")
            return index[x]

        for (x, y), value in brackets.items():
            i, j = idx(x), idx(y)
            if i == j:
                if any(q(v) != 0 for v in value.values()):
                    raise NotALieAlgebraError(f"[{names[i]}, {names[i]}] must vanish", triple=(i, i, None))
                continue
            for z, coeff in value.items():
                k = idx(z)
                coeff = q(coeff)
                if arr[k, j, i] != 0 and arr[k, j, i] != -coeff:
                    raise NotALieAlgebraError(f"inconsistent antisymmetric entries for [{names[i]}, {names[j]}]")
                arr[k, i, j] = coeff
                arr[k, j, i] = -coeff
        return cls(names, QArray.of(arr), validate=validate)

    @classmethod
    def abelian(cls, n: int, prefix: str = "a") -> "LieAlgebra":
        return cls([f"{prefix}{i + 1}" for i in range(n)], QArray.zeros((n, n, n)))

    # basic structure -------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def basis_vector(self, i) -> QArray:
        if isinstance(i, str):
            i = self.index(i)
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return QArray(v)

    def bracket(self, x, y) -> QArray:
        return einsum("kij,i,j->k", self.c, QArray.of(x), QArray.of(y))

    def ad(self, x) -> QArray:
        """Matrix of ad(x): columns are images of basis vectors."""
        return einsum("kij,i->kj", self.c, QArray.of(x))

    def ad_basis(self) -> QArray:
        """Stack ``ad(x_i)`` as an array ``[i, k, j]``."""
        if self._ad is None:
            self._ad = self.c.transpose(1, 0, 2)
        return self._ad

    def killing(self) -> QArray:
        ad = self.ad_basis()
        return einsum("ikl,jlk->ij", ad, ad)

    def is_abelian(self) -> bool:
        return self.c.is_zero()

    def bracket_of_subspaces(self, U: Subspace, W: Subspace) -> Subspace:
        vs = [self.bracket(u, w) for u in U.vectors() for w in W.vectors()]
        vs = [v for v in vs if not v.is_zero()]
        return Subspace(QArray.stack(vs) if vs else [], self.dim)

    def centralizer(self, U: Subspace) -> Subspace:
        """{x : [x, u] = 0 for all u in U}."""
        if U.dim == 0:
            return Subspace.full(self.dim)
        rows = QArray.stack([einsum("kij,j->ki", self.c, u) for u in U.vectors()]).reshape(U.dim * self.dim, self.dim)
        k = kernel(rows)
        return Subspace(k if k.shape[0] else [], self.dim)

    def centre(self) -> Subspace:
        return self.centralizer(Subspace.full(self.dim))

    def is_subalgebra(self, U: Subspace) -> bool:
        return U.contains_space(self.bracket_of_subspaces(U, U))

    def structure_in_basis(self, P, names: Sequence[str] | None = None) -> "LieAlgebra":
        """The same algebra written in the basis given by the columns of P."""
        from .linalg import inverse

        P = QArray.of(P)
        Pinv = inverse(P)
        c2 = einsum("ak,kij,ib,jc->abc", Pinv, self.c, P, P)
        if names is None:
            names = [f"b{i + 1}" for i in range(self.dim)]
        return LieAlgebra(names, c2, validate=False)

    def __eq__(self, other) -> bool:
        return isinstance(other, LieAlgebra) and self.names == other.names and self.c.equals(other.c)

    __hash__ = None

    def __repr__(self) -> str:
        return f"LieAlgebra(dim={self.dim}, names={list(self.names)})"


def jacobiator(alg: LieAlgebra) -> QArray:
    """J[l, i, j, k] = component l of [[x_i,x_j],x_k] + cyclic."""
    c = alg.c
    t = einsum("mij,lmk->lijk", c, c)
    return t + t.transpose(0, 2, 3, 1) + t.transpose(0, 3, 1, 2)


def check_lie(alg: LieAlgebra) -> None:
    c = alg.c
    asym = c + c.transpose(0, 2, 1)
    if not asym.is_zero():
        (k, i, j), v = asym.first_nonzero()
        raise NotALieAlgebraError(
            f"antisymmetry fails for [{alg.names[i]}, {alg.names[j]}] in component {alg.names[k]}",
            triple=(i, j, None),
        )
    jac = jacobiator(alg)
    if not jac.is_zero():
        (l, i, j, k), v = jac.first_nonzero()
        trip = (alg.names[i], alg.names[j], alg.names[k])
        raise NotALieAlgebraError(
            f"Jacobi identity fails on ({', '.join(trip)}): component {alg.names[l]} = {v}",
            triple=trip,
            witness=jac,
        )


@dataclass(frozen=True)
class AlgebraReport:
    centre: Subspace
    derived: Subspace
    lower_central: tuple
    derived_series: tuple
    nilpotency_class: int | None
    killing: QArray

    @property
    def nilpotent(self) -> bool:
        return self.nilpotency_class is not None

    @property
    def solvable(self) -> bool:
        return self.derived_series[-1].dim == 0


def analyze_algebra(alg: LieAlgebra) -> AlgebraReport:
    check_lie(alg)
    full = Subspace.full(alg.dim)
    derived = alg.bracket_of_subspaces(full, full)
    lower = [full]
    while True:
        nxt = alg.bracket_of_subspaces(full, lower[-1])
        if nxt == lower[-1]:
            break
        lower.append(nxt)
    ds = [full]
    while True:
        nxt = alg.bracket_of_subspaces(ds[-1], ds[-1])
        if nxt == ds[-1]:
            break
        ds.append(nxt)
    if lower[-1].dim == 0:
        # number of nonzero terms g = C^1 ⊋ C^2 ⊋ ... ⊋ C^c ⊋ 0
        nil_class = len(lower) - 1
    else:
        nil_class = None
    return AlgebraReport(
        centre=alg.centre(),
        derived=derived,
        lower_central=tuple(lower),
        derived_series=tuple(ds),
        nilpotency_class=nil_class,
        killing=alg.killing(),
    )


def direct_sum(g1: LieAlgebra, g2: LieAlgebra, suffixes=("_1", "_2")) -> LieAlgebra:
    """Block direct sum; clashing basis names are disambiguated by suffixing."""
    n1, n2 = g1.dim, g2.dim
    names1, names2 = list(g1.names), list(g2.names)
    if set(names1) & set(names2):
        clash = set(names1) & set(names2)
        names1 = [nm + suffixes[0] if nm in clash else nm for nm in names1]
        names2 = [nm + suffixes[1] if nm in clash else nm for nm in names2]
        taken = set()
        for lst in (names1, names2):
            for i, nm in enumerate(lst):
                base, k = nm, 2
                while nm in taken:
                    nm = f"{base}_{k}"
                    k += 1
                lst[i] = nm
                taken.add(nm)
    n = n1 + n2
    c = np.zeros((n, n, n), dtype=object)
    c[...] = 0
    c1 = g1.c.to_objects()
    c2 = g2.c.to_objects()
    c[:n1, :n1, :n1] = c1
    c[n1:, n1:, n1:] = c2
    return LieAlgebra(names1 + names2, QArray.of(c), validate=False)


def _complex(x):
    """Accept a rational, a (re, im) pair, or a Python complex with rational parts."""
    if isinstance(x, tuple):
        return q(x[0]), q(x[1])
    if isinstance(x, complex):
        raise TypeError("use (re, im) pairs of rationals, not floating complex numbers")
    return q(x), mpq(0)


def realify(structure_constants, dim_complex: int, names: Sequence[str] | None = None):
    """Underlying real algebra of a complex Lie algebra.

    ``structure_constants[k][i][j]`` may hold rationals or ``(re, im)`` pairs.
    Real basis order: x_1..x_n followed by i·x_1..i·x_n.
    Returns ``(algebra, J_mult)``.
    """
    n = dim_complex
    sc = np.empty((n, n, n), dtype=object)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                sc[k, i, j] = _complex(structure_constants[k][i][j])
    real = np.full((2 * n, 2 * n, 2 * n), mpq(0), dtype=object)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                a, b = sc[k, i, j]
                if a == 0 and b == 0:
                    continue
                # [x_i, x_j] = (a + ib) x_k
                real[k, i, j] += a
                real[n + k, i, j] += b
                # [x_i, i x_j] = i[x_i, x_j] = a i x_k - b x_k
                real[n + k, i, n + j] += a
                real[k, i, n + j] -= b
                real[n + k, n + i, j] += a
                real[k, n + i, j] -= b
                # [i x_i, i x_j] = -[x_i, x_j]
                real[k, n + i, n + j] -= a
                real[n + k, n + i, n + j] -= b
    if names is None:
        names = [f"x{i + 1}" for i in range(n)]
    names = list(names) + [f"i{nm}" for nm in names]
    alg = LieAlgebra(names, QArray.of(real))
    J = np.full((2 * n, 2 * n), mpq(0), dtype=object)
    for i in range(n):
        J[n + i, i] = mpq(1)
        J[i, n + i] = mpq(-1)
    return alg, QArray.of(J)


def relative_normalizer(g: LieAlgebra, u: Subspace) -> Subspace:
    """{x ∈ g : [x, u] ⊆ u}."""
    if not g.is_subalgebra(u):
        raise NotASubalgebraError("the given subspace is not closed under the bracket")
    if u.dim == g.dim:
        return Subspace.full(g.dim)
    # x ↦ [x, u_a] projected onto a complement of u must vanish
    comp = u.complement()
    n = g.dim
    P = QArray.stack(u.vectors() + comp.vectors(), axis=1)
    from .linalg import inverse

    Pinv = inverse(P)
    proj = Pinv[u.dim :]  # coordinates along the complement
    rows = []
    for ua in u.vectors():
        # [x, u_a] = -ad(u_a) x
        rows.append(tdot(proj, g.ad(ua), 1))
    A = QArray.stack(rows).reshape(len(rows) * (n - u.dim), n) if rows else QArray.zeros((0, n))
    k = kernel(A) if rows else QArray.eye(n)
    return Subspace(k if k.shape[0] else [], n)


# standard algebras -----------------------------------------------------------


def heisenberg(m: int, prefix: str = "", centre: str | None = None) -> LieAlgebra:
    """Real Heisenberg algebra of dimension 2m+1: [x_i, y_i] = z."""
    names = []
    for i in range(m):
        names += [f"{prefix}x{i + 1}", f"{prefix}y{i + 1}"]
    z = centre or f"{prefix}z"
    names.append(z)
    br = {(f"{prefix}x{i + 1}", f"{prefix}y{i + 1}"): {z: 1} for i in range(m)}
    return LieAlgebra.from_brackets(names, br)


def su2(prefix: str = "x") -> LieAlgebra:
    """su(2) with [x1,x2]=x3, [x2,x3]=x1, [x3,x1]=x2."""
    a, b, c = (f"{prefix}1", f"{prefix}2", f"{prefix}3")
    return LieAlgebra.from_brackets([a, b, c], {(a, b): {c: 1}, (b, c): {a: 1}, (c, a): {b: 1}})


def sl2r() -> LieAlgebra:
    return LieAlgebra.from_brackets(["h", "e", "f"], {("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}, ("e", "f"): {"h": 1}})

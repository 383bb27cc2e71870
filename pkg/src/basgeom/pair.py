"""Reductive pairs (l, u, m).

A plain Lie algebra is treated as the pair with trivial isotropy, so every
geometric routine works on one carrier type.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import EffectivityError, InputShapeError, NotASubalgebraError
from .lie import LieAlgebra
from .linalg import Subspace, inverse, kernel
from .rational import QArray, einsum, tdot


def largest_ideal_in(alg: LieAlgebra, U: Subspace) -> Subspace:
    """Largest ideal of ``alg`` contained in ``U``."""
    I = U
    n = alg.dim
    while I.dim:
        # x = Σ c_a b_a with [x, x_j] ∈ I for every j
        comp = I.complement()
        P = QArray.stack(I.vectors() + comp.vectors(), axis=1)
        proj = inverse(P)[I.dim :]
        B = I.basis.T  # n × dim I
        rows = []
        for j in range(n):
            # [x, x_j] = -ad(x_j) x
            rows.append(tdot(tdot(proj, alg.ad(alg.basis_vector(j)), 1), B, 1))
        if comp.dim == 0:
            return I
        A = QArray.stack(rows).reshape(n * comp.dim, I.dim)
        k = kernel(A)
        if k.shape[0] == I.dim:
            return I
        vs = [tdot(k[i], I.basis, 1) for i in range(k.shape[0])]
        I = Subspace(QArray.stack(vs) if vs else [], n)
    return I


def _default_names(alg: LieAlgebra, vectors: QArray, prefix: str) -> list[str]:
    names = []
    for v in vectors:
        nz = list(v.nonzero_entries())
        if len(nz) == 1 and nz[0][1] == 1:
            names.append(alg.names[nz[0][0][0]])
        else:
            names = None
            break
    if names is None or len(set(names)) != len(names):
        names = [f"{prefix}{i + 1}" for i in range(vectors.shape[0])]
    return names


class ReductivePair:
    """Reductive decomposition l = u ⊕ m with [u, m] ⊆ m.

    ``u_basis`` and ``m_basis`` are rows of coordinates in ``l``; the given
    order of the m-basis is preserved, since metrics and complex structures
    on m are expressed in it.
    """

    def __init__(
        self,
        l: LieAlgebra,
        u_basis,
        m_basis,
        *,
        m_names: Sequence[str] | None = None,
        u_names: Sequence[str] | None = None,
        check_effective: bool = True,
    ):
        n = l.dim
        ub = QArray.of(u_basis) if len(u_basis) else QArray.zeros((0, n))
        mb = QArray.of(m_basis) if len(m_basis) else QArray.zeros((0, n))
        if ub.ndim != 2 or mb.ndim != 2 or ub.shape[1] != n or mb.shape[1] != n:
            raise InputShapeError("isotropy and complement must be given as coordinate rows in l")
        du, dm = ub.shape[0], mb.shape[0]
        if du + dm != n:
            raise InputShapeError(f"dim u + dim m = {du + dm} differs from dim l = {n}")
        B = QArray.stack(list(ub) + list(mb), axis=1) if n else QArray.zeros((0, 0))
        try:
            Binv = inverse(B) if n else QArray.zeros((0, 0))
        except ZeroDivisionError:
            raise InputShapeError("u and m do not span l as a direct sum") from None
        self.l = l
        self.u_basis = ub
        self.m_basis = mb
        self.u = Subspace(ub, n) if du else Subspace.zero(n)
        self.m = Subspace(mb, n) if dm else Subspace.zero(n)
        self.B = B
        self.Binv = Binv
        self.du = du
        self.dm = dm
        self.m_names = tuple(m_names) if m_names else tuple(_default_names(l, mb, "m"))
        self.u_names = tuple(u_names) if u_names else tuple(_default_names(l, ub, "u"))
        if len(self.m_names) != dm or len(self.u_names) != du:
            raise InputShapeError("wrong number of basis names for u or m")

        # brackets in adapted coordinates: c'[k,i,j] with k,i,j over (u | m)
        cp = einsum("ak,kij,ib,jc->abc", Binv, l.c, B, B)
        uu = cp[:, :du, :du]
        if not uu[du:].is_zero():
            raise NotASubalgebraError("u is not a subalgebra of l")
        um = cp[:, :du, du:]
        if not um[:du].is_zero():
            (a, b, c), _ = um[:du].first_nonzero()
            raise InputShapeError(
                f"[u, m] is not contained in m: [{self.u_names[b]}, {self.m_names[c]}] has a u-component"
            )
        mm = cp[:, du:, du:]
        self.cadapt = cp
        self.mbr = mm[du:]  # m-part of [m_i, m_j]
        self.ubr = mm[:du]  # u-part of [m_i, m_j]
        self.adu = um[du:].transpose(1, 0, 2)  # adu[a, k, l] = m-coeff k of [u_a, m_l]
        self.ucon = uu[:du]  # structure constants of u
        if check_effective and du:
            ideal = largest_ideal_in(l, self.u)
            if ideal.dim:
                raise EffectivityError(f"u contains a nonzero ideal of l of dimension {ideal.dim}", witness=ideal)

    @classmethod
    def from_algebra(cls, alg: LieAlgebra) -> "ReductivePair":
        return cls(alg, [], QArray.eye(alg.dim), m_names=alg.names)

    @property
    def trivial_isotropy(self) -> bool:
        return self.du == 0

    def split(self, x) -> tuple[QArray, QArray]:
        """(u-coordinates, m-coordinates) of an element of l."""
        c = tdot(self.Binv, QArray.of(x), 1)
        return c[: self.du], c[self.du :]

    def from_m(self, v) -> QArray:
        return tdot(QArray.of(v), self.m_basis, 1)

    def from_u(self, v) -> QArray:
        return tdot(QArray.of(v), self.u_basis, 1)

    def bracket_m(self, X, Y) -> QArray:
        """[X, Y]_m for m-coordinate vectors."""
        return einsum("kij,i,j->k", self.mbr, X, Y)

    def bracket_u(self, X, Y) -> QArray:
        return einsum("aij,i,j->a", self.ubr, X, Y)

    def ad_u_on_m(self, a) -> QArray:
        return self.adu[a]

    def is_symmetric(self) -> bool:
        return self.mbr.is_zero()

    def __repr__(self) -> str:
        return f"ReductivePair(dim l={self.l.dim}, dim u={self.du}, dim m={self.dm})"


def as_pair(carrier) -> ReductivePair:
    if isinstance(carrier, ReductivePair):
        return carrier
    if isinstance(carrier, LieAlgebra):
        return ReductivePair.from_algebra(carrier)
    raise InputShapeError(f"expected a LieAlgebra or ReductivePair, got {type(carrier).__name__}")

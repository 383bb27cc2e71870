"""Invariant connections as Nomizu maps, and the Hermitian verdict suite.

A connection is encoded by ``lam[x, k, l]``: the matrix of Λ(m_x) acting on m.
Curvature uses the sign R(X,Y) = ∇_[X,Y] − ∇_X∇_Y + ∇_Y∇_X, which in Nomizu
form reads R(X,Y) = Λ([X,Y]_m) + ad([X,Y]_u)|_m − [Λ(X), Λ(Y)].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from gmpy2 import mpq

from .errors import InternalInconsistencyError, NotIntegrableError
from .hermitian import HermitianData, ce_differential, fundamental_form
from .pair import ReductivePair
from .rational import QArray, einsum, tdot
from .tensors import InvariantTensor, gl_action_batch

HALF = mpq(1, 2)


@dataclass(frozen=True, eq=False)
class ConnectionMap:
    pair: ReductivePair
    lam: QArray
    name: str = "connection"

    def at(self, X) -> QArray:
        """Λ(X) for an m-coordinate vector X."""
        return tdot(QArray.of(X), self.lam, 1)

    @cached_property
    def torsion(self) -> InvariantTensor:
        """T(X,Y) = Λ(X)Y − Λ(Y)X − [X,Y]_m."""
        lam = self.lam
        T = lam.transpose(1, 0, 2) - lam.transpose(1, 2, 0) - self.pair.mbr
        return InvariantTensor((1, 2), T, "alternating")

    @cached_property
    def curvature(self) -> InvariantTensor:
        return curvature_of(self, self.pair)

    def derivative(self, tau: InvariantTensor) -> InvariantTensor:
        return covariant_derivative(self, tau)

    def is_metric(self, G) -> bool:
        return gl_action_batch(self.lam, (0, 2), G).is_zero()


def curvature_of(cm: ConnectionMap, pair_or_algebra=None) -> InvariantTensor:
    """R[k, i, j, l] = component k of R(m_i, m_j) m_l."""
    p = cm.pair
    lam = cm.lam
    t1 = einsum("cij,ckl->kijl", p.mbr, lam)
    LL = einsum("ikp,jpl->kijl", lam, lam)
    R = t1 - LL + LL.transpose(0, 2, 1, 3)
    if p.du:
        R = R + einsum("aij,akl->kijl", p.ubr, p.adu)
    return InvariantTensor((1, 3), R)


def covariant_derivative(cm: ConnectionMap, tau: InvariantTensor, *, compare: ConnectionMap | None = None,
                         torsion: InvariantTensor | None = None) -> InvariantTensor:
    """∇τ with the direction slot first among the lower slots.

    With ``compare`` (the Levi-Civita map) and ``torsion`` supplied, the
    relation ∇_X τ − D_X τ = (½ X⌟T)·τ is asserted componentwise.
    """
    raw = gl_action_batch(cm.lam, tau.valence, tau.comp)
    if compare is not None and torsion is not None:
        other = gl_action_batch(compare.lam, tau.valence, tau.comp)
        half_T = torsion.comp.transpose(1, 0, 2) * HALF  # [x, k, y] = ½T(x, y)^k
        corr = gl_action_batch(half_T, tau.valence, tau.comp)
        if not (raw - other - corr).equals(QArray.zeros(raw.shape)):
            raise InternalInconsistencyError("∇ − D differs from the torsion correction")
    if tau.r == 1:
        raw = raw.moveaxis(0, 1)
    return InvariantTensor((tau.r, tau.s + 1), raw)


def koszul_map(pair: ReductivePair, G: QArray) -> ConnectionMap:
    """Koszul formula 2g(Λ(X)Y,Z) = g([X,Y],Z) − g([Y,Z],X) + g([Z,X],Y), m-projected."""
    from .linalg import inverse

    b = tdot(pair.mbr, G, ([0], [0]))  # b[i, j, c] = g([m_i, m_j]_m, m_c)
    L = (b - b.transpose(2, 0, 1) + b.transpose(1, 2, 0)) * HALF  # L[x,y,z] = g(Λ(x)y, z)
    lam = einsum("kz,xyz->xky", inverse(G), L)
    cm = ConnectionMap(pair, lam, "levi-civita")
    if not cm.torsion.is_zero():
        raise InternalInconsistencyError("Levi-Civita map has torsion")
    if not cm.is_metric(G):
        raise InternalInconsistencyError("Levi-Civita map is not metric")
    return cm


def levi_civita(h: HermitianData) -> ConnectionMap:
    return koszul_map(h.pair, h.G)


@dataclass(frozen=True, eq=False)
class BismutData:
    T: InvariantTensor  # (1, 2)
    T3: InvariantTensor  # (0, 3): g(T(X,Y),Z)
    map: ConnectionMap
    lc: ConnectionMap
    domega: InvariantTensor


def _torsion_form(h: HermitianData, domega: InvariantTensor) -> QArray:
    J = h.J
    return einsum("ijk,ia,jb,kc->abc", domega.comp, J, J, J)


def bismut(h: HermitianData) -> BismutData:
    """Bismut connection ∇ = D + ½T with g(T(X,Y),Z) = dω(JX,JY,JZ)."""
    omega = fundamental_form(h)
    domega = ce_differential(omega, h.pair)
    T3 = _torsion_form(h, domega)
    if not h.integrable:
        raise NotIntegrableError(
            "J is not integrable; the Bismut connection is not defined",
            nijenhuis=h.nijenhuis,
            torsion=InvariantTensor((0, 3), T3),
        )
    T = einsum("kc,abc->kab", h.Ginv, T3)
    lc = levi_civita(h)
    lamB = lc.lam + T.transpose(1, 0, 2) * HALF
    cm = ConnectionMap(h.pair, lamB, "bismut")
    if not cm.is_metric(h.G):
        raise InternalInconsistencyError("Bismut map does not preserve g")
    if not gl_action_batch(lamB, (1, 1), h.J).is_zero():
        raise InternalInconsistencyError("Bismut map does not preserve J")
    if not cm.torsion.comp.equals(T):
        raise InternalInconsistencyError("torsion of the Bismut map differs from the dω-defined tensor")
    return BismutData(
        T=InvariantTensor((1, 2), T, "alternating"),
        T3=InvariantTensor((0, 3), T3, "alternating"),
        map=cm,
        lc=lc,
        domega=domega,
    )


@dataclass(frozen=True, eq=False)
class ChernLee:
    T_ch: InvariantTensor
    theta: InvariantTensor
    theta_sharp: QArray


def chern_lee(h: HermitianData, domega: InvariantTensor | None = None) -> ChernLee:
    """Chern torsion −2g(T^Ch(X,Y),Z) = dω(JX,Y,Z) + dω(X,JY,Z) and the Lee form."""
    if not h.integrable:
        raise NotIntegrableError("J is not integrable", nijenhuis=h.nijenhuis)
    if domega is None:
        domega = ce_differential(fundamental_form(h), h.pair)
    J = h.J
    d = domega.comp
    low = (einsum("ibc,ia->abc", d, J) + einsum("ajc,jb->abc", d, J)) * mpq(-1, 2)
    Tch = einsum("kc,abc->kab", h.Ginv, low)
    JT = tdot(J, Tch, ([1], [0]))
    if not (JT - einsum("kpb,pa->kab", Tch, J)).is_zero() or not (JT - einsum("kap,pb->kab", Tch, J)).is_zero():
        raise InternalInconsistencyError("Chern torsion is not of type (1,1)")
    theta = einsum("kxk->x", Tch)
    theta_sharp = tdot(h.Ginv, theta, 1)
    return ChernLee(InvariantTensor((1, 2), Tch, "alternating"), InvariantTensor((0, 1), theta), theta_sharp)


@dataclass(frozen=True)
class Check:
    passed: bool
    witness: InvariantTensor | None = None

    @classmethod
    def from_tensor(cls, t: InvariantTensor) -> "Check":
        return cls(t.is_zero(), t)


class Verdict(dict):
    """Named checks → Check."""

    def passed(self, name: str) -> bool:
        return self[name].passed


class Geometry:
    """Lazily computed Bismut / Levi-Civita / Chern data of a Hermitian structure."""

    def __init__(self, h: HermitianData):
        self.h = h

    @cached_property
    def bismut(self) -> BismutData:
        return bismut(self.h)

    @property
    def lc(self) -> ConnectionMap:
        return self.bismut.lc

    @property
    def nabla(self) -> ConnectionMap:
        return self.bismut.map

    @property
    def T(self) -> InvariantTensor:
        return self.bismut.T

    @cached_property
    def R(self) -> InvariantTensor:
        return self.nabla.curvature

    @cached_property
    def Rm(self) -> InvariantTensor:
        return self.lc.curvature

    @cached_property
    def DJ(self) -> InvariantTensor:
        return covariant_derivative(self.lc, self.h.complex_structure)

    @cached_property
    def chern(self) -> ChernLee:
        return chern_lee(self.h, self.bismut.domega)

    @cached_property
    def nablaT(self) -> InvariantTensor:
        return covariant_derivative(self.nabla, self.T, compare=self.lc, torsion=self.T)

    @cached_property
    def nablaR(self) -> InvariantTensor:
        return covariant_derivative(self.nabla, self.R)

    @cached_property
    def dT(self) -> InvariantTensor:
        return ce_differential(self.bismut.T3, self.h.pair)


def verdict_suite(h: HermitianData, geometry: Geometry | None = None) -> Verdict:
    geo = geometry or Geometry(h)
    b = geo.bismut
    v = Verdict()
    v["parallel_torsion"] = Check.from_tensor(geo.nablaT)
    v["parallel_curvature"] = Check.from_tensor(geo.nablaR)
    first = geo.nablaT if not geo.nablaT.is_zero() else geo.nablaR
    v["bas"] = Check(v["parallel_torsion"].passed and v["parallel_curvature"].passed, first)
    nDJ = covariant_derivative(geo.nabla, geo.DJ)
    nRm = covariant_derivative(geo.nabla, geo.Rm)
    cross = nDJ.is_zero() and nRm.is_zero()
    v["bas_crosscheck"] = Check(cross, nDJ if not nDJ.is_zero() else nRm)
    if cross != v["bas"].passed:
        raise InternalInconsistencyError("BAS and its ∇(DJ), ∇Rm characterization disagree")
    v["pluriclosed"] = Check.from_tensor(geo.dT)
    v["balanced"] = Check.from_tensor(geo.chern.theta)
    v["kahler"] = Check.from_tensor(b.T)
    return v

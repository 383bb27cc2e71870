"""Metrics, complex structures and the basic Hermitian tensors."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import InputShapeError, InvalidHermitianError, NotInvariantError
from .lie import LieAlgebra
from .linalg import inverse, is_positive_definite
from .pair import ReductivePair, as_pair
from .rational import QArray, einsum, tdot
from .tensors import InvariantTensor, alternate_pairs, gl_action_batch


class HermitianData:
    """A carrier (algebra or reductive pair) with metric g and complex structure J on m.

    ``J`` is given with columns equal to images of basis vectors.
    """

    def __init__(self, carrier, g, J, *, validate: bool = True):
        self.carrier = carrier
        self.pair: ReductivePair = as_pair(carrier)
        n = self.pair.dm
        G = QArray.eye(n) if (isinstance(g, str) and g == "identity") else QArray.of(g)
        J = QArray.of(J)
        if G.shape != (n, n) or J.shape != (n, n):
            raise InputShapeError(f"metric and J must be {n}×{n} matrices on m")
        self.G = G
        self.J = J
        if validate:
            self.validate()

    def validate(self) -> None:
        G, J, n = self.G, self.J, self.dim
        if not G.equals(G.T):
            raise InvalidHermitianError("metric is not symmetric")
        if not is_positive_definite(G):
            raise InvalidHermitianError("metric is not positive definite (a leading principal minor is ≤ 0)")
        if not (tdot(J, J, 1) + QArray.eye(n)).is_zero():
            raise InvalidHermitianError("J∘J ≠ −Id")
        if not (einsum("ki,kl,lj->ij", J, G, J) - G).is_zero():
            raise InvalidHermitianError("J is not g-orthogonal")
        p = self.pair
        if p.du:
            gG = gl_action_batch(p.adu, (0, 2), G)
            if not gG.is_zero():
                raise NotInvariantError("metric is not ad(u)-invariant on m", witness=gG)
            gJ = gl_action_batch(p.adu, (1, 1), J)
            if not gJ.is_zero():
                raise NotInvariantError("J is not ad(u)-invariant on m", witness=gJ)

    @property
    def dim(self) -> int:
        return self.pair.dm

    @property
    def names(self):
        return self.pair.m_names

    @cached_property
    def Ginv(self) -> QArray:
        return inverse(self.G)

    @cached_property
    def metric(self) -> InvariantTensor:
        return InvariantTensor((0, 2), self.G, "symmetric")

    @cached_property
    def complex_structure(self) -> InvariantTensor:
        return InvariantTensor((1, 1), self.J)

    @cached_property
    def nijenhuis(self) -> InvariantTensor:
        return nijenhuis_tensor(self.pair, self.J)

    @property
    def integrable(self) -> bool:
        return self.nijenhuis.is_zero()

    def __repr__(self) -> str:
        return f"HermitianData({self.pair!r})"


def nijenhuis_tensor(pair: ReductivePair, J) -> InvariantTensor:
    """N(X,Y) = [JX,JY] − [X,Y] − J[JX,Y] − J[X,JY] with the m-projected bracket."""
    J = QArray.of(J)
    c = pair.mbr
    cJJ = einsum("kab,ai,bj->kij", c, J, J)
    cJ1 = einsum("pk,kab,ai->pib", J, c, J)  # J[JX, Y]
    cJ2 = einsum("pk,kab,bj->paj", J, c, J)  # J[X, JY]
    N = cJJ - c - cJ1 - cJ2
    return InvariantTensor((1, 2), N, None)


@dataclass(frozen=True)
class HermitianAnalysis:
    orthogonal: bool
    integrable: bool
    nijenhuis: InvariantTensor
    abelian_J: bool


def analyze_hermitian(h: HermitianData) -> HermitianAnalysis:
    """Orthogonality, integrability and abelianity of J (raises on invalid data)."""
    h.validate()
    J = h.J
    c = h.pair.mbr
    abel = (einsum("kab,ai,bj->kij", c, J, J) - c).is_zero()
    if h.pair.du:
        # the full bracket must also agree on the u-part
        cu = h.pair.ubr
        abel = abel and (einsum("kab,ai,bj->kij", cu, J, J) - cu).is_zero()
    N = h.nijenhuis
    return HermitianAnalysis(True, N.is_zero(), N, abel)


def fundamental_form(h: HermitianData) -> InvariantTensor:
    """ω(X, Y) = g(JX, Y)."""
    return InvariantTensor((0, 2), tdot(h.J.T, h.G, 1), "alternating")


def ce_differential(alpha: InvariantTensor, carrier) -> InvariantTensor:
    """Chevalley–Eilenberg differential of an invariant alternating form.

    On a reductive pair the bracket is the m-projected one.
    """
    if alpha.r != 0:
        raise InputShapeError("the differential acts on (0, k) forms")
    pair = as_pair(carrier)
    k = alpha.s
    n = pair.dm
    if alpha.comp.ndim and alpha.comp.shape[0] != n:
        raise InputShapeError("form dimension does not match the carrier")
    if k == 0:
        return InvariantTensor((0, 1), QArray.zeros((n,)), "alternating")
    # β[i, j, rest] = α([x_i, x_j]_m, rest)
    beta = tdot(pair.mbr, alpha.comp, ([0], [0]))
    return InvariantTensor((0, k + 1), alternate_pairs(beta, k), "alternating")

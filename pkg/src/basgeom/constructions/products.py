"""Products of BAS factors with a complex structure adapted to their distinguished subspaces."""

from __future__ import annotations

from dataclasses import dataclass

from ..connections import verdict_suite
from ..errors import AdmissibilityError, InternalInconsistencyError
from ..hermitian import HermitianData
from ..lie import LieAlgebra
from ..linalg import Subspace
from ..pair import ReductivePair
from ..rational import QArray, tdot
from .knil import block_diag


@dataclass(frozen=True, eq=False)
class BASFactor:
    """A factor with its distinguished subspace D (centre or torus directions) in m-coordinates.

    The transverse structure is J restricted to the g-orthogonal complement of D.
    """

    hermitian: HermitianData
    distinguished: Subspace
    label: str = "factor"

    @classmethod
    def nilpotent(cls, h: HermitianData, label: str = "nilpotent") -> "BASFactor":
        return cls(h, h.pair.l.centre(), label)

    @classmethod
    def torus_bundle(cls, h: HermitianData, t_dim: int, label: str = "torus_bundle") -> "BASFactor":
        """The first ``t_dim`` m-coordinates span the torus directions."""
        n = h.dim
        return cls(h, Subspace(QArray.eye(n)[:t_dim], n) if t_dim else Subspace.zero(n), label)

    @classmethod
    def plain(cls, h: HermitianData, label: str = "bas") -> "BASFactor":
        return cls(h, Subspace.zero(h.dim), label)

    @property
    def transverse(self) -> Subspace:
        return self.distinguished.orthogonal_complement(self.hermitian.G)


def pair_sum(pairs: list[ReductivePair]) -> ReductivePair:
    """l = ⊕ l_i with u = ⊕ u_i and m = ⊕ m_i, in factor order."""
    names, blocks = [], []
    offs = []
    N = 0
    for i, p in enumerate(pairs):
        offs.append(N)
        N += p.l.dim
    c = [[[0] * N for _ in range(N)] for _ in range(N)]
    used = set()
    for i, p in enumerate(pairs):
        o = offs[i]
        co = p.l.c.to_objects()
        d = p.l.dim
        for k in range(d):
            for a in range(d):
                for b in range(d):
                    c[o + k][o + a][o + b] = co[k, a, b]
        for nm in p.l.names:
            new = nm if nm not in used else f"{nm}_{i + 1}"
            used.add(new)
            names.append(new)
    alg = LieAlgebra(names, QArray.of(c), validate=False)

    def embed(rows, i):
        out = []
        for r in rows:
            v = [0] * N
            for j, x in enumerate(r.to_objects()):
                v[offs[i] + j] = x
            out.append(v)
        return out

    u, m, m_names = [], [], []
    for i, p in enumerate(pairs):
        u += embed(p.u_basis, i)
        m += embed(p.m_basis, i)
        m_names += [nm if nm not in m_names else f"{nm}_{i + 1}" for nm in p.m_names]
    return ReductivePair(alg, QArray.of(u) if u else [], QArray.of(m), m_names=m_names, check_effective=False)


def product_bas(factors: list[BASFactor], J=None) -> HermitianData:
    """Product Hermitian data; J defaults to the block sum of the factor structures."""
    pairs = [f.hermitian.pair for f in factors]
    pair = pair_sum(pairs) if len(pairs) > 1 else pairs[0]
    G = block_diag(*[f.hermitian.G for f in factors])
    n = G.shape[0]
    J = block_diag(*[f.hermitian.J for f in factors]) if J is None else QArray.of(J)
    offs, o = [], 0
    for f in factors:
        offs.append(o)
        o += f.hermitian.dim

    def lift(v, i):
        out = [0] * n
        for j, x in enumerate(v.to_objects()):
            out[offs[i] + j] = x
        return QArray.of(out)

    D = [lift(v, i) for i, f in enumerate(factors) for v in f.distinguished.vectors()]
    Dsp = Subspace(QArray.stack(D), n) if D else Subspace.zero(n)
    for v in Dsp.vectors():
        if not Dsp.contains(tdot(J, v, 1)):
            raise AdmissibilityError("J does not preserve the distinguished subspace", witness=v)
    for i, f in enumerate(factors):
        for v in f.transverse.vectors():
            img = tdot(J, lift(v, i), 1)
            want = lift(tdot(f.hermitian.J, v, 1), i)
            if not (img - want).is_zero():
                raise AdmissibilityError(
                    f"J does not restrict to the transverse structure of factor {i + 1} ({f.label})", witness=img)
    h = HermitianData(pair, G, J)
    if not verdict_suite(h)["bas"].passed:
        raise InternalInconsistencyError("admissible product failed the BAS check")
    return h

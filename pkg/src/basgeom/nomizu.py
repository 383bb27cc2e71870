"""Nomizu construction for the Bismut connection of a BAS structure.

Elements of the Nomizu algebra are pairs (A, v) with A in the stabilizer
algebra of (g, J, T, R) and v in m. Basis order: stabilizer basis first,
then the basis of m.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .connections import Geometry, covariant_derivative, verdict_suite
from .errors import InternalInconsistencyError, NotALieAlgebraError, NotBASError
from .hermitian import HermitianData
from .homogeneous import natred_test
from .lie import LieAlgebra
from .linalg import Subspace, kernel, linear_solve
from .pair import ReductivePair
from .rational import QArray, einsum, tdot
from .tensors import InvariantTensor, endo_commutator, gl_action_batch

HALF = mpq(1, 2)


def _unit_endos(n: int) -> QArray:
    """E_{kl} for k, l in row-major order, stacked as [n*n, n, n]."""
    return QArray.eye(n * n).reshape(n * n, n, n)


def _kernel_of_action(basis: QArray, tensors) -> QArray:
    """Rows c with Σ c_p basis[p] annihilating every given tensor."""
    nb = basis.shape[0]
    blocks = []
    for valence, comp in tensors:
        act = gl_action_batch(basis, valence, comp)  # [p, ...]
        blocks.append(act.reshape(nb, -1))
    return kernel(QArray.concat(blocks, axis=1).T)


def stabilizer(h: HermitianData, geometry: Geometry | None = None, *, require_bas: bool = True) -> QArray:
    """Basis (rows of shape [n, n]) of {A : A·g = A·J = A·T = A·R = 0}.

    Rows are in reduced echelon form as flattened n×n matrices.
    """
    if not h.pair.trivial_isotropy:
        raise NotBASError("the Nomizu construction takes a structure on a Lie algebra (trivial isotropy)")
    geo = geometry or Geometry(h)
    if require_bas and not verdict_suite(h, geo)["bas"].passed:
        raise NotBASError("the stabilizer construction requires a BAS structure")
    n = h.dim
    E = _unit_endos(n)
    k1 = _kernel_of_action(E, [((0, 2), h.G), ((1, 1), h.J)])
    if k1.shape[0] == 0:
        return QArray.zeros((0, n, n))
    U = tdot(k1, E, 1)  # unitary algebra basis [p, n, n]
    k2 = _kernel_of_action(U, [((1, 2), geo.T.comp), ((1, 3), geo.R.comp)])
    if k2.shape[0] == 0:
        return QArray.zeros((0, n, n))
    S = tdot(k2, U, 1).reshape(k2.shape[0], n * n)
    red = Subspace(S, n * n)
    return red.basis.reshape(red.dim, n, n)


@dataclass(frozen=True, eq=False)
class NomizuAlgebra:
    h: HermitianData
    stab: QArray  # [s, n, n]
    algebra: LieAlgebra  # basis: A1..As, then m
    T: InvariantTensor
    R: InvariantTensor
    geometry: Geometry

    @property
    def dim_stab(self) -> int:
        return self.stab.shape[0]

    @property
    def n(self) -> int:
        return self.h.dim

    def stab_coords(self, A) -> QArray:
        """Coordinates of an endomorphism in the stabilizer basis (verified)."""
        return _stab_coords(self.stab, A)

    def element(self, A, v) -> QArray:
        """Coordinate vector of (A, v) in the algebra basis."""
        c = self.stab_coords(A)
        return QArray.stack(list(c) + list(QArray.of(v)))

    def split(self, x) -> tuple[QArray, QArray]:
        """(A, v) from a coordinate vector."""
        x = QArray.of(x)
        s = self.dim_stab
        A = tdot(x[:s], self.stab, 1) if s else QArray.zeros((self.n, self.n))
        return A, x[s:]


def _stab_coords(stab: QArray, A) -> QArray:
    s, n, _ = stab.shape
    flat = stab.reshape(s, n * n)
    A = QArray.of(A).reshape(n * n)
    if s == 0:
        if not A.is_zero():
            raise InternalInconsistencyError("endomorphism outside the stabilizer", witness=A)
        return QArray.zeros((0,))
    sp = Subspace(flat, n * n)
    c = sp.coords(A)
    if c is None:
        raise InternalInconsistencyError("endomorphism outside the stabilizer", witness=A.reshape(n, n))
    return c


def build_nomizu(h: HermitianData, geometry: Geometry | None = None) -> NomizuAlgebra:
    """Assemble [(A,v),(B,w)] = ([A,B] + R(v,w), A.w − B.v + T(v,w)) and check Jacobi."""
    geo = geometry or Geometry(h)
    stab = stabilizer(h, geo)
    s, n = stab.shape[0], h.dim
    N = s + n
    T = geo.T.comp
    R = geo.R.comp
    # brackets of basis elements as coordinate vectors
    zero_m = QArray.zeros((n,))

    def vec(Acoords, v):
        return QArray.stack(list(Acoords) + list(v)) if N else QArray.zeros((0,))

    c = [[None] * N for _ in range(N)]
    for a in range(s):
        for b in range(s):
            c[a][b] = vec(_stab_coords(stab, endo_commutator(stab[a], stab[b])), zero_m)
        for j in range(n):
            Aw = stab[a][:, j]
            c[a][s + j] = vec(QArray.zeros((s,)), Aw)
            c[s + j][a] = -c[a][s + j]
    for i in range(n):
        for j in range(n):
            Rij = R[:, i, j, :]
            c[s + i][s + j] = vec(_stab_coords(stab, Rij), T[:, i, j])
    arr = QArray.stack([QArray.stack(row, axis=1) for row in c], axis=1)  # [k, i, j]
    names = [f"A{a + 1}" for a in range(s)] + list(h.names)
    try:
        alg = LieAlgebra(names, arr)
    except NotALieAlgebraError as exc:
        raise InternalInconsistencyError(f"Nomizu bracket fails Jacobi: {exc}") from exc
    return NomizuAlgebra(h, stab, alg, geo.T, geo.R, geo)


@dataclass(frozen=True, eq=False)
class CanonicalPresentation:
    pair: ReductivePair
    G: QArray
    J: QArray
    nomizu: NomizuAlgebra
    l_in_nomizu: QArray  # rows: basis of l as coordinates in the Nomizu algebra


def canonical_presentation(h: HermitianData, nom: NomizuAlgebra | None = None) -> CanonicalPresentation:
    """l = [m,m] + m inside the Nomizu algebra, with isotropy u = l ∩ stabilizer.

    The bracket on l is the negative of the Nomizu bracket, so that the
    canonical connection has T(X,Y) = −[X,Y]_m and R(X,Y)Z = [[X,Y]_u, Z].
    """
    nom = nom or build_nomizu(h)
    N = nom.algebra
    s, n = nom.dim_stab, nom.n
    dim = s + n
    m_vecs = [N.basis_vector(s + i) for i in range(n)]
    mm = [N.bracket(x, y) for x in m_vecs for y in m_vecs]
    mm = [v for v in mm if not v.is_zero()]
    m_sp = Subspace(QArray.stack(m_vecs), dim)
    l_sp = (Subspace(QArray.stack(mm), dim) if mm else Subspace.zero(dim)) + m_sp
    stab_sp = Subspace(QArray.eye(dim)[:s], dim) if s else Subspace.zero(dim)
    u_sp = l_sp.intersect(stab_sp)
    if not N.is_subalgebra(l_sp):
        raise InternalInconsistencyError("[m,m] + m is not a subalgebra of the Nomizu algebra")
    basis = u_sp.vectors() + m_vecs
    du = u_sp.dim
    dl = du + n
    # restricted bracket, negated
    cl = []
    for i in range(dl):
        row = []
        for j in range(dl):
            br = -N.bracket(basis[i], basis[j])
            row.append(_coords_in(basis, br))
        cl.append(QArray.stack(row, axis=1))
    carr = QArray.stack(cl, axis=1)
    prefix = "u"
    while any(nm.startswith(prefix) for nm in h.names):
        prefix = "_" + prefix
    names = [f"{prefix}{a + 1}" for a in range(du)] + list(h.names)
    l_alg = LieAlgebra(names, carr)
    eye = QArray.eye(dl)
    pair = ReductivePair(l_alg, eye[:du] if du else [], eye[du:], m_names=h.names, u_names=names[:du])
    if not natred_test(pair, h.G).passed:
        raise InternalInconsistencyError("canonical presentation is not naturally reductive")
    return CanonicalPresentation(pair, h.G, h.J, nom, QArray.stack(basis))


def _coords_in(basis, v) -> QArray:
    A = QArray.stack(basis, axis=1)
    sol = linear_solve(A, v)
    if not sol.consistent:
        raise InternalInconsistencyError("bracket leaves the subalgebra")
    return sol.particular


def generator_map(nom: NomizuAlgebra, A, v) -> tuple[QArray, QArray]:
    """φ(A, v) = (A + ½ v⌟T, v)."""
    v = QArray.of(v)
    vT = einsum("kvy,v->ky", nom.T.comp, v)
    return QArray.of(A) + vT * HALF, v


def target_bracket(nom: NomizuAlgebra, x, y) -> tuple[QArray, QArray]:
    """([Ã,B̃] + Rm(v,w), Ã.w − B̃.v) for holomorphic Killing generators."""
    (A, v), (B, w) = x, y
    Rm = nom.geometry.Rm.comp
    top = endo_commutator(A, B) + einsum("kijl,i,j->kl", Rm, v, w)
    bottom = tdot(A, w, 1) - tdot(B, v, 1)
    return top, bottom


def bracket_preservation_defects(nom: NomizuAlgebra) -> list:
    """Pairs of basis indices on which φ fails to preserve brackets (empty when exact)."""
    alg = nom.algebra
    bad = []
    for i in range(alg.dim):
        xi = nom.split(alg.basis_vector(i))
        pi = generator_map(nom, *xi)
        for j in range(alg.dim):
            xj = nom.split(alg.basis_vector(j))
            pj = generator_map(nom, *xj)
            lhs = generator_map(nom, *nom.split(alg.bracket(alg.basis_vector(i), alg.basis_vector(j))))
            rhs = target_bracket(nom, pi, pj)
            if not ((lhs[0] - rhs[0]).is_zero() and (lhs[1] - rhs[1]).is_zero()):
                bad.append((alg.names[i], alg.names[j]))
    return bad


def generator_condition_defects(nom: NomizuAlgebra, A, v) -> dict[str, QArray]:
    """Order-0 and order-1 conditions v⌟D^{k+1}τ + Ã·D^kτ for τ = J, Rm."""
    geo = nom.geometry
    h = nom.h
    At, v = generator_map(nom, A, v)
    Ats = QArray.stack([At])
    out = {}
    for label, tau in (("J", h.complex_structure), ("Rm", geo.Rm)):
        D1 = covariant_derivative(geo.lc, tau)
        D2 = covariant_derivative(geo.lc, D1)
        for k, (Dk, Dk1) in enumerate(((tau, D1), (D1, D2))):
            # v⌟ contracts the direction slot, which is the first lower slot
            contr = tdot(Dk1.comp, v, ([Dk1.r], [0]))
            act = gl_action_batch(Ats, Dk.valence, Dk.comp)[0]
            out[f"order{k}_{label}"] = contr + act
    return out


def derivation_defect(nom: NomizuAlgebra) -> QArray | None:
    """[A, v⌟T] − (Av)⌟T over stabilizer and m bases; None when exact."""
    T = nom.T.comp
    n = nom.n
    for a in range(nom.dim_stab):
        A = nom.stab[a]
        for i in range(n):
            v = QArray.eye(n)[i]
            vT = einsum("kvy,v->ky", T, v)
            AvT = einsum("kvy,v->ky", T, tdot(A, v, 1))
            d = endo_commutator(A, vT) - AvT
            if not d.is_zero():
                return d
    return None

"""Natural reductivity, Kostant forms, canonical tensors and canonical reduction."""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .connections import Check, ConnectionMap
from .errors import InputShapeError, InternalInconsistencyError, NoKostantFormError, NotInvariantError
from .hermitian import HermitianData
from .lie import LieAlgebra, relative_normalizer
from .linalg import Subspace, det, is_positive_definite, kernel, linear_solve
from .pair import ReductivePair
from .rational import QArray, einsum, tdot
from .tensors import InvariantTensor, gl_action_batch

HALF = mpq(1, 2)


def _metric(G, n) -> QArray:
    if isinstance(G, str) and G == "identity":
        return QArray.eye(n)
    if isinstance(G, HermitianData):
        return G.G
    return QArray.of(G)


def _require_invariant(p: ReductivePair, G: QArray, J: QArray | None = None) -> None:
    if p.du == 0:
        return
    d = gl_action_batch(p.adu, (0, 2), G)
    if not d.is_zero():
        raise NotInvariantError("metric on m is not ad(u)-invariant", witness=d)
    if J is not None:
        d = gl_action_batch(p.adu, (1, 1), J)
        if not d.is_zero():
            raise NotInvariantError("J on m is not ad(u)-invariant", witness=d)


def natred_defect(p: ReductivePair, G) -> InvariantTensor:
    """g([X,Y]_m, Z) + g(Y, [X,Z]_m) on basis triples of m."""
    G = _metric(G, p.dm)
    b = tdot(p.mbr, G, ([0], [0]))  # b[x, y, z] = g([x,y]_m, z)
    return InvariantTensor((0, 3), b + b.transpose(0, 2, 1))


def natred_test(p: ReductivePair, G) -> Check:
    G = _metric(G, p.dm)
    _require_invariant(p, G)
    return Check.from_tensor(natred_defect(p, G))


@dataclass(frozen=True, eq=False)
class KostantForm:
    """Q on l. ``Q`` is expressed in the basis of l, ``Q_adapted`` in the (u | m) basis."""

    Q: QArray | None
    Q_adapted: QArray | None
    unique: bool
    solution_kernel: tuple  # basis of the homogeneous solution space, adapted basis

    dim_u: int = 0

    @property
    def Q_u(self) -> QArray:
        return self.Q_adapted[: self.dim_u, : self.dim_u]


def invariance_defect(cp: QArray, Q: QArray) -> QArray:
    """Q([x,y],z) + Q(y,[x,z]) for structure constants ``cp`` in the basis of Q."""
    return einsum("kxy,kz->xyz", cp, Q) + einsum("kxz,yk->xyz", cp, Q)


def kostant_form(p: ReductivePair, G) -> KostantForm:
    """Solve for the ad-invariant Q with Q(u,m) = 0 and Q|_m = g."""
    G = _metric(G, p.dm)
    if not natred_test(p, G).passed:
        raise NoKostantFormError("the pair is not naturally reductive for this metric")
    du, dm = p.du, p.dm
    n = du + dm
    cp = p.cadapt
    Q0 = [[mpq(0)] * n for _ in range(n)]
    Gl = G.to_objects()
    for i in range(dm):
        for j in range(dm):
            Q0[du + i][du + j] = Gl[i, j]
    Q0 = QArray.of(Q0)
    unknowns = [(a, b) for a in range(du) for b in range(a, du)]
    cols = []
    for a, b in unknowns:
        E = [[0] * n for _ in range(n)]
        E[a][b] = 1
        E[b][a] = 1
        cols.append(invariance_defect(cp, QArray.of(E)).reshape(n ** 3))
    rhs = -invariance_defect(cp, Q0).reshape(n ** 3)
    if not cols:
        if not rhs.is_zero():
            raise NoKostantFormError("g is not ad-invariant on l")
        return _finish(p, Q0, True, ())
    A = QArray.stack(cols, axis=1)
    sol = linear_solve(A, rhs)
    if not sol.consistent:
        raise NoKostantFormError("no ad-invariant extension of g with Q(u, m) = 0 exists")

    def assemble(vec, base):
        M = [[mpq(0)] * n for _ in range(n)] if base is None else [list(r) for r in base.to_objects()]
        for (a, b), t in zip(unknowns, vec.to_objects()):
            M[a][b] += t
            if a != b:
                M[b][a] += t
        return QArray.of(M)

    Qad = assemble(sol.particular, Q0)
    kern = tuple(assemble(sol.kernel[i], None) for i in range(sol.kernel.shape[0]))
    return _finish(p, Qad, not kern, kern)


def _finish(p: ReductivePair, Qad: QArray, unique: bool, kern) -> KostantForm:
    du = p.du
    if unique and du and det(Qad[:du, :du]) == 0:
        raise NoKostantFormError("Q restricted to u is degenerate")
    Q = einsum("ai,ab,bj->ij", p.Binv, Qad, p.Binv) if p.l.dim else Qad
    return KostantForm(Q if unique else None, Qad, unique, kern, du)


def unitary_frame(G: QArray, J: QArray) -> list[QArray]:
    """Mutually orthogonal e_1..e_n with {e_i, Je_i} an orthogonal basis (not normalized)."""
    n = G.shape[0]
    frame: list[QArray] = []
    full: list[tuple[QArray, object]] = []
    for i in range(n):
        v = QArray.eye(n)[i]
        for w, ww in full:
            v = v - w * (_ip(G, v, w) / ww)
        if v.is_zero():
            continue
        Jv = tdot(J, v, 1)
        frame.append(v)
        full.append((v, _ip(G, v, v)))
        full.append((Jv, _ip(G, Jv, Jv)))
        if len(full) == n:
            break
    return frame


def _ip(G, v, w):
    return tdot(tdot(QArray.of(v), G, 1), QArray.of(w), 1).item()


@dataclass(frozen=True, eq=False)
class CanonicalTensors:
    T: InvariantTensor
    R: InvariantTensor
    T_ch: InvariantTensor
    theta_sharp: QArray


def canonical_tensors(p: ReductivePair, G, J) -> CanonicalTensors:
    """Closed forms for the canonical connection of a naturally reductive pair."""
    G = _metric(G, p.dm)
    J = QArray.of(J)
    _require_invariant(p, G, J)
    if not natred_test(p, G).passed:
        raise NotInvariantError("the pair is not naturally reductive for this metric")
    c = p.mbr
    T = -c
    R = einsum("aij,akl->kijl", p.ubr, p.adu) if p.du else QArray.zeros((p.dm,) * 4)
    cJJ = einsum("kab,ai,bj->kij", c, J, J)
    Tch = (cJJ - c) * (-HALF)
    theta = QArray.zeros((p.dm,))
    for e in unitary_frame(G, J):
        Je = tdot(J, e, 1)
        theta = theta - tdot(J, p.bracket_m(e, Je), 1) / _ip(G, e, e)
    return CanonicalTensors(
        InvariantTensor((1, 2), T, "alternating"),
        InvariantTensor((1, 3), R),
        InvariantTensor((1, 2), Tch, "alternating"),
        theta,
    )


def canonical_connection(p: ReductivePair) -> ConnectionMap:
    """The canonical connection: Nomizu map Λ ≡ 0."""
    return ConnectionMap(p, QArray.zeros((p.dm, p.dm, p.dm)), "canonical")


def trivial_submodule(p: ReductivePair) -> Subspace:
    """f = {X ∈ m : [u, X] = 0}, in m-coordinates."""
    if p.du == 0:
        return Subspace.full(p.dm)
    k = kernel(p.adu.reshape(p.du * p.dm, p.dm))
    return Subspace(k if k.shape[0] else [], p.dm)


@dataclass(frozen=True, eq=False)
class ReductionData:
    f: Subspace  # m-coordinates
    b: Subspace  # m-coordinates
    f_basis: QArray  # rows, m-coordinates
    b_basis: QArray
    base: ReductivePair
    induced_g: QArray
    induced_J: QArray
    fibre: LieAlgebra
    base_hermitian: HermitianData
    checks: dict

    @property
    def reduced(self) -> bool:
        return self.f.dim == 0


def _fail(msg, witness=None):
    raise InternalInconsistencyError(msg, witness=witness)


def canonical_reduction(p: ReductivePair, G, J, Q: KostantForm | None = None,
                        theta_sharp: QArray | None = None) -> ReductionData:
    G = _metric(G, p.dm)
    J = QArray.of(J)
    if Q is None:
        Q = kostant_form(p, G)
    l = p.l
    n = l.dim
    f = trivial_submodule(p)
    checks = {}
    f_l = [p.from_m(v) for v in f.vectors()]
    f_sp = Subspace(QArray.stack(f_l), n) if f_l else Subspace.zero(n)

    # [f, f] = 0 in l
    br = [l.bracket(x, y) for x in f_l for y in f_l]
    checks["f_abelian"] = all(b.is_zero() for b in br)
    checks["f_J_invariant"] = all(f.contains(tdot(J, v, 1)) for v in f.vectors())
    Gf = einsum("ai,ij,bj->ab", f.basis, G, f.basis) if f.dim else QArray.zeros((0, 0))
    checks["f_positive"] = is_positive_definite(Gf) if f.dim else True
    if Q.unique and Q.Q is not None and f.dim:
        Qf = einsum("ai,ij,bj->ab", QArray.stack(f_l), Q.Q, QArray.stack(f_l))
        checks["f_positive"] = checks["f_positive"] and is_positive_definite(Qf)
    uf = p.u + f_sp
    checks["normalizer"] = relative_normalizer(l, p.u) == uf
    if theta_sharp is None:
        theta_sharp = canonical_tensors(p, G, J).theta_sharp
    checks["lee_in_f"] = f.contains(theta_sharp) and f.contains(tdot(J, theta_sharp, 1))
    z = l.centre()
    checks["centre_meets_u_trivially"] = z.intersect(p.u).dim == 0
    zu_vecs = []
    if p.du:
        # centre of u, in l-coordinates
        uc = p.ucon
        k = kernel(uc.transpose(0, 2, 1).reshape(p.du * p.du, p.du))
        zu_vecs = [p.from_u(k[i]) for i in range(k.shape[0])]
    zuf = (Subspace(QArray.stack(zu_vecs), n) if zu_vecs else Subspace.zero(n)) + f_sp
    checks["centre_in_zu_plus_f"] = zuf.contains_space(z)

    b = f.orthogonal_complement(G)
    b_l = [p.from_m(v) for v in b.vectors()]
    b_sp = Subspace(QArray.stack(b_l), n) if b_l else Subspace.zero(n)
    checks["b_invariant"] = b_sp.contains_space(l.bracket_of_subspaces(uf, b_sp)) if b_l else True
    checks["b_J_invariant"] = all(b.contains(tdot(J, v, 1)) for v in b.vectors())
    for name, ok in checks.items():
        if not ok:
            _fail(f"canonical reduction invariant failed: {name}")

    ub = [p.u_basis[i] for i in range(p.du)] + f_l
    base = ReductivePair(
        l,
        QArray.stack(ub) if ub else [],
        QArray.stack(b_l) if b_l else [],
        m_names=[f"b{i + 1}" for i in range(len(b_l))],
        check_effective=False,
    )
    if b.dim:
        Bb = b.basis
        Gb = einsum("ai,ij,bj->ab", Bb, G, Bb)
        Jb = QArray.stack([b.coords(tdot(J, v, 1)) for v in b.vectors()], axis=1)
    else:
        Gb = QArray.zeros((0, 0))
        Jb = QArray.zeros((0, 0))
    base_h = HermitianData(base, Gb, Jb)
    base_f = trivial_submodule(base)
    if base_f.dim:
        _fail("base of the reduction still has a nonzero trivial submodule", witness=base_f)
    fibre_names = [f"f{i + 1}" for i in range(f.dim)]
    fibre = LieAlgebra(fibre_names, QArray.zeros((f.dim, f.dim, f.dim)))
    checks["base_reduced"] = True
    return ReductionData(f, b, f.basis, b.basis, base, Gb, Jb, fibre, base_h, checks)

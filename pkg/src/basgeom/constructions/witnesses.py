"""Explicit naturally reductive presentations and canonical Ambrose–Singer connections.

Each witness enlarges the group algebra by an auxiliary factor and exhibits an
ad-invariant form Q̂ whose restriction to the new complement m reproduces the
given metric. The map ι: ĝ → g̃, (E, U) ↦ E − U identifies m with the original
tangent space; the m basis of the returned pair is ordered like the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from ..connections import ConnectionMap, covariant_derivative, koszul_map
from ..errors import InputShapeError, UnsupportedHypothesisError, WitnessFailureError
from ..homogeneous import invariance_defect, natred_test
from ..lie import LieAlgebra, direct_sum
from ..linalg import Subspace, det, inverse, kernel, linear_solve
from ..pair import ReductivePair, largest_ideal_in
from ..rational import QArray, einsum, tdot
from ..tensors import InvariantTensor, gl_action_batch
from .knil import KNilpotentAlgebra, block_diag

HALF = mpq(1, 2)


def subalgebra(alg: LieAlgebra, rows, names) -> LieAlgebra:
    """Structure constants of the subalgebra spanned by ``rows`` in that basis."""
    rows = QArray.of(rows)
    B = rows.T
    out = []
    for i in range(rows.shape[0]):
        row = []
        for j in range(rows.shape[0]):
            sol = linear_solve(B, alg.bracket(rows[i], rows[j]))
            if not sol.consistent:
                raise InputShapeError("the given span is not a subalgebra")
            row.append(sol.particular)
        out.append(QArray.stack(row, axis=1))
    return LieAlgebra(names, QArray.stack(out, axis=1))


def _gram(Q, rows_a, rows_b) -> QArray:
    return einsum("ai,ij,bj->ab", QArray.of(rows_a), Q, QArray.of(rows_b))


@dataclass(frozen=True, eq=False)
class NatredWitness:
    kind: str
    pair: ReductivePair
    Qhat: QArray  # on the basis of the enlarged algebra
    G: QArray  # on m, in the order of the original basis
    J: QArray | None
    iota: QArray  # rows: images of the m basis in the original algebra
    checks: dict = field(default_factory=dict)


def _validate(kind, alg_hat, h_rows, m_rows, Qhat, G, J, iota, m_names) -> NatredWitness:
    n = alg_hat.dim
    checks = {}
    checks["Q_symmetric"] = Qhat.equals(Qhat.T)
    checks["Q_invariant"] = invariance_defect(alg_hat.c, Qhat).is_zero()
    checks["Q_h_perp_m"] = _gram(Qhat, h_rows, m_rows).is_zero() if len(h_rows) and len(m_rows) else True
    checks["Q_m_is_g"] = _gram(Qhat, m_rows, m_rows).equals(G)
    Qh = _gram(Qhat, h_rows, h_rows) if len(h_rows) else QArray.zeros((0, 0))
    checks["Q_h_nondegenerate"] = det(Qh) != 0 if len(h_rows) else True
    if not checks["Q_h_nondegenerate"]:
        raise WitnessFailureError("Q̂ restricted to the enlarged isotropy is degenerate", witness=Qh)
    for name, ok in checks.items():
        if not ok:
            raise WitnessFailureError(f"natural reductivity witness fails: {name}")
    checks = dict(checks)
    # an abelian factor of g̃ inside t makes the enlarged pair non-effective; that is harmless here
    pair = ReductivePair(alg_hat, h_rows if len(h_rows) else [], m_rows, m_names=m_names, check_effective=False)
    checks["effective"] = largest_ideal_in(alg_hat, pair.u).dim == 0 if pair.du else True
    nr = natred_test(pair, G)
    checks["natred"] = nr.passed
    if not nr.passed:
        raise WitnessFailureError("enlarged pair fails the naturally reductive condition", witness=nr.witness)
    return NatredWitness(kind, pair, Qhat, G, J, iota, checks)


# complex semisimple -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ComplexSemisimpleData:
    """Realified complex semisimple algebra with multiplication by i and a compact real form."""

    algebra: LieAlgebra
    J: QArray
    k_rows: QArray  # basis of the compact real form, algebra coordinates

    def split(self, x) -> tuple[QArray, QArray]:
        """x = U + iV with U, V in the compact form; returns k-coordinates of U and V."""
        k = QArray.of(self.k_rows)
        Jk = [tdot(self.J, v, 1) for v in k]
        B = QArray.stack(list(k) + Jk, axis=1)
        c = tdot(inverse(B), QArray.of(x), 1)
        d = k.shape[0]
        return c[:d], c[d:]

    def canonical_metric(self) -> QArray:
        """−B on the compact form, +B on its i-multiple."""
        Bk = self.algebra.killing()
        n = self.algebra.dim
        k = QArray.of(self.k_rows)
        rows = []
        for i in range(n):
            U, V = self.split(QArray.eye(n)[i])
            rows.append((tdot(U, k, 1), tdot(tdot(V, k, 1), self.J.T, 1)))
        G = [[mpq(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                Ui, Vi = rows[i]
                Uj, Vj = rows[j]
                G[i][j] = -_bil(Bk, Ui, Uj) + _bil(Bk, Vi, Vj)
        return QArray.of(G)


def _bil(Bm, x, y):
    return tdot(tdot(x, Bm, 1), y, 1).item()


def complex_semisimple_witness(data: ComplexSemisimpleData, G=None) -> NatredWitness:
    """ĝ = s^R ⊕ k, ĥ = diagonal k, Q̂ = B ⊕ (−½B|k).

    m-vector of U + iV is (−U + iV, −2U).
    """
    s = data.algebra
    n = s.dim
    k = QArray.of(data.k_rows)
    d = k.shape[0]
    kalg = subalgebra(s, k, [f"{nm}'" for nm in _knames(s, k)])
    hat = direct_sum(s, kalg)
    N = hat.dim
    Bs = s.killing()
    Bk = _gram(Bs, k, k)
    Q = [[mpq(0)] * N for _ in range(N)]
    Bso, Bko = Bs.to_objects(), Bk.to_objects()
    for i in range(n):
        for j in range(n):
            Q[i][j] = Bso[i, j]
    for i in range(d):
        for j in range(d):
            Q[n + i][n + j] = -Bko[i, j] * HALF
    Qhat = QArray.of(Q)
    h_rows = [QArray.concat([k[a], QArray.eye(d)[a]]) for a in range(d)]
    m_rows = []
    for i in range(n):
        U, V = data.split(QArray.eye(n)[i])
        E = -tdot(U, k, 1) + tdot(data.J, tdot(V, k, 1), 1)
        m_rows.append(QArray.concat([E, U * (-2)]))
    G = data.canonical_metric() if G is None else QArray.of(G)
    iota = QArray.eye(n)
    w = _validate("complex_semisimple", hat, QArray.stack(h_rows), QArray.stack(m_rows), Qhat, G, data.J, iota,
                  s.names)
    _check_iota(hat, n, w.pair.m_basis, iota, k)
    return w


def _knames(s, k):
    names = []
    for v in k:
        nz = list(v.nonzero_entries())
        names.append(s.names[nz[0][0][0]] if len(nz) == 1 else f"k{len(names) + 1}")
    return names


def _check_iota(hat, n, m_basis, iota, k):
    """ι(E, U) = E − U must reproduce the original basis."""
    for r, target in zip(m_basis, iota):
        if not (r[:n] - tdot(r[n:], k, 1) - target).is_zero():
            raise WitnessFailureError("m basis does not map to the original basis")


# torus bundles ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TorusBundleData:
    """G/H fibred by the torus generated by t over the base G/(H·T).

    Rows are coordinates in ``algebra``; m = t ⊕ b in that order. ``S`` acts on
    t (columns are images) and is Q-self-adjoint; ``J`` is given on m.
    """

    algebra: LieAlgebra
    h_rows: QArray
    t_rows: QArray
    b_rows: QArray
    Q: QArray
    S: QArray
    J: QArray | None = None
    compact: bool = True

    @property
    def m_rows(self) -> QArray:
        return QArray.concat([QArray.of(self.t_rows), QArray.of(self.b_rows)])

    def metric(self) -> QArray:
        """g = ±Q(S·,·) on t (sign + compact, − noncompact) and Q on b."""
        t, b = QArray.of(self.t_rows), QArray.of(self.b_rows)
        St = tdot(QArray.of(self.S).T, t, 1)  # rows: S t_i
        Gt = _gram(self.Q, St, t)
        if not self.compact:
            Gt = -Gt
        return block_diag(Gt, _gram(self.Q, b, b))

    def pair(self) -> ReductivePair:
        names = _knames(self.algebra, self.m_rows)
        h = QArray.of(self.h_rows) if len(self.h_rows) else []
        return ReductivePair(self.algebra, h, self.m_rows, m_names=names)


def _torus_checks(data: TorusBundleData):
    g = data.algebra
    t = QArray.of(data.t_rows)
    for a in t:
        for b in t:
            if not g.bracket(a, b).is_zero():
                raise InputShapeError("t is not abelian")
    if not invariance_defect(g.c, QArray.of(data.Q)).is_zero():
        raise InputShapeError("Q is not ad-invariant")
    S = QArray.of(data.S)
    Qt = _gram(data.Q, t, t)
    QS = tdot(Qt, S, 1)
    if not QS.equals(QS.T):
        raise InputShapeError("S is not Q-self-adjoint on t")


def compact_torus_bundle_witness(data: TorusBundleData) -> NatredWitness:
    """ĝ = g̃ ⊕ t₁⊥ with t₁ = ker(S − Id) and Q̂ = Q ⊕ Q((Id − S)⁻¹S ·, ·).

    The m-vector of X ∈ t is (SX, (S − Id)X); b and h are embedded unchanged.
    """
    _torus_checks(data)
    return _torus_witness(data, compact=True)


def noncompact_torus_bundle_witness(data: TorusBundleData) -> NatredWitness:
    """ĝ = g̃ ⊕ t with Q̂ = Q ⊕ (−Q((Id + S)⁻¹S ·, ·)).

    The m-vector of X ∈ t is (−SX, −(Id + S)X).
    """
    _torus_checks(data)
    return _torus_witness(data, compact=False)


def _torus_witness(data: TorusBundleData, compact: bool) -> NatredWitness:
    g = data.algebra
    n = g.dim
    t = QArray.of(data.t_rows)
    b = QArray.of(data.b_rows) if len(data.b_rows) else QArray.zeros((0, n))
    h = QArray.of(data.h_rows) if len(data.h_rows) else QArray.zeros((0, n))
    S = QArray.of(data.S)
    dt = t.shape[0]
    I = QArray.eye(dt)
    if compact:
        K = kernel(S - I)
        t1 = Subspace(K, dt) if K.shape[0] else Subspace.zero(dt)
        P = t1.orthogonal_complement(_gram(data.Q, t, t)).basis  # rows, t-coordinates
    else:
        P = QArray.eye(dt)
    e = P.shape[0]
    copy = LieAlgebra.abelian(e, "s") if e else None
    hat = direct_sum(g, copy) if e else g
    N = hat.dim
    # C on the copy, in P-coordinates: C = (Id − S)⁻¹S or −(Id + S)⁻¹S restricted to span P
    Pt = P.T  # t-coords of copy basis as columns
    if e:
        Sp = _restrict(S, P)
        Ie = QArray.eye(e)
        Cp = tdot(inverse(Ie - Sp), Sp, 1) if compact else -tdot(inverse(Ie + Sp), Sp, 1)
        Qt = _gram(data.Q, t, t)
        Qcopy = einsum("ia,ij,jb->ab", Pt, Qt, tdot(Pt, Cp, 1))  # Q(u_a, C u_b)
    Qg = QArray.of(data.Q)
    Qhat = block_diag(Qg, Qcopy) if e else Qg

    def embed(x_alg, y_copy=None):
        y = y_copy if y_copy is not None else QArray.zeros((e,))
        return QArray.concat([x_alg, y]) if e else x_alg

    def to_copy(x_t):
        """t-coordinates (lying in span P) → copy coordinates."""
        if not e:
            return None
        sol = linear_solve(Pt, x_t)
        if not sol.consistent:
            raise WitnessFailureError("vector outside the extended torus block")
        return sol.particular

    h_rows = [embed(h[i]) for i in range(h.shape[0])]
    for a in range(e):
        u = tdot(P[a], t, 1)
        h_rows.append(embed(u, QArray.eye(e)[a]))
    m_rows = []
    for i in range(dt):
        X = I[i]
        SX = tdot(S, X, 1)
        if compact:
            E = tdot(SX, t, 1)
            U = tdot(S - I, X, 1)
        else:
            E = -tdot(SX, t, 1)
            U = -tdot(I + S, X, 1)
        m_rows.append(embed(E, to_copy(U) if e else None))
    for i in range(b.shape[0]):
        m_rows.append(embed(b[i]))
    G = data.metric()
    names = _knames(g, data.m_rows)
    kind = "compact_torus_bundle" if compact else "noncompact_torus_bundle"
    hr = QArray.stack(h_rows) if h_rows else QArray.zeros((0, N))
    w = _validate(kind, hat, hr, QArray.stack(m_rows), Qhat, G, data.J, data.m_rows, names)
    # ι(E, U) = E − U, with U read back into t
    for r, target in zip(w.pair.m_basis, data.m_rows):
        E = r[:n]
        U = tdot(r[n:], tdot(P, t, 1), 1) if e else QArray.zeros((n,))
        if not (E - U - target).is_zero():
            raise WitnessFailureError("m basis does not map to the original basis")
    return w


def _restrict(A, P) -> QArray:
    """Matrix of A on span of rows P (coordinates in that basis)."""
    cols = []
    for a in range(P.shape[0]):
        sol = linear_solve(P.T, tdot(A, P[a], 1))
        if not sol.consistent:
            raise WitnessFailureError("S does not preserve the complement of its 1-eigenspace")
        cols.append(sol.particular)
    return QArray.stack(cols, axis=1)


def natred_witness(kind: str, data, **kw) -> NatredWitness:
    if kind == "complex_semisimple":
        return complex_semisimple_witness(data, **kw)
    if kind == "compact_torus_bundle":
        return compact_torus_bundle_witness(data)
    if kind == "noncompact_torus_bundle":
        return noncompact_torus_bundle_witness(data)
    raise InputShapeError(f"unknown witness kind {kind!r}")


# canonical Ambrose–Singer connections ------------------------------------------


@dataclass(frozen=True, eq=False)
class ASConnection:
    map: ConnectionMap
    T: InvariantTensor  # (1, 2)
    T3: InvariantTensor  # (0, 3)
    R: InvariantTensor
    checks: dict


def _skew_fill(n, entries) -> QArray:
    """Totally skew 3-tensor from values on (a, b, c) index triples."""
    T = [[[mpq(0)] * n for _ in range(n)] for _ in range(n)]
    for (a, b, c), v in entries.items():
        for (x, y, z), sgn in (((a, b, c), 1), ((b, c, a), 1), ((c, a, b), 1),
                               ((b, a, c), -1), ((a, c, b), -1), ((c, b, a), -1)):
            cur = T[x][y][z]
            val = v * sgn
            if cur != 0 and cur != val:
                raise WitnessFailureError("torsion components are not totally skew")
            T[x][y][z] = val
    return QArray.of(T)


def _finish_as(pair, G, T3, I_m, parallel_dirs) -> ASConnection:
    Ginv = inverse(G)
    T = einsum("kc,abc->kab", Ginv, T3)
    lc = koszul_map(pair, G)
    cm = ConnectionMap(pair, lc.lam + T.transpose(1, 0, 2) * HALF, "ambrose-singer")
    Tt = InvariantTensor((1, 2), T, "alternating")
    if not cm.torsion.comp.equals(T):
        raise WitnessFailureError("connection torsion differs from the prescribed tensor")
    R = cm.curvature
    checks = {
        "metric": cm.is_metric(G),
        "parallel_torsion": covariant_derivative(cm, Tt).is_zero(),
        "parallel_curvature": covariant_derivative(cm, R).is_zero(),
        "parallel_I": covariant_derivative(cm, InvariantTensor((1, 1), I_m)).is_zero(),
        "parallel_fibre": all(tdot(cm.lam, v, ([2], [0])).is_zero() for v in parallel_dirs),
    }
    for name, ok in checks.items():
        if not ok:
            raise WitnessFailureError(f"Ambrose–Singer property fails: {name}")
    return ASConnection(cm, Tt, InvariantTensor((0, 3), T3, "alternating"), R, checks)


def torus_bundle_torsion(data: TorusBundleData, *, extra_term: bool = False) -> QArray:
    """Skew torsion with components only of type (t, b, b).

    The default is T(U,X,Y) = −g([X,Y]_t, U), the torsion of the Bismut
    connection of any g-orthogonal extension of I preserving t. With
    ``extra_term=True`` the term 2g([U,X],Y) of an alternative closed form is
    added. That variant is kept for comparison only: for S = Id it is the
    negative of the default, and in no tested case is it Ambrose–Singer.
    """
    p = data.pair()
    G = data.metric()
    dt = QArray.of(data.t_rows).shape[0]
    n = p.dm
    br = tdot(p.mbr, G, ([0], [0]))  # br[i, j, c] = g([m_i, m_j]_m, m_c)
    entries = {}
    for u in range(dt):
        for x in range(dt, n):
            for y in range(x + 1, n):
                gxy = sum((p.mbr[k, x, y] * G[k, u] for k in range(dt)), mpq(0))
                val = -gxy
                if extra_term:
                    val += 2 * br[u, x, y]
                if val != 0:
                    entries[(u, x, y)] = val
    return _skew_fill(n, entries)


def nilpotent_torsion(kn: KNilpotentAlgebra) -> QArray:
    """T(X,Y,Z) = −g([X,Y],Z) − g([Y,Z],X) − g([Z,X],Y)."""
    alg = kn.algebra
    b = tdot(alg.c, kn.g, ([0], [0]))
    return -(b + b.transpose(1, 2, 0) + b.transpose(2, 0, 1))


def canonical_as_connection(data) -> ASConnection:
    """Ambrose–Singer connection with skew torsion for torus bundles and k-nilpotent groups."""
    if isinstance(data, KNilpotentAlgebra):
        if not data.spec.abelian:
            raise UnsupportedHypothesisError("the nilpotent construction requires k abelian")
        pair = ReductivePair.from_algebra(data.algebra)
        k = data.k_dim
        n = data.algebra.dim
        I_m = block_diag(QArray.zeros((k, k)), data.transverse_I)
        T3 = nilpotent_torsion(data)
        return _finish_as(pair, data.g, T3, I_m, [QArray.eye(n)[i] for i in range(k)])
    if isinstance(data, TorusBundleData):
        _torus_checks(data)
        pair = data.pair()
        G = data.metric()
        dt = QArray.of(data.t_rows).shape[0]
        db = pair.dm - dt
        if data.J is not None:
            Jb = QArray.of(data.J)[dt:, dt:]
        else:
            raise InputShapeError("a transverse complex structure on b is required")
        I_m = block_diag(QArray.zeros((dt, dt)), Jb)
        T3 = torus_bundle_torsion(data)
        res = _finish_as(pair, G, T3, I_m, [QArray.eye(pair.dm)[i] for i in range(dt)])
        if dt % 2 == 0:
            from ..connections import bismut
            from ..hermitian import HermitianData

            h = HermitianData(pair, G, data.J)
            if h.integrable:
                same = bismut(h).T3.comp.equals(T3)
                res.checks["matches_bismut"] = same
                if not same:
                    raise WitnessFailureError("closed-form torsion differs from the Bismut torsion")
        return res
    raise InputShapeError("expected torus-bundle data or a k-nilpotent algebra")

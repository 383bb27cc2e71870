"""k-nilpotent triples: 2-step nilpotent algebras built from unitary representations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from gmpy2 import mpq

from ..connections import Check, Verdict
from ..errors import InputShapeError, InvalidRepresentationError, TrivialSubmoduleError
from ..lie import LieAlgebra
from ..linalg import Subspace, inverse, is_positive_definite, kernel, linear_solve
from ..rational import QArray, einsum, q, tdot
from ..tensors import InvariantTensor, endo_commutator


def complex_to_real(M) -> QArray:
    """Realify a complex matrix given by (re, im) pairs or rationals.

    Real basis order: (v_1, i v_1, v_2, i v_2, ...); entry a+ib becomes [[a, -b], [b, a]].
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    out = [[mpq(0)] * (2 * cols) for _ in range(2 * rows)]
    for r in range(rows):
        for c in range(cols):
            x = M[r][c]
            a, b = (q(x[0]), q(x[1])) if isinstance(x, tuple) else (q(x), mpq(0))
            out[2 * r][2 * c] = a
            out[2 * r][2 * c + 1] = -b
            out[2 * r + 1][2 * c] = b
            out[2 * r + 1][2 * c + 1] = a
    if not out:
        return QArray.zeros((0, 2 * cols))
    return QArray.of(out)


def standard_I(m: int) -> QArray:
    return complex_to_real([[(0, 1) if i == j else 0 for j in range(m)] for i in range(m)])


@dataclass(eq=False)
class KNilpotentSpec:
    k_dim: int
    reps: list  # k_dim real matrices of size 2m × 2m
    V_dim_complex: int
    k_bracket: QArray | None = None  # c[a, b, c]; None means abelian
    k_metric: QArray | None = None
    V_metric: QArray | None = None
    I: QArray | None = None
    k_names: Sequence[str] | None = None
    V_names: Sequence[str] | None = None

    def __post_init__(self):
        m2 = 2 * self.V_dim_complex
        self.reps = [QArray.of(A) for A in self.reps]
        if len(self.reps) != self.k_dim:
            raise InputShapeError("one representation matrix per basis vector of k is required")
        for A in self.reps:
            if A.shape != (m2, m2):
                raise InputShapeError(f"representation matrices must be {m2}×{m2}")
        k = self.k_dim
        self.k_bracket = QArray.zeros((k, k, k)) if self.k_bracket is None else QArray.of(self.k_bracket)
        self.k_metric = QArray.eye(k) if self.k_metric is None else QArray.of(self.k_metric)
        self.V_metric = QArray.eye(m2) if self.V_metric is None else QArray.of(self.V_metric)
        self.I = standard_I(self.V_dim_complex) if self.I is None else QArray.of(self.I)
        if self.k_names is None:
            self.k_names = [f"z{i + 1}" for i in range(k)]
        if self.V_names is None:
            self.V_names = [f"e{i + 1}" for i in range(m2)]

    @property
    def abelian(self) -> bool:
        return self.k_bracket.is_zero()

    @property
    def V_dim(self) -> int:
        return 2 * self.V_dim_complex


def rep_bracket_from_reps(reps) -> QArray:
    """Structure constants c with [A_a, A_b] = Σ_c c[c,a,b] A_c, solved from the matrices."""
    k = len(reps)
    n = reps[0].shape[0]
    M = QArray.stack([A.reshape(n * n) for A in reps], axis=1)
    out = [[[mpq(0)] * k for _ in range(k)] for _ in range(k)]
    for a in range(k):
        for b in range(k):
            sol = linear_solve(M, endo_commutator(reps[a], reps[b]).reshape(n * n))
            if not sol.consistent:
                raise InvalidRepresentationError("the matrices do not span a Lie algebra")
            for c, val in enumerate(sol.particular.to_objects()):
                out[c][a][b] = val
    return QArray.of(out)


def spec_checks(spec: KNilpotentSpec) -> dict[str, QArray | None]:
    """Failing clause → witness array (None when the clause holds)."""
    GV, I = spec.V_metric, spec.I
    n = spec.V_dim
    res = {}
    d = None
    if n:
        if not (tdot(I, I, 1) + QArray.eye(n)).is_zero():
            d = tdot(I, I, 1) + QArray.eye(n)
        elif not (einsum("ki,kl,lj->ij", I, GV, I) - GV).is_zero():
            d = einsum("ki,kl,lj->ij", I, GV, I) - GV
    res["transverse_hermitian"] = d
    skew = None
    comm = None
    for A in spec.reps:
        s = tdot(A.T, GV, 1) + tdot(GV, A, 1)
        if skew is None and not s.is_zero():
            skew = s
        c = endo_commutator(A, I)
        if comm is None and not c.is_zero():
            comm = c
    res["skew"] = skew
    res["complex_linear"] = comm
    rep = None
    for a in range(spec.k_dim):
        for b in range(spec.k_dim):
            lhs = endo_commutator(spec.reps[a], spec.reps[b])
            rhs = sum((spec.reps[c] * spec.k_bracket[c, a, b] for c in range(spec.k_dim)), QArray.zeros((n, n)))
            if rep is None and not (lhs - rhs).is_zero():
                rep = lhs - rhs
    res["representation"] = rep
    if n and spec.k_dim:
        ker = kernel(QArray.concat(spec.reps, axis=0))
        res["no_trivial_submodule"] = ker if ker.shape[0] else None
    elif n:
        res["no_trivial_submodule"] = QArray.eye(n)
    else:
        res["no_trivial_submodule"] = None
    res["k_metric"] = None if is_positive_definite(spec.k_metric) else spec.k_metric
    return res


@dataclass(frozen=True, eq=False)
class KNilpotentAlgebra:
    algebra: LieAlgebra
    transverse_I: QArray  # on V, V-coordinates
    g: QArray  # on the whole algebra
    spec: KNilpotentSpec

    @property
    def k_dim(self) -> int:
        return self.spec.k_dim


def build_k_nilpotent(spec: KNilpotentSpec) -> KNilpotentAlgebra:
    """⟨[v₁,v₂], K⟩_k = ⟨A_K v₁, v₂⟩_V; k is central. Basis: k first, then V."""
    chk = spec_checks(spec)
    if chk["no_trivial_submodule"] is not None:
        raise TrivialSubmoduleError("the representation has a trivial submodule", witness=chk["no_trivial_submodule"])
    for key in ("skew", "complex_linear", "representation", "transverse_hermitian", "k_metric"):
        if chk[key] is not None:
            raise InvalidRepresentationError(f"representation data fails: {key}", witness=chk[key])
    k, n = spec.k_dim, spec.V_dim
    N = k + n
    kinv = inverse(spec.k_metric) if k else QArray.zeros((0, 0))
    # pairing[a, i, j] = ⟨A_a e_i, e_j⟩
    A = QArray.stack(spec.reps) if k else QArray.zeros((0, n, n))
    pairing = einsum("api,pj->aij", A, spec.V_metric) if k else QArray.zeros((0, n, n))
    cV = einsum("ba,aij->bij", kinv, pairing) if k else QArray.zeros((0, n, n))
    full = [[[mpq(0)] * N for _ in range(N)] for _ in range(N)]
    cVo = cV.to_objects()
    for b in range(k):
        for i in range(n):
            for j in range(n):
                full[b][k + i][k + j] = cVo[b, i, j]
    alg = LieAlgebra(list(spec.k_names) + list(spec.V_names), QArray.of(full))
    g = _block_diag(spec.k_metric, spec.V_metric)
    # transverse identity [Iv₁, Iv₂] = [v₁, v₂]
    if not (einsum("bpq,pi,qj->bij", cV, spec.I, spec.I) - cV).is_zero():
        raise InvalidRepresentationError("transverse structure is not abelian on V")
    return KNilpotentAlgebra(alg, spec.I, g, spec)


def _block_diag(*blocks) -> QArray:
    n = sum(b.shape[0] for b in blocks)
    out = [[mpq(0)] * n for _ in range(n)]
    off = 0
    for b in blocks:
        bo = b.to_objects()
        for i in range(b.shape[0]):
            for j in range(b.shape[0]):
                out[off + i][off + j] = bo[i, j]
        off += b.shape[0]
    return QArray.of(out) if n else QArray.zeros((0, 0))


block_diag = _block_diag


def verify_k_nilpotent(algebra: LieAlgebra, decomposition, rep: KNilpotentSpec) -> Verdict:
    """Check every clause of the k-nilpotent definition.

    ``decomposition`` is ``(k_rows, V_rows)``: coordinate rows in the algebra
    spanning k and V, ordered like the representation data.
    """
    k_rows, V_rows = decomposition
    n = algebra.dim
    k_rows = QArray.of(k_rows) if len(k_rows) else QArray.zeros((0, n))
    V_rows = QArray.of(V_rows) if len(V_rows) else QArray.zeros((0, n))
    v = Verdict()

    def put(name, witness):
        if witness is None:
            v[name] = Check(True, None)
        else:
            w = QArray.of(witness)
            v[name] = Check(False, InvariantTensor((0, w.ndim), w) if w.ndim and len(set(w.shape)) == 1 else None)

    allrows = list(k_rows) + list(V_rows)
    span = Subspace(QArray.stack(allrows), n) if allrows else Subspace.zero(n)
    put("direct_sum", None if span.dim == n and len(allrows) == n else QArray.eye(1))
    kvecs, Vvecs = list(k_rows), list(V_rows)
    central = None
    for z in kvecs:
        for i in range(n):
            b = algebra.bracket(z, algebra.basis_vector(i))
            if not b.is_zero():
                central = b
                break
    put("k_central", None if central is None else QArray.eye(1))
    chk = spec_checks(rep)
    for key in ("transverse_hermitian", "skew", "complex_linear", "representation", "no_trivial_submodule", "k_metric"):
        put(key, chk[key])
    # bracket formula: ⟨[v_i, v_j], K_a⟩ = ⟨A_a v_i, v_j⟩
    bad = None
    if span.dim == n and len(allrows) == n and kvecs:
        Pinv = inverse(QArray.stack(allrows, axis=1))
        kd = len(kvecs)
        for i, vi in enumerate(Vvecs):
            for j, vj in enumerate(Vvecs):
                coords = tdot(Pinv, algebra.bracket(vi, vj), 1)
                if not coords[kd:].is_zero():
                    bad = coords
                    break
                lhs = tdot(coords[:kd], rep.k_metric, 1)
                rhs = QArray.stack([QArray.of([_pair(A, rep.V_metric, i, j)])[0] for A in rep.reps])
                if not (lhs - rhs).is_zero():
                    bad = lhs - rhs
                    break
            if bad is not None:
                break
    put("bracket_formula", bad)
    return v


def _pair(A, GV, i, j):
    return tdot(A[:, i], GV[:, j], 1).item()


def _diag_i(weights) -> QArray:
    return complex_to_real([[(0, w) if i == j else 0 for j, _ in enumerate(weights)] for i, w in enumerate(weights)])


def diagonal_spec(lambdas, *, k_names=None, V_names=None) -> KNilpotentSpec:
    """Abelian spec with A_a = diag(i λ_{1a}, ..., i λ_{ma}); ``lambdas[j][a]`` is λ_{ja}."""
    m = len(lambdas)
    k = len(lambdas[0]) if m else 0
    reps = [_diag_i([lambdas[j][a] for j in range(m)]) for a in range(k)]
    return KNilpotentSpec(k, reps, m, k_names=k_names, V_names=V_names)


def heisenberg_spec(m: int = 1) -> KNilpotentSpec:
    """k = ℝ acting on ℂ^m by i: the real Heisenberg algebra of dimension 2m+1."""
    return diagonal_spec([[1]] * m)


def n8_11_spec() -> KNilpotentSpec:
    """φ(t, s) = diag(it, is, i(t+s)) on ℂ³."""
    return diagonal_spec([[1, 0], [0, 1], [1, 1]])


def quaternionic_spec(n: int = 1) -> KNilpotentSpec:
    """su(2) on n copies of ℂ²; gives the quaternionic Heisenberg algebra of dimension 4n+3."""
    K = [
        [[(0, 1), 0], [0, (0, -1)]],
        [[0, -1], [1, 0]],
        [[0, (0, 1)], [(0, 1), 0]],
    ]
    reps = []
    for M in K:
        big = [[0] * (2 * n) for _ in range(2 * n)]
        for b in range(n):
            for i in range(2):
                for j in range(2):
                    big[2 * b + i][2 * b + j] = M[i][j]
        reps.append(complex_to_real(big))
    return KNilpotentSpec(3, reps, 2 * n, k_bracket=rep_bracket_from_reps(reps))

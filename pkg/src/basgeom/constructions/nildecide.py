"""Decide whether a nilpotent Lie algebra carries a BAS Hermitian structure.

The target normal form has basis {z_i} ∪ {e_j, f_j} with z spanning the
centre, f_j = Je_j, and the only nonzero brackets [e_j, f_j] ∈ span{z_i}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np
import sympy
from gmpy2 import mpq

from ..hermitian import HermitianData
from ..lie import LieAlgebra, analyze_algebra
from ..linalg import Subspace, det, inverse, kernel
from ..poly import Polynomial, minimal_polynomial, real_semisimple_test
from ..rational import QArray, einsum, tdot
from ..tensors import endo_commutator

SAMPLES = 32
BOUND = 10 ** 6
RESIDUAL_TOL = 1e-12
ACCEPT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class NilWitness:
    """Adapted basis: rows of ``basis`` are algebra coordinates of z_1..z_k, e_1, f_1, ..., e_m, f_m."""

    basis: QArray | np.ndarray
    centre_dim: int
    pairs: int
    numerical: bool = False
    max_residual: float = 0.0

    @property
    def names(self) -> list[str]:
        out = [f"z{i + 1}" for i in range(self.centre_dim)]
        for j in range(self.pairs):
            out += [f"e{j + 1}", f"f{j + 1}"]
        return out


@dataclass(frozen=True, eq=False)
class NilDecision:
    verdict: str  # "yes" | "no" | "indeterminate"
    reason: str
    witness: NilWitness | None = None
    obstruction: object = None
    probabilistic: bool = False
    details: dict = field(default_factory=dict)

    @property
    def yes(self) -> bool:
        return self.verdict == "yes"


def _no(reason, obstruction=None, probabilistic=False):
    return NilDecision("no", reason, None, obstruction, probabilistic)


def bracket_forms(alg: LieAlgebra, centre: Subspace, V: list[QArray]) -> list[QArray]:
    """Ω_i[a, b] = z_i-coordinate of [v_a, v_b]."""
    k, d = centre.dim, len(V)
    out = [[[mpq(0)] * d for _ in range(d)] for _ in range(k)]
    for a in range(d):
        for b in range(a + 1, d):
            br = alg.bracket(V[a], V[b])
            c = centre.coords(br)
            if c is None:
                return None
            for i, val in enumerate(c.to_objects()):
                out[i][a][b] = val
                out[i][b][a] = -val
    return [QArray.of(o) for o in out]


def _combine(forms, coeffs) -> QArray:
    acc = forms[0] * coeffs[0]
    for F, c in zip(forms[1:], coeffs[1:]):
        acc = acc + F * c
    return acc


def _nondegenerate_combination(forms, rng):
    k = len(forms)
    trials = [[1 if j == i else 0 for j in range(k)] for i in range(k)]
    trials += [[rng.randint(-BOUND, BOUND) for _ in range(k)] for _ in range(SAMPLES)]
    for c in trials:
        W = _combine(forms, c)
        if det(W) != 0:
            return c, W
    return None, None


def _poly_to_sympy(p: Polynomial):
    t = sympy.Symbol("t")
    return sympy.Poly([sympy.Rational(int(c.numerator), int(c.denominator)) for c in reversed(p.coeffs)], t)


def _symplectic_basis(vectors: list[QArray], W: QArray) -> list[tuple[QArray, QArray]]:
    """Symplectic Gram–Schmidt for ω(x, y) = xᵀ W y on the span of ``vectors``."""

    def om(x, y):
        return tdot(tdot(x, W, 1), y, 1).item()

    rem = [v for v in vectors if not v.is_zero()]
    pairs = []
    while rem:
        e = rem.pop(0)
        idx = next((i for i, y in enumerate(rem) if om(e, y) != 0), None)
        if idx is None:
            raise ArithmeticError("degenerate block")
        f0 = rem.pop(idx)
        f = f0 / om(e, f0)
        new = []
        for x in rem:
            x = x - e * om(x, f) + f * om(x, e)
            if not x.is_zero():
                new.append(x)
        rem = new
        pairs.append((e, f))
    return pairs


def _block_form(blk, forms, W) -> QArray:
    """A bracket form nonzero on the block; every form is a multiple of ω_c there."""
    B = QArray.stack(blk)
    for F in forms:
        if not einsum("ai,ij,bj->ab", B, F, B).is_zero():
            return F
    return W


def _exact_blocks(As, d, rng):
    """Joint eigenspaces of the commuting A_j when a generic combination has rational spectrum.

    Returns a list of bases (lists of QArray in V-coordinates), or None when the
    spectrum is not rational.
    """
    for _ in range(8):
        r = [rng.randint(1, 97) for _ in As]
        M = _combine(As, r)
        p = minimal_polynomial(M)
        sp = _poly_to_sympy(p)
        roots = sympy.roots(sp, filter="Q")
        if sum(roots.values()) != p.degree:
            return None
        blocks = []
        for mu in roots:
            mq = mpq(int(sympy.fraction(mu)[0]), int(sympy.fraction(mu)[1]))
            K = kernel(M - QArray.eye(d) * mq)
            blocks.append([K[i] for i in range(K.shape[0])])
        if all(_scalar_on(A, blk) for A in As for blk in blocks):
            return blocks
    return None


def _scalar_on(A, blk) -> bool:
    sp = Subspace(QArray.stack(blk), A.shape[0])
    v0 = blk[0]
    Av0 = tdot(A, v0, 1)
    # scalar: A v0 = μ v0
    piv = next(i for i in range(v0.shape[0]) if v0[i] != 0)
    mu = Av0[piv] / v0[piv]
    return all((tdot(A, v, 1) - v * mu).is_zero() for v in blk) and sp.dim == len(blk)


def _float_blocks(As, W):
    """Float fallback: eigenspaces of a generic combination, symplectic bases per block."""
    Af = [A.to_float() for A in As]
    M = sum((i + 1.37) * A for i, A in enumerate(Af))
    vals = np.linalg.eigvals(M)
    if np.max(np.abs(vals.imag)) > 1e-9:
        return None
    vals = vals.real
    order = np.argsort(vals)
    groups, cur = [], [order[0]]
    for i in order[1:]:
        if abs(vals[i] - vals[cur[-1]]) < 1e-7:
            cur.append(i)
        else:
            groups.append(cur)
            cur = [i]
    groups.append(cur)
    Wf = W.to_float()
    d = Wf.shape[0]
    out = []
    for g in groups:
        mu = float(np.mean(vals[g]))
        _, s, vh = np.linalg.svd(M - mu * np.eye(d))
        null = vh[len(s) - len(g):].T if len(g) else np.zeros((d, 0))
        scale = max(1.0, float(np.max(np.abs(M)))) * d
        if np.max(np.abs((M - mu * np.eye(d)) @ null)) > RESIDUAL_TOL * scale:
            return None
        rem = [null[:, i] for i in range(null.shape[1])]
        while rem:
            e = rem.pop(0)
            om = [e @ Wf @ y for y in rem]
            if not om:
                return None
            idx = int(np.argmax(np.abs(om)))
            if abs(om[idx]) < 1e-10:
                return None
            f = rem.pop(idx) / om[idx]
            rem = [x - (x @ Wf @ f) * e + (x @ Wf @ e) * f for x in rem]
            out.append((e, f))
    return out


def decide_nilpotent_bas(n: LieAlgebra, *, seed: int = 0) -> NilDecision:
    rep = analyze_algebra(n)
    cls = rep.nilpotency_class
    if cls is None:
        return _no("not nilpotent")
    if cls > 2:
        return _no(f"nilpotency class {cls} > 2", obstruction=cls)
    z = rep.centre
    if z.dim % 2:
        return _no(f"centre has odd dimension {z.dim}", obstruction=z.dim)
    if n.dim % 2:
        return _no(f"odd dimension {n.dim}", obstruction=n.dim)
    Vsp = z.complement()
    V = Vsp.vectors()
    d = len(V)
    zb = z.vectors()
    if d == 0:
        return _finish(n, zb, [], [], z)
    forms = bracket_forms(n, z, V)
    rng = random.Random(seed)
    coeffs, W = _nondegenerate_combination(forms, rng)
    if W is None:
        return _no("every sampled combination of the bracket forms is degenerate", probabilistic=True)
    Winv = inverse(W)
    As = [tdot(Winv, F, 1) for F in forms]
    for a in range(len(As)):
        for b in range(a + 1, len(As)):
            c = endo_commutator(As[a], As[b])
            if not c.is_zero():
                return _no("the pencil operators do not commute", obstruction=c)
    for A in As:
        cert = real_semisimple_test(A)
        if not cert.verdict:
            return _no(f"pencil operator has minimal polynomial {cert.min_poly}, not split over ℝ",
                       obstruction=cert.min_poly)
    blocks = _exact_blocks(As, d, rng)
    if blocks is not None:
        pairs = []
        for blk in blocks:
            pairs += _symplectic_basis(blk, _block_form(blk, forms, W))
        # lift from V-coordinates to algebra coordinates
        VB = QArray.stack(V)
        lifted = [(tdot(e, VB, 1), tdot(f, VB, 1)) for e, f in pairs]
        return _finish(n, zb, lifted, coeffs, z)
    fl = _float_blocks(As, W)
    if fl is None:
        return NilDecision("indeterminate", "numerical witness construction failed")
    VBf = QArray.stack(V).to_float()
    rows = [v.to_float() for v in zb]
    for e, f in fl:
        rows += [e @ VBf, f @ VBf]
    P = np.array(rows)
    ok, res = _check_float_witness(n, P, len(zb), len(fl))
    if not ok:
        return NilDecision("indeterminate", f"numerical witness residual {res:.3e} exceeds tolerance")
    return NilDecision("yes", "normal form realized numerically (irrational pencil spectrum)",
                       NilWitness(P, len(zb), len(fl), True, res))


def _finish(n, zb, pairs, coeffs, z) -> NilDecision:
    rows = list(zb)
    for e, f in pairs:
        rows += [e, f]
    P = QArray.stack(rows) if rows else QArray.zeros((0, n.dim))
    w = NilWitness(P, len(zb), len(pairs))
    bad = witness_defect(n, w)
    if bad is not None:
        return NilDecision("indeterminate", f"witness failed re-verification at {bad}")
    return NilDecision("yes", "normal form realized exactly", w, details={"combination": coeffs})


def witness_defect(n: LieAlgebra, w: NilWitness):
    """First (x, y) whose bracket in the witness basis leaves the normal form, or None."""
    if w.numerical:
        ok, res = _check_float_witness(n, w.basis, w.centre_dim, w.pairs)
        return None if ok else ("residual", res)
    alg = n.structure_in_basis(w.basis.T, w.names)
    k = w.centre_dim
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            v = alg.bracket(alg.basis_vector(i), alg.basis_vector(j))
            allowed = i >= k and (i - k) % 2 == 0 and j == i + 1
            if v.is_zero():
                continue
            if not allowed or not v[k:].is_zero():
                return (w.names[i], w.names[j])
    return None


def _check_float_witness(n, P, k, m):
    c = n.c.to_float()
    Pt = P.T
    Pinv = np.linalg.inv(Pt)
    cw = np.einsum("ka,kij,ix,jy->axy", Pinv.T, c, Pt, Pt)
    mask = np.zeros_like(cw, dtype=bool)
    for j in range(m):
        a, b = k + 2 * j, k + 2 * j + 1
        mask[:k, a, b] = True
        mask[:k, b, a] = True
    res = float(np.max(np.abs(np.where(mask, 0.0, cw)))) if cw.size else 0.0
    return res < ACCEPT_TOL, res


def standard_structure(n: LieAlgebra, w: NilWitness) -> HermitianData:
    """g = identity and J z_{2i-1} = z_{2i}, J e_j = f_j in the witness basis, transported to n."""
    if w.numerical:
        raise ValueError("the standard structure needs an exact witness")
    N = n.dim
    Jw = [[mpq(0)] * N for _ in range(N)]
    for i in range(0, w.centre_dim, 2):
        Jw[i + 1][i] = mpq(1)
        Jw[i][i + 1] = mpq(-1)
    for j in range(w.pairs):
        a = w.centre_dim + 2 * j
        Jw[a + 1][a] = mpq(1)
        Jw[a][a + 1] = mpq(-1)
    P = w.basis.T  # columns are witness vectors
    Pinv = inverse(P)
    g = einsum("ai,aj->ij", Pinv, Pinv)
    J = tdot(tdot(P, QArray.of(Jw), 1), Pinv, 1)
    return HermitianData(n, g, J)

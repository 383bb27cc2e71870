"""Named example structures with frozen verdict fixtures."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from gmpy2 import mpq

from ..connections import verdict_suite
from ..errors import InvalidHermitianError, UnknownEntryError
from ..hermitian import HermitianData
from ..lie import LieAlgebra, direct_sum, heisenberg, realify, sl2r, su2
from ..rational import QArray, q
from .knil import block_diag, build_k_nilpotent, n8_11_spec
from .products import BASFactor, product_bas
from .witnesses import ComplexSemisimpleData, TorusBundleData


@dataclass(eq=False)
class CatalogEntry:
    name: str
    params: dict
    hermitian: HermitianData
    expected: dict  # check name → bool
    kind: str = "group"
    extras: dict = field(default_factory=dict)

    @property
    def algebra(self) -> LieAlgebra:
        return self.hermitian.pair.l

    def document(self):
        from ..document import document_from_hermitian

        return document_from_hermitian(self.hermitian, name=self.name, params=self.params,
                                       k_nilpotent=self.extras.get("k_nilpotent"))

    def verify(self) -> dict:
        """Recompute verdicts; returns check → (expected, actual) for mismatches."""
        v = verdict_suite(self.hermitian)
        return {k: (e, v[k].passed) for k, e in self.expected.items() if v[k].passed != e}


def _verdicts(bas, pluriclosed, balanced, kahler):
    return {"bas": bas, "pluriclosed": pluriclosed, "balanced": balanced, "kahler": kahler}


def nilpotent_standard(alg: LieAlgebra) -> HermitianData:
    """g = Id; J pairs consecutive centre vectors and consecutive non-central basis vectors.

    Meant for algebras written in a normal-form basis whose centre is spanned by basis vectors.
    """
    n = alg.dim
    z = alg.centre()
    central = [i for i in range(n) if z.contains(QArray.eye(n)[i])]
    if len(central) != z.dim:
        raise InvalidHermitianError("centre is not spanned by basis vectors")
    rest = [i for i in range(n) if i not in central]
    if len(central) % 2 or len(rest) % 2:
        raise InvalidHermitianError("odd centre or odd complement")
    J = [[0] * n for _ in range(n)]
    for group in (central, rest):
        for a, b in zip(group[::2], group[1::2]):
            J[b][a] = 1
            J[a][b] = -1
    return HermitianData(alg, "identity", QArray.of(J))


def _ab(k, prefix="a"):
    return LieAlgebra.abelian(k, prefix)


def _sum(*algs):
    out = algs[0]
    for a in algs[1:]:
        out = direct_sum(out, a)
    return out


def _kodaira4(params):
    alg = LieAlgebra.from_brackets(["z", "w", "e", "Je"], {("e", "Je"): {"z": 1}})
    J = QArray.of([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    return HermitianData(alg, "identity", J)


NIL_SUMS = {
    "abelian_r4": lambda: _ab(4),
    "r3_h3": lambda: _sum(_ab(3), heisenberg(1)),
    "r1_h5": lambda: _sum(_ab(1), heisenberg(2)),
    "h3_h3": lambda: _sum(heisenberg(1, "p"), heisenberg(1, "q")),
    "r5_h3": lambda: _sum(_ab(5), heisenberg(1)),
    "r3_h5": lambda: _sum(_ab(3), heisenberg(2)),
    "r2_h3_h3": lambda: _sum(_ab(2), heisenberg(1, "p"), heisenberg(1, "q")),
    "r1_h7": lambda: _sum(_ab(1), heisenberg(3)),
    "h3_h5": lambda: _sum(heisenberg(1, "p"), heisenberg(2, "q")),
    "n8_11": lambda: build_k_nilpotent(n8_11_spec()).algebra,
}


def h3c_algebra() -> LieAlgebra:
    """Realified complex Heisenberg algebra: e1 = x, e2 = ix, e3 = y, e4 = iy, z1 = z, z2 = iz."""
    return LieAlgebra.from_brackets(
        ["e1", "e2", "e3", "e4", "z1", "z2"],
        {("e1", "e3"): {"z1": 1}, ("e2", "e4"): {"z1": -1}, ("e1", "e4"): {"z2": 1}, ("e2", "e3"): {"z2": 1}},
    )


def _h3c(params):
    alg = h3c_algebra()
    J = [[0] * 6 for _ in range(6)]
    for a, b in ((0, 1), (2, 3), (4, 5)):
        J[b][a] = 1
        J[a][b] = -1
    return HermitianData(alg, "identity", QArray.of(J))


def sl2c_data() -> ComplexSemisimpleData:
    """sl(2,ℂ) realified on u_a, i u_a where [u_a, u_b] = 2 u_c cyclically span su(2)."""
    sc = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        sc[c][a][b] = 2
        sc[c][b][a] = -2
    alg, J = realify(sc, 3, ["u1", "u2", "u3"])
    return ComplexSemisimpleData(alg, J, QArray.eye(6)[:3])


def _sl2c(params):
    d = sl2c_data()
    return HermitianData(d.algebra, d.canonical_metric(), d.J), {"complex_semisimple": d}


def _rational_sqrt(x) -> mpq:
    x = q(x)
    nu, de = int(x.numerator), int(x.denominator)
    rn, rd = math.isqrt(nu), math.isqrt(de)
    if nu < 0 or rn * rn != nu or rd * rd != de:
        raise InvalidHermitianError(f"{x} is not the square of a rational; no rational orthogonal J on the torus block")
    return mpq(rn, rd)


def torus_J(Gt) -> QArray:
    """g-orthogonal J on a 2-plane with Gram matrix Gt: √det(Gt)·Gt⁻¹·[[0,−1],[1,0]]."""
    a, b, c = q(Gt[0][0]), q(Gt[0][1]), q(Gt[1][1])
    d = a * c - b * b
    s = _rational_sqrt(d)
    Gi = [[c / d, -b / d], [-b / d, a / d]]
    R = [[0, -1], [1, 0]]
    return QArray.of([[s * sum(Gi[i][k] * R[k][j] for k in range(2)) for j in range(2)] for i in range(2)])


def _torus_params(params):
    a = q(params.get("a", 1))
    b = q(params.get("b", 0))
    c = q(params.get("c", 1))
    return [[a, b], [b, c]]


def calabi_eckmann_data(Gt) -> TorusBundleData:
    """su(2) ⊕ su(2) in the basis x3, y3, x1, x2, y1, y2 with t = span{x3, y3} and Q = Id."""
    base = direct_sum(su2("x"), su2("y"))
    order = ["x3", "y3", "x1", "x2", "y1", "y2"]
    P = QArray.stack([QArray.eye(6)[base.index(nm)] for nm in order], axis=1)
    alg = base.structure_in_basis(P, order)
    E = QArray.eye(6)
    J = block_diag(torus_J(Gt), QArray.of([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]))
    return TorusBundleData(alg, [], E[:2], E[2:], QArray.eye(6), QArray.of(Gt), J, compact=True)


def _ce(params):
    d = calabi_eckmann_data(_torus_params(params))
    return HermitianData(d.algebra, d.metric(), d.J), {"torus_bundle": d}


def hopf_data() -> TorusBundleData:
    """ℝ ⊕ su(2) in the basis r, x3, x1, x2 with t = span{r, x3} and Q = Id."""
    base = direct_sum(LieAlgebra.abelian(1, "r"), su2("x"))
    order = ["r1", "x3", "x1", "x2"]
    P = QArray.stack([QArray.eye(4)[base.index(nm)] for nm in order], axis=1)
    alg = base.structure_in_basis(P, order)
    E = QArray.eye(4)
    J = QArray.of([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    return TorusBundleData(alg, [], E[:2], E[2:], QArray.eye(4), QArray.eye(2), J, compact=True)


def _hopf(params):
    d = hopf_data()
    return HermitianData(d.algebra, d.metric(), d.J), {"torus_bundle": d}


def sl2r_torus_data(Gt) -> TorusBundleData:
    """ℝ ⊕ sl(2,ℝ) in the basis r, W = e − f, p1 = h, p2 = e + f.

    Q = −r*² + ⅛B, so Q is −Id on t = span{r, W} and Id on b = span{p1, p2}.
    """
    base = direct_sum(LieAlgebra.abelian(1, "r"), sl2r())  # r1, h, e, f
    cols = [[1, 0, 0, 0], [0, 0, 1, -1], [0, 1, 0, 0], [0, 0, 1, 1]]
    P = QArray.of(cols).T
    alg = base.structure_in_basis(P, ["r", "W", "p1", "p2"])
    K = alg.killing().to_objects()
    Q = [[mpq(0)] * 4 for _ in range(4)]
    Q[0][0] = mpq(-1)
    for i in range(1, 4):
        for j in range(1, 4):
            Q[i][j] = K[i][j] / 8
    E = QArray.eye(4)
    J = block_diag(torus_J(Gt), QArray.of([[0, -1], [1, 0]]))
    return TorusBundleData(alg, [], E[:2], E[2:], QArray.of(Q), QArray.of(Gt), J, compact=False)


def _sl2r_torus(params):
    d = sl2r_torus_data(_torus_params(params))
    return HermitianData(d.algebra, d.metric(), d.J), {"torus_bundle": d}


def _kodaira_x_sl2c(params):
    k = _kodaira4(params)
    s, extras = _sl2c(params)
    h = product_bas([BASFactor.nilpotent(k, "kodaira4"), BASFactor.plain(s, "sl2c")])
    return h, extras


@dataclass(frozen=True)
class _Spec:
    builder: Callable
    expected: dict
    kind: str
    doc: str
    params: tuple = ()


def _nil_builder(key):
    if key == "n8_11":
        def build(params):
            spec = n8_11_spec()
            return nilpotent_standard(build_k_nilpotent(spec).algebra), {"k_nilpotent": spec}
        return build
    return lambda params: nilpotent_standard(NIL_SUMS[key]())


_NIL_DOCS = {
    "abelian_r4": "abelian ℝ⁴ (flat Kähler)",
    "r3_h3": "ℝ³ ⊕ h₃",
    "r1_h5": "ℝ ⊕ h₅",
    "h3_h3": "h₃ ⊕ h₃",
    "r5_h3": "ℝ⁵ ⊕ h₃",
    "r3_h5": "ℝ³ ⊕ h₅",
    "r2_h3_h3": "ℝ² ⊕ h₃ ⊕ h₃",
    "r1_h7": "ℝ ⊕ h₇",
    "h3_h5": "h₃ ⊕ h₅",
    "n8_11": "n⁸₁,₁ from φ(t,s) = diag(it, is, i(t+s))",
}

_ENTRIES: dict[str, _Spec] = {
    "kodaira4": _Spec(_kodaira4, _verdicts(True, True, False, False), "nilpotent", "ℝ ⊕ h₃, the Kodaira–Thurston algebra"),
    "h3C_natural": _Spec(_h3c, {"bas": False}, "nilpotent", "realified complex Heisenberg with its natural (J, g)"),
    "sl2c_canonical": _Spec(_sl2c, _verdicts(True, False, True, False), "complex_semisimple",
                            "sl(2,ℂ) with J = i and g = −B on su(2), +B on i·su(2)"),
    "calabi_eckmann": _Spec(_ce, _verdicts(True, True, False, False), "compact_torus_bundle",
                            "su(2) ⊕ su(2) with torus metric [[a, b], [b, c]]", ("a", "b", "c")),
    "hopf_surface": _Spec(_hopf, _verdicts(True, True, False, False), "compact_torus_bundle", "ℝ ⊕ su(2)"),
    "sl2r_torus": _Spec(_sl2r_torus, _verdicts(True, True, False, False), "noncompact_torus_bundle",
                        "ℝ ⊕ sl(2,ℝ) with torus metric [[a, b], [b, c]]", ("a", "b", "c")),
    "kodaira4_x_sl2c": _Spec(_kodaira_x_sl2c, _verdicts(True, False, False, False), "product",
                             "kodaira4 × sl2c_canonical with block J"),
}
# with the normal-form J the torsion is closed only when every Heisenberg factor is h3
_NOT_PLURICLOSED = {"r1_h5", "r3_h5", "r1_h7", "h3_h5", "n8_11"}
for _k in NIL_SUMS:
    _flat = _k == "abelian_r4"
    _ENTRIES[_k] = _Spec(_nil_builder(_k), _verdicts(True, _k not in _NOT_PLURICLOSED, _flat, _flat), "nilpotent",
                         _NIL_DOCS[_k])


def catalog_names() -> list[str]:
    return sorted(_ENTRIES)


def catalog_describe(name: str) -> str:
    return _get(name).doc


def _get(name) -> _Spec:
    try:
        return _ENTRIES[name]
    except KeyError:
        raise UnknownEntryError(f"unknown catalog entry {name!r}; known: {', '.join(catalog_names())}") from None


def catalog_build(name: str, params: dict | None = None) -> CatalogEntry:
    spec = _get(name)
    params = dict(params or {})
    unknown = set(params) - set(spec.params)
    if unknown:
        raise UnknownEntryError(f"entry {name!r} takes no parameter(s) {sorted(unknown)}")
    out = spec.builder(params)
    h, extras = out if isinstance(out, tuple) else (out, {})
    expected = dict(spec.expected)
    if name == "calabi_eckmann" and q(params.get("b", 0)) != 0:
        # pluriclosedness depends on the torus metric; only diagonal ones are frozen as pluriclosed
        expected.pop("pluriclosed", None)
    return CatalogEntry(name, params, h, expected, spec.kind, extras)

from itertools import combinations, product

import pytest

from basgeom.constructions.catalog import sl2c_data
from basgeom.errors import InputShapeError, InvalidHermitianError
from basgeom.hermitian import HermitianData, analyze_hermitian, ce_differential, fundamental_form
from basgeom.rational import QArray, einsum, q, tdot
from basgeom.tensors import InvariantTensor, gl_action

from conftest import E, JE, W, Z, abelian_kahler, geometry, kodaira, rotation_J


def test_abelian_standard():
    a = analyze_hermitian(abelian_kahler())
    assert a.integrable and a.abelian_J and a.orthogonal
    assert a.nijenhuis.is_zero()


def test_kodaira_integrable_abelian_J():
    a = analyze_hermitian(kodaira())
    assert a.integrable and a.abelian_J


def test_sl2c_stretched_J_nijenhuis():
    lam = 2
    d = sl2c_data()
    alg = d.algebra
    # J u = λ·iu on the compact form, J(iu) = −u/λ
    J = [[0] * 6 for _ in range(6)]
    for a in range(3):
        J[3 + a][a] = lam
        J[a][3 + a] = q(f"-1/{lam}")
    G = QArray.of([[16 if i == j and i < 3 else (4 if i == j else 0) for j in range(6)] for i in range(6)])
    h = HermitianData(alg, G, J)
    an = analyze_hermitian(h)
    assert not an.integrable
    N = an.nijenhuis.comp
    for i, j in product(range(3), repeat=2):
        x, y = QArray.eye(6)[i], QArray.eye(6)[j]
        assert tdot(tdot(N, x, ([1], [0])), y, ([1], [0])).equals(alg.bracket(x, y) * (1 - lam**2))


def test_invalid_J_square():
    with pytest.raises(InvalidHermitianError):
        HermitianData(kodaira().pair.l, "identity", QArray.eye(4))


def test_non_orthogonal_J():
    J = QArray.of([[0, -2, 0, 0], ["1/2", 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    with pytest.raises(InvalidHermitianError):
        HermitianData(kodaira().pair.l, "identity", J)


def test_metric_not_positive():
    G = QArray.of([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]])
    with pytest.raises(InvalidHermitianError):
        HermitianData(kodaira().pair.l, G, rotation_J(4))


def test_shape_error():
    with pytest.raises(InputShapeError):
        HermitianData(kodaira().pair.l, "identity", rotation_J(2))


class TestFundamentalForm:
    def test_kodaira_values(self):
        om = fundamental_form(kodaira()).comp.to_objects()
        nz = {(i, j): om[i, j] for i in range(4) for j in range(4) if om[i, j] != 0}
        assert nz == {(E, JE): 1, (JE, E): -1, (Z, W): 1, (W, Z): -1}

    @pytest.mark.parametrize("name", ["kodaira4", "sl2c_canonical", "calabi_eckmann", "h3C_natural"])
    def test_alternating_and_J_invariant(self, name):
        from conftest import entry

        h = entry(name).hermitian
        om = fundamental_form(h).comp
        assert (om + om.T).is_zero()
        assert (einsum("ai,bj,ab->ij", h.J, h.J, om) - om).is_zero()


class TestCE:
    def test_kodaira_domega(self):
        d = ce_differential(fundamental_form(kodaira()), kodaira().pair).comp.to_objects()
        assert d[E, JE, W] == -1
        for t in product(range(4), repeat=3):
            if set(t) != {E, JE, W}:
                assert d[t] == 0

    def test_abelian_closed(self):
        h = abelian_kahler(6)
        om = fundamental_form(h)
        assert ce_differential(om, h.pair).is_zero()

    def test_valence_mismatch(self):
        with pytest.raises(InputShapeError):
            ce_differential(InvariantTensor((1, 1), QArray.eye(4)), kodaira().pair)

    def test_d_squared_on_sl2c_2form(self):
        h = geometry("sl2c_canonical").h
        om = fundamental_form(h)
        dd = ce_differential(ce_differential(om, h.pair), h.pair)
        assert dd.is_zero()


class TestGlAction:
    def test_skew_annihilates_metric(self):
        A = QArray.of([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 3], [0, 0, -3, 0]])
        assert gl_action(A, InvariantTensor((0, 2), QArray.eye(4))).is_zero()

    def test_J_on_J(self):
        J = kodaira().J
        assert gl_action(J, InvariantTensor((1, 1), J)).is_zero()

    def test_rotation_on_kodaira_torsion(self):
        A = QArray.zeros((4, 4)).tolist()
        A[JE][E], A[E][JE] = 1, -1
        assert gl_action(QArray.of(A), geometry("kodaira4").T).is_zero()

    def test_commutator_identity(self):
        T = geometry("kodaira4").T
        A = QArray.of([[1, 2, 0, 0], [0, 1, 0, 3], [0, 0, 0, 1], [1, 0, 0, 0]])
        B = QArray.of([[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0]])
        AB = tdot(A, B, 1) - tdot(B, A, 1)
        lhs = gl_action(AB, T).comp
        rhs = gl_action(A, gl_action(B, T)).comp - gl_action(B, gl_action(A, T)).comp
        assert lhs.equals(rhs)


def test_pair_combinations_kodaira_omega_J_invariant():
    h = kodaira()
    om = fundamental_form(h).comp.to_objects()
    J = h.J.to_objects()
    for i, j in combinations(range(4), 2):
        Ji = [J[k, i] for k in range(4)]
        Jj = [J[k, j] for k in range(4)]
        val = sum(Ji[a] * Jj[b] * om[a, b] for a in range(4) for b in range(4))
        assert val == om[i, j]

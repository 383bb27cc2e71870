import numpy as np
import pytest
from gmpy2 import mpq

from basgeom.errors import InputShapeError, NotALieAlgebraError, NotASubalgebraError
from basgeom.lie import (
    LieAlgebra,
    analyze_algebra,
    check_lie,
    direct_sum,
    heisenberg,
    realify,
    relative_normalizer,
    sl2r,
)
from basgeom.linalg import Subspace, det, inverse, is_positive_definite, kernel, linear_solve, rank
from basgeom.poly import Polynomial, count_real_roots, minimal_polynomial, real_semisimple_test
from basgeom.rational import QArray, einsum, q, qstr, tdot

from conftest import kodaira


class TestScalars:
    def test_reduced_form(self):
        x = q("-6/4")
        assert x == mpq(-3, 2)
        assert (x.numerator, x.denominator) == (-3, 2)
        assert x.denominator > 0

    def test_qstr(self):
        assert qstr(q(3)) == "3"
        assert qstr(q("-2/6")) == "-1/3"

    def test_floats_rejected(self):
        with pytest.raises(Exception):
            q(0.5)

    def test_promotion_near_overflow(self):
        big = QArray.of([2**61, 1])
        prod = big * (2**61)
        assert prod.tolist()[0] == 2**122
        assert tdot(big, big, 1).item() == 2**122 + 1

    def test_exact_einsum_matches_naive(self):
        A = QArray.of([["1/2", 3], [-1, "2/3"]])
        B = QArray.of([[1, "1/5"], [0, 7]])
        C = einsum("ij,jk->ik", A, B)
        assert C.tolist() == [[mpq(1, 2), mpq(1, 10) + 21], [mpq(-1), mpq(-1, 5) + mpq(14, 3)]]
        assert tdot(A, B, 1).equals(C)


class TestLinearSolve:
    def test_identity(self):
        sol = linear_solve(QArray.eye(3), [1, 2, 3])
        assert sol.particular.tolist() == [1, 2, 3]
        assert sol.kernel.shape[0] == 0

    def test_inconsistent(self):
        sol = linear_solve([[0]], [1])
        assert sol.particular is None
        assert not sol.consistent

    def test_shape_mismatch(self):
        with pytest.raises(InputShapeError):
            linear_solve(QArray.eye(2), [1, 2, 3])

    def test_centre_of_kodaira_by_stacked_ad(self):
        alg = kodaira().pair.l
        n = alg.dim
        # x ↦ [x, e_j] for all j, stacked into one linear system
        A = QArray.of([[alg.c.to_objects()[k, i, j] for i in range(n)] for j in range(n) for k in range(n)])
        sol = linear_solve(A, [0] * (n * n))
        assert Subspace(sol.kernel, n) == Subspace([[1, 0, 0, 0], [0, 1, 0, 0]], n)

    def test_kernel_is_rref(self):
        K = kernel([[1, 2, 3], [2, 4, 6]])
        assert K.shape == (2, 3)
        assert rank(K) == 2

    def test_det_inverse(self):
        M = QArray.of([[2, 1], [1, 1]])
        assert det(M) == 1
        assert tdot(M, inverse(M), 1).equals(QArray.eye(2))
        assert is_positive_definite(M)
        assert not is_positive_definite(QArray.of([[1, 2], [2, 1]]))


class TestSemisimple:
    def test_identity(self):
        c = real_semisimple_test(QArray.eye(2))
        assert c.verdict
        assert c.min_poly.coeffs == (-1, 1)

    def test_rotation(self):
        c = real_semisimple_test([[0, -1], [1, 0]])
        assert not c.verdict
        assert c.min_poly.coeffs == (1, 0, 1)
        assert c.real_root_count == 0
        assert c.obstruction is c.min_poly

    def test_jordan_block(self):
        c = real_semisimple_test([[0, 1], [0, 0]])
        assert not c.verdict
        assert c.min_poly.coeffs == (0, 0, 1)
        assert not c.squarefree

    def test_sturm_irrational_roots(self):
        # t^2 - 2 has two real roots; t^3 - 2 has one
        assert count_real_roots(Polynomial([-2, 0, 1])) == 2
        assert count_real_roots(Polynomial([-2, 0, 0, 1])) == 1

    def test_minimal_polynomial_of_diagonal(self):
        p = minimal_polynomial(QArray.of([[2, 0, 0], [0, 2, 0], [0, 0, 3]]))
        assert p.coeffs == (6, -5, 1)


class TestAnalyze:
    def test_abelian(self):
        r = analyze_algebra(LieAlgebra.abelian(4))
        assert r.centre.dim == 4
        assert r.nilpotency_class == 1
        assert r.killing.is_zero()

    def test_kodaira(self):
        r = analyze_algebra(kodaira().pair.l)
        assert r.centre == Subspace([[1, 0, 0, 0], [0, 1, 0, 0]], 4)
        assert r.nilpotency_class == 2
        assert r.killing.is_zero()

    def test_sl2r_killing(self):
        alg = sl2r()
        r = analyze_algebra(alg)
        K = r.killing.to_objects()
        h, e, f = (alg.index(s) for s in ("h", "e", "f"))
        assert K[h, h] == 8
        assert K[e, f] == 4
        assert r.centre.dim == 0
        assert r.nilpotency_class is None

    def test_jacobi_failure_names_triple(self):
        with pytest.raises(NotALieAlgebraError) as ei:
            LieAlgebra.from_brackets(["a", "b", "c"], {("a", "b"): {"c": 1}, ("b", "c"): {"c": 1}, ("a", "c"): {"a": 1}})
        assert ei.value.triple is not None
        assert set(ei.value.triple[:3]) <= {"a", "b", "c"}

    def test_check_lie_accepts_sl2r(self):
        check_lie(sl2r())


class TestDirectSum:
    def test_abelian(self):
        s = direct_sum(LieAlgebra.abelian(2), LieAlgebra.abelian(2))
        assert s.dim == 4 and s.is_abelian()

    def test_h3_h3(self):
        s = direct_sum(heisenberg(1), heisenberg(1))
        assert s.dim == 6
        assert s.centre().dim == 2
        assert len(set(s.names)) == 6

    def test_h3_r_is_kodaira_type(self):
        s = direct_sum(heisenberg(1), LieAlgebra.abelian(1))
        r = analyze_algebra(s)
        assert (r.centre.dim, r.derived.dim, r.nilpotency_class) == (2, 1, 2)


class TestRealify:
    def test_abelian_c(self):
        alg, J = realify([[[0]]], 1)
        assert alg.dim == 2 and alg.is_abelian()
        assert J.tolist() == [[0, -1], [1, 0]]

    def test_sl2c_killing_is_twice_real_part(self):
        sc = [[[0] * 3 for _ in range(3)] for _ in range(3)]
        for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            sc[c][a][b], sc[c][b][a] = 2, -2
        alg, J = realify(sc, 3)
        # complex Killing of this basis is −8·Id
        Bc = -8
        K = alg.killing().to_objects()
        want = np.diag([2 * Bc] * 3 + [-2 * Bc] * 3)
        assert all(K[i, j] == want[i, j] for i in range(6) for j in range(6))

    def test_sl2c_J_anticommutes_bracket(self):
        sc = [[[0] * 3 for _ in range(3)] for _ in range(3)]
        for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            sc[c][a][b], sc[c][b][a] = 2, -2
        alg, J = realify(sc, 3)
        for i in range(6):
            for j in range(6):
                x, y = QArray.eye(6)[i], QArray.eye(6)[j]
                lhs = alg.bracket(tdot(J, x, 1), tdot(J, y, 1))
                assert lhs.equals(-alg.bracket(x, y))

    def test_h3c_brackets(self):
        # complex Heisenberg [x, y] = z in the basis (x, y, z)
        sc = [[[0] * 3 for _ in range(3)] for _ in range(3)]
        sc[2][0][1], sc[2][1][0] = 1, -1
        alg, _ = realify(sc, 3, ["x", "y", "z"])
        ren = {"x": "e1", "ix": "e2", "y": "e3", "iy": "e4", "z": "z1", "iz": "z2"}
        got = {}
        c = alg.c.to_objects()
        for i in range(6):
            for j in range(i + 1, 6):
                for k in range(6):
                    if c[k, i, j] != 0:
                        a, b = ren[alg.names[i]], ren[alg.names[j]]
                        sgn = 1 if a < b else -1
                        got[tuple(sorted((a, b)))] = (ren[alg.names[k]], sgn * c[k, i, j])
        assert got == {("e1", "e3"): ("z1", 1), ("e2", "e4"): ("z1", -1), ("e1", "e4"): ("z2", 1), ("e2", "e3"): ("z2", 1)}


class TestNormalizer:
    def test_whole_algebra(self):
        alg = sl2r()
        assert relative_normalizer(alg, Subspace.full(3)) == Subspace.full(3)

    def test_cartan_in_sl2r(self):
        alg = sl2r()
        h = Subspace([alg.basis_vector(alg.index("h"))], 3)
        assert relative_normalizer(alg, h) == h

    def test_not_subalgebra(self):
        alg = sl2r()
        U = Subspace([alg.basis_vector(alg.index("e")), alg.basis_vector(alg.index("f"))], 3)
        with pytest.raises(NotASubalgebraError):
            relative_normalizer(alg, U)

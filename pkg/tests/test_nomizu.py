import pytest

from basgeom.errors import NotBASError
from basgeom.homogeneous import natred_test, trivial_submodule
from basgeom.lie import analyze_algebra, relative_normalizer
from basgeom.linalg import Subspace
from basgeom.nomizu import (
    bracket_preservation_defects,
    build_nomizu,
    canonical_presentation,
    derivation_defect,
    generator_condition_defects,
    generator_map,
    stabilizer,
)
from basgeom.rational import QArray, einsum, q
from basgeom.tensors import endo_commutator, gl_action

from conftest import E, JE, abelian_kahler, entry, geometry, kodaira, unit


def nomizu(name):
    return build_nomizu(entry(name).hermitian, geometry(name))


class TestStabilizer:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_abelian_unitary(self, n):
        assert stabilizer(abelian_kahler(2 * n)).shape[0] == n * n

    def test_kodaira_rotation(self):
        st = stabilizer(kodaira())
        assert st.shape[0] == 1
        A = st[0].to_objects()
        nz = {(i, j) for i in range(4) for j in range(4) if A[i, j] != 0}
        assert nz == {(E, JE), (JE, E)}
        assert A[E, JE] == -A[JE, E]

    def test_calabi_eckmann_fixture(self):
        assert nomizu("calabi_eckmann").dim_stab == 2

    def test_non_bas_refused(self):
        with pytest.raises(NotBASError):
            stabilizer(entry("h3C_natural").hermitian)

    @pytest.mark.parametrize("name", ["kodaira4", "sl2c_canonical", "calabi_eckmann", "r1_h5"])
    def test_annihilates_structure(self, name):
        nom = nomizu(name)
        h = nom.h
        for A in nom.stab:
            assert gl_action(A, h.metric).is_zero()
            assert gl_action(A, h.complex_structure).is_zero()
            assert gl_action(A, nom.T).is_zero()
            assert gl_action(A, nom.R).is_zero()

    def test_closed_under_commutator(self):
        nom = nomizu("abelian_r4")
        for A in nom.stab:
            for B in nom.stab:
                nom.stab_coords(endo_commutator(A, B))


class TestBuild:
    def test_flat_semidirect(self):
        nom = build_nomizu(abelian_kahler(2))
        assert nom.algebra.dim == 3
        s = nom.dim_stab
        c = nom.algebra.c
        assert c[:, s:, s:].is_zero()

    def test_kodaira_dim(self):
        nom = nomizu("kodaira4")
        assert nom.algebra.dim == 5
        analyze_algebra(nom.algebra)

    def test_derivation_identity(self):
        for name in ("kodaira4", "sl2c_canonical", "calabi_eckmann"):
            assert derivation_defect(nomizu(name)) is None


class TestPresentation:
    def test_abelian(self):
        p = canonical_presentation(abelian_kahler(4))
        assert p.pair.du == 0
        assert p.pair.l.is_abelian()

    def test_kodaira(self):
        p = canonical_presentation(kodaira(), nomizu("kodaira4"))
        assert (p.pair.l.dim, p.pair.du) == (5, 1)
        assert trivial_submodule(p.pair) == Subspace([[1, 0, 0, 0], [0, 1, 0, 0]], 4)
        # N_l(u) = u + span{z, w}
        N = relative_normalizer(p.pair.l, p.pair.u)
        assert N == Subspace(QArray.eye(5)[:3], 5)

    @pytest.mark.parametrize("name", ["kodaira4", "calabi_eckmann", "sl2c_canonical", "h3_h3", "sl2r_torus"])
    def test_natred(self, name):
        p = canonical_presentation(entry(name).hermitian, nomizu(name))
        assert natred_test(p.pair, p.G).passed

    def test_names_never_clash(self):
        p = canonical_presentation(entry("sl2c_canonical").hermitian, nomizu("sl2c_canonical"))
        assert len(set(p.pair.l.names)) == p.pair.l.dim


class TestGeneratorMap:
    def test_v_zero(self):
        nom = nomizu("kodaira4")
        A = nom.stab[0]
        At, v = generator_map(nom, A, QArray.zeros((4,)))
        assert At.equals(A) and v.is_zero()

    def test_kodaira_e(self):
        nom = nomizu("kodaira4")
        e = unit(4, E)
        At, _ = generator_map(nom, QArray.zeros((4, 4)), e)
        eT = einsum("kvy,v->ky", nom.T.comp, e)
        assert At.equals(eT * q("1/2"))
        d = generator_condition_defects(nom, QArray.zeros((4, 4)), e)
        assert d["order0_J"].is_zero()

    @pytest.mark.parametrize("name", ["kodaira4", "calabi_eckmann", "abelian_r4"])
    def test_bracket_preserved(self, name):
        assert bracket_preservation_defects(nomizu(name)) == []

    def test_all_generator_conditions_on_kodaira_basis(self):
        nom = nomizu("kodaira4")
        for i in range(nom.algebra.dim):
            A, v = nom.split(nom.algebra.basis_vector(i))
            for d in generator_condition_defects(nom, A, v).values():
                assert d.is_zero()

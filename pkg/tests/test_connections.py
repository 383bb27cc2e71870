import json
from itertools import product

import pytest

from basgeom.connections import (
    ConnectionMap,
    Geometry,
    bismut,
    chern_lee,
    covariant_derivative,
    curvature_of,
    levi_civita,
    verdict_suite,
)
from basgeom.document import serialize
from basgeom.errors import NotIntegrableError
from basgeom.hermitian import HermitianData
from basgeom.lie import su2
from basgeom.rational import QArray, q, tdot

from conftest import E, JE, W, Z, abelian_kahler, entry, frozen_oracle, geometry, kodaira, unit
from oracle import Oracle, nonzero_values

HALF = q("1/2")


def lam_at(cm, x, y):
    """Λ(e_x) e_y as a vector."""
    return tdot(cm.at(unit(cm.pair.dm, x)), unit(cm.pair.dm, y), 1)


class TestLeviCivita:
    def test_abelian_zero(self):
        assert levi_civita(abelian_kahler()).lam.is_zero()

    def test_kodaira(self):
        lc = levi_civita(kodaira())
        assert lam_at(lc, E, JE).equals(unit(4, Z) * HALF)
        assert lam_at(lc, Z, E).equals(unit(4, JE) * (-HALF))
        assert lc.at(unit(4, W)).is_zero()

    def test_su2_biinvariant(self):
        alg = su2()
        h = HermitianData(alg, "identity", [[0, -1, 0], [1, 0, 0], [0, 0, 0]], validate=False)
        lc = levi_civita(h)
        for i, j in product(range(3), repeat=2):
            assert lam_at(lc, i, j).equals(alg.bracket(unit(3, i), unit(3, j)) * HALF)


class TestBismut:
    def test_kahler_abelian(self):
        b = bismut(abelian_kahler())
        assert b.T.is_zero()
        assert b.map.lam.equals(b.lc.lam)

    def test_kodaira_torsion(self):
        T = bismut(kodaira()).T.comp

        def Tv(x, y):
            return tdot(tdot(T, unit(4, x), ([1], [0])), unit(4, y), 1)

        assert Tv(E, JE).equals(-unit(4, Z))
        assert Tv(E, Z).equals(unit(4, JE))
        for x in range(4):
            assert Tv(W, x).is_zero()

    def test_kodaira_map(self):
        nab = bismut(kodaira()).map
        assert lam_at(nab, E, JE).is_zero()
        assert lam_at(nab, Z, E).equals(-unit(4, JE))

    def test_calabi_eckmann_factors(self):
        geo = geometry("calabi_eckmann")
        T = geo.T.comp.to_objects()
        c = geo.h.pair.mbr.to_objects()
        for block in ([0, 2, 3], [1, 4, 5]):
            for i, j, k in product(block, block, range(6)):
                assert T[k, i, j] == -c[k, i, j]

    def test_non_integrable(self):
        from basgeom.constructions.catalog import sl2c_data

        d = sl2c_data()
        J = [[0] * 6 for _ in range(6)]
        for a in range(3):
            J[3 + a][a] = 2
            J[a][3 + a] = q("-1/2")
        G = [[16 if i == j and i < 3 else (4 if i == j else 0) for j in range(6)] for i in range(6)]
        with pytest.raises(NotIntegrableError) as ei:
            bismut(HermitianData(d.algebra, G, J))
        assert not ei.value.nijenhuis.is_zero()


class TestChernLee:
    def test_kahler_abelian(self):
        cl = chern_lee(abelian_kahler())
        assert cl.T_ch.is_zero() and cl.theta.is_zero()

    def test_kodaira_lee_vector(self):
        th = chern_lee(kodaira()).theta_sharp
        assert th.equals(-unit(4, W))

    def test_h3c_type_11(self):
        h = entry("h3C_natural").hermitian
        Tch = chern_lee(h).T_ch.comp
        J = h.J
        JT = tdot(J, Tch, ([1], [0]))
        for x, y in product(range(6), repeat=2):
            jx = tdot(J, unit(6, x), 1)
            a = tdot(JT, unit(6, x), ([1], [0]))[:, y]
            b = tdot(tdot(Tch, jx, ([1], [0])), unit(6, y), 1)
            assert a.equals(b)


class TestCurvature:
    def test_abelian_flat(self):
        assert geometry("abelian_r4").R.is_zero()

    def test_kodaira(self):
        R = geometry("kodaira4").R.comp
        assert R[:, E, JE, E].equals(-unit(4, JE))
        assert R[:, E, JE, Z].is_zero()

    def test_alternating(self):
        R = geometry("sl2c_canonical").R.comp
        assert (R + R.transpose(0, 2, 1, 3)).is_zero()

    def test_zero_map_on_algebra(self):
        p = kodaira().pair
        cm = ConnectionMap(p, QArray.zeros((4, 4, 4)))
        assert curvature_of(cm, p).is_zero()


class TestCovariantDerivative:
    def test_zero_map(self):
        p = kodaira().pair
        cm = ConnectionMap(p, QArray.zeros((4, 4, 4)))
        assert covariant_derivative(cm, geometry("kodaira4").T).is_zero()

    def test_kodaira_parallel_g_and_J(self):
        geo = geometry("kodaira4")
        h = geo.h
        assert covariant_derivative(geo.nabla, h.metric).is_zero()
        assert covariant_derivative(geo.nabla, h.complex_structure).is_zero()

    def test_kodaira_levi_civita_DJ(self):
        DJ = geometry("kodaira4").DJ.comp
        assert DJ[:, E, JE].equals(unit(4, W) * (-HALF))

    def test_bismut_lc_relation_checked(self):
        geo = geometry("sl2c_canonical")
        covariant_derivative(geo.nabla, geo.R, compare=geo.lc, torsion=geo.T)


class TestVerdicts:
    def test_abelian(self):
        v = verdict_suite(abelian_kahler())
        assert all(c.passed for c in v.values())

    def test_kodaira(self):
        v = verdict_suite(kodaira())
        assert v["bas"].passed and v["pluriclosed"].passed
        assert not v["balanced"].passed
        assert not v["kahler"].passed

    def test_h3c_fails_with_nabla_T(self):
        v = verdict_suite(entry("h3C_natural").hermitian)
        assert not v["bas"].passed
        assert not v["parallel_torsion"].passed
        assert not v["bas"].witness.is_zero()

    def test_witness_iff_fail(self):
        for name in ("kodaira4", "h3C_natural", "sl2c_canonical"):
            for c in verdict_suite(entry(name).hermitian).values():
                assert c.passed == (c.witness is None or c.witness.is_zero())


FROZEN = frozen_oracle()


def _nz(comp):
    return sorted(v for _, v in comp.nonzero_entries())


@pytest.mark.parametrize("name", sorted(FROZEN))
def test_against_frozen_oracle(name):
    ref = FROZEN[name]
    geo = geometry(name)
    got_T = {",".join(map(str, i)): str(v) for i, v in geo.T.comp.nonzero_entries()}
    assert got_T == {k: str(q(v)) for k, v in ref["T"].items()}
    got_R = {",".join(map(str, i)): str(v) for i, v in geo.R.comp.nonzero_entries()}
    assert got_R == {k: str(q(v)) for k, v in ref["R"].items()}
    assert [str(x) for x in geo.chern.theta.comp.tolist()] == [str(q(x)) for x in ref["theta"]]
    assert [str(x) for x in _nz(geo.nablaT.comp)] == [str(q(x)) for x in ref["nabla_T_values"]]
    assert geo.nablaR.comp.count_nonzero() == ref["nabla_R_count"]
    assert [str(x) for x in _nz(geo.dT.comp)] == [str(q(x)) for x in ref["dT_values"]]


@pytest.mark.parametrize("name", ["kodaira4", "hopf_surface", "sl2r_torus", "abelian_r4"])
def test_live_oracle(name):
    obj = json.loads(serialize(entry(name).document()))
    o = Oracle(obj)
    geo = Geometry(entry(name).hermitian)
    n = o.n
    lam = geo.nabla.lam.to_objects()
    for x, y, k in product(range(n), repeat=3):
        assert lam[x, k, y] == o.nabla[x][y][k]
    R = geo.R.comp.to_objects()
    OR = o.curvature()
    for k, x, y, z in product(range(n), repeat=4):
        assert R[k, x, y, z] == OR[x][y][z][k]
    assert sorted(nonzero_values(o.nabla_T())) == _nz(geo.nablaT.comp)

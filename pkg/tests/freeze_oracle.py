"""Regenerate tests/fixtures/oracle_frozen.json from the naive oracle.

Run from the repository root: python tests/freeze_oracle.py
"""

import json
import sys
from pathlib import Path

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

from oracle import Oracle, nonzero_values  # noqa: E402

from basgeom.constructions.catalog import catalog_build, catalog_names  # noqa: E402
from basgeom.document import serialize  # noqa: E402

MAX_DIM = 6


def frozen_for(obj):
    o = Oracle(obj)
    n = o.n
    T = {f"{k},{x},{y}": str(o.T[x][y][k]) for x in range(n) for y in range(n) for k in range(n) if o.T[x][y][k] != 0}
    R = o.curvature()
    R_nz = {f"{k},{x},{y},{z}": str(R[x][y][z][k]) for x in range(n) for y in range(n) for z in range(n)
            for k in range(n) if R[x][y][z][k] != 0}
    dl = o.codifferential_omega()
    theta = [str(-sum(dl[i] * o.J[i][x] for i in range(n))) for x in range(n)]  # θ(X) = −δω(JX)
    return {
        "T": T,
        "R": R_nz,
        "theta": theta,
        "nabla_T_values": [str(v) for v in nonzero_values(o.nabla_T())],
        "nabla_R_count": len(nonzero_values(o.nabla_R())),
        "dT_values": [str(v) for v in nonzero_values(o.d_form3(o.torsion_form()))],
    }


def main():
    out = {}
    for name in catalog_names():
        obj = json.loads(serialize(catalog_build(name).document()))
        if len(obj["basis"]) > MAX_DIM or "isotropy" in obj:
            continue
        out[name] = frozen_for(obj)
    (HERE / "fixtures" / "oracle_frozen.json").write_text(json.dumps(out, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()

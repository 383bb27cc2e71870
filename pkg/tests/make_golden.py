"""Regenerate tests/golden/<name>.json from `basgeom catalog report NAME`.

Run by hand after an intentional report-format change:  python tests/make_golden.py
"""

import subprocess
import sys
from pathlib import Path

from basgeom.constructions import catalog_names

GOLDEN = Path(__file__).parent / "golden"


def main():
    GOLDEN.mkdir(exist_ok=True)
    for name in catalog_names():
        proc = subprocess.run([sys.executable, "-m", "basgeom", "catalog", "report", name], capture_output=True)
        (GOLDEN / f"{name}.json").write_bytes(proc.stdout)
        print(name, proc.returncode)


if __name__ == "__main__":
    main()

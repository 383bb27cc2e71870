"""JSON algebra documents: parsing with located diagnostics, canonical serialization.

Layout::

    {
      "name": "kodaira4",                       optional
      "dim": 4,
      "basis": ["z", "w", "e", "Je"],
      "brackets": [{"x": "e", "y": "Je", "value": {"z": "1"}}],
      "metric": "identity" | [["1", "0"], ...],  on m, row-major
      "J": [[...], ...],                         on m, columns are images
      "isotropy": {"u": [[...]], "m": [[...]], "m_names": [...], "check_effective": true},
      "k_nilpotent": {"k_dim": 2, "V_dim_complex": 3, "reps": [...], ...}
    }

Rationals are strings ``"p"`` or ``"p/q"``; JSON integers are accepted on input,
floats never. Only brackets with x before y in the basis order are stored.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any

from gmpy2 import mpq

from .canonjson import dumps
from .errors import DocumentError, InputShapeError, InvalidInput
from .hermitian import HermitianData
from .lie import LieAlgebra
from .pair import ReductivePair
from .rational import QArray, q, qstr

_TOP_KEYS = {"name", "params", "dim", "basis", "brackets", "metric", "J", "isotropy", "k_nilpotent"}


@dataclass(eq=False)
class AlgebraDocument:
    basis: list[str]
    brackets: dict  # (i, j) with i < j → {k: mpq}, zero coefficients dropped
    metric: Any  # "identity" or QArray
    J: QArray
    isotropy: dict | None = None  # {"u": QArray rows, "m": QArray rows, "m_names": list | None, "check_effective": bool}
    k_nilpotent: Any = None  # KNilpotentSpec
    name: str | None = None
    params: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def algebra(self) -> LieAlgebra:
        br = {(self.basis[i], self.basis[j]): {self.basis[k]: v for k, v in val.items()}
              for (i, j), val in self.brackets.items()}
        return LieAlgebra.from_brackets(self.basis, br)

    def carrier(self):
        alg = self.algebra()
        if self.isotropy is None:
            return alg
        iso = self.isotropy
        return ReductivePair(alg, iso["u"], iso["m"], m_names=iso.get("m_names"),
                             check_effective=iso.get("check_effective", True))

    def hermitian(self) -> HermitianData:
        return HermitianData(self.carrier(), self.metric, self.J)

    def to_json_obj(self) -> dict:
        out: dict[str, Any] = {"dim": self.dim, "basis": list(self.basis)}
        if self.name is not None:
            out["name"] = self.name
        if self.params:
            out["params"] = {k: qstr(v) for k, v in sorted(self.params.items())}
        out["brackets"] = [
            {"x": self.basis[i], "y": self.basis[j], "value": {self.basis[k]: qstr(v) for k, v in sorted(val.items())}}
            for (i, j), val in sorted(self.brackets.items())
        ]
        out["metric"] = "identity" if isinstance(self.metric, str) else _mat_out(self.metric)
        out["J"] = _mat_out(self.J)
        if self.isotropy is not None:
            iso = self.isotropy
            block = {"u": _mat_out(iso["u"]), "m": _mat_out(iso["m"])}
            if iso.get("m_names"):
                block["m_names"] = list(iso["m_names"])
            if not iso.get("check_effective", True):
                block["check_effective"] = False
            out["isotropy"] = block
        if self.k_nilpotent is not None:
            out["k_nilpotent"] = _knil_out(self.k_nilpotent)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgebraDocument) and self.to_json_obj() == other.to_json_obj()

    __hash__ = None


def serialize(doc: AlgebraDocument) -> str:
    """Canonical text; identical documents give identical bytes."""
    return dumps(doc.to_json_obj())


def _mat_out(M) -> list:
    M = QArray.of(M)
    if M.ndim == 2 and M.shape[0] == 0:
        return []
    return [[qstr(x) for x in row] for row in M.tolist()]


# parsing ----------------------------------------------------------------


class _Locator:
    """Best-effort mapping of a field path to a source line."""

    def __init__(self, text: str):
        self.lines = text.splitlines()

    def line_of(self, key: str | None) -> int | None:
        if not key:
            return None
        pat = re.compile(r'"' + re.escape(key) + r'"\s*:')
        for n, line in enumerate(self.lines, 1):
            if pat.search(line):
                return n
        return None

    def line_of_item(self, key: str, n: int, marker: str = '"y"') -> int | None:
        """Line of the n-th ``marker`` occurring after ``key``; falls back to the key's line."""
        start = self.line_of(key.split(".")[-1])
        if start is None:
            return None
        seen = -1
        for ln in range(start - 1, len(self.lines)):
            seen += self.lines[ln].count(marker)
            if seen >= n:
                return ln + 1
        return start


class _Parser:
    def __init__(self, text: str):
        self.loc = _Locator(text)

    def fail(self, msg, path: str, key: str | None = None, *, line: int | None = None):
        if line is None:
            line = self.loc.line_of(key or path.split(".")[0].split("[")[0])
        raise DocumentError(msg, field=path, line=line)

    def rational(self, x, path, key=None) -> mpq:
        if isinstance(x, bool) or isinstance(x, float):
            self.fail(f"expected a rational string such as \"3/4\", got {json.dumps(x)}", path, key)
        if isinstance(x, int):
            return mpq(x)
        if not isinstance(x, str):
            self.fail(f"expected a rational string, got {type(x).__name__}", path, key)
        try:
            return q(x)
        except (ValueError, ZeroDivisionError):
            self.fail(f"malformed rational literal {x!r}", path, key)

    def matrix(self, M, rows, cols, path, key=None) -> QArray:
        if not isinstance(M, list) or len(M) != rows:
            self.fail(f"expected a list of {rows} rows", path, key)
        out = []
        for i, row in enumerate(M):
            if not isinstance(row, list) or len(row) != cols:
                self.fail(f"row {i} must have {cols} entries", f"{path}[{i}]", key)
            out.append([self.rational(x, f"{path}[{i}][{j}]", key) for j, x in enumerate(row)])
        return QArray.of(out) if rows else QArray.zeros((0, cols))

    def names(self, v, path, key=None) -> list[str]:
        if not isinstance(v, list) or not all(isinstance(s, str) and s for s in v):
            self.fail("expected a list of non-empty strings", path, key)
        if len(set(v)) != len(v):
            self.fail("names are not distinct", path, key)
        return list(v)

    def sparse_brackets(self, items, basis, path) -> dict:
        index = {nm: i for i, nm in enumerate(basis)}
        if not isinstance(items, list):
            self.fail("expected a list of {x, y, value} entries", path)
        out: dict = {}
        for n, item in enumerate(items):
            p = f"{path}[{n}]"
            ln = self.loc.line_of_item(path, n)

            def bad(msg, where=p):
                self.fail(msg, where, line=ln)

            if not isinstance(item, dict) or set(item) != {"x", "y", "value"}:
                bad("each bracket needs exactly the keys x, y, value")
            x, y, val = item["x"], item["y"], item["value"]
            for role, nm in (("x", x), ("y", y)):
                if nm not in index:
                    bad(f"unknown basis element {nm!r}", f"{p}.{role}")
            i, j = index[x], index[y]
            if not isinstance(val, dict):
                bad("value must map basis names to rationals", f"{p}.value")
            coeffs = {}
            for nm, c in val.items():
                if nm not in index:
                    bad(f"unknown basis element {nm!r}", f"{p}.value.{nm}")
                try:
                    coeffs[index[nm]] = self.rational(c, f"{p}.value.{nm}", path)
                except DocumentError as e:
                    bad(str(e).split(": ", 1)[-1], f"{p}.value.{nm}")
            if i == j:
                if any(coeffs.values()):
                    bad(f"[{x}, {x}] must vanish")
                continue
            if i > j:
                i, j = j, i
                coeffs = {k: -v for k, v in coeffs.items()}
            if (i, j) in out:
                bad(f"bracket [{basis[i]}, {basis[j]}] listed twice")
            coeffs = {k: v for k, v in coeffs.items() if v != 0}
            if coeffs:
                out[(i, j)] = coeffs
        return out


def _algebra_brackets(alg: LieAlgebra) -> dict:
    c = alg.c.to_objects()
    n = alg.dim
    out = {}
    for i in range(n):
        for j in range(i + 1, n):
            val = {k: mpq(c[k, i, j]) for k in range(n) if c[k, i, j] != 0}
            if val:
                out[(i, j)] = val
    return out


def parse_document(text: str) -> AlgebraDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"invalid JSON: {e.msg}", line=e.lineno) from None
    p = _Parser(text)
    if not isinstance(raw, dict):
        raise DocumentError("top level must be a JSON object", line=1)
    extra = set(raw) - _TOP_KEYS
    if extra:
        k = sorted(extra)[0]
        p.fail(f"unknown key {k!r}", k)

    kn = None
    if "k_nilpotent" in raw:
        kn = _knil_in(p, raw["k_nilpotent"])

    if "basis" in raw:
        basis = p.names(raw["basis"], "basis")
        brackets = p.sparse_brackets(raw.get("brackets", []), basis, "brackets")
    elif kn is not None:
        from .constructions.knil import build_k_nilpotent

        alg = _guard(p, lambda: build_k_nilpotent(kn).algebra, "k_nilpotent")
        basis = list(alg.names)
        brackets = _algebra_brackets(alg)
    else:
        p.fail("missing required key", "basis")
    n = len(basis)
    if "dim" in raw and raw["dim"] != n:
        p.fail(f"dim = {raw['dim']!r} but the basis has {n} elements", "dim")

    iso = None
    dm = n
    if "isotropy" in raw:
        blk = raw["isotropy"]
        if not isinstance(blk, dict) or not {"u", "m"} <= set(blk):
            p.fail("isotropy needs the keys u and m", "isotropy")
        bad = set(blk) - {"u", "m", "m_names", "check_effective"}
        if bad:
            p.fail(f"unknown key {sorted(bad)[0]!r}", "isotropy")
        u = p.matrix(blk["u"], len(blk["u"]) if isinstance(blk["u"], list) else -1, n, "isotropy.u", "u")
        m = p.matrix(blk["m"], len(blk["m"]) if isinstance(blk["m"], list) else -1, n, "isotropy.m", "m")
        dm = m.shape[0]
        iso = {"u": u, "m": m, "m_names": None, "check_effective": True}
        if "m_names" in blk:
            iso["m_names"] = p.names(blk["m_names"], "isotropy.m_names", "m_names")
            if len(iso["m_names"]) != dm:
                p.fail("one name per row of m is required", "isotropy.m_names", "m_names")
        if "check_effective" in blk:
            if not isinstance(blk["check_effective"], bool):
                p.fail("expected true or false", "isotropy.check_effective", "check_effective")
            iso["check_effective"] = blk["check_effective"]

    if "metric" not in raw:
        if kn is None or "basis" in raw:
            p.fail("missing required key", "metric")
        from .constructions.knil import build_k_nilpotent

        metric = build_k_nilpotent(kn).g
    elif raw["metric"] == "identity":
        metric = "identity"
    else:
        metric = p.matrix(raw["metric"], dm, dm, "metric")
    if "J" not in raw:
        p.fail("missing required key", "J")
    J = p.matrix(raw["J"], dm, dm, "J")

    name = raw.get("name")
    if name is not None and not isinstance(name, str):
        p.fail("expected a string", "name")
    params = {}
    if "params" in raw:
        if not isinstance(raw["params"], dict):
            p.fail("expected an object", "params")
        params = {k: p.rational(v, f"params.{k}", "params") for k, v in raw["params"].items()}
    doc = AlgebraDocument(basis, brackets, metric, J, iso, kn, name, params)
    if kn is not None and "basis" in raw:
        from .constructions.knil import build_k_nilpotent

        built = _guard(p, lambda: build_k_nilpotent(kn).algebra, "k_nilpotent")
        if list(built.names) != basis or _algebra_brackets(built) != brackets:
            p.fail("the brackets differ from the algebra built from the k_nilpotent block", "k_nilpotent")
    return doc


def _guard(p: _Parser, fn, path):
    try:
        return fn()
    except InvalidInput as e:
        p.fail(str(e), path)


def load_document(path) -> AlgebraDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise DocumentError(f"cannot read {path}: {e.strerror}") from None
    return parse_document(text)


# k-nilpotent block ---------------------------------------------------------


def _knil_out(spec) -> dict:
    k = spec.k_dim
    out = {
        "k_dim": k,
        "V_dim_complex": spec.V_dim_complex,
        "reps": [_mat_out(A) for A in spec.reps],
        "k_metric": _mat_out(spec.k_metric),
        "V_metric": _mat_out(spec.V_metric),
        "I": _mat_out(spec.I),
        "k_names": list(spec.k_names),
        "V_names": list(spec.V_names),
    }
    if not spec.abelian:
        c = spec.k_bracket.to_objects()
        kn = list(spec.k_names)
        out["k_bracket"] = [
            {"x": kn[i], "y": kn[j], "value": {kn[a]: qstr(c[a, i, j]) for a in range(k) if c[a, i, j] != 0}}
            for i in range(k) for j in range(i + 1, k) if any(c[a, i, j] != 0 for a in range(k))
        ]
    return out


def _knil_in(p: _Parser, blk):
    from .constructions.knil import KNilpotentSpec

    path = "k_nilpotent"
    if not isinstance(blk, dict):
        p.fail("expected an object", path)
    allowed = {"k_dim", "V_dim_complex", "reps", "k_bracket", "k_metric", "V_metric", "I", "k_names", "V_names"}
    bad = set(blk) - allowed
    if bad:
        p.fail(f"unknown key {sorted(bad)[0]!r}", path)
    for key in ("k_dim", "V_dim_complex", "reps"):
        if key not in blk:
            p.fail("missing required key", f"{path}.{key}", key)
    k, m = blk["k_dim"], blk["V_dim_complex"]
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        p.fail("expected a non-negative integer", f"{path}.k_dim", "k_dim")
    if not isinstance(m, int) or isinstance(m, bool) or m < 0:
        p.fail("expected a non-negative integer", f"{path}.V_dim_complex", "V_dim_complex")
    reps = blk["reps"]
    if not isinstance(reps, list) or len(reps) != k:
        p.fail(f"expected {k} matrices", f"{path}.reps", "reps")
    reps = [p.matrix(A, 2 * m, 2 * m, f"{path}.reps[{a}]", "reps") for a, A in enumerate(reps)]
    kw = {}
    for key, size in (("k_metric", k), ("V_metric", 2 * m), ("I", 2 * m)):
        if key in blk:
            kw[key] = p.matrix(blk[key], size, size, f"{path}.{key}", key)
    for key in ("k_names", "V_names"):
        if key in blk:
            kw[key] = p.names(blk[key], f"{path}.{key}", key)
    k_names = kw.get("k_names") or [f"z{i + 1}" for i in range(k)]
    if "k_bracket" in blk:
        sb = p.sparse_brackets(blk["k_bracket"], k_names, f"{path}.k_bracket")
        c = [[[mpq(0)] * k for _ in range(k)] for _ in range(k)]
        for (i, j), val in sb.items():
            for a, v in val.items():
                c[a][i][j] = v
                c[a][j][i] = -v
        kw["k_bracket"] = QArray.of(c)
    try:
        return KNilpotentSpec(k, reps, m, **kw)
    except InputShapeError as e:
        p.fail(str(e), path)


# construction from in-memory data ---------------------------------------------


def document_from_hermitian(h: HermitianData, *, name: str | None = None, params: dict | None = None,
                            k_nilpotent=None) -> AlgebraDocument:
    p = h.pair
    alg = p.l
    metric = "identity" if h.G.equals(QArray.eye(h.dim)) else h.G
    iso = None
    if not (p.du == 0 and p.m_basis.equals(QArray.eye(alg.dim))):
        iso = {"u": p.u_basis, "m": p.m_basis, "m_names": list(p.m_names), "check_effective": False}
    return AlgebraDocument(list(alg.names), _algebra_brackets(alg), metric, h.J, iso, k_nilpotent, name,
                           {k: q(v) for k, v in (params or {}).items()})

"""Verification reports: the check pipeline and canonical rendering."""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field

from . import __version__
from .canonjson import dumps
from .connections import Check, Geometry, verdict_suite
from .document import AlgebraDocument, serialize
from .errors import BasError, InvalidInput, MathematicalFailure, NotALieAlgebraError, NotIntegrableError
from .hermitian import analyze_hermitian
from .homogeneous import canonical_reduction
from .lie import analyze_algebra
from .nomizu import build_nomizu, canonical_presentation
from .rational import QArray, qstr
from .tensors import InvariantTensor

EXIT_PASS, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


@dataclass
class Report:
    body: dict = field(default_factory=dict)
    exit_code: int = EXIT_PASS

    @classmethod
    def skeleton(cls) -> "Report":
        return cls({"tool": {"name": "basgeom", "version": __version__}, "verdicts": {}})


def digest(doc: AlgebraDocument) -> str:
    return "sha256:" + hashlib.sha256(serialize(doc).encode("utf-8")).hexdigest()


def _labels(names, idx) -> list[str]:
    return [names[i] if i < len(names) else str(i) for i in idx]


def witness_summary(w, names) -> dict | None:
    """First nonzero component (exact) and the number of nonzero components."""
    if w is None:
        return None
    comp = w.comp if isinstance(w, InvariantTensor) else QArray.of(w)
    if comp.is_zero():
        return None
    idx, val = comp.first_nonzero()
    out = {
        "first_nonzero": {"index": list(idx), "labels": _labels(names, idx), "value": qstr(val)},
        "nonzero_count": sum(1 for _ in comp.nonzero_entries()),
    }
    if isinstance(w, InvariantTensor):
        out["valence"] = list(w.valence)
    return out


def check_entry(c: Check, names) -> dict:
    return {"pass": c.passed, "witness": None if c.passed else witness_summary(c.witness, names)}


def _error_entry(e: BasError, names=()) -> dict:
    out = {"type": type(e).__name__, "message": str(e)}
    if isinstance(e, NotALieAlgebraError) and e.triple is not None:
        out["triple"] = [str(t) if t is not None else None for t in e.triple]
    if isinstance(e, NotIntegrableError) and e.nijenhuis is not None:
        out["nijenhuis"] = witness_summary(e.nijenhuis, names)
    return out


class _Clock:
    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.spans: dict[str, float] = {}

    def run(self, name, fn):
        t0 = time.perf_counter()
        try:
            return fn()
        finally:
            if self.enabled:
                self.spans[name] = round(time.perf_counter() - t0, 6)


def run_check(doc: AlgebraDocument, expect=("bas",), *, timings: bool = False) -> Report:
    """analyze_algebra → analyze_hermitian → verdict_suite → presentation → reduction.

    Later stages are skipped once a precondition fails; the partial report is kept.
    """
    rep = Report.skeleton()
    b = rep.body
    b["input"] = {"digest": digest(doc), "dim": doc.dim, "name": doc.name}
    b["expect"] = list(expect)
    clock = _Clock(timings)
    names = list(doc.basis)
    try:
        alg = clock.run("algebra", doc.algebra)
        ar = clock.run("analyze_algebra", lambda: analyze_algebra(alg))
        b["algebra"] = {
            "dim": alg.dim,
            "centre_dim": ar.centre.dim,
            "derived_dim": ar.derived.dim,
            "nilpotency_class": ar.nilpotency_class,
            "solvable": ar.solvable,
        }
        h = clock.run("hermitian", doc.hermitian)
        names = list(h.names)
        ha = clock.run("analyze_hermitian", lambda: analyze_hermitian(h))
        b["hermitian"] = {"integrable": ha.integrable, "abelian_J": ha.abelian_J, "dim_m": h.dim}
        if not ha.integrable:
            raise NotIntegrableError("J is not integrable", nijenhuis=ha.nijenhuis)
        geo = Geometry(h)
        v = clock.run("verdict_suite", lambda: verdict_suite(h, geo))
        unknown = [e for e in expect if e not in v and e not in STAGES]
        if unknown:
            raise _UnknownCheck(f"unknown check name(s) {unknown}; available: {sorted(set(v) | set(STAGES))}")
        b["verdicts"] = {k: check_entry(c, names) for k, c in v.items()}
        if not v["bas"].passed:
            b["verdicts"]["bas"]["witness"]["tensor"] = (
                "nabla_T" if not v["parallel_torsion"].passed else "nabla_R")
        stage_ok = {}
        if v["bas"].passed:
            pres = clock.run("canonical_presentation", lambda: canonical_presentation(h, build_nomizu(h, geo)))
            b["presentation"] = presentation_summary(pres)
            stage_ok["presentation"] = True
            try:
                red = clock.run("canonical_reduction", lambda: canonical_reduction(
                    pres.pair, h.G, h.J, theta_sharp=geo.chern.theta_sharp))
                b["reduction"] = reduction_summary(red)
                stage_ok["reduction"] = True
            except MathematicalFailure as e:
                b["reduction"] = {"error": _error_entry(e, names)}
                stage_ok["reduction"] = False
        else:
            b["presentation"] = {"skipped": "the structure is not BAS"}
            b["reduction"] = {"skipped": "the structure is not BAS"}
            stage_ok["presentation"] = stage_ok["reduction"] = False
        failed = [e for e in expect if not (v[e].passed if e in v else stage_ok[e])]
        b["failed"] = failed
        b["status"] = "fail" if failed else "pass"
        rep.exit_code = EXIT_FAIL if failed else EXIT_PASS
    except InvalidInput as e:
        b["status"] = "invalid"
        b["error"] = _error_entry(e, names)
        rep.exit_code = EXIT_INVALID
    except MathematicalFailure as e:
        b["status"] = "fail"
        b["error"] = _error_entry(e, names)
        rep.exit_code = EXIT_FAIL
    if timings:
        b["timings"] = clock.spans
    return rep


class _UnknownCheck(InvalidInput):
    pass


# pipeline stages that may be requested alongside the verdict checks
STAGES = ("presentation", "reduction")


def presentation_summary(pres) -> dict:
    return {
        "dim_l": pres.pair.l.dim,
        "dim_u": pres.pair.du,
        "dim_m": pres.pair.dm,
        "dim_stabilizer": pres.nomizu.dim_stab,
        "symmetric": pres.pair.is_symmetric(),
    }


def reduction_summary(red) -> dict:
    return {"dim_f": red.f.dim, "dim_base": red.b.dim, "reduced": red.reduced}


def reduction_body(red) -> dict:
    mat = lambda M: [[qstr(x) for x in row] for row in M.tolist()] if M.shape[0] else []
    return {
        "f_basis": mat(red.f_basis) if red.f.dim else [],
        "b_basis": mat(red.b_basis) if red.b.dim else [],
        "induced_g": mat(red.induced_g),
        "induced_J": mat(red.induced_J),
        "checks": dict(sorted(red.checks.items())),
        "reduced": red.reduced,
    }


def _text_witness(w: dict | None) -> str:
    if not w:
        return ""
    f = w["first_nonzero"]
    tensor = w.get("tensor", "")
    return f" (witness {tensor}[{', '.join(f['labels'])}] = {f['value']}, {w['nonzero_count']} nonzero)"


def render_text(body: dict) -> str:
    lines = []
    inp = body.get("input", {})
    if inp:
        lines.append(f"input: {inp.get('name') or '-'} (dim {inp.get('dim')}, {inp.get('digest')})")
    for name, c in sorted(body.get("verdicts", {}).items()):
        lines.append(f"{name}: {'PASS' if c['pass'] else 'FAIL'}{_text_witness(c.get('witness'))}")
    for key in STAGES:
        if key in body:
            lines.append(f"{key}: " + ", ".join(f"{k}={_fmt(v)}" for k, v in sorted(body[key].items())))
    if "error" in body:
        lines.append(f"error: {body['error']['type']}: {body['error']['message']}")
    for k in sorted(set(body) - {"input", "verdicts", "error", "tool", *STAGES}):
        lines.append(f"{k}: {_fmt(body[k])}")
    return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_fmt(x)}" for k, x in sorted(v.items())) + "}"
    if isinstance(v, list):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def emit_report(report: Report | dict, fmt: str = "json") -> bytes:
    body = report.body if isinstance(report, Report) else report
    if fmt == "json":
        return dumps(body).encode("utf-8")
    if fmt == "text":
        return render_text(body).encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")

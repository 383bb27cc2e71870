"""Command-line entry point.

Exit codes: 0 when every requested check passes, 1 when a mathematical check
fails, 2 on invalid input (parse errors, non-Lie brackets, non-integrable J, ...).
"""

from __future__ import annotations

import sys
from concurrent.futures import ProcessPoolExecutor

import click

from . import __version__
from .canonjson import dumps
from .connections import Geometry
from .document import load_document, serialize
from .errors import BasError, InvalidInput, MathematicalFailure
from .homogeneous import canonical_reduction
from .nomizu import build_nomizu, canonical_presentation
from .rational import qstr
from .report import (
    EXIT_FAIL,
    EXIT_INVALID,
    EXIT_PASS,
    Report,
    _error_entry,
    digest,
    emit_report,
    presentation_summary,
    reduction_body,
    run_check,
)

FORMAT = click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text", show_default=True)


def _out(body: dict, fmt: str) -> None:
    sys.stdout.buffer.write(emit_report(body, fmt))
    sys.stdout.flush()


def _fail_invalid(e: BasError, fmt: str, where: str | None = None) -> None:
    body = Report.skeleton().body
    body["status"] = "invalid"
    body["error"] = _error_entry(e)
    if where:
        body["input"] = {"path": where}
    _out(body, fmt)
    click.echo(f"error: {e}", err=True)
    sys.exit(EXIT_INVALID)


def _load(path, fmt):
    try:
        return load_document(path)
    except InvalidInput as e:
        _fail_invalid(e, fmt, str(path))


def _params(pairs) -> dict:
    out = {}
    for p in pairs:
        if "=" not in p:
            raise click.BadParameter(f"expected key=value, got {p!r}", param_hint="--param")
        k, v = p.split("=", 1)
        out[k.strip()] = v.strip()
    return out


@click.group()
@click.version_option(__version__, prog_name="basgeom")
def main():
    """Exact checks of Bismut–Ambrose–Singer structures on Lie algebras and reductive pairs."""


@main.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--expect", default="bas", show_default=True, help="Comma-separated checks that must pass.")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), help="Also write the json report here.")
@click.option("--timings", is_flag=True, help="Record wall-clock timings (makes the report non-deterministic).")
@FORMAT
def check(file, expect, report_path, timings, fmt):
    """Run the full verification pipeline on an algebra document."""
    doc = _load(file, fmt)
    wanted = [e.strip() for e in expect.split(",") if e.strip()]
    rep = run_check(doc, wanted, timings=timings)
    if report_path:
        with open(report_path, "wb") as fh:
            fh.write(emit_report(rep, "json"))
    _out(rep.body, fmt)
    if rep.exit_code == EXIT_INVALID:
        click.echo(f"error: {rep.body['error']['message']}", err=True)
    sys.exit(rep.exit_code)


def _prepare(file, fmt):
    doc = _load(file, fmt)
    try:
        h = doc.hermitian()
        geo = Geometry(h)
        nom = build_nomizu(h, geo)
        pres = canonical_presentation(h, nom)
    except InvalidInput as e:
        _fail_invalid(e, fmt, str(file))
    except MathematicalFailure as e:
        body = Report.skeleton().body
        body["status"] = "fail"
        body["error"] = _error_entry(e)
        _out(body, fmt)
        sys.exit(EXIT_FAIL)
    return doc, h, geo, pres


@main.command()
@click.argument("file", type=click.Path(dir_okay=False))
@FORMAT
def present(file, fmt):
    """Canonical presentation l = u + m from the Nomizu construction."""
    doc, h, geo, pres = _prepare(file, fmt)
    l = pres.pair.l
    n = l.dim
    c = l.c.to_objects()
    brackets = [
        {"x": l.names[i], "y": l.names[j], "value": {l.names[k]: qstr(c[k, i, j]) for k in range(n) if c[k, i, j] != 0}}
        for i in range(n) for j in range(i + 1, n) if any(c[k, i, j] != 0 for k in range(n))
    ]
    body = {
        "input": {"digest": digest(doc), "dim": doc.dim, "name": doc.name},
        "presentation": presentation_summary(pres),
        "basis": list(l.names),
        "u": list(pres.pair.u_names),
        "brackets": brackets,
        "status": "pass",
    }
    _out(body, fmt)


@main.command()
@click.argument("file", type=click.Path(dir_okay=False))
@FORMAT
def reduce(file, fmt):
    """Canonical reduction: fibre f, base complement b and the induced Hermitian data."""
    doc, h, geo, pres = _prepare(file, fmt)
    body = {"input": {"digest": digest(doc), "dim": doc.dim, "name": doc.name}, "presentation": presentation_summary(pres)}
    try:
        red = canonical_reduction(pres.pair, h.G, h.J, theta_sharp=geo.chern.theta_sharp)
    except MathematicalFailure as e:
        body["status"] = "fail"
        body["error"] = _error_entry(e)
        _out(body, fmt)
        sys.exit(EXIT_FAIL)
    body["reduction"] = reduction_body(red)
    body["status"] = "pass"
    _out(body, fmt)


@main.command("classify-nil")
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--seed", default=0, show_default=True, help="Seed for the random pencil combinations.")
@FORMAT
def classify_nil(file, seed, fmt):
    """Decide whether a nilpotent algebra carries a left-invariant BAS structure (exit 0 iff yes)."""
    from .constructions.nildecide import decide_nilpotent_bas

    doc = _load(file, fmt)
    try:
        alg = doc.algebra()
    except InvalidInput as e:
        _fail_invalid(e, fmt, str(file))
    d = decide_nilpotent_bas(alg, seed=seed)
    body = {
        "input": {"digest": digest(doc), "dim": doc.dim, "name": doc.name},
        "verdict": d.verdict,
        "reason": d.reason,
        "probabilistic": d.probabilistic,
    }
    if d.obstruction is not None:
        body["obstruction"] = str(d.obstruction)
    w = d.witness
    if w is not None:
        wb = {"names": w.names, "centre_dim": w.centre_dim, "numerical": w.numerical}
        if w.numerical:
            wb["rows"] = [[float(x) for x in row] for row in w.basis]
            wb["max_residual"] = w.max_residual
        else:
            wb["rows"] = [[qstr(x) for x in row] for row in w.basis.tolist()]
        body["witness"] = wb
    _out(body, fmt)
    sys.exit(EXIT_PASS if d.yes else EXIT_FAIL)


@main.group()
def catalog():
    """Built-in example structures."""


@catalog.command("list")
def catalog_list():
    from .constructions.catalog import catalog_describe, catalog_names

    for name in catalog_names():
        click.echo(f"{name}: {catalog_describe(name)}")


def _verify_one(args):
    name, params = args
    from .constructions.catalog import catalog_build

    try:
        entry = catalog_build(name, params)
        return name, entry.verify(), None
    except BasError as e:
        return name, None, e


@catalog.command("verify")
@click.argument("name", required=False)
@click.option("--all", "all_", is_flag=True, help="Verify every entry.")
@click.option("--param", multiple=True, help="Entry parameter key=value (repeatable).")
@click.option("--jobs", default=1, show_default=True, help="Worker processes for --all.")
def catalog_verify(name, all_, param, jobs):
    """Recompute verdicts and compare them with the frozen fixtures."""
    from .constructions.catalog import catalog_names

    if bool(name) == all_:
        raise click.UsageError("give exactly one of NAME or --all")
    params = _params(param)
    todo = [(n, {}) for n in catalog_names()] if all_ else [(name, params)]
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(_verify_one, todo))
    else:
        results = [_verify_one(t) for t in todo]
    code = EXIT_PASS
    for n, mismatch, err in results:
        if err is not None:
            click.echo(f"{n}: ERROR {err}")
            code = max(code, EXIT_INVALID if isinstance(err, InvalidInput) else EXIT_FAIL)
        elif mismatch:
            detail = ", ".join(f"{k} expected {e} got {a}" for k, (e, a) in sorted(mismatch.items()))
            click.echo(f"{n}: FAIL ({detail})")
            code = max(code, EXIT_FAIL)
        else:
            click.echo(f"{n}: PASS")
    sys.exit(code)


@catalog.command("export")
@click.argument("name")
@click.option("--param", multiple=True, help="Entry parameter key=value (repeatable).")
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write to a file instead of stdout.")
def catalog_export(name, param, output):
    """Write an entry as an algebra document."""
    from .constructions.catalog import catalog_build

    try:
        text = serialize(catalog_build(name, _params(param)).document())
    except InvalidInput as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_INVALID)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.buffer.write(text.encode("utf-8"))


@catalog.command("report")
@click.argument("name")
@click.option("--param", multiple=True, help="Entry parameter key=value (repeatable).")
@click.option("--expect", default="bas", show_default=True)
def catalog_report(name, param, expect):
    """Canonical json report of an entry (what `check` prints for its exported document)."""
    from .constructions.catalog import catalog_build

    try:
        doc = catalog_build(name, _params(param)).document()
    except InvalidInput as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_INVALID)
    rep = run_check(doc, [e.strip() for e in expect.split(",") if e.strip()])
    sys.stdout.buffer.write(dumps(rep.body).encode("utf-8"))
    sys.exit(rep.exit_code)


if __name__ == "__main__":
    main()

"""Command-line client for the verification service.

Each subcommand builds the request model for one service endpoint and
either runs it in process (default) or posts it to a running server
(--server).  Reports are written as canonical JSON; point clouds, Green
tables and empirical measures can be written as CSV / JSON-lines with
--out.  Verification commands exit nonzero when a check fails.

Configuration uses plain 'key = value' files (--config); explicit flags
override file values, and unknown keys are rejected.
"""

from __future__ import annotations

import json
from pathlib import Path

import click

import hypwalk
from hypwalk import io as hio
from hypwalk import runs as hruns
from hypwalk import schemas

ENDPOINTS = {
    "verify-geometry": ("/verify/geometry", schemas.GeometryRequest, hruns.cmd_verify_geometry),
    "roots-check": ("/verify/curvature", schemas.CurvatureRequest, hruns.cmd_roots_check),
    "bisector-cloud": ("/clouds/bisector", schemas.BisectorCloudRequest, hruns.cmd_bisector_cloud),
    "walk-green": ("/walk/green", schemas.WalkGreenRequest, hruns.cmd_walk_green),
    "cusp-defect": ("/experiments/cusp-defect", schemas.CuspDefectRequest, hruns.cmd_cusp_defect),
    "separate": ("/experiments/separate", schemas.SeparateRequest, hruns.cmd_separate),
    "ls-check": ("/ls/check", schemas.LSCheckRequest, hruns.cmd_ls_check),
    "ls-run": ("/ls/run", schemas.LSRunRequest, hruns.cmd_ls_run),
    "report": ("/report", schemas.ReportRequest, hruns.cmd_report),
}


def _execute(command, overrides, config_path=None, server=None):
    """Merge defaults <- config file <- explicit flags, then dispatch."""
    path, model, local = ENDPOINTS[command]
    try:
        values = {}
        if config_path:
            raw = hio.read_config(config_path)
            fields = model.model_fields
            for key, text in raw.items():
                if key not in fields:
                    raise hio.ConfigError(f"unknown config key {key!r} for {command}")
                values[key] = _coerce(text)
        values.update({k: v for k, v in overrides.items() if v is not None})
        req = model(**values)
    except ValueError as e:
        raise click.ClickException(str(e))
    if server:
        import httpx

        resp = httpx.post(server.rstrip("/") + path, json=req.model_dump(), timeout=None)
        if resp.status_code != 200:
            raise click.ClickException(f"server error {resp.status_code}: {resp.text}")
        return req, resp.json()
    try:
        return req, local(req).model_dump()
    except ValueError as e:
        raise click.ClickException(str(e))


def _coerce(text):
    """Config values: JSON where it parses, bare string otherwise."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _emit(ctx, command, data, out):
    if out is None:
        click.echo(hio.dump_json(data), nl=False)
        return
    out = Path(out)
    if out.suffix == ".csv" and "columns" in data and "rows" in data:
        hio.dump_csv(data["columns"], data["rows"], out, name=command)
    elif out.suffix == ".jsonl" and command == "ls-run":
        header = {k: data[k] for k in
                  ("seed", "harnack", "separation", "truncation_mass", "version")}
        header["runs"] = data["config"]["runs"]
        hio.dump_jsonl(data["measure_rows"], out, header=header)
    else:
        hio.dump_json(data, out)
    click.echo(f"wrote {out}")


def _finish(ctx, data):
    if data.get("passed") is False:
        first = next((c for c in data.get("checks", []) if not c["passed"]), None)
        if first is None and "sections" in data:
            for name, sec in data["sections"].items():
                first = next((c for c in sec["checks"] if not c["passed"]), None)
                if first:
                    break
        if first:
            click.echo(f"FAILED: {first['check']}: {first['statement']} "
                       f"(value {first.get('value')}, tolerance {first.get('tolerance')})",
                       err=True)
        ctx.exit(2)


def common_options(fn):
    fn = click.option("--config", "config_path", type=click.Path(exists=True),
                      help="key = value configuration file")(fn)
    fn = click.option("--server", help="base URL of a running service")(fn)
    fn = click.option("--out", type=click.Path(), help="output path")(fn)
    return fn


@click.group()
@click.version_option(version=hypwalk.__version__)
def main():
    """Hyperbolic-space verification suites and orbit random-walk experiments."""


@main.command("verify-geometry")
@click.option("--field", "fields", multiple=True, type=click.Choice(["R", "C", "H"]))
@click.option("--dim", "dims", multiple=True, type=int)
@click.option("--samples", type=int)
@click.option("--seed", type=int)
@click.option("--tol", type=float)
@common_options
@click.pass_context
def verify_geometry(ctx, fields, dims, samples, seed, tol, out, server, config_path):
    """Run the metric identity suites."""
    req, data = _execute("verify-geometry", {
        "fields": list(fields) or None, "dims": list(dims) or None,
        "samples": samples, "seed": seed, "tol": tol}, config_path, server)
    _emit(ctx, "verify-geometry", data, out)
    _finish(ctx, data)


@main.command("roots-check")
@click.option("--field", "fields", multiple=True, type=click.Choice(["R", "C", "H"]))
@click.option("--dim", "dims", multiple=True, type=int)
@click.option("--samples", type=int)
@click.option("--seed", type=int)
@click.option("--tol", type=float)
@common_options
@click.pass_context
def roots_check(ctx, fields, dims, samples, seed, tol, out, server, config_path):
    """Verify the curvature-operator spectrum on each space."""
    req, data = _execute("roots-check", {
        "fields": list(fields) or None, "dims": list(dims) or None,
        "samples": samples, "seed": seed, "tol": tol}, config_path, server)
    _emit(ctx, "roots-check", data, out)
    _finish(ctx, data)


@main.command("bisector-cloud")
@click.option("--field", type=click.Choice(["R", "C", "H"]))
@click.option("--dim", type=int)
@click.option("--samples", type=int)
@click.option("--seed", type=int)
@click.option("--spread", type=float)
@common_options
@click.pass_context
def bisector_cloud(ctx, field, dim, samples, seed, spread, out, server, config_path):
    """Export a point cloud with projections and leaf coordinates."""
    req, data = _execute("bisector-cloud", {
        "field": field, "dim": dim, "samples": samples, "seed": seed,
        "spread": spread}, config_path, server)
    _emit(ctx, "bisector-cloud", data, out)


@main.command("walk-green")
@click.option("--measure", "measure_path", type=click.Path(exists=True),
              help="JSON-lines step measure; default is the uniform generator walk")
@click.option("--pair", "pairs", multiple=True, nargs=2,
              help="word pair x y, e.g. --pair e a")
@click.option("--horizon", type=int)
@common_options
@click.pass_context
def walk_green(ctx, measure_path, pairs, horizon, out, server, config_path):
    """Tabulate truncated Green's function values."""
    req, data = _execute("walk-green", {
        "measure": _read_measure(measure_path), "pairs": [list(p) for p in pairs] or None,
        "horizon": horizon}, config_path, server)
    _emit(ctx, "walk-green", data, out)


@main.command("cusp-defect")
@click.option("--group", type=click.Choice(["gamma2"]))
@click.option("--measure", "measure_path", type=click.Path(exists=True))
@click.option("--orbit-length", type=int)
@common_options
@click.pass_context
def cusp_defect(ctx, group, measure_path, orbit_length, out, server, config_path):
    """Busemann minimizers and the harmonicity defect at the cusp."""
    req, data = _execute("cusp-defect", {
        "group": group, "measure": _read_measure(measure_path),
        "orbit_length": orbit_length}, config_path, server)
    _emit(ctx, "cusp-defect", data, out)
    _finish(ctx, data)


@main.command("separate")
@click.option("--group", type=click.Choice(["gamma2"]))
@click.option("--pairs", type=int)
@click.option("--orbit-length", type=int)
@click.option("--seed", type=int)
@click.option("--tol", type=float)
@click.option("--orbit-out", type=click.Path(),
              help="also export the truncated orbit as CSV (word, x, y)")
@common_options
@click.pass_context
def separate(ctx, group, pairs, orbit_length, seed, tol, orbit_out, out, server, config_path):
    """Find orbit points separating sampled boundary pairs."""
    req, data = _execute("separate", {
        "group": group, "pairs": pairs, "orbit_length": orbit_length,
        "seed": seed, "tol": tol}, config_path, server)
    if orbit_out:
        _write_orbit_csv(req.group, req.orbit_length, orbit_out)
    _emit(ctx, "separate", data, out)
    _finish(ctx, data)


@main.command("ls-check")
@click.option("--group", type=click.Choice(["gamma2"]))
@click.option("--r-factor", type=float)
@click.option("--v-factor", type=float)
@click.option("--samples", "density_samples", type=int)
@click.option("--seed", type=int)
@common_options
@click.pass_context
def ls_check(ctx, group, r_factor, v_factor, density_samples, seed, out, server, config_path):
    """Validate a ball datum: nesting, disjointness, density bound, balance, recurrence."""
    req, data = _execute("ls-check", {
        "group": group, "r_factor": r_factor, "v_factor": v_factor,
        "density_samples": density_samples, "seed": seed}, config_path, server)
    _emit(ctx, "ls-check", data, out)
    _finish(ctx, data)


@main.command("ls-run")
@click.option("--group", type=click.Choice(["gamma2"]))
@click.option("--r-factor", type=float)
@click.option("--v-factor", type=float)
@click.option("--runs", type=int)
@click.option("--seed", type=int)
@click.option("--trace", "trace_path", type=click.Path(),
              help="also dump walk-on-spheres paths of a few runs as CSV")
@common_options
@click.pass_context
def ls_run(ctx, group, r_factor, v_factor, runs, seed, trace_path, out, server, config_path):
    """Run the discretization and report the empirical step measure."""
    req, data = _execute("ls-run", {
        "group": group, "r_factor": r_factor, "v_factor": v_factor,
        "runs": runs, "seed": seed}, config_path, server)
    if trace_path:
        _write_trace(req, trace_path)
    _emit(ctx, "ls-run", data, out)
    _finish(ctx, data)


@main.command("report")
@click.option("--seed", type=int)
@click.option("--scale", type=float)
@common_options
@click.pass_context
def report(ctx, seed, scale, out, server, config_path):
    """Run every suite at reduced size and emit one combined report."""
    req, data = _execute("report", {"seed": seed, "scale": scale}, config_path, server)
    _emit(ctx, "report", data, out)
    _finish(ctx, data)


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8811, show_default=True, type=int)
def serve(host, port):
    """Start the verification service."""
    import uvicorn

    uvicorn.run("hypwalk.service:app", host=host, port=port)


def _write_orbit_csv(group, orbit_length, path):
    from hypwalk import lattice

    fixture = lattice.group_fixture(group)
    orbit = fixture.orbit(N=orbit_length)
    rows = [[lattice.word_to_str(w), float(z.real), float(z.imag)]
            for w, z in zip(orbit.words, orbit.points)]
    hio.dump_csv(["word", "x", "y"], rows, path, name="orbit")
    click.echo(f"wrote {path}")


def _read_measure(path):
    if path is None:
        return None
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        obj = json.loads(line)
        if "meta" in obj:
            continue
        rows.append({"word": obj["word"], "p": obj["p"]})
    return rows


def _write_trace(req: schemas.LSRunRequest, path, n_paths=20, budget=2000):
    """Dump (path_id, step, x, y) rows for a few seeded walk-on-spheres runs."""
    from hypwalk import brownian, lattice, lyons_sullivan
    from hypwalk.utils import run_stream

    fixture = lattice.group_fixture(req.group)
    sep = fixture.min_separation()
    data = lyons_sullivan.build_ls_data(fixture, req.r_factor * sep, req.v_factor * sep)
    rows = []
    for pid in range(n_paths):
        rng = run_stream(req.seed, 2**32 + pid)
        start = brownian.exit_sample(fixture.basepoint, data.base_ball(), rng).point
        trace = []
        brownian.walk_on_spheres_until_hit_F(start, fixture, data.r_F, rng,
                                             budget=budget, trace=trace)
        for step, (word, z) in enumerate(trace):
            rows.append([pid, step, z.real, z.imag])
    hio.dump_csv(["path_id", "step", "x", "y"], rows, path, name="wos-trace")
    click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()

"""Command line interface: ``slopegaps <command> --n N ...``.

Every command builds a RunConfig and hands it to ``run``, which writes the
artifact to ``--out`` (``-`` for standard output) and returns the exit
status. Library errors end the run with status 1 and a message on stderr.
"""
import logging
import math
import sys
from typing import Callable, Dict, Tuple

import click
import numpy as np

from . import __version__
from . import checks, distribution, enumeration, geometry, nondiff, section
from .config import RunConfig
from .errors import ConfigError, SlopeGapError
from .funcs import csv_lines, dumps, format_real, list_to_str
from .render import html_report, text_table

logger = logging.getLogger(__name__)

Handler = Callable[[RunConfig], Tuple[str, bool]]
HANDLERS: Dict[str, Handler] = {}


def handler(name: str):
    def wrapper(func: Handler) -> Handler:
        HANDLERS[name] = func
        return func

    return wrapper


def _pair(vector) -> str:
    return f"({format_real(vector[0])}, {format_real(vector[1])})"


@handler("geometry")
def geometry_report(config: RunConfig) -> Tuple[str, bool]:
    n = config.get("n")
    staircase = geometry.build_staircase(n)
    s_prime, r_prime, s_two = geometry.veech_generators(n)
    payload = {
        "n": n,
        "h": staircase.h,
        "v": staircase.v,
        "aspect": staircase.aspect,
        "left_vertices": [list(p) for p in staircase.left_vertices],
        "right_vertices": [list(p) for p in staircase.right_vertices],
        "normalizing_matrix": geometry.normalizing_matrix(n),
        "S_prime": s_prime,
        "R_prime": r_prime,
        "S2": s_two,
    }
    if config.get("format") == "json":
        return dumps(payload), True
    lines = [
        f"n = {n}",
        f"h = {list_to_str(list(staircase.h), ', ')}",
        f"v = {list_to_str(list(staircase.v), ', ')}",
        f"cylinder ratio = {format_real(staircase.aspect)}",
        "left vertices: " + " ".join(_pair(p) for p in staircase.left_vertices),
        "right vertices: " + " ".join(_pair(p) for p in staircase.right_vertices),
    ]
    for name in ("normalizing_matrix", "S_prime", "R_prime", "S2"):
        rows = payload[name]
        lines.append(f"{name} = [{_pair(rows[0])}, {_pair(rows[1])}]")
    return "\n".join(lines) + "\n", True


@handler("section")
def section_report(config: RunConfig) -> Tuple[str, bool]:
    n = config.get("n")
    poincare = section.poincare_section(n)
    cells = [
        {
            "label": cell.label,
            "component": cell.component,
            "winner": list(cell.winner),
            "constraints": [{"a": c.a, "b": c.b, "relation": c.relation} for c in cell.constraints],
            "polygon": [list(p) for p in cell.polygon],
            "area": cell.area,
        }
        for cell in poincare.cells
    ]
    if config.get("format") == "json":
        return dumps({"n": n, "area": poincare.area, "cells": cells}), True
    rows = [(c["label"], _pair(c["winner"]), format_real(c["area"]), len(c["polygon"])) for c in cells]
    table = text_table(("cell", "winner", "area", "corners"), rows)
    return table + f"total area {format_real(poincare.area)}\n", True


@handler("rt-eval")
def return_time_report(config: RunConfig) -> Tuple[str, bool]:
    component = section.SectionComponent(config.get("component"))
    point = section.SectionPoint(component, float(config.get("x")), float(config.get("y")))
    region = section.classify(config.get("n"), point)
    value = section.return_time(config.get("n"), point)
    logger.info("%s lies in %s with winner %s", point, region.label, tuple(region.winner))
    return format_real(value) + "\n", True


@handler("distribution")
def distribution_report(config: RunConfig) -> Tuple[str, bool]:
    grid = np.linspace(config.get("t_min"), config.get("t_max"), config.get("samples"))
    table = distribution.sample_distribution(config.get("n"), grid, config.get("refine_stamps"))
    logger.info("trapezoid mass on [%g, %g]: %.9f", grid[0], grid[-1], table.integrated_pdf())
    if config.get("format") == "json":
        return table.to_json(), True
    return table.to_csv(), True


@handler("volume")
def volume_report(config: RunConfig) -> Tuple[str, bool]:
    n = config.get("n")
    computed = distribution.covolume(n, config.get("tol"))
    reference = distribution.reference_covolume(n)
    error = abs(computed - reference) / reference
    if config.get("format") == "json":
        return dumps({"n": n, "computed": computed, "reference": reference, "relative_error": error}), True
    return (
        f"computed {format_real(computed)}\n"
        f"reference {format_real(reference)}\n"
        f"relative error {error:.3e}\n"
    ), True


@handler("nondiff")
def nondiff_report(config: RunConfig) -> Tuple[str, bool]:
    n = config.get("n")
    kinks = nondiff.kink_times(n, config.get("deriv_tol"))
    stamps = nondiff.crossing_stamps(n)
    payload = {"n": n, "count": len(kinks), "kinks": kinks, "stamps": stamps}
    if n >= 4:
        payload["bounds"] = nondiff.bounds(n)
    if config.get("format") == "json":
        return dumps(payload), True
    lines = [f"kink count {len(kinks)}"]
    if "bounds" in payload:
        lower, upper = payload["bounds"]
        lines.append(f"bounds {lower:g} .. {upper}")
    lines += [format_real(t) for t in kinks]
    return "\n".join(lines) + "\n", True


@handler("empirical")
def empirical_report(config: RunConfig) -> Tuple[str, bool]:
    n, k = config.get("n"), config.get("k")
    sample = enumeration.slope_gaps(n, k, config.get("depth"))
    statistic = enumeration.ks_distance(sample)
    if config.get("dump_vectors"):
        with click.open_file(config.get("dump_vectors"), "wb") as stream:
            stream.write(csv_lines(("x", "y"), sample.vectors).encode("utf-8"))
    payload = {
        "n": n,
        "k": k,
        "count": sample.count,
        "ratio": sample.count / k ** 2,
        "expected_ratio": distribution.expected_gap_count_ratio(n),
        "ks": statistic,
        "depth": sample.enumeration.depth_reached,
        "stable_depth": sample.enumeration.stable_depth,
        "stable": sample.stable,
        "warnings": sample.warnings,
    }
    if config.get("format") == "json":
        return dumps(payload), True
    return "".join(f"{key} {list_to_str(value)}\n" for key, value in payload.items() if key != "warnings"), True


@handler("verify")
def verify_report(config: RunConfig) -> Tuple[str, bool]:
    n = config.get("n")
    results = checks.run_suite(checks.default_suite(n, config.get("seed")))
    passed = all(result.passed for result in results)
    rows = [(result.name, result.passed, result.detail) for result in results]
    summary = f"{sum(r.passed for r in results)}/{len(results)} checks passed"
    if config.get("format") == "html":
        return html_report(f"slopegaps verify n={n}", ("check", "status", "detail"), rows, summary), passed
    if config.get("format") == "json":
        return dumps({"n": n, "passed": passed, "checks": results}), passed
    return text_table(("check", "status", "detail"), rows) + summary + "\n", passed


@handler("convergence")
def convergence_report(config: RunConfig) -> Tuple[str, bool]:
    rows = enumeration.convergence_study(config.get("n"), config.get("ks"), config.get("depth"))
    if config.get("format") == "json":
        return dumps({"n": config.get("n"), "rows": rows}), True
    numeric = [(row.k, row.count, row.ratio, row.ks) for row in rows]
    if config.get("format") == "csv":
        return csv_lines(("k", "N", "ratio", "ks"), numeric), True
    return text_table(("k", "N", "N/k^2", "KS"), [[f"{v:g}" for v in row] for row in numeric]), True


@handler("extrema")
def extrema_report(config: RunConfig) -> Tuple[str, bool]:
    found = distribution.find_local_extrema(config.get("n"), config.get("t_min"), config.get("t_max"), config.get("grid"))
    if config.get("format") == "json":
        return dumps({"n": config.get("n"), "extrema": found}), True
    rows = [(e.kind, format_real(e.t), format_real(e.value), format_real(e.t * e.value)) for e in found]
    return text_table(("kind", "t", "pdf", "t*pdf"), rows), True


def run(config: RunConfig) -> int:
    """Execute ``config`` and write its artifact; returns the exit status."""
    logger.debug("running %r", config)
    try:
        payload, ok = HANDLERS[config.get("command")](config)
    except SlopeGapError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    with click.open_file(config.get("out"), "wb") as stream:
        stream.write(payload.encode("utf-8"))
    return 0 if ok else 1


def execute(**settings) -> None:
    context = click.get_current_context()
    try:
        config = RunConfig(**settings)
    except ConfigError as exc:
        raise click.UsageError(str(exc), ctx=context) from exc
    context.exit(run(config))


n_option = click.option("--n", type=click.IntRange(min=3), required=True, help="Half the number of sides of the polygon.")
out_option = click.option("--out", default="-", show_default=True, help="Output path, - for stdout.")
json_option = click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of text.")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("-v", "--verbose", count=True, help="-v for progress, -vv for debug output.")
@click.version_option(__version__, prog_name="slopegaps")
def cli(verbose: int) -> None:
    """Slope gap distribution of saddle connections on the regular 2n-gon."""
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(level)


@cli.command("geometry")
@n_option
@json_option
@out_option
def geometry_command(n, as_json, out):
    """Edge lengths, vertices and Veech generators of the staircase."""
    execute(command="geometry", n=n, format="json" if as_json else "text", out=out)


@cli.command("section")
@n_option
@json_option
@out_option
def section_command(n, as_json, out):
    """Cells of the Poincaré section with their winning vectors."""
    execute(command="section", n=n, format="json" if as_json else "text", out=out)


@cli.command("rt-eval")
@n_option
@click.option("--component", type=click.Choice(["omega1", "omega2"]), default="omega1", show_default=True)
@click.option("--x", type=float, required=True)
@click.option("--y", type=float, required=True)
@out_option
def rt_eval_command(n, component, x, y, out):
    """Return time R(x, y) at one section point."""
    if not math.isfinite(x) or not math.isfinite(y):
        raise click.BadParameter("coordinates must be finite")
    execute(command="rt-eval", n=n, component=component, x=x, y=y, out=out)


@cli.command("distribution")
@n_option
@click.option("--t-min", type=float, default=1.0, show_default=True)
@click.option("--t-max", type=float, default=20.0, show_default=True)
@click.option("--samples", type=int, default=901, show_default=True)
@click.option("--refine-stamps", is_flag=True, help="Add crossing stamps inside the range to the grid.")
@click.option("--format", "format_", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@out_option
def distribution_command(n, t_min, t_max, samples, refine_stamps, format_, out):
    """Sampled pdf and cdf of the renormalized slope gaps."""
    execute(
        command="distribution",
        n=n,
        t_min=t_min,
        t_max=t_max,
        samples=samples,
        refine_stamps=refine_stamps,
        format=format_,
        out=out,
    )


@cli.command("volume")
@n_option
@click.option("--tol", type=float, default=1e-8, show_default=True)
@json_option
@out_option
def volume_command(n, tol, as_json, out):
    """Covolume from integrating R over the section, against (n-1)π²/n."""
    execute(command="volume", n=n, tol=tol, format="json" if as_json else "text", out=out)


@cli.command("nondiff")
@n_option
@click.option("--deriv-tol", type=float, default=1e-4, show_default=True)
@json_option
@out_option
def nondiff_command(n, deriv_tol, as_json, out):
    """Points where the density is not differentiable."""
    execute(command="nondiff", n=n, deriv_tol=deriv_tol, format="json" if as_json else "text", out=out)


@cli.command("empirical")
@n_option
@click.option("--k", type=float, default=40.0, show_default=True, help="Strip width.")
@click.option("--depth", type=int, default=10_000, show_default=True, help="Maximum search depth.")
@click.option("--dump-vectors", default=None, help="Write the enumerated vectors as CSV.")
@json_option
@out_option
def empirical_command(n, k, depth, dump_vectors, as_json, out):
    """Enumerated slope gaps against the analytic distribution."""
    execute(
        command="empirical",
        n=n,
        k=k,
        depth=depth,
        dump_vectors=dump_vectors,
        format="json" if as_json else "text",
        out=out,
    )


@cli.command("verify")
@n_option
@click.option("--format", "format_", type=click.Choice(["text", "html", "json"]), default="text", show_default=True)
@click.option("--seed", type=int, default=20240601, show_default=True)
@out_option
def verify_command(n, format_, seed, out):
    """Run every invariant check; exit status 0 only if all pass."""
    execute(command="verify", n=n, format=format_, seed=seed, out=out)


@cli.command("convergence")
@n_option
@click.option("--k", "ks", type=float, multiple=True, default=(10.0, 20.0, 40.0), show_default=True)
@click.option("--depth", type=int, default=10_000, show_default=True)
@click.option("--format", "format_", type=click.Choice(["text", "csv", "json"]), default="text", show_default=True)
@out_option
def convergence_command(n, ks, depth, format_, out):
    """N(k)/k² and KS distance for growing strip widths."""
    execute(command="convergence", n=n, ks=tuple(ks), depth=depth, format=format_, out=out)


@cli.command("extrema")
@n_option
@click.option("--t-min", type=float, default=1.0, show_default=True)
@click.option("--t-max", type=float, default=20.0, show_default=True)
@click.option("--grid", type=int, default=2000, show_default=True)
@json_option
@out_option
def extrema_command(n, t_min, t_max, grid, as_json, out):
    """Local maxima and minima of the density."""
    execute(
        command="extrema",
        n=n,
        t_min=t_min,
        t_max=t_max,
        grid=grid,
        format="json" if as_json else "text",
        out=out,
    )


def main() -> None:
    cli(prog_name="slopegaps")

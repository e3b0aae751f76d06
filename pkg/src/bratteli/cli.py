"""``bratteli`` command-line front end.

Every subcommand builds a :class:`Report` (rows plus summary fields) and
renders it as a table, CSV or JSON lines.  Exact values print as ``p/q``;
``--decimals K`` adds ``~``-suffixed annotation columns that nothing reads back.

Exit codes: 0 success (undecided verdicts included), 1 usage or parse error,
2 failed validation or check, 3 enumeration guard tripped.
"""

from __future__ import annotations

import csv
import io
import json
import random
import shlex
import sys
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Optional

import click

from .diagram import (
    DiagramSpec,
    FinitePath,
    RuleSpec,
    classc_diagonal,
    height,
    path_count_band,
    path_count_bruteforce_all,
)
from .errors import BratteliError, Intractable
from .measures import (
    FiniteVec,
    center_stochastic_trace,
    classc_g_center,
    depossel_ratio_trace,
    ecs_subdiagram_extension,
    extension_report,
    fourier_check,
    is_unimodal,
    markov_tail_invariance_check,
    no_measure_trace,
    reciprocal_series_diverges,
    transfer,
    verify_tail_invariant,
)
from .rules import Constant
from .specfile import ParseError, SpecDocument, SpecError, load_spec, parse_vectors
from .toeplitz import row_sum
from .vershik import continuity_check, minimal_prefix, orbit, reverse_order

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_INTRACTABLE = 0, 1, 2, 3


class CheckFailed(Exception):
    """Raised after the report is printed when a requested check did not hold."""


@dataclass
class Report:
    command: str
    columns: list[str]
    rows: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    failed: bool = False


def _exact(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, (list, tuple)):
        return " ".join(_exact(v) for v in value)
    return str(value)


def _decimal(value: Fraction, places: int) -> str:
    with localcontext() as ctx:
        ctx.prec = places + 40
        q = Decimal(value.numerator) / Decimal(value.denominator)
        return str(q.quantize(Decimal(1).scaleb(-places)))


def _annotated(record: dict, places: Optional[int]) -> dict:
    out = {}
    for key, value in record.items():
        out[key] = value
        if places is not None and isinstance(value, Fraction):
            out[f"{key}~"] = _decimal(value, places)
    return out


def render(report: Report, fmt: str, places: Optional[int]) -> str:
    rows = [_annotated(r, places) for r in report.rows]
    summary = _annotated(report.summary, places)
    columns = list(rows[0]) if rows else []
    if fmt == "jsonl":
        lines = [json.dumps({"record": "command", "command": report.command})]
        lines += [json.dumps({"record": "row", **{k: _exact(v) for k, v in r.items()}}) for r in rows]
        lines.append(json.dumps({"record": "summary", **{k: _exact(v) for k, v in summary.items()}}))
        return "\n".join(lines) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns + list(summary))
        for r in rows or [{}]:
            writer.writerow([_exact(r.get(c)) for c in columns] + [_exact(v) for v in summary.values()])
        return buf.getvalue()
    lines = [f"# {report.command}"]
    if rows:
        cells = [[_exact(r.get(c)) for c in columns] for r in rows]
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(columns)]
        lines.append("  ".join(c.rjust(w) for c, w in zip(columns, widths)).rstrip())
        lines += ["  ".join(v.rjust(w) for v, w in zip(row, widths)).rstrip() for row in cells]
    lines += [f"{k}: {_exact(v)}" for k, v in summary.items()]
    return "\n".join(lines) + "\n"


@dataclass
class Context:
    spec_path: Optional[str]
    fmt: str
    decimals: Optional[int]
    seed: int
    argv: list[str]
    _doc: Optional[SpecDocument] = None

    @property
    def doc(self) -> SpecDocument:
        if self._doc is None:
            if self.spec_path is None:
                raise click.UsageError("this command needs --spec FILE")
            self._doc = load_spec(self.spec_path)
        return self._doc

    @property
    def diagram(self) -> DiagramSpec:
        return self.doc.diagram

    def named(self, table: str, name: str):
        entries = getattr(self.doc, table)
        if name not in entries:
            known = ", ".join(sorted(entries)) or "none"
            raise click.UsageError(f"no {table[:-1]} named {name!r} (known: {known})")
        return entries[name]

    def emit(self, report: Report) -> None:
        click.echo(render(report, self.fmt, self.decimals), nl=False)
        if report.failed:
            raise CheckFailed()

    def report(self, columns, **summary) -> Report:
        return Report("bratteli " + shlex.join(self.argv), columns, summary=summary)


pass_ctx = click.make_pass_decorator(Context)


@click.group()
@click.option("--spec", "spec_path", type=click.Path(dir_okay=False), help="Diagram specification file.")
@click.option("--format", "fmt", type=click.Choice(["table", "csv", "jsonl"]), default="table", show_default=True)
@click.option("--decimals", type=click.IntRange(0, 200), default=None, help="Add decimal annotation columns.")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for randomized checks.")
@click.pass_context
def cli(ctx, spec_path, fmt, decimals, seed):
    """Exact computations on horizontally stationary Bratteli diagrams."""
    argv = ctx.obj.get("argv", []) if isinstance(ctx.obj, dict) else []
    ctx.obj = Context(spec_path, fmt, decimals, seed, list(argv))


@cli.command()
@click.option("--to", "to", type=click.IntRange(0), required=True)
@pass_ctx
def heights(c: Context, to):
    """Tower heights H(n) = r_0 ... r_{n-1}."""
    rep = c.report(["n", "height"])
    rep.rows = [{"n": n, "height": height(c.diagram, n)} for n in range(to + 1)]
    c.emit(rep)


@cli.command()
@click.option("--from", "start", type=click.IntRange(0), required=True)
@click.option("--span", type=click.IntRange(1), required=True)
@click.option("--oracle", is_flag=True, help="Cross-check against explicit path enumeration.")
@pass_ctx
def pathcount(c: Context, start, span, oracle):
    """Path-count band of F_{n+m-1} ... F_n."""
    band = path_count_band(c.diagram, start, span)
    counts = path_count_bruteforce_all(c.diagram, start, span) if oracle else None
    columns = ["offset", "count"] + (["oracle", "match"] if oracle else [])
    rep = c.report(columns)
    offsets = set(band.offsets()) | set(counts or ())
    mismatches = 0
    for k in sorted(offsets):
        row = {"offset": k, "count": band[k]}
        if oracle:
            row["oracle"] = counts.get(k, 0)
            row["match"] = row["oracle"] == band[k]
            mismatches += not row["match"]
        rep.rows.append(row)
    rep.summary["row_sum"] = row_sum(band)
    if oracle:
        rep.summary["oracle"] = "agree" if mismatches == 0 else f"{mismatches} mismatches"
        rep.failed = mismatches > 0
    c.emit(rep)


@cli.command()
@click.option("--odometer", "name", required=True)
@click.option("--horizon", type=click.IntRange(1), required=True)
@pass_ctx
def extension(c: Context, name, horizon):
    """Extension of an odometer's measure: sigma, alpha trace and verdict."""
    odo = c.named("odometers", name)
    result = extension_report(c.diagram, odo, horizon)
    rep = c.report(["n", "vertex", "f", "sigma", "alpha"])
    for n, (sigma, alpha) in enumerate(zip(result.sigmas, result.alphas)):
        rep.rows.append(
            {"n": n, "vertex": odo.vertex(n), "f": odo.coefficient(c.diagram, n), "sigma": sigma, "alpha": alpha}
        )
    rep.summary.update(
        partial_value=result.partial_value,
        direct_value=result.direct_value,
        verdict=result.verdict_label,
        reason=result.reason,
    )
    c.emit(rep)


@cli.command("ecs-extension")
@click.option("--window", "name", required=True)
@click.option("--horizon", type=click.IntRange(1), required=True)
@pass_ctx
def ecs_extension(c: Context, name, horizon):
    """Extension of the equal-column-sum measure of a windowed subdiagram."""
    windows = c.named("windows", name)
    result = ecs_subdiagram_extension(c.diagram, windows, horizon)
    rep = c.report(["n", "window", "column_sum", "sigma", "alpha"])
    for n, (cs, sigma, alpha) in enumerate(zip(result.extras["column_sums"], result.sigmas, result.alphas)):
        w = windows.window(n)
        rep.rows.append({"n": n, "window": f"{w[0]}..{w[-1]}", "column_sum": cs, "sigma": sigma, "alpha": alpha})
    rep.summary.update(
        partial_value=result.partial_value,
        vertical_share=result.extras["vertical_share"],
        verdict=result.verdict_label,
        reason=result.reason,
    )
    c.emit(rep)


def _classc_rule(c: Context):
    rule = classc_diagonal(c.diagram)
    if rule is None:
        raise SpecError("the diagram is not tridiagonal with off-diagonal ones")
    return rule


@cli.command()
@click.option(
    "--check",
    "checks",
    required=True,
    help="Comma-separated: gcenter, unimodal, nomeasure, depossel, zerolimit.",
)
@click.option("--from", "start", type=click.IntRange(0), default=0, show_default=True)
@click.option("--span", type=click.IntRange(1), default=8, show_default=True)
@click.option("--l", "l", type=click.IntRange(0), default=0, show_default=True, help="Subset size for nomeasure.")
@click.option("--target", type=int, default=0, show_default=True, help="Target vertex j for depossel.")
@pass_ctx
def classc(c: Context, checks, start, span, l, target):
    """Checks specific to tridiagonal diagrams 1, a_n, 1."""
    rule = _classc_rule(c)
    spec = c.diagram
    names = [s.strip() for s in checks.split(",") if s.strip()]
    known = {"gcenter", "unimodal", "nomeasure", "depossel", "zerolimit"}
    bad = [s for s in names if s not in known]
    if bad or not names:
        raise click.UsageError(f"unknown check(s): {', '.join(bad) or '(none)'}")
    for check in names:
        if check == "gcenter":
            rep = c.report(["m", "formula", "convolution", "match"], check="gcenter")
            for m in range(1, span + 1):
                f = classc_g_center(rule, start, m)
                conv = path_count_band(spec, start, m)[0]
                rep.rows.append({"m": m, "formula": f, "convolution": conv, "match": f == conv})
            rep.failed = not all(r["match"] for r in rep.rows)
        elif check == "unimodal":
            rep = c.report(["m", "band", "unimodal"], check="unimodal")
            for m in range(1, span + 1):
                band = path_count_band(spec, start, m)
                rep.rows.append({"m": m, "band": str(band), "unimodal": is_unimodal(band)})
            rep.failed = not all(r["unimodal"] for r in rep.rows)
        elif check == "nomeasure":
            rep = c.report(["m", "term"], check="nomeasure", l=l)
            for m, term in enumerate(no_measure_trace(rule, start, l, span), start=1):
                rep.rows.append({"m": m, "term": term})
            diverges = reciprocal_series_diverges(rule)
            rep.summary["reciprocal_series"] = {True: "diverges", False: "converges", None: "unknown"}[diverges]
        elif check == "zerolimit":
            rep = c.report(["m", "center"], check="zerolimit")
            trace = center_stochastic_trace(rule, start, span)
            rep.rows = [{"m": m, "center": g} for m, g in enumerate(trace, start=1)]
            rep.summary["strictly_decreasing"] = all(b < a for a, b in zip(trace, trace[1:]))
        else:
            rep = c.report(["m", "paths", "mu_hat", "nu", "ratio", "alpha_partial"], check="depossel")
            alpha = _alpha_head(rule, start)
            for step in depossel_ratio_trace(spec, 0, (start, target), span):
                a = rule(start + step.m - 1)
                alpha *= Fraction(a + 2) / a
                rep.rows.append(
                    {
                        "m": step.m,
                        "paths": step.paths,
                        "mu_hat": step.mu_hat,
                        "nu": step.nu,
                        "ratio": step.ratio,
                        "alpha_partial": alpha,
                    }
                )
        c.emit(rep)


def _alpha_head(rule, n: int) -> Fraction:
    out = Fraction(1)
    for l in range(n):
        out *= (rule(l) + 2) / rule(l)
    return out


def _load_vectors(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_vectors(fh.read())
    except OSError as exc:
        raise click.UsageError(f"cannot read vectors file: {exc}") from None


@cli.command("tail-invariant")
@click.option("--vectors", "path", required=True, type=click.Path(dir_okay=False))
@click.option("--horizon", type=click.IntRange(1), required=True)
@pass_ctx
def tail_invariant(c: Context, path, horizon):
    """Check F_n^T p^(n+1) = p^(n) for the levels of a vectors file."""
    vectors = _load_vectors(path)
    result = verify_tail_invariant(c.diagram, vectors, horizon)
    rep = c.report(["n", "given", "pulled_back", "ok"])
    for n in range(horizon):
        pulled = transfer(c.diagram, vectors[n + 1], n)
        rep.rows.append({"n": n, "given": _vec_text(vectors[n]), "pulled_back": _vec_text(pulled), "ok": pulled == vectors[n]})
    rep.summary.update(tail_invariant=result.ok, failed_level=result.failed_level)
    rep.failed = not result.ok
    c.emit(rep)


def _vec_text(v) -> str:
    return f"finite {v.band}" if isinstance(v, FiniteVec) else f"constant {v.value}"


@cli.command("fourier-check")
@click.option("--vectors", "path", required=True, type=click.Path(dir_okay=False))
@pass_ctx
def fourier_check_cmd(c: Context, path):
    """Compare the Laurent-product form with the convolution form, level by level."""
    vectors = _load_vectors(path)
    if len(vectors) < 2 or not all(isinstance(v, FiniteVec) for v in vectors):
        raise SpecError("fourier-check needs at least two finitely supported vectors")
    rep = c.report(["n", "fourier", "convolution", "agree"])
    for n in range(len(vectors) - 1):
        f = fourier_check(c.diagram, vectors[n + 1], vectors[n], n)
        conv = transfer(c.diagram, vectors[n + 1], n) == vectors[n]
        rep.rows.append({"n": n, "fourier": f, "convolution": conv, "agree": f == conv})
    rep.summary["all_hold"] = all(r["fourier"] and r["convolution"] for r in rep.rows)
    rep.failed = not rep.summary["all_hold"]
    c.emit(rep)


@cli.command()
@click.option("--kernel", "name", required=True)
@click.option("--depth", type=click.IntRange(1, 8), required=True)
@pass_ctx
def markov(c: Context, name, depth):
    """Tail invariance of a horizontally invariant Markov measure."""
    kernel = c.named("kernels", name)
    result = markov_tail_invariance_check(c.diagram, kernel, depth)
    rep = c.report([], tail_invariant=result.ok, uniform=kernel.is_uniform(c.diagram))
    if not result.ok:
        a, b = result.witness
        rep.summary.update(
            witness_depth=result.depth,
            witness_a=_path_text(a),
            witness_b=_path_text(b),
            value_a=result.values[0],
            value_b=result.values[1],
        )
    c.emit(rep)


def _path_text(p: FinitePath) -> str:
    return f"{p.base}|" + " ".join(f"{k}:{cp}" for k, cp in p.edges)


@cli.command()
@click.option("--order", "name", required=True)
@click.argument("action", type=click.Choice(["orbit", "continuity", "reverse-continuity"]))
@click.option("--horizon", type=click.IntRange(2), default=6, show_default=True)
@click.option("--depth", type=click.IntRange(1), default=2, show_default=True)
@click.option("--terminal", type=int, default=0, show_default=True)
@click.option("--steps", type=click.IntRange(1), default=None, help="Default: the tower height.")
@click.option("--w", "w", type=int, default=0, show_default=True, help="Vertex of the maximal path at level 0.")
@pass_ctx
def vershik(c: Context, name, action, horizon, depth, terminal, steps, w):
    """Vershik map: orbits of prefixes and the continuity conditions."""
    order = c.named("orders", name)
    spec = c.diagram
    if action == "orbit":
        start = minimal_prefix(spec, order, terminal, depth)
        result = orbit(spec, order, start, steps or height(spec, depth))
        rep = c.report(["step", "path"])
        rep.rows = [{"step": i, "path": _path_text(p)} for i, p in enumerate(result.prefixes)]
        rep.summary.update(
            prefixes=len(result.prefixes),
            distinct=len(set(result.prefixes)),
            height=height(spec, depth),
            maximal_reached=result.reached_maximal,
        )
        c.emit(rep)
        return
    forward = continuity_check(spec, order, horizon, w)
    backward = continuity_check(spec, reverse_order(order), horizon, w)
    main_report = backward if action == "reverse-continuity" else forward
    other = forward if action == "reverse-continuity" else backward
    rep = c.report(["level", "max_vertex", "sources", "v", "v_minus_w", "min_link"])
    for r in main_report.records:
        rep.rows.append(
            {
                "level": r.level,
                "max_vertex": r.max_vertex,
                "sources": list(r.sources),
                "v": r.v,
                "v_minus_w": None if r.v is None else r.v - w,
                "min_link": r.min_link,
            }
        )
    rep.summary["verdict"] = main_report.verdict
    for key, value in main_report.witness.items():
        rep.summary[f"witness_{key}"] = value
    rep.summary["other_direction"] = other.verdict
    c.emit(rep)


@cli.command("oracle-sweep")
@click.option("--trials", type=click.IntRange(1), default=50, show_default=True)
@pass_ctx
def oracle_sweep(c: Context, trials):
    """Random small diagrams: convolution path counts against enumeration (uses --seed)."""
    rng = random.Random(c.seed)
    rep = c.report(["trial", "band", "span", "match"], seed=c.seed)
    for t in range(trials):
        width = rng.randint(2, 5)
        lo = rng.randint(-width + 1, 0)
        coeffs = [rng.randint(0, 4) for _ in range(width)]
        coeffs[rng.randrange(width)] = max(1, coeffs[0])
        coeffs[0] = coeffs[0] or 1
        spec = RuleSpec(lo, tuple(Constant(x) for x in coeffs))
        m = rng.randint(1, 4)
        band = path_count_band(spec, 0, m)
        counts = path_count_bruteforce_all(spec, 0, m)
        ok = all(band[k] == counts.get(k, 0) for k in set(band.offsets()) | set(counts))
        rep.rows.append({"trial": t, "band": str(spec.band_at(0)), "span": m, "match": ok})
    rep.summary["all_match"] = all(r["match"] for r in rep.rows)
    rep.failed = not rep.summary["all_match"]
    c.emit(rep)


def main(argv: Optional[list[str]] = None) -> int:
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        cli.main(args=args, prog_name="bratteli", standalone_mode=False, obj={"argv": args})
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except ParseError as exc:
        click.echo(f"parse error: {exc}", err=True)
        return EXIT_USAGE
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    except CheckFailed:
        return EXIT_INVALID
    except Intractable as exc:
        click.echo(f"intractable: {exc}", err=True)
        return EXIT_INTRACTABLE
    except (BratteliError, ValueError) as exc:
        click.echo(f"invalid: {exc}", err=True)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

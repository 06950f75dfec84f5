"""
Command line interface of the circle-method toolkit.

All commands print to stdout deterministically for fixed inputs; logs go to
stderr. Exit status: 0 on success, 1 when a verification fails or a
computation raises, 2 on usage errors (bad options, unknown names,
malformed JSON).
"""

import functools
import json
import sys
from pathlib import Path
from typing import List, Optional

import click
import mpmath

from core.numtheory import farey as farey_sequence
from core.omega import omega as omega_value
from core.qseries import EtaQuotientSpec, expand_congruence_product, expand_eta_quotient, series_reciprocal
from core.registry import registry_lookup, registry_names
from evaluation.evaluator import evaluate_formula, hr_asymptotic
from formulas.builtin import builtin_formula
from formulas.conjecture import analyze_cases, conjecture_formula
from formulas.ir import RademacherFormula, from_json, to_json, to_latex, validate_document
from utils.config import ENVIRONMENTS, configure
from utils.errors import (
    CircleMethodError,
    ExitCode,
    FormulaParseError,
    RegistryLookupError,
)
from utils.logging import get_logger, setup_logging
from .table import reproduce_table
from .verification import verify_formula


logger = get_logger(__name__)


def _emit_json(payload) -> None:
    click.echo(json.dumps(payload, indent=2, sort_keys=True))


def handle_errors(func):
    """Turn toolkit errors into messages on stderr and the matching exit status."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (RegistryLookupError, FormulaParseError) as exc:
            raise click.UsageError(str(exc))
        except CircleMethodError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(ExitCode.VERIFICATION_FAILED.value)
    return wrapper


def load_spec_text(text: str) -> EtaQuotientSpec:
    """
    Parse an eta quotient from JSON.

    Accepts ``{"factors": [{"m": 1, "e": 1}, ...]}`` or a list of ``[m, e]`` pairs.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormulaParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from exc
    if isinstance(data, list):
        data = {"factors": [{"m": m, "e": e} for m, e in data]}
    return validate_document(EtaQuotientSpec, data)


def resolve_spec(spec_file: Optional[str], name: Optional[str]) -> EtaQuotientSpec:
    if spec_file and name:
        raise click.UsageError("give either a spec file or --name, not both")
    if spec_file:
        return load_spec_text(Path(spec_file).read_text())
    if name:
        return registry_lookup(name).eta
    raise click.UsageError("a spec file or --name is required")


def resolve_formula(reference: str) -> RademacherFormula:
    """
    Resolve a FORMULA argument.

    Args:
        reference: Builtin name, ``conjectured:<registry name>`` or a JSON file path

    Returns:
        RademacherFormula
    """
    if reference.startswith("conjectured:"):
        name = reference.split(":", 1)[1]
        return conjecture_formula(registry_lookup(name).eta)
    path = Path(reference)
    if path.suffix == ".json" or path.is_file():
        if not path.is_file():
            raise click.UsageError(f"formula file not found: {reference}")
        return from_json(path.read_text())
    return builtin_formula(reference)


@click.group()
@click.option("--config", "config_file", type=click.Path(dir_okay=False), help="Configuration YAML file")
@click.option("--env", "environment", type=click.Choice(ENVIRONMENTS), help="Configuration environment")
@click.option("--verbose", is_flag=True, help="Log at debug level")
@click.option("--log-json", is_flag=True, help="Render logs as JSON")
def cli(config_file, environment, verbose, log_json):
    """Exact formulas for eta-quotient coefficients by the circle method."""
    settings = configure(config_file, environment)
    setup_logging(
        level="DEBUG" if verbose else settings.logging.level,
        log_file=settings.logging.file,
        json_format=log_json or settings.logging.json_format,
    )


@cli.command()
@click.argument("spec_file", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--name", help="Registry name instead of a spec file")
@click.option("--order", type=click.IntRange(min=0), required=True, help="Truncation order N")
@click.option("--product", is_flag=True, help="Expand the literal product form of the registry entry")
@click.option("--format", "fmt", type=click.Choice(["space", "lines", "csv"]), default="space")
@click.option("--json", "as_json", is_flag=True)
@handle_errors
def expand(spec_file, name, order, product, fmt, as_json):
    """Exact coefficients a(0..N) of an eta quotient."""
    if product:
        if not name:
            raise click.UsageError("--product needs --name")
        series = expand_congruence_product(registry_lookup(name).product, order)
    else:
        series = expand_eta_quotient(resolve_spec(spec_file, name), order)
    _print_series(series.coeffs, fmt, as_json, name=name)


def _print_series(coeffs, fmt, as_json, name=None):
    if as_json:
        _emit_json({"name": name, "order": len(coeffs) - 1, "coefficients": list(coeffs)})
    elif fmt == "lines":
        click.echo("\n".join(str(c) for c in coeffs))
    elif fmt == "csv":
        click.echo("n,coefficient")
        for n, c in enumerate(coeffs):
            click.echo(f"{n},{c}")
    else:
        click.echo(" ".join(str(c) for c in coeffs))


@cli.command()
@click.argument("spec_file", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--name", help="Registry name instead of a spec file")
@click.option("--order", type=click.IntRange(min=0), required=True)
@click.option("--json", "as_json", is_flag=True)
@handle_errors
def reciprocal(spec_file, name, order, as_json):
    """Coefficients of 1/F for the generating function F."""
    series = series_reciprocal(expand_eta_quotient(resolve_spec(spec_file, name), order))
    _print_series(series.coeffs, "space", as_json, name=name)


@cli.command()
@click.argument("spec_file", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--name", help="Registry name instead of a spec file")
@click.option("--latex", "as_latex", is_flag=True, help="Print LaTeX instead of JSON")
@click.option("--cases", "show_cases", is_flag=True, help="Print the case analysis")
@click.option("--json", "as_json", is_flag=True)
@handle_errors
def conjecture(spec_file, name, as_latex, show_cases, as_json):
    """Conjecture a Rademacher-type formula for an eta quotient."""
    spec = resolve_spec(spec_file, name)
    if show_cases:
        analyses = analyze_cases(spec)
        if as_json:
            _emit_json([json.loads(a.model_dump_json()) for a in analyses])
        else:
            for a in analyses:
                status = "contributing" if a.contributing else "dropped"
                click.echo(f"d={a.d} C={a.C_d} kappa={a.kappa} r={a.r} c^2={a.const_factor_squared} {status}")
        return

    formula = conjecture_formula(spec)
    click.echo(to_latex(formula) if as_latex and not as_json else to_json(formula))


@cli.command()
@click.argument("formula")
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--K", "K", type=click.IntRange(min=1), default=None, help="Largest k summed")
@click.option("--digits", type=click.IntRange(min=15), default=None)
@click.option("--json", "as_json", is_flag=True)
@handle_errors
def evaluate(formula, n, K, digits, as_json):
    """Evaluate FORMULA at n."""
    result = evaluate_formula(resolve_formula(formula), n, K, digits)
    value = mpmath.nstr(result.value, result.digits)
    residual = mpmath.nstr(result.imag_residual, 5)
    if as_json:
        _emit_json({
            "formula": formula,
            "n": n,
            "value": value,
            "rounded": result.rounded,
            "k_used": result.k_used,
            "imag_residual": residual,
        })
        return
    click.echo(f"value: {value}")
    click.echo(f"rounded: {result.rounded}")
    click.echo(f"imag_residual: {residual}")


@cli.command()
@click.argument("formula")
@click.option("--n-lo", type=click.IntRange(min=1), default=None)
@click.option("--n-hi", type=click.IntRange(min=1), default=None)
@click.option("--K", "K", type=click.IntRange(min=1), default=None)
@click.option("--digits", type=click.IntRange(min=15), default=None)
@click.option("--verbose", "verbose", is_flag=True, help="Include per-n errors")
@click.option("--cache", "cache_dir", type=click.Path(file_okay=False), default=None)
@click.option("--json", "as_json", is_flag=True)
@handle_errors
def verify(formula, n_lo, n_hi, K, digits, verbose, cache_dir, as_json):
    """Check FORMULA against the exact coefficients of its eta quotient."""
    report = verify_formula(resolve_formula(formula), n_lo, n_hi, K, digits, verbose, cache_dir)
    if as_json:
        click.echo(report.model_dump_json(indent=2))
    else:
        click.echo(f"formula: {report.formula}")
        click.echo(f"range: {report.n_lo}..{report.n_hi} K={report.K}")
        click.echo(f"value at n={report.n_hi}: {report.value_at_nmax}")
        click.echo(f"formula value: {report.formula_value}")
        click.echo(f"max abs error: {report.max_abs_error:.6f} (n={report.worst_n})")
        click.echo(f"all round correct: {'yes' if report.all_round_correct else 'no'}")
        if report.errors is not None:
            for n, error in zip(range(report.n_lo, report.n_hi + 1), report.errors):
                click.echo(f"{n} {error:.6f}")
    if not report.passed:
        sys.exit(ExitCode.VERIFICATION_FAILED.value)


@cli.command()
@click.option("--K", "K", type=click.IntRange(min=1), default=None)
@click.option("--n-hi", type=click.IntRange(min=1), default=None)
@click.option("--digits", type=click.IntRange(min=15), default=None)
@click.option("--format", "fmt", type=click.Choice(["markdown", "csv"]), default="markdown")
@click.option("--cache", "cache_dir", type=click.Path(file_okay=False), default=None)
@click.option("--json", "as_json", is_flag=True)
@handle_errors
def table(K, n_hi, digits, fmt, cache_dir, as_json):
    """Reproduce the numerical test table."""
    report = reproduce_table(K, n_hi, digits, cache_dir=cache_dir)
    if as_json:
        click.echo(report.to_json())
    elif fmt == "csv":
        click.echo(report.to_csv(), nl=False)
    else:
        click.echo(report.to_markdown(), nl=False)
    # soft-check warnings are logged by reproduce_table
    if not report.passed:
        sys.exit(ExitCode.VERIFICATION_FAILED.value)


@cli.command()
@click.argument("formula")
@handle_errors
def latex(formula):
    """Print FORMULA as LaTeX."""
    click.echo(to_latex(resolve_formula(formula)))


@cli.command()
@click.argument("order", type=click.IntRange(min=1))
@click.option("--json", "as_json", is_flag=True)
@handle_errors
def farey(order, as_json):
    """The Farey fractions of the given order."""
    fractions = [f"{q.numerator}/{q.denominator}" for q in farey_sequence(order)]
    if as_json:
        _emit_json({"order": order, "fractions": fractions})
    else:
        click.echo(" ".join(fractions))


@cli.command()
@click.argument("h", type=int)
@click.argument("k", type=click.IntRange(min=1))
@click.option("--json", "as_json", is_flag=True)
@handle_errors
def omega(h, k, as_json):
    """The multiplier omega(H, K)."""
    root = omega_value(h, k)
    if as_json:
        _emit_json({"h": h, "k": k, "theta": str(root.theta), "order": root.order()})
    else:
        click.echo(str(root))


@cli.command()
@click.argument("n", type=click.IntRange(min=1))
@click.option("--digits", type=click.IntRange(min=15), default=None)
@click.option("--json", "as_json", is_flag=True)
@handle_errors
def asymptotic(n, digits, as_json):
    """Leading-order estimate of p(N) next to the exact value."""
    estimate = hr_asymptotic(n, digits)
    exact = expand_eta_quotient(registry_lookup("p").eta, n)[n]
    ratio = estimate / exact
    shown = digits or 15
    if as_json:
        _emit_json({
            "n": n,
            "estimate": mpmath.nstr(estimate, shown),
            "exact": exact,
            "ratio": mpmath.nstr(ratio, shown),
        })
        return
    click.echo(f"estimate: {mpmath.nstr(estimate, shown)}")
    click.echo(f"exact: {exact}")
    click.echo(f"ratio: {mpmath.nstr(ratio, shown)}")


@cli.command()
@click.option("--json", "as_json", is_flag=True)
def registry(as_json):
    """List the named generating functions."""
    entries = [registry_lookup(name) for name in registry_names()]
    if as_json:
        _emit_json([
            {"name": e.name, "eta": e.eta.pairs(), "description": e.description, "aliases": list(e.aliases)}
            for e in entries
        ])
        return
    for entry in entries:
        pairs = " ".join(f"({m},{e})" for m, e in entry.eta.pairs())
        click.echo(f"{entry.name}: {pairs}  {entry.description}")


def cli_main(argv: Optional[List[str]] = None) -> int:
    """
    Run the command line and return the exit status instead of exiting.

    Args:
        argv: Arguments without the program name

    Returns:
        0, 1 or 2
    """
    try:
        result = cli.main(args=argv, prog_name="circle-method", standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        return ExitCode.VERIFICATION_FAILED.value
    except SystemExit as exc:
        return int(exc.code or 0)
    return result if isinstance(result, int) else ExitCode.SUCCESS.value

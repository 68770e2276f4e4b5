"""CLI entry point for cvarkit.

Every experiment is a subcommand. Tables go to ``--output`` in the chosen
format, or to stdout when no output path is given; progress and log lines
go to stderr.
"""

from __future__ import annotations

import logging
import sys
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Annotated, Iterator, Optional

import click
import numpy as np
import pandas as pd
import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.progress import Progress, SpinnerColumn, TextColumn

from cvarkit.config import Config, OutputFormat, RunConfig
from cvarkit.solver import InfeasibleModelError

app = typer.Typer(
    name="cvarkit",
    help="CVaR risk measures, portfolio and hedge optimization, CVaR norms and signal recovery",
    no_args_is_help=True,
)
portfolio_app = typer.Typer(help="Minimum-variance and minimum-CVaR portfolios", no_args_is_help=True)
norm_app = typer.Typer(help="Evaluate and benchmark the CVaR norms", no_args_is_help=True)
compare_app = typer.Typer(help="CVaR norms against L_p norms", no_args_is_help=True)
recover_app = typer.Typer(help="Atomic-norm recovery experiments", no_args_is_help=True)
app.add_typer(portfolio_app, name="portfolio")
app.add_typer(norm_app, name="norm")
app.add_typer(compare_app, name="compare")
app.add_typer(recover_app, name="recover")

console = Console(stderr=True)


class RiskMethod(str, Enum):
    CONVEX = "convex"
    PHI = "phi"


SeedOpt = Annotated[Optional[int], typer.Option("--seed", help="Master seed (default: CVARKIT_SEED)")]
ThreadsOpt = Annotated[Optional[int], typer.Option("--threads", help="Worker threads (default: CVARKIT_THREADS)")]
OutputOpt = Annotated[Optional[Path], typer.Option("--output", "-o", help="Output file or directory")]
FormatOpt = Annotated[Optional[OutputFormat], typer.Option("--format", "-f", help="Output format")]
VerboseOpt = Annotated[bool, typer.Option("--verbose", "-v")]


def _setup_logging(verbose: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=console, rich_tracebacks=True)],
    )


def _configure(
    verbose: bool,
    seed: Optional[int] = None,
    output: Optional[Path] = None,
    output_format: Optional[OutputFormat] = None,
    threads: Optional[int] = None,
) -> tuple[Config, RunConfig]:
    _setup_logging(verbose)
    config = Config.from_env()
    return config, config.run_config(seed, output, output_format, threads)


@contextmanager
def _handled() -> Iterator[None]:
    """Map domain failures to exit codes: 2 for infeasible models, 1 for bad input."""
    try:
        yield
    except InfeasibleModelError as exc:
        console.print(f"[red]Infeasible model ({exc.status.value}): {exc}[/red]")
        raise typer.Exit(code=2)
    except (ValueError, FileNotFoundError, KeyError) as exc:
        console.print(f"[red]{exc}[/red]")
        raise typer.Exit(code=1)


@contextmanager
def _spinner(description: str) -> Iterator[None]:
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        console=console,
        transient=True,
    ) as progress:
        progress.add_task(description, total=None)
        yield


def _floats(text: str) -> list[float]:
    """Comma-separated numbers; ``inf`` is accepted."""
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise typer.BadParameter(f"Expected comma-separated numbers, got {text!r}")


def _ints(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise typer.BadParameter(f"Expected comma-separated integers, got {text!r}")


def _vector(text: str) -> np.ndarray:
    """A comma list, or a file of comma/newline separated numbers."""
    path = Path(text)
    if path.is_file():
        return np.loadtxt(path, delimiter=",", ndmin=1).ravel()
    return np.asarray(_floats(text), dtype=float)


def _emit(frame: pd.DataFrame, run: RunConfig, name: str, single: bool = False) -> None:
    from cvarkit.writers import dumps, get_writer, to_records

    if run.output is not None:
        target = get_writer(run.output_format, single=single).write(frame, run.output, name)
        console.print(f"[green]Wrote {target}[/green]")
        return
    if run.output_format is OutputFormat.JSON:
        typer.echo(dumps(to_records(frame, single)))
    else:
        typer.echo(frame.to_csv(index=False, lineterminator="\n"), nl=False)


@app.command()
def risk(
    dist: Annotated[str, typer.Option("--dist", help="Loss distribution JSON (outcomes, probs)")] = "sample_losses.json",
    alpha: Annotated[float, typer.Option("--alpha", "-a", help="Confidence level in [0, 1)")] = 0.95,
    method: Annotated[RiskMethod, typer.Option("--method", help="CVaR evaluation path")] = RiskMethod.CONVEX,
    output: OutputOpt = None,
    output_format: FormatOpt = None,
    verbose: VerboseOpt = False,
) -> None:
    """VaR, CVaR+, lambda and CVaR of a discrete loss distribution."""
    _, run = _configure(verbose, output=output, output_format=output_format or OutputFormat.JSON)
    from cvarkit.analytics.risk import cvar_convex_combination, cvar_via_phi, risk_measures
    from cvarkit.data import load_distribution

    with _handled():
        d = load_distribution(dist)
        tail = cvar_via_phi(d, alpha) if method is RiskMethod.PHI else cvar_convex_combination(d, alpha)
        report = risk_measures(d, alpha)
    row = {
        "alpha": alpha,
        "var": tail.var,
        "cvar_plus": tail.cvar_plus,
        "lam": tail.lam,
        "cvar": tail.cvar,
        "mean": report.mean,
        "std": report.std,
        "expected_loss": report.expected_loss,
    }
    _emit(pd.DataFrame([row]), run, "risk", single=True)


@app.command()
def ewma(
    prices: Annotated[str, typer.Option("--prices", help="date,price_a,price_b CSV")] = "sample_prices.csv",
    lam: Annotated[float, typer.Option("--lambda", help="Decay factor in (0, 1)")] = 0.94,
    horizon: Annotated[int, typer.Option("--horizon", help="Horizon in trading days")] = 3,
    output: OutputOpt = None,
    output_format: FormatOpt = None,
    verbose: VerboseOpt = False,
) -> None:
    """Daily and n-day EWMA covariance of a two-series price history."""
    _, run = _configure(verbose, output=output, output_format=output_format)
    from cvarkit.analytics.stats import ewma_covariance, load_price_history, log_returns, scale_horizon
    from cvarkit.data import resolve_fixture

    with _handled():
        history = load_price_history(resolve_fixture(prices))
        daily = ewma_covariance(log_returns(history.to_numpy()), lam)
        scaled = scale_horizon(daily, horizon)
    names = list(history.columns)
    rows = [
        {"row": names[i], "col": names[j], "daily": daily[i, j], "horizon": scaled[i, j]}
        for i in range(len(names))
        for j in range(len(names))
    ]
    _emit(pd.DataFrame(rows, columns=["row", "col", "daily", "horizon"]), run, "ewma")


@portfolio_app.command("frontier")
def portfolio_frontier(
    universe: Annotated[str, typer.Option("--universe", "-u", help="Asset universe JSON")] = "frontier3.json",
    returns: Annotated[
        Optional[str], typer.Option("--returns", help="Comma-separated required returns")
    ] = None,
    points: Annotated[int, typer.Option("--points", help="Grid size when --returns is omitted")] = 20,
    threads: ThreadsOpt = None,
    output: OutputOpt = None,
    output_format: FormatOpt = None,
    verbose: VerboseOpt = False,
) -> None:
    """Minimum-variance efficient frontier (infeasible points are left blank)."""
    config, run = _configure(verbose, output=output, output_format=output_format, threads=threads)
    from cvarkit.data import load_universe
    from cvarkit.optimization.portfolio import efficient_frontier

    with _handled():
        u = load_universe(universe)
        if returns:
            grid = _floats(returns)
        else:
            gains = -u.mu
            grid = list(np.linspace(max(gains.min(), 0.0), gains.max(), points))
        with _spinner("Solving minimum-variance programs..."):
            frontier = efficient_frontier(u, grid, run.threads, config.solver)
    _emit(pd.DataFrame(frontier, columns=["required_return", "sigma"]), run, "frontier")


def _weights_frame(labels, weights) -> pd.DataFrame:
    return pd.DataFrame({"asset": list(labels), "weight": np.asarray(weights, dtype=float)})


@portfolio_app.command("mv")
def portfolio_mv(
    universe: Annotated[str, typer.Option("--universe", "-u", help="Asset universe JSON")] = "scenario1.json",
    required_return: Annotated[float, typer.Option("--required-return", "-r")] = 0.011,
    output: OutputOpt = None,
    output_format: FormatOpt = None,
    verbose: VerboseOpt = False,
) -> None:
    """Minimum-variance portfolio for one required return."""
    config, run = _configure(verbose, output=output, output_format=output_format)
    from cvarkit.data import load_universe
    from cvarkit.optimization.portfolio import min_variance

    with _handled():
        u = load_universe(universe)
        port = min_variance(u, required_return, config.solver)
    console.print(f"  Std dev: {port.std_dev:.6f}  Expected loss: {port.expected_loss:.6f}")
    _emit(_weights_frame(u.labels, port.weights), run, "mv")


@portfolio_app.command("cvar")
def portfolio_cvar(
    universe: Annotated[str, typer.Option("--universe", "-u", help="Asset universe JSON")] = "scenario1.json",
    required_return: Annotated[float, typer.Option("--required-return", "-r")] = 0.011,
    alpha: Annotated[float, typer.Option("--alpha", "-a")] = 0.95,
    scenarios: Annotated[int, typer.Option("--scenarios", "-k", help="Number of normal scenarios K")] = 100_000,
    seed: SeedOpt = None,
    output: OutputOpt = None,
    output_format: FormatOpt = None,
    verbose: VerboseOpt = False,
) -> None:
    """Minimum-CVaR portfolio on seeded normal scenarios."""
    config, run = _configure(verbose, seed=seed, output=output, output_format=output_format)
    from cvarkit.data import load_universe
    from cvarkit.optimization.portfolio import min_cvar
    from cvarkit.optimization.scenarios import sample_scenarios

    with _handled():
        u = load_universe(universe)
        with _spinner(f"Solving the CVaR program on {scenarios} scenarios..."):
            sample = sample_scenarios(u, scenarios, run.seed)
            port = min_cvar(sample, u.mu, required_return, alpha, config.solver)
    console.print(f"  VaR: {port.var:.6f}  CVaR: {port.cvar:.6f}  Std dev: {port.std_dev:.6f}")
    _emit(_weights_frame(u.labels, port.weights), run, "cvar")


@portfolio_app.command("compare")
def portfolio_compare(
    universe: Annotated[str, typer.Option("--universe", "-u", help="Asset universe JSON")] = "scenario1.json",
    returns: Annotated[str, typer.Option("--returns", help="Comma-separated required returns")] = "0.006,0.009,0.011",
    alpha: Annotated[float, typer.Option("--alpha", "-a")] = 0.95,
    scenarios: Annotated[int, typer.Option("--scenarios", "-k")] = 100_000,
    seed: SeedOpt = None,
    output: OutputOpt = None,
    output_format: FormatOpt = None,
    verbose: VerboseOpt = False,
) -> None:
    """Minimum-variance and minimum-CVaR weights side by side."""
    config, run = _configure(verbose, seed=seed, output=output, output_format=output_format)
    from cvarkit.data import load_universe
    from cvarkit.optimization.portfolio import compare_mv_cvar

    with _handled():
        u = load_universe(universe)
        with _spinner("Solving MV and CVaR programs..."):
            frame = compare_mv_cvar(u, _floats(returns), alpha, scenarios, run.seed, config.solver)
    _emit(frame, run, "compare")


@portfolio_app.command("scenario2")
def portfolio_scenario2(
    universe: Annotated[str, typer.Option("--universe", "-u", help="Asset universe JSON")] = "scenario2.json",
    skew: Annotated[float, typer.Option("--skew", help="Skewness of every asset's losses")] = 0.7,
    required_return: Annotated[float, typer.Option("--required-return", "-r")] = 0.006,
    alpha: Annotated[float, typer.Option("--alpha", "-a")] = 0.95,
    scenarios: Annotated[int, typer.Option("--scenarios", "-k")] = 100_000,
    seed: SeedOpt = None,
    output: OutputOpt = None,
    output_format: FormatOpt = None,
    verbose: VerboseOpt = False,
) -> None:
    """MV against CVaR optimum on skewed scenarios."""
    config, run = _configure(verbose, seed=seed, output=output, output_format=output_format)
    from cvarkit.data import load_universe
    from cvarkit.optimization.portfolio import scenario2_experiment

    with _handled():
        u = load_universe(universe)
        with _spinner(f"Running the skew experiment on {scenarios} scenarios..."):
            result = scenario2_experiment(u, skew, scenarios, run.seed, alpha, required_return, config.solver)
    _emit(result.to_frame(u.labels), run, "scenario2")


@app.command()
def hedge(
    market: Annotated[str, typer.Option("--market", help="Market JSON")] = "market.json",
    book: Annotated[str, typer.Option("--book", help="Book CSV")] = "book.csv",
    chains: Annotated[
        Optional[list[str]], typer.Option("--chain", help="Option chain CSV (repeatable)")
    ] = None,
    alpha: Annotated[float, typer.Option("--alpha", "-a")] = 0.95,
    scenarios: Annotated[int, typer.Option("--scenarios", "-m", help="Number of price scenarios M")] = 20_000,
    seed: SeedOpt = None,
    output: OutputOpt = None,
    output_format: FormatOpt = None,
    verbose: VerboseOpt = False,
) -> None:
    """CVaR-optimal adjustment of an option book within per-underlying caps."""
    config, run = _configure(verbose, seed=seed, output=output, output_format=output_format)
    from cvarkit.data import load_default_book, load_market, load_quotes
    from cvarkit.model.market import HedgeProblem
    from cvarkit.optimization.hedging import (
        band_exit_probability,
        caps_by_underlying,
        hedge as solve_hedge,
        simulate_prices,
    )

    with _handled():
        data = load_market(market)
        quotes = load_quotes(chains)
        positions = load_default_book(book)
        with _spinner(f"Simulating {scenarios} price scenarios and solving the hedge..."):
            prices = simulate_prices(data.spot, data.horizon_covariance, scenarios, run.seed)
            problem = HedgeProblem(
                book=positions,
                adjust_caps=caps_by_underlying(quotes, data.caps),
                scenarios=prices,
                underlyings=data.underlyings,
                alpha=alpha,
            )
            result = solve_hedge(problem, quotes, config.solver)
    for u, (low, high) in data.bands.items():
        prob = band_exit_probability(data.spot_of(u), data.variance_of(u), low, high)
        console.print(f"  {u}: P(outside [{low}, {high}]) = {prob:.4f}")
    console.print(f"  CVaR before: {result.before.cvar:,.2f}  after: {result.after.cvar:,.2f}")
    held = positions.contracts_for(quotes)
    frame = pd.DataFrame(
        {
            "underlying": [q.underlying for q in quotes],
            "kind": [q.kind.value for q in quotes],
            "strike": [q.strike for q in quotes],
            "price": [q.price for q in quotes],
            "held": held,
            "adjustment": result.adjustments,
        }
    )
    _emit(frame, run, "hedge")


@norm_app.command("eval")
def norm_eval(
    x: Annotated[str, typer.Option("--x", help="Comma list or file of vector entries")],
    alpha: Annotated[float, typer.Option("--alpha", "-a")],
    algo: Annotated[str, typer.Option("--algo", help="component, lp, candidates, knapsack or dnorm")] = "component",
    scaled: Annotated[bool, typer.Option("--scaled", help="Scaled CVaR norm")] = False,
    verbose: VerboseOpt = False,
) -> None:
    """Print one CVaR norm value."""
    config, _ = _configure(verbose)
    from cvarkit.model.norms import NormQuery
    from cvarkit.norms import Algorithm, evaluate

    with _handled():
        query = NormQuery(x=tuple(_vector(x)), alpha=alpha)
        value = evaluate(query, Algorithm(algo), scaled=scaled, config=config.solver)
    typer.echo(f"{value:.12g}")


@norm_app.command("bench")
def norm_bench(
    dims: Annotated[str, typer.Option("--dims", help="Comma-separated dimensions")] = "10,100,1000",
    alphas: Annotated[str, typer.Option("--alphas", help="Comma-separated alphas")] = "0,0.1,0.25,0.5,0.7,0.9",
    reps: Annotated[int, typer.Option("--reps", help="Timed repetitions per cell")] = 5,
    lp_max_n: Annotated[int, typer.Option("--lp-max-n", help="Skip LP timings above this n")] = 10_000,
    seed: SeedOpt = None,
    output: OutputOpt = None,
    output_format: FormatOpt = None,
    verbose: VerboseOpt = False,
) -> None:
    """Median wall time of each norm characterization."""
    config, run = _configure(verbose, seed=seed, output=output, output_format=output_format)
    from cvarkit.norms import benchmark_norms, speed_ratio

    with _handled():
        grid = _ints(dims)
        with _spinner("Timing norm evaluations..."):
            table = benchmark_norms(grid, _floats(alphas), reps, run.seed, lp_max_n, config.solver)
    if not table.empty:
        for n in grid:
            console.print(f"  n={n}: LP / component-wise = {speed_ratio(table, n):.1f}x")
    _emit(table, run, "bench")


@compare_app.command("curves")
def compare_curves(
    x: Annotated[str, typer.Option("--x", help="Comma list or file of vector entries")] = "10,-14,2,-9",
    alphas: Annotated[
        Optional[str], typer.Option("--alphas", help="Comma-separated alphas (default 0..0.95)")
    ] = None,
    rule: Annotated[str, typer.Option("--rule", help="heuristic or optimal")] = "heuristic",
    scaled: Annotated[bool, typer.Option("--scaled")] = False,
    output: OutputOpt = None,
    output_format: FormatOpt = None,
    verbose: VerboseOpt = False,
) -> None:
    """C_alpha next to the L_p norm with p chosen per alpha."""
    _, run = _configure(verbose, output=output, output_format=output_format)
    from cvarkit.norms import PRule, comparison_curve

    with _handled():
        grid = _floats(alphas) if alphas else list(np.round(np.arange(0.0, 0.951, 0.05), 10))
        frame = comparison_curve(_vector(x), grid, PRule(rule), scaled)
    _emit(frame, run, "curves")


@compare_app.command("bounds")
def compare_bounds(
    n: Annotated[int, typer.Option("--n", help="Dimension")] = 100,
    ps: Annotated[str, typer.Option("--ps", help="Comma-separated p values > 1")] = "1.2,1.5,1.8,2,2.2,2.5,3,4,5",
    output: OutputOpt = None,
    output_format: FormatOpt = None,
    verbose: VerboseOpt = False,
) -> None:
    """Smallest bound ratio per p, attained at kappa = n^(1/p)."""
    _, run = _configure(verbose, output=output, output_format=output_format)
    from cvarkit.norms import ratio_at_optimum

    with _handled():
        frame = ratio_at_optimum(n, _floats(ps))
    _emit(frame, run, "bounds")


@compare_app.command("disk")
def compare_disk(
    alpha: Annotated[float, typer.Option("--alpha", "-a")] = 0.29289321881345254,
    p: Annotated[float, typer.Option("--p")] = 2.0,
    points: Annotated[int, typer.Option("--points")] = 360,
    scaled: Annotated[bool, typer.Option("--scaled")] = False,
    output: OutputOpt = None,
    output_format: FormatOpt = None,
    verbose: VerboseOpt = False,
) -> None:
    """Unit-disk boundaries of C_alpha and L_p in the plane."""
    _, run = _configure(verbose, output=output, output_format=output_format)
    from cvarkit.norms import unit_disk

    with _handled():
        frame = unit_disk(alpha, p, points, scaled)
    _emit(frame, run, "disk")


@recover_app.command("project")
def recover_project(
    p: Annotated[int, typer.Option("--p", help="Dimension")] = 4,
    alpha: Annotated[float, typer.Option("--alpha", "-a")] = 0.625,
    trials: Annotated[int, typer.Option("--trials")] = 5000,
    seed: SeedOpt = None,
    threads: ThreadsOpt = None,
    output: OutputOpt = None,
    output_format: FormatOpt = None,
    verbose: VerboseOpt = False,
) -> None:
    """Share of random hyperplane projections landing on each atom."""
    config, run = _configure(verbose, seed=seed, output=output, output_format=output_format, threads=threads)
    from cvarkit.recovery import binary_share, projection_experiment

    with _handled():
        with _spinner(f"Projecting onto {trials} random hyperplanes..."):
            frame = projection_experiment(p, alpha, trials, run.seed, run.threads, config.solver)
    console.print(f"  Sign-vector atoms: {binary_share(frame):.2%}")
    _emit(frame, run, "projection")


@recover_app.command("sweep")
def recover_sweep(
    p: Annotated[int, typer.Option("--p", help="Dimension")] = 100,
    signal: Annotated[str, typer.Option("--signal", help="sparse, binary_sum, mixed or single_atom")] = "sparse",
    k: Annotated[int, typer.Option("--k", help="Atoms in the signal")] = 1,
    norms: Annotated[str, typer.Option("--norms", help="Comma-separated norms: cvar, l1, linf")] = "cvar,l1,linf",
    n_grid: Annotated[str, typer.Option("--n-grid", help="Comma-separated measurement counts")] = "10,20,30,40,50,60,70,80,90,100",
    alpha: Annotated[float, typer.Option("--alpha", "-a")] = 0.985,
    trials: Annotated[int, typer.Option("--trials")] = 50,
    seed: SeedOpt = None,
    threads: ThreadsOpt = None,
    output: OutputOpt = None,
    output_format: FormatOpt = None,
    verbose: VerboseOpt = False,
) -> None:
    """Empirical recovery probability against the number of measurements."""
    config, run = _configure(verbose, seed=seed, output=output, output_format=output_format, threads=threads)
    from cvarkit.model.recovery import NormKind
    from cvarkit.recovery import SignalKind, SignalSpec, sweep

    with _handled():
        spec = SignalSpec(kind=SignalKind(signal), k=k, alpha=alpha)
        kinds = [NormKind(part.strip()) for part in norms.split(",") if part.strip()]
        with _spinner("Running recovery trials..."):
            result = sweep(p, spec, kinds, _ints(n_grid), trials, run.seed, alpha, run.threads, config.solver)
    _emit(result.to_frame(), run, "sweep")


@recover_app.command("bounds")
def recover_bounds(
    p: Annotated[int, typer.Option("--p", help="Dimension")] = 100,
    k_max: Annotated[int, typer.Option("--k-max", help="Largest sparsity")] = 5,
    output: OutputOpt = None,
    output_format: FormatOpt = None,
    verbose: VerboseOpt = False,
) -> None:
    """L1 measurement bound per sparsity level."""
    _, run = _configure(verbose, output=output, output_format=output_format)
    from cvarkit.recovery import l1_bound

    with _handled():
        frame = pd.DataFrame(
            [{"k": k, "l1_bound": l1_bound(p, k)} for k in range(1, k_max + 1)], columns=["k", "l1_bound"]
        )
    _emit(frame, run, "bounds")


def main() -> None:
    """Console-script entry: exit 0 on success, 2 on infeasible models, 1 otherwise."""
    try:
        code = app(standalone_mode=False)
    except InfeasibleModelError as exc:
        console.print(f"[red]Infeasible model: {exc}[/red]")
        sys.exit(2)
    except click.exceptions.Abort:
        console.print("[red]Aborted[/red]")
        sys.exit(1)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except (ValueError, FileNotFoundError) as exc:
        console.print(f"[red]{exc}[/red]")
        sys.exit(1)
    sys.exit(code if isinstance(code, int) else 0)


if __name__ == "__main__":
    main()

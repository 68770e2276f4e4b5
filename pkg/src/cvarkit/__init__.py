"""cvarkit: CVaR risk measures, scenario optimization and CVaR norms."""

__version__ = "0.1.0"

"""Portfolio and hedging optimization on Monte Carlo scenarios."""

"""Moment statistics and univariate risk measures."""

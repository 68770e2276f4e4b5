"""Published reference values the tests check against."""

# Six-outcome loss distribution with a thin upper tail.
LOSS_OUTCOMES = [100.0, 200.0, 400.0, 800.0, 900.0, 1000.0]
LOSS_PROBS = [0.1, 0.2, 0.5, 0.18, 0.01, 0.01]
LOSS_ALPHA = 0.95
LOSS_VAR = 800.0
LOSS_CVAR_PLUS = 950.0
LOSS_LAMBDA = 0.6
LOSS_CVAR = 860.0

# Norm worked example.
NORM_X = (10.0, -14.0, 2.0, -9.0)
SCALED_NORM_VALUES = {0.0: 8.75, 0.25: 11.0, 0.5: 12.0, 0.75: 14.0, 1.0 / 3.0: 11.25}
CVAR_NORM_VALUES = {0.0: 35.0, 0.25: 33.0, 0.5: 24.0, 0.75: 14.0, 0.9: 5.6, 1.0 / 3.0: 30.0}
KNAPSACK_ALPHA = 0.4
KNAPSACK_VALUE = 27.6

# Scaled norm is not convex in alpha across brackets.
CONVEXITY_X = (-7.0, 12.0, -2.0)
CONVEXITY_AT_THIRD = 9.5
CONVEXITY_AT_FIFTH = 8.25
CONVEXITY_AT_TWO_FIFTHS = 88.0 / 9.0

# Scenario-1 minimum-variance weights at R = 0.011 (percent).
MV_WEIGHTS_PCT = (45.15, 11.58, 43.27)
CVAR_WEIGHTS_PCT = (46.20, 11.52, 43.18)

# Lognormal band-exit probabilities over three days.
BAND_EXIT = {"YHOO": 0.016, "GOOG": 0.044}

# Hyperplane projection in R^4 at alpha = 5/8.
PROJECTION_P = 4
PROJECTION_ALPHA = 0.625
PROJECTION_BINARY_SHARE = 0.9414

# L1 measurement bound for p = 100.
L1_BOUND_K1 = 11.4603
L1_BOUND_K3 = 25.7894

# Daily log-return covariance of the option desk and its three-day scaling.
DAILY_COVARIANCE = ((0.00021176, 0.00010049), (0.00010049, 0.00017589))
HORIZON_COVARIANCE = ((0.00063528, 0.00030147), (0.00030147, 0.00052767))

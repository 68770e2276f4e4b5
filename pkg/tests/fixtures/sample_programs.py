"""Small linear and quadratic programs with known optima."""

# max 3x + 5y  s.t.  x <= 4, 2y <= 12, 3x + 2y <= 18, x, y >= 0
PRODUCTION_OBJECTIVE = [-3.0, -5.0]
PRODUCTION_ROWS = [
    ([1.0, 0.0], "<=", 4.0),
    ([0.0, 2.0], "<=", 12.0),
    ([3.0, 2.0], "<=", 18.0),
]
PRODUCTION_X = [2.0, 6.0]
PRODUCTION_OPTIMUM = -36.0

# min -x1 - x2  s.t.  x1 + 2 x2 <= 4,  0 <= x1 <= 3,  0 <= x2 <= 5
BOUNDED_OBJECTIVE = [-1.0, -1.0]
BOUNDED_ROWS = [([1.0, 2.0], "<=", 4.0)]
BOUNDED_BOUNDS = [(0.0, 3.0), (0.0, 5.0)]
BOUNDED_X = [3.0, 0.5]
BOUNDED_OPTIMUM = -3.5

# min x1 + x2  s.t.  x1 - x2 = 1,  x2 free above -2,  x1 >= 0
FREE_OBJECTIVE = [1.0, 1.0]
FREE_ROWS = [([1.0, -1.0], "=", 1.0)]
FREE_BOUNDS = [(0.0, float("inf")), (-2.0, float("inf"))]
FREE_OPTIMUM = -1.0

INFEASIBLE_OBJECTIVE = [1.0, 1.0]
INFEASIBLE_ROWS = [([1.0, 1.0], ">=", 5.0), ([1.0, 1.0], "<=", 3.0)]

UNBOUNDED_OBJECTIVE = [-1.0, 0.0]
UNBOUNDED_ROWS = [([1.0, -1.0], "<=", 1.0)]

# min (x1 - 1)^2 + (x2 - 2)^2  s.t.  x1 + x2 <= 2,  x >= 0
PROJECTION_HESSIAN = [[2.0, 0.0], [0.0, 2.0]]
PROJECTION_LINEAR = [-2.0, -4.0]
PROJECTION_X = [0.5, 1.5]

# min x - z1 - z2 - z3  s.t.  x + z_i <= 2; each z_i appears in one row only
SLACK_SINGLETON_OBJECTIVE = [1.0, -1.0, -1.0, -1.0]
SLACK_SINGLETON_ROWS = [
    ([1.0, 1.0, 0.0, 0.0], "<=", 2.0),
    ([1.0, 0.0, 1.0, 0.0], "<=", 2.0),
    ([1.0, 0.0, 0.0, 1.0], "<=", 2.0),
]
SLACK_SINGLETON_X = [0.0, 2.0, 2.0, 2.0]
SLACK_SINGLETON_OPTIMUM = -6.0

# min -z  s.t.  x - z <= 1,  x <= 3; z grows without bound
DUAL_INFEASIBLE_OBJECTIVE = [0.0, -1.0]
DUAL_INFEASIBLE_ROWS = [([1.0, -1.0], "<=", 1.0), ([1.0, 0.0], "<=", 3.0)]

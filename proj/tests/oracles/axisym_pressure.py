# Checks the radial pressure gradient against the radial equilibrium equation.
import sympy as sp

R, mu, alpha = sp.symbols("R mu alpha", positive=True)
r = sp.Function("r")(R)
p = sp.Function("p")(R)
T = sp.Function("T")(R)
w = alpha * T

P_rR = 2 * mu * R / r - p * (r / R) * sp.exp(-2 * w)
P_tT = 2 * mu / R**2 * sp.exp(-2 * w) - p / r**2
eq = sp.diff(P_rR, R) + (1 / R + 2 * alpha * sp.diff(T, R)) * P_rR - r * P_tT
eq = eq.subs(sp.Derivative(r, R), R * sp.exp(2 * w) / r)
dp = sp.solve(eq, sp.Derivative(p, R))[0]
claimed = (2 * mu * R / r**2) * sp.exp(2 * w) * (
    2 * (1 + alpha * R * sp.diff(T, R))
    - R**2 / r**2 * sp.exp(2 * w)
    - r**2 / R**2 * sp.exp(-2 * w))
print("difference:", sp.simplify(dp - claimed))

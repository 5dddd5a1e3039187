"""Independent oracle for the BGGG function H(r).

H is defined by the reduced system G' = (H - F) G, where F = f+/A1, G = g+/A1
and ds = A1 dt.  Substituting into the g+ equation of the full system gives

    H = (1/2) (2/A1^2 + 1/B2^2 - (A2^2 + B1^2 + B2^2)/(A1 A2 B1 B2)).

This script evaluates that expression on the closed-form BGGG profile with
sympy, simplifies it to a rational function of r and prints frozen values.
"""
import sympy as sp

w = sp.symbols("w", positive=True)
u = w**2
r = u + sp.Rational(9, 4)
Q = (u + sp.Rational(3, 2)) * (u + 3)
A1 = sp.sqrt(u * (u + sp.Rational(9, 2)) / Q)
A2 = sp.sqrt(u * (u + 3) / 3)
B1 = 2 * r / 3
B2 = sp.sqrt((u + sp.Rational(3, 2)) * (u + sp.Rational(9, 2)) / 3)

H = sp.Rational(1, 2) * (2 / A1**2 + 1 / B2**2 - (A2**2 + B1**2 + B2**2) / (A1 * A2 * B1 * B2))
closed = 1 - (5 * (r - sp.Rational(9, 20)) ** 2 - sp.Rational(27, 10)) / (2 * r * (r - sp.Rational(3, 4)) * (r + sp.Rational(9, 4)))
assert sp.simplify(sp.radsimp(H - closed)) == 0
rs = sp.symbols("r", positive=True)
closed = closed.subs(w, sp.sqrt(rs - sp.Rational(9, 4)))
r = rs

print("H(r) =", sp.factor(sp.together(closed)))
for rv in [sp.Rational(9, 4), sp.Rational(23, 10), 3, 10, 1000]:
    print(f"H({rv}) = {sp.nsimplify(closed.subs(r, rv))} = {sp.N(closed.subs(r, rv), 17)}")
print("limit r->oo:", sp.limit(closed, r, sp.oo))

"""Taylor coefficients of the U(1)-symmetric G2 metric at the singular orbit.

Solves the metric ODEs order by order with A1 = t/2 + c t^3 + ..., A2 = t/2 + ...,
B1 = b + ..., B2 = b + ... and checks the closed coefficient formulas used by
taylor_seed_metric in src/metrics.cpp.
"""
import sympy as sp

t, b, c = sp.symbols('t b c')
co = sp.symbols('a5 a7 p3 p5 p7 q2 q4 q6 s2 s4 s6')
a5, a7, p3, p5, p7, q2, q4, q6, s2, s4, s6 = co
A1 = t/2 + c*t**3 + a5*t**5 + a7*t**7
A2 = t/2 + p3*t**3 + p5*t**5 + p7*t**7
B1 = b + q2*t**2 + q4*t**4 + q6*t**6
B2 = b + s2*t**2 + s4*t**4 + s6*t**6
eqs = [sp.diff(A1, t) - sp.Rational(1, 2)*(A1**2/A2**2 - A1**2/B2**2),
       sp.diff(A2, t) - sp.Rational(1, 2)*((B1**2 + B2**2 - A2**2)/(B1*B2) - A1/A2),
       sp.diff(B1, t) - (A2**2 + B2**2 - B1**2)/(A2*B2),
       sp.diff(B2, t) - sp.Rational(1, 2)*((A2**2 + B1**2 - B2**2)/(A2*B1) + A1/B2)]
conds = []
for e in eqs:
    conds += sp.Poly(sp.expand(sp.series(e, t, 0, 7).removeO()), t).all_coeffs()
sol = sp.solve(conds, co, dict=True)
assert len(sol) == 1
sol = {k: sp.factor(v) for k, v in sol[0].items()}
for k in co:
    print(k, '=', sol[k])

expected = {
    a5: (2112*b**4*c**2 + 96*b**2*c + 11)/(640*b**4),
    a7: (28032*b**6*c**3 + 2496*b**4*c**2 + 202*b**2*c - 11)/(2240*b**6),
    p3: -(8*b**2*c + 1)/(16*b**2),
    p5: -(768*b**4*c**2 + 24*b**2*c - 11)/(640*b**4),
    p7: -(132096*b**6*c**3 + 12480*b**4*c**2 + 1472*b**2*c + 323)/(35840*b**6),
    q2: 1/(4*b), s2: 1/(4*b),
    q4: -(8*b**2*c + 7)/(160*b**3), q6: -(192*b**4*c**2 - 48*b**2*c - 53)/(3840*b**5),
    s4: (8*b**2*c - 13)/(320*b**3), s6: (192*b**4*c**2 + 25)/(1920*b**5),
}
for k, v in expected.items():
    assert sp.simplify(sol[k] - v) == 0, k
print('all coefficient formulas confirmed')

"""Decay of |a - a_inf| for the Clarke family and A^lim on BS.

A1 x = (2/3)(1 - r^-3)/(1 + (3/x1 - 1) r^-2) and |a - a_inf| = sqrt6 |A1 x - 2/3| / (2 A1).
Prints the large-t slope and constant, and the least-squares fit over the window used by the
C++ tests: 60 log-spaced t in [t_end/2, t_end], with t_end = t(r) at s = 5000 for Clarke
(r^2 = 1 + 6 s) and t_end = 200 for A^lim.
"""
import mpmath as mp

mp.mp.dps = 40


def A1(r): return r/3*mp.sqrt(1 - r**-3)
def t_of_r(r): return mp.quad(lambda q: 1/mp.sqrt(1 - q**-3), [1, 2, 10, r])
def r_of_t(t): return mp.findroot(lambda r: t_of_r(r) - t, t + 1)
def dev(y, r): return abs(y - mp.mpf(2)/3)*mp.sqrt(6)/(2*A1(r))
def clarke(x1): return lambda r: 2*x1*(r**3 - 1)/(3*r*(3 + x1*(r*r - 1)))
def alim(r): return 2*(r**3 - 1)/(3*r*(r*r - 1))


def window_fit(f, t_end):
    ts = [mp.exp(mp.log(t_end/2) + (mp.log(t_end) - mp.log(t_end/2))*i/59) for i in range(60)]
    xs = [mp.log(t) for t in ts]
    ys = [mp.log(dev(f(r_of_t(t)), r_of_t(t))) for t in ts]
    n = len(xs)
    sx, sy = sum(xs), sum(ys)
    sxx, sxy = sum(x*x for x in xs), sum(x*y for x, y in zip(xs, ys))
    slope = (n*sxy - sx*sy)/(n*sxx - sx*sx)
    return -slope, mp.exp((sy - slope*sx)/n)


t_clarke = t_of_r(mp.sqrt(1 + 6*5000))
for name, f, t_end in [('x1=1', clarke(1), t_clarke), ('x1=2', clarke(2), t_clarke),
                       ('x1=4', clarke(4), t_clarke), ('lim', alim, mp.mpf(200))]:
    r1, r2 = mp.mpf(1000), mp.mpf(2000)
    t1, t2 = t_of_r(r1), t_of_r(r2)
    k = -mp.log(dev(f(r2), r2)/dev(f(r1), r1))/mp.log(t2/t1)
    kw, Cw = window_fit(f, t_end)
    print(name, 'large-t slope', mp.nstr(k, 8), 'C', mp.nstr(dev(f(r2), r2)*t2**3, 8),
          '| window fit k', mp.nstr(kw, 8), 'C', mp.nstr(Cw, 8))

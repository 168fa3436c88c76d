"""High-precision oracle for the frozen expected values used by the unit tests.

Run with `python3 tests/oracles/frozen_values.py`; every printed value is
pasted into the matching test as a literal. Nothing here imports the C++
library.
"""
import mpmath as mp

mp.mp.dps = 40


def Phi(z):
    return mp.ncdf(z)


def bvn(x, y, rho):
    # P{Z1 <= x, Z2 <= y} = int_{-inf}^{x} phi(z) Phi((y - rho z)/sqrt(1-rho^2)) dz
    s = mp.sqrt(1 - rho * rho)
    return mp.quad(lambda z: mp.npdf(z) * Phi((y - rho * z) / s), [-mp.inf, 0, x] if x > 0 else [-mp.inf, x])


def fbm_cov(h, s, t):
    return (mp.mpf(s) ** (2 * h) + mp.mpf(t) ** (2 * h) - abs(mp.mpf(s) - t) ** (2 * h)) / 2


def f_h(h, t):
    return mp.mpf(t) ** h * mp.sqrt(max(1, mp.log(1 / mp.mpf(t))))


def show(name, v):
    print(f"{name:40s} {mp.nstr(v, 20)}")


show("Phi(1)", Phi(1))
show("Phi(-1.5)", Phi(-1.5))
show("Phi(3.2)", Phi(3.2))
show("phi(0)", mp.npdf(0))
show("phi(1)", mp.npdf(1))
show("z_0.025", mp.sqrt(2) * mp.erfinv(2 * mp.mpf("0.025") - 1))
show("z_1e-10", mp.sqrt(2) * mp.erfinv(2 * mp.mpf("1e-10") - 1))
show("z_0.8413447460685429", mp.sqrt(2) * mp.erfinv(2 * mp.mpf("0.8413447460685429") - 1))
for (x, y, r) in [(0, 0, 0.5), (0.3, -0.7, 0.4), (-1.2, 0.5, -0.6), (1.5, 2.0, 0.95), (-0.4, -0.2, -0.97), (2.1, -1.3, 0.2)]:
    show(f"bvn({x},{y},{r})", bvn(mp.mpf(x), mp.mpf(y), mp.mpf(r)))
show("fbm_cov(0.3,1,2)", fbm_cov(mp.mpf("0.3"), 1, 2))
show("pair_corr(0.3,1,2)", fbm_cov(mp.mpf("0.3"), 1, 2) / mp.mpf(2) ** mp.mpf("0.3"))
show("f_h(0.5,1/e)", f_h(mp.mpf("0.5"), 1 / mp.e))
show("f_h(0.5,0.01)", f_h(mp.mpf("0.5"), mp.mpf("0.01")))
show("Delta(0.5,0.1,0.1)", mp.sqrt(mp.pi / 2) * mp.mpf("0.1") ** mp.mpf("0.5") * mp.mpf("0.01"))
h = mp.mpf("0.25")
show("tau2(0.25)", 3 * (2 + h) / (10 * h + 8) + mp.mpf(1) / 2)
h = mp.mpf("0.5")
show("tau2(0.5)", 3 * (2 + h) / (10 * h + 8) + mp.mpf(1) / 2)
h = mp.mpf("0.3"); k = mp.mpf("0.3")
nu0 = 2 + 2 / h; h0 = 1 + h
show("tau1p(0.3,0.3)", k / (4 * h0 + k * (2 + 4 * nu0)))
show("tau(alpha=20,h=0.5)", (20 * (mp.mpf(1) / 26) - mp.mpf(1) / 2) / 21)
n = mp.mpf(10) ** 4
show("eps_n(n=1e4)", (mp.log(mp.log(n)) / n) ** (mp.mpf(1) / 4))
show("bk_rate(n=1e4,gamma=1)", n ** (-mp.mpf(1) / 4) * mp.log(mp.log(n)) ** (mp.mpf(1) / 4) * mp.log(n) ** (mp.mpf(1) / 2))
show("a_n(n=1e4,delta=0.1)", (mp.log(mp.log(n)) / n) ** (1 / (2 * mp.mpf("0.1"))))
# Dense-scan check of the H=1/2 indicator distance between (1,0) and (4,0).
show("dp_half", mp.sqrt(1 - 2 * (mp.mpf(1) / 4 + mp.asin(mp.mpf("0.5")) / (2 * mp.pi))))

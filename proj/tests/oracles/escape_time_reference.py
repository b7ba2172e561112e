"""Mean escape time T(nu, alpha) by 30-digit mpmath quadrature, and one-node Kramers data."""
import mpmath as mp

mp.mp.dps = 30


def mean_escape(nu, a, xi):
    g = lambda x, y: (y / x) * mp.e ** ((nu * (x * x - y * y) + (y**4 - x**4) + (x**6 - y**6) / 3) / a**2)
    inner = lambda x: mp.quad(lambda y: g(x, y), [0, x / 2, x])
    pts = [0] + [p for p in (0.1, 0.2, 0.3, 0.4) if p < xi] + [xi]
    return 2 / a**2 * mp.quad(inner, pts)


def V(r, nu, a):
    return nu * r**2 / 2 - r**4 / 2 + r**6 / 6 - a**2 / 2 * mp.log(r)


def V2(r, nu, a):
    return nu - 6 * r**2 + 5 * r**4 + a**2 / (2 * r**2)


def radial_roots(nu, a):
    f = lambda r: nu * r - 2 * r**3 + r**5 - a**2 / (2 * r)
    grid = [mp.mpf(k) / 2000 for k in range(1, 4001)]
    roots = []
    for lo, hi in zip(grid, grid[1:]):
        if f(lo) * f(hi) < 0:
            roots.append(mp.findroot(f, (lo, hi), solver="bisect"))
    return roots


nu, a = mp.mpf("0.2"), mp.mpf("0.05")
rc0 = mp.sqrt(1 - mp.sqrt(1 - nu))
t_rc0 = mean_escape(nu, a, rc0)
t1 = mean_escape(nu, a, mp.mpf("0.5"))
t_sync = mean_escape(nu, a / mp.sqrt(2), mp.mpf("0.5"))
print("R_c0", rc0)
print("T(0.2,0.05,R_c0)", t_rc0)
print("T(0.2,0.05,0.5)", t1)
print("T(0.2,0.05/sqrt2,0.5)", t_sync)
print("harmonic", t1 * t_sync / (t1 + t_sync))
rm, rc, rM = radial_roots(nu, a)
dv = V(rc, nu, a) - V(rm, nu, a)
pref = 2 * mp.pi / mp.sqrt(abs(V2(rc, nu, a)) * V2(rm, nu, a))
tk = pref * mp.e ** (2 * dv / a**2)
k_sync = pref * mp.e ** (4 * dv / a**2)
A = (t_sync - t1 / 2) / (k_sync - tk / 2)
print("roots", rm, rc, rM)
print("T_K", tk, "K_sync", k_sync)
print("A", A, "B", t1 / 2 - A * tk / 2)
print("V''(R_c)", V2(rc, nu, a))

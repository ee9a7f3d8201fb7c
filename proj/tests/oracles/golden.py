"""High-precision reference values for the analytic tests.

Independent of the C++ code path: everything here is evaluated with mpmath at
50 significant digits straight from the defining integrals. Run with
`python3 tests/oracles/golden.py` and paste the printed constants into
tests/test_analytic.cpp when a formula changes.
"""
import mpmath as mp

mp.mp.dps = 50


def phi(x):
    return mp.npdf(x)


def sf(x):
    return mp.ncdf(-x)


def law(alpha, gamma, sigma, lower):
    m = mp.mpf(alpha) / gamma
    s = mp.sqrt(mp.mpf(sigma) ** 2 / (2 * gamma))
    mass = sf((lower - m) / s)
    dens = lambda y: phi((y - m) / s) / (s * mass)
    surv = lambda y: sf((y - m) / s) / mass
    return m, s, dens, surv


def h_prime(alpha, gamma, sigma, lower, x):
    _, _, dens, surv = law(alpha, gamma, sigma, lower)
    return dens(lower) / dens(x) * surv(x)


def tau2(alpha, gamma, sigma, lower):
    m, s, dens, _ = law(alpha, gamma, sigma, lower)
    f = lambda x: h_prime(alpha, gamma, sigma, lower, x) ** 2 * dens(x)
    return sigma**2 * mp.quad(f, [lower, m, m + 10 * s, mp.inf])


def main():
    r2 = mp.sqrt(2)
    print("W(1) S0           ", mp.e ** (-0.5))
    print("p(0) S0           ", law(0, 1, r2, 0)[2](0))
    print("p(1) S0           ", law(0, 1, r2, 0)[2](1))
    print("Phi(1)            ", mp.ncdf(1))
    print("h'(1) S0          ", h_prime(0, 1, r2, 0, 1))
    print("h(1) S0           ", mp.quad(lambda u: h_prime(0, 1, r2, 0, u), [0, 1]))
    print("tau2 S0           ", tau2(0, 1, r2, 0))
    print("tau2 a=1,g=1,s=1  ", tau2(1, 1, 1, 0))
    m, s, dens, _ = law(1, 1, 1, 0)
    print("q a=1,g=1,s=1     ", dens(0) / 2)
    print("q_U doubly d=1    ", mp.e ** (-0.5) / mp.quad(lambda v: mp.e ** (-v * v / 2), [0, 1]))
    print("q_U doubly d=1e-3 * d",
          1e-3 * mp.e ** (-0.5e-6) / mp.quad(lambda v: mp.e ** (-v * v / 2), [0, 1e-3]))
    for z in [-5, -1, 0, 0.5, 2, 2.9, 3.1, 10, 30, 40]:
        print("mills(%g)" % z, sf(z) / phi(z))
    # boundary rate for the near-Brownian simulation example
    m, s, dens, _ = law(-5, 0.01, 1, 0)
    print("q a=-5,g=.01,s=1  ", dens(0) / 2)


if __name__ == "__main__":
    main()

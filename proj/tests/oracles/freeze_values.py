"""Straight-line reference computations whose outputs are frozen into the C++ tests.

Run with: python3 tests/oracles/freeze_values.py
Nothing here imports the library; every formula is written out by hand.
"""

import math

import numpy as np
from scipy import integrate, special, stats


def t_logpdf_unit(x, nu):
    # Student-t rescaled to unit variance: X = sqrt((nu-2)/nu) * T_nu.
    scale = math.sqrt((nu - 2.0) / nu)
    return stats.t.logpdf(x, df=nu, scale=scale)


def spherical_logpdf(family, tail, x):
    x = np.asarray(x, dtype=float)
    k = x.size
    q = float(x @ x)
    if family == "normal":
        return -0.5 * k * math.log(2 * math.pi) - 0.5 * q
    if family == "t":
        nu = tail
        return (special.gammaln((nu + k) / 2) - special.gammaln(nu / 2) - 0.5 * k * math.log(math.pi * (nu - 2))
                - 0.5 * (nu + k) * math.log1p(q / (nu - 2)))
    if family == "ged":
        d = tail
        # density c * exp(-q^d / 2); c from the radial integral of r^(k-1) exp(-r^(2d)/2)
        log_surface = math.log(2) + 0.5 * k * math.log(math.pi) - special.gammaln(k / 2)
        log_radial = special.gammaln(k / (2 * d)) + (k / (2 * d)) * math.log(2) - math.log(2 * d)
        return -(log_surface + log_radial) - 0.5 * q ** d
    raise ValueError(family)


def skew_logpdf(family, tail, gamma, x):
    x = np.asarray(x, dtype=float)
    g = np.asarray(gamma, dtype=float)
    xs = np.where(x >= 0, x / g, x * g)
    return float(np.sum(np.log(2 * g / (1 + g * g))) + spherical_logpdf(family, tail, xs))


def chol2(R):
    l11 = math.sqrt(R[0][0])
    l21 = R[1][0] / l11
    l22 = math.sqrt(R[1][1] - l21 * l21)
    return [[l11, 0.0], [l21, l22]]


def recursions(omega, alpha, beta, a, b, Rbar, h1, y):
    T, k = y.shape
    h = list(h1)
    Q = [row[:] for row in Rbar]
    out = []
    for t in range(T):
        if t > 0:
            u_prev = [y[t - 1, i] / math.sqrt(h[i]) for i in range(k)]
            h = [omega[i] + alpha[i] * y[t - 1, i] ** 2 + beta[i] * h[i] for i in range(k)]
            Q = [[(1 - a - b) * Rbar[i][j] + a * u_prev[i] * u_prev[j] + b * Q[i][j] for j in range(k)] for i in range(k)]
        R = [[Q[i][j] / math.sqrt(Q[i][i] * Q[j][j]) for j in range(k)] for i in range(k)]
        out.append((list(h), [row[:] for row in R]))
    return out


def loglik_terms(path, y, family, tail, gamma):
    terms = []
    for t, (h, R) in enumerate(path):
        k = len(h)
        z = [y[t, i] / math.sqrt(h[i]) for i in range(k)]
        if k == 1:
            eps = [z[0]]
            logdet_R = 0.0
        else:
            L = chol2(R)
            e1 = z[0] / L[0][0]
            e2 = (z[1] - L[1][0] * e1) / L[1][1]
            eps = [e1, e2]
            logdet_R = 2 * math.log(L[0][0]) + 2 * math.log(L[1][1])
        logdet_H = sum(math.log(v) for v in h) + logdet_R
        terms.append(-0.5 * logdet_H + skew_logpdf(family, tail, gamma, eps))
    return terms


def targeted(omega, alpha, beta, y):
    T, k = y.shape
    h1 = [float(np.var(y[:, i], ddof=1)) for i in range(k)]
    h = list(h1)
    S = np.zeros((k, k))
    for t in range(T):
        if t > 0:
            h = [omega[i] + alpha[i] * y[t - 1, i] ** 2 + beta[i] * h[i] for i in range(k)]
        u = np.array([y[t, i] / math.sqrt(h[i]) for i in range(k)])
        S += np.outer(u, u)
    S /= T
    d = np.sqrt(np.diag(S))
    return h1, (S / np.outer(d, d)).tolist()


def rw_acceptance(p):
    # Stationary acceptance of random-walk Metropolis with N(0, I) steps on N(0, I):
    # given the step z, x'z + |z|^2/2 ~ N(s^2/2, s^2) with s = |z|, giving 2*Phi(-s/2).
    f = lambda s: 2 * stats.norm.cdf(-s / 2) * stats.chi.pdf(s, p)
    return integrate.quad(f, 0, np.inf, epsabs=1e-14)[0]


def main():
    np.set_printoptions(precision=17)

    print("# Student-t, k=1, nu=5, x=1")
    v = t_logpdf_unit(1.0, 5.0)
    mine = spherical_logpdf("t", 5.0, [1.0])
    area, _ = integrate.quad(lambda s: math.exp(spherical_logpdf("t", 5.0, [s])), -np.inf, np.inf, epsabs=1e-13)
    print(f"scipy={v:.17g} handwritten={mine:.17g} integral={area:.15f}")

    print("# GED normalizer check, k=1 and k=2")
    for d in (0.7, 1.0, 2.0):
        a1, _ = integrate.quad(lambda s: math.exp(spherical_logpdf("ged", d, [s])), -np.inf, np.inf, epsabs=1e-13)
        print(f"delta={d} k=1 integral={a1:.15f}")

    print("# run_recursions k=2 T=3, omega=0.1 alpha=0.1 beta=0.8 a=0.1 b=0.8 Rbar=I, h1=(1,1)")
    y3 = np.array([[0.5, -0.3], [1.2, 0.8], [-0.7, 0.4]])
    path = recursions([0.1, 0.1], [0.1, 0.1], [0.8, 0.8], 0.1, 0.8, [[1, 0], [0, 1]], [1.0, 1.0], y3)
    terms = loglik_terms(path, y3, "normal", 0.0, [1.0, 1.0])
    for t, (h, R) in enumerate(path):
        print(f"t={t + 1} h1={h[0]:.17g} h2={h[1]:.17g} rho={R[0][1]:.17g} term={terms[t]:.17g}")

    print("# log_likelihood k=2 T=5 skew-t nu=6 gamma=(0.8,1.3)")
    y5 = np.array([[0.3, -0.2], [-1.1, 0.5], [0.7, 0.9], [0.2, -1.4], [-0.4, 0.1]])
    om, al, be, a, b = [0.05, 0.08], [0.07, 0.04], [0.85, 0.9], 0.04, 0.92
    h1, Rbar = targeted(om, al, be, y5)
    path = recursions(om, al, be, a, b, Rbar, h1, y5)
    total = sum(loglik_terms(path, y5, "t", 6.0, [0.8, 1.3]))
    print(f"loglik={total:.17g}")

    print("# log_likelihood k=1 T=4 skew-GED delta=1.5 gamma=1.4")
    y4 = np.array([[0.9], [-0.4], [1.6], [-2.1]])
    h1, Rbar = targeted([0.2], [0.15], [0.6], y4)
    path = recursions([0.2], [0.15], [0.6], 0.01, 0.01, Rbar, h1, y4)
    total = sum(loglik_terms(path, y4, "ged", 1.5, [1.4]))
    print(f"loglik={total:.17g}")

    for p in (1, 2, 5):
        print(f"# random-walk acceptance, unit steps, p={p}: {rw_acceptance(p):.15f}")


if __name__ == "__main__":
    main()


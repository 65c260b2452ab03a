#!/usr/bin/env python3
"""Independent big-integer oracle for the rate formulas.

Evaluates every closed-form bound directly with Python integers and mpmath,
without any counterfunction tree machinery. The printed values are frozen
into tests/test_rates.cpp and tests/acceptance.cpp.

Scenario: harmonic beta, lambda = 1/2, K = 1, constant family (chi_T = 0).
"""

import math

import mpmath

mpmath.mp.prec = 4096


def ceil_2e_pow(n):
    # ceil(2 e^n), computed with ample precision and checked against the
    # neighbouring integers.
    v = 2 * mpmath.e ** n
    c = int(mpmath.ceil(v))
    assert c - 1 < v <= c
    return c


def ceil_ln(v):
    if v <= 1:
        return 0
    c = int(mpmath.ceil(mpmath.log(v)))
    assert mpmath.e ** (c - 1) < v <= mpmath.e ** c
    return c


K = 1
chi_beta = lambda k: k
chi_lambda = lambda k: 0
chi_T = lambda k: 0
eta = lambda k: k
sigma = ceil_2e_pow
sigma_star = lambda m, k: (m + 1) * (k + 1)
Lam, N_Lam = 2, 0


def chi(k):
    return max(chi_T(2 * (k + 1) - 1), chi_lambda(8 * K * (k + 1) - 1),
               chi_beta(8 * K * (k + 1) - 1))


def Sigma_star(k):
    return sigma_star(chi(3 * k + 2), 6 * K * (k + 1) - 1) + 1


def Sigma(k):
    return sigma(chi(3 * k + 2) + 2 + ceil_ln(6 * K * (k + 1))) + 1


def Sigma_tilde_star(k):
    return max(N_Lam, Sigma_star(2 * Lam * (k + 1) - 1),
               eta(4 * K * Lam * (k + 1) - 1))


def Sigma_tilde(k):
    return max(N_Lam, Sigma(2 * Lam * (k + 1) - 1),
               eta(4 * K * Lam * (k + 1) - 1))


def Psi_star(k, Gam, G, N_Gam):
    return max(Sigma_tilde_star((1 + 2 * Gam * G) * (k + 1) - 1), N_Gam)


def omega1(k, K=K):
    return 24 * K * (k + 1) ** 2


def omega2(k, K=K):
    return 4 * K * K * (k + 1) ** 2


def r(k, K=K):
    return K * K * (k + 1)


def hat(f, K=K):
    return lambda i: max(omega1(i, K), f(omega1(i, K)))


def iterate(f, m, start):
    v = start
    for _ in range(m):
        v = f(v)
    return v


def bound_n_star(k, f, K=K):
    return omega1(iterate(hat(f, K), r(omega2(k, K), K), 0), K)


def omega3(k, f, Phi, K=K):
    g = lambda i: f(Phi(i))
    return Phi(omega1(iterate(hat(g, K), r(omega2(k, K), K), 0), K))


def mu_star_phi_const0(k, f_const=0):
    # Phi = const 0 collapses omega3 to 0.
    kt = 4 * (k + 1) ** 2 - 1
    e = eta(24 * K * K * (kt + 1) - 1)
    m = max(0, e)
    return sigma_star(m, 12 * K * K * (kt + 1) - 1) + 1


def mu_phi_const0(k):
    kt = 4 * (k + 1) ** 2 - 1
    e = eta(24 * K * K * (kt + 1) - 1)
    m = max(0, e)
    return sigma(m + ceil_ln(12 * K * K * (kt + 1))) + 1


def main():
    print("chi(0) =", chi(0))
    print("chi(2) =", chi(2))
    print("Sigma_star(0) =", Sigma_star(0))
    print("Sigma_star(5) =", Sigma_star(5))
    print("Sigma_tilde_star(0) =", Sigma_tilde_star(0))
    print("Psi_star(0) [Gamma=G=1] =", Psi_star(0, 1, 1, 0))
    print("Psi_star(0) [Gamma=1,G=2] =", Psi_star(0, 1, 2, 0))
    for k in range(11):
        print(f"chain k={k}: Sigma*={Sigma_star(k)} Sigma~*={Sigma_tilde_star(k)} "
              f"Psi*[G=1]={Psi_star(k, 1, 1, 0)} Psi*[G=2]={Psi_star(k, 1, 2, 0)}")
    print("Sigma(0) =", Sigma(0))
    print("Sigma(0) - 1 == ceil(2e^27):", Sigma(0) - 1 == ceil_2e_pow(27))
    print("Sigma_tilde(0) =", Sigma_tilde(0))
    print("sigma(1) =", sigma(1))
    print("sigma(0) =", sigma(0))
    print("mu_star(0, const0, Phi=const0) =", mu_star_phi_const0(0))
    for k in range(4):
        print(f"mu_star(k={k}, const0, Phi=const0) =", mu_star_phi_const0(k))
        print(f"mu(k={k}, const0, Phi=const0) =", mu_phi_const0(k))
    print("iterate(omega1, 2, 0) =", iterate(omega1, 2, 0))
    h = [iterate(hat(lambda i: 0), j, 0) for j in range(6)]
    print("hat(const0) iterates =", h)
    b = bound_n_star(0, lambda i: 0)
    print("bound_n_star(0, const0, K=1) =", b)
    print("bound_n_star bits =", b.bit_length())
    w = omega3(0, lambda i: i, lambda i: i)
    print("omega3(0, id, Phi=id, K=1) =", w)
    print("omega3 bits =", w.bit_length())
    print("r(omega2(47)) =", r(omega2(47)))
    # zeta examples
    print("zeta_star(0,0; sigma*=(m+1)(j+1), S=4) =", sigma_star(0, 3 * 4 * 1 - 1) + 1)
    print("zeta(0,0; sigma=id, S=1) =", 0 + ceil_ln(3) + 1)
    print("hat(affine 2,0)(0) =", hat(lambda i: 2 * i)(0))
    # omega1 iterate overflow: steps until bit length exceeds 2^20
    v, steps = 0, 0
    while v.bit_length() <= 2 ** 20:
        v = omega1(v)
        steps += 1
    print("omega1 iterate steps to exceed 2^20 bits =", steps)
    # ceil ln reference values
    for a, b_ in [(6, 6), (12, 12), (3, 3), (1, 1), (1, 0)]:
        vals = [ceil_ln(a * n + b_) for n in (0, 1, 2, 10, 1000, 10 ** 6)]
        print(f"ceil_ln({a}n+{b_}) at 0,1,2,10,1e3,1e6 =", vals)


if __name__ == "__main__":
    main()

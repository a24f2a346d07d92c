#!/usr/bin/env python3
"""Generate auxiliary nodes/weights for the hybrid Gauss-trapezoid quadrature
rule for periodic integrands with a logarithmic singularity (Alpert 1999).

The composite rule on a 2*pi-periodic grid with spacing h = 2*pi/N and a log
singularity at s = 0 reads

    I ~= h * sum_{k=a}^{N-a} f(k h) + h * sum_l w_l * (f(x_l h) + f((N - x_l) h))

The auxiliary nodes x_l in (0, a) and weights w_l are fixed by the moment
conditions (zeta-regularized Euler-Maclaurin matching), for q = 0..j-1:

    sum_l w_l x_l^q          = -zeta(-q, a)        (smooth part)
    sum_l w_l x_l^q log(x_l) =  zeta'(-q, a)       (log part)

A rule with j nodes has error O(h^(j+1) log h); j=7, a=5 gives the 8th-order
rule. Output is a C++ table pasted into include/vesbi/quadrature.hpp.
"""
import mpmath as mp

mp.mp.dps = 60


def solve_rule(j, a, x0=None, w0=None):
    def eqs(*vars):
        x = vars[:j]
        w = vars[j:]
        out = []
        for q in range(j):
            out.append(sum(w[l] * x[l] ** q for l in range(j)) + mp.zeta(-q, a))
            out.append(sum(w[l] * x[l] ** q * mp.log(x[l]) for l in range(j))
                       - mp.zeta(-q, a, 1))
        return out

    if x0 is None:
        # initial guess: Gauss-Legendre-ish nodes on (0, a), unit-ish weights
        x0 = [a * (1 - mp.cos(mp.pi * (l + 0.5) / j)) / 2 for l in range(j)]
        w0 = [mp.mpf(a) / j for l in range(j)]
    guess = list(x0) + list(w0)
    sol = mp.findroot(eqs, guess, solver='mdnewton', tol=1e-50, maxsteps=200)
    x = [sol[l] for l in range(j)]
    w = [sol[j + l] for l in range(j)]
    return x, w


def check_rule(x, w, a, N):
    """Empirical error of the composite rule on f(s) = exp(cos s) * log(2 sin(s/2))
    plus a smooth part, exact value via Bessel series."""
    h = 2 * mp.pi / N
    # exact: integral of exp(cos s) log|2 sin(s/2)| ds = -2 pi sum I_k(1)/k
    exact = -2 * mp.pi * mp.nsum(lambda k: mp.besseli(k, 1) / k, [1, mp.inf])

    def f(s):
        return mp.exp(mp.cos(s)) * mp.log(2 * mp.sin(s / 2))

    tot = h * mp.fsum(f(k * h) for k in range(int(a), N - int(a) + 1))
    tot += h * mp.fsum(wl * (f(xl * h) + f(2 * mp.pi - xl * h))
                       for xl, wl in zip(x, w))
    return abs(tot - exact)


if __name__ == '__main__':
    j, a = 7, 5
    x_guess = ['6.531815708567918e-3', '9.086744584657729e-2',
               '3.967966533375878e-1', '1.027856640525646e+0',
               '1.945288592909266e+0', '2.980147933889640e+0',
               '3.998861349951123e+0']
    w_guess = ['2.462194198995203e-2', '1.701315866854178e-1',
               '4.609256358650077e-1', '7.947291148621894e-1',
               '1.008710414337933e+0', '1.036093649726216e+0',
               '1.004787656533285e+0']
    x, w = solve_rule(j, a, [mp.mpf(s) for s in x_guess],
                      [mp.mpf(s) for s in w_guess])
    print(f"// j={j} a={a}")
    for xl, wl in zip(x, w):
        print(f"  x={mp.nstr(xl, 17)}  w={mp.nstr(wl, 17)}")
    for N in (32, 64, 128, 256):
        err = check_rule(x, w, a, N)
        print(f"N={N:4d}  err={mp.nstr(err, 3)}")
    # observed order between successive N
    errs = [check_rule(x, w, a, N) for N in (64, 128, 256, 512)]
    for i in range(len(errs) - 1):
        print("slope", mp.nstr(mp.log(errs[i] / errs[i + 1]) / mp.log(2), 5))

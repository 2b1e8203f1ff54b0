#!/usr/bin/env python3
"""Independent reference-value generator (scipy/numpy stack).

Computes frozen expected values for the Rust test suite through a second,
unrelated implementation route: scipy special functions + numpy quadrature.
Run and redirect to reference_values.txt; constants quoted in Rust tests
cite this script.
"""

import numpy as np
from scipy.special import gammaln, eval_genlaguerre, eval_hermite, gammainc
from scipy.integrate import quad

np.set_printoptions(precision=17)


def leggauss_ab(n, a, b):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


def laguerre_fn_sq(n, alpha, x):
    """Squared orthonormal Laguerre function l_n^alpha(x)^2, log-stabilized.

    l_n^alpha(x) = sqrt(n!/(n+alpha)!) x^(alpha/2) e^(-x/2) L_n^alpha(x),
    orthonormal on (0, inf) w.r.t. dx.
    """
    x = np.asarray(x, dtype=float)
    lnc = gammaln(n + 1) - gammaln(n + alpha + 1)
    L = eval_genlaguerre(n, alpha, x)
    with np.errstate(divide="ignore"):
        lnx = np.where(x > 0, np.log(x), -np.inf)
    out = np.zeros_like(x)
    mask = (L != 0) & (x > 0)
    out[mask] = np.exp(lnc + alpha * lnx[mask] - x[mask]) * L[mask] ** 2
    if alpha == 0:
        out[x == 0] = np.exp(lnc) * eval_genlaguerre(n, alpha, 0.0) ** 2
    return out


def mu(r, j, x0, nodes=4000):
    """Disk-localization eigenvalue: integral over [0, x0] of l_n^a(x)^2 dx
    with n = min(j, r), a = |j - r|  (x = pi * s^2 radial substitution)."""
    n, a = min(j, r), abs(j - r)
    x, w = leggauss_ab(nodes, 0.0, x0)
    return float(np.sum(w * laguerre_fn_sq(n, a, x)))


def mu_vec(r, js, x0, nodes=4000):
    x, w = leggauss_ab(nodes, 0.0, x0)
    return np.array([np.sum(w * laguerre_fn_sq(min(j, r), abs(j - r), x)) for j in js])


def hermite_fn(n, t):
    """L2-normalized Hermite function, Gaussian convention exp(-pi t^2)."""
    t = np.asarray(t, dtype=float)
    lnc = 0.25 * np.log(2.0) - 0.5 * (n * np.log(2.0) + gammaln(n + 1))
    return np.exp(lnc - np.pi * t * t) * eval_hermite(n, np.sqrt(2 * np.pi) * t)


def stft_integral(j, r, x, xi, T=12.0, nodes=4000):
    """Defining integral: integral f(t) conj(g(t-x)) e^(-2 pi i xi t) dt."""
    t, w = leggauss_ab(nodes, -T, T)
    f = hermite_fn(j, t)
    g = hermite_fn(r, t - x)
    ker = np.exp(-2j * np.pi * xi * t)
    return np.sum(w * f * g * ker)


def main():
    print("== laguerre spot values ==")
    print("L_1^0(2)  =", eval_genlaguerre(1, 0, 2.0))
    print("L_2^1(1)  =", eval_genlaguerre(2, 1, 1.0))
    print("L_3^0(1.5)=", repr(eval_genlaguerre(3, 0, 1.5)))
    print("L_5^2(0.7)=", repr(eval_genlaguerre(5, 2, 0.7)))
    print("L_25^0(10.0)=", repr(eval_genlaguerre(25, 0, 10.0)))
    print("L_40^3(55.5)=", repr(eval_genlaguerre(40, 3, 55.5)))

    print("\n== gauss-legendre n=2 on [0,1] ==")
    x, w = leggauss_ab(2, 0.0, 1.0)
    print("nodes =", repr(x), "weights =", repr(w))

    print("\n== hermite function spot values ==")
    print("h_0(0)    =", repr(hermite_fn(0, 0.0)))
    print("h_1(0.5)  =", repr(hermite_fn(1, 0.5)))
    print("h_4(0.3)  =", repr(hermite_fn(4, 0.3)))
    print("h_7(-1.2) =", repr(hermite_fn(7, -1.2)))
    print("h_40(1.0) =", repr(hermite_fn(40, 1.0)))
    norm4 = quad(lambda t: hermite_fn(4, t) ** 2, -np.inf, np.inf)[0]
    print("||h_4||^2 =", repr(norm4))

    print("\n== stft defining-integral spot values (j, r, x, xi) ==")
    for (j, r, xx, xi) in [(0, 0, 0.3, -0.7), (1, 0, 0.5, 0.25), (0, 1, -0.4, 0.6),
                           (3, 2, 1.1, -0.2), (5, 5, 0.8, 0.8), (8, 3, -1.3, 0.45)]:
        v = stft_integral(j, r, xx, xi)
        print(f"V_(h{r}) h{j} ({xx},{xi}) = {v.real!r} {v.imag:+.17e} i")

    print("\n== weighted polyanalytic-basis spot values ==")
    # e^{i(j-r)arg z} * sign * l_min^(|j-r|)(pi |z|^2), sign = (-1)^max(r-j,0)
    for (j, r, zre, zim) in [(3, 1, 0.7, 0.4), (1, 3, 0.7, 0.4), (0, 1, 0.25, -0.33),
                             (6, 0, -0.9, 1.1), (4, 4, 1.0, 0.5)]:
        z = complex(zre, zim)
        n, a = min(j, r), abs(j - r)
        s2 = np.pi * abs(z) ** 2
        mag2 = laguerre_fn_sq(n, a, np.array([s2]))[0]
        sgn = (-1.0) ** max(r - j, 0)
        Lval = eval_genlaguerre(n, a, s2)
        val = sgn * np.sign(Lval) * np.sqrt(mag2) * np.exp(1j * (j - r) * np.angle(z))
        print(f"H~_{j},{r}({zre}+{zim}i) = {val.real!r} {val.imag:+.17e} i")

    print("\n== disk eigenvalues mu^r_(j,R), x0 = pi R^2 ==")
    print("mu^0_0(x0=1)  =", repr(mu(0, 0, 1.0)), " expect 1-exp(-1) =", repr(1 - np.exp(-1)))
    print("mu^0_3(x0=10) =", repr(mu(0, 3, 10.0)), " expect P(4,10)  =", repr(gammainc(4, 10.0)))
    print("mu^1_0(x0=1)  =", repr(mu(1, 0, 1.0)), " expect 1-2e^-1  =", repr(1 - 2 * np.exp(-1)))
    print("mu^1_1(x0=1)  =", repr(mu(1, 1, 1.0)))
    print("mu^1_2(x0=1)  =", repr(mu(1, 2, 1.0)))
    print("mu^2_5(x0=4)  =", repr(mu(2, 5, 4.0)))
    print("mu^1_1 - mu^1_0 at x0=0.5:", repr(mu(1, 1, 0.5) - mu(1, 0, 0.5)),
          " closed form e^-x x(1-x):", repr(np.exp(-0.5) * 0.5 * 0.5))
    print("crossing radius R* = 1/sqrt(pi) =", repr(1 / np.sqrt(np.pi)))

    print("\n== localization trace checks, disk area 20, basis M=104 ==")
    for r in range(4):
        tr = float(np.sum(mu_vec(r, range(104), 20.0)))
        print(f"sum_(j<104) mu^{r}_j(20) = {tr!r}   gap to 20 = {20 - tr:.3e}")

    print("\n== weyl counts, window level 1, delta=1/2 ==")
    for N in (25, 100, 400):
        M = max(2 * N, N + 64)
        mus = mu_vec(1, range(M), float(N), nodes=6000)
        cnt = int(np.sum(mus > 0.5))
        per = 2 * np.sqrt(np.pi * N)
        print(f"N={N}: count={cnt} |count-N|={abs(cnt - N)} perimeter={per:.6f} "
              f"normalized={abs(cnt - N) / per!r}")

    print("\n== L1 deviation of pure ensembles: D(r,N) = 2 sum_(j<N)(1-mu^r_j(N)) ==")
    for r in (0, 1, 2):
        for N in (25, 100, 400):
            mus = mu_vec(r, range(N), float(N), nodes=6000)
            dev = float(2 * np.sum(1 - mus))
            print(f"r={r} N={N}: D={dev!r}  D/sqrt(N)={dev / np.sqrt(N)!r}")

    print("\n== index-set selection (sorting disk eigenvalues), symdiff with 0..N-1 ==")
    for r in (0, 1, 2):
        for N in (1, 25, 100, 400):
            M = max(2 * N, N + 64)
            mus = mu_vec(r, range(M), float(N), nodes=6000)
            # sort desc, ties (<=1e-12) broken by ascending index
            order = sorted(range(M), key=lambda jj: (-mus[jj], jj))
            # re-pass: group near-ties and order by index inside groups
            sel = []
            i = 0
            while len(sel) < N:
                grp = [order[i]]
                while i + 1 < M and abs(mus[order[i + 1]] - mus[order[i]]) <= 1e-12:
                    i += 1
                    grp.append(order[i])
                sel.extend(sorted(grp))
                i += 1
            top = set(sel[:N])
            sym = len(top.symmetric_difference(set(range(N))))
            gap_cut = abs(mus[order[N - 1]] - mus[order[N]]) if M > N else float("nan")
            print(f"r={r} N={N}: symdiff={sym} symdiff/sqrtN={sym / np.sqrt(N):.4f} "
                  f"cut gap={gap_cut:.3e} top_sorted={sorted(top)[:6]}...")

    print("\n== 2x2 hermitian closed-form eigenvalues (a=0.7,b=0.1,c=0.3) ==")
    lam = 0.5 + np.sqrt(0.05), 0.5 - np.sqrt(0.05)
    print("lambda =", repr(lam[0]), repr(lam[1]))

    print("\n== radial law moments E[Y_j^2] = (j+r+1)/pi ==")
    for (r, j) in [(0, 0), (0, 5), (1, 3), (2, 7)]:
        f = lambda s: 2 * np.pi * s * s * s * laguerre_fn_sq(min(j, r), abs(j - r),
                                                             np.array([np.pi * s * s]))[0]
        m2 = quad(f, 0, 20, limit=200)[0]
        print(f"r={r} j={j}: E[Y^2]={m2!r} expect {(j + r + 1) / np.pi!r}")

    print("\n== hole probabilities, level r=1, J=0..9 ==")
    for R in (0.8, 1.0, 1.2, 1.4):
        p = 1.0
        for j in range(10):
            p *= 1 - mu(1, j, np.pi * R * R)
        print(f"R={R}: hole prob = {p!r}")
    print("r=0 J={0} R=0.6: exp(-pi R^2) =", repr(np.exp(-np.pi * 0.36)),
          "product form:", repr(1 - mu(0, 0, np.pi * 0.36)))

    print("\n== spectrum count example: disk radius 2.52, window level 0 ==")
    x0 = np.pi * 2.52 ** 2
    mus = mu_vec(0, range(120), x0)
    print("area =", repr(x0), " count above 1/2 =", int(np.sum(mus > 0.5)))

    print("\n== sampler bounding radius, (r=1, N=10), tail target 1e-6 ==")
    for xb in (25.0, 30.0, 35.0, 40.0):
        tail = float(np.sum(1 - mu_vec(1, range(10), xb)))
        print(f"x_b={xb}: sum tails = {tail:.3e}")

    print("\n== rectangle localization, window level 0, rect [-2,2]x[-2.5,2.5], M=84 ==")
    M = 84
    nq = 220
    gx, gwx = leggauss_ab(nq, -2.0, 2.0)
    gy, gwy = leggauss_ab(nq, -2.5, 2.5)
    X, Y = np.meshgrid(gx, gy, indexing="ij")
    W = np.outer(gwx, gwy).ravel()
    Z = (X + 1j * Y).ravel()
    s2 = np.pi * np.abs(Z) ** 2
    th = np.angle(Z)
    B = np.zeros((Z.size, M), dtype=complex)
    for j in range(M):
        lnc = -0.5 * gammaln(j + 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            mag = np.exp(lnc + 0.5 * j * np.log(np.maximum(s2, 1e-300)) - s2 / 2)
        B[:, j] = mag * np.exp(-1j * j * th)  # radial part of V_(h0) h_j, phase gauge dropped
    A = (B.conj().T * W) @ B
    evals = np.linalg.eigvalsh(A)[::-1]
    print("top eigenvalues:", repr(evals[:6]))
    print("trace =", repr(float(np.trace(A).real)), " area = 20")
    top20 = evals[:20]
    tail_mass = 20 - float(np.sum(evals))
    rest = float(np.sum(evals[20:]))
    dev = 20 - 20 + 2 * (rest + tail_mass)
    print("spectral L1 deviation (I = top 20):", repr(dev))
    print("tail_mass (beyond M=84):", repr(tail_mass))

    print("\n== negative-control check: annulus expectations, r=1 vs r=0 law, N=10 ==")
    edges = np.sqrt(np.arange(0, 11) / np.pi * 10 / 10 * np.arange(0, 11) ** 0)  # placeholder
    edges = np.sqrt(np.linspace(0, 16, 9) / np.pi)  # x0 from 0..16 in 8 bands
    for law in (1, 0):
        exp_counts = []
        for k in range(8):
            lo, hi = np.pi * edges[k] ** 2, np.pi * edges[k + 1] ** 2
            c = sum(mu(law, j, hi) - (mu(law, j, lo) if lo > 0 else 0.0) for j in range(10))
            exp_counts.append(c)
        print(f"law r={law}: {np.array(exp_counts)}")


if __name__ == "__main__":
    main()

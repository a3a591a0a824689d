"""Independent reference values frozen into the C++ tests.

Run with python3; prints the numbers quoted in tests/*.cpp.
"""
import numpy as np
import sympy as sp
from scipy import special, optimize
from scipy.integrate import solve_ivp


def rhs_full(x, wA, wB, W):
    sxA, syA, szA, sxB, syB, szB = x
    lx, ly = sxA + sxB, syA + syB
    return np.array([
        -wA * syA - W / 2 * sxA + szA * lx / 2,
        wA * sxA - W / 2 * syA + szA * ly / 2,
        W * (1 - szA) - (sxA * lx + syA * ly) / 2,
        -wB * syB - W / 2 * sxB + szB * lx / 2,
        wB * sxB - W / 2 * syB + szB * ly / 2,
        W * (1 - szB) - (sxB * lx + syB * ly) / 2,
    ])


def reduced_symbolic():
    d, W = sp.symbols("delta W", positive=True)
    x, y, z = sp.symbols("x y z")
    f = sp.Matrix([-d / 2 * y - W / 2 * x + z * x, d / 2 * x - W / 2 * y, W * (1 - z) - x**2])
    return d, W, (x, y, z), f


def first_lyapunov(delta, W, x0):
    """Re c1 of the Hopf normal form for a unit-norm critical eigenvector."""
    d, Ws, X, f = reduced_symbolic()
    subs = {d: delta, Ws: W}
    J = np.array(f.jacobian(X).subs(subs).subs(dict(zip(X, x0))), dtype=float)
    H = [np.array(sp.hessian(fi, X).subs(subs), dtype=float) for fi in f]
    B = lambda u, v: np.array([u @ h @ v for h in H])
    ev, V = np.linalg.eig(J)
    k = np.argmax(ev.imag)
    lam = ev[k]
    q = V[:, k] / np.linalg.norm(V[:, k])
    evT, U = np.linalg.eig(J.T)
    p = U[:, np.argmin(abs(evT - np.conj(lam)))]
    p = p / np.conj(np.vdot(p, q))  # <p, q> = conj(p) . q = 1
    w = lam.imag
    a = np.linalg.solve(J, B(q, np.conj(q)))
    b = np.linalg.solve(2j * w * np.eye(3) - J, B(q, q))
    c1 = 0.5 * (-2 * np.vdot(p, B(q, a)) + np.vdot(p, B(np.conj(q), b)))
    return lam, c1.real


def delta_minus(W):
    return np.sqrt(2 * W / 3 * (1.5 * W + 1 - np.sqrt(3 * W * W - 3 * W + 1)))


def ntss_reduced(delta, W):
    sz = (delta**2 + W**2) / (2 * W)
    lp = np.sqrt(2 * (1 - (W - 1) ** 2 - delta**2))
    sx = lp / 2
    return np.array([sx, sx * delta / W, sz])


def Z(k):
    K, E = special.ellipk(k * k), special.ellipe(k * k)
    k2 = k * k
    Y = 5 * k2 * ((2 * k2 - 1) * E + (1 - k2) * K) / (2 * (k2 * k2 - k2 + 1) * E - (2 - k2) * (1 - k2) * K)
    return 4 * k2 / ((1 - 2 * k2) * Y)


def reduced_cycle_multipliers(delta, W):
    def f(t, s):
        return [-delta / 2 * s[1] - W / 2 * s[0] + s[2] * s[0], delta / 2 * s[0] - W / 2 * s[1], W * (1 - s[2]) - s[0] ** 2]

    x = solve_ivp(f, (0, 5000), ntss_reduced(delta, W) + 1e-2, rtol=1e-11, atol=1e-13).y[:, -1]
    ev = lambda t, s: s[1]
    ev.direction = 1
    sol = solve_ivp(f, (0, 400), x, rtol=1e-12, atol=1e-14, events=ev, dense_output=True)
    t0, t1 = sol.t_events[0][-2], sol.t_events[0][-1]
    x0 = sol.sol(t0)

    def var(t, y):
        s, Q = y[:3], y[3:].reshape(3, 3)
        A = np.array([[-W / 2, -delta / 2, s[0]], [delta / 2, s[2] - W / 2, 0.0], [-s[0], -s[1], -W]])
        return np.concatenate([f(t, s), (A @ Q).ravel()])

    y = solve_ivp(var, (0, t1 - t0), np.concatenate([x0, np.eye(3).ravel()]), rtol=1e-12, atol=1e-14).y[:, -1]
    m = np.linalg.eigvals(y[3:].reshape(3, 3))
    return t1 - t0, sorted(m, key=lambda v: -abs(v))


def main():
    np.set_printoptions(precision=17)
    x = np.array([0.3, -0.4, 0.5, -0.2, 0.6, -0.7])
    print("rhs_full(0.5, 0.3) at", x, "=", repr(rhs_full(x, 0.25, -0.25, 0.3)))

    W = 0.95
    dH = delta_minus(W)
    lam, rc1 = first_lyapunov(dH, W, ntss_reduced(dH, W))
    print(f"NTSS Hopf W={W}: delta_H={dH:.15g} lambda={lam} Re c1 (unit q)={rc1:.15g}")
    lam, rc1 = first_lyapunov(1.5, 1.0, np.array([0.0, 0.0, 1.0]))
    print(f"TSS Hopf (1.5, 1.0): lambda={lam} Re c1 (unit q)={rc1:.15g}")

    for k in (0.3, 0.9):
        print(f"K({k})={special.ellipk(k*k):.17g} E({k})={special.ellipe(k*k):.17g}")
    sn, cn, dn, _ = special.ellipj(1.3, 0.8**2)
    print(f"sn,cn,dn(1.3, k=0.8) = {sn:.17g} {cn:.17g} {dn:.17g}")
    r = optimize.minimize_scalar(lambda k: -Z(k), bounds=(0.75, 0.9999), method="bounded", options={"xatol": 1e-10})
    print(f"max Z = {Z(r.x):.12g} at k = {r.x:.10g}; Z(0.99999) = {Z(0.99999):.10g}")

    J = np.array(sp.Matrix(reduced_symbolic()[3]).jacobian(reduced_symbolic()[2]).subs(
        {sp.Symbol("delta", positive=True): 0.3, sp.Symbol("W", positive=True): 0.6}).subs(
        dict(zip(reduced_symbolic()[2], ntss_reduced(0.3, 0.6)))), dtype=float)
    print("reduced NTSS (0.3,0.6) eigenvalues:", np.linalg.eigvals(J))

    for d in (0.64, 0.63):
        T, m = reduced_cycle_multipliers(d, 0.40)
        print(f"reduced cycle (delta={d}, W=0.40): T={T:.12g} |rho|={[abs(v) for v in m]}")


if __name__ == "__main__":
    main()

"""Dense multistart oracle for the free-energy bifurcation values of K2 and K3.

Independent of the Rust solver: builds the complexes, the connection matrix and
its inverse with numpy, then runs a batched Newton iteration in log-coordinates
from many Dirichlet(1) starts and counts distinct local minima. The beta values
where the number of local minima changes are located by bisection.

Usage: python3 python/bifurcation_oracle.py [--starts 10000]
"""
import argparse
import itertools

import numpy as np


def complete_complex(k):
    faces = []
    for size in range(1, k + 1):
        faces += [frozenset(c) for c in itertools.combinations(range(k), size)]
    return faces


def green(faces):
    n = len(faces)
    lp = np.eye(n)
    for i, j in itertools.product(range(n), range(n)):
        if i != j and faces[i] & faces[j]:
            lp[i, j] = 1.0
    return np.round(np.linalg.inv(lp))


def batch_newton(g, beta, q, iters=200):
    m, n = q.shape
    p = np.exp(q)
    lam = np.mean(2 * beta * p @ g + (1 - beta) * (q + 1), axis=1)
    for _ in range(iters):
        p = np.exp(q)
        r = np.concatenate([2 * beta * p @ g + (1 - beta) * (q + 1) - lam[:, None],
                            (p.sum(axis=1) - 1)[:, None]], axis=1)
        jac = np.zeros((m, n + 1, n + 1))
        jac[:, :n, :n] = 2 * beta * g[None, :, :] * p[:, None, :] + (1 - beta) * np.eye(n)[None]
        jac[:, :n, n] = -1.0
        jac[:, n, :n] = p
        try:
            step = np.linalg.solve(jac, -r[..., None])[..., 0]
        except np.linalg.LinAlgError:
            step = np.zeros_like(r)
        scale = np.minimum(1.0, 2.0 / np.maximum(np.abs(step[:, :n]).max(axis=1), 1e-300))
        q = q + scale[:, None] * step[:, :n]
        lam = lam + scale * step[:, n]
    p = np.exp(q)
    r = np.concatenate([2 * beta * p @ g + (1 - beta) * (q + 1) - lam[:, None],
                        (p.sum(axis=1) - 1)[:, None]], axis=1)
    ok = np.all(np.isfinite(r), axis=1) & (np.abs(r).max(axis=1) < 1e-10)
    return q[ok]


def morse_index(g, beta, q):
    psi = np.exp(q / 2)
    k = 2 * beta * psi[:, None] * g * psi[None, :] + (1 - beta) * np.eye(len(q))
    proj = np.eye(len(q)) - np.outer(psi, psi)
    ev = np.linalg.eigvalsh(proj @ k @ proj)
    ev = np.delete(ev, np.argmin(np.abs(ev)))
    return int(np.sum(ev < 0))


def critical_set(g, beta, starts, seed):
    rng = np.random.default_rng(seed)
    q0 = np.log(rng.dirichlet(np.ones(len(g)), size=starts))
    found = []
    for q in batch_newton(g, beta, q0):
        p = np.exp(q)
        if not any(np.abs(p - np.exp(s)).max() < 1e-6 for s in found):
            found.append(q)
    return [(np.exp(q), morse_index(g, beta, q)) for q in found]


def minima_count(g, beta, starts, seed):
    return sum(1 for _, idx in critical_set(g, beta, starts, seed) if idx == 0)


def bisect(g, lo, hi, starts, seed, tol=1e-6):
    c_lo = minima_count(g, lo, starts, seed)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if minima_count(g, mid, starts, seed) == c_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--starts", type=int, default=10000)
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()

    for k, brackets in [(2, [(0.30, 0.50)]), (3, [(0.60, 0.672), (0.672, 0.70)])]:
        g = green(complete_complex(k))
        for lo, hi in brackets:
            a, b = bisect(g, lo, hi, args.starts, args.seed)
            print(f"K{k}: minima count {minima_count(g, a, args.starts, args.seed)} -> "
                  f"{minima_count(g, b, args.starts, args.seed)} in [{a:.7f}, {b:.7f}]")
    g = green(complete_complex(3))
    pts = critical_set(g, 0.9, args.starts, args.seed)
    print(f"K3 beta=0.9: {len(pts)} critical points, "
          f"{sum(1 for _, i in pts if i == 0)} local minima")
    for p, idx in sorted(pts, key=lambda t: (t[1], t[0].tolist())):
        f = 0.9 * p @ g @ p + 0.1 * np.sum(p * np.log(p))
        print(f"   index {idx}  F={f:.10f}")


if __name__ == "__main__":
    main()

"""Regenerates coeff_oracle.json with 60-digit mpmath arithmetic.

    python3 gen_coeff_oracle.py > coeff_oracle.json
"""
import json
import random

from mpmath import mp, mpf, pi, sin, sinh, sqrt

mp.dps = 60


def s_fun(k, x):
    if k == 0 or x == 0:
        return mpf(1)
    if k > 0:
        y = sqrt(k) * x
        return sin(y) / y
    y = sqrt(-k) * x
    return sinh(y) / y


def sigma(k, n, t, x):
    if k * x * x >= n * pi * pi:
        return None
    if x == 0 or k == 0:
        return mpf(t)
    return t * s_fun(k / n, t * x) / s_fun(k / n, x)


def tau(k, n, t, x):
    if n == 1:
        return mpf(t)
    s = sigma(k, n - 1, t, x)
    if s is None:
        return None
    return mpf(t) ** (1 / mpf(n)) * s ** (1 - 1 / mpf(n))


def num(v):
    return "inf" if v is None else float(v)


def row(k, n, t, x, kind):
    # inputs are f64 values; evaluate them exactly
    K, N, T, X = (mpf(v) for v in (k, n, t, x))
    return {
        "kind": kind,
        "k": k,
        "n": n,
        "t": t,
        "theta": x,
        "s_fun": num(s_fun(K, X)),
        "sigma": num(sigma(K, N, T, X)),
        "tau": num(tau(K, N, T, X)),
    }


def main():
    rng = random.Random(20240611)
    rows = []
    while len(rows) < 160:
        k = rng.choice([0.0, rng.uniform(-5, 5), rng.uniform(0, 3)])
        n = rng.choice([1.0, 2.0, rng.uniform(1, 6)])
        t = rng.choice([0.0, 1.0, 0.5, rng.random(), rng.random()])
        x = rng.choice([0.0, rng.uniform(0, 4)])
        # stay clear of the poles of both coefficients
        if k > 0 and k * x * x >= 0.8 * n * float(pi) ** 2:
            continue
        if k > 0 and n > 1 and k * x * x >= 0.8 * (n - 1) * float(pi) ** 2:
            continue
        rows.append(row(k, n, t, x, "value"))
    while len(rows) < 180:
        k = rng.uniform(0.5, 5)
        n = rng.uniform(1, 4)
        t = rng.random()
        x = float(pi) * (n / k) ** 0.5 * rng.uniform(1.0, 2.0)
        rows.append(row(k, n, t, x, "value"))
    while len(rows) < 200:
        k = rng.uniform(0.5, 5)
        n = rng.uniform(1, 4)
        t = rng.random()
        side = 1 + (1e-6 if len(rows) % 2 else -1e-6)
        x = float(pi) * (n / k) ** 0.5 * side
        rows.append(row(k, n, t, x, "branch"))
    print(json.dumps(rows, indent=1))


if __name__ == "__main__":
    main()

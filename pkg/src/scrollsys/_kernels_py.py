"""Pure-Python reference kernels, used when the compiled extension is unavailable.

Same signatures and results as the Cython module; arbitrary-size ints make
the modular arithmetic trivially exact.
"""

from __future__ import annotations

import numpy as np


def condition_matrix(exp_i, exp_k, xs, ys, mults, p):
    p = int(p)
    exps = list(zip((int(i) for i in exp_i), (int(k) for k in exp_k)))
    max_i = max((i for i, _ in exps), default=0)
    max_k = max((k for _, k in exps), default=0)
    rows = []
    for x, y, m in zip(xs, ys, mults):
        x, y, m = int(x), int(y), int(m)
        xpow = [1 % p]
        for _ in range(max_i):
            xpow.append(xpow[-1] * x % p)
        ypow = [1 % p]
        for _ in range(max_k):
            ypow.append(ypow[-1] * y % p)
        for alpha in range(m):
            for beta in range(m - alpha):
                row = []
                for i, k in exps:
                    if i < alpha or k < beta:
                        row.append(0)
                        continue
                    fx = 1
                    for t in range(alpha):
                        fx = fx * (i - t) % p
                    fy = 1
                    for t in range(beta):
                        fy = fy * (k - t) % p
                    row.append(fx * fy % p * xpow[i - alpha] % p * ypow[k - beta] % p)
                rows.append(row)
    out = np.zeros((len(rows), len(exps)), dtype=np.uint64)
    for r, row in enumerate(rows):
        out[r, :] = row
    return out


def rank_mod_p(mat, p):
    p = int(p)
    rows = [[int(x) % p for x in row] for row in np.asarray(mat).tolist()]
    if not rows or not rows[0]:
        return 0
    nr, nc = len(rows), len(rows[0])
    rank = 0
    for col in range(nc):
        if rank == nr:
            break
        piv = next((i for i in range(rank, nr) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        prow = [x * inv % p for x in rows[rank]]
        rows[rank] = prow
        for i in range(rank + 1, nr):
            f = rows[i][col]
            if f:
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], prow)]
        rank += 1
    return rank

import numpy as np


def wynn_epsilon(partial_sums):
    """Limit of a sequence of partial sums by Wynn's epsilon table.

    Returns (estimate, error): the even-column estimate that changes least from the
    previous even column, and that change. Works for real or complex sequences.
    """
    S = np.asarray(partial_sums); N = len(S)
    dt = np.result_type(S.dtype, float)
    eps = np.zeros((N + 1, N), dtype=dt); eps[1, :] = S
    tiny = np.finfo(float).eps
    for k in range(2, N + 1):
        delta = eps[k - 1, 1:N - k + 2] - eps[k - 1, :N - k + 1]
        rec = np.zeros_like(delta); ok = np.abs(delta) > tiny * np.maximum(np.abs(eps[k - 1, 1:N - k + 2]), 1e-300)
        rec[ok] = 1.0 / delta[ok]
        eps[k, :N - k + 1] = eps[k - 2, 1:N - k + 2] + rec
    # eps[2j+1, i] is the 2j-th epsilon column; take its last entry
    cols = [eps[k, N - k] for k in range(1, N + 1, 2)]
    best, err = cols[0], np.inf
    for prev, cur in zip(cols, cols[1:]):
        if np.isfinite(cur) and abs(cur - prev) < err:
            best, err = cur, abs(cur - prev)
    return best, float(err)


def euler_transform(terms):
    """Partial sums of the Euler transform of sum_k (-1)^k terms[k].

    sum_n (-1)^n Delta^n a_0 / 2^(n+1) with forward differences Delta.
    """
    d = np.asarray(terms); out = np.empty(len(d), dtype=np.result_type(d.dtype, float)); acc = 0.0
    for n in range(len(out)):
        acc = acc + (-1) ** n * d[0] / 2.0 ** (n + 1); out[n] = acc
        d = np.diff(d)
    return out

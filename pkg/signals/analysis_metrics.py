import numpy as np
def linear_fit(x, y, weights=None):
    x = np.asarray(x, dtype=float).ravel(); y = np.asarray(y, dtype=float).ravel()
    w = np.ones_like(x) if weights is None else np.asarray(weights, dtype=float).ravel()
    m = np.isfinite(x) & np.isfinite(y) & (w > 0); x = x[m]; y = y[m]; w = w[m]
    if len(x) < 2: return dict(slope=np.nan, intercept=np.nan, r2=np.nan)
    X = np.vstack([x, np.ones_like(x)]).T; sw = np.sqrt(w)
    beta, *_ = np.linalg.lstsq(X*sw[:, None], y*sw, rcond=None); yhat = X @ beta
    ss_res = float(np.sum(w*(y - yhat)**2)); ss_tot = float(np.sum(w*(y - np.average(y, weights=w))**2) + 1e-300)
    r2 = 1 - ss_res/ss_tot; return dict(slope=float(beta[0]), intercept=float(beta[1]), r2=float(r2))
def weighted_spread(values, weights):
    v = np.asarray(values, dtype=float); w = np.asarray(weights, dtype=float)
    mean = float(np.average(v, weights=w)); return mean, float(np.sqrt(np.average((v - mean)**2, weights=w)))
def scaled_increments(xs, values, power=0.5):
    xs = np.asarray(xs, dtype=float); v = np.asarray(values)
    return np.abs(np.diff(v))*xs[:-1]**power

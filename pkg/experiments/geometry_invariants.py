import json, time, numpy as np
from core.geometry import MoebiusElt, PointH3, apply, delta, classify, fixed_points
from groups.bianchi import BianchiGroup, enumerate_elements
def random_isometry(rng):
    m = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    return MoebiusElt.from_array(m)
def oracle(M):
    if M.is_identity(): return "identity"
    pts = fixed_points(M)
    if len(pts) == 1: return "parabolic"
    p = next(q for q in pts if q is not None)
    mult = M.a / M.d if abs(M.c) < 1e-12 else 1 / (M.c * p + M.d) ** 2
    return "elliptic" if abs(abs(mult) - 1) < 1e-8 else "loxodromic"
def main(n=1000, H=3, tol=1e-9):
    t0 = time.perf_counter(); rng = np.random.default_rng(0); worst = 0.0
    for _ in range(n):
        M = random_isometry(rng)
        P = PointH3(complex(*rng.standard_normal(2)), float(rng.uniform(0.2, 3)))
        Q = PointH3(complex(*rng.standard_normal(2)), float(rng.uniform(0.2, 3)))
        d0 = delta(P, Q); worst = max(worst, abs(delta(apply(M, P), apply(M, Q)) - d0) / d0)
    mism = [str(M) for M in enumerate_elements(BianchiGroup(1), H) if classify(M).value != oracle(M)]
    print(f"max relative delta drift {worst:.2e}; {len(mism)} classification mismatches")
    out = dict(n=n, max_delta_drift=worst, H=H, mismatches=mism[:20], passed=bool(worst <= tol and not mism),
               seconds=time.perf_counter() - t0)
    with open("results/geometry_invariants.json", "w") as f: json.dump(out, f, indent=2)
if __name__ == "__main__": main()

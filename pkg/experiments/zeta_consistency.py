import json, time, numpy as np
from core.geometry import MoebiusElt
from groups.bianchi import BianchiGroup, LoxClass, expand_powers, loxodromic_classes, reduced_system
from spectral.zeta import log_zeta_partial, zeta_logderiv_series
def synthetic_classes():
    spec = [(2.0 + 0j, 1, -1 + 0j), (1.5 + 1.2j, 1, -1 + 0j), (2.5 + 0.5j, 2, 1j)]
    return [LoxClass(rep=MoebiusElt.from_array(np.diag([a, 1 / a])), a0=a, N0=abs(a) ** 2, m=m, zeta0=z, reduced=True)
            for a, m, z in spec]
def compare(prim, s_grid, n_max=24, delta=1e-4):
    full = expand_powers(prim, n_max); rows = []
    for s in s_grid:
        series = zeta_logderiv_series(s, full)
        numeric = (log_zeta_partial(s + delta, prim) - log_zeta_partial(s - delta, prim)) / (2 * delta)
        rows.append(dict(s=s, series=series.real, numeric=numeric.real, rel_err=abs(series - numeric) / abs(series)))
    return rows
def main(tol=1e-6):
    t0 = time.perf_counter(); grid = (2.0, 2.5, 3.0)
    rows = [dict(source="synthetic", **r) for r in compare(synthetic_classes(), grid)]
    prim = reduced_system(loxodromic_classes(BianchiGroup(1), 30.0, 3))
    rows += [dict(source="picard", **r) for r in compare(prim, grid)]
    for r in rows: print(f"{r['source']} s={r['s']}: rel err {r['rel_err']:.2e}")
    out = dict(tol=tol, rows=rows, picard_classes=len(prim), passed=all(r["rel_err"] <= tol for r in rows),
               seconds=time.perf_counter() - t0)
    with open("results/zeta_consistency.json", "w") as f: json.dump(out, f, indent=2)
if __name__ == "__main__": main()

import json, math, time, numpy as np
from core.geometry import phi_s
from core.specfun import g_from_h, resolvent_pair, shc_forward
def main(g_tol=1e-7, h_tol=1e-6):
    t0 = time.perf_counter(); pair = resolvent_pair(1.5, 3.0)
    g_err = max(abs(g_from_h(pair.h, x) - pair.g(x)) for x in np.linspace(0.0, 3.0, 13))
    h_rows = []
    for s0 in (2.0, 2.5):
        k = lambda t, s0=s0: phi_s(t, s0) / (4 * math.pi)
        for s in (0.5, 1.2, 1.7 + 0.3j):
            value = shc_forward(k, s); expected = 1 / (s0 * s0 - s * s)
            h_rows.append(dict(s0=s0, s=[complex(s).real, complex(s).imag], value=[value.real, value.imag],
                               rel_err=abs(value - expected) / abs(expected)))
    h_err = max(r["rel_err"] for r in h_rows)
    print(f"g_from_h max error {g_err:.2e}; shc max relative error {h_err:.2e}")
    out = dict(g_max_err=g_err, shc=h_rows, shc_max_err=h_err, passed=bool(g_err <= g_tol and h_err <= h_tol),
               seconds=time.perf_counter() - t0)
    with open("results/transform_pairs.json", "w") as f: json.dump(out, f, indent=2)
if __name__ == "__main__": main()

import json, math, time
from spectral.zeta import cusp_integral_series, cusp_integral_quadrature, cusp_integral_closed_form
def main(tol=1e-8):
    t0 = time.perf_counter(); rows = []
    for s in (1.5, 2.0, 3.0):
        for t in (math.pi / 3, math.pi / 2, 2 * math.pi / 3, math.pi):
            ser = cusp_integral_series(s, t); quad = cusp_integral_quadrature(s, t); closed = cusp_integral_closed_form(s, t)
            rows.append(dict(s=s, t_over_pi=t / math.pi, series=ser.real, quadrature=quad.real, closed_form=closed.real,
                             diff=abs(ser - quad), diff_closed=abs(ser - closed)))
    worst = max(r["diff"] for r in rows); print(f"max |series - quadrature| = {worst:.2e}")
    out = dict(tol=tol, rows=rows, max_diff=worst, passed=worst <= tol, seconds=time.perf_counter() - t0)
    with open("results/cusp_integral_grid.json", "w") as f: json.dump(out, f, indent=2)
if __name__ == "__main__": main()

import json, math, time
from lattice.sums import Lattice, LatticeCharacter, L_direct
from lattice.kronecker import L_kronecker, L_kronecker_swapped
CASES = [("i", 1j, 0.5, 0.0), ("hex", complex(0.5, math.sqrt(3) / 2), 1 / 3, 1 / 4),
         ("i_v", 1j, 0.0, 0.5), ("i_mixed", 1j, 0.25, 1 / 3), ("skew", complex(0.3, 1.1), 0.2, 0.7)]
def main(x_max=1e6, tol=5e-3):
    rows = []
    for tag, tau, u, v in CASES:
        t0 = time.perf_counter(); lat, psi = Lattice(tau), LatticeCharacter(u, v)
        direct = L_direct(lat, psi, x_max); closed = L_kronecker(lat, psi)
        rows.append(dict(case=tag, tau_re=tau.real, tau_im=tau.imag, u=u, v=v, L_direct=direct.value.real,
                         L_direct_im=direct.value.imag, L_kronecker=closed, swapped=L_kronecker_swapped(lat, psi),
                         diff=abs(direct.value - closed), tail_estimate=direct.tail_estimate,
                         seconds=time.perf_counter() - t0))
        print(f"{tag}: direct={direct.value.real:.6f} kronecker={closed:.6f} diff={rows[-1]['diff']:.2e}")
    out = dict(x_max=x_max, tol=tol, rows=rows, passed=all(r["diff"] <= tol for r in rows))
    with open("results/kronecker_crosscheck.json", "w") as f: json.dump(out, f, indent=2)
if __name__ == "__main__": main()

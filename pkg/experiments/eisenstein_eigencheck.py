import json, time
from core.geometry import PointH3
from groups.bianchi import BianchiGroup
from groups.repchar import UnitaryRepSpec
from spectral.eisenstein import EisensteinSampler, laplace_eigen_check
def main(s=1.8, H=6, tol=1e-3):
    t0 = time.perf_counter(); G = BianchiGroup(1)
    sampler = EisensteinSampler(G, UnitaryRepSpec.trivial(), [1.0], s, H)
    P = PointH3(0j, 3.0); ev = sampler.evaluate(P)
    res = laplace_eigen_check(sampler, s, P)
    print(f"E(P, {s}) = {ev.value[0].real:.6f}, eigen residual {res:.2e}")
    out = dict(s=s, H=H, value=ev.value[0].real, tail=ev.tail_indicator, n_cosets=ev.n_cosets, residual=res,
               passed=res <= tol, seconds=time.perf_counter() - t0)
    with open("results/eisenstein_eigencheck.json", "w") as f: json.dump(out, f, indent=2)
if __name__ == "__main__": main()

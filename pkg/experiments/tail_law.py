import json, time, numpy as np
from lattice.sums import Lattice, LatticeCharacter, shell_sums
from core.ladder import geometric_ladder
def main(s=1.0, p=4e5):
    t0 = time.perf_counter(); lat, psi = Lattice(1j), LatticeCharacter(0.5, 0.0)
    w = geometric_ladder(100.0, 10 ** 0.25, 13)
    stat = np.abs(shell_sums(lat, psi, w, p, s)) * w ** (s - 0.5)
    ratio = stat / stat[0]
    print("scaled tails:", np.round(stat, 4))
    out = dict(s=s, p=p, w=w.tolist(), statistic=stat.tolist(), ratio_to_w100=ratio.tolist(),
               max_ratio=float(ratio.max()), passed=bool(ratio.max() <= 10.0), seconds=time.perf_counter() - t0)
    with open("results/tail_law.json", "w") as f: json.dump(out, f, indent=2)
if __name__ == "__main__": main()

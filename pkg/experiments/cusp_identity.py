import json, time, numpy as np
from groups.bianchi import BianchiGroup, cuspidal_elliptic_classes, verify_cusp_identity
from groups.characters import nontrivial_character
from groups.repchar import UnitaryRepSpec, decompose_restriction
def run_case(d, rep, H):
    G = BianchiGroup(d); classes = cuspidal_elliptic_classes(G, H)
    if rep == "trivial":
        spec, traces = UnitaryRepSpec.trivial(), None
    else:
        chi = nontrivial_character(d); spec = UnitaryRepSpec.from_character(G, chi)
        traces = [chi.exact(np.array(c.ring_rep)) for c in classes]
    data = decompose_restriction(spec, G)
    res = verify_cusp_identity(G, data, classes, traces)
    return dict(d=d, rep=rep, H=H, classes=len(classes), k_inf=data.k_inf, l_inf=data.l_inf, index=data.index,
                residual=str(res), complete=all(c.complete for c in classes), holds=res == 0)
def main(H=3):
    t0 = time.perf_counter()
    rows = [run_case(d, rep, H) for d in (1, 3) for rep in ("trivial", "nontrivial")]
    for r in rows: print(f"d={r['d']} {r['rep']}: k={r['k_inf']} l={r['l_inf']} residual={r['residual']}")
    out = dict(rows=rows, passed=all(r["holds"] for r in rows), seconds=time.perf_counter() - t0)
    with open("results/cusp_identity.json", "w") as f: json.dump(out, f, indent=2)
if __name__ == "__main__": main()

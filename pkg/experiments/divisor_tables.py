import json
from fractions import Fraction
from spectral.zeta import ScatteringInput, case_root_order, residue_table
def main(n_min=-12):
    rows = []; ok = True
    for case, k, l in [(1, 2, 2), (2, 1, 1), (2, 0, 3), (2, 2, 5), (3, 1, 1), (3, 0, 1), (3, 0, 2), (3, 2, 3)]:
        table = residue_table(case, k, l, ScatteringInput(trS0=float(k)), n_min)
        N = table.root_order(); rows.append(dict(case=case, k_inf=k, l_inf=l, root_order=N, case_root_order=case_root_order(case),
                                                 residues={str(loc): str(r) for loc, r in table.entries}))
        ok &= (N == 1) if case in (1, 2) else (6 % N == 0)
        print(f"case {case} k={k} l={l}: minimal root order {N}")
    eis = residue_table(3, 1, 1, ScatteringInput(1.0), n_min)
    ok &= eis.residue(-3) == Fraction(-1, 3) and eis.residue(-1) == Fraction(2, 3)
    out = dict(rows=rows, eisenstein_root_order=eis.root_order(), case3_root_order=case_root_order(3),
               passed=bool(ok and case_root_order(3) == 6 and case_root_order(2) == 1 and case_root_order(1) == 1))
    with open("results/divisor_tables.json", "w") as f: json.dump(out, f, indent=2)
if __name__ == "__main__": main()

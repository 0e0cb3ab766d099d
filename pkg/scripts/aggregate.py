import os, json, glob, pandas as pd
ROWS = ["kronecker_crosscheck", "cusp_integral_grid", "cusp_identity", "zeta_consistency", "divisor_tables",
        "geometry_invariants", "cli_determinism"]
def load_json(fp):
    with open(fp) as f: return json.load(f)
def main():
    os.makedirs("results", exist_ok=True)
    tables = {}; status = []
    for p in sorted(glob.glob("results/*.json")):
        name = os.path.basename(p)[:-5]; obj = load_json(p)
        if "passed" not in obj: continue
        status.append(dict(experiment=name, passed=obj["passed"], seconds=obj.get("seconds")))
        if name in ROWS and obj.get("rows"):
            df = pd.DataFrame(obj["rows"])
            for col in df.columns:
                if df[col].map(lambda v: isinstance(v, (dict, list))).any(): df[col] = df[col].map(json.dumps)
            tables[name] = df
    # scalar experiments
    p = "results/tail_law.json"
    if os.path.exists(p):
        obj = load_json(p); tables["tail_law"] = pd.DataFrame(dict(w=obj["w"], statistic=obj["statistic"], ratio=obj["ratio_to_w100"]))
    p = "results/transform_pairs.json"
    if os.path.exists(p): tables["transform_pairs"] = pd.DataFrame(load_json(p)["shc"])
    p = "results/eisenstein_eigencheck.json"
    if os.path.exists(p): tables["eisenstein_eigencheck"] = pd.DataFrame([load_json(p)])
    if status: tables["acceptance_status"] = pd.DataFrame(status)
    for name, df in tables.items():
        df.to_csv(f"results/{name}.csv", index=False)
    with open("results/summary_report.md", "w") as f:
        f.write("# Summary tables\n" + "\n".join(f"- {k}" for k in tables.keys()) + "\n")
        if status:
            f.write("\n## Acceptance\n\n" + "\n".join(f"- {r['experiment']}: {'pass' if r['passed'] else 'FAIL'}" for r in status) + "\n")
    print("Wrote tables:", list(tables.keys()))
if __name__ == "__main__":
    main()

import json, os, tempfile
from cli.main import run
COMMANDS = [["zeta", "divisor", "--case", "3", "--k", "1", "--l", "1", "--trS0", "1", "--n-min", "-6"],
            ["group", "verify-identity", "--d", "1", "--rep", "trivial"],
            ["lattice", "lsum", "--tau", "i", "--u", "0.5", "--v", "0", "--xmax", "1e4"],
            ["zeta", "cusp-integral", "--s", "2", "--t", "1.5707963267948966"]]
def main():
    rows = []
    with tempfile.TemporaryDirectory() as tmp:
        for i, cmd in enumerate(COMMANDS):
            bodies = []
            for k in range(2):
                path = os.path.join(tmp, f"r{i}_{k}.json"); code = run(cmd + ["--out", path])
                with open(path) as f: bodies.append(json.dumps(json.load(f)["body"], sort_keys=True))
            rows.append(dict(command=" ".join(cmd), exit_code=code, identical=bodies[0] == bodies[1]))
            print(f"{rows[-1]['command']}: identical={rows[-1]['identical']}")
    out = dict(rows=rows, passed=all(r["identical"] and r["exit_code"] == 0 for r in rows))
    with open("results/cli_determinism.json", "w") as f: json.dump(out, f, indent=2)
if __name__ == "__main__": main()

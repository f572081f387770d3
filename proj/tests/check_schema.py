"""Runs every subcommand with --json and validates the reports."""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

exe, root = sys.argv[1], Path(sys.argv[2])
corpus = root / "corpus"
schema = json.loads((root / "schemas" / "report.schema.json").read_text())
out_dir = Path(tempfile.mkdtemp())


def c(name):
    return str(corpus / name)


RUNS = [
    ["classify", "--phi", "forall x,y. !(edge(x,y) & edge(y,x))"],
    ["classify", "--phi", "forall x,y. R(x,y) | R(y,x)", "--define", "R(x,y) := exists t. Q(x,y,t)"],
    ["eval", "-M", c("gn2.struct"), "--phi", "exists y. R(x,y)", "--assign", "x=1"],
    ["forbid", "-K", c("classes.spec"), "--class", "dag", "-n", "3"],
    ["forbid", "-K", c("classes.spec"), "--class", "dag", "-n", "2", "--kp", c("classes.spec"), "--kp-class", "loopless"],
    ["refute", "-T", c("acyclic.fot"), "-O", c("cycle_obs.txt")],
    ["refute", "-T", c("acyclic.fot"), "-O", c("chain_obs.txt")],
    ["fit", "-K", c("classes.spec"), "--class", "two_or_more", "-B", "3"],
    ["fit", "-K", c("classes.spec"), "--class", "g_moves", "-B", "2", "--fg"],
    ["synth-psi", "-K", c("classes.spec"), "--class", "dag", "-n", "2", "-o", str(out_dir / "psi.fot")],
    ["synth-chi", "--sig", "sig s { fun f/1; const c }", "-n", "2"],
    ["vc", "-M", c("gn2.struct"), "--phi", "R(x;y)"],
    ["vc-sentence", "--phi", "R(x;y)", "-n", "2", "-M", c("gn2.struct"), "-o", str(out_dir / "vc.fot")],
    ["vc-param", "--family", "fatline", "--points", c("triangle_points.csv"), "--grid", c("fatline_grid.csv")],
    ["fraisse", "-K", c("classes.spec"), "--class", "small_orders", "-B", "3"],
    ["generic", "-K", c("classes.spec"), "--class", "digraphs", "--level", "2", "-o", str(out_dir / "g.struct")],
    ["markov", "stationary", "-c", c("lazy.json")],
    ["markov", "simulate", "-c", c("coin.json"), "--horizon", "5"],
    ["markov", "realize", "-c", c("coin.json"), "--config", c("see_heads.json"), "--horizon", "10"],
    ["markov", "realize", "-c", c("coin.json"), "--config", c("heads_then_tails.json"), "--horizon", "10",
     "--mode", "montecarlo", "--trials", "200"],
    ["corpus", "verify", "--dir", str(corpus)],
    ["gn", "-n", "2"],
    ["particle", "-O", c("particle_bent.csv")],
    ["gn", "-n", "9"],
    ["classify", "--phi", "forall x. ("],
]

failed = 0
for args in RUNS:
    proc = subprocess.run([exe, "--json", *args], capture_output=True, text=True)
    try:
        jsonschema.validate(json.loads(proc.stdout), schema)
        print("ok  ", " ".join(args[:2]))
    except (json.JSONDecodeError, jsonschema.ValidationError) as e:
        failed += 1
        print("FAIL", " ".join(args), "->", str(e).splitlines()[0])
sys.exit(1 if failed else 0)

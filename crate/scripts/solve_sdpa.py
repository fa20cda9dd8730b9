#!/usr/bin/env python3
"""Solve an SDPA sparse (.dat-s) problem with cvxopt.

Reads `min c.x s.t. sum_i F_i x_i - F_0 >= 0` and prints the optimal
value of `-c.x` (the bound, for files written by `subspace-bounds export`)
as JSON. Pairs of opposite rows in diagonal blocks are turned back into
equalities, since cvxopt needs a strictly feasible interior.

usage: solve_sdpa.py FILE.dat-s [--tol 1e-9]
"""
import argparse
import json
import math
import re
import sys

from cvxopt import matrix, solvers, spmatrix


def parse(path):
    tokens = []
    with open(path) as fh:
        for line in fh:
            line = line.split('"')[0].split("*")[0].strip()
            if line:
                tokens.extend(t for t in re.split(r"[\s,{}()]+", line) if t)
    m = int(tokens[0])
    nblocks = int(tokens[1])
    sizes = [int(t) for t in tokens[2 : 2 + nblocks]]
    pos = 2 + nblocks
    c = [float(t) for t in tokens[pos : pos + m]]
    pos += m
    entries = []
    while pos + 5 <= len(tokens):
        mat, blk, i, j = (int(t) for t in tokens[pos : pos + 4])
        entries.append((mat, blk - 1, i - 1, j - 1, float(tokens[pos + 4])))
        pos += 5
    return m, sizes, c, entries


def build(m, sizes, c, entries):
    # linear rows: sum_i a_i x_i - a_0 >= 0, one per diagonal position
    rows = {}
    dense = {b: [] for b, s in enumerate(sizes) if s > 0}
    for mat, blk, i, j, v in entries:
        if sizes[blk] < 0:
            rows.setdefault((blk, i), {})[mat] = v
        else:
            dense[blk].append((mat, i, j, v))
    ineq, eq = [], []
    seen = {}
    for key in sorted(rows):
        row = rows[key]
        sig = tuple(sorted((k, round(v, 12)) for k, v in row.items()))
        neg = tuple(sorted((k, round(-v, 12)) for k, v in row.items()))
        if neg in seen and seen[neg] is not None:
            ineq.remove(seen[neg])
            eq.append(seen[neg])
            seen[neg] = None
            continue
        seen[sig] = row
        ineq.append(row)
    # cvxopt: G x + s = h, s >= 0  <=>  h - G x >= 0
    gl_i, gl_j, gl_v, hl = [], [], [], []
    for r, row in enumerate(ineq):
        for mat, v in row.items():
            if mat > 0:
                gl_i.append(r)
                gl_j.append(mat - 1)
                gl_v.append(-v)
        hl.append(-row.get(0, 0.0))
    Gl = spmatrix(gl_v, gl_i, gl_j, (len(ineq), m))
    hl = matrix(hl, (len(ineq), 1))
    Gs, hs = [], []
    for blk, items in dense.items():
        n = sizes[blk]
        gi, gj, gv = [], [], []
        h = matrix(0.0, (n, n))
        for mat, i, j, v in items:
            cells = {(i, j), (j, i)}
            for a, b in cells:
                if mat == 0:
                    h[a, b] = -v
                else:
                    gi.append(a + b * n)
                    gj.append(mat - 1)
                    gv.append(-v)
        Gs.append(spmatrix(gv, gi, gj, (n * n, m)))
        hs.append(h)
    A = b = None
    if eq:
        ai, aj, av, bv = [], [], [], []
        for r, row in enumerate(eq):
            for mat, v in row.items():
                if mat > 0:
                    ai.append(r)
                    aj.append(mat - 1)
                    av.append(v)
            bv.append(row.get(0, 0.0))
        A = spmatrix(av, ai, aj, (len(eq), m))
        b = matrix(bv, (len(eq), 1))
    return matrix(c), Gl, hl, Gs, hs, A, b


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("file")
    ap.add_argument("--tol", type=float, default=1e-9)
    args = ap.parse_args()
    c, Gl, hl, Gs, hs, A, b = build(*parse(args.file))
    sol = None
    # cvxopt can break down near the end at tight tolerances; loosen and retry
    for tol in (args.tol, args.tol * 10, args.tol * 100):
        solvers.options.update(show_progress=False, abstol=tol, reltol=tol, feastol=tol, maxiters=200)
        try:
            sol = solvers.sdp(c, Gl=Gl, hl=hl, Gs=Gs, hs=hs, A=A, b=b)
        except (ArithmeticError, ValueError):
            continue
        if sol["status"] == "optimal":
            break
    if sol is None:
        print(json.dumps({"status": "failed"}))
        return 1
    primal = -sol["primal objective"]
    dual = -sol["dual objective"]
    gap = abs(primal - dual)
    out = {
        "status": sol["status"],
        "value": primal,
        "dual": dual,
        "gap": gap,
        "floored": math.floor(primal + 10 * gap),
    }
    json.dump(out, sys.stdout)
    print()
    return 0 if sol["status"] == "optimal" else 1


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Regenerate newform coefficient fixtures with PARI/GP (requires cypari2).

usage: gen_fixtures.py OUTDIR [PMAX]
"""
import json
import sys

import cypari2

FORMS = [
    # (label, level, leading coefficients used to pick the eigenform)
    ("7.4.a.a", 7, [1, -1, -2, -7, 16]),
    ("15.4.a.b", 15, [1, 3, -3, 1, -5]),
    ("22.4.a.b", 22, [1, -2, 4, 4, 14]),
]


def main():
    out = sys.argv[1]
    pmax = int(sys.argv[2]) if len(sys.argv) > 2 else 100000
    pari = cypari2.Pari()
    pari.allocatemem(2 * 10**9)
    for label, level, lead in FORMS:
        pari(f"mf=mfinit([{level},4],0); L=mfeigenbasis(mf)")
        n = int(pari("#L"))
        pick = None
        for i in range(1, n + 1):
            c = [int(t) for t in pari(f"mfcoefs(L[{i}],5)")][1:]
            if c == lead:
                pick = i
        if pick is None:
            raise SystemExit(f"{label}: no rational eigenform with expected coefficients")
        coefs = [int(t) for t in pari(f"mfcoefs(L[{pick}],{pmax})")]
        primes = [int(p) for p in pari(f"primes([2,{pmax}])")]
        al = {}
        for p in [int(q) for q in pari(f"factor({level})[,1]")]:
            ev = pari(f"mfatkineigenvalues(mf,{p})[{pick}][1]")
            al[str(p)] = int(ev)
        data = {
            "label": label,
            "level": level,
            "weight": 4,
            "atkin_lehner": al,
            "ap": [[p, coefs[p]] for p in primes],
        }
        with open(f"{out}/{label}.json", "w") as fh:
            json.dump(data, fh, separators=(",", ":"))
        print(label, al, len(primes))


if __name__ == "__main__":
    main()

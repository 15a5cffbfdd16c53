#!/usr/bin/env python3
"""Regenerate the bundled D5 / D7 field fixtures with PARI/GP (via cypari2).

PARI is an independent oracle here: it finds the fields, certifies the
fundamental units (bnfcertify) and supplies the reference regulator.  The
package never imports PARI.

D5 (5T2, signature (1,2)): exhaustive sweep over monic quintics in a
coefficient box, reduced with polredabs and filtered on the Galois group;
the smallest |disc| found are kept.  The box does not prove completeness.

D7 (7T2, signature (1,3)): degree-7 subfields of Hilbert class fields of
imaginary quadratic fields with class number 7.

    pip install cypari2
    python scripts/make_fixtures.py --out src/unitshapes/data/fixtures
"""

import argparse
import itertools
import json
import pathlib
import time
from fractions import Fraction

import cypari2

pari = cypari2.Pari()
pari.allocatemem(2 * 10**9, silent=True)
pari.set_real_precision(60)

H7_DISCS = [-71, -151, -223, -251, -463, -467, -487]


def coeff_strings(polmod, deg):
    lift = pari.lift(polmod)
    out = []
    for i in range(deg):
        c = Fraction(str(pari.polcoef(lift, i)))
        out.append(f"{c.numerator}/{c.denominator}")
    return out


def record(pol, galois_label, index, how):
    deg = int(pari.poldegree(pol))
    bnf = pari.bnfinit(pol, 1)
    certified = int(pari.bnfcertify(bnf))
    r1, r2 = (int(v) for v in pari("(b) -> b.sign")(bnf))
    fu = pari("(b) -> b.fu")(bnf)
    reg = pari("(b) -> b.reg")(bnf)
    disc = int(pari.nfdisc(pol))
    coeffs = [int(pari.polcoef(pol, i)) for i in range(deg + 1)]
    return {
        "label": f"{deg}.{r1}.{abs(disc)}.{index}",
        "degree": deg,
        "coeffs": coeffs,
        "r1": r1,
        "r2": r2,
        "galois_label": galois_label,
        "units": [coeff_strings(u, deg) for u in fu],
        "regulator": str(pari("(x) -> Strprintf(\"%.30g\", x)")(reg)).strip("\""),
        "disc": str(disc),
        "provenance": {
            "oracle": f"PARI/GP {pari.version()} via cypari2",
            "method": how,
            "units": "bnfinit(pol, 1).fu; bnfcertify = %d" % certified,
            "label_note": "label index assigned locally in order of |disc|; not cross-checked with LMFDB",
        },
    }


def d5_fields(box, keep):
    seen = {}
    R = range(-box, box + 1)
    for a, b, c, d, e in itertools.product(range(0, 3), R, R, R, R):
        if e == 0:
            continue
        f = pari(f"x^5+({a})*x^4+({b})*x^3+({c})*x^2+({d})*x+({e})")
        if not f.polisirreducible() or f.polsturm() != 1 or not f.poldisc().issquare():
            continue
        g = f.polredabs()
        key = str(g)
        if key in seen:
            continue
        seen[key] = int(pari.nfdisc(g)) if int(g.polgalois()[0]) == 10 else None
    found = sorted((v, k) for k, v in seen.items() if v is not None)
    return [pari(k) for _, k in found[:keep]], len(found)


def d7_fields(count):
    out = []
    for D in H7_DISCS[:count]:
        quad = pari(f"y^2 - ({D})")
        absolute = pari.rnfequation(pari.nfinit(quad), pari.quadhilbert(D))
        g = pari.polredabs(pari.nfsubfields(absolute, 7)[0][0])
        assert int(g.polgalois()[0]) == 14 and int(g.polsturm()) == 1
        out.append((D, g))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="src/unitshapes/data/fixtures")
    ap.add_argument("--box", type=int, default=9)
    ap.add_argument("--d5", type=int, default=24)
    ap.add_argument("--d7", type=int, default=5)
    args = ap.parse_args()
    out = pathlib.Path(args.out)

    t0 = time.time()
    pols, total = d5_fields(args.box, args.d5)
    how = (f"smallest |disc| among {total} D5 fields found by polredabs over monic quintics with "
           f"x^4 coeff in [0,2] and other coeffs in [-{args.box},{args.box}]")
    write(out / "5T2", [record(g, "5T2", 1, how) for g in pols])
    print(f"D5: kept {len(pols)} of {total} ({time.time() - t0:.1f}s)")

    recs = []
    for D, g in d7_fields(args.d7):
        recs.append(record(g, "7T2", 1, f"degree-7 subfield of the Hilbert class field of Q(sqrt({D}))"))
    write(out / "7T2", recs)
    print(f"D7: {len(recs)} fields")


def write(directory, records):
    directory.mkdir(parents=True, exist_ok=True)
    labels = {}
    for rec in records:
        base = rec["label"].rsplit(".", 1)[0]
        labels[base] = labels.get(base, 0) + 1
        rec["label"] = f"{base}.{labels[base]}"
        path = directory / f"{rec['label']}.json"
        path.write_text(json.dumps(rec, indent=1) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()

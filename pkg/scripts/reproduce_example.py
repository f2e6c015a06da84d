"""Reproduce the determinantal example end to end and print a summary.

Usage: python3 scripts/reproduce_example.py [--order N] [--json out.json]
"""
import argparse
import json
import time
from fractions import Fraction
from pathlib import Path

from gmmp.hom_ext import ExtBasis
from gmmp.massey import (HullConfig, census, compute_hull, cup_table, smoothness_report,
                         versal_family)
from gmmp.pipeline import fixture_pins, load_ext, resolve
from gmmp.problem import load_problem

HERE = Path(__file__).resolve().parents[1] / "problems"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--order", type=int, default=5)
    ap.add_argument("--json")
    args = ap.parse_args()
    t0 = time.perf_counter()
    out = {}

    P = load_problem(str(HERE / "M_I_restricted.prob"))
    res = resolve(P)
    print("resolution of M_I:")
    print(res.betti())
    E, fx = load_ext(P, res)
    out["M_I"] = {"betti": res.betti().to_json(), "ext1_dim": E.ext1_dim, "ext2_dim": E.ext2_dim}
    print(f"Ext^1 = {E.ext1_dim}, Ext^2 = {E.ext2_dim}")

    PJ = load_problem(str(HERE / "M_J.prob"))
    EJ = ExtBasis(resolve(PJ))
    out["M_J"] = {"ext1_dim": EJ.ext1_dim, "ext2_dim": EJ.ext2_dim}
    print(f"M_J: Ext^1 = {EJ.ext1_dim}, Ext^2 = {EJ.ext2_dim}")

    cen = census(cup_table(E))
    out["cup_census"] = cen.to_json()
    print(f"cup census: {cen}")

    Er = E.restrict([k - 1 for k in P.restrict])
    RA = compute_hull(Er, HullConfig(order=args.order, pins=fixture_pins(Er, fx),
                                     tangent_names=P.tangent_names))
    out["relations"] = RA.relation_strings()
    out["stabilized"] = RA.stabilized
    print("relations:", ", ".join(out["relations"]))
    print("stabilized:", RA.stabilized, "from order", RA.stabilized_order)
    print(smoothness_report(RA))
    VF = versal_family(Er, RA)
    out["versal_ideal"] = VF.ideal
    out["flat"] = VF.flat
    print("versal ideal:")
    for g in VF.ideal:
        print("  ", g)
    print("flat:", VF.flat)
    out["seconds"] = round(time.perf_counter() - t0, 3)
    print(f"total {out['seconds']} s")
    if args.json:
        Path(args.json).write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()

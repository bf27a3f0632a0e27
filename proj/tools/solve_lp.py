#!/usr/bin/env python3
"""Solve an LP file with HiGHS and print the optimal objective.

Exit codes: 0 optimal, 2 not optimal, 3 highspy missing.
"""
import argparse
import sys


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("lp")
    ap.add_argument("--time-limit", type=float, default=600.0)
    args = ap.parse_args()
    try:
        import highspy
    except ImportError:
        print("highspy not installed", file=sys.stderr)
        return 3
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_abs_gap", 0.0)
    h.setOptionValue("time_limit", args.time_limit)
    h.readModel(args.lp)
    h.run()
    status = h.modelStatusToString(h.getModelStatus())
    if h.getModelStatus() != highspy.HighsModelStatus.kOptimal:
        print(status)
        return 2
    print(f"{h.getInfo().objective_function_value:.12g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

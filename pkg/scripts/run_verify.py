"""Run the acceptance checks and print the PASS/FAIL matrix.

Same as ``modcount verify``; exits 3 when a check fails.
"""
import argparse
import sys

from modcount.verify import CHECKS, VerifyConfig, format_matrix, run_check


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--criteria", default=",".join(map(str, CHECKS)))
    ap.add_argument("--artifact-dir", default="artifacts")
    args = ap.parse_args()
    cfg = VerifyConfig(artifact_dir=args.artifact_dir)
    results = []
    for c in (int(x) for x in args.criteria.split(",")):
        r = run_check(c, cfg)
        print(r.line(), flush=True)
        results.append(r)
    print(format_matrix(results).splitlines()[-1])
    return 0 if all(r.passed for r in results) else 3


if __name__ == "__main__":
    sys.exit(main())

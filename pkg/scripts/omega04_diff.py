"""Write the coefficient-level diff between the printed discrete and Airy
(0,4) forms and the ones computed from N_{0,4} and V_{0,4}."""
import argparse
import json
from pathlib import Path

from modcount.laplace import compare_airy_form, compare_discrete_form


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--order", type=int, default=12)
    ap.add_argument("--out", default="artifacts/omega04_diff.json")
    args = ap.parse_args()
    diff = {
        "w04_printed": compare_discrete_form("w04", args.order),
        "w04_corrected_pair_coefficient_2": compare_discrete_form("w04_corrected", args.order),
        "w04_airy": compare_airy_form(0, 4),
    }
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(diff, sort_keys=True, indent=1))
    p = diff["w04_printed"]
    print(f"printed w04: matched={p['matched']} first mismatch {p['first_mismatch']} "
          f"({p['mismatches']} of {p['compared']} coefficients differ)")
    print(f"pair coefficient 2: matched={diff['w04_corrected_pair_coefficient_2']['matched']}")
    print(f"Airy w04 printed/computed = {diff['w04_airy']['ratio_printed_over_computed']}")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()

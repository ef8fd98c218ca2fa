"""Limit-angle refinement tables on the de Sitter and anti-de Sitter lattices."""
import argparse
from pathlib import Path

from lorentz_bounds.harness import REFINABLE, decreasing, refinement_study, refinement_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/refinement")
    ap.add_argument("--m-list", default="2,4,8,16")
    a = ap.parse_args()
    m_list = [int(v) for v in a.m_list.split(",")]
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    for K0 in (1.0, -1.0, 0.0):
        for sense in REFINABLE:
            rows = refinement_study(K0, m_list=m_list, sense=sense)
            table = refinement_table(rows)
            (out / f"K0_{K0:+g}_{sense.value.lower()}.csv").write_text(table)
            errs = [r.worst_error for r in rows]
            print(f"K0={K0:+g} {sense.value}: errors {['%.2e' % e for e in errs]} "
                  f"decreasing={decreasing(errs)} verdicts={[r.verdict for r in rows]}")


if __name__ == "__main__":
    main()

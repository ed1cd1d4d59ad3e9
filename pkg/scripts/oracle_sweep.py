#!/usr/bin/env python3
"""
Compare the flow solver against brute-force enumeration on random instances.

Steps:
- Draw seeded partial profiles (m alternatives, n ballots, up to k forgotten
  adjacent pairs per ballot) and random votes vm, v, u.
- Decide DOMINATION with both engines under plurality and veto.
- Optionally write one row per instance with pandas (CSV, or parquet when
  pyarrow is installed).

Usage:
  python scripts/oracle_sweep.py --count 500 --seed 7
    --report reports/sweep.parquet   # optional
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from pathlib import Path
from typing import Optional

REPO_ROOT = Path(__file__).resolve().parent.parent
if str(REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(REPO_ROOT))

from core.domination import dominates  # noqa: E402
from core.extensions import EnumerationTooLarge, Partial  # noqa: E402
from core.flowsolver import flow_domination  # noqa: E402
from core.orders import format_order  # noqa: E402
from core.rules import plurality, veto  # noqa: E402
from core.sampling import random_linear_order, random_partial_profile  # noqa: E402


def sweep(count: int, seed: int, max_m: int, max_n: int, k: int, cap: Optional[int] = None) -> list[dict]:
    rng = random.Random(seed)
    rows = []
    for i in range(count):
        m = rng.randint(2, max_m)
        n = rng.randint(1, max_n)
        pp = random_partial_profile(rng, m, n, k)
        vm = random_linear_order(rng, m)
        v = vm if rng.random() < 0.5 else random_linear_order(rng, m)
        u = random_linear_order(rng, m)
        for rule in (plurality(), veto()):
            started = time.perf_counter()
            try:
                brute: Optional[bool] = dominates(rule, Partial(pp), vm, u, v, cap).dominates
            except EnumerationTooLarge as e:
                print(f"skip #{i} {rule.name}: {e}", file=sys.stderr)
                brute = None
            mid = time.perf_counter()
            flow = flow_domination(pp, vm, v, u, rule)
            done = time.perf_counter()
            rows.append(
                {
                    "instance": i,
                    "rule": rule.name,
                    "m": m,
                    "n": n,
                    "vm": format_order(vm),
                    "v": format_order(v),
                    "u": format_order(u),
                    "brute": brute,
                    "flow": flow,
                    "brute_s": mid - started,
                    "flow_s": done - mid,
                }
            )
    return rows


def write_report(rows: list[dict], out_path: Path) -> int:
    try:
        import pandas as pd  # type: ignore
    except Exception:
        print("Pandas not installed. Install the report extra to write tables.")
        print("  pip install -e .[report]")
        return 0
    df = pd.DataFrame(rows)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    if out_path.suffix == ".parquet":
        try:
            import pyarrow  # noqa: F401
        except Exception:
            print("PyArrow not installed; writing CSV instead.")
            out_path = out_path.with_suffix(".csv")
        else:
            df.to_parquet(out_path, index=False)
            print(f"Wrote {len(df)} rows to {out_path}")
            return 0
    df.to_csv(out_path, index=False)
    print(f"Wrote {len(df)} rows to {out_path}")
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=100, help="Random instances to draw")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-m", type=int, default=4)
    ap.add_argument("--max-n", type=int, default=4)
    ap.add_argument("--k", type=int, default=2, help="Max forgotten adjacent pairs per ballot")
    ap.add_argument("--cap", type=int, default=None, help="Skip instances with more profiles than this")
    ap.add_argument("--report", type=Path, default=None, help="Optional .csv or .parquet output")
    args = ap.parse_args(argv)

    print(f"==> Sweeping {args.count} instances (seed {args.seed})")
    rows = sweep(args.count, args.seed, args.max_m, args.max_n, args.k, args.cap)
    checked = [r for r in rows if r["brute"] is not None]
    mismatches = [r for r in checked if r["brute"] != r["flow"]]
    for r in mismatches:
        print(
            f"MISMATCH {r['rule']} #{r['instance']}: brute={r['brute']} flow={r['flow']} "
            f"vm={r['vm']} v={r['v']} u={r['u']}",
            file=sys.stderr,
        )
    print(f"{len(checked)} checks, {len(rows) - len(checked)} skipped, {len(mismatches)} mismatches")
    if args.report is not None:
        print("==> Writing report")
        write_report(rows, args.report)
    return 1 if mismatches else 0


if __name__ == "__main__":
    raise SystemExit(main())

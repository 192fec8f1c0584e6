#!/usr/bin/env python3
"""Generate the bundled synthetic end-to-end fixture data set.

Forty listed firms over two windows with all three relation sources
present: institutional investors shared within two blocks (common-holder
edges and a visible community structure), a few firm-name shareholders
resolved through the alias table (direct cross-holding edges), and legal
representatives appearing in other firms' top-ten lists.  Every value is
drawn from one seeded generator, so regeneration is byte-identical.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parent.parent / "fixtures"

FIRMS = [f"6000{i:02d}" for i in range(1, 41)]
REPORT_DATES = ["2015-03-31", "2015-06-30"]
MONTHS = ["2015-03", "2015-04", "2015-05", "2015-06", "2015-07", "2015-08"]
QUARTERS = ["2015Q1", "2015Q2"]

# institutional pools: block A concentrates on the first 20 firms, block B
# on the last 20, with two bridge funds crossing the blocks
POOL_A = [f"Huaxin Fund {i}" for i in range(1, 7)]
POOL_B = [f"Southern Asset Plan {i}" for i in range(1, 7)]
BRIDGE = ["National Stability Fund", "Harvest Crossover Mixed"]

# firm-name shareholders resolved by the alias table (type-1 edges)
ALIASES = {
    "Firm 600007 Group Co": "600007",
    "Firm 600001 Holdings": "600001",
    "Firm 600025 Industrial Co": "600025",
    "Firm 600033 Capital": "600033",
}

# one legal representative per firm; a handful also appear as shareholders
REPS = {firm: f"Rep {firm}" for firm in FIRMS}
SHARED_REPS = {"600003": "Chen Jianguo", "600012": "Li Xiaoming", "600028": "Wang Lihua"}
REPS.update(SHARED_REPS)


def pick_shareholders(rng, firm_index):
    """Ten shareholder names for one firm and date."""
    block = POOL_A if firm_index < 20 else POOL_B
    names = list(rng.choice(block, size=3, replace=False))
    if rng.random() < 0.3:
        names.append(str(rng.choice(BRIDGE)))
    if rng.random() < 0.25:
        names.append(str(rng.choice(list(ALIASES))))
    if rng.random() < 0.25:
        names.append(str(rng.choice(list(SHARED_REPS.values()))))
    filler = 0
    while len(names) < 10:
        filler += 1
        names.append(f"Private Holder {firm_index:02d}-{filler}")
    return names[:10]


def main():
    rng = np.random.default_rng(20150601)
    OUT.mkdir(parents=True, exist_ok=True)

    with open(OUT / "shareholders.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["firm_id", "shareholder_name", "rank", "report_date"])
        for when in REPORT_DATES:
            for i, firm in enumerate(FIRMS):
                for rank, name in enumerate(pick_shareholders(rng, i), start=1):
                    w.writerow([firm, name, rank, when])

    with open(OUT / "legal_reps.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["person_name", "firm_id", "report_date"])
        for when in REPORT_DATES:
            for firm in FIRMS:
                w.writerow([REPS[firm], firm, when])

    with open(OUT / "aliases.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["name", "firm_id"])
        for name, firm in ALIASES.items():
            w.writerow([name, firm])

    # market data: size-dependent value, liquidity-driven turnover, noisy
    # monthly returns; the liquidity factor also feeds net profit so the
    # trading amount has first-stage strength as an instrument
    size = rng.lognormal(mean=9.0, sigma=0.8, size=len(FIRMS))
    liquidity = rng.lognormal(mean=0.0, sigma=0.5, size=len(FIRMS))
    with open(OUT / "market.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["firm_id", "month", "monthly_return", "market_value", "trading_amount"])
        for i, firm in enumerate(FIRMS):
            for month in MONTHS:
                ret = rng.normal(0.01, 0.08) + 0.002 * np.log(size[i])
                value = size[i] * 1e6 * rng.uniform(0.9, 1.1)
                trade = size[i] * 2e5 * liquidity[i] * rng.uniform(0.85, 1.15)
                w.writerow([firm, month, f"{ret:.6f}", f"{value:.2f}", f"{trade:.2f}"])

    # financials: two firms with negative Q1 equity, one firm missing Q2
    with open(OUT / "financials.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["firm_id", "quarter", "net_assets", "net_profit"])
        for i, firm in enumerate(FIRMS):
            for quarter in QUARTERS:
                if quarter == "2015Q2" and firm == "600040":
                    continue
                assets = size[i] * 4e5 * rng.uniform(0.8, 1.2)
                if quarter == "2015Q1" and firm in ("600018", "600031"):
                    assets = -abs(assets) * 0.1
                profit = size[i] * 2e4 * (0.2 + 1.6 * liquidity[i] + rng.normal(0, 0.4))
                w.writerow([firm, quarter, f"{assets:.2f}", f"{profit:.2f}"])

    print(f"fixtures written to {OUT}")


if __name__ == "__main__":
    main()

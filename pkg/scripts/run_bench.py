"""Score every directed measure on every synthetic system from one master
seed and print the scorecard.

    python scripts/run_bench.py --trials 100 --seed 1 > bench.jsonl
"""

import argparse
import sys

from tscause.cli import main

if __name__ == "__main__":
    p = argparse.ArgumentParser()
    p.add_argument("--trials", default="100")
    p.add_argument("--seed", default="1")
    p.add_argument("--format", default="jsonl")
    a = p.parse_args()
    sys.exit(main(["bench", "--system", "all", "--trials", a.trials, "--seed", a.seed,
                   "--format", a.format]))

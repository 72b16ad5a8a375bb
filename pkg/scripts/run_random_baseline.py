#!/usr/bin/env python3
"""Accuracy@K of a uniform-random ranker, against its closed-form expectation.

With m candidate spans and one gold, a random permutation puts the gold in
the top K with probability K/m. This script samples that process and prints
measured minus expected accuracy — a sanity anchor for interpreting real
ranking numbers.

    python3 scripts/run_random_baseline.py --spans 10 --trials 10000
"""

import argparse
import random

from entailgine import RankedInstance, accuracy_at_k


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--spans", type=int, default=10, help="candidate spans per trial")
    parser.add_argument("--trials", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    instances = []
    for t in range(args.trials):
        refs = [(t, i) for i in range(args.spans)]
        rng.shuffle(refs)
        instances.append(RankedInstance(ranking=tuple(refs), gold=(t, 0)))

    print(f"{args.trials} random rankings over {args.spans} spans, seed {args.seed}")
    print(f"{'K':>3}  {'measured':>9}  {'expected':>9}  {'delta':>8}")
    for k in range(1, args.spans + 1):
        measured = accuracy_at_k(instances, k)
        expected = k / args.spans
        print(f"{k:>3}  {measured:>9.4f}  {expected:>9.4f}  {measured - expected:>+8.4f}")


if __name__ == "__main__":
    main()

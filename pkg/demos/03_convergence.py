"""Monte Carlo: belief settles on the true distribution.

Streams are sampled i.i.d. from a designated true world; plausibility is
conditioned one observation at a time, and a trial "settles" at the first
step after which belief stays inside an epsilon-ball around the truth.
A Bayesian learner (uniform prior, 95% posterior mass in the ball) runs
on the identical streams for a paired comparison.

Run with: python3 demos/03_convergence.py
"""

from fractions import Fraction

from plausilearn import (
    ENTROPY,
    TrialConfig,
    make_alphabet,
    mass_function,
    run_experiment,
    simplex_grid,
)


def show(label, summary):
    print(f"{label:<24} settle_fraction={summary.settle_fraction:.2f}  "
          f"median={summary.settle_time_median:.0f}  "
          f"p90={summary.settle_time_p90:.0f}  max={summary.settle_time_max}")


def main():
    urn = make_alphabet(["R", "B", "G"])
    grid = simplex_grid(urn, 10)
    truth = mass_function(
        urn, [Fraction(5, 10), Fraction(3, 10), Fraction(2, 10)]
    )
    cfg = TrialConfig(
        worlds=tuple(grid),
        plausibility=ENTROPY,
        truth=truth,
        horizon=3000,
        seed=0,
        epsilon=0.15,
    )
    print(f"66-world urn grid, truth {tuple(map(str, truth.weights))}, "
          f"eps=0.15, horizon 3000, 50 trials")
    summary = run_experiment(cfg, trials=50, base_seed=42, include_baseline=True)
    show("plausibilistic learner", summary)
    show("bayesian baseline", summary.baseline)


if __name__ == "__main__":
    main()

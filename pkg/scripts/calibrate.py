"""Scan noise settings with exact (shot-free) fidelities.

    python3 scripts/calibrate.py [--bath 2 4] [--dt 0.005 0.01 0.02] [--seed 0]

For each setting prints, per experiment, the LEO spread over tau in
[10, 600], the free-evolution drop f(10) - f(600), final fidelities, and the
loss from identity insertion. This is how the shipped calibration in
configs/*.json was chosen.
"""
import argparse
import itertools
import sys

from leo_lab import experiments as ex
from leo_lab.noise import CoherentConfig, NoiseConfig

TAUS = (10, 100, 300, 600)


def summarize(which: str, noise: NoiseConfig) -> str:
    cfgs = {v: ex.ExperimentConfig(which, v, TAUS, noise=noise) for v in ex.VARIANTS}
    nm = cfgs["leo"].noise_model()
    f = {v: [ex.exact_fidelity(c, t, nm) for t in TAUS] for v, c in cfgs.items()}
    return (
        f"{which:4s} leo spread {max(f['leo']) - min(f['leo']):.3f}  "
        f"free drop {f['free'][0] - f['free'][-1]:.3f}  "
        f"final leo/free/id {f['leo'][-1]:.3f}/{f['free'][-1]:.3f}/{f['leo-with-id'][-1]:.3f}  "
        f"id loss {f['leo'][-1] - f['leo-with-id'][-1]:.3f}"
    )


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bath", type=int, nargs="+", default=[4])
    ap.add_argument("--dt", type=float, nargs="+", default=[0.01])
    ap.add_argument("--ad", type=float, nargs="+", default=[2e-5])
    ap.add_argument("--dephasing", type=float, nargs="+", default=[1.5e-4])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    for bath, dt, ad, deph in itertools.product(args.bath, args.dt, args.ad, args.dephasing):
        noise = NoiseConfig(ad, deph, 0.0, CoherentConfig(1.0, 1.0, bath, dt, args.seed))
        print(f"bath {bath} dt {dt} amplitude_damping {ad} dephasing {deph}")
        for which in ex.EXPERIMENTS:
            print("  " + summarize(which, noise))
    return 0


if __name__ == "__main__":
    sys.exit(main())

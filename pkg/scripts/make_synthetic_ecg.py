"""Write a synthetic ECG-like CSV (360 Hz, one column) for offline tests.

Each beat is a sum of Gaussian P, Q, R, S and T waves; a slow respiratory
wander and a little white noise are added. The output is deterministic.
"""

import argparse

import numpy as np

RATE = 360.0
# (relative time in s, amplitude in mV, width in s)
WAVES = ((-0.20, 0.12, 0.025), (-0.035, -0.10, 0.010), (0.0, 1.10, 0.012),
         (0.035, -0.22, 0.010), (0.25, 0.30, 0.045))


def synthetic_ecg(count: int = 2000, heart_rate: float = 72.0, seed: int = 100) -> np.ndarray:
    rng = np.random.default_rng(seed)
    t = np.arange(count) / RATE
    period = 60.0 / heart_rate
    beats = np.arange(-1, t[-1] / period + 2) * period
    beats = beats + rng.normal(0, 0.01, beats.size)
    x = np.zeros(count)
    for b in beats:
        for dt, amp, width in WAVES:
            x += amp * np.exp(-0.5 * ((t - b - dt) / width) ** 2)
    x += 0.08 * np.sin(2 * np.pi * 0.25 * t) + rng.normal(0, 0.005, count)
    return x - 0.9


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("out")
    p.add_argument("--count", type=int, default=2000)
    args = p.parse_args(argv)
    x = synthetic_ecg(args.count)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("mV\n")
        fh.writelines(f"{v:.6f}\n" for v in x)


if __name__ == "__main__":
    main()

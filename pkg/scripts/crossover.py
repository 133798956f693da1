"""Mean-field density and g2 versus J on the n-photon resonance.

Follows the branch that starts at J = 0 and reports where g2 first rises
0.15 above the binomial value 1 - 1/n.
"""

import argparse
from dataclasses import asdict, dataclass

import numpy as np

from ddbh.exact_prep import SystemParams
from ddbh.meanfield import sweep, track_branch
from ddbh.output import write_table
from ddbh.weak_drive import critical_coupling, resonance_detuning


@dataclass
class Config:
    orders: tuple = (2, 3, 4)
    epsilon: float = 1e-2
    drive_ratio: float = 10.0  # F^n / (dw^(n-1) gamma)
    j_max_over_jc: float = 2.0
    points: int = 41
    out: str = "crossover.csv"


def main(cfg: Config) -> None:
    rows = []
    for n in cfg.orders:
        jc = critical_coupling(n)
        p = SystemParams(u=resonance_detuning(n), f=cfg.epsilon,
                         gamma=cfg.epsilon**n / cfg.drive_ratio)
        grid = np.linspace(0, cfg.j_max_over_jc * jc, cfg.points)
        branch = track_branch(sweep(p, "j", grid))
        threshold = 1 - 1 / n + 0.15
        crossing = next((j for j, s in branch if s and s.obs.g2 > threshold), None)
        print(f"n={n}: g2 exceeds {threshold:.3f} at J/J_c = "
              f"{'not reached' if crossing is None else f'{crossing / jc:.3f}'}")
        rows += [[n, j, s.obs.n_mean, s.obs.g2, s.b.real, s.b.imag] for j, s in branch if s]
    write_table(cfg.out, ["order", "j", "n_mean", "g2", "re_b", "im_b"], rows, asdict(cfg))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--orders", type=int, nargs="+", default=list(Config.orders))
    ap.add_argument("--j-max-over-jc", type=float, default=Config.j_max_over_jc)
    ap.add_argument("--points", type=int, default=Config.points)
    ap.add_argument("--out", default=Config.out)
    args = ap.parse_args()
    main(Config(orders=tuple(args.orders), j_max_over_jc=args.j_max_over_jc,
                points=args.points, out=args.out))

"""Exact density and g2 against the xi law at two-photon resonance."""

import argparse
from dataclasses import asdict, dataclass

import numpy as np

from ddbh.exact_prep import SystemParams, exact_observables
from ddbh.output import write_table
from ddbh.weak_drive import two_photon_observables, xi


@dataclass
class Config:
    epsilon: float = 1e-2
    points: int = 40
    out: str = "two_photon_xi.csv"


def main(cfg: Config) -> None:
    rows = []
    for gamma in np.geomspace(cfg.epsilon**2 / 10, cfg.epsilon / 5, cfg.points):
        x = xi(cfg.epsilon, gamma)
        exact = exact_observables(SystemParams(u=2, f=cfg.epsilon, gamma=gamma))
        law = two_photon_observables(x)
        rows.append([gamma, x, exact.n_mean, law.n_mean, exact.g2, law.g2])
    write_table(cfg.out, ["gamma", "xi", "n_exact", "n_xi", "g2_exact", "g2_xi"], rows, asdict(cfg))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--epsilon", type=float, default=Config.epsilon)
    ap.add_argument("--points", type=int, default=Config.points)
    ap.add_argument("--out", default=Config.out)
    main(Config(**vars(ap.parse_args())))

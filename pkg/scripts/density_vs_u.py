"""High-density mean-field branch against the largest semiclassical root while U varies."""

import argparse
from dataclasses import asdict, dataclass

import numpy as np

from ddbh.exact_prep import SystemParams
from ddbh.gross_pitaevskii import gp_density_roots
from ddbh.meanfield import MeanFieldConfig, sweep
from ddbh.output import write_table


@dataclass
class Config:
    j: float = 3.0
    f: float = 0.4
    gamma: float = 0.2
    u_min: float = 0.1
    u_max: float = 2.0
    points: int = 20
    stability: bool = False
    out: str = "density_vs_u.csv"


def main(cfg: Config) -> None:
    p = SystemParams(u=cfg.u_min, f=cfg.f, gamma=cfg.gamma, j=cfg.j)
    grid = np.linspace(cfg.u_min, cfg.u_max, cfg.points)
    rows = []
    for pt in sweep(p, "u", grid, MeanFieldConfig(check_stability=cfg.stability)):
        gp_roots = [s.n for s in gp_density_roots(p.replace(u=pt.value))]
        for i, s in enumerate(pt.solutions):
            rows.append([pt.value, i, s.obs.n_mean, s.obs.g2, s.b.real, s.stable.value,
                         max(gp_roots)])
    write_table(cfg.out, ["u", "branch", "n_mean", "g2", "re_b", "stable", "gp_n_max"], rows,
                asdict(cfg))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=Config.points)
    ap.add_argument("--u-max", type=float, default=Config.u_max)
    ap.add_argument("--stability", action="store_true")
    ap.add_argument("--out", default=Config.out)
    args = ap.parse_args()
    main(Config(points=args.points, u_max=args.u_max, stability=args.stability, out=args.out))

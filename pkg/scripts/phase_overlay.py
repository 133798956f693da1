"""Bistability map in the (U, J) plane: stable-branch count against the GP discriminant."""

import argparse
from dataclasses import asdict, dataclass

import numpy as np

from ddbh.exact_prep import SystemParams
from ddbh.meanfield import phase_diagram
from ddbh.output import write_table

SYMBOL = {("bistable", "bistable"): "B", ("monostable", "bistable"): "g",
          ("bistable", "monostable"): "P", ("monostable", "monostable"): "."}


@dataclass
class Config:
    f: float = 0.4
    gamma: float = 0.2
    u_range: tuple = (0.1, 3.0)
    j_range: tuple = (0.0, 3.0)
    points: int = 20
    workers: int = 1
    out: str = "phase_overlay.csv"


def main(cfg: Config) -> None:
    u_grid = np.linspace(*cfg.u_range, cfg.points)
    j_grid = np.linspace(*cfg.j_range, cfg.points)
    cells = phase_diagram(SystemParams(u=1, f=cfg.f, gamma=cfg.gamma), u_grid, j_grid,
                          workers=cfg.workers)
    rows = [[c.u_over_dw, c.j_over_dw, c.n_solutions_stable, c.classification,
             c.gp_classification] for row in cells for c in row]
    write_table(cfg.out, ["u", "j", "n_stable", "prep", "gp"], rows, asdict(cfg))
    # text map: J to the right, U upward; B both, g GP only, P P-rep only
    for iu in reversed(range(len(u_grid))):
        line = "".join(SYMBOL[(cells[ij][iu].classification, cells[ij][iu].gp_classification)]
                       for ij in range(len(j_grid)))
        print(f"U={u_grid[iu]:5.2f} {line}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=Config.points)
    ap.add_argument("--workers", type=int, default=Config.workers)
    ap.add_argument("--out", default=Config.out)
    args = ap.parse_args()
    main(Config(points=args.points, workers=args.workers, out=args.out))

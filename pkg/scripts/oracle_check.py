"""Closed-form steady state against the master-equation oracle on a random grid."""

import argparse
from dataclasses import asdict, dataclass

from ddbh.output import write_table
from ddbh.validation import compare_point, random_grid


@dataclass
class Config:
    seed: int = 0
    points: int = 50
    out: str = "oracle_check.csv"


def main(cfg: Config) -> None:
    rows = []
    for p in random_grid(cfg.seed, cfg.points):
        c = compare_point(p)
        rows.append([p.u, p.f.real, p.gamma, c.n_max, c.rel_n, c.rel_g2, c.rel_b])
    write_table(cfg.out, ["u", "f", "gamma", "n_max", "rel_n", "rel_g2", "rel_b"], rows,
                asdict(cfg))
    print("max relative deviation:", max(max(r[4:]) for r in rows))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--points", type=int, default=Config.points)
    ap.add_argument("--out", default=Config.out)
    main(Config(**vars(ap.parse_args())))

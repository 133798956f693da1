"""Command-line front end.

Every physical input is a ratio over the pump-cavity detuning dw; ``--dw``
only sets the absolute scale echoed in output headers. Settings are layered:
built-in defaults, then the preset, then a ``key=value`` config file, then
explicit flags.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import bogoliubov, gross_pitaevskii as gp, meanfield, weak_drive
from .errors import DDBHError
from .exact_prep import SystemParams, density_matrix, exact_observables, default_n_max
from .fock import observables_from
from .lattice import CORRECTED, PRINTED, gxmg_path
from .lindblad_oracle import adaptive_steady_state
from .numerics import SeriesConfig
from .output import write_table
from .validation import compare_point, random_grid

COMMANDS = ("single", "oracle", "meanfield", "sweep", "phase-diagram", "gp", "spectrum",
            "weakdrive", "validate")

DEFAULTS = {
    "u": 1.0, "j": 0.0, "f": 0.4, "gamma": 0.2, "dw": 1.0, "z": 4,
    "axis": "j", "grid": "0:2:21", "u_grid": "0.1:3:20", "j_grid": "0:3:20",
    "nmax_cap": 40, "kgrid": 8, "out": "-", "format": "csv", "seed": 0,
    "tol_series": 1e-14, "tol_fixedpoint": 1e-10, "leak_tol": 1e-10, "confirm": 3,
    "points": 50, "order": 2, "xi": None, "path_points": 20, "selector": "decay",
    "stability": False, "workers": 1, "preset": None, "rho": False, "tk": "corrected",
}

FLOAT_KEYS = {"u", "j", "f", "gamma", "dw", "tol_series", "tol_fixedpoint", "leak_tol"}
INT_KEYS = {"z", "confirm", "nmax_cap", "kgrid", "seed", "points", "order", "path_points", "workers"}
BOOL_KEYS = {"stability", "rho"}


def _fig3(order: int) -> dict:
    f = 1e-2
    jc = weak_drive.critical_coupling(order)
    return {"command": "sweep", "u": weak_drive.resonance_detuning(order), "f": f,
            "gamma": f**order / 10, "j": 0.0, "axis": "j", "grid": f"0:{2 * jc!r}:41"}


PRESETS = {
    "fig1": {"command": "sweep", "u": 2.0, "f": 1e-2, "j": 0.0, "gamma": 1e-5,
             "axis": "gamma", "grid": "log:1e-05:0.002:25"},
    "fig2": {"command": "sweep", "u": 2.0, "f": 1e-2, "gamma": 1e-5, "j": 0.0,
             "axis": "j", "grid": "0:2:41"},
    "fig3": None,  # depends on --order
    "fig4": {"command": "sweep", "u": 0.2, "f": 0.4, "gamma": 0.2, "j": 3.0,
             "axis": "u", "grid": "0.2:2:19"},
    "fig5": {"command": "phase-diagram", "f": 0.4, "gamma": 0.2,
             "u_grid": "0.1:3:20", "j_grid": "0:3:20"},
    "fig6": {"command": "spectrum", "u": 0.5, "j": 3.0, "f": 0.4, "gamma": 0.2},
}


@dataclass
class RunConfig:
    command: str
    settings: dict = field(default_factory=dict)

    def __getattr__(self, name):
        try:
            return self.settings[name]
        except KeyError as exc:
            raise AttributeError(name) from exc

    @property
    def params(self) -> SystemParams:
        s = self.settings
        dw = s["dw"]
        return SystemParams(u=s["u"] * dw, f=s["f"] * dw, gamma=s["gamma"] * dw,
                            j=s["j"] * dw, delta_omega=dw, z=s["z"])

    @property
    def series(self) -> SeriesConfig:
        return SeriesConfig(rel_tol=self.settings["tol_series"])

    def mf_config(self, stability: bool | None = None) -> meanfield.MeanFieldConfig:
        s = self.settings
        return meanfield.MeanFieldConfig(
            tol=s["tol_fixedpoint"], series=self.series,
            check_stability=s["stability"] if stability is None else stability,
            k_grid_n=s["kgrid"], n_cap=s["nmax_cap"])

    def header(self) -> dict:
        # the output path is left out so that a file's bytes do not depend on its name
        return {"command": self.command,
                **{k: v for k, v in self.settings.items() if k != "out"}}


def parse_grid(spec: str) -> list[float]:
    """``start:stop:num`` (linear), ``log:start:stop:num`` or ``a,b,c``."""
    spec = str(spec).strip()
    if spec.startswith("log:"):
        a, b, n = spec[4:].split(":")
        return [float(v) for v in np.geomspace(float(a), float(b), int(n))]
    if ":" in spec:
        a, b, n = spec.split(":")
        return [float(v) for v in np.linspace(float(a), float(b), int(n))]
    vals = [float(v) for v in spec.split(",") if v.strip()]
    if not vals:
        raise ValueError("empty grid")
    return vals


def read_config_file(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _coerce(key: str, value):
    if value is None:
        return None
    if key in FLOAT_KEYS:
        return float(value)
    if key in INT_KEYS:
        return int(value)
    if key in BOOL_KEYS:
        if isinstance(value, bool):
            return value
        return str(value).lower() in ("1", "true", "yes", "on")
    if key == "xi":
        return float(value)
    if key == "tk" and value not in (CORRECTED, PRINTED):
        raise ValueError(f"tk must be {CORRECTED!r} or {PRINTED!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ddbh", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="key=value settings file; flags override it")
    ap.add_argument("--preset", choices=sorted(PRESETS))
    ap.add_argument("--u", type=float, help="U / dw")
    ap.add_argument("--j", type=float, help="J / dw")
    ap.add_argument("--f", type=float, help="F / dw")
    ap.add_argument("--gamma", type=float, help="gamma / dw")
    ap.add_argument("--dw", type=float, help="absolute detuning scale (metadata)")
    ap.add_argument("--z", type=int, help="coordination number")
    ap.add_argument("--axis", choices=meanfield.AXES)
    ap.add_argument("--grid", help="sweep grid: start:stop:num, log:start:stop:num or a,b,c")
    ap.add_argument("--u-grid", dest="u_grid")
    ap.add_argument("--j-grid", dest="j_grid")
    ap.add_argument("--nmax-cap", dest="nmax_cap", type=int)
    ap.add_argument("--kgrid", type=int, help="n for the n x n stability grid")
    ap.add_argument("--out")
    ap.add_argument("--format", choices=("csv", "json"))
    ap.add_argument("--seed", type=int)
    ap.add_argument("--tol-series", dest="tol_series", type=float)
    ap.add_argument("--tol-fixedpoint", dest="tol_fixedpoint", type=float)
    ap.add_argument("--leak-tol", dest="leak_tol", type=float)
    ap.add_argument("--confirm", type=int,
                    help="consecutive truncations that must pass the leak test")
    ap.add_argument("--points", type=int, help="validation grid size")
    ap.add_argument("--order", type=int, help="multiphoton resonance order n")
    ap.add_argument("--xi", type=float)
    ap.add_argument("--path-points", dest="path_points", type=int)
    ap.add_argument("--selector", choices=("decay", "gp"))
    ap.add_argument("--tk", choices=(CORRECTED, PRINTED),
                    help="t_k normalisation for the spectrum command")
    ap.add_argument("--stability", action="store_const", const=True, default=None)
    ap.add_argument("--rho", action="store_const", const=True, default=None,
                    help="include the density matrix in JSON output")
    ap.add_argument("--workers", type=int)
    return ap


def resolve(argv=None) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    cfg_path = args.pop("config")
    file_vals = read_config_file(cfg_path) if cfg_path else {}
    flags = {k: v for k, v in args.items() if v is not None}
    preset = flags.get("preset", file_vals.get("preset"))
    layers = dict(DEFAULTS)
    if preset:
        order = int(flags.get("order", file_vals.get("order", DEFAULTS["order"])))
        pre = dict(_fig3(order) if preset == "fig3" else PRESETS[preset])
        pre.pop("command")
        layers.update(pre)
    layers.update(file_vals)
    layers.update(flags)
    settings = {k: _coerce(k, v) for k, v in layers.items()}
    return RunConfig(command, settings)


def _stable_str(sol) -> str:
    return sol.stable.value


def run_single(cfg: RunConfig):
    p = cfg.params
    obs = exact_observables(p, cfg.series)
    cols = ["n_mean", "g2", "re_b", "im_b"]
    rows = [[obs.n_mean, obs.g2, obs.coherence.real, obs.coherence.imag]]
    extra = None
    if cfg.rho:
        extra = {"rho": density_matrix(p, default_n_max(p, cfg.series), cfg.series).to_dict()}
    return cols, rows, extra


def run_oracle(cfg: RunConfig):
    p = cfg.params
    rho = adaptive_steady_state(p, p.f, cfg.leak_tol, n_cap=cfg.nmax_cap,
                                confirm=cfg.confirm)
    obs = observables_from(rho)
    cols = ["n_max", "n_mean", "g2", "re_b", "im_b"]
    rows = [[rho.n_max, obs.n_mean, obs.g2, obs.coherence.real, obs.coherence.imag]]
    return cols, rows, ({"rho": rho.to_dict()} if cfg.rho else None)


SOLUTION_COLS = ["branch", "n_mean", "g2", "re_b", "im_b", "stable"]


def _solution_row(i, s):
    return [i, s.obs.n_mean, s.obs.g2, s.b.real, s.b.imag, _stable_str(s)]


def run_meanfield(cfg: RunConfig):
    sols = meanfield.solve(cfg.params, cfg.mf_config(stability=True))
    return SOLUTION_COLS, [_solution_row(i, s) for i, s in enumerate(sols)], None


def run_sweep(cfg: RunConfig):
    p = cfg.params
    dw = p.delta_omega
    axis = cfg.axis
    grid = parse_grid(cfg.grid)
    points = meanfield.sweep(p, axis, [v * dw for v in grid], cfg.mf_config())
    cols = [axis] + SOLUTION_COLS + ["gp_n_max", "error"]
    if cfg.preset == "fig1":
        cols.insert(1, "xi")
    rows = []
    for pt in points:
        q = p.replace(**{axis: pt.value})
        gp_n = max(s.n for s in gp.gp_density_roots(q))
        lead = [pt.value / dw]
        if cfg.preset == "fig1":
            lead.append(weak_drive.xi(abs(q.f) / dw, q.gamma / dw))
        if not pt.solutions:
            rows.append(lead + [None] * 6 + [gp_n, pt.error])
        for i, s in enumerate(pt.solutions):
            rows.append(lead + _solution_row(i, s) + [gp_n, ""])
    return cols, rows, None


def run_phase_diagram(cfg: RunConfig):
    p = cfg.params
    dw = p.delta_omega
    u_grid = [v * dw for v in parse_grid(cfg.u_grid)]
    j_grid = [v * dw for v in parse_grid(cfg.j_grid)]
    cells = meanfield.phase_diagram(p, u_grid, j_grid, cfg.mf_config(stability=True),
                                    workers=cfg.workers)
    cols = ["u", "j", "n_solutions", "n_stable", "prep", "gp", "converged"]
    rows = [[c.u_over_dw, c.j_over_dw, c.n_solutions, c.n_solutions_stable, c.classification,
             c.gp_classification, c.converged] for row in cells for c in row]
    return cols, rows, None


def run_gp(cfg: RunConfig):
    p = cfg.params
    dw = p.delta_omega
    uc1, uc2 = gp.critical_U(p, "next") if p.f else (math.nan, math.nan)
    cols = ["root", "n", "re_beta", "im_beta", "classification", "u_c1", "u_c2"]
    cls = gp.gp_bistable(p)
    rows = [[i, s.n, s.beta.real, s.beta.imag, cls, uc1 / dw, uc2 / dw]
            for i, s in enumerate(gp.gp_density_roots(p))]
    return cols, rows, None


def run_spectrum(cfg: RunConfig):
    p = cfg.params
    sols = meanfield.solve(p, cfg.mf_config(stability=False))
    sol = meanfield.high_density(sols)
    path = gxmg_path(cfg.path_points)
    full = bogoliubov.spectrum(p, sol, path, selector=cfg.selector, leak_tol=cfg.leak_tol,
                               n_cap=cfg.nmax_cap, convention=cfg.tk)
    gstate = bogoliubov.nearest_gp_state(p, sol)
    gspec = gp.gp_spectrum(p, gstate, path, convention=cfg.tk)
    g = p.gamma
    cols = ["s", "kx", "ky", "branch", "re_w", "im_w"]
    rows = []
    for (s, kx, ky), fw, gw in zip(path, full.low_energy, gspec.low_energy):
        for name, w in (("full+", fw[0]), ("full-", fw[1]), ("gp+", gw[0]), ("gp-", gw[1])):
            rows.append([s, kx, ky, name, w.real / g, w.imag / g])
    extra = {"solution": {"n_mean": sol.obs.n_mean, "g2": sol.obs.g2, "b": sol.b}}
    return cols, rows, extra


def run_weakdrive(cfg: RunConfig):
    p = cfg.params
    dw = p.delta_omega
    n = cfg.order
    eps, eta, u = abs(p.f) / dw, p.gamma / dw, p.u / dw
    rows = [["resonance_u", weak_drive.resonance_detuning(n)] if n >= 2 else None,
            ["critical_j", weak_drive.critical_coupling(n)] if n >= 2 else None]
    x = cfg.xi if cfg.xi is not None else weak_drive.xi(eps, eta)
    rows.append(["xi", x])
    if x < 1:
        tp = weak_drive.two_photon_observables(x, p)
        rows += [["two_photon_n", tp.n_mean], ["two_photon_g2", tp.g2],
                 ["two_photon_re_b", tp.coherence.real], ["two_photon_im_b", tp.coherence.imag]]
    mix = observables_from(weak_drive.binomial_mixture(n))
    rows += [["binomial_n", mix.n_mean], ["binomial_g2", mix.g2]]
    if n >= 2 and abs(1 - (n - 1) * p.j / dw) > 1e-12:
        b = weak_drive.mf_coherence(n, p, resonant=True)
        rows += [["mf_resonant_re_b", b.real], ["mf_resonant_im_b", b.imag]]
    b = weak_drive.mf_coherence(n, p, resonant=False)
    rows += [["mf_offres_re_b", b.real], ["mf_offres_im_b", b.imag]]
    try:
        off = observables_from(weak_drive.offres_density_matrix(
            weak_drive.WeakDriveParams(eps, eta, u)))
        rows += [["offres_n", off.n_mean], ["offres_g2", off.g2]]
    except DDBHError:
        pass
    return ["quantity", "value"], [r for r in rows if r is not None], None


def run_validate(cfg: RunConfig):
    cols = ["index", "u", "f", "gamma", "n_max", "rel_n", "rel_g2", "rel_b"]
    rows = []
    for i, p in enumerate(random_grid(cfg.seed, cfg.points)):
        c = compare_point(p, cfg=cfg.series, confirm=cfg.confirm)
        rows.append([i, p.u, p.f.real, p.gamma, c.n_max, c.rel_n, c.rel_g2, c.rel_b])
    for name, idx in (("n", 5), ("g2", 6), ("b", 7)):
        print(f"max_rel_{name} = {max(r[idx] for r in rows):.3e}", file=sys.stderr)
    return cols, rows, None


RUNNERS = {
    "single": run_single, "oracle": run_oracle, "meanfield": run_meanfield,
    "sweep": run_sweep, "phase-diagram": run_phase_diagram, "gp": run_gp,
    "spectrum": run_spectrum, "weakdrive": run_weakdrive, "validate": run_validate,
}


def run(cfg: RunConfig) -> int:
    cols, rows, extra = RUNNERS[cfg.command](cfg)
    write_table(cfg.out, cols, rows, cfg.header(), cfg.format, extra)
    return 0


def main(argv=None) -> int:
    try:
        cfg = resolve(argv)
    except (OSError, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2
    try:
        return run(cfg)
    except (DDBHError, ValueError, ArithmeticError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc),
                          "command": cfg.command}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

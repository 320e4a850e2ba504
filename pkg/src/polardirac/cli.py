"""Command-line entry point.

Subcommands:

* verify       — run the invariant suites against a field/grid catalog and
                 emit a structured pass/fail report;
* decompose    — print the polar variables of a literal spinor;
* trajectories — integrate flow lines from configured initial points and
                 write CSV files plus a summary document;
* report       — re-render a stored report as a plain-text table.

Configuration is a single YAML file; every key has a built-in default, so
all subcommands also run bare.  Repeated `--set key.path=value` flags
override individual entries.  The POLARDIRAC_CONFIG_DIR environment
variable names a directory whose polardirac.yaml is picked up when no
config path is given.  Exit codes: 0 all checks pass, 1 a suite or data
check failed, 2 configuration problem.

Reports are JSON with sorted keys and no timestamps, so identical
config + seed reruns produce byte-identical output.
"""

from __future__ import annotations

import argparse
import copy
import json
import os
import sys
from pathlib import Path

import numpy as np
import yaml

from .bilinears import compute_bilinears, fierz_residuals
from .clifford import (
    BASIS,
    METRIC,
    exp_lorentz,
    goldstone_matrices,
    induced_vector,
    minkowski_dot,
)
from .connections import (
    ConnectionField,
    ExternalPotentials,
    build_connections,
    curvatures,
    divergence_constraints,
    goldstone_derivatives,
    irreducible_split,
    polar_pipeline,
    reassemble_split,
    transform_from_params,
)
from .dynamics import (
    PolarFields,
    dirac_residual,
    guidance_momentum,
    hj_residuals,
    polar_dirac_residuals,
    quantum_potentials,
)
from .errors import ConfigError, PolarDiracError
from .fields import convergence_order, plane_wave, sample, superpose
from .polar import EPS_SINGULAR, decompose
from .trajectories import continuity_residual, integrate, write_csv

CONFIG_ENV = "POLARDIRAC_CONFIG_DIR"
CONFIG_NAME = "polardirac.yaml"
SUITES = (
    "algebraic",
    "roundtrip",
    "equivalence",
    "curvature",
    "constraints",
    "continuity",
)

_BOOSTED_E = float(np.hypot(1.0, 0.5))

DEFAULTS = {
    "command": "verify",
    "seed": 0,
    "field": {
        "kind": "superposition",
        "mass": 1.0,
        "momentum": [1.0, 0.0, 0.0, 0.0],
        "spin_up": True,
        "components": [
            {"momentum": [1.0, 0.0, 0.0, 0.0], "spin_up": True,
             "coeff": [1.0, 0.0]},
            {"momentum": [_BOOSTED_E, 0.0, 0.0, 0.5], "spin_up": True,
             "coeff": [0.7, 0.0]},
        ],
    },
    "grid": {
        "origin": [0.0, 0.0, 0.0, 0.0],
        "spacing": [0.2, 1.0, 1.0, 0.2],
        "dims": [9, 1, 1, 9],
    },
    "couplings": {"q": 1.0, "m": 1.0, "X": 0.0, "M_torsion": 1.0},
    "tolerances": {
        "algebraic": 1e-10,
        "roundtrip": 1e-9,
        "equivalence": 1e-10,
        "curvature": 1e-10,
        "constraints": 1e-12,
        "continuity": 1e-12,
        "order_band": 0.2,
    },
    "counts": {"transforms": 100, "spinors": 200},
    "suites": list(SUITES),
    "output": {"report": None, "csv": "trajectories.csv", "combined": False},
    "trajectories": {
        "points": [[0.0, 0.0, 0.8]],
        "t0": 0.0,
        "t1": 1.0,
        "dt": 0.001,
        "eps_sing": EPS_SINGULAR,
    },
    "decompose": {"spinor": [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]},
}

_NUM = "number"
_SCHEMA = {
    "command": str,
    "seed": int,
    "field": {
        "kind": str,
        "mass": _NUM,
        "momentum": list,
        "spin_up": bool,
        "components": list,
    },
    "grid": {"origin": list, "spacing": list, "dims": list},
    "couplings": {"q": _NUM, "m": _NUM, "X": _NUM, "M_torsion": _NUM},
    "tolerances": {
        "algebraic": _NUM,
        "roundtrip": _NUM,
        "equivalence": _NUM,
        "curvature": _NUM,
        "constraints": _NUM,
        "continuity": _NUM,
        "order_band": _NUM,
    },
    "counts": {"transforms": int, "spinors": int},
    "suites": list,
    "output": {"report": (str, type(None)), "csv": str, "combined": bool},
    "trajectories": {
        "points": list,
        "t0": _NUM,
        "t1": _NUM,
        "dt": _NUM,
        "eps_sing": _NUM,
    },
    "decompose": {"spinor": list},
}


def _type_ok(value, spec) -> bool:
    if spec is _NUM:
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if spec is int:
        return isinstance(value, int) and not isinstance(value, bool)
    return isinstance(value, spec)


def _validate(node, schema, path: str) -> None:
    for key, value in node.items():
        where = f"{path}{key}"
        if key not in schema:
            raise ConfigError(f"unknown config key '{where}'")
        spec = schema[key]
        if isinstance(spec, dict):
            if not isinstance(value, dict):
                raise ConfigError(f"'{where}' must be a mapping")
            _validate(value, spec, where + ".")
        elif not _type_ok(value, spec):
            raise ConfigError(
                f"'{where}' has type {type(value).__name__}, "
                f"expected {spec if isinstance(spec, str) else getattr(spec, '__name__', spec)}"
            )


def _merge(base: dict, extra: dict, path: str) -> None:
    for key, value in extra.items():
        where = f"{path}{key}"
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            _merge(base[key], value, where + ".")
        else:
            base[key] = value


def _set_path(cfg: dict, dotted: str, value) -> None:
    parts = dotted.split(".")
    node = cfg
    for part in parts[:-1]:
        nxt = node.get(part)
        if not isinstance(nxt, dict):
            nxt = {}
            node[part] = nxt
        node = nxt
    node[parts[-1]] = value


def load_config(path: str | None, overrides=()) -> dict:
    """Defaults, then the YAML file (explicit path or the env-dir one),
    then --set overrides; validated against the schema."""
    cfg = copy.deepcopy(DEFAULTS)
    if path is None:
        env_dir = os.environ.get(CONFIG_ENV)
        if env_dir:
            candidate = Path(env_dir) / CONFIG_NAME
            if candidate.exists():
                path = str(candidate)
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from exc
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be a mapping")
        _merge(cfg, data, "")
    for item in overrides:
        key, sep, raw = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        try:
            value = yaml.safe_load(raw)
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse --set value {raw!r}: {exc}") from exc
        _set_path(cfg, key.strip(), value)
    _validate(cfg, _SCHEMA, "")
    _check_semantics(cfg)
    return cfg


def _check_semantics(cfg: dict) -> None:
    for key in ("origin", "spacing", "dims"):
        vec = cfg["grid"][key]
        if len(vec) != 4:
            raise ConfigError(f"'grid.{key}' must have 4 entries")
    for d in cfg["grid"]["dims"]:
        if not isinstance(d, int) or d < 1:
            raise ConfigError("'grid.dims' entries must be positive integers")
    for name in cfg["suites"]:
        if name not in SUITES:
            raise ConfigError(
                f"unknown suite '{name}'; choose from {', '.join(SUITES)}"
            )
    tcfg = cfg["trajectories"]
    if tcfg["dt"] <= 0:
        raise ConfigError("'trajectories.dt' must be positive")
    for i, pt in enumerate(tcfg["points"]):
        if not isinstance(pt, (list, tuple)) or len(pt) != 3:
            raise ConfigError(
                f"'trajectories.points[{i}]' must be a 3-component list"
            )
    spinor = cfg["decompose"]["spinor"]
    if len(spinor) != 8:
        raise ConfigError(
            "'decompose.spinor' needs 8 reals (re, im per component)"
        )
    kind = cfg["field"]["kind"]
    if kind not in ("plane_wave", "superposition"):
        raise ConfigError(f"unknown field kind '{kind}'")


def build_field(cfg: dict):
    """AnalyticField described by the config, with off-shell data reported
    as a configuration problem."""
    fcfg = cfg["field"]
    mass = float(fcfg["mass"])
    try:
        if fcfg["kind"] == "plane_wave":
            return plane_wave(
                np.asarray(fcfg["momentum"], dtype=float),
                spin_up=bool(fcfg["spin_up"]),
                m=mass,
            )
        waves, coeffs = [], []
        for i, comp in enumerate(fcfg["components"]):
            if not isinstance(comp, dict):
                raise ConfigError(f"'field.components[{i}]' must be a mapping")
            try:
                momentum = comp["momentum"]
                coeff = comp.get("coeff", [1.0, 0.0])
                spin_up = comp.get("spin_up", True)
            except KeyError as exc:
                raise ConfigError(
                    f"'field.components[{i}]' is missing {exc}"
                ) from exc
            waves.append(
                plane_wave(np.asarray(momentum, dtype=float),
                           spin_up=bool(spin_up), m=mass)
            )
            coeffs.append(complex(coeff[0], coeff[1]))
        if not waves:
            raise ConfigError("'field.components' must not be empty")
        return superpose(waves, coeffs)
    except PolarDiracError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"field spec rejected: {exc}") from exc


def grid_spec(cfg: dict):
    g = cfg["grid"]
    return (
        tuple(float(v) for v in g["origin"]),
        tuple(float(v) for v in g["spacing"]),
        tuple(int(v) for v in g["dims"]),
    )


def _refined(origin, spacing, dims):
    """Same physical box with doubled resolution on every active axis."""
    spacing2 = tuple(
        h / 2.0 if d > 1 else h for h, d in zip(spacing, dims)
    )
    dims2 = tuple(2 * d - 1 if d > 1 else 1 for d in dims)
    return origin, spacing2, dims2


def _check(name: str, residual: float, tolerance: float) -> dict:
    return {
        "name": name,
        "residual": float(residual),
        "tolerance": float(tolerance),
        "passed": bool(residual <= tolerance),
    }


def _order_check(name: str, order, band: float) -> dict:
    # exact-vanish branches (order is None) have nothing left to converge
    deviation = 0.0 if order is None else abs(order - 2.0)
    return _check(name, deviation, band)


def _random_spinors(rng, n: int) -> np.ndarray:
    psi = rng.normal(size=(n, 4)) + 1j * rng.normal(size=(n, 4))
    mod = np.sum(np.abs(psi) ** 2, axis=-1)
    # keep the draws comfortably away from the singular set
    psi[mod < 1e-2] += 1.0
    return psi


def suite_algebraic(cfg: dict, rng) -> list:
    tol = float(cfg["tolerances"]["algebraic"])
    n = int(cfg["counts"]["transforms"])
    g = BASIS.gamma
    checks = []

    anti = np.einsum("aij,bjk->abik", g, g) + np.einsum(
        "bij,ajk->abik", g, g
    )
    expect = 2.0 * METRIC[:, :, None, None] * np.eye(4)
    checks.append(_check("clifford_algebra", np.max(np.abs(anti - expect)), tol))

    eta_diag = np.diag(METRIC)
    sig_low = (
        BASIS.sigma
        * eta_diag[:, None, None, None]
        * eta_diag[None, :, None, None]
    )
    dual = np.einsum(
        "abcd,ij,cdjk->abik", BASIS.epsilon, BASIS.pi, BASIS.sigma
    )
    checks.append(
        _check("sigma_duality", np.max(np.abs(2j * sig_low - dual)), tol)
    )

    params = 0.7 * rng.uniform(-1.0, 1.0, (n, 6))
    worst_metric = worst_vec = worst_hom = 0.0
    prev = None
    for row in params:
        st = exp_lorentz(row)
        v = st.vector
        worst_metric = max(
            worst_metric, float(np.max(np.abs(v.T @ METRIC @ v - METRIC)))
        )
        lam_inv = np.linalg.inv(st.lorentz)
        sandwich = np.einsum("ij,ajk,kl->ail", lam_inv, g, st.lorentz)
        worst_vec = max(
            worst_vec,
            float(np.max(np.abs(sandwich - np.einsum("ab,bij->aij", v, g)))),
        )
        if prev is not None:
            vv = induced_vector(prev.lorentz @ st.lorentz)
            worst_hom = max(
                worst_hom, float(np.max(np.abs(vv - prev.vector @ v)))
            )
        prev = st
    checks.append(_check("metric_preservation", worst_metric, tol))
    checks.append(_check("vector_transform", worst_vec, tol))
    checks.append(_check("homomorphism", worst_hom, tol))

    psi = _random_spinors(rng, int(cfg["counts"]["spinors"]))
    fr = fierz_residuals(compute_bilinears(psi))
    worst = max(
        float(np.max(np.abs(fr.r1_norm))),
        float(np.max(np.abs(fr.r2_norm))),
        float(np.max(np.abs(fr.r3_norm))),
    )
    checks.append(_check("fierz_identities", worst, tol))
    return checks


def suite_roundtrip(cfg: dict, rng) -> list:
    tol = float(cfg["tolerances"]["roundtrip"])
    q = float(cfg["couplings"]["q"])
    n = int(cfg["counts"]["spinors"])
    checks = []

    psi = _random_spinors(rng, n)
    pd = decompose(psi, q=q)
    from .polar import reconstruct

    back = reconstruct(pd)
    checks.append(
        _check("reconstruct", np.max(np.abs(back - psi)), tol)
    )

    bil = compute_bilinears(psi)
    two_phi2 = 2.0 * pd.phi**2
    worst = max(
        float(np.max(np.abs(bil.U - two_phi2[..., None] * pd.u))),
        float(np.max(np.abs(bil.S - two_phi2[..., None] * pd.s))),
        float(np.max(np.abs(bil.phi_scalar - two_phi2 * np.cos(pd.beta)))),
        float(np.max(np.abs(bil.theta - two_phi2 * np.sin(pd.beta)))),
    )
    checks.append(_check("bilinear_consistency", worst, tol))

    worst_cov = 0.0
    for row in 0.6 * rng.uniform(-1.0, 1.0, (20, 6)):
        st = exp_lorentz(row)
        pd2 = decompose(psi @ st.matrix.T, q=q)
        worst_cov = max(
            worst_cov,
            float(np.max(np.abs(pd2.u - pd.u @ st.vector.T))),
            float(np.max(np.abs(pd2.s - pd.s @ st.vector.T))),
            float(np.max(np.abs(pd2.phi - pd.phi))),
            float(np.max(np.abs(pd2.beta - pd.beta))),
        )
    checks.append(_check("covariance", worst_cov, tol))
    return checks


def _wave_grid(m: float, chi: float, n: int, extent: float = 0.8):
    p = m * np.array([np.cosh(chi), 0.0, 0.0, np.sinh(chi)])
    f = plane_wave(p, m=m)
    h = extent / (n - 1)
    if chi == 0.0:
        dims, spacing = (n, 1, 1, 1), (h, 1.0, 1.0, 1.0)
    else:
        dims, spacing = (n, 1, 1, n), (h, 1.0, 1.0, h)
    return sample(f, (0.0, 0.0, 0.0, 0.0), spacing, dims)


def _random_polar_fields(rng, ext: ExternalPotentials, dims=(1, 5, 5, 5)):
    """Synthetic smooth polar data with hand-set connections: exercises
    the algebraic content of the residual builders without any FD."""
    shape = tuple(dims)
    phi = rng.uniform(0.6, 1.6, shape)
    beta = rng.uniform(-1.2, 1.2, shape)
    params = 0.8 * rng.uniform(-1.0, 1.0, shape + (6,))
    _, v = goldstone_matrices(params)
    u = v[..., :, 0]
    s = v[..., :, 3]
    p = rng.uniform(-1.0, 1.0, shape + (4,))
    r = rng.uniform(-1.0, 1.0, shape + (4, 4, 4))
    r = r - np.swapaxes(r, -3, -2)
    cf = ConnectionField(
        P=p,
        R=r,
        origin=np.zeros(4),
        spacing=np.ones(4),
        dims=shape,
    )
    return PolarFields(phi=phi, beta=beta, u=u, s=s, cf=cf, ext=ext)


def suite_equivalence(cfg: dict, rng) -> list:
    tol = float(cfg["tolerances"]["equivalence"])
    band = float(cfg["tolerances"]["order_band"])
    q = float(cfg["couplings"]["q"])
    m = float(cfg["couplings"]["m"])
    checks = []

    ext_rand = ExternalPotentials(
        W=rng.uniform(-0.5, 0.5, (1, 5, 5, 5, 4)),
        q=q,
        X=0.7,
        m=m,
    )
    pf = _random_polar_fields(rng, ext_rand)
    dep = polar_dirac_residuals(pf)
    hj = hj_residuals(pf, quantum_potentials(pf))
    worst = max(
        float(np.max(np.abs(hj.res1 + 0.5 * dep.res1))),
        float(np.max(np.abs(hj.res2 + 0.5 * dep.res2))),
    )
    checks.append(_check("hj_dep_identity", worst, tol))

    ext = ExternalPotentials(q=q, m=m)
    for label, chi in (("rest", 0.0), ("boosted", 0.4)):
        norms = {}
        for n in (9, 17):
            g = _wave_grid(m, chi, n)
            pf = PolarFields.from_grid(g, ext)
            qp = quantum_potentials(pf)
            dep = polar_dirac_residuals(pf)
            norms[n] = {
                "dirac": dirac_residual(g, ext),
                "pair": np.abs(dep.res1) + np.abs(dep.res2),
                "guidance": np.abs(guidance_momentum(pf, qp) - pf.cf.P),
                "dims": g.dims,
            }
        for key in ("dirac", "pair", "guidance"):
            order, _, _ = convergence_order(
                norms[9][key], norms[17][key], norms[9]["dims"]
            )
            checks.append(_order_check(f"{label}_{key}_order", order, band))
    return checks


def _gauge_params_grid(n: int, boost: bool):
    """Pure-gauge transform field over a static spatial box."""
    h = 2.0 / (n - 1)
    ax = np.linspace(-1.0, 1.0, n)
    x, y, z = np.meshgrid(ax, ax, ax, indexing="ij")
    params = np.zeros((1, n, n, n, 6))
    if boost:
        params[..., 0] = 0.3 * np.sin(x) * np.cos(y)
        params[..., 1] = 0.25 * np.sin(z)
        params[..., 2] = 0.2 * np.cos(x + z)
    else:
        params[..., 3] = 0.3 * np.sin(x)
        params[..., 4] = 0.25 * np.cos(y + z)
        params[..., 5] = 0.2 * np.sin(y)
    xi = 0.4 * np.sin(x) * np.cos(z)
    origin = (0.0, -1.0, -1.0, -1.0)
    spacing = (1.0, h, h, h)
    dims = (1, n, n, n)
    return transform_from_params(xi, params, origin, spacing, dims)


def suite_curvature(cfg: dict, rng) -> list:
    tol = float(cfg["tolerances"]["curvature"])
    band = float(cfg["tolerances"]["order_band"])
    q = float(cfg["couplings"]["q"])
    checks = []

    data = {}
    for n in (9, 17):
        lf = _gauge_params_grid(n, boost=False)
        gd = goldstone_derivatives(lf)
        cf = build_connections(gd, ExternalPotentials(q=lf.q))
        cd = curvatures(cf, q=lf.q, lfield=lf)
        data[n] = {
            "F": np.abs(cd.F),
            "riemann": np.max(np.abs(cd.riemann), axis=(-4, -3, -2, -1)),
            "flat": cd.goldstone_flat,
            "dims": cf.dims,
        }
    for key in ("F", "riemann", "flat"):
        order, _, _ = convergence_order(
            data[9][key], data[17][key], data[9]["dims"]
        )
        checks.append(_order_check(f"pure_gauge_{key}_order", order, band))

    # a plane wave's transform is an identity multiple: its spin
    # connection, and hence its curvature, vanish exactly
    m = float(cfg["couplings"]["m"])
    g = _wave_grid(m, 0.4, 9)
    _, _, _, cf = polar_pipeline(g, ExternalPotentials(q=q, m=m))
    cd = curvatures(cf, q=q)
    worst = max(float(np.max(np.abs(cf.R))), float(np.max(np.abs(cd.riemann))))
    checks.append(_check("wave_spin_connection", worst, tol))
    return checks


def suite_constraints(cfg: dict, rng) -> list:
    tol = float(cfg["tolerances"]["constraints"])
    band = float(cfg["tolerances"]["order_band"])
    checks = []

    r = rng.uniform(-1.0, 1.0, (40, 4, 4, 4))
    r = r - np.swapaxes(r, -3, -2)
    back = reassemble_split(irreducible_split(r))
    checks.append(_check("split_reassembly", np.max(np.abs(back - r)), tol))

    data = {}
    for n in (9, 17):
        lf = _gauge_params_grid(n, boost=True)
        gd = goldstone_derivatives(lf)
        cf = build_connections(gd, ExternalPotentials(q=lf.q))
        dc = divergence_constraints(cf)
        data[n] = {
            "resB": np.abs(dc.resB),
            "resR": np.abs(dc.resR),
            "dims": cf.dims,
        }
    for key in ("resB", "resR"):
        order, _, _ = convergence_order(
            data[9][key], data[17][key], data[9]["dims"]
        )
        checks.append(_order_check(f"{key}_order", order, band))
    return checks


def suite_continuity(cfg: dict, rng) -> list:
    tol = float(cfg["tolerances"]["continuity"])
    band = float(cfg["tolerances"]["order_band"])
    m = float(cfg["couplings"]["m"])
    checks = []

    wave = plane_wave((m, 0.0, 0.0, 0.0), m=m)
    res = continuity_residual(
        wave, ((0.0, 0.0, 0.0, 0.0), (0.1, 1.0, 1.0, 1.0), (9, 1, 1, 1))
    )
    checks.append(_check("plane_wave_flat", np.max(np.abs(res)), tol))

    f = build_field(cfg)
    origin, spacing, dims = grid_spec(cfg)
    coarse = continuity_residual(f, (origin, spacing, dims))
    fine = continuity_residual(f, _refined(origin, spacing, dims))
    order, mc, _ = convergence_order(coarse, fine, dims)
    checks.append(_order_check("config_field_order", order, band))
    return checks


SUITE_FUNCS = {
    "algebraic": suite_algebraic,
    "roundtrip": suite_roundtrip,
    "equivalence": suite_equivalence,
    "curvature": suite_curvature,
    "constraints": suite_constraints,
    "continuity": suite_continuity,
}


def run_verify(cfg: dict) -> int:
    selected = set(cfg["suites"])
    rng = np.random.default_rng(cfg["seed"])
    suites = []
    all_pass = True
    for name in SUITES:
        if name not in selected:
            suites.append({
                "name": name,
                "status": "skipped",
                "max_residual": None,
                "tolerance": None,
                "checks": [],
            })
            continue
        checks = SUITE_FUNCS[name](cfg, rng)
        passed = all(c["passed"] for c in checks)
        all_pass = all_pass and passed
        suites.append({
            "name": name,
            "status": "pass" if passed else "fail",
            "max_residual": max(c["residual"] for c in checks),
            "tolerance": min(c["tolerance"] for c in checks),
            "checks": checks,
        })
    report = {
        "command": "verify",
        "seed": cfg["seed"],
        "passed": all_pass,
        "suites": suites,
    }
    _emit(report, cfg)
    return 0 if all_pass else 1


def run_decompose(cfg: dict) -> int:
    vals = np.asarray(cfg["decompose"]["spinor"], dtype=float).reshape(4, 2)
    psi = vals[:, 0] + 1j * vals[:, 1]
    try:
        pd = decompose(psi, q=float(cfg["couplings"]["q"]))
    except PolarDiracError as exc:
        print(f"decompose failed: {exc}", file=sys.stderr)
        return 1
    doc = {
        "command": "decompose",
        "phi": float(pd.phi),
        "beta": float(pd.beta),
        "u": [float(v) for v in pd.u],
        "s": [float(v) for v in pd.s],
        "goldstone": [float(v) for v in pd.goldstone],
        "alpha": float(pd.alpha),
        "passed": True,
    }
    _emit(doc, cfg)
    return 0


def run_trajectories(cfg: dict) -> int:
    f = build_field(cfg)
    origin, spacing, dims = grid_spec(cfg)
    g = sample(f, origin, spacing, dims)
    tcfg = cfg["trajectories"]
    trajs = [
        integrate(g, pt, float(tcfg["t0"]), float(tcfg["t1"]),
                  float(tcfg["dt"]), eps_sing=float(tcfg["eps_sing"]))
        for pt in tcfg["points"]
    ]
    paths = write_csv(
        trajs, cfg["output"]["csv"], combined=bool(cfg["output"]["combined"])
    )
    drifts = [t.normalization_drift() for t in trajs]
    doc = {
        "command": "trajectories",
        "seed": cfg["seed"],
        "trajectories": [
            {
                "index": i,
                "termination": t.termination,
                "samples": len(t.samples),
                "normalization_drift": d,
            }
            for i, (t, d) in enumerate(zip(trajs, drifts))
        ],
        "max_normalization_drift": max(drifts) if drifts else 0.0,
        "csv_files": [str(p) for p in paths],
        "passed": True,
    }
    _emit(doc, cfg)
    return 0


def run_report(cfg: dict) -> int:
    path = cfg["output"]["report"]
    if not path:
        raise ConfigError("'output.report' must point at a stored report")
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read report {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"cannot parse report {path}: {exc}") from exc
    lines = [f"command: {doc.get('command', '?')}"]
    for suite in doc.get("suites", []):
        line = f"{suite['name']}: {suite['status']}"
        if suite.get("max_residual") is not None:
            line += (
                f" (max residual {suite['max_residual']:.3e},"
                f" tolerance {suite['tolerance']:.3e})"
            )
        lines.append(line)
        for c in suite.get("checks", []):
            mark = "ok" if c["passed"] else "FAIL"
            lines.append(
                f"  {c['name']}: {mark} "
                f"({c['residual']:.3e} vs {c['tolerance']:.3e})"
            )
    for t in doc.get("trajectories", []):
        lines.append(
            f"trajectory {t['index']}: {t['termination']} "
            f"({t['samples']} samples, drift {t['normalization_drift']:.3e})"
        )
    passed = bool(doc.get("passed", False))
    lines.append("result: pass" if passed else "result: FAIL")
    print("\n".join(lines))
    return 0 if passed else 1


def _emit(doc: dict, cfg: dict) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    print(text)
    target = cfg["output"]["report"]
    if target and doc["command"] != "report":
        path = Path(target)
        if path.parent != Path(""):
            path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n")


DISPATCH = {
    "verify": run_verify,
    "decompose": run_decompose,
    "trajectories": run_trajectories,
    "report": run_report,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="polardirac",
        description="verification suites and flow-line runs for the polar "
        "form of the spinor field",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, blurb in (
        ("verify", "run the invariant suites and write a report"),
        ("decompose", "print the polar variables of a literal spinor"),
        ("trajectories", "integrate configured flow lines to CSV"),
        ("report", "re-render a stored report as plain text"),
    ):
        p = sub.add_parser(name, help=blurb)
        p.add_argument(
            "config",
            nargs="?",
            default=None,
            help=f"YAML config (default: ${CONFIG_ENV}/{CONFIG_NAME} "
            "if set, else built-in defaults)",
        )
        p.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override one config entry (repeatable), e.g. "
            "--set tolerances.algebraic=1e-8",
        )
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, args.overrides)
        cfg["command"] = args.command
        return DISPATCH[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

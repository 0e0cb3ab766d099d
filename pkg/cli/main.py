"""kleinian: command-line surface.

    python -m cli zeta divisor --case 3 --k 1 --l 1 --trS0 1 --n-min -6
    python -m cli group verify-identity --d 1 --rep trivial
    python -m cli lattice lsum --tau i --u 0.5 --v 0 --xmax 0

Every leaf command writes a report (JSON by default) to --out or standard output.
Exit codes: 0 success, 2 invalid input or config, 3 numerical failure, 4 budget exceeded.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
import time

import numpy as np

from cli.config import RunConfig, load_config, merge_flags, parse_complex
from cli.report import build_body, write_report
from core.errors import ConfigError, KleinianError, NotSingularVector
from core.geometry import MoebiusElt, PointH3, classify, fixed_points, normalize_loxodromic, phi_s
from core.specfun import g_from_h, resolvent_pair, shc_forward
from groups.bianchi import (BianchiGroup, cuspidal_elliptic_classes, element_pool, expand_powers,
                            loxodromic_classes, nce_classes, reduced_system, verify_cusp_identity)
from groups.characters import nontrivial_character
from groups.repchar import UnitaryRepSpec, decompose_restriction
from lattice.kronecker import L_kronecker, eta_closed_form
from lattice.sums import L_direct, Lattice, LatticeCharacter, Z_partial, count_points, eta_lambda
from spectral.eisenstein import EisensteinSampler, laplace_eigen_check
from spectral.trace import ClassBundle, geometric_side
from spectral.zeta import (ScatteringInput, character_eigs, class_trace, cusp_integral_quadrature,
                           cusp_integral_series, log_zeta_partial, residue_table, zeta_logderiv_series)

logger = logging.getLogger("cli")


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot read {text!r} as a comma-separated list of numbers") from exc


def _group(cfg: RunConfig) -> BianchiGroup:
    return BianchiGroup(cfg.d)


def _rep(G: BianchiGroup, cfg: RunConfig):
    """(UnitaryRepSpec, character or None) for the configured representation."""
    if cfg.rep == "trivial":
        return UnitaryRepSpec.trivial(), None
    if cfg.rep == "nontrivial":
        chi = nontrivial_character(G.d)
        return UnitaryRepSpec.from_character(G, chi), chi
    return UnitaryRepSpec.from_json(cfg.rep), None


def _exact_traces(G, chi, classes):
    if chi is None:
        return None
    return [chi.exact(np.array(c.ring_rep)) for c in classes]


# geom / lattice

def cmd_geom_classify(cfg, x):
    entries = [parse_complex(v) for v in str(x["matrix"]).split(",")]
    if len(entries) != 4:
        raise ConfigError("--matrix takes four comma-separated entries a,b,c,d")
    M = MoebiusElt(*entries); kind = classify(M)
    res = dict(kind=kind.value, trace=M.trace(),
               fixed_points=[None if p is None else complex(p) for p in fixed_points(M)])
    if kind.value == "loxodromic":
        a, N = normalize_loxodromic(M); res.update(a=a, N=N)
    return dict(matrix=entries), res


def _lattice_args(x):
    lat = Lattice(parse_complex(x.get("tau") or "i"))
    psi = LatticeCharacter(float(x.get("u") or 0.0), float(x.get("v") or 0.0))
    return lat, psi


def cmd_lattice_lsum(cfg, x):
    lat, psi = _lattice_args(x); xmax = float(x["xmax"]) if x.get("xmax") is not None else cfg.x_max
    res = dict(value=Z_partial(xmax, lat, psi), points=count_points(lat, xmax) if xmax > 0 else 0)
    if xmax >= 1e4 and not psi.trivial:
        res["tail_estimate"] = L_direct(lat, psi, xmax).tail_estimate
    return dict(tau=lat.tau, u=psi.u, v=psi.v, x_max=xmax), res


def cmd_lattice_eta(cfg, x):
    lat, _ = _lattice_args(x)
    est = eta_lambda(lat)
    closed = eta_closed_form(lat)
    return dict(tau=lat.tau), dict(eta_ladder=est.eta, uncertainty=est.uncertainty, eta_closed_form=closed,
                                   difference=abs(est.eta - closed), rungs=len(est.xs))


def cmd_lattice_kronecker(cfg, x):
    lat, psi = _lattice_args(x); xmax = float(x["xmax"]) if x.get("xmax") is not None else cfg.x_max
    direct = L_direct(lat, psi, xmax); closed = L_kronecker(lat, psi)
    return dict(tau=lat.tau, u=psi.u, v=psi.v, x_max=xmax), dict(
        L_direct=direct.value, L_kronecker=closed, difference=abs(direct.value - closed),
        tail_estimate=direct.tail_estimate)


# group

def cmd_group_enumerate(cfg, x):
    G = _group(cfg); pool = element_pool(G, cfg.height)
    ring = G.ring; tr = ring.to_complex(ring.trace(pool)); t2 = tr * tr
    kinds = dict(identity_or_parabolic=int(np.sum(np.isclose(t2, 4))),
                 elliptic=int(np.sum((np.abs(t2.imag) < 1e-12) & (t2.real < 4 - 1e-12))))
    kinds["loxodromic"] = len(pool) - sum(kinds.values())
    return dict(d=G.d, height=cfg.height), dict(elements=len(pool), by_trace=kinds)


def cmd_group_classes(cfg, x):
    G = _group(cfg); kind = x.get("kind") or "ce"
    if kind == "ce":
        classes = cuspidal_elliptic_classes(G, cfg.height)
    elif kind == "lox":
        classes = loxodromic_classes(G, cfg.norm_bound, cfg.height)
    elif kind == "nce":
        classes = nce_classes(G, cfg.height)
    else:
        raise ConfigError(f"--kind must be ce, lox or nce, got {kind!r}")
    return dict(d=G.d, height=cfg.height, kind=kind, norm_bound=cfg.norm_bound if kind == "lox" else None), dict(
        count=len(classes), classes=[c.as_record() for c in classes])


def cmd_group_verify(cfg, x):
    G = _group(cfg); spec, chi = _rep(G, cfg)
    if spec.label not in ("trivial",) and chi is None:
        raise ConfigError("exact traces are available for the named representations only")
    data = decompose_restriction(spec, G)
    classes = cuspidal_elliptic_classes(G, cfg.height)
    residual = verify_cusp_identity(G, data, classes, _exact_traces(G, chi, classes))
    return dict(d=G.d, rep=cfg.rep, height=cfg.height), dict(
        residual=str(residual), holds=residual == 0, k_inf=data.k_inf, l_inf=data.l_inf, index=data.index,
        classes=len(classes), complete=all(c.complete for c in classes))


# eisenstein

def _sampler(cfg, x):
    G = _group(cfg); spec, chi = _rep(G, cfg)
    data = decompose_restriction(spec, G)
    if data.k_inf == 0:
        raise NotSingularVector("the representation has no singular vector at the cusp")
    v = data.singular_basis[:, 0]
    s = parse_complex(x.get("s") or "1.8")
    return EisensteinSampler(G, spec, v, s, cfg.coset_height, chi), s


def _point(x) -> PointH3:
    return PointH3(parse_complex(x.get("z") or "0"), float(x.get("r") or 3.0))


def cmd_eis_eval(cfg, x):
    sampler, s = _sampler(cfg, x); P = _point(x)
    ev = sampler.evaluate(P)
    return dict(d=cfg.d, rep=cfg.rep, s=s, z=P.z, r=P.r, coset_height=cfg.coset_height), ev.as_record()


def cmd_eis_eigencheck(cfg, x):
    sampler, s = _sampler(cfg, x); P = _point(x)
    residual = laplace_eigen_check(sampler, s, P, step=cfg.eigen_step)
    return dict(d=cfg.d, rep=cfg.rep, s=s, z=P.z, r=P.r, step=cfg.eigen_step, coset_height=cfg.coset_height), dict(
        relative_residual=residual)


# zeta

def _lox_data(cfg):
    G = _group(cfg); spec, chi = _rep(G, cfg)
    if spec.dim != 1 or (chi is None and spec.label != "trivial"):
        raise ConfigError("zeta commands take the trivial or a named one-dimensional representation")
    prim = reduced_system(loxodromic_classes(G, cfg.norm_bound, cfg.height))
    eigs = character_eigs(G, chi, prim) if chi is not None else None
    return G, prim, eigs


def cmd_zeta_partial(cfg, x):
    G, prim, eigs = _lox_data(cfg); rows = []
    for s in _floats(x.get("s") or "2,2.5,3"):
        logz = log_zeta_partial(s, prim, eigs, cfg.kl_tol)
        rows.append(dict(s_re=s, s_im=0.0, value=complex(np.exp(logz)), log_value=logz))
    return dict(d=G.d, rep=cfg.rep, norm_bound=cfg.norm_bound, height=cfg.height, kl_tol=cfg.kl_tol), dict(
        classes=len(prim), rows=rows)


def cmd_zeta_logderiv(cfg, x):
    G, prim, eigs = _lox_data(cfg)
    full = expand_powers(prim, cfg.n_max)
    traces = None
    if eigs is not None:
        # expand_powers lists n = 1..n_max, v = 0..m-1 per primitive class
        traces = []; k = 0
        for i, c in enumerate(prim):
            for _ in range(cfg.n_max * c.m):
                traces.append(class_trace(eigs[i], full[k])); k += 1
    rows = []
    for s in _floats(x.get("s") or "2,2.5,3"):
        series = zeta_logderiv_series(s, full, traces)
        d = float(x.get("delta") or 1e-4)
        numeric = (log_zeta_partial(s + d, prim, eigs, cfg.kl_tol) - log_zeta_partial(s - d, prim, eigs, cfg.kl_tol)) / (2 * d)
        rows.append(dict(s_re=s, s_im=0.0, series=series, numeric=numeric,
                         relative_error=abs(series - numeric) / max(abs(series), 1e-300)))
    return dict(d=G.d, rep=cfg.rep, norm_bound=cfg.norm_bound, height=cfg.height, n_max=cfg.n_max), dict(
        classes=len(prim), expanded=len(full), rows=rows)


def cmd_zeta_divisor(cfg, x):
    case = int(x.get("case") or 1); k = int(x.get("k") or 0); l = int(x["l"]) if x.get("l") is not None else k
    scat = ScatteringInput(trS0=float(x["trS0"]) if x.get("trS0") is not None else float(k), notes="command line")
    table = residue_table(case, k, l, scat, cfg.n_min)
    return dict(case=case, k_inf=k, l_inf=l, trS0=scat.trS0, n_min=cfg.n_min), table.as_record()


def cmd_zeta_cusp(cfg, x):
    rows = []
    for s in _floats(x.get("s") or "1.5,2,3"):
        for t in _floats(x.get("t") or f"{math.pi / 3},{math.pi / 2},{2 * math.pi / 3},{math.pi}"):
            series = cusp_integral_series(s, t); quadrature = cusp_integral_quadrature(s, t)
            rows.append(dict(s_re=s, s_im=0.0, t=t, value=series, quadrature=quadrature,
                             difference=abs(series - quadrature)))
    return dict(), dict(rows=rows, max_difference=max(r["difference"] for r in rows))


# trace / shc

def cmd_trace_geometric(cfg, x):
    G = _group(cfg); spec, chi = _rep(G, cfg)
    data = decompose_restriction(spec, G)
    s = float(x.get("s") or 1.5); B = float(x.get("B") or 3.0)
    pair = resolvent_pair(s, B)
    prim = reduced_system(loxodromic_classes(G, cfg.norm_bound, cfg.height))
    ce = cuspidal_elliptic_classes(G, cfg.height)
    bundle = ClassBundle(lox=tuple(expand_powers(prim, cfg.n_max)), nce=tuple(nce_classes(G, cfg.height)), ce=tuple(ce),
                         ce_traces=None if chi is None else tuple(_exact_traces(G, chi, ce)))
    scat = ScatteringInput(float(x["trS0"]), "command line") if x.get("trS0") is not None else None
    eta = eta_closed_form(G.cusp_lattice)
    side = geometric_side(pair, G, data, bundle, scat, eta, lox_normalization=cfg.lox_normalization)
    return dict(d=G.d, rep=cfg.rep, s=s, B=B, height=cfg.height, norm_bound=cfg.norm_bound, n_max=cfg.n_max), side.as_record()


def cmd_shc_check(cfg, x):
    s0 = float(x.get("s0") or 2.5); rows = []
    k = lambda t: phi_s(t, s0) / (4 * math.pi)
    for s in _floats(x.get("s") or "0.5,1,1.5"):
        h = shc_forward(k, s); exact = 1 / (s0 * s0 - s * s)
        rows.append(dict(kind="shc", s_re=s, value=h, expected=exact, difference=abs(h - exact)))
    pair = resolvent_pair(float(x.get("rs") or 1.5), float(x.get("B") or 3.0))
    for xv in np.linspace(0.0, 3.0, 7):
        g = g_from_h(pair.h, xv); exact = pair.g(xv)
        rows.append(dict(kind="g_from_h", x=float(xv), value=g, expected=exact, difference=abs(g - exact)))
    return dict(s0=s0), dict(rows=rows, max_difference=max(r["difference"] for r in rows))


COMMANDS = {
    ("geom", "classify"): (cmd_geom_classify, [("--matrix", str)]),
    ("lattice", "lsum"): (cmd_lattice_lsum, [("--tau", str), ("--u", float), ("--v", float), ("--xmax", float)]),
    ("lattice", "eta"): (cmd_lattice_eta, [("--tau", str)]),
    ("lattice", "kronecker-check"): (cmd_lattice_kronecker, [("--tau", str), ("--u", float), ("--v", float), ("--xmax", float)]),
    ("group", "enumerate"): (cmd_group_enumerate, []),
    ("group", "classes"): (cmd_group_classes, [("--kind", str)]),
    ("group", "verify-identity"): (cmd_group_verify, []),
    ("eis", "eval"): (cmd_eis_eval, [("--s", str), ("--z", str), ("--r", float)]),
    ("eis", "eigencheck"): (cmd_eis_eigencheck, [("--s", str), ("--z", str), ("--r", float)]),
    ("zeta", "partial"): (cmd_zeta_partial, [("--s", str)]),
    ("zeta", "logderiv"): (cmd_zeta_logderiv, [("--s", str), ("--delta", float)]),
    ("zeta", "divisor"): (cmd_zeta_divisor, [("--case", int), ("--k", int), ("--l", int), ("--trS0", float)]),
    ("zeta", "cusp-integral"): (cmd_zeta_cusp, [("--s", str), ("--t", str)]),
    ("trace", "geometric-side"): (cmd_trace_geometric, [("--s", float), ("--B", float), ("--trS0", float)]),
    ("shc", "check"): (cmd_shc_check, [("--s0", float), ("--s", str), ("--rs", float), ("--B", float)]),
}


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", default=None, help="INI file with [group] [bounds] [tolerances] [output] [logging]")
    p.add_argument("--out", dest="output", default=None, help="report path (default: standard output)")
    p.add_argument("--format", default=None, choices=("json", "csv"))
    p.add_argument("--log-level", dest="log_level", default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--rep", default=None, help="trivial, nontrivial or a JSON representation file")
    p.add_argument("--height", "--H", dest="height", type=int, default=None)
    p.add_argument("--norm-bound", dest="norm_bound", type=float, default=None)
    p.add_argument("--coset-height", dest="coset_height", type=int, default=None)
    p.add_argument("--n-max", dest="n_max", type=int, default=None)
    p.add_argument("--n-min", dest="n_min", type=int, default=None)
    p.add_argument("--kl-tol", dest="kl_tol", type=float, default=None)
    p.add_argument("--eigen-step", dest="eigen_step", type=float, default=None)
    p.add_argument("--lox-normalization", dest="lox_normalization", type=float, default=None)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kleinian", description=__doc__.splitlines()[0])
    top = parser.add_subparsers(dest="area", required=True)
    common = _common(); areas = {}
    for (area, leaf), (_, flags) in COMMANDS.items():
        if area not in areas:
            areas[area] = top.add_parser(area).add_subparsers(dest="leaf", required=True)
        sub = areas[area].add_parser(leaf, parents=[common])
        for flag, kind in flags:
            sub.add_argument(flag, dest=flag.lstrip("-").replace("-", "_"), type=kind, default=None)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser_args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        flags = vars(parser_args).copy()
        area, leaf = flags.pop("area"), flags.pop("leaf")
        cfg = merge_flags(load_config(flags.pop("config")), flags)
        cfg.command = f"{area} {leaf}"
        cfg.validate()
        logging.basicConfig(level=cfg.log_level.upper(), stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
        handler, _ = COMMANDS[(area, leaf)]
        inputs, results = handler(cfg, cfg.extra)
        body = build_body(cfg.command, inputs, results, cfg.provenance())
        write_report(body, time.perf_counter() - start, cfg.format, cfg.output)
    except KleinianError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


def main() -> None:
    raise SystemExit(run())

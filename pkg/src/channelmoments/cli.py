"""Command-line surface: transfer dumps, scans, spectra, simulations, checks.

Every output embeds the resolved configuration and package version as
comment-prefixed header lines (CSV) or top-level fields (JSON), so a run is
reproducible from its own output.  Exact rationals serialize as "p/q".
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from . import channels as ch
from . import localized as loc
from . import moments as mo
from . import symmgroup as sg
from . import twirlsim as tw
from . import weingarten as wg
from .specs import (
    CHAAR,
    DEPOLARIZE,
    HAAR,
    LOCALIZED,
    PERMUTATION,
    CircuitSpec,
    EnsembleSpec,
)


def _fmt(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _emit(args, config: dict, columns: list, rows: list):
    lines = []
    if args.format == "json":
        payload = {
            "version": __version__,
            "config": config,
            "columns": columns,
            "rows": [[_fmt(v) for v in row] for row in rows],
        }
        text = json.dumps(payload, sort_keys=True, indent=1) + "\n"
    else:
        lines.append(f"# channelmoments {__version__}")
        lines.append("# config " + json.dumps(config, sort_keys=True))
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _matrix_rows(matrix: np.ndarray, t: int) -> list:
    group = sg.symmetric_group(t)
    rows = []
    for i in range(matrix.shape[0]):
        for j in range(matrix.shape[1]):
            rows.append([i, j, group[i].cycle_label(), group[j].cycle_label(), matrix[i, j]])
    return rows


def cmd_weingarten(args) -> int:
    config = {"command": "weingarten", "t": args.t, "d": args.d, "exact": args.exact}
    try:
        g = wg.gram_matrix(args.t, args.d, exact=args.exact)
        w = wg.weingarten_matrix(args.t, args.d, exact=args.exact)
    except wg.SingularGramError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rows = [["gram"] + r for r in _matrix_rows(g, args.t)]
    rows += [["weingarten"] + r for r in _matrix_rows(w, args.t)]
    _emit(args, config, ["matrix", "row", "col", "row_perm", "col_perm", "value"], rows)
    return 0


def _build_spec(args) -> EnsembleSpec:
    return EnsembleSpec(args.ensemble, d=args.d, t=args.t, dE=args.dE, k=args.k)


def cmd_transfer(args) -> int:
    spec = _build_spec(args)
    config = {
        "command": "transfer",
        "ensemble": spec.kind,
        "t": spec.t,
        "d": spec.d,
        "dE": spec.dE,
        "k": spec.k,
        "basis": args.basis,
        "exact": args.exact,
    }
    try:
        tm = mo.transfer(spec, basis=args.basis, exact=args.exact)
        if spec.k > 1:
            x = mo.gram(spec.t, spec.d, basis=args.basis, exact=args.exact)
            tm = mo.concatenate(tm, x, spec.k)
    except wg.SingularGramError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(
        args,
        config,
        ["row", "col", "row_perm", "col_perm", "value"],
        _matrix_rows(tm.matrix, spec.t),
    )
    return 0


def cmd_hierarchy(args) -> int:
    try:
        t_list = [int(x) for x in args.t_list.split(",")]
        k_list = [int(x) for x in args.k_list.split(",")]
        d_list = [int(x) for x in args.d_list.split(",")]
        de_rules = args.dE_rules.split(",")
        if min(t_list) < 1 or min(k_list) < 1 or min(d_list) < 2:
            raise ValueError("need t >= 1, k >= 1, d >= 2")
        for rule in de_rules:
            from .localized import _resolve_dE

            _resolve_dE(rule, 2)
    except ValueError as exc:
        print(f"error: invalid grid: {exc}", file=sys.stderr)
        return 2
    config = {
        "command": "hierarchy",
        "t_list": t_list,
        "k_list": k_list,
        "d_list": d_list,
        "dE_rules": de_rules,
        "exact": args.exact,
        "threads": args.threads,
    }
    result = mo.hierarchy_scan(
        t_list, k_list, d_list, de_rules, exact=args.exact, threads=args.threads
    )
    rows = [
        [r.t, r.k, r.d, r.dE, r.norm2, r.trace, r.eps_dep, ";".join(r.flags)]
        for r in result.rows
    ]
    _emit(args, config, ["t", "k", "d", "dE", "norm2", "trace", "eps_dep", "flags"], rows)
    return 0


def cmd_spectrum(args) -> int:
    spec = _build_spec(args)
    config = {
        "command": "spectrum",
        "ensemble": spec.kind,
        "t": spec.t,
        "d": spec.d,
        "dE": spec.dE,
        "k": spec.k,
    }
    report = mo.spectrum(spec)
    rows = [
        ["eigenvalue", i, ev.real, ev.imag, abs(ev)]
        for i, ev in enumerate(report.eigenvalues)
    ]
    for key, val in sorted(report.residuals.items()):
        rows.append(["residual", key, val, 0.0, val])
    _emit(args, config, ["kind", "index", "re", "im", "abs"], rows)
    return 0


def cmd_simulate(args) -> int:
    ansatze = args.ansatz.split(",")
    noises = args.noise.split(",") if args.noise else [""]
    gammas = [float(g) for g in args.gamma.split(",")]
    config = {
        "command": "simulate",
        "ansatz": ansatze,
        "noise": noises,
        "gamma": gammas,
        "n": args.n,
        "layers": args.layers,
        "max_qubits": args.max_qubits,
    }
    rows = []
    refs = tw.reference_purities(args.n, dE=4**args.n)
    for ansatz in ansatze:
        for name, value in refs.items():
            rows.append([ansatz, f"ref_{name}", 0.0, args.n, -1, value])
        for noise in noises:
            for gamma in gammas:
                spec = CircuitSpec(
                    n=args.n,
                    ansatz=ansatz,
                    layers=args.layers,
                    noise=noise or None,
                    gamma=gamma if noise else 0.0,
                )
                try:
                    traj = tw.evolve(spec, max_qubits=args.max_qubits)
                except tw.ResourceCapError as exc:
                    print(f"error: {exc}", file=sys.stderr)
                    return 2
                for li, val in enumerate(traj, start=1):
                    rows.append([ansatz, noise or "none", gamma, args.n, li, val])
                if not noise:
                    break  # gamma grid is meaningless without noise
    _emit(args, config, ["ansatz", "noise", "gamma", "n", "L_index", "purity"], rows)
    return 0


def cmd_mc(args) -> int:
    spec = _build_spec(args)
    config = {
        "command": "mc",
        "ensemble": spec.kind,
        "t": spec.t,
        "d": spec.d,
        "dE": spec.dE,
        "samples": args.samples,
        "seed": args.seed,
    }
    est = mo.frame_potential_mc(spec, args.samples, seed=args.seed)
    rows = [["frame_potential", est.value, est.stderr, est.samples, args.seed]]
    tm = mo.transfer(spec, exact=False)
    rows.append(
        ["exact_norm2", float(mo.norm_squared(tm, mo.gram_for(tm))), 0.0, 0, args.seed]
    )
    _emit(args, config, ["quantity", "value", "stderr", "samples", "seed"], rows)
    return 0


# -- verify suites ------------------------------------------------------------


def _suite_mobius(seed: int, samples: int) -> list:
    checks = []
    for t in range(1, 6):
        ok = True
        for sigma in sg.symmetric_group(t):
            subs = sg.enumerate_subpermutations(sigma)
            if len(subs) != sg.subpermutation_count(sigma):
                ok = False
            total = sum(sg.mobius(sg.compose(sg.inverse(pi), sigma)) for pi in subs)
            if total != (1 if sigma.size == 0 else 0):
                ok = False
        checks.append((f"mobius_lattice_t{t}", ok, ""))
    return checks


def _suite_weingarten(seed: int, samples: int) -> list:
    checks = []
    from .exactalg import product_is_identity

    for t in range(1, 5):
        for d in (t, t + 1, 8):
            g = wg.gram_matrix(t, d)
            w = wg.weingarten_matrix(t, d)
            checks.append((f"gram_inverse_t{t}_d{d}", product_is_identity(g, w), ""))
    for t in range(1, 6):
        for d in (2, 3, 16):
            ok = wg.jucys_murphy_sum(t, d) == wg.character_sum(t, d)
            checks.append((f"character_sum_t{t}_d{d}", ok, ""))
    return checks


def _suite_localized(seed: int, samples: int) -> list:
    from .exactalg import identity_exact, mat_eq

    checks = []
    for t in range(1, 6):
        phi = loc.phi_matrix(t)
        zeta = loc.phi_inverse(t)
        checks.append(
            (f"phi_inverse_t{t}", mat_eq(phi.dot(zeta), identity_exact(len(phi))), "")
        )
    for t in range(2, 5):
        same, contains = loc.support_pattern(t)
        tm = mo.transfer(EnsembleSpec(HAAR, d=t, t=t), basis=LOCALIZED)
        zero_ok = all(
            tm.matrix[i, j] == 0
            for i in range(len(same))
            for j in range(len(same))
            if not same[i, j]
        )
        checks.append((f"haar_block_diagonal_t{t}", zero_ok, ""))
    return checks


def _suite_spectrum(seed: int, samples: int) -> list:
    checks = []
    for t in (2, 3):
        for d, dE in ((2, 2), (3, 4)):
            rep = mo.spectrum(EnsembleSpec(CHAAR, d=d, t=t, dE=dE))
            ok = rep.residuals["leading_right"] < 1e-10 and rep.residuals["leading_left"] < 1e-10
            checks.append((f"chaar_leading_pair_t{t}_d{d}_dE{dE}", ok, ""))
    return checks


def _suite_invariance(seed: int, samples: int) -> list:
    checks = []
    for t in (2, 3):
        d = max(2, t)
        results = mo.invariance_checks(
            EnsembleSpec(HAAR, d=d, t=t), EnsembleSpec(CHAAR, d=d, t=t, dE=2)
        )
        for res in results:
            checks.append((f"t{t}_{res.name}", res.passed, res.detail))
    return checks


def _suite_oracle(seed: int, samples: int) -> list:
    from .exactalg import mat_eq

    checks = []
    for d, dE in ((2, 2), (3, 4)):
        x = mo.gram(2, d, basis=LOCALIZED)
        base = mo.transfer(EnsembleSpec(CHAAR, d=d, t=2, dE=dE), basis=LOCALIZED)
        for k in (1, 2, 4):
            got = mo.concatenate(base, x, k)
            ref = mo.exact_t2_chaar(k, d, dE)
            checks.append(
                (f"t2_concatenation_k{k}_d{d}_dE{dE}", mat_eq(got.matrix, ref.matrix), "")
            )
    return checks


def _suite_mc(seed: int, samples: int) -> list:
    checks = []
    est = mo.frame_potential_mc(EnsembleSpec(HAAR, d=2, t=2), samples, seed=seed)
    ok = abs(est.value - 2.0) <= 3 * est.stderr
    checks.append(("haar_frame_potential", ok, f"{est.value:.4f} +- {est.stderr:.4f}"))
    spec = EnsembleSpec(CHAAR, d=2, t=2, dE=2)
    tm = mo.transfer(spec, exact=True)
    x = mo.gram(2, 2, exact=True)
    exact = float(mo.norm_squared(tm, x))
    est = mo.frame_potential_mc(spec, samples, seed=seed + 1)
    ok = abs(est.value - exact) <= 3 * est.stderr
    checks.append(("chaar_frame_potential", ok, f"{est.value:.4f} vs {exact:.4f}"))
    return checks


SUITES = {
    "mobius": _suite_mobius,
    "weingarten": _suite_weingarten,
    "localized": _suite_localized,
    "spectrum": _suite_spectrum,
    "invariance": _suite_invariance,
    "oracle": _suite_oracle,
    "mc": _suite_mc,
}


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    config = {
        "command": "verify",
        "suite": args.suite,
        "seed": args.seed,
        "samples": args.samples,
    }
    rows = []
    failed = 0
    for name in names:
        for check, ok, detail in SUITES[name](args.seed, args.samples):
            rows.append([name, check, "PASS" if ok else "FAIL", detail])
            failed += 0 if ok else 1
    _emit(args, config, ["suite", "check", "status", "detail"], rows)
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="channel-moments",
        description="Moment operators of quantum-channel ensembles",
    )
    parser.add_argument("--seed", type=int, default=0, help="base RNG seed")
    parser.add_argument("--threads", type=int, default=1, help="worker bound for scans")
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="exact", action="store_true", default=True)
    mode.add_argument("--float", dest="exact", action="store_false")
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("weingarten", help="Gram and Weingarten matrices")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_weingarten)

    def add_spec_args(p):
        p.add_argument("--ensemble", choices=(HAAR, CHAAR, DEPOLARIZE), required=True)
        p.add_argument("--t", type=int, required=True)
        p.add_argument("--d", type=int, required=True)
        p.add_argument("--dE", type=int, default=1)
        p.add_argument("--k", type=int, default=1)

    p = sub.add_parser("transfer", help="transfer matrix of an ensemble")
    add_spec_args(p)
    p.add_argument("--basis", choices=(PERMUTATION, LOCALIZED), default=PERMUTATION)
    p.set_defaults(func=cmd_transfer)

    p = sub.add_parser("hierarchy", help="norm/trace scan over a grid")
    p.add_argument("--t-list", default="2,3,4")
    p.add_argument("--k-list", default="1,3")
    p.add_argument("--d-list", default="2,3,4,5,6,7,8")
    p.add_argument("--dE-rules", default="1,2,d,d2")
    p.set_defaults(func=cmd_hierarchy, exact=False)

    p = sub.add_parser("spectrum", help="eigenvalues of the modified transfer")
    add_spec_args(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("simulate", help="two-copy purity trajectories")
    p.add_argument("--ansatz", default="hea")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--layers", type=int, default=30)
    p.add_argument("--noise", default="")
    p.add_argument("--gamma", default="0.0")
    p.add_argument("--max-qubits", type=int, default=tw.DEFAULT_QUBIT_CAP)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("mc", help="Monte-Carlo frame potential")
    add_spec_args(p)
    p.add_argument("--samples", type=int, default=10000)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--suite", choices=tuple(SUITES) + ("all",), default="all")
    p.add_argument("--samples", type=int, default=2000)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())

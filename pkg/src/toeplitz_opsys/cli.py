"""Command-line interface. Each invocation prints one JSON report to stdout.

Exit codes: 0 success (or predicate true), 1 predicate false,
2 input error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import math
import sys
from typing import Any, Dict, List, Optional

import numpy as np

from . import gauge, norms, pert, toeplitz
from .io import dumps, family_from_json, load_json, matrix_from_json, matrix_to_json
from .linalg import NumericalError, Tol, gamma, hermitian_defect, hermitian_eigvals, is_psd
from .worked_examples import run_all

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3

# |z| may drift this far from 1 before the CLI warns about normalizing it.
_UNIMODULAR_WARN = 1e-6


class InputError(ValueError):
    pass


def _complex_arg(text: str) -> complex:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")
    if len(parts) == 1:
        parts.append(0.0)
    if len(parts) != 2 or not all(math.isfinite(p) for p in parts):
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")
    return complex(parts[0], parts[1])


def _unimodular(z: complex, name: str) -> complex:
    if abs(z) == 0:
        raise InputError(f"{name} must be nonzero")
    if abs(abs(z) - 1.0) > _UNIMODULAR_WARN:
        print(f"warning: |{name}| = {abs(z):.6g}; normalizing to modulus 1", file=sys.stderr)
    return z / abs(z)


def _cx(z: complex) -> List[float]:
    return [float(z.real), float(z.imag)]


def _check(name: str, passed: bool, residual: float) -> Dict[str, Any]:
    return {"name": name, "pass": bool(passed), "residual": float(residual)}


def _report(command: str, inputs: Dict[str, Any], results: Dict[str, Any],
            checks: Optional[list] = None, seed: Optional[int] = None) -> Dict[str, Any]:
    out = {"command": command, "inputs": inputs, "results": results, "checks": checks or []}
    if seed is not None:
        out["seed"] = seed
    return out


def _tol(args) -> Tol:
    return Tol(abs=args.tol_abs, rel=args.tol_rel)


def _load_element(args) -> pert.PertElement:
    if (args.family is None) == (args.omega is None):
        raise InputError("give exactly one of --family or --omega")
    if args.family is not None:
        family = family_from_json(load_json(args.family))
        element = pert.omega_from_family(family)
    else:
        element = pert.PertElement.from_omega(matrix_from_json(load_json(args.omega)))
    if element.n != args.n:
        raise InputError(f"input has n={element.n}, but --n {args.n} was given")
    return element


# toeplitz ------------------------------------------------------------------

def cmd_toeplitz_basis(args):
    m = toeplitz.tau(args.n, args.k)
    return _report("toeplitz basis", {"n": args.n, "k": args.k}, {"matrix": matrix_to_json(m)}), EXIT_OK


def cmd_toeplitz_delta(args):
    d = toeplitz.delta(args.n)
    return _report("toeplitz delta", {"n": args.n}, {"matrix": matrix_to_json(d)}), EXIT_OK


def cmd_toeplitz_truncate(args):
    inputs: Dict[str, Any] = {"n": args.n}
    if (args.coeffs is None) == (args.samples is None):
        raise InputError("give exactly one of --coeffs or --samples")
    if args.coeffs is not None:
        coeffs = matrix_from_json(load_json(args.coeffs)).ravel()
        inputs["coeffs"] = args.coeffs
    else:
        if args.K is None:
            raise InputError("--samples needs --K")
        samples = matrix_from_json(load_json(args.samples)).ravel()
        coeffs = toeplitz.fourier_from_samples(samples, args.K)
        inputs.update(samples=args.samples, K=args.K)
    m = toeplitz.truncate(coeffs, args.n)
    results = {"coeffs": matrix_to_json(coeffs.reshape(-1, 1)), "matrix": matrix_to_json(m)}
    return _report("toeplitz truncate", inputs, results), EXIT_OK


# gauge ---------------------------------------------------------------------

def cmd_gauge_generate(args):
    alpha = _unimodular(args.alpha, "alpha")
    beta = _unimodular(args.beta, "beta")
    kind = gauge.Kind.ANTIDIAGONAL if args.flip else gauge.Kind.DIAGONAL
    g = gauge.GaugeElement(args.n, kind, alpha, beta)
    results = {"kind": g.kind.value, "alpha": _cx(g.alpha), "beta": _cx(g.beta),
               "omega": _cx(g.omega), "matrix": matrix_to_json(g.matrix())}
    inputs = {"n": args.n, "alpha": _cx(args.alpha), "beta": _cx(args.beta), "flip": args.flip}
    return _report("gauge generate", inputs, results), EXIT_OK


def cmd_gauge_check(args):
    tol = _tol(args)
    u = matrix_from_json(load_json(args.unitary))
    sys_ = toeplitz.ToeplitzSystem(args.n)
    if u.shape != (args.n, args.n):
        raise InputError(f"unitary must be {args.n}x{args.n}, got {u.shape}")
    defect = gauge.unitarity_defect(u)
    residual = gauge.gauge_residual(u, sys_)
    ok = gauge.is_gauge(u, sys_, tol)
    results: Dict[str, Any] = {"is_gauge": ok}
    checks = [_check("unitary", defect <= tol.threshold(math.sqrt(args.n)), defect),
              _check("preserves_toeplitz", residual <= tol.threshold(math.sqrt(args.n)), residual)]
    if ok:
        g = gauge.classify(u, tol)
        mismatch = float(np.linalg.norm(g.matrix() - u))
        results.update(kind=g.kind.value, alpha=_cx(g.alpha), beta=_cx(g.beta), omega=_cx(g.omega))
        checks.append(_check("classify_roundtrip", mismatch <= tol.threshold(math.sqrt(args.n)), mismatch))
    return _report("gauge check", {"n": args.n, "unitary": args.unitary}, results, checks), (
        EXIT_OK if ok else EXIT_FALSE)


def cmd_gauge_verify(args):
    rep = gauge.group_checks(args.n, args.trials, args.seed, _tol(args))
    checks = [_check(c.name, c.passed, c.residual) for c in rep.checks]
    results = {"passed": rep.passed}
    report = _report("gauge verify", {"n": args.n, "trials": args.trials}, results, checks, seed=args.seed)
    return report, EXIT_OK if rep.passed else EXIT_FALSE


# pert ----------------------------------------------------------------------

def _inputs(args) -> Dict[str, Any]:
    return {"n": args.n, "family": args.family, "omega": args.omega}


def cmd_pert_check(args):
    tol = _tol(args)
    p = _load_element(args)
    cond = pert.check_conditions(p, tol)
    checks = [_check("unital", cond.unital, cond.unital_residual),
              _check("invariant", cond.invariant, cond.invariant_residual),
              _check("symmetric", cond.symmetric, cond.symmetric_residual)]
    results: Dict[str, Any] = {"is_pert": bool(cond)}
    ok = bool(cond)
    if args.plus:
        g = gamma(p.omega)
        psd = is_psd(g, tol)
        if cond.symmetric:
            residual = max(0.0, -float(hermitian_eigvals(g, tol)[0]))
        else:
            residual = hermitian_defect(g)
        checks.append(_check("gamma_psd", psd, residual))
        results["is_pert_plus"] = ok and psd
        ok = ok and psd
    inputs = dict(_inputs(args), plus=args.plus)
    return _report("pert check", inputs, results, checks), EXIT_OK if ok else EXIT_FALSE


def cmd_pert_apply(args):
    family = family_from_json(load_json(args.family))
    p = pert.omega_from_family(family)
    if p.n != args.n:
        raise InputError(f"family has n={p.n}, but --n {args.n} was given")
    x = matrix_from_json(load_json(args.input))
    y = pert.apply_map(p, x)
    via_omega = pert.apply_map_omega(p, x)
    gap = float(np.linalg.norm(y - via_omega))
    tol = _tol(args)
    checks = [_check("family_vs_omega", gap <= tol.threshold(float(np.linalg.norm(y))), gap)]
    inputs = {"n": args.n, "family": args.family, "input": args.input}
    return _report("pert apply", inputs, {"output": matrix_to_json(y)}, checks), EXIT_OK


def cmd_pert_w(args):
    tol = _tol(args)
    p = _load_element(args)
    w_map = pert.w_from_map(p, tol)
    w_solve = pert.w_from_omega_solve(p, tol)
    gap = float(np.max(np.abs(w_map.w - w_solve.w)))
    checks = [_check("dual_path_agreement", gap <= tol.threshold(float(np.max(np.abs(w_map.w)))), gap),
              _check("unital_column", w_map.is_unital(tol), w_map.unital_residual()),
              _check("hermitian_symmetry", w_map.is_hermitian_symmetric(tol), w_map.hermitian_residual())]
    results = {"w_from_map": matrix_to_json(w_map.w), "w_from_omega_solve": matrix_to_json(w_solve.w),
               "agreement_residual": gap}
    code = EXIT_OK if checks[0]["pass"] else EXIT_NUMERICAL
    return _report("pert w", _inputs(args), results, checks), code


def cmd_pert_toep2(args):
    tol = _tol(args)
    p = pert.toep2_parametrized(args.a, args.b, args.c, args.z1, args.z2, args.z4)
    cond = pert.check_conditions(p, tol)
    g = gamma(p.omega)
    psd = is_psd(g, tol)
    checks = [_check("unital", cond.unital, cond.unital_residual),
              _check("invariant", cond.invariant, cond.invariant_residual),
              _check("symmetric", cond.symmetric, cond.symmetric_residual)]
    results = {"omega": matrix_to_json(p.omega), "gamma": matrix_to_json(g),
               "is_pert": bool(cond), "is_pert_plus": bool(cond) and psd}
    if cond.invariant:
        results["w"] = matrix_to_json(pert.w_from_map(p, tol).w)
    inputs = {"a": _cx(args.a), "b": _cx(args.b), "c": _cx(args.c), "z1": _cx(args.z1),
              "z2": args.z2, "z4": args.z4}
    return _report("pert toep2", inputs, results, checks), EXIT_OK


# norms ---------------------------------------------------------------------

def cmd_norms_report(args):
    tol = _tol(args)
    p = _load_element(args)
    w = None
    try:
        w = pert.w_from_map(p, tol)
    except pert.NotInvariantError:
        pass
    rep = norms.norm_report(p, tol, level=args.level, trials=args.trials, seed=args.seed, w=w)
    results: Dict[str, Any] = {
        "min_norm": rep.min_norm,
        "haagerup_upper": rep.haagerup_upper,
        "cb_exact": rep.cb_exact,
        "cb_lower": rep.cb_lower,
        "flags": rep.flags,
    }
    checks = []
    if rep.ucp_condition is not None:
        uc = rep.ucp_condition
        results["ucp_condition"] = {"lhs": uc.lhs, "rhs": uc.rhs, "holds": uc.holds}
        checks.append(_check("ucp_condition", uc.holds, max(0.0, uc.lhs - uc.rhs)))
    if rep.cb_exact is not None:
        gap = max(0.0, rep.cb_lower - rep.cb_exact)
        checks.append(_check("cb_lower_le_cb_exact", gap <= tol.threshold(rep.cb_exact), gap))
    inputs = dict(_inputs(args), level=args.level or p.n, trials=args.trials)
    return _report("norms report", inputs, results, checks, seed=args.seed), EXIT_OK


# worked examples -----------------------------------------------------------

def cmd_worked_examples(args):
    results = run_all()
    checks = [_check(r.name, r.passed, r.residual) for r in results]
    passed = sum(r.passed for r in results)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}  residual={r.residual:.3e}", file=sys.stderr)
    summary = {"total": len(results), "passed": passed, "failed": len(results) - passed}
    return _report("paper examples", {}, summary, checks), EXIT_OK if passed == len(results) else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-abs", type=float, default=1e-9)
    common.add_argument("--tol-rel", type=float, default=1e-9)
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="toeplitz-opsys", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)

    def leaf(group, name, func, help_text):
        p = group.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    def element_source(p):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--family")
        p.add_argument("--omega")

    tp = groups.add_parser("toeplitz", help="Toeplitz basis, delta matrix, truncation")
    tsub = tp.add_subparsers(dest="command", required=True)
    p = leaf(tsub, "basis", cmd_toeplitz_basis, "emit tau_k")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p = leaf(tsub, "delta", cmd_toeplitz_delta, "emit the delta matrix")
    p.add_argument("--n", type=int, required=True)
    p = leaf(tsub, "truncate", cmd_toeplitz_truncate, "Toeplitz truncation of a circle function")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--coeffs")
    p.add_argument("--samples")
    p.add_argument("--K", type=int)

    gp = groups.add_parser("gauge", help="gauge group generators and checks")
    gsub = gp.add_subparsers(dest="command", required=True)
    p = leaf(gsub, "generate", cmd_gauge_generate, "materialize U(alpha, beta) or V U(alpha, beta)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=_complex_arg, required=True)
    p.add_argument("--beta", type=_complex_arg, required=True)
    p.add_argument("--flip", action="store_true")
    p = leaf(gsub, "check", cmd_gauge_check, "test and classify a unitary")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--unitary", required=True)
    p = leaf(gsub, "verify", cmd_gauge_verify, "randomized group-structure checks")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)

    pp = groups.add_parser("pert", help="perturbation semigroup elements")
    psub = pp.add_subparsers(dest="command", required=True)
    p = leaf(psub, "check", cmd_pert_check, "membership conditions")
    p.add_argument("--plus", action="store_true")
    element_source(p)
    p = leaf(psub, "apply", cmd_pert_apply, "apply the induced map")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--input", required=True)
    p = leaf(psub, "w", cmd_pert_w, "map matrix W by both routes")
    element_source(p)
    p = leaf(psub, "toep2", cmd_pert_toep2, "general element of Pert(Toep_2)")
    for name in ("a", "b", "c", "z1"):
        p.add_argument(f"--{name}", type=_complex_arg, default=0j)
    p.add_argument("--z2", type=float, default=0.0)
    p.add_argument("--z4", type=float, default=0.0)

    np_ = groups.add_parser("norms", help="norm diagnostics")
    nsub = np_.add_subparsers(dest="command", required=True)
    p = leaf(nsub, "report", cmd_norms_report, "norm report for one element")
    element_source(p)
    p.add_argument("--level", type=int)
    p.add_argument("--trials", type=int, default=32)

    xp = groups.add_parser("paper", help="worked examples")
    xsub = xp.add_subparsers(dest="command", required=True)
    leaf(xsub, "examples", cmd_worked_examples, "run every worked example")
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        Tol(abs=args.tol_abs, rel=args.tol_rel)
        report, code = args.func(args)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(dumps(report))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

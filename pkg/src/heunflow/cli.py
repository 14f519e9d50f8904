"""Command-line front end.

    heunflow COMMAND --equation EQ [parameters] [--output json|csv] [--tol T]

Commands: charval, eval, spectrum, residual, limits, verify.  JSON output
has the keys input, result, diagnostics and version; numbers are written
as 17-significant-digit strings and complex numbers as {"re", "im"}
pairs.  CSV output writes complex columns as ``name_re,name_im``.

Exit codes: 0 success, 2 invalid input, 3 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys

import numpy as np

from . import __version__
from .exceptions import HeunflowError
from .params import (
    DcheParams,
    GsweParams,
    HeunParams,
    InceDcheParams,
    InceGsweParams,
    MathieuParams,
    MorseParams,
    WheParams,
)

SCHEMA_VERSION = "v1"
EXIT_OK, EXIT_INVALID, EXIT_SOLVER = 0, 2, 3
SOLVER_TOL = 1e-10
RESIDUAL_TOL = 1e-8

EQUATIONS = {
    "gswe": (GsweParams, ("B1", "B2", "z0", "omega", "eta"), ("B3",)),
    "dche": (DcheParams, ("B1", "B2", "omega", "eta"), ("B3",)),
    "ince-gswe": (InceGsweParams, ("B1", "B2", "z0", "q"), ("B3",)),
    "ince-dche": (InceDcheParams, ("B1", "B2", "q"), ("B3",)),
    "mathieu": (MathieuParams, ("k",), ("a", "sigma")),
    "whe": (WheParams, ("p", "xi"), ("theta", "kappa")),
    "morse": (MorseParams, ("B", "C", "s"), ("E",)),
    "heun": (HeunParams, ("a", "q", "alpha", "beta", "gamma", "delta"), ()),
}
PARAM_FLAGS = sorted({k for _, req, opt in EQUATIONS.values() for k in req + opt})


class InvalidInput(ValueError):
    pass


# ------------------------------------------------------------ serialization


def _num(x):
    return "%.17g" % x


def encode(v):
    """JSON-ready form: numbers as strings, complex as {"re", "im"}."""
    if isinstance(v, dict):
        return {str(k): encode(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [encode(x) for x in v]
    if isinstance(v, np.ndarray):
        return [encode(x) for x in v.tolist()]
    if isinstance(v, (bool, np.bool_)) or v is None or isinstance(v, str):
        return bool(v) if isinstance(v, np.bool_) else v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return _num(float(v))
    if isinstance(v, (complex, np.complexfloating)):
        v = complex(v)
        return {"re": _num(v.real), "im": _num(v.imag)}
    return str(v)


def _real_if_close(x, tol=1e-13):
    x = complex(x)
    return x.real if abs(x.imag) <= tol * max(1.0, abs(x.real)) else x


def write_csv(table: dict) -> str:
    """``table`` maps column name -> sequence; complex columns get _re/_im pairs."""
    names, cols = [], []
    for name, col in table.items():
        col = list(col)
        if any(isinstance(c, complex) for c in col):
            names += [f"{name}_re", f"{name}_im"]
            cols += [[_num(complex(c).real) for c in col], [_num(complex(c).imag) for c in col]]
        else:
            names.append(name)
            cols.append([_num(float(c)) for c in col])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for row in zip(*cols):
        w.writerow(row)
    return buf.getvalue()


def _error_code(exc) -> str:
    return re.sub(r"(?<!^)(?=[A-Z])", "_", type(exc).__name__).lower()


# ------------------------------------------------------------ parsing


def _complex_arg(s: str) -> complex:
    try:
        return complex(s.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="heunflow", description="Heun-type series solutions and spectra.")
    ap.add_argument("--version", action="version", version=f"heunflow {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for cmd in ("charval", "eval", "spectrum", "residual", "limits", "verify"):
        sp = sub.add_parser(cmd)
        sp.add_argument("--equation", required=True, choices=sorted(EQUATIONS))
        sp.add_argument("--output", choices=("json", "csv"), default="json")
        sp.add_argument("--tol", type=float, default=None)
        for name in PARAM_FLAGS:
            sp.add_argument(f"--{name}", type=_complex_arg, default=None)
        sp.add_argument("--set", dest="set_index", type=int, default=1)
        sp.add_argument("--class", dest="cls", type=int, default=1)
        sp.add_argument("--route", choices=("ince", "gswe", "dche"), default="ince")
        sp.add_argument("--member", choices=("U0", "Uinf", "U"), default="U0")
        sp.add_argument("--index", type=int, default=0)
        sp.add_argument("--count", type=int, default=4)
        sp.add_argument("--guess", type=_complex_arg, default=None)
        sp.add_argument("--sign", type=int, choices=(1, -1), default=1)
        sp.add_argument("--z", type=_complex_arg, nargs="+", default=None, help="points in z (or x for heun)")
        sp.add_argument("--u", type=float, nargs="+", default=None, help="points in u (periodic, morse)")
        sp.add_argument("--mode", choices=("finite", "matched", "fixed-nu", "fd"), default="finite")
        sp.add_argument("--bracket", type=float, nargs=2, default=None)
        sp.add_argument("--l", dest="frac_l", type=int, default=1)
        sp.add_argument("--m", dest="frac_m", type=int, default=3)
        sp.add_argument("--a-values", type=float, nargs="+", default=[1e2, 1e3, 1e4])
        sp.add_argument("--n-points", type=int, default=4000, help="finite-difference grid size")
    return ap


def make_params(args):
    cls, required, optional = EQUATIONS[args.equation]
    missing = [k for k in required if getattr(args, k) is None]
    if missing:
        raise InvalidInput(f"--equation {args.equation} needs " + ", ".join(f"--{k}" for k in missing))
    kw = {k: getattr(args, k) for k in required + optional if getattr(args, k) is not None}
    if args.equation in ("gswe", "dche", "ince-gswe", "ince-dche") and "B3" not in kw:
        kw["B3"] = 0j
    return cls(**kw)


def _echo_input(args) -> dict:
    out = {"command": args.command, "equation": args.equation}
    for k in PARAM_FLAGS:
        v = getattr(args, k)
        if v is not None:
            out[k] = _real_if_close(v, 0.0)
    for k in ("set_index", "cls", "route", "member", "index", "mode", "tol"):
        out[k] = getattr(args, k)
    for k in ("z", "u", "bracket"):
        if getattr(args, k) is not None:
            out[k] = [_real_if_close(v, 0.0) for v in getattr(args, k)]
    return out


# ------------------------------------------------------------ helpers


def _series_module(eq):
    from . import dche, gswe, ince

    return {
        "gswe": (gswe.solve_b3, gswe.c_system, gswe.solution_set),
        "dche": (dche.solve_b3, dche.system, dche.solution_set),
        "ince-gswe": (ince.solve_b3, ince.c_system, ince.solution_set_gswe),
        "ince-dche": (ince.solve_b3_dche, ince.dche_system, ince.solution_set_dche),
    }[eq]


def _solved_b3(args, p, tol):
    solve, system, _ = _series_module(args.equation)
    if args.B3 is not None:
        return p
    return p.replace(B3=solve(p, args.set_index, guess=args.guess, tol=tol))


def _solved_mathieu(args, m, tol):
    from . import periodic

    if args.a is not None:
        return m
    a = periodic.characteristic_a(m, args.cls, args.route, args.index, guess=args.guess, tol=tol,
                                  sign=args.sign)
    return m.replace(a=a)


def _morse_energy(args, p):
    from . import morse

    if args.E is not None:
        return p.E
    return morse.finite_spectrum(p).energies[args.index]


def _morse_residual(p, psi, u, E):
    from .morse import potential
    from .series import contour_derivatives, normalized_residual

    v, _, d2 = contour_derivatives(lambda w: complex(psi(w)), complex(u), 0.05)
    return normalized_residual([d2, E * v, -potential(p, u) * v])


# ------------------------------------------------------------ commands


def cmd_charval(args, tol):
    from .recurrence import characteristic_residual

    eq = args.equation
    p = make_params(args)
    if eq in ("gswe", "dche", "ince-gswe", "ince-dche"):
        solve, system, _ = _series_module(eq)
        b3 = solve(p, args.set_index, guess=args.guess, tol=tol)
        res = abs(characteristic_residual(system(p, args.set_index), b3))
        return {"B3": _real_if_close(b3), "residual": res}, {"set": args.set_index}, None
    if eq == "mathieu":
        from . import periodic

        m = p
        a = periodic.characteristic_a(m, args.cls, args.route, args.index, guess=args.guess, tol=tol,
                                      sign=args.sign)
        sys_ = periodic.mathieu_system(m, args.cls, args.route, args.sign)
        res = abs(characteristic_residual(sys_, a))
        diag = {"class": args.cls, "route": args.route}
        if complex(m.k).imag == 0 and complex(m.sigma) == 1:
            diag["hill_oracle"] = float(periodic.hill_oracle(m.k.real, args.cls, args.index + 1)[args.index])
        return {"a": _real_if_close(a), "residual": res}, diag, None
    if eq == "whe":
        from . import periodic

        sol = periodic.ince_whe_solution(args.frac_l, args.frac_m, p, guess=args.guess, tol=tol)
        res = abs(characteristic_residual(periodic.ince_whe_system(p, sol.nu), sol.theta))
        return ({"theta": _real_if_close(sol.theta), "nu": _real_if_close(sol.nu), "residual": res},
                {"period": sol.period}, None)
    if eq == "morse":
        from . import morse

        E = _morse_energy(args, p)
        nu = morse.solve_nu(p, E, guess=args.guess, tol=tol)
        res = abs(characteristic_residual(morse.two_sided_system(p.replace(E=E), nu, free="nu"), nu))
        return {"nu": nu, "residual": res}, {"E": float(np.real(E))}, None
    raise InvalidInput(f"charval is not defined for {eq}")


def _points(args, name="z"):
    pts = getattr(args, name)
    if not pts:
        raise InvalidInput(f"--{name} is required")
    return pts


def _evaluators(args, tol):
    """(points, function, residual function, diagnostics) for eval/residual."""
    eq = args.equation
    p = make_params(args)
    if eq in ("gswe", "dche", "ince-gswe", "ince-dche"):
        _, _, solset = _series_module(eq)
        p = _solved_b3(args, p, tol)
        f = solset(p, args.set_index)[args.member]
        return _points(args), f, f.residual, {"B3": p.B3, "set": args.set_index, "member": args.member}
    if eq == "mathieu":
        from . import periodic

        m = _solved_mathieu(args, p, tol)
        sol = periodic.periodic_solution(m, args.route, args.cls, args.member, sign=args.sign)
        return (_points(args, "u"), sol, lambda u: periodic.mathieu_residual(m, sol, u),
                {"a": m.a, "period": sol.meta.period, "parity": sol.meta.parity})
    if eq == "whe":
        from . import periodic

        sol = periodic.ince_whe_solution(args.frac_l, args.frac_m, p, guess=args.guess, tol=tol)
        w = sol.params
        return (_points(args, "u"), sol, lambda u: periodic.whe_residual(w, sol, u),
                {"theta": sol.theta, "period": sol.period})
    if eq == "morse":
        from . import morse

        E = _morse_energy(args, p)
        psi, _ = morse.finite_eigenfunction(p, E)
        return (_points(args, "u"), lambda u: complex(psi(u)), lambda u: _morse_residual(p, psi, u, E),
                {"E": float(np.real(E))})
    if eq == "heun":
        from . import heun_bridge

        s = heun_bridge.heun_series(p)
        return _points(args), s, s.residual, {"epsilon": p.epsilon}
    raise InvalidInput(f"unknown equation {eq}")


def cmd_eval(args, tol):
    pts, f, _, diag = _evaluators(args, tol)
    vals = [complex(f(x)) for x in pts]
    name = "u" if args.equation in ("mathieu", "whe", "morse") else "z"
    table = {name: [complex(x) if isinstance(x, complex) else float(x) for x in pts], "value": vals}
    return {"points": pts, "values": vals}, diag, table


def cmd_residual(args, tol):
    rtol = tol if args.tol is not None else RESIDUAL_TOL
    pts, _, res, diag = _evaluators(args, SOLVER_TOL)
    r = [float(res(x)) for x in pts]
    worst = max(r)
    diag = dict(diag, tolerance=rtol)
    name = "u" if args.equation in ("mathieu", "whe", "morse") else "z"
    table = {name: [complex(x) if isinstance(x, complex) else float(x) for x in pts], "residual": r}
    ok = worst < rtol
    return {"points": pts, "residuals": r, "max_residual": worst, "pass": ok}, diag, table, ok


def cmd_spectrum(args, tol):
    eq = args.equation
    p = make_params(args)
    if eq == "morse":
        from . import morse

        if args.mode == "finite":
            res = morse.finite_spectrum(p)
        elif args.mode == "fd":
            res = morse.fd_oracle(p, N=args.n_points, count=args.count)
        else:
            if args.bracket is None:
                raise InvalidInput("--bracket LO HI is required for this mode")
            if args.mode == "matched":
                res = morse.matched_spectrum(p, tuple(args.bracket))
            else:
                res = morse.infinite_spectrum(p, tuple(args.bracket))
        E = [float(np.real(e)) for e in res.energies]
        diag = {"method": res.method}
        if args.mode == "matched":
            rep = morse.unmatched_levels(p, tuple(args.bracket), matched=res.energies)
            diag["unmatched_fd_levels"] = rep["unmatched"]
        return {"energies": E}, diag, {"E": E}
    if eq == "mathieu":
        from . import periodic

        vals = periodic.mathieu_characteristic_values(p, args.cls, args.route, args.count, tol=min(tol, 1e-12),
                                                      sign=args.sign)
        vals = [_real_if_close(v) for v in vals]
        return {"a": vals}, {"class": args.cls, "route": args.route}, {"a": vals}
    raise InvalidInput(f"spectrum is defined for morse and mathieu, not {eq}")


def cmd_limits(args, tol):
    rtol = tol if args.tol is not None else None
    eq = args.equation
    p = make_params(args)
    if eq == "gswe":
        from . import dche

        rep = dche.leaver_check(p, zs=args.z or (0.5, 1.0, 2.0))
        bound = rtol or 1e-3
    elif eq == "ince-gswe":
        from . import ince

        omega = complex(args.omega).real if args.omega is not None else 1e-3
        rep = ince.whittaker_ince_check(p, omega=omega)
        bound = rtol or 1e-2
    else:
        raise InvalidInput(f"limits is defined for gswe (Leaver) and ince-gswe (Whittaker-Ince), not {eq}")
    ok = rep["max_error"] < bound
    return dict(rep, tolerance=bound, **{"pass": ok}), {}, None, ok


def cmd_verify(args, tol):
    eq = args.equation
    p = make_params(args)
    rtol = tol if args.tol is not None else RESIDUAL_TOL
    if eq == "ince-gswe":
        from . import ince

        p = _solved_b3(args, p, SOLVER_TOL)
        rep = ince.k_series_direct_check(p, args.z or [2.0, 3.0, 2.5 + 1j], args.set_index)
        ok = rep["max_residual"] < rtol
        return dict(rep, **{"pass": ok}), {"B3": p.B3}, None, ok
    if eq == "mathieu":
        from . import periodic

        vals = {}
        for route, cls in ((args.route, args.cls),):
            vals[route] = periodic.characteristic_a(p, cls, route, args.index, sign=args.sign)
        oracle = float(periodic.hill_oracle(p.k.real, args.cls, args.index + 1)[args.index])
        diff = abs(vals[args.route] - oracle)
        ok = diff < 1e-6
        return {"a": vals[args.route], "hill_oracle": oracle, "difference": diff, "pass": ok}, {}, None, ok
    if eq == "heun":
        from . import heun_bridge

        s = heun_bridge.heun_series(p)
        pts = args.z or [0.2, 0.3j, -0.25 + 0.1j]
        r = [s.residual(x) for x in pts]
        ok = max(r) < rtol
        return {"residuals": r, "max_residual": max(r), "pass": ok}, {}, None, ok
    if eq == "gswe":
        from . import heun_bridge

        p = _solved_b3(args, p, SOLVER_TOL)
        rep = heun_bridge.confluence_check(p, args.a_values, args.z)
        ok = rep["decreasing"] and rep["final"] < (tol if args.tol is not None else 1e-2)
        return dict(rep, **{"pass": ok}), {"B3": p.B3, "check": "heun confluence"}, None, ok
    if eq == "morse":
        from . import morse

        fin = morse.finite_spectrum(p).energies
        fd = morse.fd_oracle(p, N=args.n_points, count=len(fin)).energies
        diff = float(np.max(np.abs(fin - fd)))
        bound = tol if args.tol is not None else 1e-4
        ok = diff < bound
        return {"finite": fin, "fd": fd, "max_difference": diff, "pass": ok}, {"N": args.n_points}, None, ok
    raise InvalidInput(f"verify is not defined for {eq}")


COMMANDS = {
    "charval": cmd_charval,
    "eval": cmd_eval,
    "spectrum": cmd_spectrum,
    "residual": cmd_residual,
    "limits": cmd_limits,
    "verify": cmd_verify,
}


def run(argv=None, stdout=None) -> int:
    """Parse ``argv``, run one job and write its output; returns the exit code."""
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    tol = args.tol if args.tol is not None else SOLVER_TOL
    code = EXIT_OK
    result, diag, table = None, {}, None
    try:
        out = COMMANDS[args.command](args, tol)
        if len(out) == 4:
            result, diag, table, ok = out
            code = EXIT_OK if ok else EXIT_SOLVER
        else:
            result, diag, table = out
    except (InvalidInput, TypeError) as exc:
        code = EXIT_INVALID
        diag = {"error": "invalid_input", "message": str(exc)}
    except HeunflowError as exc:
        code = EXIT_INVALID if isinstance(exc, ValueError) else EXIT_SOLVER
        diag = {"error": _error_code(exc), "message": str(exc)}
    except (ValueError, ZeroDivisionError, ArithmeticError) as exc:
        code = EXIT_INVALID if isinstance(exc, ValueError) else EXIT_SOLVER
        diag = {"error": _error_code(exc), "message": str(exc)}

    if args.output == "csv" and table is not None and code != EXIT_INVALID:
        stdout.write(write_csv(table))
    else:
        doc = {"input": _echo_input(args), "result": result, "diagnostics": diag, "version": SCHEMA_VERSION}
        stdout.write(json.dumps(encode(doc), indent=2) + "\n")
    if "error" in diag:
        print(f"heunflow: {diag['error']}: {diag['message']}", file=sys.stderr)
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()

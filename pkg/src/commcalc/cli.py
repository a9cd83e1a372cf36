"""``commcalc`` command-line front end.

Exit codes: 0 success, 1 I/O or configuration error, 2 violated mathematical
precondition, 3 verification failure.  Errors are written to stderr as one
JSON object.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import verify as _verify
from .calculus import apply_symbol, symbol_matrix
from .closed_form import apply_closed_form
from .derivatives import derivative, frechet_derivative
from .estimators import _symbol
from .exceptions import CommCalcError, IntegrationError, PreconditionError
from .functions import builtin, custom
from .io import ConfigError, RunConfig, dumps, matrix_document, read_matrix, write_text, write_trajectory
from .mechanics import (MaterialState, dissipation_compare, dissipation_tail_bound, integrate, logconv_gap,
                        parse_flow, sobolev_delta_form, sobolev_identity)
from .spectral import schur_decompose

SEED_ENV = "COMMCALC_SEED"
COMMANDS = ("apply", "derivative", "simulate", "verify", "gap", "sobolev", "dissipation")
INPUT_FLAGS = ("G", "X", "base", "dir", "B0", "H0", "A", "B", "grads")

EXIT_OK, EXIT_IO, EXIT_PRECONDITION, EXIT_VERIFY = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _extension(text):
    loc, eq, val = text.partition("=")
    if not eq:
        raise ConfigError(f"extension must look like loc=value, got {text!r}")
    try:
        return float(loc), float(val)
    except ValueError:
        raise ConfigError(f"extension must be numeric, got {text!r}") from None


def build_parser():
    S = argparse.SUPPRESS
    common = _Parser(add_help=False, argument_default=S)
    common.add_argument("--config", help="JSON file with RunConfig keys; flags override it")
    common.add_argument("--out", help="output path ('-' or omitted: stdout)")
    common.add_argument("--digits", type=int, help="round to this many significant digits before writing")
    common.add_argument("--tol", type=float, help="relative eigenvalue clustering tolerance")
    for name in INPUT_FLAGS:
        common.add_argument(f"--{name}", metavar="FILE")

    fn = _Parser(add_help=False, argument_default=S)
    fn.add_argument("--fn", help="catalog name, or 'custom' with --expr")
    fn.add_argument("--param", type=float, help="function parameter (power exponent, omega r)")
    fn.add_argument("--expr", help="numpy expression in x for --fn custom")
    fn.add_argument("--derivative-expr", dest="derivative_expr", help="derivative of --expr")
    fn.add_argument("--extension", action="append", type=_extension, metavar="LOC=VALUE",
                    help="value at a removable singularity of --expr (repeatable)")

    parser = _Parser(prog="commcalc", description="Functional calculus for matrix commutator operators.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("apply", parents=[common, fn], argument_default=S, help="apply f(L_G, R_G) to X")
    p.add_argument("--kind", choices=("commutator", "anticommutator", "left", "right"))
    p.add_argument("--method", choices=("spectral", "closed_form"))

    p = sub.add_parser("derivative", parents=[common, fn], argument_default=S,
                       help="Frechet derivative of f at --base in direction --dir")
    p.add_argument("--variant")

    p = sub.add_parser("simulate", parents=[common], argument_default=S, help="integrate a constitutive model")
    p.add_argument("--model")
    p.add_argument("--flow", help="e.g. shear:rate=1.0")
    p.add_argument("--tau", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--T", type=float)
    p.add_argument("--paired", action="store_true")

    p = sub.add_parser("verify", parents=[common], argument_default=S, help="run the randomized property suite")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int, help="samples per property (default: per-property setting)")
    p.add_argument("--only", action="append", metavar="NAME", help="run only this property (repeatable)")
    p.add_argument("--workers", type=int)

    p = sub.add_parser("gap", parents=[common], argument_default=S, help="log-convexity gap for --A, --X")
    p.add_argument("--r", type=float)

    p = sub.add_parser("sobolev", parents=[common], argument_default=S, help="Sobolev identity for --B, --grads")
    p.add_argument("--r", type=float)

    p = sub.add_parser("dissipation", parents=[common], argument_default=S,
                       help="dissipation integrand and its series for --B, --grads")
    p.add_argument("--N", type=int)
    return parser


def load_config(argv):
    ns = vars(build_parser().parse_args(argv))
    if ns.get("command") is None:
        raise ConfigError(f"a command is required: {', '.join(COMMANDS)}")
    base = {}
    if "config" in ns:
        base = {k: v for k, v in vars(RunConfig.from_file(ns.pop("config"))).items()}
    settings = dict(base)
    inputs = dict(base.get("inputs") or {})
    for name in INPUT_FLAGS:
        if name in ns:
            inputs[name] = ns.pop(name)
    settings.update(ns)
    settings["inputs"] = inputs
    if "seed" not in ns and os.environ.get(SEED_ENV):
        try:
            settings["seed"] = int(os.environ[SEED_ENV])
        except ValueError:
            raise ConfigError(f"{SEED_ENV} must be an integer") from None
    return RunConfig.from_mapping(settings)


def _input(cfg, name):
    path = cfg.inputs.get(name)
    if path is None:
        raise ConfigError(f"--{name} is required for {cfg.command}")
    return read_matrix(path)


def _function(cfg):
    if cfg.fn is None:
        raise ConfigError("--fn is required")
    if cfg.fn == "custom":
        if not cfg.expr:
            raise ConfigError("--fn custom needs --expr")
        ext = [tuple(e) for e in (cfg.extension or ())]
        return custom(cfg.expr, ext, cfg.derivative_expr)
    return builtin(cfg.fn, cfg.param)


def _provenance(cfg, dec, **extra):
    out = {"command": cfg.command, "function": cfg.fn if cfg.fn != "custom" else f"custom:{cfg.expr}"}
    if cfg.param is not None:
        out["param"] = cfg.param
    out.update(extra)
    out["eigenvalues"] = [float(v) for v in dec.g]
    out["clusters"] = [list(c) for c in dec.clusters]
    return out


def _emit_matrix(cfg, M, provenance):
    """Matrix file at ``--out`` with the provenance in a sidecar; both inline on stdout."""
    if cfg.out in (None, "-"):
        write_text(None, dumps(matrix_document(M, cfg.digits, provenance)))
        return
    write_text(cfg.out, dumps(matrix_document(M, cfg.digits)))
    write_text(cfg.out + ".provenance.json", dumps(provenance))


def _emit_json(cfg, doc):
    write_text(cfg.out, dumps(doc))


def cmd_apply(cfg):
    G, X = _input(cfg, "G"), _input(cfg, "X")
    h = _function(cfg)
    dec = schur_decompose(G, cfg.tol)
    if cfg.method == "closed_form":
        if cfg.kind != "commutator":
            raise PreconditionError("closed forms exist for kind 'commutator' only")
        Y = apply_closed_form(h, G, X, cfg.tol)
    elif cfg.method == "spectral":
        Y = apply_symbol(symbol_matrix(_symbol(h, cfg.kind, None), dec), dec, X)
    else:
        raise ConfigError(f"unknown method {cfg.method!r}")
    _emit_matrix(cfg, Y, _provenance(cfg, dec, kind=cfg.kind, method=cfg.method))
    return EXIT_OK


def cmd_derivative(cfg):
    A, X = _input(cfg, "base"), _input(cfg, "dir")
    dec = schur_decompose(A, cfg.tol)
    f = _function(cfg)
    if cfg.fn == "custom":
        if cfg.variant != "dk":
            raise PreconditionError("custom functions support the dk variant only")
        Y = frechet_derivative(f, dec, X, cfg.tol)
    else:
        Y = derivative(cfg.fn, dec, X, cfg.variant, cfg.param, cfg.tol)
    _emit_matrix(cfg, Y, _provenance(cfg, dec, variant=cfg.variant))
    return EXIT_OK


def cmd_simulate(cfg):
    if cfg.model is None or cfg.flow is None:
        raise ConfigError("simulate needs --model and --flow")
    protocol = parse_flow(cfg.flow)
    if "B0" in cfg.inputs and "H0" in cfg.inputs:
        raise ConfigError("give at most one of --B0 and --H0")
    if "B0" in cfg.inputs:
        state = MaterialState("B", _input(cfg, "B0"))
    elif "H0" in cfg.inputs:
        state = MaterialState("H", _input(cfg, "H0"))
    else:
        state = MaterialState("B", np.eye(protocol.dim))
    if state.value.shape[0] != protocol.dim:
        raise PreconditionError(f"initial state is {state.value.shape[0]}x{state.value.shape[0]}, "
                                f"flow has dim {protocol.dim}")
    traj = integrate(state, protocol, cfg.tau, cfg.model, cfg.dt, cfg.T, cfg.paired, cfg.tol)
    write_trajectory(cfg.out, traj, cfg.digits)
    return EXIT_OK


def cmd_verify(cfg):
    only = cfg.only
    if only:
        unknown = sorted(set(only) - set(_verify.PROPERTY_NAMES))
        if unknown:
            raise ConfigError(f"unknown properties {unknown}; known: {', '.join(_verify.PROPERTY_NAMES)}")
    results = _verify.run(cfg.seed, only, cfg.samples, cfg.workers)
    write_text(cfg.out, _verify.format_report(results, cfg.seed))
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def _read_grads(cfg, d):
    path = cfg.inputs.get("grads")
    if path is None:
        raise ConfigError("--grads is required")
    try:
        with open(path) as fh:
            obj = json.load(fh)
        grads = np.array(obj["grads"], dtype=float)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"{path}: expected {{\"grads\": [matrix, ...]}} ({exc})") from exc
    if grads.ndim != 3 or grads.shape[1:] != (d, d):
        raise ConfigError(f"{path}: grads must be a list of {d}x{d} matrices")
    return list(grads)


def cmd_gap(cfg):
    if cfg.r is None:
        raise ConfigError("gap needs --r")
    gap, series = logconv_gap(_input(cfg, "A"), _input(cfg, "X"), cfg.r, cfg.tol)
    _emit_json(cfg, {"r": cfg.r, "gap": gap, "series": series})
    return EXIT_OK


def cmd_sobolev(cfg):
    if cfg.r is None:
        raise ConfigError("sobolev needs --r")
    B = _input(cfg, "B")
    grads = _read_grads(cfg, B.shape[0])
    lhs, rhs, comm = sobolev_identity(B, grads, cfg.r, cfg.tol)
    doc = {"r": cfg.r, "lhs": lhs, "rhs": rhs, "commutator_term": comm}
    if B.shape[0] == 2:
        doc["delta_form"] = sobolev_delta_form(B, grads, cfg.r, cfg.tol)
    _emit_json(cfg, doc)
    return EXIT_OK


def cmd_dissipation(cfg):
    B = _input(cfg, "B")
    grads = _read_grads(cfg, B.shape[0])
    full, partial = dissipation_compare(B, grads, cfg.N, cfg.tol)
    _emit_json(cfg, {"N": cfg.N, "full": full, "partial_sums": [float(v) for v in partial],
                     "tail_bound": dissipation_tail_bound(B, grads, cfg.N, cfg.tol)})
    return EXIT_OK


HANDLERS = {"apply": cmd_apply, "derivative": cmd_derivative, "simulate": cmd_simulate, "verify": cmd_verify,
            "gap": cmd_gap, "sobolev": cmd_sobolev, "dissipation": cmd_dissipation}


def _fail(exc, code):
    err = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    pairs = getattr(exc, "pairs", None)
    if pairs:
        err["pairs"] = [list(map(int, p)) for p in pairs]
    if isinstance(exc, IntegrationError) and exc.time is not None:
        err["time"] = float(exc.time)
    sys.stderr.write(json.dumps(err) + "\n")
    return code


def run(cfg):
    if cfg.kind is None:
        cfg.kind = "commutator"
    if cfg.command not in HANDLERS:
        raise ConfigError(f"unknown command {cfg.command!r}")
    return HANDLERS[cfg.command](cfg)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        return run(load_config(argv))
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except ConfigError as exc:
        return _fail(exc, EXIT_IO)
    except OSError as exc:
        return _fail(exc, EXIT_IO)
    except (CommCalcError, ValueError) as exc:
        return _fail(exc, EXIT_PRECONDITION)


if __name__ == "__main__":
    sys.exit(main())

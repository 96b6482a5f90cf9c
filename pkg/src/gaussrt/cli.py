"""Command-line front end.

Subcommands: ``gen``, ``kappa``, ``witness``, ``channel`` and ``harness``.
Exit codes are 0 on success, 2 for invalid input, 3 when the SDP solver
fails and 4 when a harness suite reports a failed check.

A ``--partition`` flag overrides the partition stored in the input document.
"""
import argparse
import json
import sys

import numpy as np

from . import __version__
from .channels import make_channel
from .cones import THEORIES, cone_spec, kappa, kappa_problem, upsilon
from .config import membership_tol
from .errors import SingularPivotError, SolverError, ValidationError
from .harness import SUITES, ExperimentConfig, run_suite, to_jsonable, write_report
from .io import SIG_DIGITS, parse_partition, read_document, round_sig, write_document
from .sdp import dump_problem, hermitian_inner
from .states import GaussianState, make_state

EXIT_OK, EXIT_VALIDATION, EXIT_SOLVER, EXIT_HARNESS = 0, 2, 3, 4

STATE_KINDS = ("vacuum", "coherent", "thermal", "squeezed", "tmsv")
CHANNEL_KINDS = ("loss", "beam_splitter", "trace_out", "noise", "identity")


def _g(x):
    return f"{float(x):.{SIG_DIGITS}g}"


def _print_json(obj, out):
    out.write(json.dumps(round_sig(to_jsonable(obj)), indent=2) + "\n")


def _print_matrix(name, M, out):
    M = np.asarray(M)
    # round-off in the imaginary parts is noise, not information
    tiny = 1e-14 * max(1.0, float(np.max(np.abs(M))))
    M = np.where(np.abs(M.real) < tiny, 0.0, M.real) + 1j * np.where(np.abs(M.imag) < tiny, 0.0, M.imag)
    if not np.any(M.imag):
        M = M.real
    out.write(f"{name} =\n")
    for row in M:
        if np.iscomplexobj(M):
            cells = [f"{_g(v.real)}{'+' if v.imag >= 0 else '-'}{_g(abs(v.imag))}j" for v in row]
        else:
            cells = [_g(v) for v in row]
        out.write("  " + "  ".join(cells) + "\n")


def _floats(text):
    try:
        return [float(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise ValidationError(f"expected a list of numbers, got {text!r}") from None


def _ints(text):
    try:
        return [int(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise ValidationError(f"expected a list of mode indices, got {text!r}") from None


# -- subcommands --------------------------------------------------------------


def cmd_gen(args, out):
    u = _floats(args.u) if args.u is not None else None
    partition = None
    if args.partition is not None:
        n = args.modes
        if n is None and args.kind == "tmsv":
            n = 2
        elif n is None and u is not None:
            n = len(u) // 2
        partition = parse_partition(args.partition, n)
    state = make_state(
        args.kind,
        partition,
        modes=None if partition is not None else args.modes,
        u=u,
        nbar=args.nbar,
        r=args.r,
        phi=args.phi,
    )
    text = write_document(state, args.out)
    if args.out in (None, "-"):
        out.write(text)
    return EXIT_OK


def _load(args):
    state = read_document(args.input, partition=args.partition)
    spec = cone_spec(args.theory, state.partition)
    return state, spec


def cmd_kappa(args, out):
    state, spec = _load(args)
    if args.dump_lmi:
        dump_problem(kappa_problem(state.V, spec), args.dump_lmi)
    report = kappa(state.V, spec, method=args.method)
    if report.upsilon is None:
        report.upsilon = upsilon(state.V, spec, scale=max(1.0, report.kappa)).value
    data = {
        "theory": report.theory,
        "partition": list(state.partition.labels),
        "method": report.method,
        "kappa": report.kappa,
        "upsilon": report.upsilon,
        "member": report.member,
    }
    if args.method == "both":
        d = report.diagnostics
        data.update(kappa_analytic=d["kappa_analytic"], kappa_sdp=d["kappa_sdp"],
                    agreement=d["agreement"])
    if args.json:
        _print_json(data, out)
        return EXIT_OK
    out.write(f"theory     {report.theory}\n")
    out.write(f"method     {report.method}\n")
    out.write(f"kappa      {_g(report.kappa)}\n")
    ups = "n/a" if report.upsilon is None else _g(report.upsilon)
    out.write(f"upsilon    {ups}\n")
    out.write(f"member     {'true' if report.member else 'false'}\n")
    if args.method == "both":
        out.write(f"analytic   {_g(data['kappa_analytic'])}\n")
        out.write(f"sdp        {_g(data['kappa_sdp'])}\n")
        out.write(f"agreement  |analytic - sdp| = {_g(data['agreement'])}\n")
    return EXIT_OK


def cmd_witness(args, out):
    state, spec = _load(args)
    report = kappa(state.V, spec, method="auto", witness=True)
    d = report.diagnostics
    value = hermitian_inner(report.W, state.V)
    verdict = "violation" if value < 1.0 - membership_tol() else "no violation"
    data = {
        "theory": report.theory,
        "W": report.W,
        "Y": report.Y,
        "witness_value": value,
        "normalization": d["witness_normalization"],
        "upsilon": d["upsilon_sdp"],
        "kappa": report.kappa,
        "verdict": verdict,
    }
    if args.json:
        _print_json(data, out)
        return EXIT_OK
    out.write(f"theory     {report.theory}\n")
    _print_matrix("W", report.W, out)
    for k, Y in enumerate(report.Y):
        _print_matrix(f"Y[{k}]", Y, out)
    out.write(f"check      <W,C> + <Y,D> = {_g(d['witness_normalization'])}\n")
    out.write(f"<W,V>      {_g(value)}\n")
    out.write(f"kappa      {_g(report.kappa)}\n")
    out.write(f"verdict    {verdict}\n")
    return EXIT_OK


def _channel_from_args(args, partition):
    kind = args.kind
    modes = _ints(args.modes) if args.modes is not None else None
    if kind == "loss":
        if args.eta is None:
            raise ValidationError("loss needs --eta")
        return make_channel("loss", partition, eta=args.eta, nbar=args.nbar or 0.0, modes=modes)
    if kind == "beam_splitter":
        if args.theta is None or modes is None or len(modes) != 2:
            raise ValidationError("beam_splitter needs --theta and --modes j,k")
        return make_channel("beam_splitter", partition, theta=args.theta, modes=tuple(modes))
    if kind == "trace_out":
        if not modes:
            raise ValidationError("trace_out needs --modes")
        return make_channel("trace_out", partition, modes=modes)
    if kind == "noise":
        if args.sigma is None or args.sigma < 0:
            raise ValidationError("noise needs --sigma >= 0")
        return make_channel("displacement_noise", partition, K=args.sigma * np.eye(2 * partition.n))
    return make_channel("identity", partition)


def cmd_channel(args, out):
    state = read_document(args.input, partition=args.partition)
    ch = _channel_from_args(args, state.partition)
    V = ch(state.V)
    s = ch.X @ state.s
    result = GaussianState(V, s, ch.out_partition)
    text = write_document(result, args.out)
    if args.out in (None, "-"):
        out.write(text)
    return EXIT_OK


def cmd_harness(args, out):
    config = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    if args.theory:
        config.theory = args.theory
    if args.seed is not None:
        config.seed = args.seed
    if args.samples is not None:
        config.samples = args.samples
    report = run_suite(args.suite, config)
    if args.out:
        write_report(report, args.out)
    if args.json:
        _print_json(report, out)
    else:
        status = "PASS" if report["passed"] else "FAIL"
        out.write(f"{status} {report['suite']}: {report['summary']}\n")
        for f in report["failures"][:10]:
            out.write(f"  failure: {json.dumps(round_sig(to_jsonable(f)))}\n")
    return EXIT_OK if report["passed"] else EXIT_HARNESS


# -- parser -------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gaussrt",
        description="Gaussian resource quantifiers at the covariance-matrix level.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a standard state as a CmDocument")
    gen.add_argument("kind", choices=STATE_KINDS)
    gen.add_argument("--modes", type=int)
    gen.add_argument("--r", type=float, help="squeezing parameter")
    gen.add_argument("--phi", type=float, default=0.0, help="squeezing angle")
    gen.add_argument("--nbar", type=float, help="thermal occupation")
    gen.add_argument("--u", help="coherent first moment, e.g. '0.5,0' (xxpp)")
    gen.add_argument("--partition", help="e.g. A:B, 2:1, A=2:B=1 or A,B,A")
    gen.add_argument("--out", help="output path (default stdout)")
    gen.set_defaults(func=cmd_gen)

    for name, func, helptext in (
        ("kappa", cmd_kappa, "compute kappa, upsilon and membership"),
        ("witness", cmd_witness, "emit the dual witness and its certified value"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--theory", required=True, choices=THEORIES)
        p.add_argument("--input", required=True, help="CmDocument path")
        p.add_argument("--partition", help="overrides the document partition")
        p.add_argument("--json", action="store_true")
        if name == "kappa":
            p.add_argument("--method", default="auto",
                           choices=("auto", "analytic", "sdp", "bisect", "both"))
            p.add_argument("--dump-lmi", metavar="PATH",
                           help="also write the kappa SDP in plain-text LMI format")
        p.set_defaults(func=func)

    ch = sub.add_parser("channel", help="apply a Gaussian channel to a CmDocument")
    ch.add_argument("kind", nargs="?", choices=CHANNEL_KINDS)
    ch.add_argument("--apply", dest="apply", choices=CHANNEL_KINDS,
                    help="channel kind (alternative to the positional argument)")
    ch.add_argument("--input", required=True)
    ch.add_argument("--out", help="output path (default stdout)")
    ch.add_argument("--partition")
    ch.add_argument("--eta", type=float, help="loss transmissivity")
    ch.add_argument("--nbar", type=float, help="environment occupation for loss")
    ch.add_argument("--theta", type=float, help="beam splitter angle")
    ch.add_argument("--sigma", type=float, help="displacement noise variance")
    ch.add_argument("--modes", help="mode indices, e.g. '0,1'")
    ch.set_defaults(func=cmd_channel)

    h = sub.add_parser("harness", help="run a verification suite")
    h.add_argument("--suite", required=True, choices=sorted(SUITES))
    h.add_argument("--config", help="ExperimentConfig JSON")
    h.add_argument("--theory", choices=("all",) + THEORIES)
    h.add_argument("--seed", type=int)
    h.add_argument("--samples", type=int)
    h.add_argument("--out", help="write the JSON report here")
    h.add_argument("--json", action="store_true", help="print the full report")
    h.set_defaults(func=cmd_harness)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "channel":
        if args.kind and args.apply and args.kind != args.apply:
            parser.error("positional channel kind and --apply disagree")
        args.kind = args.kind or args.apply
        if args.kind is None:
            parser.error("give a channel kind")
    try:
        return args.func(args, out)
    except (ValidationError, SingularPivotError) as exc:
        print(f"gaussrt: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SolverError as exc:
        print(f"gaussrt: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())

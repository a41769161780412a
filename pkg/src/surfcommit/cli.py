"""Command-line entry point.

Every subcommand prints ``key=value`` lines.  Exit codes: 0 accept/pass,
1 reject/fail, 2 error (including usage errors).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from surfcommit import attacks, funcfield, picard, protocol
from surfcommit.errors import SurfCommitError
from surfcommit.surface import Surface, singular_points_search, smoothness_certify

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _emit(lines) -> None:
    for line in lines:
        print(line)


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="ascii")


def _read_surface(path: str) -> Surface:
    """A bare surface file, or the surface carried by a commitment file."""
    text = _read_text(path)
    if text.count("\n") <= 2:
        return Surface.deserialize(text)
    return protocol.Commitment.deserialize(text).surface


def _parse_poly(text: str) -> list[int]:
    """Ascending comma-separated coefficients, e.g. ``0,1`` for t."""
    try:
        return [int(c) for c in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad polynomial {text!r}") from exc


def _fmt_poly(f) -> str:
    return ",".join(map(str, f)) if f else "0"


def _curve_line(curve) -> str:
    return " | ".join(_fmt_poly(c) for c in curve.coefficient_lists())


# -- protocol ------------------------------------------------------------------------


def cmd_params_check(args) -> int:
    rep = protocol.params_validate(args.q, args.d, args.m)
    _emit(rep.lines())
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_commit(args) -> int:
    params = protocol.make_params(args.q, args.d, args.m, args.split)
    message = Path(args.msg_file).read_bytes()
    if args.rand_file:
        randomness = Path(args.rand_file).read_bytes()
    elif args.seed is not None:
        randomness = protocol.derive_randomness(params, args.seed.encode())
    else:
        raise SurfCommitError("give --rand-file or an explicit --seed")
    tr = protocol.commit_transcript(message, randomness, params, run_picard=args.picard, workers=args.workers)
    Path(args.out).write_text(tr.commitment.serialize(), encoding="ascii")
    Path(args.opening).write_text(tr.opening.serialize(), encoding="ascii")
    _emit(
        [
            f"attempts={tr.attempts}",
            f"certificate={tr.commitment.certificate}",
            f"picard={tr.commitment.picard}",
            f"commitment={args.out}",
            f"opening={args.opening}",
            "result=pass",
        ]
    )
    return EXIT_PASS


def cmd_reveal(args) -> int:
    res = protocol.reveal_opening(Path(args.opening).read_bytes(), Path(args.commitment).read_bytes())
    _emit([f"reason={res.reason}", f"result={'accept' if res.accepted else 'reject'}"])
    return EXIT_PASS if res.accepted else EXIT_FAIL


def cmd_inspect_surface(args) -> int:
    S = _read_surface(args.infile)
    cert = smoothness_certify(S, method=args.method, scan_ext=args.scan_ext, workers=args.workers)
    lines = [f"q={S.field.q}", f"d={S.d}", f"status={cert.status}", f"method={cert.method}"]
    if cert.smooth:
        lines.append(f"certificate={cert.digest()}")
        lines.append(f"groebner_size={len(cert.groebner.polys)}")
    if cert.witness is not None:
        lines.append(f"witness={cert.witness}")
    if cert.detail:
        lines.append(f"detail={cert.detail}")
    lines += [f"note={n}" for n in cert.notes]
    if args.scan_ext:
        pts = singular_points_search(S, args.scan_ext, workers=args.workers)
        lines.append(f"singular_points_scanned_up_to_ext={args.scan_ext}")
        lines.append(f"singular_points_found={len(pts)}")
        lines += [f"singular_point={pt}" for pt in pts[: args.show]]
    lines.append(f"result={'pass' if cert.smooth else 'fail'}")
    _emit(lines)
    return EXIT_PASS if cert.smooth else EXIT_FAIL


def cmd_count_points(args) -> int:
    S = _read_surface(args.infile)
    counts = [picard.count_points(S, i, args.workers) for i in range(1, args.max_ext + 1)]
    if args.out:
        Path(args.out).write_text(picard.format_counts(counts), encoding="ascii")
    _emit([f"N{i}={n}" for i, n in enumerate(counts, start=1)] + ["result=pass"])
    return EXIT_PASS


def cmd_picard_bound(args) -> int:
    counts = picard.parse_counts(_read_text(args.counts_file))
    data = picard.WeilData(args.q, args.d, counts)
    signs = (1, -1) if args.sign == "both" else (int(args.sign),)
    for s in signs:
        picard.weil_reconstruct(data, s)
    gate = picard.picard_gate(data.candidates, args.d)
    lines = [f"b2={data.b2}", f"traces={','.join(map(str, data.traces))}"]
    lines += [f"candidate={c}" for c in data.candidates]
    lines += [f"rejected={r}" for r in data.rejected]
    lines += [f"picard_upper={data.picard_upper if data.picard_upper is not None else '-'}", f"gate={gate.verdict}"]
    lines.append(f"result={'pass' if gate.verdict == 'verified_two' else 'fail'}")
    _emit(lines)
    return EXIT_PASS if gate.verdict == "verified_two" else EXIT_FAIL


# -- attacks --------------------------------------------------------------------------


def cmd_attack_bruteforce(args) -> int:
    S = _read_surface(args.surface)
    res = attacks.brute_force_curves(S, args.m, args.budget, args.workers)
    lines = [
        f"search_space={res.search_space_size}",
        f"inspected={res.inspected}",
        f"contained={res.contained}",
        f"invalid_contained={res.invalid_contained}",
        f"curves_found={len(res.curves_found)}",
        f"smooth_curves={len(res.smooth_curves)}",
    ]
    lines += [f"curve={_curve_line(c)} smooth={str(s).lower()}" for c, s in zip(res.curves_found, res.smooth_flags)]
    lines.append("result=pass")
    _emit(lines)
    return EXIT_PASS


def cmd_uniqueness_audit(args) -> int:
    params = protocol.make_params(args.q, args.d, args.m, args.split)
    rep = attacks.uniqueness_audit(
        params, args.trials, args.seed.encode(), args.budget, args.workers, args.min_successes
    )
    lines = [f"trials={len(rep.trials)}", f"excluded={len(rep.excluded)}"]
    for t in rep.trials:
        lines.append(
            f"trial={t.index} curves={t.curves_found} valid={t.valid_curves} committed_found={str(t.committed_found).lower()} "
            f"smooth={str(t.smooth).lower()} criterion={t.criterion}"
        )
    lines += [f"excluded_trial={k} reason={r}" for k, r in rep.excluded]
    dist = rep.distribution()
    lines.append("distribution=" + ",".join(f"{k}:{v}" for k, v in dist.items()))
    bad = [t for t in rep.gated() if t.curves_found != 1 or not t.committed_found]
    lines += [f"flagged={t.index}" for t in rep.flagged()]
    lines.append(f"result={'fail' if bad else 'pass'}")
    _emit(lines)
    return EXIT_FAIL if bad else EXIT_PASS


# -- function-field experiments -----------------------------------------------------


def cmd_ff_injectivity(args) -> int:
    scan = funcfield.injectivity_scan(args.p, args.m, args.deg_bound, args.workers)
    lines = [
        f"pairs_scanned={scan.pairs_scanned}",
        f"collisions={len(scan.collisions)}",
        f"constant_collisions={len(scan.constant_collisions)}",
    ]
    for (x, y), (x2, y2) in scan.collisions[: args.show]:
        lines.append(f"collision=({_fmt_poly(x)};{_fmt_poly(y)}) ({_fmt_poly(x2)};{_fmt_poly(y2)})")
    lines.append(f"result={'fail' if scan.collisions else 'pass'}")
    _emit(lines)
    return EXIT_FAIL if scan.collisions else EXIT_PASS


def cmd_ff_frobenius(args) -> int:
    r = funcfield.frobenius_second_solution(args.x, args.y, args.p, dense=not args.no_dense)
    ok = r.identity_sparse and r.identity_dense is not False
    lines = [
        f"q={r.q}",
        f"k={_fmt_poly(r.k)}",
        f"x_prime_num_degree={len(r.x_prime[0]) - 1}",
        f"denominator_degree={len(r.x_prime[1]) - 1}",
        f"identity_sparse={str(r.identity_sparse).lower()}",
        f"identity_dense={'-' if r.identity_dense is None else str(r.identity_dense).lower()}",
        f"distinct={str(r.distinct).lower()}",
        f"result={'pass' if ok else 'fail'}",
    ]
    _emit(lines)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_zagier(args) -> int:
    scan = funcfield.zagier_collision_search(args.height)
    lines = [
        f"rationals={scan.rationals}",
        f"pairs_scanned={scan.pairs_scanned}",
        f"collisions={len(scan.collisions)}",
        f"zero_preimages={len(scan.zero_preimages)}",
    ]
    lines += [f"collision=({a[0]},{a[1]}) ({b[0]},{b[1]})" for a, b in scan.collisions[: args.show]]
    lines.append(f"result={'fail' if scan.collisions else 'pass'}")
    _emit(lines)
    return EXIT_FAIL if scan.collisions else EXIT_PASS


def cmd_sunit(args) -> int:
    inst = funcfield.parse_instance(_read_text(args.file))
    r = funcfield.sunit_bound_check(inst)
    lines = [
        f"p={r.p}",
        f"t={r.t_count}",
        f"degrees={','.join(map(str, r.degrees))}",
        f"S_size={r.S_size}",
        f"bound={r.bound}",
        f"independent={str(r.independent).lower()}",
        f"morphism_degree={r.morphism_degree}",
        f"hypotheses_hold={str(r.hypotheses_hold).lower()}",
        f"bound_holds={str(r.bound_holds).lower()}",
        f"verdict={r.verdict}",
        f"result={'fail' if r.contradiction else 'pass'}",
    ]
    _emit(lines)
    return EXIT_FAIL if r.contradiction else EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="surfcommit", description=__doc__.splitlines()[0])
    parser.add_argument("--workers", type=int, default=1, help="cap on worker processes")
    sub = parser.add_subparsers(dest="command", required=True)

    def params(p, split=True):
        p.add_argument("--q", type=int, required=True)
        p.add_argument("--d", type=int, required=True)
        p.add_argument("--m", type=int, required=True)
        if split:
            p.add_argument("--split", choices=["default", "all-randomness"], default="default")

    p = sub.add_parser("params-check", help="validate (q, d, m)")
    params(p, split=False)
    p.set_defaults(func=cmd_params_check)

    p = sub.add_parser("commit", help="commit to a message file")
    params(p)
    p.add_argument("--msg-file", required=True)
    p.add_argument("--rand-file", help="framed randomness bytes")
    p.add_argument("--seed", help="derive randomness deterministically from this label")
    p.add_argument("--out", required=True)
    p.add_argument("--opening", required=True)
    p.add_argument("--picard", action="store_true", help="run the point-count Picard gate")
    p.set_defaults(func=cmd_commit)

    p = sub.add_parser("reveal", help="check an opening against a commitment")
    p.add_argument("--commitment", required=True)
    p.add_argument("--opening", required=True)
    p.set_defaults(func=cmd_reveal)

    p = sub.add_parser("inspect-surface", help="smoothness certificate and singular scan")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--method", choices=["macaulay", "buchberger"], default="macaulay")
    p.add_argument("--scan-ext", type=int, default=1)
    p.add_argument("--show", type=int, default=10)
    p.set_defaults(func=cmd_inspect_surface)

    p = sub.add_parser("count-points", help="N_i over F_{q^i}")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--max-ext", type=int, required=True)
    p.add_argument("--out", help="write a counts file")
    p.set_defaults(func=cmd_count_points)

    p = sub.add_parser("picard-bound", help="Weil polynomial reconstruction from counts")
    p.add_argument("--counts-file", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--sign", choices=["both", "1", "-1"], default="both")
    p.set_defaults(func=cmd_picard_bound)

    p = sub.add_parser("attack-bruteforce", help="exhaustive curve search on a surface")
    p.add_argument("--surface", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--budget", type=int, default=2**16)
    p.set_defaults(func=cmd_attack_bruteforce)

    p = sub.add_parser("uniqueness-audit", help="commit and brute-force repeatedly")
    params(p)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", default="audit")
    p.add_argument("--budget", type=int, default=2**16)
    p.add_argument("--min-successes", type=int)
    p.set_defaults(func=cmd_uniqueness_audit)

    p = sub.add_parser("ff-injectivity", help="collisions of x^m + t y^m over F_p[t]")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--deg-bound", type=int, required=True)
    p.add_argument("--show", type=int, default=10)
    p.set_defaults(func=cmd_ff_injectivity)

    p = sub.add_parser("ff-frobenius-demo", help="second solution of x^13 + t y^13 = k")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--x", type=_parse_poly, required=True, help="ascending coefficients, e.g. 0,1")
    p.add_argument("--y", type=_parse_poly, required=True)
    p.add_argument("--no-dense", action="store_true", help="skip the repeated-squaring cross-check")
    p.set_defaults(func=cmd_ff_frobenius)

    p = sub.add_parser("zagier-search", help="collisions of x^7 + 3y^7 over bounded rationals")
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--show", type=int, default=10)
    p.set_defaults(func=cmd_zagier)

    p = sub.add_parser("sunit-check", help="check the S-unit degree bound on an instance file")
    p.add_argument("--file", required=True)
    p.set_defaults(func=cmd_sunit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SurfCommitError, OSError, ValueError) as exc:
        print(f"error={type(exc).__name__}: {exc}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

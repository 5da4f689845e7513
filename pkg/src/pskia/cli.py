"""Command-line front end.

Subcommands: optimal | sweep | verify | kernel | quantize.  All output is
buffered and written only on success, so a failing run never leaves a
partial CSV behind.  Exit status: 0 success, 1 verification/validation
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import assignment as ia
from . import channel as ch
from . import kernel as kn
from . import quantizer as qz
from . import rearrange as ra


class UsageError(Exception):
    pass


def db_to_linear(snr_db: float) -> float:
    return 10.0 ** (snr_db / 10.0)


def parse_snr_list(text: str) -> list[float]:
    """Scalar, comma list, or a:b:c range (start:step:stop, inclusive)."""
    text = text.strip()
    if not text:
        return []
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"snr range must be start:step:stop, got {text!r}")
        start, step, stop = (float(p) for p in parts)
        if step <= 0:
            raise UsageError("snr range step must be positive")
        out = []
        v = start
        while v <= stop + 1e-12:
            out.append(round(v, 12))
            v += step
        return out
    return [float(p) for p in text.split(",")]


def parse_m_range(text: str) -> list[int]:
    if ":" in text:
        lo, hi = (int(p) for p in text.split(":"))
        return list(range(lo, hi + 1))
    return [int(p) for p in text.split(",")]


def build_channel(M: int, snr_db: float, channel_csv: str | None) -> ch.ChannelModel:
    if channel_csv is not None:
        model = ch.load_symmetric_channel(kn.load_dense_csv(channel_csv))
        if model.size != M:
            raise UsageError(
                f"--channel matrix is {model.size}x{model.size}, but --M is {M}"
            )
        return model
    return ch.awgn_transition(M, db_to_linear(snr_db))


def resolve_assignment(label: str, M: int) -> tuple[int, ...]:
    if label == "zigzag":
        return ia.zigzag(M)
    if label == "theorem3":
        return ia.theorem3_assignment(M)
    if label == "identity":
        return tuple(range(M))
    if label.startswith("file:"):
        path = label[len("file:") :]
        try:
            perm = np.loadtxt(path, dtype=int).ravel()
        except OSError as exc:
            raise ValueError(f"cannot read assignment file {path}: {exc}") from exc
        return ra.check_permutation(perm)
    raise UsageError(f"unknown assignment {label!r}")


def decoder_list(flag: str) -> list[str]:
    if flag == "both":
        return ["ml", "mmse"]
    if flag in ("ml", "mmse"):
        return [flag]
    raise UsageError(f"unknown decoder {flag!r}")


def random_codebook(rng: np.random.Generator, M: int) -> qz.Codebook:
    """Sorted absolute draws with a minimum level gap of 1e-6."""
    levels = np.sort(np.abs(rng.standard_normal(M))) + np.arange(M) * 1e-6
    return qz.validate_codebook(levels)


def cmd_optimal(args, out: list[str]) -> int:
    cb = qz.max_entropy_codebook(
        qz.SourceSpec.parse(args.source), args.M, args.level_rule
    )
    model = build_channel(args.M, args.snr_db, args.channel)
    if args.verify and args.M > ia.ASSIGNMENT_ORACLE_LIMIT:
        raise UsageError(
            f"--verify needs M <= {ia.ASSIGNMENT_ORACLE_LIMIT} "
            f"(exhaustive-search limit), got M={args.M}"
        )
    zz = ia.zigzag(args.M)
    t3 = ia.theorem3_assignment(args.M)
    status = 0
    for dec in decoder_list(args.decoder):
        rep_zz = ia.channel_msd(cb, zz, model, dec)
        rep_t3 = ia.channel_msd(cb, t3, model, dec)
        out.append(f"decoder {dec}:")
        out.append(f"  zigzag    {list(zz)}  msd {rep_zz.msd:.12g}")
        out.append(f"  center-out {list(t3)}  msd {rep_t3.msd:.12g}")
        if args.verify:
            best, minimizers = ia.brute_force_best(cb, model, dec)
            tol = 1e-10 * max(abs(best), abs(rep_zz.msd), rep_zz.fixed_term * 1e-6)
            if abs(best - rep_zz.msd) <= tol:
                out.append(
                    f"  CERTIFIED OPTIMAL (exhaustive minimum {best:.12g}, "
                    f"{len(minimizers)} minimizers)"
                )
            else:
                out.append(
                    f"  VERIFICATION FAILED: exhaustive minimum {best:.12g} "
                    f"< zigzag msd {rep_zz.msd:.12g}"
                )
                status = 1
    return status


def cmd_sweep(args, out: list[str]) -> int:
    snrs = parse_snr_list(args.snr_db)
    labels = [lbl.strip() for lbl in args.assignments.split(",") if lbl.strip()]
    decoders = decoder_list(args.decoder)
    cb = qz.max_entropy_codebook(
        qz.SourceSpec.parse(args.source), args.M, args.level_rule
    )
    perms = {lbl: resolve_assignment(lbl, args.M) for lbl in labels}
    rows = []
    for snr_db in snrs:
        model = build_channel(args.M, snr_db, args.channel)
        for lbl in sorted(perms):
            for dec in decoders:
                rep = ia.channel_msd(cb, perms[lbl], model, dec)
                rows.append((snr_db, dec, lbl, rep.msd))
    rows.sort(key=lambda row: (row[0], row[2], row[1]))
    out.append("snr_db,decoder,assignment,msd")
    for snr_db, dec, lbl, msd in rows:
        out.append(f"{snr_db:.12g},{dec},{lbl},{msd:.12g}")
    return 0


def cmd_verify(args, out: list[str]) -> int:
    rng = np.random.default_rng(args.seed)
    out.append(f"seed {args.seed}")
    if args.trials == 0:
        out.append("warning: trials=0, nothing checked (vacuous pass)")
        return 0
    sizes = parse_m_range(args.M_range)
    snrs = parse_snr_list(args.snr_db)
    if any(M > ia.ASSIGNMENT_ORACLE_LIMIT for M in sizes):
        raise UsageError(
            f"verify needs M <= {ia.ASSIGNMENT_ORACLE_LIMIT}, got range {sizes}"
        )
    passed = failed = 0
    failures: list[str] = []

    def check(ok: bool, message: str):
        nonlocal passed, failed
        if ok:
            passed += 1
        else:
            failed += 1
            failures.append(message)

    for M in sizes:
        for snr_db in snrs:
            model = ch.awgn_transition(M, db_to_linear(snr_db))
            kern = model.transition
            for trial in range(args.trials):
                cb = random_codebook(rng, M)
                q = cb.as_array()
                tag = f"M={M} snr={snr_db}dB trial={trial}"
                if M <= ra.PAIR_ORACLE_LIMIT:
                    best, _ = ra.brute_force_max(q, q, kern, tie_policy="first")
                    arr = ra.theorem2_ordering(q)
                    closed = ra.bilinear_sum(arr.values, arr.values, kern)
                    check(
                        abs(best - closed) <= 1e-12 * max(abs(best), abs(closed)),
                        f"{tag}: ordering optimum {closed} != exhaustive {best}",
                    )
                for dec in ("ml", "mmse"):
                    rep = ia.channel_msd(cb, ia.zigzag(M), model, dec)
                    best, _ = ia.brute_force_best(cb, model, dec)
                    check(
                        abs(best - rep.msd) <= 1e-10 * max(abs(best), abs(rep.msd)),
                        f"{tag} {dec}: zigzag msd {rep.msd} != exhaustive {best}",
                    )
    out.append(f"checks passed: {passed}")
    out.append(f"checks failed: {failed}")
    out.extend("  " + msg for msg in failures)
    return 1 if failed else 0


def cmd_kernel(args, out: list[str]) -> int:
    if args.kernel_cmd == "gen":
        model = ch.awgn_transition(args.M, db_to_linear(args.snr_db))
        out.append(model.to_json())
        return 0
    if args.matrix is not None:
        kern = kn.validate_kernel(kn.load_dense_csv(args.matrix))
    else:
        with open(args.json) as fh:
            kern = kn.kernel_from_json(fh.read())
        kn.validate_kernel(kern.to_dense())
    out.append(f"OK: valid kernel, M={kern.size}, half_seq={list(kern.half_seq)}")
    return 0


def cmd_quantize(args, out: list[str]) -> int:
    cb = qz.max_entropy_codebook(
        qz.SourceSpec.parse(args.source), args.M, args.level_rule
    )
    out.append(cb.to_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pskia",
        description="Optimal index assignment of quantizer levels to PSK symbols.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, snr_default=None):
        p.add_argument("--M", type=int, required=True, help="constellation size")
        p.add_argument("--source", default="uniform:0,1",
                       help="uniform:a,b | gaussian:mean,std | table:<path>")
        p.add_argument("--level-rule", default="centroid",
                       choices=["centroid", "cell_midpoint"])
        p.add_argument("--channel", default=None,
                       help="dense transition-matrix CSV (overrides AWGN)")
        p.add_argument("--out", default="-", help="output path or - for stdout")

    p = sub.add_parser("optimal", help="optimal assignment and its distortion")
    common(p)
    p.add_argument("--snr-db", type=float, default=10.0)
    p.add_argument("--decoder", default="ml", choices=["ml", "mmse", "both"])
    p.add_argument("--verify", action="store_true",
                   help="certify by exhaustive search (M <= 8)")
    p.set_defaults(func=cmd_optimal)

    p = sub.add_parser("sweep", help="CSV of msd over an SNR grid")
    common(p)
    p.add_argument("--snr-db", default="0:2:20",
                   help="scalar, comma list, or start:step:stop in dB")
    p.add_argument("--decoder", default="both", choices=["ml", "mmse", "both"])
    p.add_argument("--assignments", default="zigzag,identity",
                   help="comma list of zigzag|theorem3|identity|file:<path>")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="batch oracle-vs-closed-form checks")
    p.add_argument("--M-range", default="2:6", dest="M_range")
    p.add_argument("--snr-db", default="0,5,10")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("kernel", help="generate or validate kernels")
    ksub = p.add_subparsers(dest="kernel_cmd", required=True)
    g = ksub.add_parser("gen", help="AWGN transition kernel as JSON")
    g.add_argument("--M", type=int, required=True)
    g.add_argument("--snr-db", type=float, required=True)
    g.add_argument("--out", default="-")
    g.set_defaults(func=cmd_kernel)
    v = ksub.add_parser("validate", help="check the kernel conditions")
    v.add_argument("--matrix", default=None, help="dense CSV")
    v.add_argument("--json", default=None, help="kernel JSON descriptor")
    v.add_argument("--out", default="-")
    v.set_defaults(func=cmd_kernel)

    p = sub.add_parser("quantize", help="maximum-entropy codebook as JSON")
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--source", default="uniform:0,1")
    p.add_argument("--level-rule", default="centroid",
                   choices=["centroid", "cell_midpoint"])
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_quantize)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "kernel" and args.kernel_cmd == "validate":
        if (args.matrix is None) == (args.json is None):
            parser.error("kernel validate needs exactly one of --matrix/--json")
    out: list[str] = []
    try:
        status = args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = "\n".join(out) + ("\n" if out else "")
    if getattr(args, "out", "-") in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())

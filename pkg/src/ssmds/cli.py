"""Operator CLI: build code bundles, shard files, simulate failure, repair
with bandwidth reporting, and run the verification suite.

Exit codes: 0 success / all properties pass, 1 a verified property failed,
2 I/O or spec errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import codes, shards, verify
from .errors import SsmdsError, TooLarge
from .gf import field_new


def _build_code(config: dict, seed_override: int | None = None):
    fam = config["family"]
    n = config["n"]
    r = config["r"]
    n_prime = config.get("n_prime", n)
    f = field_new(config["q"]) if "q" in config else None
    seed = seed_override if seed_override is not None else config.get("seed", 0)
    if fam == "C1":
        return codes.build_c1(n_prime, r, n, f)
    if fam == "C2":
        return codes.build_c2(n_prime, r, n, f)
    if fam == "C3":
        return codes.build_c3(n_prime, r, n, f)
    if fam == "C4":
        m = config.get("m", n_prime // (r + 1))
        return codes.build_c4(m, r, n, f, seed=seed)
    if fam == "C5":
        return codes.build_c5(n_prime, r, n, f)
    if fam == "YB1":
        if f is None:
            f = field_new(codes._next_prime_power(
                r * n_prime, lambda q: (q - 1) % r == 0))
        return codes.build_yb1(n_prime, r, f,
                               codes.yb1_standard_lambdas(n_prime, r, f))
    if fam == "YB2":
        if f is None:
            f = field_new(codes._next_prime_power(n_prime))
        return codes.build_yb2(n_prime, r, f)
    if fam == "iYB2":
        if f is None:
            f = field_new(codes._next_prime_power(
                1, lambda q: (r - 1) % (q - 1) != 0))
        return codes.build_iyb2(n_prime, r, f)
    if fam == "LongC4p":
        m = config.get("m", n_prime // (r + 1))
        f2, ys, lam = codes.long_c4p_standard(m, r, f)
        return codes.build_long_c4p(m, r, f2, ys, lam)
    raise SsmdsError(f"unknown family {fam!r}")


def cmd_build(args) -> int:
    with open(args.config) as fh:
        config = json.load(fh)
    seed_env = os.environ.get("SSMDS_SEED")
    seed = int(seed_env) if seed_env is not None else None
    code = _build_code(config, seed_override=seed)
    reports = [verify.check_assignment(code), verify.check_repair(code)]
    shards.write_bundle(args.out, code)
    for rep in reports:
        print(f"{rep.prop}: {'pass' if rep.passed else 'FAIL'} "
              f"({rep.checked} checks)")
    print(f"built {code.spec.family} (n={code.n}, k={code.spec.k}, r={code.r}, "
          f"N={code.N}, q={code.spec.q}) -> {args.out}")
    return 0 if all(r.passed for r in reports) else 1


def cmd_encode(args) -> int:
    code = shards.load_bundle(args.bundle)
    info = shards.encode_file(code, getattr(args, "in"), args.out)
    print(f"encoded {info['input_bytes']} bytes into {info['shards']} shards "
          f"({info['stripes']} stripes) -> {args.out}")
    return 0


def cmd_decode(args) -> int:
    code = shards.load_bundle(args.bundle)
    use = None
    if args.use:
        use = [int(v) for v in args.use.split(",")]
    info = shards.decode_file(code, args.shards, args.out, use=use)
    print(f"decoded {info['output_bytes']} bytes from shards {info['used']} "
          f"-> {args.out}")
    return 0


def cmd_kill(args) -> int:
    shards.kill_shard(args.shards, args.node)
    print(f"killed shard {args.node}")
    return 0


def cmd_repair(args) -> int:
    code = shards.load_bundle(args.bundle)
    rep = shards.repair_shard(code, args.shards, args.node)
    if args.report == "json":
        print(json.dumps(rep, indent=2, sort_keys=True))
    else:
        print(f"repaired node {rep['node']}: {rep['summary']}")
    if args.figures:
        from . import report as reportmod

        paths = reportmod.write_repair_artifacts(args.figures, rep)
        print("wrote " + ", ".join(paths), file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    code = shards.load_bundle(args.bundle)
    reports = [verify.check_assignment(code), verify.check_repair(code),
               verify.audit_bandwidth(code)]
    skipped = []
    if args.level == "full":
        try:
            reports.append(verify.check_mds(code))
        except TooLarge as exc:
            skipped.append({"property": "mds", "skipped": str(exc)})
        if args.deep:
            try:
                reports.append(verify.check_mds_by_reconstruction(code))
            except TooLarge as exc:
                skipped.append({"property": "mds-reconstruction",
                                "skipped": str(exc)})
            if code.power_form:
                reports.append(verify.check_lemma1(code))
            reports.append(verify.check_optimal_update(code))
    doc = {"bundle": args.bundle, "level": args.level,
           "passed": all(r.passed for r in reports),
           "reports": [r.to_dict() for r in reports], "skipped": skipped}
    print(json.dumps(doc, indent=2, sort_keys=True))
    if args.figures:
        from . import report as reportmod

        paths = reportmod.write_verify_artifacts(args.figures, reports)
        paths += reportmod.write_bandwidth_artifacts(args.figures, code)
        print("wrote " + ", ".join(paths), file=sys.stderr)
    return 0 if doc["passed"] else 1


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ssmds",
                                description="MDS array codes with small "
                                            "sub-packetization: build, shard, "
                                            "repair, verify")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="materialize a code bundle from a JSON config")
    b.add_argument("--config", required=True)
    b.add_argument("--out", required=True)
    b.set_defaults(fn=cmd_build)

    e = sub.add_parser("encode", help="shard a file across node directories")
    e.add_argument("--bundle", required=True)
    e.add_argument("--in", required=True)
    e.add_argument("--out", required=True)
    e.set_defaults(fn=cmd_encode)

    d = sub.add_parser("decode", help="rebuild a file from any k shards")
    d.add_argument("--bundle", required=True)
    d.add_argument("--shards", required=True)
    d.add_argument("--out", required=True)
    d.add_argument("--use", help="comma-separated node indices (default: first k)")
    d.set_defaults(fn=cmd_decode)

    k = sub.add_parser("kill", help="delete one shard")
    k.add_argument("--shards", required=True)
    k.add_argument("--node", type=int, required=True)
    k.set_defaults(fn=cmd_kill)

    r = sub.add_parser("repair", help="regenerate a dead shard from survivors")
    r.add_argument("--bundle", required=True)
    r.add_argument("--shards", required=True)
    r.add_argument("--node", type=int, required=True)
    r.add_argument("--report", choices=["text", "json"], default="text")
    r.add_argument("--figures", help="directory for CSV/PNG download reports")
    r.set_defaults(fn=cmd_repair)

    v = sub.add_parser("verify", help="run the property suite on a bundle")
    v.add_argument("--bundle", required=True)
    v.add_argument("--level", choices=["quick", "full"], default="quick")
    v.add_argument("--deep", action="store_true",
                   help="with --level full: also run the reconstruction oracle "
                        "and the pairwise/update checks")
    v.add_argument("--figures", help="directory for CSV/PNG summaries")
    v.set_defaults(fn=cmd_verify)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SsmdsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

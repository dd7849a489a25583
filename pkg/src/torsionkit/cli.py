"""Command-line entry point.

Exit status: 0 verdict true or success, 1 verdict false, 2 usage or input
error, 3 a search bound was exhausted.  ``--json`` switches every command to
a single JSON document on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import cosets, higman, km_sim, modmach, smallcancel, torsion_ladder
from .presentations import FinitePresentation, PresentationError, symmetrize
from .words import WordError, parse_word

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3

DEFAULT_MAX_STEPS = 10_000
DEFAULT_MAX_COSETS = 100_000
DEFAULT_ALPHA_MAX = 100
DEFAULT_BUDGET = 1_000


class _Out:
    def __init__(self, args):
        self.json = args.json
        self.seed = args.seed

    def emit(self, payload: dict, text: str):
        if self.json:
            print(json.dumps(payload, sort_keys=True))
        else:
            print(text)


def _load_presentation(path) -> FinitePresentation:
    return FinitePresentation.load(path)


def _write_or_print(text: str, output):
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# --- presentation commands ---------------------------------------------------

def cmd_check_sc(args, out):
    P = _load_presentation(args.file)
    lam = Fraction(args.lam)
    ok, report = smallcancel.check_metric(symmetrize(P), lam)
    payload = {"type": "PieceReport", "lambda": str(lam), "holds": ok, "report": report.to_dict()}
    out.emit(payload, f"C'({lam}): {'holds' if ok else 'fails'}\n"
                      f"global_max_ratio {report.global_max_ratio}\n"
                      f"pieces {len(report.pieces)}")
    return EXIT_TRUE if ok else EXIT_FALSE


def cmd_dehn(args, out):
    P = _load_presentation(args.file)
    w = parse_word(args.word)
    residue = smallcancel.dehn_reduce(symmetrize(P), w)
    verdict = "trivial" if not residue else "nontrivial"
    out.emit({"type": "DehnResult", "word": str(w), "residue": str(residue), "verdict": verdict},
             f"residue {residue}\nverdict {verdict}")
    return EXIT_TRUE


def cmd_order(args, out):
    P = _load_presentation(args.file)
    v = smallcancel.element_order(symmetrize(P), parse_word(args.word))
    out.emit({"type": "OrderVerdict", **v.to_dict()}, f"order {v.order}")
    return EXIT_TRUE


def cmd_ptk(args, out):
    P = _load_presentation(args.file)
    Q = torsion_ladder.build_ptk(P, args.k, args.t)
    if out.json:
        out.emit({"type": "FinitePresentation", **Q.to_dict()}, "")
    else:
        _write_or_print(Q.to_text(), args.output)
    return EXIT_TRUE


def cmd_tor_quotient(args, out):
    Q = _load_presentation(args.file)
    res = torsion_ladder.tor1_quotient_result(Q, args.k, args.t, budget=args.budget,
                                              unsafe_k=args.unsafe_k)
    P = res.presentation
    if out.json:
        out.emit({"type": "FinitePresentation", **P.to_dict(), "exhausted": res.exhausted}, "")
    else:
        _write_or_print(P.to_text(), args.output)
        if res.exhausted:
            print("warning: simplifier budget exhausted", file=sys.stderr)
    return EXIT_BOUND if res.exhausted else EXIT_TRUE


def cmd_ladder(args, out):
    P = _load_presentation(args.file)
    levels = torsion_ladder.build_ladder(P, args.n, args.k, base_torlen=args.base_torlen,
                                         unsafe_k=args.unsafe_k)
    checks = torsion_ladder.verify_ladder(levels, args.k, args.budget) if args.verify else []
    ok = all(c.passed for c in checks)
    if args.output_dir:
        d = Path(args.output_dir)
        d.mkdir(parents=True, exist_ok=True)
        for lv in levels:
            (d / f"level{lv.level}.grp").write_text(lv.presentation.to_text(), encoding="utf-8")
    lines = []
    for lv in levels:
        P_ = lv.presentation
        lines.append(f"level {lv.level}: generators {len(P_.generators)}, relators "
                     f"{len(P_.relators)}, claimed torsion length {lv.claimed_torlen}")
    for c in checks:
        lines.append(f"check level {c.level}: metric {'ok' if c.metric_ok else 'FAIL'} "
                     f"(max ratio {c.max_ratio}), quotient {'ok' if c.quotient_ok else 'FAIL'}"
                     + (f" ({c.note})" if c.note else ""))
    out.emit({"type": "Ladder", "levels": [lv.to_dict() for lv in levels],
              "checks": [c.to_dict() for c in checks], "passed": ok}, "\n".join(lines))
    return EXIT_TRUE if ok else EXIT_FALSE


# --- modular machines ----------------------------------------------------------

def cmd_mm_run(args, out):
    M = modmach.ModularMachine.load(args.machine)
    tr = modmach.run(M, args.alpha, args.beta, args.max_steps)
    stuck = not tr.halted and not modmach.step(M, tr.final)
    status = "halted" if tr.halted else ("stuck" if stuck else "bound")
    lines = [f"{c.alpha} {c.beta}" for c in tr.configs] + [status]
    out.emit({"type": "RunTrace", **tr.to_dict(), "status": status}, "\n".join(lines))
    if status == "bound":
        return EXIT_BOUND
    return EXIT_TRUE if tr.halted else EXIT_FALSE


def cmd_mm_halting(args, out):
    M = modmach.ModularMachine.load(args.machine)
    H = sorted(modmach.halting_set_bounded(M, args.box, args.max_steps))
    out.emit({"type": "HaltingSet", "box": args.box, "max_steps": args.max_steps,
              "configs": [list(c) for c in H]},
             "\n".join(f"{a} {b}" for a, b in H))
    return EXIT_TRUE


def cmd_mm_encode(args, out):
    alpha = modmach.encode_word(parse_word(args.word), args.n, args.m)
    out.emit({"type": "Encoding", "alpha": alpha}, str(alpha))
    return EXIT_TRUE


def cmd_mm_decode(args, out):
    w = modmach.decode_word(args.alpha, args.n, args.m)
    if w is None:
        out.emit({"type": "Decoding", "word": None}, "not a word")
        return EXIT_FALSE
    out.emit({"type": "Decoding", "word": str(w)}, str(w))
    return EXIT_TRUE


def cmd_mm_to_group(args, out):
    M = modmach.ModularMachine.load(args.machine)
    if args.gm:
        P, note = km_sim.emit_gm_schema(M)
    else:
        P, note = km_sim.km_presentation(M), {}
    if out.json:
        out.emit({"type": "FinitePresentation", **P.to_dict(), "annotation": note}, "")
    else:
        text = P.to_text()
        if note:
            text = f"# q centralizes {' '.join(note['centralizes'])}\n" + text
        _write_or_print(text, args.output)
    return EXIT_TRUE


# --- K and K_M -------------------------------------------------------------------

def cmd_km_normalize(args, out):
    g = km_sim.k_normalize(parse_word(args.word))
    out.emit({"type": "KNormalForm", **g.to_dict()}, str(g))
    return EXIT_TRUE


def cmd_km_reduce(args, out):
    M = modmach.ModularMachine.load(args.machine)
    r = km_sim.km_britton_reduce(M, parse_word(args.word))
    verdict = "trivial" if not r else "nontrivial"
    out.emit({"type": "BrittonResult", "residue": str(r), "verdict": verdict},
             f"residue {r}\nverdict {verdict}")
    return EXIT_TRUE


def cmd_km_member(args, out):
    S = km_sim.SubgroupSpec(args.a, args.b, args.M, args.N).check()
    g = km_sim.k_normalize(parse_word(args.word))
    pre = km_sim.member_Kab(g, S)
    payload = {"type": "Membership", "member": pre is not None,
               "preimage": pre.to_dict() if pre is not None else None}
    out.emit(payload, f"member, preimage {pre}" if pre is not None else "not a member")
    return EXIT_TRUE if pre is not None else EXIT_FALSE


def cmd_km_certify(args, out):
    M = modmach.ModularMachine.load(args.machine)
    cert = km_sim.certify_halting(M, args.alpha, args.beta, args.max_steps)
    if cert is None:
        out.emit({"type": "HaltCertificate", "certificate": None},
                 f"no halting run within {args.max_steps} steps")
        return EXIT_BOUND
    out.emit({"type": "HaltCertificate", "certificate": cert.to_dict()},
             f"W = {cert.stable_word}\nverified W t W^-1 = t({args.alpha},{args.beta})")
    return EXIT_TRUE


# --- higman ----------------------------------------------------------------------

def cmd_higman_emit(args, out):
    M = modmach.ModularMachine.load(args.machine)
    inp = higman.HigmanInput(M, args.n, args.alpha_max, args.include_empty, args.max_steps)
    st = higman.emit_stage(inp, args.stage)
    manifest = st.manifest(inp)
    if args.output:
        Path(args.output).write_text(st.presentation.to_text(), encoding="utf-8")
        Path(str(args.output) + ".manifest.json").write_text(
            json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if out.json:
        out.emit({"type": "HigmanStage", "presentation": st.presentation.to_dict(),
                  "manifest": manifest}, "")
    elif not args.output:
        sys.stdout.write(st.presentation.to_text())
    else:
        print(f"stage {st.stage}: {manifest['counts']['generators']} generators, "
              f"{manifest['counts']['relators']} relators")
    return EXIT_TRUE


# --- coset enumeration ------------------------------------------------------------

def cmd_tc_enumerate(args, out):
    t = cosets.enumerate_cosets(_load_presentation(args.file), args.max_cosets)
    if t.order is None:
        out.emit({"type": "CosetTable", **t.to_dict()}, f"overflow (max_cosets {args.max_cosets})")
        return EXIT_BOUND
    out.emit({"type": "CosetTable", **t.to_dict()}, f"order {t.order}")
    return EXIT_TRUE


def cmd_tc_torlen(args, out):
    t = cosets.enumerate_cosets(_load_presentation(args.file), args.max_cosets)
    if t.order is None:
        out.emit({"type": "TorChainReport", "overflow": True}, f"overflow (max_cosets {args.max_cosets})")
        return EXIT_BOUND
    rep = cosets.tor_chain(cosets.to_table_group(t))
    out.emit({"type": "TorChainReport", **rep.to_dict()},
             f"torsion length {rep.torsion_length}\nchain orders {[len(c) for c in rep.chain]}")
    return EXIT_TRUE


# --- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured output")
    common.add_argument("--seed", type=int, help="seed for randomized commands")

    p = argparse.ArgumentParser(prog="torsionkit",
                                description="Small cancellation, torsion ladders, "
                                            "modular machines and coset enumeration.")
    # subparsers overwrite same-named attributes, so the top-level copies
    # use their own names and are merged in main()
    p.add_argument("--json", dest="json_top", action="store_true", help="structured output")
    p.add_argument("--seed", dest="seed_top", type=int, default=0)
    sub = p.add_subparsers(dest="command", required=True)

    def add(parent, name, func, help_):
        sp = parent.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add(sub, "check-sc", cmd_check_sc, "check the C'(lambda) condition")
    sp.add_argument("file")
    sp.add_argument("--lambda", dest="lam", default="1/6")

    sp = add(sub, "dehn", cmd_dehn, "Dehn reduction of a word")
    sp.add_argument("file")
    sp.add_argument("word")

    sp = add(sub, "order", cmd_order, "order of an element in a C'(1/6) group")
    sp.add_argument("file")
    sp.add_argument("word")

    sp = add(sub, "ptk", cmd_ptk, "build <X, t | (r t)^k, t^k>")
    sp.add_argument("file")
    sp.add_argument("-k", type=int, default=12)
    sp.add_argument("-t", default="t")
    sp.add_argument("-o", "--output")

    sp = add(sub, "tor-quotient", cmd_tor_quotient, "tor_1 quotient of a P_t^k presentation")
    sp.add_argument("file")
    sp.add_argument("-k", type=int, default=12)
    sp.add_argument("-t", default="t")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--unsafe-k", action="store_true")
    sp.add_argument("-o", "--output")

    sp = add(sub, "ladder", cmd_ladder, "iterate the P_t^k construction")
    sp.add_argument("file")
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("-k", type=int, default=12)
    sp.add_argument("--base-torlen", type=int, default=0)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--verify", action="store_true")
    sp.add_argument("--unsafe-k", action="store_true")
    sp.add_argument("--output-dir")

    mm = p_sub(sub, "mm", "modular machines", common)
    sp = add(mm, "run", cmd_mm_run, "run from a configuration")
    sp.add_argument("machine")
    sp.add_argument("alpha", type=int)
    sp.add_argument("beta", type=int)
    sp.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    sp = add(mm, "halting", cmd_mm_halting, "bounded halting set")
    sp.add_argument("machine")
    sp.add_argument("--box", type=int, required=True)
    sp.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    sp = add(mm, "encode", cmd_mm_encode, "m-ary code of a word over c1..cn")
    sp.add_argument("word")
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("-m", type=int, required=True)
    sp = add(mm, "decode", cmd_mm_decode, "word with a given m-ary code")
    sp.add_argument("alpha", type=int)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("-m", type=int, required=True)
    sp = add(mm, "to-group", cmd_mm_to_group, "presentation of K_M (or G_M with --gm)")
    sp.add_argument("machine")
    sp.add_argument("--gm", action="store_true")
    sp.add_argument("-o", "--output")

    km = p_sub(sub, "km", "computation in K and K_M", common)
    sp = add(km, "normalize", cmd_km_normalize, "normal form in K")
    sp.add_argument("machine")
    sp.add_argument("word")
    sp = add(km, "reduce", cmd_km_reduce, "Britton reduction in K_M")
    sp.add_argument("machine")
    sp.add_argument("word")
    sp = add(km, "member", cmd_km_member, "membership in K_{a,b}^{M,N}")
    sp.add_argument("machine")
    for name in ("a", "b", "M", "N"):
        sp.add_argument(name, type=int)
    sp.add_argument("word")
    sp = add(km, "certify", cmd_km_certify, "halting certificate")
    sp.add_argument("machine")
    sp.add_argument("alpha", type=int)
    sp.add_argument("beta", type=int)
    sp.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)

    hg = p_sub(sub, "higman", "embedding stages", common)
    sp = add(hg, "emit", cmd_higman_emit, "emit a truncated stage presentation")
    sp.add_argument("machine")
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--alpha-max", type=int, default=DEFAULT_ALPHA_MAX)
    sp.add_argument("--stage", type=int, choices=(1, 2, 3), required=True)
    sp.add_argument("--include-empty", action="store_true")
    sp.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    sp.add_argument("-o", "--output")

    tc = p_sub(sub, "tc", "coset enumeration", common)
    sp = add(tc, "enumerate", cmd_tc_enumerate, "order of a finite group")
    sp.add_argument("file")
    sp.add_argument("--max-cosets", type=int, default=DEFAULT_MAX_COSETS)
    sp = add(tc, "torlen", cmd_tc_torlen, "torsion chain of a finite group")
    sp.add_argument("file")
    sp.add_argument("--max-cosets", type=int, default=DEFAULT_MAX_COSETS)
    return p


def p_sub(sub, name, help_, common):
    sp = sub.add_parser(name, help=help_)
    return sp.add_subparsers(dest="subcommand", required=True)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.json = args.json or args.json_top
    if args.seed is None:
        args.seed = args.seed_top
    out = _Out(args)
    try:
        return args.func(args, out)
    except smallcancel.PreconditionFailed as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, PresentationError, WordError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Batch command-line interface.

Machine-readable JSON goes to stdout, a one-line human summary to stderr.
Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import cyclo, decomp, tame
from .core import (adapt, cokernel, hom, kernel, random_module,
                   solve_monodromy, validate)
from .errors import BreuilmodError, SchemaError
from .params import GlobalParams, ParameterError
from .schema import (SCHEMA_VERSION, descriptor_from_doc, descriptor_to_doc,
                     dumps_canonical, module_from_doc, module_to_doc,
                     morphism_from_doc, presentation_from_doc)
from .simples import (classifying_rational, endomorphism_field_degree,
                      enumerate_simples, lyndon_count)


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _params_from_args(args) -> GlobalParams:
    if args.p is None or args.e is None or args.r is None:
        raise ParameterError("--p, --e and --r are required for this command")
    return GlobalParams(args.p, args.e, args.r, args.f)


def _emit(doc, summary: str) -> int:
    sys.stdout.write(dumps_canonical(doc))
    print(summary, file=sys.stderr)
    return 0


# -- subcommand handlers ----------------------------------------------------


def cmd_validate(args):
    M = module_from_doc(_load_json(args.file), strict=args.strict)
    report = validate(M)
    doc = {"schema": SCHEMA_VERSION, "command": "validate",
           "passed": report.ok, "violations": report.violations}
    return _emit(doc, "valid object" if report.ok
                 else f"invalid: {len(report.violations)} violation(s)")


def cmd_adapt(args):
    pres = presentation_from_doc(_load_json(args.file), strict=args.strict)
    exps, P = adapt(pres)
    doc = {"schema": SCHEMA_VERSION, "command": "adapt",
           "fil_exponents": list(exps), "basis_change": P.array.tolist()}
    return _emit(doc, f"adapted exponents {list(exps)}")


def cmd_hom(args):
    X = module_from_doc(_load_json(args.source), strict=args.strict)
    Y = module_from_doc(_load_json(args.target), strict=args.strict)
    basis = hom(X, Y)
    doc = {"schema": SCHEMA_VERSION, "command": "hom",
           "dimension": len(basis),
           "basis": [m.matrix.array.tolist() for m in basis]}
    return _emit(doc, f"hom dimension {len(basis)} over F_{X.params.p}")


def cmd_kernel(args):
    f = morphism_from_doc(_load_json(args.file), strict=args.strict)
    K, inc = kernel(f)
    doc = {"schema": SCHEMA_VERSION, "command": "kernel",
           "module": module_to_doc(K, validated=True),
           "inclusion": inc.matrix.array.tolist()}
    return _emit(doc, f"kernel has rank {K.rank}")


def cmd_cokernel(args):
    f = morphism_from_doc(_load_json(args.file), strict=args.strict)
    C, proj = cokernel(f)
    doc = {"schema": SCHEMA_VERSION, "command": "cokernel",
           "module": module_to_doc(C, validated=True),
           "projection": proj.matrix.array.tolist()}
    return _emit(doc, f"cokernel has rank {C.rank}")


def cmd_solve_monodromy(args):
    raw = _load_json(args.file)
    raw.setdefault("Nmat", [[[[0] * max(raw["params"].get("f", 1), 1)
                              for _ in range(raw["params"]["p"] * raw["params"]["e"])]
                             for _ in range(raw["rank"])] for _ in range(raw["rank"])])
    M = module_from_doc(raw, strict=False)
    sols = solve_monodromy(M.params, M.fil_exponents, M.G)
    if sols is None:
        doc = {"schema": SCHEMA_VERSION, "command": "solve-monodromy",
               "count": 0, "dimension": None, "solutions": []}
        return _emit(doc, "no valid monodromy: the datum underlies no object")
    cap = args.max_solutions
    out = []
    for i, mod in enumerate(sols):
        if i >= cap:
            break
        out.append(mod.Nmat.array.tolist())
    doc = {"schema": SCHEMA_VERSION, "command": "solve-monodromy",
           "count": sols.count, "dimension": sols.dimension, "solutions": out}
    return _emit(doc, f"{sols.count} monodromy matrice(s), listing {len(out)}")


def cmd_enumerate_simples(args):
    params = _params_from_args(args)
    if args.h is None:
        raise ParameterError("--h is required")
    classes = enumerate_simples(params, args.h)
    doc = {"schema": SCHEMA_VERSION, "command": "enumerate-simples",
           "count": len(classes),
           "lyndon_count": lyndon_count(params.er + 1, args.h),
           "classes": [descriptor_to_doc(d) for d in classes]}
    return _emit(doc, f"{len(classes)} simple classes of period {args.h}")


def cmd_classify(args):
    params = _params_from_args(args)
    desc = descriptor_from_doc(_load_json(args.file), params, strict=args.strict)
    cr = classifying_rational(desc)
    ch = tame.tame_character(desc).canonical()
    doc = {"schema": SCHEMA_VERSION, "command": "classify",
           "digits": list(desc.digits),
           "canonical_digits": list(desc.canonical().digits),
           "classifying_rational": {"numerator": cr.numerator,
                                    "denominator": cr.denominator},
           "tame_character": {"level": ch.level, "exponent": ch.exponent},
           "endomorphism_field_degree": endomorphism_field_degree(desc)}
    return _emit(doc, f"class {list(desc.canonical().digits)}, "
                 f"character level {ch.level} exponent {ch.exponent}")


def cmd_jh(args):
    M = module_from_doc(_load_json(args.file), strict=args.strict)
    rep = decomp.jordan_holder(M)
    doc = {"schema": SCHEMA_VERSION, "command": "jh",
           "factors": [descriptor_to_doc(d) for d in rep.factors],
           "extension_field_degree": rep.extension_field_degree}
    return _emit(doc, f"{rep.length} composition factor(s)")


def cmd_socle(args):
    M = module_from_doc(_load_json(args.file), strict=args.strict)
    S = decomp.socle(M)
    doc = {"schema": SCHEMA_VERSION, "command": "socle",
           "rank": S.rank, "semisimple": S.rank == M.rank,
           "module": module_to_doc(S, validated=True)}
    return _emit(doc, f"socle has rank {S.rank} of {M.rank}")


def cmd_tame_weights(args):
    M = module_from_doc(_load_json(args.file), strict=args.strict)
    rows = tame.inertia_weights(M)
    doc = {"schema": SCHEMA_VERSION, "command": "tame-weights",
           "factors": [{"level": lv, "exponent": ex, "weights": dg}
                       for lv, ex, dg in rows]}
    return _emit(doc, f"{len(rows)} factor(s), weights "
                 + str([dg for _, _, dg in rows]))


def cmd_serre_check(args):
    M = module_from_doc(_load_json(args.file), strict=args.strict)
    rows = tame.inertia_weights(M)   # raises if the bound ever failed
    er = M.params.er
    weights = [w for _, _, dg in rows for w in dg]
    doc = {"schema": SCHEMA_VERSION, "command": "serre-check",
           "passed": True, "er": er, "weights": weights}
    return _emit(doc, f"all weights in [0, {er}]")


def cmd_solve_system(args):
    params = _params_from_args(args)
    desc = descriptor_from_doc(_load_json(args.file), params, strict=args.strict)
    sign = args.sign if args.sign is not None else (-1) ** params.r
    sols = tame.solve_system_S(desc, sign)
    doc = {"schema": SCHEMA_VERSION, "command": "solve-system",
           "sign": sign, "count": len(sols),
           "solutions": [{"eps_log": s.eps_log, "s": list(s.s)}
                         for s in sols]}
    return _emit(doc, f"{len(sols)} solutions (= p^h)")


def cmd_cyclo_check(args):
    if args.p is None:
        raise ParameterError("--p is required")
    t_ok = cyclo.verify_t_congruence(args.p)
    b_ok = cyclo.verify_b_sum(args.p)
    doc = {"schema": SCHEMA_VERSION, "command": "cyclo-check", "p": args.p,
           "t_congruence": t_ok, "b_sum": b_ok}
    return _emit(doc, f"t-congruence: {'pass' if t_ok else 'FAIL'}, "
                 f"b-sum: {'pass' if b_ok else 'FAIL'}")


def cmd_random_object(args):
    params = _params_from_args(args)
    rng = random.Random(args.seed)
    rank = args.rank if args.rank is not None else rng.randint(1, 3)
    M = random_module(params, rank, rng)
    doc = module_to_doc(M, validated=True)
    doc["provenance"] = {"command": "random-object", "seed": args.seed,
                         "rank": rank, "prng": "MT19937 (python random.Random)"}
    return _emit(doc, f"random validated object of rank {rank}")


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="breuilmod",
        description="exact computations with mod-p filtered Frobenius modules")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, file_args=()):
        sp.add_argument("--p", type=int)
        sp.add_argument("--e", type=int)
        sp.add_argument("--r", type=int)
        sp.add_argument("--f", type=int, default=1)
        sp.add_argument("--h", type=int)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--strict", action="store_true")
        for name in file_args:
            sp.add_argument(name)

    sp = sub.add_parser("validate", help="check the category axioms")
    common(sp, ("file",)); sp.set_defaults(func=cmd_validate)
    sp = sub.add_parser("adapt", help="adapted basis of a filtration presentation")
    common(sp, ("file",)); sp.set_defaults(func=cmd_adapt)
    sp = sub.add_parser("hom", help="F_p-basis of the morphism space")
    common(sp, ("source", "target")); sp.set_defaults(func=cmd_hom)
    sp = sub.add_parser("kernel", help="kernel of a morphism document")
    common(sp, ("file",)); sp.set_defaults(func=cmd_kernel)
    sp = sub.add_parser("cokernel", help="cokernel of a morphism document")
    common(sp, ("file",)); sp.set_defaults(func=cmd_cokernel)
    sp = sub.add_parser("solve-monodromy", help="all valid monodromy matrices")
    common(sp, ("file",))
    sp.add_argument("--max-solutions", type=int, default=64)
    sp.set_defaults(func=cmd_solve_monodromy)
    sp = sub.add_parser("enumerate-simples", help="simple classes of period h")
    common(sp); sp.set_defaults(func=cmd_enumerate_simples)
    sp = sub.add_parser("classify", help="invariants of a digit-cycle descriptor")
    common(sp, ("file",)); sp.set_defaults(func=cmd_classify)
    sp = sub.add_parser("jh", help="composition factors")
    common(sp, ("file",)); sp.set_defaults(func=cmd_jh)
    sp = sub.add_parser("socle", help="largest semisimple subobject from the standard classes")
    common(sp, ("file",)); sp.set_defaults(func=cmd_socle)
    sp = sub.add_parser("tame-weights", help="tame characters of the composition factors")
    common(sp, ("file",)); sp.set_defaults(func=cmd_tame_weights)
    sp = sub.add_parser("serre-check", help="verify the weight bound 0 <= m <= er")
    common(sp, ("file",)); sp.set_defaults(func=cmd_serre_check)
    sp = sub.add_parser("solve-system", help="monomial solutions of the cyclic system")
    common(sp, ("file",))
    sp.add_argument("--sign", type=int, choices=(1, -1))
    sp.set_defaults(func=cmd_solve_system)
    sp = sub.add_parser("cyclo-check", help="cyclotomic congruence checks")
    common(sp); sp.set_defaults(func=cmd_cyclo_check)
    sp = sub.add_parser("random-object", help="reproducible random valid object")
    common(sp)
    sp.add_argument("--rank", type=int)
    sp.set_defaults(func=cmd_random_object)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        sys.stdout.write(dumps_canonical(
            {"schema": SCHEMA_VERSION, "error": {"kind": "schema",
                                                 "path": exc.path,
                                                 "message": exc.message}}))
        print(f"schema error at {exc.path}: {exc.message}", file=sys.stderr)
        return 1
    except (BreuilmodError, FileNotFoundError, json.JSONDecodeError) as exc:
        sys.stdout.write(dumps_canonical(
            {"schema": SCHEMA_VERSION, "error": {"kind": "domain",
                                                 "message": str(exc)}}))
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

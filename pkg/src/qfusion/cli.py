"""Command-line interface.

Every verb builds one JSON report (schema v1) and maps its outcome to an
exit code: 0 all checks hold, 1 a check failed, 2 usage or input error,
3 scope error (non-special module, inconclusive criterion, cap exceeded).
Reports are deterministic; wall-clock timings are printed to stderr only
when --timings is given.
"""

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .aform import (cyclic_aform, full_aform, specialize_u1, star_fusion, tensor_d)
from .cartan import CartanData, CartanError, check_condition_20, fixture, condition_consequence_failures, \
    quantized_cartan_det
from .drinfeld_fusion import PAIR_LABELS, SummationError, fundamental_pair, fuse, fuse_many
from .exact_coeffs import render
from .modules_explicit import (InconclusiveError, is_simple_criterion, kr_sl2, kr_sl2_string,
                               qcharacter, singular_vectors, verify_relations)
from .qchar_engine import CapExceeded, NotSpecial, fm_expand, kr_monomial, kr_qchar
from .tsystem import asymptotic_check, dominant_identity_check, qsystem_check, verify_tsystem
from .ymonoid import SpectralParam, YPolynomial, dominant_part

SCHEMA = "qfusion-report/v1"
VERBS = ("cartan-check", "kr-qchar", "fuse-sl2", "aform", "star-fuse", "tensor-d",
         "tsys-verify", "qsys-verify", "asymptotic", "relations-check")
MODULE_FIXTURES = ("sl2-pair",)


class UsageError(ValueError):
    pass


# input parsing ----------------------------------------------------------------

def load_cartan(args):
    if args.cartan and args.cartan_fixture:
        raise UsageError("give either --cartan or --cartan-fixture, not both")
    if args.cartan:
        try:
            with open(args.cartan) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read Cartan file {args.cartan}: {exc}") from None
        if not isinstance(doc, dict) or "cartan" not in doc:
            raise UsageError('Cartan file must be a JSON object with key "cartan"')
        return CartanData(doc["cartan"], doc.get("labels"))
    try:
        return fixture(args.cartan_fixture or "sl2")
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None


def require_condition_20(cd):
    if not check_condition_20(cd):
        bad = [(i + 1, j + 1) for i in range(cd.n) for j in range(cd.n)
               if cd.C[i][j] < -1 and not (cd.r[i] == 1 and cd.C[j][i] == -1)]
        raise UsageError("Cartan matrix violates condition (C_ij < -1) => (r_i = -C_ji = 1) "
                         f"at entries {bad}; symmetrizer r = {list(cd.r)}")


def parse_param(token):
    try:
        return SpectralParam.parse(token)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def parse_levels(text):
    try:
        levels = [int(x) for x in str(text).split(",")]
    except ValueError:
        raise UsageError(f"bad level list {text!r}") from None
    if any(r < 0 for r in levels):
        raise UsageError("levels must be nonnegative")
    return levels


def parse_kr(token):
    """'r@class:shift' -> (r, SpectralParam)."""
    if "@" not in token:
        raise UsageError(f"KR token {token!r} must look like r@class:shift")
    r, a = token.split("@", 1)
    try:
        r = int(r)
    except ValueError:
        raise UsageError(f"bad level in {token!r}") from None
    if r < 0:
        raise UsageError("levels must be nonnegative")
    return r, parse_param(a)


def rank_one(cd):
    if cd.n != 1:
        raise UsageError("this verb constructs explicit modules only for rank-one Cartan data")


# rendering ---------------------------------------------------------------------

def _seq(sig):
    """Text for the scalar sequence r -> base^r u^(e r) r^d."""
    parts = []
    if not sig.base.is_one():
        if sig.base.is_monomial():
            c, qe, ue = sig.base.monomial_exponents()
            parts.append(f"q^({qe}r)" if c == 1 else f"({render(sig.base)})^r")
        else:
            parts.append(f"({render(sig.base)})^r")
    if sig.uexp:
        parts.append("u^r" if sig.uexp == 1 else f"u^({sig.uexp}r)")
    if sig.deg:
        parts.append("r" if sig.deg == 1 else f"r^{sig.deg}")
    return "*".join(parts)


def family_column(module, fam, col):
    """Image of a basis vector under a mode family, as text."""
    terms = []
    for sig in fam.signatures():
        coeff = fam.terms[sig]
        for row in range(module.dim):
            x = coeff.get(row, col)
            if x.is_zero():
                continue
            seq = _seq(sig)
            c = render(x)
            c = "" if c == "1" else (c if "+" not in c[1:] and "-" not in c[1:] else f"({c})")
            body = "*".join(p for p in (seq, c) if p)
            terms.append(f"{body} {module.labels[row]}" if body else module.labels[row])
    return " + ".join(terms) or "0"


def lweight_text(lw, i=1):
    const, roots = lw.series[i]
    out = render(const)
    out = "" if out == "1" else out + " "
    for (c, s, e), o in sorted(roots.items(), key=lambda kv: (kv[1] < 0, kv[0][2], kv[0][1])):
        rho = [f"q^{s}"] if s else []
        if e:
            rho.append("u" if e == 1 else f"u^{e}")
        fac = f"(1-{'*'.join(rho + ['z'])})"
        out += fac + (f"^{o}" if o != 1 else "")
    return out.strip() or "1"


def action_table(module, order=None):
    """Rows x^+_r, x^-_r and phi(z) for each basis column."""
    cols = order if order is not None else list(range(module.dim))
    fams = dict(module.families())
    rows = {"x+_r": [], "x-_r": [], "phi(z)": []}
    for c in cols:
        rows["x+_r"].append(family_column(module, fams[("x", 1, 1)], c))
        rows["x-_r"].append(family_column(module, fams[("x", 1, -1)], c))
        rows["phi(z)"].append(lweight_text(module.lweights[c]) if module.lweights else "?")
    return {"columns": [module.labels[c] for c in cols], "rows": rows}


def table_text(table):
    lines = ["\t" + "\t".join(table["columns"])]
    for name, cells in table["rows"].items():
        lines.append(name + "\t" + "\t".join(cells))
    return "\n".join(lines)


def vector_text(module, v):
    terms = []
    for x, lab in zip(v, module.labels):
        if not x.is_zero():
            c = render(x)
            terms.append(lab if c == "1" else f"({c}){lab}")
    return " + ".join(terms) or "0"


def module_summary(module):
    chi = qcharacter(module)
    return {"name": module.name, "dim": module.dim, "labels": list(module.labels),
            "qcharacter": chi.render(), "dominant_monomials": len(dominant_part(chi))}


# verbs ---------------------------------------------------------------------------

def cmd_cartan_check(args):
    cd = load_cartan(args)
    cond = check_condition_20(cd)
    result = {"cartan": [list(r) for r in cd.C], "labels": list(cd.labels),
              "symmetrizer": list(cd.r), "B": [list(r) for r in cd.B],
              "condition_20": cond, "condition_consequence_failures": condition_consequence_failures(cd),
              "quantized_cartan_det": render(quantized_cartan_det(cd))}
    return cond, {"cartan": result["cartan"]}, result


def cmd_kr_qchar(args):
    cd = load_cartan(args)
    require_condition_20(cd)
    a = parse_param(args.a)
    if args.cap == 100000:
        chi = kr_qchar(cd, args.i, int(args.r), a)
    else:
        chi = fm_expand(cd, kr_monomial(cd, args.i, int(args.r), a), cap=args.cap)
    dom = dominant_part(chi)
    result = {"qcharacter": chi.render(), "terms": chi.to_json(), "dimension": chi.dimension(),
              "dominant_monomials": len(dom), "special": len(dom) == 1}
    return len(dom) == 1, {"i": args.i, "r": int(args.r), "a": str(a)}, result


def cmd_fuse_sl2(args):
    cd = load_cartan(args)
    rank_one(cd)
    a, b = parse_param(args.a), parse_param(args.b)
    left, right = kr_sl2(cd, int(args.r), a), kr_sl2(cd, int(args.rp), b)
    V = fuse(left, right, args.power)
    rep = verify_relations(V)
    result = {"module": V.to_json(), "table": action_table(V), "relations": rep.to_json()}
    spec = {"r": int(args.r), "rp": int(args.rp), "a": str(a), "b": str(b), "power": args.power}
    return rep.ok, spec, result


def _pair_from_args(args, cd):
    if args.fixture:
        if args.fixture not in MODULE_FIXTURES:
            raise UsageError(f"unknown module fixture {args.fixture!r}; known: {list(MODULE_FIXTURES)}")
        if args.order not in PAIR_LABELS:
            raise UsageError("--order must be LR or RL")
        V = fundamental_pair(args.order)
        return V, [0, 2, 1, 3], {"fixture": args.fixture, "order": args.order}
    if not args.kr or len(args.kr) != 2:
        raise UsageError("aform needs --fixture or exactly two --kr tokens")
    rank_one(cd)
    (r1, a1), (r2, a2) = (parse_kr(t) for t in args.kr)
    V = fuse(kr_sl2_string(cd, r1, a1), kr_sl2_string(cd, r2, a2), 1)
    return V, None, {"kr": list(args.kr)}


def cmd_aform(args):
    cd = fixture("sl2") if args.fixture else load_cartan(args)
    V, order, spec = _pair_from_args(args, cd)
    top = [ZERO_ONE(V, 0)]
    cyc = cyclic_aform(V, top[0])
    full = full_aform(V)
    out = {"table": action_table(V, order), "cyclic_aform": cyc.report(),
           "full_aform": full.report(), "cyclic_equals_full": cyc == full}
    holds = True
    for key, L in (("cyclic", cyc), ("full", full)):
        S = specialize_u1(L)
        rel = verify_relations(S)
        holds = holds and rel.ok
        out[f"{key}_specialization"] = {
            "labels": list(S.labels),
            "singular_vectors": [vector_text(S, v) for v in singular_vectors(S)],
            "relations_hold": rel.ok,
        }
    return holds, spec, out


def ZERO_ONE(module, idx):
    from .exact_coeffs import ONE, ZERO
    v = [ZERO] * module.dim
    v[idx] = ONE
    return v


def _kr_modules(args, cd):
    if not args.kr:
        raise UsageError("give at least one --kr r@class:shift")
    rank_one(cd)
    return [kr_sl2_string(cd, r, a) for r, a in (parse_kr(t) for t in args.kr)]


def _product(chis):
    out = chis[0]
    for c in chis[1:]:
        out = out * c
    return out


def cmd_star_fuse(args):
    cd = load_cartan(args)
    mods = _kr_modules(args, cd)
    S = star_fusion(mods)
    chi = qcharacter(S)
    expected = _product([qcharacter(m) for m in mods])
    rel = verify_relations(S)
    result = module_summary(S)
    result.update({"multiplicative": chi == expected, "relations_hold": rel.ok,
                   "simple": _simple_or_none(S)})
    return chi == expected and rel.ok, {"kr": list(args.kr)}, result


def _simple_or_none(module):
    try:
        return is_simple_criterion(module)
    except InconclusiveError:
        return None


def cmd_tensor_d(args):
    cd = load_cartan(args)
    mods = _kr_modules(args, cd)
    if len(mods) != 2:
        raise UsageError("tensor-d takes exactly two --kr tokens")
    T = tensor_d(*mods)
    chi = qcharacter(T)
    expected = qcharacter(mods[0]) * qcharacter(mods[1])
    rel = verify_relations(T)
    result = module_summary(T)
    result.update({"multiplicative": chi == expected, "relations_hold": rel.ok,
                   "singular_vectors": [vector_text(T, v) for v in singular_vectors(T)]})
    return chi == expected and rel.ok, {"kr": list(args.kr)}, result


def _tsys_job(job):
    C, i, r, a = job
    cd = CartanData(C)
    rep = verify_tsystem(cd, i, r, a)
    out = rep.to_json()
    out.pop("timings")
    out["dominant_identity"] = dominant_identity_check(cd, i, r, a)
    return out, rep.seconds


def _qsys_job(job):
    C, i, r, a = job
    rep = qsystem_check(CartanData(C), i, r, a)
    out = rep.to_json()
    out.pop("timings")
    return out, rep.seconds


def _run_jobs(fn, jobs, workers):
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, jobs))
    return [fn(j) for j in jobs]


def _levels_cmd(args, fn, min_level):
    cd = load_cartan(args)
    require_condition_20(cd)
    a = parse_param(args.a)
    levels = parse_levels(args.r)
    if any(r < min_level for r in levels):
        raise UsageError(f"levels must be >= {min_level}")
    jobs = [(cd.C, args.i, r, a) for r in levels]
    outs = _run_jobs(fn, jobs, args.workers)
    reports = [o for o, _ in outs]
    holds = all(rep["holds"] and rep.get("dominant_identity", True) for rep in reports)
    residual = [t for rep in reports for t in rep["residual_terms"]]
    spec = {"cartan": [list(row) for row in cd.C], "i": args.i, "r": levels, "a": str(a)}
    return holds, spec, {"reports": reports, "residual_terms": residual}, sum(s for _, s in outs)


def cmd_tsys_verify(args):
    return _levels_cmd(args, _tsys_job, 1)


def cmd_qsys_verify(args):
    return _levels_cmd(args, _qsys_job, 1)


def cmd_asymptotic(args):
    cd = load_cartan(args)
    require_condition_20(cd)
    a = parse_param(args.a)
    res = asymptotic_check(cd, args.i, a, depth=args.depth, k_range=range(1, args.kmax + 1))
    result = {}
    for name, data in res.items():
        result[name] = {"k0": data["k0"], "stabilized": data["stabilized"],
                        "limit": [[_key_text(k), c] for k, c in sorted(data["limit"].items(), key=str)]}
    holds = all(d["stabilized"] for d in res.values())
    return holds, {"i": args.i, "a": str(a), "depth": args.depth, "kmax": args.kmax}, result


def _key_text(key):
    if isinstance(key, tuple) and key and isinstance(key[0], tuple):
        return " ".join(f"A^-1[{j},{b}]^{n}" for (j, b), n in key) or "1"
    return list(key)


def cmd_relations_check(args):
    if args.fixture:
        V, _, spec = _pair_from_args(args, fixture("sl2"))
        mods = [V]
    else:
        cd = load_cartan(args)
        mods = _kr_modules(args, cd)
        spec = {"kr": list(args.kr)}
        if len(mods) > 1:
            mods = [fuse_many(mods)]
    M = mods[0]
    if args.specialize:
        M = specialize_u1(cyclic_aform(M, ZERO_ONE(M, 0)))
    rep = verify_relations(M, args.window)
    spec["specialize"] = bool(args.specialize)
    return rep.ok, spec, {"module": M.name, "dim": M.dim, "relations": rep.to_json()}


COMMANDS = {
    "cartan-check": cmd_cartan_check, "kr-qchar": cmd_kr_qchar, "fuse-sl2": cmd_fuse_sl2,
    "aform": cmd_aform, "star-fuse": cmd_star_fuse, "tensor-d": cmd_tensor_d,
    "tsys-verify": cmd_tsys_verify, "qsys-verify": cmd_qsys_verify,
    "asymptotic": cmd_asymptotic, "relations-check": cmd_relations_check,
}


# argument parser ----------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="qfusion", description="Exact checks for fusion modules, "
                                "q-characters and T-systems.")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp):
        sp.add_argument("--cartan", help="JSON file {\"cartan\": [[...]], \"labels\": [...]}")
        sp.add_argument("--cartan-fixture", help="built-in Cartan matrix: sl2, sl3, B2, G2, A1-affine")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--workers", type=int, default=1, help="worker processes for batch checks")
        sp.add_argument("--timings", action="store_true", help="print wall-clock timings to stderr")
        return sp

    common(sub.add_parser("cartan-check", help="validate a Cartan matrix"))
    sp = common(sub.add_parser("kr-qchar", help="q-character of a KR module"))
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--a", default="c0:0")
    sp.add_argument("--cap", type=int, default=100000, help="maximum number of monomials")
    sp = common(sub.add_parser("fuse-sl2", help="fusion of two explicit sl2 KR modules"))
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--rp", type=int, required=True)
    sp.add_argument("--a", default="c:0")
    sp.add_argument("--b", default="c:2")
    sp.add_argument("--power", type=int, default=1)
    for verb, helptext in (("aform", "A-forms and their specializations"),
                           ("relations-check", "certify the defining relations on a module")):
        sp = common(sub.add_parser(verb, help=helptext))
        sp.add_argument("--fixture", help="module fixture: sl2-pair")
        sp.add_argument("--order", default="LR", help="LR or RL for the sl2-pair fixture")
        sp.add_argument("--kr", action="append", help="sl2 KR module r@class:shift (repeatable)")
        if verb == "relations-check":
            sp.add_argument("--specialize", action="store_true",
                            help="check the u=1 specialization of the cyclic A-form")
            sp.add_argument("--window", type=int, default=None)
    for verb, helptext in (("star-fuse", "fusion product *_f of sl2 KR modules"),
                           ("tensor-d", "the product (x)_d of two sl2 KR modules")):
        sp = common(sub.add_parser(verb, help=helptext))
        sp.add_argument("--kr", action="append", help="r@class:shift (repeatable)")
    for verb, helptext in (("tsys-verify", "generalized T-system and dominant identity"),
                           ("qsys-verify", "Q-system via weight characters")):
        sp = common(sub.add_parser(verb, help=helptext))
        sp.add_argument("--i", type=int, required=True)
        sp.add_argument("--r", required=True, help="level or comma list of levels")
        sp.add_argument("--a", default="c0:0")
    sp = common(sub.add_parser("asymptotic", help="stabilization of normalized characters"))
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--a", default="c0:0")
    sp.add_argument("--depth", type=int, default=2)
    sp.add_argument("--kmax", type=int, default=4)
    return p


def emit_text(verb, holds, spec, result, out):
    out.write(f"{verb}: {'holds' if holds else 'FAILS'}\n")
    out.write(f"spec: {json.dumps(spec, sort_keys=True)}\n")
    if "table" in result:
        out.write(table_text(result["table"]) + "\n")
    for key, val in result.items():
        if key in ("table", "module", "terms"):
            continue
        if isinstance(val, list) and all(isinstance(x, str) for x in val):
            out.write(f"{key}:\n")
            for x in val:
                out.write(f"  {x}\n")
        else:
            out.write(f"{key}: {json.dumps(val, sort_keys=True)}\n")


def run(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    start = time.time()
    try:
        res = COMMANDS[args.verb](args)
    except (UsageError, CartanError, SummationError) as exc:
        err.write(f"error: {exc}\n")
        return 2
    except (NotSpecial, InconclusiveError, CapExceeded) as exc:
        err.write(f"scope error: {type(exc).__name__}: {exc}\n")
        return 3
    except (ValueError, IndexError) as exc:
        err.write(f"error: {exc}\n")
        return 2
    holds, spec, result = res[:3]
    if args.format == "json":
        doc = {"schema": SCHEMA, "verb": args.verb, "spec": spec, "holds": holds, "result": result}
        out.write(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    else:
        emit_text(args.verb, holds, spec, result, out)
    if args.timings:
        err.write(f"timings: total {time.time() - start:.3f}s\n")
    return 0 if holds else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

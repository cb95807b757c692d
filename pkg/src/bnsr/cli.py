"""Command-line entry point with file-based IO and deterministic output.

Exit codes: 0 success / check verified, 1 check ran and evaluated false,
2 usage error, 3 precondition or input failure.  Structured output is
byte-stable for identical inputs.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import catalog as catalog_mod
from .groups import Character, group_from_dict, parse_group
from .homology import (
    ca_probe,
    eta,
    gap_lower_bound,
    max_filling_value,
    window_for,
)
from .resolutions import (
    chain_from_obj,
    chain_to_obj,
    check_admissible,
    parse_resolution,
    resolution_for,
    tensor_chain,
    tensor_resolution,
)
from .rings import ring_from_tag
from .spheres import (
    SigmaFormulaInput,
    complement,
    cone_set_from_obj,
    cone_set_to_obj,
    equals,
    homotopical_combine,
    join,
    product_formula_rhs,
    subset,
    union,
)
from .valuations import (
    INF,
    basic_valuation,
    check_axioms,
    product_valuation,
    split_bottom,
    split_left,
    valuation_to_obj,
    value,
)
from .witness import witness_pipeline


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _emit(args, payload, human_lines=None) -> None:
    if args.format == "structured":
        text = json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
    else:
        lines = human_lines if human_lines is not None else [json.dumps(payload, sort_keys=True, indent=2)]
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_char(group, text: str) -> Character:
    return Character(group, [Fraction(x) for x in text.split(",")])


def _group_arg(spec: str):
    if spec.endswith(".json"):
        return group_from_dict(_load_json(spec))
    return parse_group(spec)


def _fmt_val(x) -> str:
    if x == INF:
        return "inf"
    if x == float("-inf"):
        return "-inf"
    return str(x)


# ---------------------------------------------------------------------------
# sphere commands


def _cmd_sphere(args) -> int:
    if args.sphere_cmd in ("join", "union", "equals", "subset"):
        A = cone_set_from_obj(_load_json(args.left))
        B = cone_set_from_obj(_load_json(args.right))
        if args.sphere_cmd == "join":
            out = join(A, B)
            _emit(args, cone_set_to_obj(out), [f"join: {len(out.cells)} cells in dimension {out.dim}"])
            return 0
        if args.sphere_cmd == "union":
            out = union(A, B)
            _emit(args, cone_set_to_obj(out), [f"union: {len(out.cells)} cells"])
            return 0
        if args.sphere_cmd == "equals":
            ok = equals(A, B)
            _emit(args, {"equal": ok}, [f"equal: {ok}"])
            return 0 if ok else 1
        ok = subset(A, B)
        _emit(args, {"subset": ok}, [f"subset: {ok}"])
        return 0 if ok else 1
    if args.sphere_cmd == "complement":
        A = cone_set_from_obj(_load_json(args.set))
        out = complement(A)
        _emit(args, cone_set_to_obj(out), [f"complement: {len(out.cells)} cells"])
        return 0
    if args.sphere_cmd == "product-rhs":
        data = _load_json(args.inputs)
        inputs = SigmaFormulaInput(
            {int(k): cone_set_from_obj(v) for k, v in data["g_complements"].items()},
            {int(k): cone_set_from_obj(v) for k, v in data["h_complements"].items()},
        )
        out = product_formula_rhs(inputs, args.n)
        _emit(args, cone_set_to_obj(out), [f"formula rhs: {len(out.cells)} cells"])
        return 0
    if args.sphere_cmd == "homotopical":
        left = _group_arg(args.left_group)
        right = _group_arg(args.right_group)
        out = homotopical_combine(
            cone_set_from_obj(_load_json(args.sigma_gh)),
            cone_set_from_obj(_load_json(args.sigma_g)),
            cone_set_from_obj(_load_json(args.sigma_h)),
            left,
            right,
        )
        _emit(args, cone_set_to_obj(out), [f"homotopical set: {len(out.cells)} cells"])
        return 0
    raise ValueError(f"unknown sphere subcommand {args.sphere_cmd}")


# ---------------------------------------------------------------------------
# resolution commands


def _resolution_payload(F) -> dict:
    cells = []
    for d in F.degrees():
        for cell in F.cells(d):
            entry = {"label": cell.label, "degree": d, "index": cell.index}
            if d > 0:
                entry["boundary"] = chain_to_obj(F, F.boundary_table[cell])
            else:
                entry["augmentation"] = F.ring.format(F.augmentation_table[cell])
            cells.append(entry)
    return {"group": F.group.to_dict(), "ring": F.ring.tag, "kind": F.kind, "cells": cells}


def _cmd_resolution(args) -> int:
    ring = ring_from_tag(args.ring)
    F = parse_resolution(args.resolution, ring)
    if args.resolution_cmd == "build":
        _emit(args, _resolution_payload(F), [repr(F)])
        return 0
    if args.resolution_cmd == "boundary":
        chain = chain_from_obj(F, _load_json(args.chain))
        out = F.boundary(chain)
        _emit(args, chain_to_obj(F, out), [f"boundary with {len(out.terms)} terms"])
        return 0
    if args.resolution_cmd == "check":
        rep = check_admissible(F)
        _emit(args, {"ok": rep.ok, "violations": rep.violations}, [f"admissible: {rep.ok}"] + rep.violations)
        return 0 if rep.ok else 1
    raise ValueError(f"unknown resolution subcommand {args.resolution_cmd}")


# ---------------------------------------------------------------------------
# valuation commands


def _random_chain(F, rng, degree, radius=2, nterms=3):
    ring = F.ring
    terms = []
    ball = F.group.ball(radius if len(F.group.factors()) == 1 else (radius,) * len(F.group.factors()))
    cells = F.cells(degree)
    for _ in range(nterms):
        g = rng.choice(ball)
        cell = rng.choice(cells)
        coeff = ring.from_int(rng.choice([-2, -1, 1, 2]))
        terms.append(((g, cell), coeff))
    return F.chain(terms)


def _cmd_valuation(args) -> int:
    ring = ring_from_tag(args.ring)
    if args.valuation_cmd == "prop41":
        left = parse_resolution(args.left, ring)
        right = parse_resolution(args.right, ring)
        T = tensor_resolution(left, right)
        v = basic_valuation(left, _parse_char(left.group, args.char_left))
        vprime = basic_valuation(right, _parse_char(right.group, args.char_right))
        w = product_valuation(T, v, vprime)
        rng = random.Random(args.seed)
        failures = 0
        for _ in range(args.samples):
            dl = rng.choice(left.degrees())
            dr = rng.choice(right.degrees())
            a = _random_chain(left, rng, dl)
            b = _random_chain(right, rng, dr)
            lhs = w.value(tensor_chain(T, a, b))
            rhs = v.value(a) + vprime.value(b)
            if lhs != rhs:
                failures += 1
        _emit(
            args,
            {"samples": args.samples, "failures": failures},
            [f"product-value identity: {args.samples - failures}/{args.samples} samples agree"],
        )
        return 0 if failures == 0 else 1

    F = parse_resolution(args.resolution, ring)
    if args.valuation_cmd == "basic":
        v = basic_valuation(F, _parse_char(F.group, args.char))
        _emit(args, valuation_to_obj(v), [f"{cell}: {val}" for cell, val in sorted(valuation_to_obj(v)["cells"].items())])
        return 0
    if args.valuation_cmd == "value":
        v = basic_valuation(F, _parse_char(F.group, args.char))
        chain = chain_from_obj(F, _load_json(args.chain))
        val = value(v, chain)
        _emit(args, {"value": _fmt_val(val)}, [f"value: {_fmt_val(val)}"])
        return 0
    if args.valuation_cmd == "split":
        if F.kind != "tensor":
            raise ValueError("split needs a tensor resolution")
        chain = chain_from_obj(F, _load_json(args.chain))
        u = Fraction(args.u)
        if args.side == "left":
            v = basic_valuation(F.left, _parse_char(F.left.group, args.char))
            low, high = split_left(F, chain, u, v)
            names = ("lambda", "rho")
        else:
            v = basic_valuation(F.right, _parse_char(F.right.group, args.char))
            low, high = split_bottom(F, chain, u, v)
            names = ("beta", "tau")
        _emit(
            args,
            {names[0]: chain_to_obj(F, low), names[1]: chain_to_obj(F, high)},
            [f"{names[0]}: {len(low.terms)} terms, {names[1]}: {len(high.terms)} terms"],
        )
        return 0
    if args.valuation_cmd == "check-axioms":
        v = basic_valuation(F, _parse_char(F.group, args.char))
        rng = random.Random(args.seed)
        samples = []
        degs = F.degrees()
        ball = F.group.ball(2 if len(F.group.factors()) == 1 else (2,) * len(F.group.factors()))
        for _ in range(args.samples):
            d = rng.choice(degs)
            samples.append(
                (_random_chain(F, rng, d), _random_chain(F, rng, d), rng.choice(ball), F.ring.one())
            )
        rep = check_axioms(v, samples)
        _emit(
            args,
            {"ok": rep.ok, "checked": rep.checked, "failures": rep.failures},
            [f"axioms on {rep.checked} samples: {'ok' if rep.ok else 'FAILED'}"] + rep.failures,
        )
        return 0 if rep.ok else 1
    raise ValueError(f"unknown valuation subcommand {args.valuation_cmd}")


# ---------------------------------------------------------------------------
# probe and witness commands


def _cmd_probe(args) -> int:
    ring = ring_from_tag(args.ring)
    group = _group_arg(args.group)
    F = resolution_for(group, ring)
    chi = _parse_char(F.group, args.char)
    v = basic_valuation(F, chi)
    W = window_for(F, args.window)
    if args.probe_cmd == "ca":
        t_samples = args.t_samples if args.t_samples else None
        report = ca_probe(F, v, args.n, W, args.lambda_max, t_samples=t_samples)
        _emit(args, report.to_dict(), [report.note])
        return 0 if report.passed else 1
    if args.probe_cmd == "eta":
        z = chain_from_obj(F, _load_json(args.cycle))
        val = eta(F, v, z, W)
        _emit(args, {"eta": _fmt_val(val)}, [f"eta: {_fmt_val(val)}"])
        return 0
    if args.probe_cmd == "gap":
        target = chain_from_obj(F, _load_json(args.target))
        val = gap_lower_bound(F, v, target, W)
        _emit(args, {"gap_lower_bound": _fmt_val(val)}, [f"gap over the window: {_fmt_val(val)}"])
        return 0
    raise ValueError(f"unknown probe subcommand {args.probe_cmd}")


def _cmd_witness(args) -> int:
    cfg = _load_json(args.config)
    ring = ring_from_tag(cfg.get("ring", "Q"))
    left_group = (
        group_from_dict(cfg["left_group"]) if isinstance(cfg["left_group"], dict) else parse_group(cfg["left_group"])
    )
    right_group = (
        group_from_dict(cfg["right_group"]) if isinstance(cfg["right_group"], dict) else parse_group(cfg["right_group"])
    )
    F = resolution_for(left_group, ring)
    G = resolution_for(right_group, ring)
    T = tensor_resolution(F, G)
    v = basic_valuation(F, Character(F.group, [Fraction(x) for x in cfg["char_left"]]))
    vprime = basic_valuation(G, Character(G.group, [Fraction(x) for x in cfg["char_right"]]))
    z = chain_from_obj(F, cfg["z"])
    zp = chain_from_obj(G, cfg["z_prime"])
    mu = Fraction(cfg["mu"])
    mup = Fraction(cfg["mu_prime"])
    W = window_for(T, int(cfg["window"]))
    if "c" in cfg:
        c = chain_from_obj(F, cfg["c"])
    else:
        _, c = max_filling_value(F, v, z, window_for(F, int(cfg["window"])), return_chain=True)
    if "c_prime" in cfg:
        cp = chain_from_obj(G, cfg["c_prime"])
    else:
        _, cp = max_filling_value(G, vprime, zp, window_for(G, int(cfg["window"])), return_chain=True)
    d = chain_from_obj(T, cfg["d"]) if "d" in cfg else None
    report = witness_pipeline(T, v, vprime, z, zp, mu, mup, c, cp, d, W)
    _emit(args, report.to_dict(), [f"witness conclusion: {report.conclusion}"] + report.notes)
    return 0 if report.conclusion else 1


# ---------------------------------------------------------------------------
# catalog commands


def _catalog_from_args(args):
    cat = catalog_mod.builtin_catalog()
    if getattr(args, "records", None):
        extra = [catalog_mod.SigmaRecord.from_dict(item) for item in _load_json(args.records)]
        cat = cat.merge(extra, shadow=getattr(args, "shadow", False))
    return cat


def _cmd_catalog(args) -> int:
    cat = _catalog_from_args(args)
    if args.catalog_cmd == "list":
        entries = [
            {
                "group": rec.group.to_dict(),
                "degree": rec.degree,
                "ring": rec.ring_tag,
                "cells": len(rec.complement.cells),
                "provenance": rec.provenance,
            }
            for rec in cat.records
        ]
        _emit(args, entries, [f"{len(entries)} records"])
        return 0
    if args.catalog_cmd == "lookup":
        rec = cat.lookup(_group_arg(args.group), args.degree, args.ring)
        _emit(args, rec.to_dict(), [f"complement with {len(rec.complement.cells)} cells: {rec.provenance}"])
        return 0
    if args.catalog_cmd == "validate":
        violations = catalog_mod.catalog_violations(cat)
        _emit(args, {"ok": not violations, "violations": violations}, ["catalog ok" if not violations else "violations:"] + violations)
        return 0 if not violations else 1
    if args.catalog_cmd == "product-check":
        rep = catalog_mod.verify_product_formula(cat, _group_arg(args.left), _group_arg(args.right), args.n, args.ring)
        _emit(args, rep.to_dict(), [f"formula equality: {rep.equal}"])
        return 0 if rep.equal else 1
    if args.catalog_cmd == "theorem2":
        rep = catalog_mod.theorem2_applicability(cat, _group_arg(args.left), _group_arg(args.right), args.n)
        _emit(args, rep.to_dict(), [f"applicable: {rep.applicable}, integral formula: {rep.z_formula_equal}"])
        return 0 if rep.applicable and rep.z_formula_equal else 1
    if args.catalog_cmd == "theorem3":
        rep = catalog_mod.theorem3_check(cat, _group_arg(args.left), _group_arg(args.right), args.n)
        _emit(args, rep.to_dict(), [f"integral formula equality at degree {args.n}: {rep.equal}"])
        return 0 if rep.equal else 1
    if args.catalog_cmd == "cross-validate":
        rec = cat.lookup(_group_arg(args.group), args.degree, args.ring)
        directions = [tuple(int(x) for x in d.split(",")) for d in args.directions.split(";")]
        rep = catalog_mod.cross_validate(rec, directions, args.window, args.lambda_max)
        _emit(args, rep.to_dict(), [f"consistent: {rep.consistent}"])
        return 0 if rep.consistent else 1
    raise ValueError(f"unknown catalog subcommand {args.catalog_cmd}")


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bnsr", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "structured"), default="human")
    common.add_argument("--out", "-o", default=None, help="write output to a file")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    sub = parser.add_subparsers(dest="command", required=True)

    sphere = sub.add_parser("sphere", help="cone-set algebra on character spheres")
    ssub = sphere.add_subparsers(dest="sphere_cmd", required=True)
    for name in ("join", "union", "equals", "subset"):
        p = ssub.add_parser(name, parents=[common])
        p.add_argument("--left", required=True)
        p.add_argument("--right", required=True)
    p = ssub.add_parser("complement", parents=[common])
    p.add_argument("--set", required=True)
    p = ssub.add_parser("product-rhs", parents=[common])
    p.add_argument("--inputs", required=True)
    p.add_argument("--n", type=int, required=True)
    p = ssub.add_parser("homotopical", parents=[common])
    p.add_argument("--sigma-gh", required=True)
    p.add_argument("--sigma-g", required=True)
    p.add_argument("--sigma-h", required=True)
    p.add_argument("--left-group", required=True)
    p.add_argument("--right-group", required=True)

    resolution = sub.add_parser("resolution", help="build and check resolutions")
    rsub = resolution.add_subparsers(dest="resolution_cmd", required=True)
    for name in ("build", "boundary", "check"):
        p = rsub.add_parser(name, parents=[common])
        p.add_argument("--resolution", required=True)
        p.add_argument("--ring", default="Q")
        if name == "boundary":
            p.add_argument("--chain", required=True)

    valuation = sub.add_parser("valuation", help="valuations and splitters")
    vsub = valuation.add_subparsers(dest="valuation_cmd", required=True)
    p = vsub.add_parser("basic", parents=[common])
    p.add_argument("--resolution", required=True)
    p.add_argument("--ring", default="Q")
    p.add_argument("--char", required=True)
    p = vsub.add_parser("value", parents=[common])
    p.add_argument("--resolution", required=True)
    p.add_argument("--ring", default="Q")
    p.add_argument("--char", required=True)
    p.add_argument("--chain", required=True)
    p = vsub.add_parser("split", parents=[common])
    p.add_argument("--resolution", required=True)
    p.add_argument("--ring", default="Q")
    p.add_argument("--char", required=True, help="character of the split side factor")
    p.add_argument("--u", required=True)
    p.add_argument("--side", choices=("left", "bottom"), default="left")
    p.add_argument("--chain", required=True)
    p = vsub.add_parser("check-axioms", parents=[common])
    p.add_argument("--resolution", required=True)
    p.add_argument("--ring", default="Q")
    p.add_argument("--char", required=True)
    p.add_argument("--samples", type=int, default=100)
    p = vsub.add_parser("prop41", parents=[common])
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--ring", default="Q")
    p.add_argument("--char-left", required=True)
    p.add_argument("--char-right", required=True)
    p.add_argument("--samples", type=int, default=200)

    probe = sub.add_parser("probe", help="window probes for controlled acyclicity")
    psub = probe.add_subparsers(dest="probe_cmd", required=True)
    p = psub.add_parser("ca", parents=[common])
    p.add_argument("--group", required=True)
    p.add_argument("--ring", default="Q")
    p.add_argument("--char", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--lambda-max", type=int, required=True)
    p.add_argument("--t-samples", type=int, default=0)
    p = psub.add_parser("eta", parents=[common])
    p.add_argument("--group", required=True)
    p.add_argument("--ring", default="Q")
    p.add_argument("--char", required=True)
    p.add_argument("--cycle", required=True)
    p.add_argument("--window", type=int, required=True)
    p = psub.add_parser("gap", parents=[common])
    p.add_argument("--group", required=True)
    p.add_argument("--ring", default="Q")
    p.add_argument("--char", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--window", type=int, required=True)

    witness = sub.add_parser("witness", help="splitter decomposition pipeline")
    wsub = witness.add_subparsers(dest="witness_cmd", required=True)
    p = wsub.add_parser("run", parents=[common])
    p.add_argument("--config", required=True)

    cat = sub.add_parser("catalog", help="curated invariant data and theorem checks")
    csub = cat.add_subparsers(dest="catalog_cmd", required=True)
    p = csub.add_parser("list", parents=[common])
    p.add_argument("--records", default=None)
    p.add_argument("--shadow", action="store_true")
    p = csub.add_parser("lookup", parents=[common])
    p.add_argument("--group", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--ring", default="Q")
    p.add_argument("--records", default=None)
    p.add_argument("--shadow", action="store_true")
    p = csub.add_parser("validate", parents=[common])
    p.add_argument("--records", default=None)
    p.add_argument("--shadow", action="store_true")
    p = csub.add_parser("product-check", parents=[common])
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ring", default="Q")
    p.add_argument("--records", default=None)
    p.add_argument("--shadow", action="store_true")
    for name in ("theorem2", "theorem3"):
        p = csub.add_parser(name, parents=[common])
        p.add_argument("--left", required=True)
        p.add_argument("--right", required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--records", default=None)
        p.add_argument("--shadow", action="store_true")
    p = csub.add_parser("cross-validate", parents=[common])
    p.add_argument("--group", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--ring", default="Q")
    p.add_argument("--directions", required=True, help="semicolon-separated integer vectors")
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--lambda-max", type=int, default=4)
    p.add_argument("--records", default=None)
    p.add_argument("--shadow", action="store_true")

    return parser


_HANDLERS = {
    "sphere": _cmd_sphere,
    "resolution": _cmd_resolution,
    "valuation": _cmd_valuation,
    "probe": _cmd_probe,
    "witness": _cmd_witness,
    "catalog": _cmd_catalog,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = _HANDLERS[args.command]
    try:
        return handler(args)
    except (ValueError, KeyError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

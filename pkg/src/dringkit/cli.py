"""``dring-kit`` command-line front end.

Exit codes: 0 success, 1 computed negative verdict, 2 input error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys
from importlib import resources
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .algebra import (
    algebra_from_json,
    algebra_to_json,
    compose_algebras,
    fibred_product,
    normalize_basis,
    tensor_product,
    validate_algebra,
)
from .decomposition import (
    FactorizationBudgetExceeded,
    associated_operators,
    local_decomposition,
    splitting_endomorphisms,
)
from .exactpoly import (
    QQ,
    BudgetExceeded,
    FractionField,
    NumberField,
    ParseError,
    PolyRing,
    field_from_characteristic,
    parse_expression,
)
from .iteration import (
    En_expand,
    RankOverflow,
    charp_demo,
    check_iterativity,
    iterate_algebra,
    pth_power_membership,
    word_label,
)
from .operators import dring_from_json, leibniz_identities
from .prolongation import (
    AffineVarietySpec,
    ContainmentError,
    dim_sequence,
    dominance_check,
    enumerate_words,
    field_conjugation,
    jet_ideal,
    nabla,
    nabla_compatible,
    prolong,
    sigma_from_row,
    twist,
)
from .sampling import random_polynomial

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    """Bad user input; the message names the offending file when there is one."""


class Result:
    def __init__(self, report: dict, text: list[str], code: int = EXIT_OK):
        self.report = report
        self.text = text
        self.code = code


# -- input resolution -----------------------------------------------------------------


def corpus_path(name: str) -> Path | None:
    base = resources.files("dringkit") / "corpus"
    candidate = base / name
    return Path(str(candidate)) if candidate.is_file() else None


def load_json(ref: str) -> tuple[dict, str]:
    """Load a spec from a path, the bundled corpus or the algebra catalog (``catalog:NAME``)."""
    if ref.startswith("catalog:"):
        return {"catalog": ref[len("catalog:") :]}, ref
    path = Path(ref)
    if not path.is_file():
        bundled = corpus_path(ref)
        if bundled is None:
            raise InputError(f"{ref}: no such file (not in the bundled corpus either)")
        path = bundled
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{ref}: {exc.strerror}") from None
    try:
        return json.loads(text), str(path)
    except json.JSONDecodeError as exc:
        raise InputError(f"{ref}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None


def _relative_loader(origin: str) -> Callable[[str], dict]:
    def load(ref: str) -> dict:
        if not ref.startswith("catalog:"):
            sibling = Path(origin).parent / ref
            if sibling.is_file():
                ref = str(sibling)
        return load_json(ref)[0]

    return load


def _wrap(ref: str, fn: Callable, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{ref}: {exc}") from None


def read_algebra(ref: str, char: int | None = None):
    data, origin = load_json(ref)
    if char is not None and "catalog" in data:
        data = dict(data, char=char)
    return _wrap(origin, algebra_from_json, data)


def read_dring(ref: str):
    data, origin = load_json(ref)
    return _wrap(origin, dring_from_json, data, loader=_relative_loader(origin))


_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def read_variety(ref: str, d=None) -> AffineVarietySpec:
    data, origin = load_json(ref)
    if "vars" not in data:
        raise InputError(f"{origin}: variety spec lacks 'vars'")
    vars_ = list(data["vars"])
    gens = list(data.get("gens", []))
    field_spec = data.get("field")
    if field_spec:
        domain = _number_field(origin, field_spec)
    else:
        names = {m for g in gens for m in _IDENT.findall(g)} - set(vars_)
        if d is not None and names and names <= set(d.ring.vars):
            domain = d.field
        elif d is not None:
            domain = d.algebra.domain
        else:
            domain = field_from_characteristic(int(data.get("char", 0)))
    try:
        return AffineVarietySpec.from_strings(vars_, gens, domain, bool(data.get("prime", False)))
    except (ParseError, ValueError) as exc:
        raise InputError(f"{origin}: {exc}") from None


def _number_field(origin: str, spec: dict):
    var = spec.get("var", "s")
    modulus = spec.get("modulus")
    if modulus is None:
        raise InputError(f"{origin}: field spec lacks 'modulus'")
    return number_field_from_string(modulus, var, origin)


def number_field_from_string(modulus, var: str, origin: str = "argument"):
    if isinstance(modulus, list):
        coeffs = modulus
    else:
        R = PolyRing(QQ, [var])
        try:
            P = parse_expression(modulus, R)
        except ParseError as exc:
            raise InputError(f"{origin}: {exc}") from None
        deg = P.degree(var)
        coeffs = [P.coefficient((k,)) for k in range(deg + 1)]
    try:
        lead = QQ(coeffs[-1])
        return NumberField([QQ(c) / lead for c in coeffs], var)
    except (ValueError, ZeroDivisionError, IndexError) as exc:
        raise InputError(f"{origin}: bad field modulus: {exc}") from None


def _split_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _splitting(args, dec) -> dict:
    if not args.modulus:
        return {}
    L = number_field_from_string(args.modulus, args.field_var)
    roots = []
    for r in _split_list(args.roots or ""):
        try:
            roots.append(parse_expression(r, [], L))
        except ParseError as exc:
            raise InputError(f"--roots: {exc}") from None
    factor = args.factor
    if factor is None:
        degs = [i for i, f in enumerate(dec.factors) if f.degree > 1]
        if len(degs) != 1:
            raise InputError("--factor is required when several factors have residue degree > 1")
        factor = degs[0]
    return {factor: (L, roots)}


# -- commands -----------------------------------------------------------------------


def cmd_check_algebra(args) -> Result:
    A = read_algebra(args.algebra)
    rep = validate_algebra(A)
    text = [f"algebra {A.name or args.algebra}: rank {A.rank}, characteristic {A.characteristic}"]
    text += ["valid"] if rep.ok else [f"violation: {v}" for v in rep.violations]
    return Result({"algebra": A.name, **rep.to_json()}, text, EXIT_OK if rep.ok else EXIT_NEGATIVE)


def cmd_normalize(args) -> Result:
    A = read_algebra(args.algebra)
    B, M = normalize_basis(A)
    K = A.domain
    rows = [[K.to_str(c) for c in r] for r in M]
    text = [f"basis: {', '.join(B.labels)}"]
    text += [f"mul: a[{i},{j},{k}] = {K.to_str(c)}" for i, j, k, c in B.entries()]
    text.append("unit: (" + ", ".join(K.to_str(c) for c in B.unit) + ")")
    return Result({"algebra": algebra_to_json(B), "change_of_basis": rows}, text)


def cmd_product(args) -> Result:
    A = read_algebra(args.algebra)
    B = read_algebra(args.other)
    mode = "fibred" if args.fibred else "tensor" if args.tensor else "compose"
    fn = {"fibred": fibred_product, "tensor": tensor_product, "compose": compose_algebras}[mode]
    C = _wrap(args.algebra, fn, A, B)
    rep = validate_algebra(C)
    out = algebra_to_json(C)
    text = [f"{mode} product: rank {C.rank}", "basis: " + ", ".join(C.labels)]
    text += [str(i) for i in leibniz_identities(C)] if C.is_normalized() else []
    text.append("valid" if rep.ok else "INVALID")
    return Result({"algebra": out, "valid": rep.ok}, text, EXIT_OK if rep.ok else EXIT_NEGATIVE)


def cmd_leibniz(args) -> Result:
    A = read_algebra(args.algebra)
    if not A.is_normalized():
        A, _ = normalize_basis(A)
    ids = leibniz_identities(A)
    x, y = args.names
    text = [f"{i.product_rule(x, y)}; {i.unit_rule()}" for i in ids]
    return Result({"identities": [i.to_json() for i in ids]}, text)


def cmd_make_dring(args) -> Result:
    d = read_dring(args.dring)
    ids = leibniz_identities(d.algebra)
    text = [f"D-ring over {d.algebra.name or 'custom algebra'}, generators {', '.join(d.vars) or '(none)'}"]
    text += [f"e({v}) = ({', '.join(str(c) for c in img.coords)})" for v, img in d.gen_images.items()]
    text += [str(i) for i in ids]
    return Result({"dring": d.to_json(), "identities": [i.product_rule() for i in ids]}, text)


def _parse_element(d, expr: str, where: str):
    try:
        return d.coerce(expr)
    except (ParseError, ValueError, TypeError) as exc:
        raise InputError(f"{where}: {exc}") from None


def cmd_apply(args) -> Result:
    d = read_dring(args.dring)
    f = _parse_element(d, args.expr, "--expr")
    if args.op is not None:
        if not 0 <= args.op < d.rank:
            raise InputError(f"--op: operator index {args.op} out of range 0..{d.rank - 1}")
        v = d.apply_operator(args.op, f)
        return Result({"expr": str(f), "op": args.op, "value": str(v)}, [f"∂{args.op}({f}) = {v}"])
    img = d.apply_e(f)
    coords = [str(c) for c in img.coords]
    return Result({"expr": str(f), "e": coords}, [f"e({f}) = ({', '.join(coords)})"])


def _hints(args, K):
    """``--hint`` polynomials in ``x`` as coefficient lists (lowest degree first)."""
    out = []
    for h in args.hint or []:
        R = PolyRing(K, ["x"])
        try:
            P = parse_expression(h, R)
        except ParseError as exc:
            raise InputError(f"--hint: {exc}") from None
        out.append([P.coefficient((k,)) for k in range(P.degree("x") + 1)])
    return out or None


def cmd_decompose(args) -> Result:
    A = read_algebra(args.algebra)
    if not A.is_normalized():
        A, _ = normalize_basis(A)
    dec = local_decomposition(A, _hints(args, A.domain))
    rep = dec.to_json()
    ops = associated_operators(dec)
    rep["associated"] = ops.to_json()["factors"]
    text = [f"t = {dec.t}", f"nilradical rank {len(dec.nilradical)}, nilpotency index {dec.nilpotency_index}"]
    for i, f in enumerate(dec.factors):
        text.append(f"factor {i}: dim {f.dimension}, P{i} = {f.residue_poly_str()}, alpha {rep['factors'][i]['alpha']}")
    text.append(f"assumption_4_1_ii = {str(dec.assumption_4_1_ii).lower()}")
    if dec.experimental:
        text.append("note: positive characteristic decomposition is experimental")
    return Result(rep, text)


def _combination(row, K) -> str:
    """``sum_j row_j d_j`` with ``d_0`` written as ``id``."""
    out = ""
    for j, c in enumerate(row):
        if not c:
            continue
        op = "id" if j == 0 else f"∂{j}"
        s = K.to_str(c)
        neg = s.startswith("-") and not K.needs_parens(c)
        mag = s[1:] if neg else s
        term = op if mag == "1" else f"({mag})*{op}" if K.needs_parens(c) else f"{mag}*{op}"
        if not out:
            out = f"-{term}" if neg else term
        else:
            out += f" - {term}" if neg else f" + {term}"
    return out or "0"


def cmd_split_endos(args) -> Result:
    A = read_algebra(args.algebra)
    if not A.is_normalized():
        A, _ = normalize_basis(A)
    dec = local_decomposition(A)
    data = _splitting(args, dec)
    rows = _wrap("splitting data", splitting_endomorphisms, associated_operators(dec), dec, data)
    text, rep = [], {}
    for i, rs in rows.items():
        L = data[i][0] if i in data else A.domain
        rep[str(i)] = [[L.to_str(c) for c in r] for r in rs]
        for k, r in enumerate(rs):
            text.append(f"sigma[{i},{k}] = {_combination(r, L)}")
    return Result({"sigma": rep}, text)


def cmd_prolong(args) -> Result:
    d = read_dring(args.dring)
    X = read_variety(args.variety, d)
    P = prolong(X, d)
    rep = P.to_json()
    text = [f"prolonged coordinates: {', '.join(P.ring.vars)}"]
    for g, comps in P.provenance().items():
        text.append(f"{g}: " + "; ".join(comps))
    text.append("groebner: " + ", ".join(rep["groebner"]))
    return Result(rep, text)


def cmd_nabla(args) -> Result:
    d = read_dring(args.dring)
    point = [_parse_element(d, t, "--point") for t in _split_list(args.point)]
    vals = nabla(point, d)
    rep = {"point": [str(p) for p in point], "nabla": [str(v) for v in vals]}
    text = ["(" + ", ".join(rep["nabla"]) + ")"]
    code = EXIT_OK
    if args.variety:
        X = read_variety(args.variety, d)
        ok = nabla_compatible(prolong(X, d), point, d)
        rep["compatible"] = ok
        text.append(f"compatible with the prolongation: {str(ok).lower()}")
        code = EXIT_OK if ok else EXIT_NEGATIVE
    return Result(rep, text, code)


def cmd_twist(args) -> Result:
    if args.conjugate:
        X = read_variety(args.variety)
        L = X.ring.domain
        if not hasattr(L, "modulus"):
            raise InputError(f"{args.variety}: --conjugate needs a number-field variety")
        sigma = _wrap("--conjugate", field_conjugation, L, parse_expression(args.conjugate, [], L))
        Y = twist(X, sigma)
    else:
        if not args.dring:
            raise InputError("twist needs --dring with --factor, or --conjugate")
        d = read_dring(args.dring)
        X = read_variety(args.variety, d)
        dec = local_decomposition(d.algebra)
        i = args.factor or 0
        if not 0 <= i < len(dec.factors):
            raise InputError(f"--factor {i} out of range")
        if dec.factors[i].degree != 1:
            raise InputError(f"factor {i} has residue degree {dec.factors[i].degree}; twist by split data instead")
        Y = twist(X, sigma_from_row(d, dec.factors[i].pi_rows[0], X.ring.domain) if i else None)
    rep = Y.to_json()
    return Result(rep, [f"V({', '.join(rep['gens'])})"])


def cmd_dominance(args) -> Result:
    d = read_dring(args.dring)
    X = read_variety(args.x, d)
    Y = read_variety(args.y, d)
    dec = local_decomposition(d.algebra)
    split = _splitting(args, dec)
    try:
        rep = dominance_check(Y, X, d, dec, splitting=split or None, budget=args.budget)
    except ContainmentError as exc:
        raise InputError(f"{args.y}: {exc}") from None
    text = []
    for v in rep.verdicts:
        state = "dense" if v.dense else "NOT dense"
        flag = f" ({v.flag})" if v.flag else ""
        basis = ", ".join(v.eliminated) or "0"
        text.append(f"factor {v.factor}.{v.split}: {v.pi_hat}: {state}{flag}; elimination basis <{basis}>")
    return Result(rep.to_json(), text, EXIT_OK if rep.all_dense else EXIT_NEGATIVE)


def cmd_jet(args) -> Result:
    X = read_variety(args.variety)
    K = X.ring.domain
    try:
        point = [parse_expression(t, [], K) for t in _split_list(args.point)]
    except ParseError as exc:
        raise InputError(f"--point: {exc}") from None
    I = _wrap(args.variety, jet_ideal, X, point, args.order)
    gens = [str(g) for g in I.gens]
    return Result({"vars": list(I.ring.vars), "gens": gens}, ["<" + ", ".join(gens) + ">"])


def cmd_words(args) -> Result:
    ws = enumerate_words(args.r, args.ell, args.inverses)
    labels = [str(w) for w in ws]
    return Result({"count": len(ws), "words": labels}, [f"{len(ws)} words", " ".join(labels)])


def cmd_dims(args) -> Result:
    d = read_dring(args.dring)
    tup = [_parse_element(d, t, "--tuple") for t in _split_list(args.tuple)]
    seq = _wrap("--tuple", dim_sequence, tup, d, args.r)
    return Result({"tuple": [str(t) for t in tup], "dims": seq}, ["(" + ", ".join(map(str, seq)) + ")"])


def cmd_iterate(args) -> Result:
    A = read_algebra(args.algebra)
    if not A.is_normalized():
        A, _ = normalize_basis(A)
    it = iterate_algebra(A, args.n, args.rank_cap)
    K = A.domain
    rep = it.to_json()
    rep["dn"] = algebra_to_json(it.dn)
    text = [f"D^({args.n}) rank {it.full.rank}; D_{args.n} rank {it.rank}", "basis: " + ", ".join(it.dn.labels)]
    text += [f"{it.dn.labels[i]}*{it.dn.labels[j]} -> {K.to_str(c)}*{it.dn.labels[k]}" for i, j, k, c in it.dn.entries()]
    text.append(f"subalgebra closed: {str(it.closed).lower()}")
    return Result(rep, text, EXIT_OK if it.closed else EXIT_NEGATIVE)


def cmd_en(args) -> Result:
    d = read_dring(args.dring)
    f = _parse_element(d, args.expr, "--expr")
    it = iterate_algebra(d.algebra, args.n, args.rank_cap)
    E = En_expand(f, d, args.n, it)
    coords = [str(c) for c in E.coords]
    labels = [word_label(w) for w in it.words]
    text = [f"{lab}: {c}" for lab, c in zip(labels, coords)]
    return Result({"expr": str(f), "n": args.n, "coords": dict(zip(labels, coords))}, text)


def cmd_iterativity(args) -> Result:
    d = read_dring(args.dring)
    rng = random.Random(args.seed)
    samples = [random_polynomial(d.ring, rng, args.degree, 4, variables=d.vars) for _ in range(args.samples)]
    rep = check_iterativity(d, args.m, args.n, samples)
    text = [f"checked {k}: {v}" for k, v in rep.checked.items()]
    text += [f"violation [{v.condition}] on {v.sample}: {v.lhs} != {v.rhs}" for v in rep.violations]
    text.append("pass" if rep.ok else "FAIL")
    return Result(rep.to_json(), text, EXIT_OK if rep.ok else EXIT_NEGATIVE)


def cmd_pth_root(args) -> Result:
    A = read_algebra(args.algebra)
    if A.characteristic == 0:
        raise InputError(f"{args.algebra}: p-th power membership needs positive characteristic")
    if not A.is_normalized():
        A, _ = normalize_basis(A)
    it = iterate_algebra(A, args.n, args.rank_cap)
    ring = FractionField(PolyRing(A.domain, _split_list(args.vars) if args.vars else []))
    try:
        vec = [ring(parse_expression(t, ring.ring)) for t in _split_list(args.vector)]
    except ParseError as exc:
        raise InputError(f"--vector: {exc}") from None
    if len(vec) != it.rank:
        raise InputError(f"--vector: expected {it.rank} coordinates for D_{args.n}, got {len(vec)}")
    ok = pth_power_membership(vec, it)
    return Result({"member": ok, "n": args.n}, [f"member: {str(ok).lower()}"], EXIT_OK if ok else EXIT_NEGATIVE)


def cmd_charp_demo(args) -> Result:
    base = read_algebra(args.algebra, char=args.p) if args.algebra else None
    rep = _wrap("charp-demo", charp_demo, args.p, base, args.m, length=args.length)
    data = rep.to_json()
    text = [
        f"p = {rep.p}, m = {rep.m}, algebra {rep.algebra}",
        "eta = (" + ", ".join(data["eta"]) + ")",
        "membership pattern: " + ",".join(str(b).lower() for b in rep.pattern),
    ]
    for n, res in rep.residuals.items():
        text.append(f"closed-form residual n={n}: " + ("0" if all(r == "0" for r in res) else ", ".join(res)))
    return Result(data, text, EXIT_OK if rep.ok else EXIT_NEGATIVE)


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dring-kit", description="Exact computations with free operators on fields.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=None, help="Gröbner reduction-step budget")
    common.add_argument("--rank-cap", type=int, default=None, help="bound on the rank of iterated algebras")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    def split_opts(sp):
        sp.add_argument("--modulus", help="splitting field modulus, e.g. 's^2 - 2'")
        sp.add_argument("--field-var", default="s")
        sp.add_argument("--roots", help="comma-separated roots of the residue polynomial, e.g. 's,-s'")
        sp.add_argument("--factor", type=int)

    sp = add("check-algebra", cmd_check_algebra, "validate structure constants")
    sp.add_argument("--algebra", required=True)
    sp = add("normalize", cmd_normalize, "change basis so that the projection is the first coordinate")
    sp.add_argument("--algebra", required=True)
    sp = add("product", cmd_product, "fibred, tensor or composed product of two algebras")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--other", required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--fibred", action="store_true")
    g.add_argument("--tensor", action="store_true")
    g.add_argument("--compose", action="store_true")
    sp = add("leibniz", cmd_leibniz, "generalized Leibniz rules")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--names", nargs=2, default=["x", "y"], metavar=("X", "Y"))
    sp = add("make-dring", cmd_make_dring, "load and check a D-ring spec")
    sp.add_argument("--dring", required=True)
    sp = add("apply", cmd_apply, "apply e or one operator")
    sp.add_argument("--dring", required=True)
    sp.add_argument("--expr", required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--op", type=int)
    g.add_argument("--e", action="store_true")
    sp = add("decompose", cmd_decompose, "local decomposition and associated operators")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--hint", action="append")
    sp = add("split-endos", cmd_split_endos, "associated endomorphisms over a splitting field")
    sp.add_argument("--algebra", required=True)
    split_opts(sp)
    sp = add("prolong", cmd_prolong, "prolongation of a variety")
    sp.add_argument("--dring", required=True)
    sp.add_argument("--variety", required=True)
    sp = add("nabla", cmd_nabla, "prolonged point of a tuple")
    sp.add_argument("--dring", required=True)
    sp.add_argument("--point", required=True, help="comma-separated coordinates")
    sp.add_argument("--variety")
    sp = add("twist", cmd_twist, "apply an associated endomorphism or field conjugation to coefficients")
    sp.add_argument("--variety", required=True)
    sp.add_argument("--dring")
    sp.add_argument("--factor", type=int)
    sp.add_argument("--conjugate", help="image of the number-field generator (write --conjugate=-s)")
    sp = add("dominance", cmd_dominance, "decide density of projected prolongation subvarieties")
    sp.add_argument("--dring", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    split_opts(sp)
    sp = add("jet", cmd_jet, "jet ideal at a point")
    sp.add_argument("--variety", required=True)
    sp.add_argument("--point", required=True)
    sp.add_argument("--order", type=int, default=1)
    sp = add("words", cmd_words, "enumerate operator words")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--inverses", type=int, default=0)
    sp = add("dims", cmd_dims, "transcendence degree sequence")
    sp.add_argument("--dring", required=True)
    sp.add_argument("--tuple", required=True)
    sp.add_argument("--r", type=int, default=3)
    sp = add("iterate", cmd_iterate, "iterated algebra and its subalgebra")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp = add("En", cmd_en, "iterated operator expansion")
    sp.add_argument("--dring", required=True)
    sp.add_argument("--expr", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp = add("iterativity", cmd_iterativity, "check the iterativity identities on random samples")
    sp.add_argument("--dring", required=True)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--samples", type=int, default=20)
    sp.add_argument("--degree", type=int, default=3)
    sp = add("pth-root", cmd_pth_root, "p-th power membership in an iterated subalgebra")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--vector", required=True, help="comma-separated coordinates")
    sp.add_argument("--vars", default="", help="comma-separated function-field variables")
    sp = add("charp-demo", cmd_charp_demo, "positive-characteristic p-th root counterexample")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--length", type=int, default=3, help="use K[eta]/(eta^(length+1))")
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--algebra")
    return p


def _emit(res: Result, args, out) -> None:
    if args.format == "json":
        payload = dict(res.report)
        payload["seed"] = args.seed
        payload["exit_code"] = res.code
        json.dump(payload, out, ensure_ascii=False, indent=2, default=str)
        out.write("\n")
    else:
        for line in res.text:
            out.write(line + "\n")


def run_cli(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    if args.budget is not None and args.budget <= 0:
        err.write("dring-kit: --budget must be positive\n")
        return EXIT_INPUT
    saved = os.environ.get("DRINGKIT_BUDGET")
    if args.budget is not None:
        os.environ["DRINGKIT_BUDGET"] = str(args.budget)
    try:
        res = args.func(args)
    except InputError as exc:
        err.write(f"dring-kit: {exc}\n")
        return EXIT_INPUT
    except (BudgetExceeded, FactorizationBudgetExceeded, RankOverflow, RecursionError) as exc:
        err.write(f"dring-kit: budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except (ParseError, ValueError, KeyError, ZeroDivisionError, NotImplementedError) as exc:
        err.write(f"dring-kit: {type(exc).__name__}: {exc}\n")
        return EXIT_INPUT
    finally:
        if saved is None:
            os.environ.pop("DRINGKIT_BUDGET", None)
        else:
            os.environ["DRINGKIT_BUDGET"] = saved
    _emit(res, args, out)
    return res.code


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":  # pragma: no cover
    main()

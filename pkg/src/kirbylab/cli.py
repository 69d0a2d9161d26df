"""Command-line front end.

    kirbylab verify     --algebra hn:3
    kirbylab integrals  --algebra sweedler
    kirbylab kirby check --algebra hn:3 --z zd:1
    kirbylab invariant  --algebra hn:3 --z zd:3 --link unknot:+1
    kirbylab rt         --algebra cyclic:5 --link unknot:2
    kirbylab traces     --algebra hn:1
    kirbylab fusion     --data pointed:6
    kirbylab batch      manifest.json

Exit status: 0 on success, 1 on domain errors (or failed checks), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import evaluator, examples, fusion, kirby, links
from .errors import KirbyLabError
from .exactfield import FieldElement
from .hopfcore import AlgebraElement, LinearForm
from .report import Report
from .ribboncore import check_ribbon_identities, special_grouplike


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# encoding


def _approx(x: FieldElement) -> str:
    c = x.approx()
    if abs(c.imag) < 5e-13:
        return f"{c.real:.12g}"
    return f"{c.real:.12g}{'+' if c.imag >= 0 else '-'}{abs(c.imag):.12g}i"


def scalar_json(x: FieldElement) -> dict:
    # "approx" is a display aid only; "exact" is authoritative
    return {"exact": x.to_json(), "text": str(x), "approx": _approx(x)}


def _encode(obj):
    if isinstance(obj, FieldElement):
        return scalar_json(obj)
    if isinstance(obj, (AlgebraElement, LinearForm)):
        return {"coords": obj.to_json(), "text": str(obj)}
    if isinstance(obj, Report):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    return obj


def _is_leaf(v) -> bool:
    return isinstance(v, dict) and set(v) in ({"exact", "text", "approx"}, {"coords", "text"})


def _table(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict) and set(obj) == {"exact", "text", "approx"}:
        return [pad + f"{obj['text']}  (~ {obj['approx']}, advisory)"]
    if isinstance(obj, dict) and set(obj) == {"coords", "text"}:
        return [pad + obj["text"]]
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _is_leaf(v):
                lines.append(f"{pad}{k}:")
                lines += _table(v, indent + 1)
            else:
                sub = _table(v, 0)
                lines.append(f"{pad}{k}: {sub[0] if sub else ''}")
    elif isinstance(obj, list):
        for v in obj:
            sub = _table(v, indent + 1)
            if sub:
                lines.append(pad + "- " + sub[0].strip())
                lines += sub[1:]
    else:
        lines.append(pad + ("true" if obj is True else "false" if obj is False else str(obj)))
    return lines


def render(obj, fmt: str) -> str:
    enc = _encode(obj)
    if fmt == "table":
        return "\n".join(_table(enc)) + "\n"
    return json.dumps(enc, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


# ---------------------------------------------------------------------------
# inputs


def load_algebra(uri: str):
    if uri.startswith("@"):
        from .hopfcore import HopfPresentation

        with open(uri[1:], encoding="utf-8") as fh:
            obj = json.load(fh)
        H = HopfPresentation.from_json(obj)
        if "R" not in obj:
            return H, None
        from .ribboncore import RibbonStructure
        from .farray import FArray
        import numpy as np

        R = FArray.from_elements(H.field, np.array([[H.field.parse(c) for c in row] for row in obj["R"]], dtype=object))
        theta = H.element([H.field.parse(c) for c in obj["theta"]])
        return H, RibbonStructure(H, R, theta)
    return examples.parse_algebra_uri(uri)


def parse_z(text: str, uri: str, H, rib) -> AlgebraElement:
    t = text.strip()
    low = t.lower()
    if low.startswith("zd:"):
        spec = examples.spec_from_uri(uri)
        if spec is None:
            raise UsageError(f"--z {t}: z_d elements exist only for hn algebras")
        return examples.hn_zd(spec, int(low[3:]))
    if low in ("1", "one", "unit"):
        return H.one()
    if low in ("slambda", "s(lambda)"):
        return H.left_integral.S()
    if low == "lambda":
        return H.left_integral
    if low == "premodular":
        if not uri.lower().startswith("cyclic"):
            raise UsageError("--z premodular needs a cyclic algebra")
        N = H.dim
        return kirby.z_premodular(rib, examples.cyclic_characters(N))
    if low.startswith("basis:"):
        return H.basis_element(H.basis_index(t[6:]))
    if t.startswith("@"):
        with open(t[1:], encoding="utf-8") as fh:
            t = fh.read()
    if t.startswith("["):
        coords = json.loads(t)
        if len(coords) != H.dim:
            raise UsageError(f"--z: expected {H.dim} coordinates, got {len(coords)}")
        return H.element([H.field.parse(c) for c in coords])
    raise UsageError(f"--z: cannot parse {text!r}")


def parse_fusion(text: str) -> fusion.FusionData:
    t = text.strip()
    if t.startswith("@"):
        with open(t[1:], encoding="utf-8") as fh:
            return fusion.FusionData.from_json(json.load(fh))
    parts = t.split(":")
    if parts[0] == "pointed" and len(parts) >= 2:
        return fusion.pointed_data(int(parts[1]), quadratic="quadratic" in parts[2:])
    if parts[0] == "cyclic" and len(parts) >= 2:
        _, rib = examples.parse_algebra_uri(t)
        return fusion.fusion_from_modules(rib, examples.cyclic_characters(int(parts[1])))
    if parts[0] == "trivial":
        return fusion.trivial_data()
    raise UsageError(f"--data: cannot parse {text!r}")


def _need_rib(rib):
    if rib is None:
        raise UsageError("this verb needs a ribbon structure (R and theta)")
    return rib


# ---------------------------------------------------------------------------
# verbs


def cmd_verify(args):
    H, rib = load_algebra(args.algebra)
    reports = [H.verify_hopf()]
    if rib is not None:
        reports.append(rib.verify())
    ok = all(r.ok for r in reports)
    if ok:
        reports.append(H.check_integral_identities())
        if rib is not None:
            special_grouplike(rib)
            reports.append(check_ribbon_identities(rib))
    ok = all(r.ok for r in reports)
    return {"algebra": args.algebra, "dim": H.dim, "ok": ok, "reports": reports}, (0 if ok else 1)


def cmd_integrals(args):
    H, rib = load_algebra(args.algebra)
    out = {
        "algebra": args.algebra,
        "Lambda": H.left_integral,
        "lambda": H.right_integral_dual,
        "g": H.g,
        "nu": H.nu,
        "unimodular": H.is_unimodular(),
    }
    if rib is not None:
        out["G"] = rib.G
        out["h_nu"] = rib.h_nu
    return out, 0


def cmd_kirby(args):
    H, rib = load_algebra(args.algebra)
    rib = _need_rib(rib)
    if args.action == "subspaces":
        sub = kirby.compute_subspaces(rib)
        return {"algebra": args.algebra, "dims": sub.dims(), "L": sub.L_basis, "Z": sub.Z_basis, "N": sub.N_basis}, 0
    if not args.z:
        raise UsageError("kirby check needs --z")
    z = parse_z(args.z, args.algebra, H, rib)
    cand = kirby.is_kirby(rib, z)
    out = {
        "algebra": args.algebra,
        "z": z,
        "in_L": cand.in_L,
        "cond_a": cand.condition_a,
        "cond_b": cand.condition_b,
        "theta_plus": cand.theta_values[0],
        "theta_minus": cand.theta_values[1],
        "normalized": cand.normalized,
        "in I(H)^norm": cand.normalized,
        "failures": cand.failures,
    }
    return out, 0


def cmd_invariant(args):
    H, rib = load_algebra(args.algebra)
    rib = _need_rib(rib)
    z = parse_z(args.z, args.algebra, H, rib)
    L = links.parse_link_spec(args.link)
    cand = kirby.is_kirby(rib, z)
    if not cand.normalized and not args.force:
        raise evaluator.NotNormalizedKirby("z is not a normalized Kirby element (use --force to evaluate anyway)")
    tp, tm = cand.theta_values
    if tp.is_zero() or tm.is_zero():
        value = None
    else:
        value = evaluator.tau_manifold(L, rib, z, force=True)
    ld = links.linking_data(L)
    out = {
        "algebra": args.algebra,
        "z": z,
        "link": L.to_json(),
        "components": L.n_components,
        "linking_matrix": [list(r) for r in ld.matrix],
        "b_minus": ld.b_minus,
        "value": value,
    }
    if not cand.normalized:
        out["label"] = "not an invariant"
        out["tau_link"] = evaluator.tau_link(L, rib, z, check=False)
    return out, 0


def cmd_rt(args):
    H, rib = load_algebra(args.algebra)
    rib = _need_rib(rib)
    if not args.algebra.lower().startswith("cyclic"):
        raise UsageError("rt is available for cyclic algebras (modules = characters)")
    mods = examples.cyclic_characters(H.dim)
    L = links.parse_link_spec(args.link)
    rt = evaluator.rt_invariant(rib, mods, L)
    out = {"algebra": args.algebra, "link": L.to_json(), "rt": rt}
    if args.compare:
        out["tau_with_z_1"] = evaluator.tau_manifold(L, rib, H.one())
        out["agree"] = out["tau_with_z_1"] == rt
    return out, 0


def cmd_traces(args):
    H, rib = load_algebra(args.algebra)
    rib = _need_rib(rib)
    forms = kirby.traces_basis(rib)
    rep = kirby.traces_report(rib)
    return {"algebra": args.algebra, "count": len(forms), "forms": forms, "report": rep}, (0 if rep.ok else 1)


def cmd_fusion(args):
    data = parse_fusion(args.data)
    rep = fusion.verify_fusion(data)
    out = {"data": data.to_json(), "axioms": rep, "basis_identities": fusion.check_basis_identities(data)}
    if rep.ok:
        subsets = fusion.closed_subsets(data)
        rows = []
        for E in subsets:
            vec = fusion.subset_vector(data, [data.index(l) for l in E])
            dp, dm = fusion.delta_pm(data, E)
            rows.append({
                "subset": list(E),
                "necessary_conditions_passed": fusion.kirby_necessary(vec).ok,
                "delta_plus": dp,
                "delta_minus": dm,
            })
        out["closed_subsets"] = rows
    return out, (0 if rep.ok else 1)


def _batch_row(row: dict) -> dict:
    H, rib = load_algebra(row["algebra"])
    rib = _need_rib(rib)
    z = parse_z(str(row.get("z", "1")), row["algebra"], H, rib)
    L = links.parse_link_spec(row["link"]) if isinstance(row["link"], str) else links.parse_diagram(row["link"])
    value = evaluator.tau_manifold(L, rib, z, force=bool(row.get("force", False)))
    return {"value": value}


def cmd_batch(args):
    with open(args.manifest, encoding="utf-8") as fh:
        try:
            rows = json.load(fh)
        except json.JSONDecodeError as exc:
            raise KirbyLabError(f"manifest is not valid JSON: {exc}") from None
    if isinstance(rows, dict):
        rows = rows.get("rows", [])
    table = []
    failed = False
    for i, row in enumerate(rows):
        entry = {"row": i, "input": row}
        try:
            if not isinstance(row, dict) or "algebra" not in row or "link" not in row:
                raise UsageError("row needs 'algebra' and 'link'")
            entry.update(_batch_row(row))
            entry["status"] = "ok"
        except (KirbyLabError, UsageError, ValueError, KeyError, OSError) as exc:
            entry["status"] = "error"
            entry["error"] = f"{type(exc).__name__}: {exc}"
            failed = True
        table.append(entry)
    return {"rows": table}, (1 if failed else 0)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kirbylab", description="3-manifold invariants from ribbon Hopf algebras")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, algebra=True):
        if algebra:
            sp.add_argument("--algebra", required=True, help="hn:<n>[:s=..][:beta=..], cyclic:<N>[:q=k], sweedler, or @file.json")
        sp.add_argument("--format", choices=("json", "table"), default="json")
        sp.add_argument("--out", help="write the report here instead of stdout")

    sp = sub.add_parser("verify", help="check Hopf, quasitriangular and ribbon axioms")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("integrals", help="integrals and distinguished grouplikes")
    common(sp)
    sp.set_defaults(func=cmd_integrals)

    sp = sub.add_parser("kirby", help="Kirby-element membership")
    sp.add_argument("action", nargs="?", choices=("check", "subspaces"), default="check")
    common(sp)
    sp.add_argument("--z", help="zd:<d>, 1, slambda, lambda, premodular, basis:<name>, [coords] or @file")
    sp.set_defaults(func=cmd_kirby)

    sp = sub.add_parser("invariant", help="3-manifold invariant of a surgery diagram")
    common(sp)
    sp.add_argument("--z", required=True)
    sp.add_argument("--link", required=True, help="unknot:<f>, hopf:<f1>,<f2>, chain:<k>, trefoil, or @file")
    sp.add_argument("--force", action="store_true", help="evaluate even if z is not a normalized Kirby element")
    sp.set_defaults(func=cmd_invariant)

    sp = sub.add_parser("rt", help="Reshetikhin-Turaev invariant over a cyclic group algebra")
    common(sp)
    sp.add_argument("--link", required=True)
    sp.add_argument("--compare", action="store_true", help="also evaluate with z = 1")
    sp.set_defaults(func=cmd_rt)

    sp = sub.add_parser("traces", help="symmetric S-invariant trace forms")
    common(sp)
    sp.set_defaults(func=cmd_traces)

    sp = sub.add_parser("fusion", help="fusion-ring calculus")
    common(sp, algebra=False)
    sp.add_argument("--data", required=True, help="pointed:<N>[:quadratic], cyclic:<N>, trivial, or @file.json")
    sp.set_defaults(func=cmd_fusion)

    sp = sub.add_parser("batch", help="evaluate a manifest of (algebra, z, link) rows")
    sp.add_argument("manifest")
    sp.add_argument("--format", choices=("json", "table"), default="json")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_batch)
    return p


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result, code = args.func(args)
    except UsageError as exc:
        print(f"kirbylab: usage error: {exc}", file=sys.stderr)
        return 2
    except KirbyLabError as exc:
        print(f"kirbylab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    text = render(result, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())

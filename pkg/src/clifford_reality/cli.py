"""Command-line front end.

Every command builds a JSON report (``"schema": 1``); the text output is a
rendering of that same report.  The exit status is 0 exactly when every
check in the report passed, 1 when a check failed and 2 on an error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

import numpy as np

from . import linalg as la
from .algebra import Multivector, clifford, embed_vector
from .errors import (
    CliffordRealityError,
    ConfigInvalid,
    Degenerate,
    DimensionMismatch,
    NotInGammaPlus,
    NotRealOrUndecided,
    NotSymmetric,
)
from .fields import FieldSpec, make_field
from .groups import GroupElement, OrthMatrix, in_gamma, is_orthogonal, is_spin, lift_so, vector_rep
from .oracle import (
    DEFAULT_ORDER_CAP,
    centralizer_coset_decide,
    class_report,
    conjugate_by,
    enumerate_group,
    random_even_element,
    sample_strongly_regular,
)
from .quadratic import QSpace, load_space, parse_form, witt_decompose
from .suites import all_suites
from .torus import (
    TorusElement,
    blockwise_conjugator,
    eigen_split,
    expected_eps_mod8,
    involution_decompose,
    is_real_semisimple_spin,
    standard_conjugator,
    standard_sign,
    certify,
    NORM_INVERSE,
)

SCHEMA = 1


# configuration


def _read_json(text: str):
    """JSON given inline or as a path to a file."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        pass
    try:
        with open(text) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigInvalid(f"cannot read JSON from {text!r}: {exc}") from exc


def build_space(args) -> QSpace:
    try:
        if args.config:
            return load_space(_read_json(args.config))
        field = FieldSpec.parse(args.field)
        make_field(field)
        if args.gram:
            return load_space({"field": field.to_json(), "gram": _read_json(args.gram)})
        if args.form:
            return parse_form(args.form, field)
    except (ValueError, TypeError, ZeroDivisionError, DimensionMismatch, NotSymmetric, Degenerate) as exc:
        raise ConfigInvalid(f"invalid quadratic form: {type(exc).__name__}: {exc}") from exc
    raise ConfigInvalid("give --form, --gram or --config")


def parse_element(space: QSpace, obj) -> Multivector:
    """``{"torus": {...}}``, ``{"vectors": [...]}`` or ``{"multivector": [...]}``."""
    cctx = clifford(space)
    ctx = space.ctx
    try:
        if "torus" in obj:
            spec = obj["torus"]
            wb = witt_decompose(space)
            return TorusElement(ctx.parse(str(spec.get("lambda0", "1"))),
                                [ctx.parse(str(x)) for x in spec["lambdas"]], wb).multivector()
        if "vectors" in obj:
            out = cctx.one
            for v in obj["vectors"]:
                out = out * embed_vector(cctx, [ctx.parse(str(c)) for c in v])
            return out
        if "multivector" in obj:
            return cctx.from_json(obj["multivector"])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigInvalid(f"cannot parse element: {exc}") from exc
    raise ConfigInvalid("element needs one of 'torus', 'vectors', 'multivector'")


def _gamma_plus(t: Multivector) -> GroupElement:
    if not (t.is_even() and in_gamma(t)):
        raise NotInGammaPlus("element is not in the even Clifford group")
    return GroupElement(t, check=False)


def _element(args, space: QSpace) -> Multivector:
    if not args.input:
        raise ConfigInvalid("--input is required")
    return parse_element(space, _read_json(args.input))


def _check(name: str, passed: bool, **extra) -> dict:
    out = {"name": name, "passed": bool(passed)}
    out.update(extra)
    return out


def _space_json(space: QSpace) -> dict:
    return space.to_json()


# commands


def cmd_verify_identities(args, space: QSpace) -> dict:
    checks = [c.to_json() for c in all_suites(space, args.seed, args.samples)]
    return {"samples": args.samples, "checks": checks}


def _parse_list(text: str) -> List[str]:
    return [tok for tok in text.replace(" ", "").split(",") if tok]


def cmd_torus(args, space: QSpace) -> dict:
    ctx = space.ctx
    wb = witt_decompose(space)
    try:
        te = TorusElement(ctx.parse(args.lambda0), [ctx.parse(x) for x in _parse_list(args.lambdas)], wb)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigInvalid(f"bad torus parameters: {exc}") from exc
    t = te.element()
    fmt = ctx.fmt
    checks = [
        _check("chi_is_predicted_diagonal", la.mat_eq(t.chi.matrix, te.expected_chi())),
        _check("norm_is_lambda0_squared_times_product", t.norm == te.expected_norm),
        _check("in_gamma_plus", t.mv.is_even() and in_gamma(t.mv)),
    ]
    out = {
        "witt_index": wb.witt_index,
        "element": t.mv.to_json(),
        "norm": fmt(t.norm),
        "is_spin": is_spin(t.mv),
        "chi": t.chi.to_json(),
    }
    if wb.witt_index:
        cert = certify(t, standard_conjugator(wb), NORM_INVERSE, standard_sign(wb.witt_index))
        out["certificate"] = cert.to_json()
        checks += [_check(f"certificate_{k}", v) for k, v in sorted(cert.checks.items())]
    out["checks"] = checks
    return out


def cmd_conjugate(args, space: QSpace) -> dict:
    t = _gamma_plus(_element(args, space))
    cert = blockwise_conjugator(t)
    return {
        "element": t.mv.to_json(),
        "norm": space.ctx.fmt(t.norm),
        "certificate": cert.to_json(),
        "checks": [_check(k, v) for k, v in sorted(cert.checks.items())],
    }


def cmd_decompose(args, space: QSpace) -> dict:
    t = _element(args, space)
    decision = is_real_semisimple_spin(t)
    if not decision.is_real:
        raise NotRealOrUndecided(f"{decision.verdict}: {decision.reason}")
    pair = involution_decompose(t, decision.certificate)
    expected = expected_eps_mod8(space.dim)
    checks = [_check(k, v) for k, v in sorted(pair.checks.items())]
    checks.append(_check("mod8_sign", expected is None or pair.eps1 == expected, expected=expected))
    return {
        "element": t.to_json(),
        "decision": decision.to_json(),
        "decomposition": pair.to_json(),
        "dim_mod_8": space.dim % 8,
        "checks": checks,
    }


def cmd_enumerate(args, space: QSpace) -> dict:
    table = enumerate_group(space, args.group, cap=args.cap_order)
    report = class_report(table)
    body = report.to_json()
    body["checks"] = [
        _check("order_matches_prediction", table.order == table.predicted_order),
        _check("class_sizes_sum_to_order", report.sizes_sum_to_order()),
        _check("witnesses_verified", report.verify_witnesses()),
    ]
    return body


def _constructive_verdict(t: Multivector) -> str:
    try:
        return is_real_semisimple_spin(t).verdict
    except CliffordRealityError as exc:
        return f"undecided ({type(exc).__name__})"


def _reality_table(args, space: QSpace) -> dict:
    table = enumerate_group(space, "spin", cap=args.cap_order)
    report = class_report(table)
    rows = []
    agree = True
    for c in report.classes:
        if not c.is_semisimple:
            continue
        verdict = _constructive_verdict(table.mv(c.representative))
        if verdict in ("real", "not_real"):
            agree = agree and (verdict == "real") == c.is_real
        rows.append({"representative": table.mv(c.representative).to_json(), "size": c.size,
                     "order": c.order, "oracle_real": c.is_real, "constructive": verdict})
    checks = [
        _check("order_matches_prediction", table.order == table.predicted_order),
        _check("witnesses_verified", report.verify_witnesses()),
        _check("constructive_agrees_with_oracle", agree),
    ]
    if space.dim % 4 in (0, 1):
        checks.append(_check("every_semisimple_class_real", report.all_semisimple_real()))
    return {
        "mode": "enumeration",
        "order": table.order,
        "class_count": report.class_count,
        "semisimple_class_count": report.semisimple_class_count,
        "semisimple_real_count": report.semisimple_real_count,
        "semisimple_classes": rows,
        "checks": checks,
    }


def _reality_cosets(args, space: QSpace) -> dict:
    rng = np.random.default_rng(args.seed)
    rows = []
    agree = criterion = verified = True
    for _ in range(args.samples):
        t = conjugate_by(sample_strongly_regular(space, rng), random_even_element(space, rng))
        d = centralizer_coset_decide(t)
        verdict = _constructive_verdict(t)
        has_one = eigen_split(t).one.dim > 0
        agree = agree and verdict in ("real", "not_real") and (verdict == "real") == d.real
        criterion = criterion and d.real == has_one
        verified = verified and d.verified
        rows.append({"element": t.to_json(), "oracle_real": d.real, "constructive": verdict,
                     "one_is_eigenvalue": has_one, "strongly_regular": d.strongly_regular,
                     "coset_size": d.scanned})
    return {
        "mode": "coset",
        "samples": rows,
        "checks": [
            _check("constructive_agrees_with_oracle", agree),
            _check("real_iff_one_is_eigenvalue", criterion),
            _check("witnesses_verified", verified),
        ],
    }


def cmd_reality_report(args, space: QSpace) -> dict:
    if space.dim <= 5:
        return _reality_table(args, space)
    if space.dim == 6:
        return _reality_cosets(args, space)
    raise ConfigInvalid("reality-report covers dimensions up to 6")


def cmd_lift(args, space: QSpace) -> dict:
    ctx = space.ctx
    if not args.matrix:
        raise ConfigInvalid("--matrix is required")
    try:
        rows = [[ctx.parse(str(x)) for x in r] for r in _read_json(args.matrix)]
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigInvalid(f"bad matrix: {exc}") from exc
    if len(rows) != space.dim or any(len(r) != space.dim for r in rows) or not is_orthogonal(space, rows):
        raise ConfigInvalid("matrix is not an isometry of the form")
    m = OrthMatrix(space, rows, check=False)
    u = lift_so(m, clifford(space))
    return {
        "element": u.mv.to_json(),
        "norm": ctx.fmt(u.norm),
        "parity": u.parity,
        "checks": [_check("chi_round_trip", vector_rep(u) == m)],
    }


COMMANDS = {
    "verify-identities": cmd_verify_identities,
    "torus": cmd_torus,
    "conjugate": cmd_conjugate,
    "decompose": cmd_decompose,
    "enumerate": cmd_enumerate,
    "reality-report": cmd_reality_report,
    "lift": cmd_lift,
}


# output


def render_text(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    for k in sorted(report):
        v = report[k]
        if k in ("command", "checks", "schema") or isinstance(v, (dict, list)):
            continue
        lines.append(f"{k}: {v}")
    if "error" in report:
        lines.append(f"error: {report['error']['type']}: {report['error']['message']}")
    for c in report.get("checks", []):
        extra = "".join(f" {k}={c[k]}" for k in sorted(c) if k not in ("name", "passed"))
        lines.append(f"{'PASS' if c['passed'] else 'FAIL'} {c['name']}{extra}")
    if "all_passed" in report:
        lines.append(f"result: {'PASS' if report['all_passed'] else 'FAIL'}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="Q", help="Q or a prime such as 5 (default Q)")
    common.add_argument("--form", help="shorthand such as hyperbolic:2+anisotropic:[3]")
    common.add_argument("--gram", help="Gram matrix of the polar form, JSON inline or a file")
    common.add_argument("--config", help="JSON config {field, gram|form}, inline or a file")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap-order", type=int, default=DEFAULT_ORDER_CAP)
    common.add_argument("--out", help="also write the JSON report to this path")
    common.add_argument("--json", action="store_true", help="print JSON instead of text")

    parser = argparse.ArgumentParser(prog="clifford-reality", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("verify-identities", parents=[common])
    p.add_argument("--samples", type=int, default=20)
    p = sub.add_parser("torus", parents=[common])
    p.add_argument("--lambda0", default="1")
    p.add_argument("--lambdas", required=True, help="comma separated, one per hyperbolic pair")
    for name in ("conjugate", "decompose"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--input", help="element JSON, inline or a file")
    p = sub.add_parser("enumerate", parents=[common])
    p.add_argument("--group", choices=["spin", "gamma_plus", "gamma"], default="spin")
    p = sub.add_parser("reality-report", parents=[common])
    p.add_argument("--samples", type=int, default=10, help="coset-mode samples (dim 6)")
    p = sub.add_parser("lift", parents=[common])
    p.add_argument("--matrix", help="row-major matrix JSON, inline or a file")
    return parser


def run(argv: Optional[List[str]] = None):
    """``(exit_code, report, args)`` for the given arguments."""
    args = build_parser().parse_args(argv)
    report = {"schema": SCHEMA, "command": args.command}
    try:
        space = build_space(args)
        report["space"] = _space_json(space)
        report.update(COMMANDS[args.command](args, space))
    except CliffordRealityError as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        return 2, report, args
    report["all_passed"] = all(c["passed"] for c in report.get("checks", []))
    return (0 if report["all_passed"] else 1), report, args


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def main(argv: Optional[List[str]] = None) -> int:
    code, report, args = run(argv)
    text = dumps(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text if args.json else render_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
